#include "guardrail/pii/validators.hpp"

#include <array>
#include <cctype>
#include <string>

namespace guardrail::pii {
namespace {

std::string digits_of(std::string_view s) {
  std::string d;
  for (char c : s) {
    if (c >= '0' && c <= '9') d.push_back(c);
  }
  return d;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

int to_int(std::string_view s) {
  int v = 0;
  for (char c : s) v = v * 10 + (c - '0');
  return v;
}

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

bool real_day(int y, int m, int d) {
  static constexpr std::array<int, 12> kDays = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (y < 1900 || y > 2100 || m < 1 || m > 12 || d < 1) return false;
  int max_day = kDays[static_cast<std::size_t>(m - 1)] + ((m == 2 && leap(y)) ? 1 : 0);
  return d <= max_day;
}

}  // namespace

bool luhn_valid(std::string_view surface) {
  auto digits = digits_of(surface);
  if (digits.size() < 12 || digits.size() > 19) return false;
  int sum = 0;
  bool twice = false;
  for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
    int v = *it - '0';
    if (twice) {
      v *= 2;
      if (v > 9) v -= 9;
    }
    sum += v;
    twice = !twice;
  }
  return sum % 10 == 0;
}

bool ssn_valid(std::string_view s) {
  if (s.size() != 11 || s[3] != '-' || s[6] != '-') return false;
  auto area = s.substr(0, 3), group = s.substr(4, 2), serial = s.substr(7, 4);
  if (!all_digits(area) || !all_digits(group) || !all_digits(serial)) return false;
  int a = to_int(area);
  return a != 0 && a != 666 && a < 900 && to_int(group) != 0 && to_int(serial) != 0;
}

bool iban_valid(std::string_view s) {
  std::string compact;
  for (char c : s) {
    if (c == ' ') continue;
    compact.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  if (compact.size() < 15 || compact.size() > 34) return false;
  if (!std::isalpha(static_cast<unsigned char>(compact[0])) ||
      !std::isalpha(static_cast<unsigned char>(compact[1])) ||
      !std::isdigit(static_cast<unsigned char>(compact[2])) ||
      !std::isdigit(static_cast<unsigned char>(compact[3]))) {
    return false;
  }
  std::string rotated = compact.substr(4) + compact.substr(0, 4);
  int rem = 0;
  for (char c : rotated) {
    if (std::isdigit(static_cast<unsigned char>(c))) {
      rem = (rem * 10 + (c - '0')) % 97;
    } else if (c >= 'A' && c <= 'Z') {
      int v = c - 'A' + 10;
      rem = (rem * 100 + v) % 97;
    } else {
      return false;
    }
  }
  return rem == 1;
}

bool calendar_date_valid(std::string_view s) {
  if (s.size() == 10 && s[4] == '-' && s[7] == '-') {
    auto y = s.substr(0, 4), m = s.substr(5, 2), d = s.substr(8, 2);
    if (!all_digits(y) || !all_digits(m) || !all_digits(d)) return false;
    return real_day(to_int(y), to_int(m), to_int(d));
  }
  auto p1 = s.find('/');
  auto p2 = p1 == std::string_view::npos ? p1 : s.find('/', p1 + 1);
  if (p2 == std::string_view::npos) return false;
  auto m = s.substr(0, p1), d = s.substr(p1 + 1, p2 - p1 - 1), y = s.substr(p2 + 1);
  if (m.empty() || m.size() > 2 || d.empty() || d.size() > 2 || y.size() != 4) return false;
  if (!all_digits(m) || !all_digits(d) || !all_digits(y)) return false;
  return real_day(to_int(y), to_int(m), to_int(d));
}

bool ein_valid(std::string_view s) {
  if (s.size() != 10 || s[2] != '-') return false;
  if (!all_digits(s.substr(0, 2)) || !all_digits(s.substr(3))) return false;
  int p = to_int(s.substr(0, 2));
  // Prefixes never assigned by the IRS.
  static constexpr std::array<int, 17> kUnassigned = {0,  7,  8,  9,  17, 18, 19, 28, 29,
                                                      49, 69, 70, 78, 79, 89, 96, 97};
  for (int u : kUnassigned) {
    if (p == u) return false;
  }
  return true;
}

Validator find_validator(std::string_view name) {
  if (name == "luhn") return &luhn_valid;
  if (name == "ssn") return &ssn_valid;
  if (name == "iban") return &iban_valid;
  if (name == "calendar_date") return &calendar_date_valid;
  if (name == "ein") return &ein_valid;
  return nullptr;
}

}  // namespace guardrail::pii
