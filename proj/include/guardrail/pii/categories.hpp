#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "guardrail/core/types.hpp"

namespace guardrail::pii {

// Closed registry. health_identifier covers medical record numbers and
// health insurance ids.
enum class PiiType {
  PersonName,
  StreetAddress,
  DateOfBirth,
  PhoneNumber,
  EmailAddress,
  SocialMediaHandle,
  BankAccountNumber,
  CreditCardNumber,
  TaxId,
  Ssn,
  PassportNumber,
  DriversLicenseNumber,
  HealthIdentifier,
};

inline constexpr std::size_t kPiiTypeCount = 13;

const std::array<PiiType, kPiiTypeCount>& all_pii_types();
std::string_view tag(PiiType t);                    // "email_address"
std::optional<PiiType> parse_pii_type(std::string_view tag);
std::string category(PiiType t);                    // "pii.email_address"
std::optional<PiiType> pii_type_from_category(std::string_view category);
std::string placeholder(PiiType t);                 // "[EMAIL_ADDRESS]"

inline constexpr std::string_view kCategoryPrefix = "pii.";

struct ExtractionPair {
  std::string surface;
  PiiType pii_type = PiiType::PersonName;
  Span span;
  Sensitivity sensitivity = Sensitivity::Low;

  friend bool operator==(const ExtractionPair&, const ExtractionPair&) = default;
};

}  // namespace guardrail::pii
