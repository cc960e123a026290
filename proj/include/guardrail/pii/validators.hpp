#pragma once

#include <string_view>

namespace guardrail::pii {

using Validator = bool (*)(std::string_view surface);

// Luhn mod-10 check over the digits of `surface` (separators ignored);
// requires 12..19 digits.
bool luhn_valid(std::string_view surface);
// ddd-dd-dddd with area not 000/666/9xx, group not 00, serial not 0000.
bool ssn_valid(std::string_view surface);
// ISO 13616: move the first four characters to the end, map letters to
// 10..35, and require the number mod 97 == 1.
bool iban_valid(std::string_view surface);
// YYYY-MM-DD or M/D/YYYY naming a real calendar day in 1900..2100.
bool calendar_date_valid(std::string_view surface);
// dd-ddddddd whose two-digit prefix is an assigned IRS campus code.
bool ein_valid(std::string_view surface);

// Looks up a validator by its rule-pack name ("luhn", "ssn", "iban",
// "calendar_date", "ein"); nullptr when unknown.
Validator find_validator(std::string_view name);

}  // namespace guardrail::pii
