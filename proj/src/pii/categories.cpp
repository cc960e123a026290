#include "guardrail/pii/categories.hpp"

#include "guardrail/core/tokenize.hpp"

namespace guardrail::pii {

const std::array<PiiType, kPiiTypeCount>& all_pii_types() {
  static const std::array<PiiType, kPiiTypeCount> kAll = {
      PiiType::PersonName,        PiiType::StreetAddress,     PiiType::DateOfBirth,
      PiiType::PhoneNumber,       PiiType::EmailAddress,      PiiType::SocialMediaHandle,
      PiiType::BankAccountNumber, PiiType::CreditCardNumber,  PiiType::TaxId,
      PiiType::Ssn,               PiiType::PassportNumber,    PiiType::DriversLicenseNumber,
      PiiType::HealthIdentifier,
  };
  return kAll;
}

std::string_view tag(PiiType t) {
  switch (t) {
    case PiiType::PersonName: return "person_name";
    case PiiType::StreetAddress: return "street_address";
    case PiiType::DateOfBirth: return "date_of_birth";
    case PiiType::PhoneNumber: return "phone_number";
    case PiiType::EmailAddress: return "email_address";
    case PiiType::SocialMediaHandle: return "social_media_handle";
    case PiiType::BankAccountNumber: return "bank_account_number";
    case PiiType::CreditCardNumber: return "credit_card_number";
    case PiiType::TaxId: return "tax_id";
    case PiiType::Ssn: return "ssn";
    case PiiType::PassportNumber: return "passport_number";
    case PiiType::DriversLicenseNumber: return "drivers_license_number";
    case PiiType::HealthIdentifier: return "health_identifier";
  }
  return "person_name";
}

std::optional<PiiType> parse_pii_type(std::string_view s) {
  for (auto t : all_pii_types()) {
    if (tag(t) == s) return t;
  }
  return std::nullopt;
}

std::string category(PiiType t) { return std::string(kCategoryPrefix) + std::string(tag(t)); }

std::optional<PiiType> pii_type_from_category(std::string_view c) {
  if (c.substr(0, kCategoryPrefix.size()) != kCategoryPrefix) return std::nullopt;
  return parse_pii_type(c.substr(kCategoryPrefix.size()));
}

std::string placeholder(PiiType t) { return "[" + ascii_upper(tag(t)) + "]"; }

}  // namespace guardrail::pii
