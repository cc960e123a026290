#pragma once

#include <boost/regex.hpp>

namespace guardrail::pii {

struct CompiledPattern {
  boost::regex regex;
};

}  // namespace guardrail::pii
