#include "guardrail/core/paths.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "guardrail/core/error.hpp"

namespace guardrail {

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("GUARDRAIL_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return GUARDRAIL_DATA_DIR;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoFailure, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::IoFailure, "cannot read " + path.string());
  return ss.str();
}

}  // namespace guardrail
