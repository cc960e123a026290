#pragma once

#include <filesystem>
#include <string>

namespace guardrail {

// Shipped data files (rule packs, lexicons, policies). The environment
// variable GUARDRAIL_DATA_DIR overrides the build-time location.
std::filesystem::path data_dir();

std::string read_file(const std::filesystem::path& path);

}  // namespace guardrail
