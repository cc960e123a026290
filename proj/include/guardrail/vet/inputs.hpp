#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace guardrail::vet {

struct VetField {
  std::string name;  // "text", "answer", "seed_examples[0].context", ...
  std::string text;

  friend bool operator==(const VetField&, const VetField&) = default;
};

struct VetInput {
  std::string path;
  std::vector<VetField> fields;
  std::optional<std::string> error;  // set when the file could not be read
};

// Keys whose scalar values are vetted separately in structured files.
inline constexpr std::string_view kStructuredKeys[] = {"context", "question", "answer"};

/// Fields of a contribution file. YAML documents are walked recursively and
/// every scalar under a context / question / answer key becomes a field,
/// named by its path. Anything else (no such keys, not YAML, not a
/// .yaml/.yml file) is vetted whole as one "text" field.
std::vector<VetField> extract_fields(std::string_view content, const std::filesystem::path& path);

VetInput read_input(const std::filesystem::path& path);

// Files as given; directories expanded recursively (regular files only).
// Result is sorted and de-duplicated. Missing paths are kept so that they
// are reported as per-file errors.
std::vector<std::filesystem::path> expand_inputs(const std::vector<std::filesystem::path>& paths);

}  // namespace guardrail::vet
