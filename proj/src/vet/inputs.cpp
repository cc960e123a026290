#include "guardrail/vet/inputs.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "guardrail/core/error.hpp"
#include "guardrail/core/paths.hpp"

namespace guardrail::vet {
namespace {

namespace fs = std::filesystem;

bool structured_key(std::string_view key) {
  return std::find(std::begin(kStructuredKeys), std::end(kStructuredKeys), key) != std::end(kStructuredKeys);
}

void walk(const YAML::Node& node, const std::string& path, std::vector<VetField>& out) {
  if (node.IsMap()) {
    for (const auto& kv : node) {
      if (!kv.first.IsScalar()) continue;
      auto key = kv.first.as<std::string>();
      auto child = path.empty() ? key : fmt::format("{}.{}", path, key);
      if (structured_key(key) && kv.second.IsScalar()) {
        out.push_back({child, kv.second.as<std::string>()});
      } else {
        walk(kv.second, child, out);
      }
    }
  } else if (node.IsSequence()) {
    for (std::size_t i = 0; i < node.size(); ++i) walk(node[i], fmt::format("{}[{}]", path, i), out);
  }
}

}  // namespace

std::vector<VetField> extract_fields(std::string_view content, const fs::path& path) {
  auto ext = path.extension();
  if (ext == ".yaml" || ext == ".yml") {
    try {
      std::vector<VetField> out;
      walk(YAML::Load(std::string(content)), "", out);
      if (!out.empty()) return out;
    } catch (const YAML::Exception&) {
      // not structured after all; vet as plain text
    }
  }
  return {VetField{"text", std::string(content)}};
}

VetInput read_input(const fs::path& path) {
  VetInput in;
  in.path = path.string();
  try {
    in.fields = extract_fields(read_file(path), path);
  } catch (const Error& e) {
    in.error = e.what();
  }
  return in;
}

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& paths) {
  std::vector<fs::path> out;
  for (const auto& p : paths) {
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      for (const auto& e : fs::recursive_directory_iterator(p, fs::directory_options::skip_permission_denied, ec)) {
        if (e.is_regular_file()) out.push_back(e.path().lexically_normal());
      }
    } else {
      out.push_back(p.lexically_normal());
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace guardrail::vet
