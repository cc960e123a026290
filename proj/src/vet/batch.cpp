#include "guardrail/vet/batch.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "guardrail/core/error.hpp"
#include "guardrail/vet/inputs.hpp"

namespace guardrail::vet {
namespace {

FileReport vet_one(const orchestrator::Orchestrator& orch, const std::filesystem::path& path, const VetOptions& opt) {
  auto input = read_input(path);
  FileReport r;
  r.path = input.path;
  if (input.error) {
    r.error = input.error;
    return r;
  }
  for (const auto& field : input.fields) {
    // Blank fields have nothing to vet.
    if (field.text.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    ShieldRequest req;
    req.request_id = fmt::format("vet:{}#{}", input.path, field.name);
    req.text = field.text;
    req.direction = opt.direction;
    req.jurisdiction = opt.jurisdiction;
    req.policy_ids = opt.policy_ids;
    try {
      auto v = orch.shield(req);
      v.timings.clear();
      r.fields.push_back({field.name, std::move(v)});
    } catch (const Error& e) {
      r.error = fmt::format("{}: {}", field.name, e.what());
      r.fields.clear();
      return r;
    }
  }
  return r;
}

}  // namespace

VetReport vet_files(const orchestrator::Orchestrator& orch, const std::vector<std::filesystem::path>& files,
                    const VetOptions& options) {
  auto sorted = files;
  std::sort(sorted.begin(), sorted.end());
  VetReport report;
  report.files.resize(sorted.size());
  const auto n = static_cast<long>(sorted.size());
  if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) {
      auto idx = static_cast<std::size_t>(i);
      report.files[idx] = vet_one(orch, sorted[idx], options);
    }
  } else {
    for (std::size_t i = 0; i < sorted.size(); ++i) report.files[i] = vet_one(orch, sorted[i], options);
  }
  return report;
}

}  // namespace guardrail::vet
