#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "guardrail/orchestrator/orchestrator.hpp"
#include "guardrail/vet/report.hpp"

namespace guardrail::vet {

struct VetOptions {
  std::vector<std::string> policy_ids;  // empty: the orchestrator's defaults
  std::string jurisdiction = "default";
  Direction direction = Direction::Prompt;
  bool parallel = true;  // files are vetted concurrently (OpenMP)
};

/// Shields every field of every file. Unreadable files and fields the
/// orchestrator rejects become per-file errors; the rest are still vetted.
/// The report lists files in path order regardless of input order.
VetReport vet_files(const orchestrator::Orchestrator& orch, const std::vector<std::filesystem::path>& files,
                    const VetOptions& options = {});

}  // namespace guardrail::vet
