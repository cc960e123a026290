// vet: run the guardrail service, batch-vet files, build indexes and
// lexicons, validate policies.
//
// Exit codes: 0 clean, 1 violations (MASK/BLOCK) or invalid policy,
// 2 usage or operational failure.

#include <atomic>
#include <csignal>
#include <fstream>
#include <cstdio>
#include <iostream>
#include <pthread.h>
#include <time.h>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "guardrail/attribution/index.hpp"
#include "guardrail/classify/lexicon.hpp"
#include "guardrail/core/error.hpp"
#include "guardrail/core/paths.hpp"
#include "guardrail/orchestrator/server.hpp"
#include "guardrail/policy/loader.hpp"
#include "guardrail/store/store.hpp"
#include "guardrail/vet/batch.hpp"
#include "guardrail/vet/inputs.hpp"

namespace fs = std::filesystem;
using namespace guardrail;

namespace {

constexpr int kExitUsage = 2;

void write_output(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoFailure, "cannot write " + path);
  out << text;
}

fs::path resolve_config(const std::string& flag) {
  if (!flag.empty()) return flag;
  return orchestrator::config_path(data_dir() / "config" / "default.yaml");
}

// Persist uploaded policies next to the loaded ones, or in the store.
policy::PolicyRegistry::Persist policy_persister(const orchestrator::ServiceConfig& cfg,
                                                 std::shared_ptr<store::Store> st) {
  if (st) {
    return [st](const std::string& id, const std::string* doc) {
      if (doc != nullptr) {
        st->put(store::ArtifactKind::Policy, id + ".yaml", *doc);
      } else if (st->contains(store::ArtifactKind::Policy, id + ".yaml")) {
        st->remove(store::ArtifactKind::Policy, id + ".yaml");
      }
    };
  }
  return [dir = cfg.policies_dir](const std::string& id, const std::string* doc) {
    auto path = dir / (id + ".yaml");
    if (doc == nullptr) {
      std::error_code ec;
      fs::remove(path, ec);
      return;
    }
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream out(tmp, std::ios::binary);
      if (!(out << *doc)) throw Error(ErrorCode::IoFailure, "cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
  };
}

int cmd_serve(const std::string& config_flag) {
  auto path = resolve_config(config_flag);
  auto cfg = orchestrator::load_config(path);
  orchestrator::apply_env_overrides(cfg);

  std::shared_ptr<store::Store> st;
  if (!cfg.store.empty()) st = std::make_shared<store::Store>(store::Store::open(cfg.store));

  // Block termination signals in every thread; a dedicated thread waits.
  sigset_t sigs;
  sigemptyset(&sigs);
  sigaddset(&sigs, SIGINT);
  sigaddset(&sigs, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &sigs, nullptr);

  auto orch = orchestrator::build_orchestrator(cfg, policy_persister(cfg, st));
  if (st) {
    // Policies uploaded earlier live in the store and override shipped ones.
    for (const auto& name : st->list(store::ArtifactKind::Policy)) {
      auto id = fs::path(name).stem().string();
      orch->policies().put(id, st->get(store::ArtifactKind::Policy, name));
    }
  }
  orchestrator::Server server(orch, cfg.workers.orchestrator_threads);
  server.bind(cfg.listen);
  fmt::print(stderr, "vet: listening on {}:{} ({} detectors, policies: {})\n", server.host(), server.port(),
             orch->detectors()->size(), fmt::join(orch->policies().snapshot()->ids(), ", "));

  std::atomic<bool> done{false};
  std::thread waiter([&] {
    const timespec tick{0, 200'000'000};
    while (!done.load()) {
      int sig = sigtimedwait(&sigs, nullptr, &tick);
      if (sig > 0) {
        fmt::print(stderr, "vet: signal {}, draining\n", sig);
        server.stop();
        return;
      }
    }
  });
  server.run();
  done = true;
  waiter.join();
  return 0;
}

struct CheckArgs {
  std::vector<std::string> inputs;
  std::vector<std::string> policies;
  std::string format = "text";
  std::string config;
  std::string jurisdiction = "default";
  std::string direction = "prompt";
  std::string output;
  bool serial = false;
};

int cmd_check(const CheckArgs& a) {
  auto cfg = orchestrator::load_config(resolve_config(a.config));
  auto orch = orchestrator::build_orchestrator(cfg);
  std::vector<fs::path> paths(a.inputs.begin(), a.inputs.end());
  vet::VetOptions opt;
  opt.policy_ids = a.policies;
  opt.jurisdiction = a.jurisdiction;
  opt.direction = *parse_direction(a.direction);
  opt.parallel = !a.serial;
  auto report = vet::vet_files(*orch, vet::expand_inputs(paths), opt);

  if (a.format == "json") {
    write_output(vet::to_json(report).dump(2) + "\n", a.output);
  } else if (a.format == "annotations") {
    write_output(vet::annotations_json(report).dump(2) + "\n", a.output);
  } else {
    write_output(vet::render_text(report), a.output);
  }
  return static_cast<int>(report.exit_code());
}

int cmd_index(const std::string& corpus, int k, const std::string& store_root, const std::string& name,
              const std::string& output) {
  std::error_code ec;
  auto docs = fs::is_directory(corpus, ec) ? attribution::load_corpus_dir(corpus)
                                           : attribution::load_corpus_records(corpus);
  auto index = attribution::CorpusIndex::build_parallel(std::move(docs), k);
  auto bytes = index.serialize();
  if (!output.empty()) write_output(bytes, output);
  if (!store_root.empty()) {
    auto st = store::Store::open(store_root);
    st.put(store::ArtifactKind::Index, name, bytes);
    for (const auto& d : index.docs()) st.put(store::ArtifactKind::Corpus, d.doc_id, d.text);
  }
  fmt::print("indexed {} documents, {} shingles ({} distinct), k={}\n", index.docs().size(), index.shingle_count(),
             index.distinct_shingles(), index.k());
  return 0;
}

int cmd_train_lexicon(const std::string& labeled, const std::string& category, int top_n, double threshold,
                      const std::string& output, const std::string& store_root) {
  auto docs = classify::parse_labeled_tsv(read_file(labeled));
  auto lex = classify::build_lexicon(docs, category, top_n, threshold);
  auto text = classify::dump_lexicon(lex);
  if (!store_root.empty()) {
    auto st = store::Store::open(store_root);
    st.put(store::ArtifactKind::Lexicon, category + ".yaml", text);
  }
  if (!output.empty()) {
    write_output(text, output);
    fmt::print("wrote {} terms to {}\n", lex.keywords.size(), output);
  } else {
    std::cout << text;
  }
  return 0;
}

int cmd_policy_validate(const std::vector<std::string>& files) {
  int rc = 0;
  for (const auto& f : files) {
    try {
      auto t = policy::load_policy_file(f);
      fmt::print("{}: ok, policy {} ({} rules, default {})\n", f, t.policy_id, t.rules.size(),
                 to_string(t.default_action));
    } catch (const Error& e) {
      fmt::print(stderr, "{}\n", e.what());
      rc = 1;
    }
  }
  return rc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guardrail gateway: shield service and batch vetting"};
  app.require_subcommand(1);

  std::string serve_config;
  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  serve->add_option("--config", serve_config, "Service config file (or GUARDRAIL_CONFIG)");

  CheckArgs check;
  auto* vet_cmd = app.add_subcommand("check", "Vet files; exit 1 when any field is masked or blocked");
  vet_cmd->alias("vet");
  vet_cmd->add_option("--input,inputs", check.inputs, "Files or directories")->required();
  vet_cmd->add_option("--policy", check.policies, "Policy id (repeatable; default from config)");
  vet_cmd->add_option("--format", check.format, "text | json | annotations")
      ->check(CLI::IsMember({"text", "json", "annotations"}));
  vet_cmd->add_option("--config", check.config, "Service config file");
  vet_cmd->add_option("--jurisdiction", check.jurisdiction, "Jurisdiction tag");
  vet_cmd->add_option("--direction", check.direction, "prompt | response")
      ->check(CLI::IsMember({"prompt", "response"}));
  vet_cmd->add_option("--output,-o", check.output, "Write the report here instead of stdout");
  vet_cmd->add_flag("--serial", check.serial, "Vet files one at a time");

  std::string corpus, index_store, index_name = "corpus.grix", index_out;
  int k = attribution::kDefaultShingleWidth;
  auto* index = app.add_subcommand("index", "Build a shingle index over a corpus");
  index->add_option("--corpus", corpus, "Directory of text files or JSONL records")->required();
  index->add_option("--k", k, "Shingle width in words")->check(CLI::Range(2, 64));
  index->add_option("--store", index_store, "Data store root to write the index into");
  index->add_option("--name", index_name, "Index artifact name in the store");
  index->add_option("--output,-o", index_out, "Also write the index file here");

  std::string labeled, category, lex_out, lex_store;
  int top_n = 20;
  double threshold = classify::kDefaultThreshold;
  auto* train = app.add_subcommand("train-lexicon", "Build a keyword lexicon from labeled text");
  train->add_option("--labeled", labeled, "TSV: positive|negative <tab> text")->required();
  train->add_option("--category", category, "Category name")->required();
  train->add_option("--top-n", top_n, "Number of terms")->check(CLI::PositiveNumber);
  train->add_option("--threshold", threshold, "Decision threshold stored in the lexicon");
  train->add_option("--output,-o", lex_out, "Lexicon file to write");
  train->add_option("--store", lex_store, "Data store root to write the lexicon into");

  std::vector<std::string> policy_files;
  auto* validate = app.add_subcommand("policy-validate", "Check policy files");
  validate->add_option("--file,files", policy_files, "Policy files")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*serve) return cmd_serve(serve_config);
    if (*vet_cmd) return cmd_check(check);
    if (*index) {
      if (index_store.empty() && index_out.empty()) {
        std::cerr << "index: give --store and/or --output\n";
        return kExitUsage;
      }
      return cmd_index(corpus, k, index_store, index_name, index_out);
    }
    if (*train) return cmd_train_lexicon(labeled, category, top_n, threshold, lex_out, lex_store);
    if (*validate) return cmd_policy_validate(policy_files);
  } catch (const Error& e) {
    std::cerr << "vet: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "vet: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
