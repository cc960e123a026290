// Serial reference vs OpenMP kernels on the generated fixtures.

#include <benchmark/benchmark.h>

#include "fixtures.hpp"
#include "guardrail/attribution/align.hpp"
#include "guardrail/attribution/index.hpp"
#include "guardrail/pii/extractor.hpp"

using namespace guardrail;

namespace {

const fixtures::AttributionCorpus& corpus() {
  static const auto c = fixtures::attribution_corpus(200, 5);
  return c;
}

std::vector<std::string> pii_texts(std::size_t n) {
  std::vector<std::string> out;
  for (const auto& s : fixtures::pii_fixture(n, 8)) out.push_back(s.text);
  return out;
}

template <bool Parallel>
void BM_IndexBuild(benchmark::State& state) {
  auto docs = corpus().docs;
  for (auto _ : state) {
    auto idx = Parallel ? attribution::CorpusIndex::build_parallel(docs, 5) : attribution::CorpusIndex::build(docs, 5);
    benchmark::DoNotOptimize(idx.shingle_count());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(docs.size()));
}

template <bool Parallel>
void BM_Align(benchmark::State& state) {
  static const auto idx = attribution::CorpusIndex::build(corpus().docs, 5);
  std::vector<std::uint64_t> query;
  for (const auto& t : idx.docs()[7].tokens) query.push_back(t.id);
  std::vector<attribution::AlignTask> tasks;
  for (std::uint32_t d = 0; d < idx.docs().size(); ++d) {
    const auto& doc = idx.docs()[d];
    tasks.push_back({d, doc.token_ids, 0, query.size(), 0, doc.token_ids.size()});
  }
  for (auto _ : state) {
    auto r = Parallel ? attribution::align_tasks_parallel(tasks, query) : attribution::align_tasks_serial(tasks, query);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(tasks.size()));
}

template <bool Parallel>
void BM_ExtractBatch(benchmark::State& state) {
  static const pii::Extractor ex;
  auto texts = pii_texts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    auto r = Parallel ? pii::extract_batch_parallel(ex, texts) : pii::extract_batch_serial(ex, texts);
    benchmark::DoNotOptimize(r.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_IndexBuild<false>)->Name("index_build/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IndexBuild<true>)->Name("index_build/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Align<false>)->Name("align/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Align<true>)->Name("align/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractBatch<false>)->Name("extract_batch/serial")->Arg(500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExtractBatch<true>)->Name("extract_batch/openmp")->Arg(500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
