// Copyright 2026 The Refresh Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "bench_data.hpp"
#include "refresh/rouge.hpp"

namespace {

void BM_MeanRougeReward(benchmark::State& state) {
  const auto doc = bench::random_document(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(refresh::rouge::mean_rouge_reward(doc.sentences, doc.highlights, {}));
  }
}
BENCHMARK(BM_MeanRougeReward)->Arg(1)->Arg(3)->Arg(10);

// Pre-normalised scorer, the path the candidate set uses.
void BM_DocumentScorer(benchmark::State& state) {
  const auto doc = bench::random_document(30, 2);
  const refresh::rouge::DocumentScorer scorer(doc, {});
  const std::vector<std::size_t> extract{0, 7, 19};
  for (auto _ : state) benchmark::DoNotOptimize(scorer.score(extract));
}
BENCHMARK(BM_DocumentScorer);

void BM_LcsLength(benchmark::State& state) {
  const auto doc = bench::random_document(2, 3, 20);
  const auto& a = doc.sentences[0].tokens;
  const auto& b = doc.sentences[1].tokens;
  for (auto _ : state) benchmark::DoNotOptimize(refresh::rouge::lcs_length(a, b));
}
BENCHMARK(BM_LcsLength);

}  // namespace
