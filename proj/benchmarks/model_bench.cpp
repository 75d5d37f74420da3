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

#include <array>

#include "bench_data.hpp"
#include "refresh/model.hpp"

namespace {

refresh::ModelConfig bench_config() {
  refresh::ModelConfig c;
  c.embedding_dim = 50;
  c.kernel_widths = {1, 2, 3, 4};
  c.channels_per_kernel = 25;
  c.lstm_size = 100;
  c.max_sent_len = 50;
  c.max_doc_len = 30;
  return c;
}

struct Fixture {
  refresh::Document doc = bench::random_document(30, 5);
  refresh::Vocabulary vocab = refresh::build_vocabulary(std::vector<refresh::Document>{doc});
  refresh::RefreshModel model{bench_config(), vocab.size()};
  refresh::PaddedDocView view = model.pad(doc, vocab);
};

void BM_ExtractScores(benchmark::State& state) {
  Fixture f;
  for (auto _ : state) benchmark::DoNotOptimize(f.model.extract_scores(f.view));
}
BENCHMARK(BM_ExtractScores)->Unit(benchmark::kMillisecond);

void BM_ForwardBackward(benchmark::State& state) {
  Fixture f;
  std::vector<std::array<double, 2>> dlog(f.view.sentence_count, {0.0, -1.0});
  for (auto _ : state) {
    f.model.params().zero_grad();
    f.model.backward(f.model.forward(f.view), dlog);
  }
}
BENCHMARK(BM_ForwardBackward)->Unit(benchmark::kMillisecond);

}  // namespace
