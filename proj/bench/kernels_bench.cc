// Copyright 2026 The Podjudge Authors.
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

// Serial reference vs OpenMP kernels.

#include <benchmark/benchmark.h>

#include <random>

#include "podjudge/kernels.h"
#include "podjudge/util.h"

namespace {

using podjudge::kernels::Matrix;

Matrix RandomMatrix(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Matrix m{rows, dim, std::vector<double>(rows * dim)};
  for (auto& x : m.data) x = dist(gen);
  return m;
}

struct PairFixture {
  Matrix queries;
  Matrix items;
  std::vector<std::size_t> query_of;
  std::vector<std::size_t> item_of;
};

PairFixture MakePairs(std::size_t pairs) {
  PairFixture f{RandomMatrix(64, 256, 1), RandomMatrix(512, 256, 2), {}, {}};
  for (std::size_t i = 0; i < pairs; ++i) {
    f.query_of.push_back(i % f.queries.rows);
    f.item_of.push_back((i * 7919) % f.items.rows);
  }
  return f;
}

std::vector<std::string> MakeTexts(std::size_t n) {
  static const char* kWords[] = {"astronomy", "jazz",   "chess",  "tactics", "gardening",
                                 "economics", "poetry", "comedy", "cycling", "startups"};
  std::vector<std::string> texts;
  for (std::size_t i = 0; i < n; ++i) {
    std::string t;
    for (std::size_t w = 0; w < 60; ++w) {
      t += kWords[(i * 31 + w * 17) % 10];
      t += ' ';
    }
    texts.push_back(std::move(t));
  }
  return texts;
}

void BM_PairCosinesSerial(benchmark::State& state) {
  const auto f = MakePairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        podjudge::kernels::PairCosinesSerial(f.queries, f.items, f.query_of, f.item_of));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_PairCosinesParallel(benchmark::State& state) {
  const auto f = MakePairs(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        podjudge::kernels::PairCosinesParallel(f.queries, f.items, f.query_of, f.item_of));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_HashEmbedSerial(benchmark::State& state) {
  const auto texts = MakeTexts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(podjudge::kernels::HashEmbedSerial(texts, 256, 0xcbf29ce484222325ULL));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_HashEmbedParallel(benchmark::State& state) {
  const auto texts = MakeTexts(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        podjudge::kernels::HashEmbedParallel(texts, 256, 0xcbf29ce484222325ULL));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

BENCHMARK(BM_PairCosinesSerial)->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(BM_PairCosinesParallel)->Arg(1 << 10)->Arg(1 << 14);
BENCHMARK(BM_HashEmbedSerial)->Arg(256)->Arg(4096);
BENCHMARK(BM_HashEmbedParallel)->Arg(256)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
