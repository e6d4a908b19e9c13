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

#include <omp.h>

#include <cmath>
#include <cstring>
#include <random>

#include "doctest.h"
#include "podjudge/kernels.h"

namespace podjudge::kernels {
namespace {

Matrix Random(std::size_t rows, std::size_t dim, std::mt19937_64& gen) {
  std::normal_distribution<double> d;
  Matrix m{rows, dim, std::vector<double>(rows * dim)};
  for (double& x : m.data) x = d(gen);
  return m;
}

TEST_CASE("parallel cosines equal the serial ones bit for bit") {
  std::mt19937_64 gen(3);
  const auto q = Random(40, 96, gen);
  const auto items = Random(300, 96, gen);
  std::vector<std::size_t> qi;
  std::vector<std::size_t> ii;
  for (int k = 0; k < 5000; ++k) {
    qi.push_back(gen() % q.rows);
    ii.push_back(gen() % items.rows);
  }
  for (int threads : {1, 2, 4, 7}) {
    omp_set_num_threads(threads);
    const auto serial = PairCosinesSerial(q, items, qi, ii);
    const auto parallel = PairCosinesParallel(q, items, qi, ii);
    REQUIRE(serial.size() == parallel.size());
    CHECK(std::memcmp(serial.data(), parallel.data(), serial.size() * sizeof(double)) == 0);
  }
  omp_set_num_threads(MaxThreads());
}

TEST_CASE("parallel hash embedding equals serial") {
  std::vector<std::string> texts;
  std::mt19937_64 gen(5);
  const char* words[] = {"jazz", "chess", "Poetry", "true", "crime", "42", "caf\xc3\xa9"};
  for (int i = 0; i < 500; ++i) {
    std::string t;
    for (int w = 0; w < static_cast<int>(gen() % 12); ++w) t += std::string(words[gen() % 7]) + " ";
    texts.push_back(t);
  }
  for (int threads : {1, 3}) {
    omp_set_num_threads(threads);
    const auto a = HashEmbedSerial(texts, 128, 99);
    const auto b = HashEmbedParallel(texts, 128, 99);
    CHECK(a.rows == 500);
    CHECK(a.data == b.data);
  }
}

TEST_CASE("cosine against a long-double reference") {
  std::mt19937_64 gen(9);
  for (int k = 0; k < 200; ++k) {
    const auto m = Random(2, 17, gen);
    long double dot = 0, nu = 0, nv = 0;
    for (std::size_t i = 0; i < 17; ++i) {
      dot += static_cast<long double>(m.data[i]) * m.data[17 + i];
      nu += static_cast<long double>(m.data[i]) * m.data[i];
      nv += static_cast<long double>(m.data[17 + i]) * m.data[17 + i];
    }
    const double want = static_cast<double>(dot / std::sqrt(nu * nv));
    CHECK(CosineUnchecked(m.row(0), m.row(1)) == doctest::Approx(want).epsilon(1e-12));
  }
  const std::vector<double> u = {2, 0};
  const std::vector<double> v = {-3, 0};
  CHECK(CosineUnchecked(u, v) == -1.0);
  CHECK(CosineUnchecked(u, u) == 1.0);
}

}  // namespace
}  // namespace podjudge::kernels
