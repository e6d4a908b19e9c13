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

#include "podjudge/kernels.h"

#include <omp.h>

#include <algorithm>
#include <cmath>

#include "podjudge/gateway.h"
#include "podjudge/util.h"

namespace podjudge::kernels {
namespace {

void EmbedInto(const std::string& text, std::size_t dim, std::uint64_t basis,
               std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& token : HashEmbedderTokens(text)) out[Fnv1a64(token, basis) % dim] += 1.0;
  double norm_sq = 0.0;
  for (double v : out) norm_sq += v * v;
  if (norm_sq == 0.0) {
    out[Fnv1a64("", basis) % dim] = 1.0;
    return;
  }
  const double norm = std::sqrt(norm_sq);
  for (double& v : out) v /= norm;
}

}  // namespace

double CosineUnchecked(std::span<const double> u, std::span<const double> v) {
  double dot = 0.0;
  double nu = 0.0;
  double nv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += u[i] * v[i];
    nu += u[i] * u[i];
    nv += v[i] * v[i];
  }
  const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

std::vector<double> PairCosinesSerial(const Matrix& queries, const Matrix& items,
                                      std::span<const std::size_t> query_of,
                                      std::span<const std::size_t> item_of) {
  std::vector<double> scores(query_of.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    scores[i] = CosineUnchecked(queries.row(query_of[i]), items.row(item_of[i]));
  }
  return scores;
}

std::vector<double> PairCosinesParallel(const Matrix& queries, const Matrix& items,
                                        std::span<const std::size_t> query_of,
                                        std::span<const std::size_t> item_of) {
  std::vector<double> scores(query_of.size());
  const auto n = static_cast<std::int64_t>(scores.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    scores[i] = CosineUnchecked(queries.row(query_of[i]), items.row(item_of[i]));
  }
  return scores;
}

Matrix HashEmbedSerial(std::span<const std::string> texts, std::size_t dim,
                       std::uint64_t basis) {
  Matrix m{texts.size(), dim, std::vector<double>(texts.size() * dim)};
  for (std::size_t i = 0; i < texts.size(); ++i) {
    EmbedInto(texts[i], dim, basis, {m.data.data() + i * dim, dim});
  }
  return m;
}

Matrix HashEmbedParallel(std::span<const std::string> texts, std::size_t dim,
                         std::uint64_t basis) {
  Matrix m{texts.size(), dim, std::vector<double>(texts.size() * dim)};
  const auto n = static_cast<std::int64_t>(texts.size());
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    EmbedInto(texts[i], dim, basis, {m.data.data() + i * dim, dim});
  }
  return m;
}

int MaxThreads() { return omp_get_max_threads(); }

}  // namespace podjudge::kernels
