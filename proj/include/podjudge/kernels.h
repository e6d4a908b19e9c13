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

// Data-parallel scoring kernels. Each kernel has a serial reference
// implementation and an OpenMP one; the two must agree bit-for-bit because
// every output element is computed by the same per-element expression.

#ifndef PODJUDGE_KERNELS_H_
#define PODJUDGE_KERNELS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace podjudge::kernels {

// Row-major matrix of `rows` x `dim` doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t dim = 0;
  std::vector<double> data;

  std::span<const double> row(std::size_t i) const {
    return {data.data() + i * dim, dim};
  }
};

// Cosine of two equal-length vectors; 0 norm or mismatched length is the
// caller's problem (checked in baseline::Cosine).
double CosineUnchecked(std::span<const double> u, std::span<const double> v);

// scores[i] = cosine(queries.row(query_of[i]), items.row(item_of[i])).
std::vector<double> PairCosinesSerial(const Matrix& queries, const Matrix& items,
                                      std::span<const std::size_t> query_of,
                                      std::span<const std::size_t> item_of);
std::vector<double> PairCosinesParallel(const Matrix& queries, const Matrix& items,
                                        std::span<const std::size_t> query_of,
                                        std::span<const std::size_t> item_of);

// Hash-embeds each text (see HashEmbedder) into one row.
Matrix HashEmbedSerial(std::span<const std::string> texts, std::size_t dim,
                       std::uint64_t basis);
Matrix HashEmbedParallel(std::span<const std::string> texts, std::size_t dim,
                         std::uint64_t basis);

// Number of OpenMP threads a parallel region would use.
int MaxThreads();

}  // namespace podjudge::kernels

#endif  // PODJUDGE_KERNELS_H_
