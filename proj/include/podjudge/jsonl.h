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

#ifndef PODJUDGE_JSONL_H_
#define PODJUDGE_JSONL_H_

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "json.hpp"
#include "podjudge/errors.h"
#include "podjudge/util.h"

namespace podjudge {

// Strict reader: any bad line is a DataError naming file and line. Blank
// lines are skipped.
template <typename T>
std::vector<T> ReadJsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot read '{}'", path.string()));
  std::vector<T> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line).get<T>());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    } catch (const Error& e) {
      throw DataError(fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return out;
}

template <typename T>
std::string ToJsonl(std::span<const T> records) {
  std::string out;
  for (const auto& r : records) {
    out += nlohmann::json(r).dump();
    out += '\n';
  }
  return out;
}

template <typename T>
void WriteJsonl(const std::filesystem::path& path, std::span<const T> records) {
  WriteFileAtomic(path, ToJsonl(records));
}

template <typename T>
void WriteJsonl(const std::filesystem::path& path, const std::vector<T>& records) {
  WriteJsonl(path, std::span<const T>(records));
}

}  // namespace podjudge

#endif  // PODJUDGE_JSONL_H_
