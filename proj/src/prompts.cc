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

#include "podjudge/prompts.h"

#include <algorithm>

#include <fmt/format.h>

#include "podjudge/errors.h"
#include "podjudge/util.h"

namespace podjudge {

// Defined in the generated builtin_prompts.cc.
const std::map<std::string, std::string_view>& BuiltinPrompts();

PromptTemplate::PromptTemplate(std::string version, std::string text)
    : version_(std::move(version)), text_(std::move(text)) {}

std::vector<std::string> PromptTemplate::Placeholders() const {
  std::vector<std::string> names;
  std::size_t pos = 0;
  while ((pos = text_.find("{{", pos)) != std::string::npos) {
    const auto close = text_.find("}}", pos + 2);
    if (close == std::string::npos) break;
    std::string name = text_.substr(pos + 2, close - pos - 2);
    if (std::find(names.begin(), names.end(), name) == names.end()) {
      names.push_back(std::move(name));
    }
    pos = close + 2;
  }
  return names;
}

std::string PromptTemplate::Render(const std::map<std::string, std::string>& values) const {
  std::string out;
  out.reserve(text_.size() * 2);
  std::size_t pos = 0;
  while (true) {
    const auto open = text_.find("{{", pos);
    if (open == std::string::npos) break;
    const auto close = text_.find("}}", open + 2);
    if (close == std::string::npos) {
      throw ConfigError(fmt::format("template {} has an unterminated placeholder", version_));
    }
    out.append(text_, pos, open - pos);
    const std::string name = text_.substr(open + 2, close - open - 2);
    const auto it = values.find(name);
    if (it == values.end()) {
      throw ConfigError(fmt::format("template {} needs a value for {{{{{}}}}}", version_, name));
    }
    out += it->second;
    pos = close + 2;
  }
  out.append(text_, pos);
  return out;
}

PromptTemplate LoadTemplate(std::string_view version,
                            const std::optional<std::filesystem::path>& dir) {
  if (dir) {
    const auto path = *dir / (std::string(version) + ".txt");
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
      throw ConfigError(fmt::format("prompt template '{}' not found", path.string()));
    }
    return PromptTemplate(std::string(version), ReadFile(path));
  }
  const auto& builtin = BuiltinPrompts();
  const auto it = builtin.find(std::string(version));
  if (it == builtin.end()) {
    throw ConfigError(fmt::format("unknown prompt template version '{}'", version));
  }
  return PromptTemplate(std::string(version), std::string(it->second));
}

std::vector<std::string> BuiltinTemplateVersions() {
  std::vector<std::string> out;
  for (const auto& [name, text] : BuiltinPrompts()) out.push_back(name);
  return out;
}

std::optional<std::string> ExtractBlock(std::string_view text, std::string_view begin,
                                        std::string_view end) {
  std::string out;
  bool inside = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = text.substr(pos, nl - pos);
    const std::string_view trimmed = Trim(line);
    if (!inside) {
      if (trimmed == begin) inside = true;
    } else {
      if (trimmed == end) return out;
      out.append(line);
      out += '\n';
    }
    pos = nl + 1;
  }
  return std::nullopt;
}

}  // namespace podjudge
