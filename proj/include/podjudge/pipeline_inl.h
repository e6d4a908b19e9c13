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

#ifndef PODJUDGE_PIPELINE_INL_H_
#define PODJUDGE_PIPELINE_INL_H_

#include <fmt/format.h>

#include "podjudge/errors.h"

namespace podjudge {

template <typename Fn>
auto RunStage(std::string_view stage, Fn&& fn) -> decltype(fn()) {
  const auto msg = [&](const std::exception& e) { return fmt::format("{}: {}", stage, e.what()); };
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(msg(e));
  } catch (const UndefinedMetricError& e) {
    throw UndefinedMetricError(msg(e));
  } catch (const InsufficientHistoryError& e) {
    throw InsufficientHistoryError(msg(e));
  } catch (const DataError& e) {
    throw DataError(msg(e));
  } catch (const UnparseableResponseError& e) {
    throw UnparseableResponseError(msg(e), e.raw());
  } catch (const ProviderError& e) {
    throw ProviderError(msg(e));
  } catch (const TransportError& e) {
    throw TransportError(msg(e));
  } catch (const ArgumentError& e) {
    throw ArgumentError(msg(e));
  } catch (const Error& e) {
    throw Error(msg(e));
  }
}

}  // namespace podjudge

#endif  // PODJUDGE_PIPELINE_INL_H_
