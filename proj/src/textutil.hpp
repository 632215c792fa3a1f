// Copyright 2026 The mdiqm Authors
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

#ifndef MDIQM_SRC_TEXTUTIL_HPP
#define MDIQM_SRC_TEXTUTIL_HPP

#include <charconv>
#include <cstdio>
#include <string>
#include <system_error>

namespace mdiqm {

/// Shortest round-trip decimal form of a double ("0.25", "1e-06").
/// Output is locale-independent and stable across runs, which keeps
/// emitted tables byte-identical for identical inputs.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace mdiqm

#endif  // MDIQM_SRC_TEXTUTIL_HPP
