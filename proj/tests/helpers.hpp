// Copyright 2026 The MDM Authors.
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

#ifndef MDM_TESTS_HELPERS_HPP
#define MDM_TESTS_HELPERS_HPP

#include <string>

#include "mdm/rewriting.hpp"
#include "mdm/syntax.hpp"

namespace mdm::test {

inline std::string data(const std::string& name) { return std::string(MDM_DATA_DIR) + "/" + name; }

inline Theory theory(const std::string& name) { return load_theory(data(name + ".mdm")); }

inline Prop P(const std::string& text, const Signature* sig = nullptr) { return parse_prop(text, sig); }
inline Proof curry(const std::string& text) { return parse_proof(text, Style::Curry); }
inline Proof church(const std::string& text, const Signature* sig = nullptr) {
  return parse_proof(text, Style::Church, sig);
}

}  // namespace mdm::test

#endif  // MDM_TESTS_HELPERS_HPP
