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

// Rewrite rules and the congruence they generate.
//
// The congruence is never decided by normalization (rules such as
// A --> A => A do not terminate); it is explored by bounded bidirectional
// breadth-first search over single rewrite steps taken in either direction.

#ifndef MDM_REWRITING_HPP
#define MDM_REWRITING_HPP

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mdm/syntax.hpp"

namespace mdm {

struct RewriteRule {
  Prop lhs;
  Prop rhs;
  bool oriented = false;
};

/// Rewrite rule between terms. The left-hand side is never a variable.
struct TermRule {
  Term lhs;
  Term rhs;
  bool oriented = false;
};

struct Theory {
  Signature sig;
  std::vector<RewriteRule> rules;
  std::vector<TermRule> term_rules;
  std::string name;
};

class TheoryError : public std::runtime_error {
 public:
  TheoryError(const std::string& message, std::size_t line);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Parses the line-oriented .mdm format:
///   pred P/0.   fun f/1.   rule <lhs> <-> <rhs>.   rule <lhs> --> <rhs>.
/// `#` starts a comment. Rules whose head symbol is a function are term rules.
Theory parse_theory(std::string_view text, std::string name = "theory");
Theory load_theory(const std::string& path);

/// Throws TheoryError on ill-formed rules (free variables of the right-hand
/// side not in the left-hand side, variable left-hand side, bad arities).
void validate_theory(const Theory& t);

/// All one-step rewrites of p (both rule directions, every position), without
/// duplicates modulo alpha, sorted by alpha key.
std::vector<Prop> rewrite_neighbors(const Theory& t, const Prop& p);

struct CongruenceVerdict {
  enum class Kind { Yes, No, Unknown };
  Kind kind = Kind::Unknown;
  std::size_t path_length = 0;  // Yes only
  std::size_t fuel_spent = 0;
  /// True when a size cap pruned part of the search; a No is then only
  /// relative to that cap.
  bool capped = false;

  bool yes() const { return kind == Kind::Yes; }
  bool no() const { return kind == Kind::No; }
  bool unknown() const { return kind == Kind::Unknown; }
};

std::string_view to_string(CongruenceVerdict::Kind kind);

struct CongruenceOptions {
  std::size_t fuel = 10000;
  /// Propositions larger than this are not explored. When pruning happens a
  /// saturated search reports Unknown unless `cap_is_exhaustive` is set.
  std::optional<std::size_t> size_cap;
  bool cap_is_exhaustive = false;
};

/// Bidirectional breadth-first closure from both sides. Fuel counts node
/// expansions; Yes(0) for alpha-equal inputs regardless of fuel.
CongruenceVerdict congruent(const Theory& t, const Prop& a, const Prop& b, std::size_t fuel);
CongruenceVerdict congruent(const Theory& t, const Prop& a, const Prop& b, const CongruenceOptions& opts);

/// Memoizing wrapper for repeated congruence queries against one theory.
class Congruence {
 public:
  Congruence(const Theory& t, std::size_t fuel) : theory_(&t), fuel_(fuel) {}
  CongruenceVerdict operator()(const Prop& a, const Prop& b);
  const Theory& theory() const { return *theory_; }
  std::size_t fuel() const { return fuel_; }

 private:
  const Theory* theory_;
  std::size_t fuel_;
  std::unordered_map<std::string, CongruenceVerdict> memo_;
};

/// Explores the congruence class of p up to `size_cap` and returns the
/// members found (sorted by alpha key). `complete` reports saturation.
std::vector<Prop> congruence_class(const Theory& t, const Prop& p, std::size_t size_cap,
                                   std::size_t fuel, bool* complete = nullptr);

struct ConfusionReport {
  CongruenceVerdict verdict;
  std::optional<Prop> imp_witness;
  std::optional<Prop> forall_witness;
  std::size_t enumerated = 0;
  std::size_t size_cap = 0;
};

/// Searches for an implication congruent to a universal proposition among
/// propositions over the signature (term variables x, y) of size at most
/// size_bound; classes are explored up to size_bound + 2.
ConfusionReport detect_confusion(const Theory& t, std::size_t size_bound, std::size_t fuel);

/// Enumerates propositions of size at most `max_size` over the signature,
/// with terms of size at most `max_term_size` built from `term_vars`.
std::vector<Prop> enumerate_props(const Signature& sig, std::size_t max_size,
                                  const std::vector<std::string>& term_vars,
                                  std::size_t max_term_size = 1);

/// Ground and open terms of size at most `max_size` over the function symbols
/// and the given variables.
std::vector<Term> enumerate_terms(const Signature& sig, std::size_t max_size,
                                  const std::vector<std::string>& vars);

}  // namespace mdm

#endif  // MDM_REWRITING_HPP
