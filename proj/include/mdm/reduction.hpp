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

// Beta-reduction on proof-terms, reduction trees, bounded strong
// normalization verdicts, and subject reduction as a derivation transform.

#ifndef MDM_REDUCTION_HPP
#define MDM_REDUCTION_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "mdm/rewriting.hpp"
#include "mdm/syntax.hpp"
#include "mdm/typing.hpp"

namespace mdm {

/// Position of a subterm: 0 = body / function / term-application head,
/// 1 = argument of a proof application.
using Path = std::vector<int>;

std::string to_string(const Path& path);
Path parse_path(const std::string& text);

struct Redex {
  Path path;
  Proof reduct;
  bool term_beta = false;  // (λx.π) t rather than (λα.π) π′
};

/// One entry per redex position, leftmost-outermost first.
std::vector<Redex> beta_steps(const Proof& p);
std::vector<Proof> beta_reducts(const Proof& p);
bool is_normal(const Proof& p);

const Proof& subterm_at(const Proof& p, const Path& path);

struct ReductionTree {
  struct Node {
    Proof term;
    std::vector<std::size_t> children;
    std::optional<Path> redex;         // step from the parent
    std::optional<std::size_t> cycle;  // alpha-equal ancestor, node not expanded
    bool truncated = false;
  };
  std::vector<Node> nodes;  // nodes[0] is the root

  std::string to_dot() const;
};

/// Breadth-first materialization with at most `node_budget` nodes. Reducts
/// alpha-equal to an ancestor are recorded as cycle leaves.
ReductionTree reduction_tree(const Proof& p, std::size_t node_budget);

struct SNVerdict {
  enum class Kind { SN, Diverges, Unknown };
  Kind kind = Kind::Unknown;
  std::size_t max_length = 0;  // SN only
  std::size_t tree_size = 0;   // SN only, saturating
  std::vector<Proof> cycle;    // Diverges: p0 -> p1 -> ... -> p0
  std::size_t fuel_spent = 0;  // distinct alpha-classes expanded

  bool sn() const { return kind == Kind::SN; }
};

std::string to_string(SNVerdict::Kind kind);

/// Exact max reduction length and tree size when the reduction graph has at
/// most `node_budget` alpha-classes and no cycle; Diverges on a cycle.
SNVerdict sn_verdict(const Proof& p, std::size_t node_budget);

struct NormalizeResult {
  Proof term;
  std::size_t steps = 0;
  bool normal = false;
};

/// Leftmost-outermost reduction, at most `fuel` steps.
NormalizeResult normalize(const Proof& p, std::size_t fuel);

class ReductionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Subject reduction: a derivation of the reduct at `redex_path` with the same
/// context and proposition. Throws ReductionError when the path is not a redex
/// or when the derivation goes through a confusing congruence (an implication
/// used as a universal statement or the converse).
Derivation reduce_derivation(const Theory& t, const Derivation& d, const Path& redex_path, std::size_t fuel);

}  // namespace mdm

#endif  // MDM_REDUCTION_HPP
