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

// Hash-consed Curry proof-terms in de Bruijn form, and finite universes of
// them. Subterms may have loose indices, so replacing a subterm in place is
// substitution with capture.

#ifndef MDM_TERMBANK_HPP
#define MDM_TERMBANK_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mdm/reduction.hpp"
#include "mdm/syntax.hpp"

namespace mdm {

using TermId = std::uint32_t;

class TermBank {
 public:
  enum class Kind : std::uint8_t { Bound, Free, Lam, App };

  struct SN {
    enum class Kind : std::uint8_t { SN, Diverges, Unknown };
    Kind kind = Kind::Unknown;
    std::size_t max_length = 0;
    bool sn() const { return kind == Kind::SN; }
  };

  /// `sn_budget` bounds the number of new terms visited by one SN query and
  /// `sn_size_cap` the size of each of them.
  explicit TermBank(std::size_t sn_budget = 20000, std::size_t sn_size_cap = 400)
      : sn_budget_(sn_budget), sn_size_cap_(sn_size_cap) {}

  TermId bound(std::uint32_t index);
  TermId free(const std::string& name);
  TermId lam(TermId body);
  TermId app(TermId fun, TermId arg);

  Kind kind(TermId t) const { return nodes_[t].kind; }
  std::uint32_t index(TermId t) const { return nodes_[t].a; }
  const std::string& name(TermId t) const { return names_[nodes_[t].a]; }
  TermId body(TermId t) const { return nodes_[t].a; }
  TermId fun(TermId t) const { return nodes_[t].a; }
  TermId arg(TermId t) const { return nodes_[t].b; }
  std::size_t size(TermId t) const { return nodes_[t].size; }
  /// One more than the largest loose index, 0 for locally closed terms.
  std::uint32_t loose(TermId t) const { return nodes_[t].loose; }
  bool neutral(TermId t) const { return kind(t) != Kind::Lam; }
  std::size_t count() const { return nodes_.size(); }

  /// Curry terms only; throws std::invalid_argument otherwise.
  TermId from_proof(const Proof& p);
  /// Binders are named v0, v1, ... by depth (skipping free names). Throws
  /// std::invalid_argument on loose indices.
  Proof to_proof(TermId t) const;
  std::string show(TermId t) const;
  void free_names(TermId t, std::vector<std::string>& out) const;
  bool has_free(TermId t, const std::string& name) const;

  TermId shift(TermId t, int by, std::uint32_t cutoff = 0);
  /// Replaces index j by s, adjusting s under binders. No decrement.
  TermId subst(TermId t, std::uint32_t j, TermId s);
  /// (λ.b) a → b[a]
  TermId beta(TermId redex);

  TermId at(TermId t, const Path& path) const;
  TermId replace(TermId t, const Path& path, TermId by);

  /// One-step reducts, sorted and without duplicates.
  const std::vector<TermId>& reducts(TermId t);
  bool normal(TermId t) { return reducts(t).empty(); }

  /// Bounded maximal reduction length. Results that completed are cached;
  /// a query that exhausts the budget or meets an oversized term reports
  /// Unknown.
  SN sn(TermId t);

  /// Positions of neutral non-normal subterms, in pre-order.
  std::vector<Path> redex_positions(TermId t);

  struct Decomposition {
    std::vector<Path> positions;   // pairwise disjoint
    std::vector<TermId> instances; // every simultaneous one-step reduct
  };
  /// All ways of marking between 1 and n_max disjoint positions from
  /// `positions` and their reduct instances.
  std::vector<Decomposition> decompositions(TermId t, const std::vector<Path>& positions, std::size_t n_max);

 private:
  struct Node {
    Kind kind;
    std::uint32_t a = 0;
    std::uint32_t b = 0;
    std::uint32_t size = 1;
    std::uint32_t loose = 0;
  };
  TermId intern(Kind k, std::uint32_t a, std::uint32_t b);
  TermId from_proof(const Proof& p, std::vector<std::string>& binders);
  Proof to_proof(TermId t, std::vector<std::string>& binders, const std::vector<std::string>& avoid) const;
  SN sn_visit(TermId t, std::size_t& budget);
  void collect_positions(TermId t, Path& path, std::vector<Path>& out);

  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, TermId> index_;
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> name_index_;
  std::unordered_map<TermId, std::vector<TermId>> reducts_;
  enum class Mark : std::uint8_t { None, Active, Done, Diverges };
  std::vector<Mark> sn_mark_;
  std::vector<std::uint32_t> sn_len_;
  std::unordered_map<TermId, bool> sn_unknown_;  // roots whose query gave up
  std::size_t sn_budget_;
  std::size_t sn_size_cap_;
};

struct UniverseBounds {
  std::size_t max_size = 7;
  std::vector<std::string> vars;
};

/// Every locally closed term of size at most `max_size` whose free variables
/// come from `vars`, ordered by size then construction.
class Universe {
 public:
  Universe(TermBank& bank, UniverseBounds bounds);

  TermBank& bank() const { return *bank_; }
  const UniverseBounds& bounds() const { return bounds_; }
  const std::vector<TermId>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  std::optional<std::size_t> index_of(TermId t) const;
  bool contains(TermId t) const { return index_of(t).has_value(); }
  /// One-step reducts of members that fall outside the universe.
  std::size_t boundary_reducts() const { return boundary_reducts_; }
  /// Cached markings of the neutral non-normal subterms of a member.
  const std::vector<TermBank::Decomposition>& decompositions(std::size_t index, std::size_t n_max) const;

 private:
  TermBank* bank_;
  UniverseBounds bounds_;
  std::vector<TermId> members_;
  std::unordered_map<TermId, std::size_t> index_;
  std::size_t boundary_reducts_ = 0;
  mutable std::unordered_map<std::uint64_t, std::vector<TermBank::Decomposition>> decompositions_;
};

}  // namespace mdm

#endif  // MDM_TERMBANK_HPP
