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

// Seeded generators for terms, propositions and well-typed derivations, and
// the exhaustive enumeration of small Church derivations.

#ifndef MDM_CORPUS_HPP
#define MDM_CORPUS_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "mdm/rewriting.hpp"
#include "mdm/semantics.hpp"
#include "mdm/syntax.hpp"
#include "mdm/typing.hpp"

namespace mdm {

/// Random term over `vars` and the function symbols, of depth at most
/// `max_depth`. Falls back to a variable or a constant at depth 0.
Term random_term(const Signature& sig, const std::vector<std::string>& vars, std::size_t max_depth,
                 std::mt19937_64& rng);

/// Random proposition of connective depth at most `max_depth`. Quantifiers
/// bind names from `binders` (reuse is deliberate, to exercise shadowing);
/// atoms use those names and `free_vars`.
Prop random_prop(const Signature& sig, std::size_t max_depth, const std::vector<std::string>& binders,
                 const std::vector<std::string>& free_vars, std::mt19937_64& rng);

struct LsubSample {
  Prop prop;
  std::string var;
  Term term;
  Environment env;
};

/// Samples for the substitution lemma: propositions of depth at most
/// `max_depth`, a variable, a term over the universe closure and an
/// environment into the universe binding every variable involved.
std::vector<LsubSample> lsub_samples(const Signature& sig, const std::vector<Term>& universe, std::size_t count,
                                     std::size_t max_depth, std::uint64_t seed);

struct CorpusOptions {
  Style style = Style::Curry;
  std::size_t count = 50;
  std::size_t max_subject_size = 10;
  std::size_t max_depth = 6;       // derivation height
  std::size_t fuel = 200;          // congruence fuel for validation
  std::uint64_t seed = 0;
  bool require_redex = false;      // keep only derivations whose subject has a redex
};

/// Random well-typed derivations built rule by rule. Every returned
/// derivation checks Ok with `fuel`; candidates failing the check are
/// discarded and never returned. Conversion steps follow rewrite rules.
std::vector<Derivation> generate_corpus(const Theory& t, const CorpusOptions& opts);

struct ChurchEnumeration {
  std::size_t judgements = 0;        // distinct Γ ⊢ π : A reached
  std::size_t lambda_subjects = 0;   // judgements whose subject is λα.π
  std::size_t forall_typed_lambdas = 0;
  std::vector<Derivation> examples;  // a few λα.π proving a ∀-headed proposition
  bool complete = true;              // false when `max_judgements` was hit
};

/// Exhaustive enumeration of Church derivations with at most `depth` rule
/// applications above the axioms. Hypotheses (free or discharged) are drawn
/// from one declaration per seed proposition, contexts range over all subsets
/// of these declarations, quantifier instances over `terms` and quantifier
/// introductions over `x` and the free variables of the premise. Axioms and
/// introduction rules may conclude any one-step rewrite of their natural
/// conclusion; other side conditions are alpha-equality. For the empty
/// theory this covers every derivation in that space. Judgements are
/// deduplicated, since rule applicability depends on judgements only.
ChurchEnumeration enumerate_church_derivations(const Theory& t, const std::vector<Prop>& seeds,
                                               const std::vector<Term>& terms, std::size_t depth,
                                               std::size_t max_judgements = 2000000);

}  // namespace mdm

#endif  // MDM_CORPUS_HPP
