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

// Typing contexts, explicit derivation trees and the kernel that checks them.
//
// A derivation records, at every node, the claimed judgement Γ ⊢ π : C and
// the witness needed to check the congruence side condition of its rule
// (the implication A => B of the implication rules, the quantified ∀x.A of
// the quantifier rules). The checker never searches; it only verifies.
//
// The transforms below (weaken, subst_derivation_proof, subst_derivation_term,
// erase_derivation) rebuild derivations bottom-up. Subjects of rebuilt nodes
// are always recomputed from their premises, so a rebuilt tree is consistent
// by construction and only the congruence side conditions need re-checking.

#ifndef MDM_TYPING_HPP
#define MDM_TYPING_HPP

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mdm/rewriting.hpp"
#include "mdm/syntax.hpp"

namespace mdm {

/// Ordered list of declarations with pairwise distinct names. Lookup and
/// comparison ignore order.
class Context {
 public:
  Context() = default;
  explicit Context(std::vector<std::pair<std::string, Prop>> entries);

  const std::vector<std::pair<std::string, Prop>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

  const Prop* lookup(const std::string& name) const;
  bool has(const std::string& name) const { return lookup(name) != nullptr; }

  /// Γ, a:A. An existing declaration of a is dropped (the new one shadows it).
  Context extend(const std::string& name, const Prop& prop) const;
  Context without(const std::string& name) const;

  std::set<std::string> names() const;
  std::set<std::string> free_term_vars() const;

  /// Every declaration of this context appears in `other` (alpha-equal type).
  bool subset_of(const Context& other) const;
  bool same_as(const Context& other) const { return subset_of(other) && other.subset_of(*this); }

  Context subst_term(const std::string& x, const Term& t) const;

 private:
  std::vector<std::pair<std::string, Prop>> entries_;
};

std::string to_string(const Context& ctx);
/// Parses "a:A, b:B => C" (splits at top-level commas).
Context parse_context(std::string_view text, const Signature* sig = nullptr);

enum class Rule { Axiom, ImpIntro, ImpElim, ForallIntro, ForallElim };

std::string_view to_string(Rule rule);
Rule parse_rule(std::string_view text);
std::size_t premise_count(Rule rule);

struct Derivation {
  Rule rule = Rule::Axiom;
  Style style = Style::Curry;
  Context ctx;
  Proof subject = Proof::var("_");
  Prop prop = Prop::atom("_");
  /// Axiom: the hypothesis used. ImpIntro: the discharged variable.
  std::string hyp;
  /// ImpIntro / ImpElim: A => B. ForallIntro / ForallElim: ∀x.A.
  std::optional<Prop> witness;
  /// ForallElim: the instantiating term.
  std::optional<Term> inst;
  std::vector<Derivation> premises;

  std::size_t node_count() const;
  std::size_t depth() const;
};

// Node constructors. Each computes the subject of the conclusion from its
// premises according to the style; nothing is checked here.
Derivation make_axiom(Style style, Context ctx, const std::string& hyp, Prop prop);
Derivation make_imp_intro(Context ctx, const std::string& hyp, Prop witness, Prop prop, Derivation premise);
Derivation make_imp_elim(Context ctx, Prop witness, Prop prop, Derivation fun, Derivation arg);
Derivation make_forall_intro(Context ctx, Prop witness, Prop prop, Derivation premise);
Derivation make_forall_elim(Context ctx, Prop witness, Term inst, Prop prop, Derivation premise);

struct SideCondition {
  std::string path;
  std::string what;
  CongruenceVerdict verdict;
};

struct CheckReport {
  bool ok = true;
  std::string path;    // failing node, "root" or "root.i.j"
  std::string reason;  // empty when ok
  std::vector<SideCondition> side_conditions;

  std::size_t total_fuel() const;
  std::size_t max_fuel() const;
};

/// Checks every node against its typing rule. Premises are checked before
/// their conclusion, left to right, so the first failure reported is the
/// leftmost-innermost one. `fuel` is the budget of each congruence query.
CheckReport check_derivation(const Theory& t, const Derivation& d, std::size_t fuel);

// ---------------------------------------------------------------------------
// Transforms

class TransformError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Same judgement in a larger context. Discharged variables that clash with
/// names of `g2` are renamed; quantifier eigenvariables free in `g2` are
/// renamed. Throws TransformError if d's context is not included in g2.
Derivation weaken(const Derivation& d, const Context& g2);

/// Cut of a hypothesis: from d in Γ₁,a:A,Γ₂ and darg proving π′ : A′ (A′ ≡ A)
/// builds a derivation of (π′/a)π in (Γ₁,Γ₂) ∪ Γ(darg). Throws TransformError
/// when `a` is not declared in d, when the two contexts disagree on a name,
/// or when `a` is free in the subject of darg.
Derivation subst_derivation_proof(const Derivation& d, const std::string& a, const Derivation& darg);

/// (t/x)Γ ⊢ π : (t/x)A, with the subject substituted in Church style only.
Derivation subst_derivation_term(const Derivation& d, const std::string& x, const Term& t);

/// Replaces the concluded proposition by a congruent one. For an ImpElim root
/// the witness A => B is re-targeted to A => C.
Derivation reconclude(const Derivation& d, const Prop& c);

/// Church to Curry: drops term abstractions and term applications.
Proof erase(const Proof& p);
Derivation erase_derivation(const Derivation& d);

/// From a Curry derivation of Γ ⊢ π : A => ∀x.B with x not free in Γ, A,
/// builds Γ ⊢ π : ∀x.(A => B). When the root discharges a hypothesis the
/// result uses only quantifier rules around the original premise (no
/// congruence needed); otherwise it falls back to a congruence step.
struct TransportResult {
  Derivation derivation;
  bool structural = false;
};
std::optional<TransportResult> confusion_transport(const Derivation& d);

/// Every term variable name occurring in the derivation (free or bound).
std::set<std::string> all_term_vars(const Derivation& d);
/// Every proof variable name occurring in the derivation.
std::set<std::string> all_proof_vars(const Derivation& d);

// ---------------------------------------------------------------------------
// Derivation files
//
//   (axiom       ctx:"a:A" subj:"a" prop:"A")
//   (imp-intro   ctx:"" subj:"\a. a" prop:"A => A" wit:"A => A" <premise>)
//   (imp-elim    ctx:"a:A" subj:"a a" prop:"A" wit:"A => A" <fun> <arg>)
//   (forall-intro ctx:"" prop:"!x. P(x) => P(x)" wit:"!x. P(x) => P(x)" <premise>)
//   (forall-elim ctx:"h:!x. P(x)" prop:"P(c)" wit:"!x. P(x)" term:"c" <premise>)
//
// Missing fields are filled in: subj from the premises, hyp from subj, wit
// from prop (or from the premise proposition for quantifier elimination).

Derivation parse_derivation(std::string_view text, Style style, const Signature* sig = nullptr);
Derivation load_derivation(const std::string& path, Style style, const Signature* sig = nullptr);
std::string to_drv(const Derivation& d);

}  // namespace mdm

#endif  // MDM_TYPING_HPP
