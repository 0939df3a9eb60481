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

// Pre-Heyting algebras, algebra-valued structures and the two ways of
// building models: by induction on propositions, or as a table checked
// against the connectives, substitution and the congruence.
//
// The term model is always the set of terms of the signature. It is
// approximated by a finite list of closed terms over which every universal
// quantifier ranges.

#ifndef MDM_SEMANTICS_HPP
#define MDM_SEMANTICS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdm/rewriting.hpp"
#include "mdm/syntax.hpp"

namespace mdm {

/// Opaque algebra element. Its meaning is fixed by the algebra.
using Element = std::uint64_t;

class PreHeytingAlgebra {
 public:
  virtual ~PreHeytingAlgebra() = default;

  virtual std::vector<Element> domain() const = 0;
  virtual bool leq(Element a, Element b) const = 0;
  virtual Element imp(Element a, Element b) const = 0;
  /// Membership of a family in the admissible family of subsets.
  virtual bool admissible(const std::set<Element>& family) const = 0;
  /// Greatest lower bound. Throws std::domain_error when the family is not
  /// admissible.
  virtual Element glb(const std::set<Element>& family) const = 0;
  virtual std::string show(Element a) const { return std::to_string(a); }

  /// Pointwise a ⇒̃ S.
  std::set<Element> imp_family(Element a, const std::set<Element>& family) const;
  bool equivalent(Element a, Element b) const { return leq(a, b) && leq(b, a); }
};

/// Subsets of an n-element base as bitmasks, ordered by inclusion, with
/// a ⇒̃ b = complement(a) ∪ b and every family admissible.
class PowersetAlgebra : public PreHeytingAlgebra {
 public:
  explicit PowersetAlgebra(unsigned n);  // 1 <= n <= 5

  unsigned base_size() const { return n_; }
  Element top() const { return top_; }
  Element bottom() const { return 0; }

  std::vector<Element> domain() const override;
  bool leq(Element a, Element b) const override;
  Element imp(Element a, Element b) const override;
  bool admissible(const std::set<Element>& family) const override;
  Element glb(const std::set<Element>& family) const override;
  std::string show(Element a) const override;

 private:
  unsigned n_;
  Element top_;
};

struct LawViolation {
  std::string law;  // "preorder", "imp-stability" or "glb"
  std::string detail;
};

struct AlgebraLawReport {
  bool ok = true;
  std::size_t checks = 0;
  std::size_t families = 0;
  std::vector<LawViolation> violations;  // at most a few per law
};

/// Checks the three defining laws. Families range over every subset of the
/// domain, so the domain must have at most `max_domain` elements.
AlgebraLawReport check_algebra_laws(const PreHeytingAlgebra& alg, std::size_t max_domain = 16);

/// Environments are substitutions of closed terms for term variables.
using Environment = TermSubst;

std::string to_string(const Environment& env);
/// Parses "x:=c, y:=f(d)". The empty string is the empty environment.
Environment parse_environment(const std::string& text, const Signature* sig = nullptr);

/// Structure whose term model is the set of terms itself: function symbols
/// are interpreted by themselves and only predicates need an interpretation.
struct ValuedStructure {
  const PreHeytingAlgebra* algebra = nullptr;
  Signature sig;
  std::function<Element(const std::string& pred, const std::vector<Term>& args)> pred_interp;

  /// Every atom is sent to `value`.
  static ValuedStructure constant(const PreHeytingAlgebra& alg, const Signature& sig, Element value);
  /// Deterministic pseudo-random interpretation of every atom, total on all
  /// closed terms.
  static ValuedStructure hashed(const PowersetAlgebra& alg, const Signature& sig, std::uint64_t seed);
  /// Listed atoms (closed, printed form) get their value, others `fallback`.
  static ValuedStructure table(const PreHeytingAlgebra& alg, const Signature& sig,
                               std::map<std::string, Element> atoms, Element fallback);
};

class SemanticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inductive interpretation. Free variables of p must be bound by env and
/// the universe must be non-empty. Throws SemanticsError otherwise, and when
/// a universal family is not admissible.
Element interpret(const ValuedStructure& vs, const Prop& p, const Environment& env,
                  const std::vector<Term>& universe);

/// ⟦(t/x)p⟧_env = ⟦p⟧_{env + x:=env(t)}.
bool check_lsub(const ValuedStructure& vs, const Prop& p, const std::string& x, const Term& t,
                const Environment& env, const std::vector<Term>& universe);

/// All environments mapping `vars` into the universe.
std::vector<Environment> all_environments(const std::set<std::string>& vars, const std::vector<Term>& universe);

struct ModelFailure {
  Prop a;
  Prop b;
  Environment env;
  Element va = 0;
  Element vb = 0;
};

struct ModelVerdict {
  bool ok = true;
  std::size_t pairs_checked = 0;    // congruent pairs compared
  std::size_t unknown_pairs = 0;    // congruence undecided within fuel
  std::size_t skipped_envs = 0;     // env samples not covering the free variables
  std::vector<ModelFailure> failures;
};

/// For every pair of sampled propositions proved congruent within `fuel`,
/// and every sampled environment binding their free variables, compares the
/// two interpretations.
ModelVerdict is_model_inductive(const ValuedStructure& vs, const Theory& t, const std::vector<Prop>& props,
                                const std::vector<Environment>& envs, const std::vector<Term>& universe,
                                std::size_t fuel);

/// Finite interpretation table. Keys are a proposition modulo alpha and the
/// restriction of the environment to its free variables. Unlisted pairs fall
/// back to the default rule, if any.
class InterpretationTable {
 public:
  struct Entry {
    Prop prop;
    Environment env;
    Element value = 0;
  };
  using DefaultRule = std::function<std::optional<Element>(const Prop&, const Environment&)>;

  void set(const Prop& p, const Environment& env, Element value);
  std::optional<Element> lookup(const Prop& p, const Environment& env) const;
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  void set_default(DefaultRule rule) { default_ = std::move(rule); }

  /// Table of the inductive interpretation over every proposition and every
  /// environment of its free variables. The default rule is interpret.
  static InterpretationTable from_structure(const ValuedStructure& vs, const std::vector<Prop>& props,
                                            const std::vector<Term>& universe);

 private:
  static std::string key(const Prop& p, const Environment& env);
  std::vector<Entry> entries_;
  std::map<std::string, std::size_t> index_;
  DefaultRule default_;
};

/// Parses lines `<prop> | <env> | <element>`; `#` starts a comment.
InterpretationTable parse_interpretation_table(const std::string& text, const Signature& sig);

struct Model2Report {
  struct Item {
    std::size_t checked = 0;
    std::size_t skipped = 0;  // a needed value is missing from the table
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
  };
  Item connectives;
  Item substitution;
  Item congruence;
  std::size_t unknown_congruences = 0;

  bool ok() const { return connectives.ok() && substitution.ok() && congruence.ok(); }
};

/// Checks the three model conditions on every table entry: adapted to the
/// connectives (quantifiers over the universe), the substitution property
/// (for each free variable of the entry), and adapted to the congruence
/// (one-step rewrites, plus sampled entry pairs proved congruent in `fuel`).
Model2Report check_model2(const InterpretationTable& tab, const PreHeytingAlgebra& alg, const Theory& t,
                          const std::vector<Term>& universe, std::size_t fuel);

}  // namespace mdm

#endif  // MDM_SEMANTICS_HPP
