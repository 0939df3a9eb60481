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

// Reducibility candidates over finite universes of Curry proof-terms.
//
// Candidate sets are three-valued: a universe member is in, out, or
// undetermined because deciding it needs terms the set does not describe.
// A set may carry an oracle answering for terms outside the universe.
//
// The closure Cl^k(A)_φ is decided per term. Stage 0 asks a bounded
// derivation search whether Δ ⊢ π : φA, where Δ is a finite slice of the
// universal context. Stage k+1 adds π when some marking of at most n_max
// disjoint Ω-subterms has all its simultaneous one-step reduct instances in
// stage k. Instances are not required to lie in any universe, so stage
// membership is exact relative to the stage-0 search.

#ifndef MDM_CANDIDATES_HPP
#define MDM_CANDIDATES_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mdm/rewriting.hpp"
#include "mdm/semantics.hpp"
#include "mdm/syntax.hpp"
#include "mdm/termbank.hpp"
#include "mdm/typing.hpp"

namespace mdm {

enum class Tri : std::uint8_t { Out, In, Unknown };
std::string_view to_string(Tri v);

struct CRVerdict {
  enum class Kind { Pass, Fail, Unknown };
  Kind kind = Kind::Pass;
  std::size_t checked = 0;
  std::size_t boundary = 0;  // instances outside the universe or undetermined
  std::string counterexample;

  bool pass() const { return kind == Kind::Pass; }
  bool fail() const { return kind == Kind::Fail; }
};
std::string_view to_string(CRVerdict::Kind kind);

struct CRVerdicts {
  CRVerdict cr1, cr2, cr3, cr3aux, cr3prime;
};

class FiniteCandidate {
 public:
  using Oracle = std::function<Tri(TermId)>;

  explicit FiniteCandidate(const Universe& u, Tri fill = Tri::Out);
  /// `members` are in, every other universe term is out. Throws
  /// std::invalid_argument for a member outside the universe.
  static FiniteCandidate of(const Universe& u, const std::vector<TermId>& members);

  const Universe& universe() const { return *u_; }
  Tri at(std::size_t index) const { return status_[index]; }
  void set(std::size_t index, Tri v);
  /// Universe terms by their status; other terms through the oracle.
  Tri status(TermId t) const;
  void set_oracle(Oracle o) { oracle_ = std::move(o); }
  bool has_oracle() const { return static_cast<bool>(oracle_); }

  std::size_t count(Tri v) const;
  std::vector<TermId> members() const;
  bool same_statuses(const FiniteCandidate& other) const { return status_ == other.status_; }

  /// All five verdicts, computed once.
  const CRVerdicts& verdicts(std::size_t n_max = 2) const;

 private:
  const Universe* u_;
  std::vector<Tri> status_;
  Oracle oracle_;
  mutable std::optional<CRVerdicts> cache_;
  mutable std::size_t cache_n_ = 0;
};

/// (CR₁) every member is strongly normalizing; undetermined SN gives Unknown.
CRVerdict cr1(const FiniteCandidate& s);
/// (CR₂) members' one-step reducts are members.
CRVerdict cr2(const FiniteCandidate& s);
/// (CR₃) neutral terms whose reducts are all members are members.
CRVerdict cr3(const FiniteCandidate& s);
/// (CR₃aux) as CR₃, restricted to non-normal terms.
CRVerdict cr3aux(const FiniteCandidate& s);
/// (CR₃′) markings of at most n_max disjoint neutral non-normal subterms
/// whose every simultaneous reduct instance is a member force membership.
CRVerdict cr3prime(const FiniteCandidate& s, std::size_t n_max);

/// Strongly normalizing, neutral and not normal. Unknown when SN is.
Tri omega(TermBank& bank, TermId t);
Tri omega(const Proof& p, std::size_t fuel);

/// a ⇒̃ b over the universe of a.
FiniteCandidate imp_candidate(const FiniteCandidate& a, const FiniteCandidate& b);
/// Intersection of a non-empty family over one universe.
FiniteCandidate forall_candidate(const std::vector<const FiniteCandidate*>& family);

/// Least set containing `seeds` closed under CR₂ and CR₃′ inside the
/// universe. Terms that closure would add through instances outside the
/// universe are undetermined.
FiniteCandidate cr_closure(const Universe& u, const std::vector<TermId>& seeds, std::size_t n_max);

/// `c` seen from a universe `u` over the same bank: statuses of members of u
/// are read from c, which also answers for every other term. `c` must
/// outlive the result.
FiniteCandidate restrict_to(const FiniteCandidate& c, const Universe& u);

/// Deterministic injective naming of the declarations of Δ.
class UniversalContext {
 public:
  explicit UniversalContext(std::string prefix = "h") : prefix_(std::move(prefix)) {}

  /// Name of the index-th declaration of p (modulo α).
  std::string name(const Prop& p, std::size_t index);
  /// Names `count` declarations of each proposition and returns them.
  Context slice(const std::vector<std::pair<Prop, std::size_t>>& wanted);
  /// Every declaration named so far.
  Context materialized() const { return Context(entries_); }

 private:
  std::string prefix_;
  std::map<std::pair<std::string, std::size_t>, std::string> names_;
  std::vector<std::pair<std::string, Prop>> entries_;
};

struct SearchBounds {
  std::size_t depth = 3;        // silent ∀ steps plus cut nesting
  std::size_t fuel = 200;       // congruence fuel per query
  std::size_t class_slack = 2;  // congruence classes explored up to |A| + slack
  std::size_t max_pool = 96;    // cut formulas per goal
};

/// Checking-mode search for Curry derivations of Δ ⊢ π : A.
class DerivationSearch {
 public:
  DerivationSearch(const Theory& t, Context delta, std::vector<Term> terms, SearchBounds bounds);

  std::optional<Derivation> find(const Proof& subject, const Prop& goal);
  const Context& delta() const { return delta_; }
  const SearchBounds& bounds() const { return bounds_; }
  std::size_t nodes() const { return nodes_; }
  /// Cut formulas used for a top-level goal.
  const std::vector<Prop>& pool(const Prop& goal);

 private:
  using Result = std::shared_ptr<const Derivation>;
  struct Scope {
    Context ctx;
    std::string key;
  };
  Result check(const Scope& s, const Proof& p, const Prop& goal, std::size_t d);
  Result check_uncached(const Scope& s, const Proof& p, const Prop& goal, std::size_t d);
  Result spine(const Scope& s, const Derivation& head, const Prop& type, const std::vector<Proof>& args,
               std::size_t i, const Prop& goal, std::size_t d);
  const std::vector<Prop>& cls(const Prop& p);
  std::vector<Prop> exposed(const Prop& p, Prop::Kind kind);
  std::vector<Term> instances(const Prop& w, const Prop* target, const Prop& goal);
  bool cong(const Prop& a, const Prop& b);

  const Theory* theory_;
  Congruence congruence_;
  Context delta_;
  std::vector<Term> terms_;
  SearchBounds bounds_;
  std::size_t pool_id_ = 0;
  const std::vector<Prop>* pool_ = nullptr;
  std::map<std::string, std::pair<std::size_t, std::vector<Prop>>> pools_;
  std::unordered_map<std::string, std::vector<Prop>> classes_;
  std::unordered_map<std::string, Result> memo_;
  std::size_t nodes_ = 0;
};

struct ClosureBounds {
  std::size_t depth = 3;
  std::size_t fuel = 200;
  std::size_t n_max = 2;
  std::size_t max_term_size = 24;  // larger terms are undetermined
};

struct ClosureTable;

/// Decides Cl^k(A)_φ membership over one Δ-slice.
class ClosureEngine {
 public:
  ClosureEngine(const Theory& t, TermBank& bank, Context delta, std::vector<Term> terms, ClosureBounds bounds);

  TermBank& bank() { return *bank_; }
  const Theory& theory() const { return *theory_; }
  const Context& delta() const { return search_.delta(); }
  const ClosureBounds& bounds() const { return bounds_; }

  bool in_cl0(TermId t, const Prop& goal);
  bool in_stage(TermId t, const Prop& goal, std::size_t k);
  /// Membership in Cl = ∪ Cl^k. For a strongly normalizing term the stage
  /// max(k_floor, longest reduction) is decisive; otherwise only a positive
  /// answer at k_floor is.
  Tri member(TermId t, const Prop& goal, std::size_t k_floor);
  /// A kernel-checkable derivation of Δ ⊢ t : goal found by the search.
  std::optional<Derivation> certificate(TermId t, const Prop& goal);

  FiniteCandidate cl0(const Universe& u, const Prop& a, const Environment& env);
  ClosureTable closure(const Universe& u, const Prop& a, const Environment& env, std::size_t k_max);

  /// Ω-positions skipped because SN was undetermined.
  std::size_t omega_unknown() const { return omega_unknown_; }
  /// Instances treated as non-members for exceeding the size bound.
  std::size_t capped() const { return capped_; }
  std::size_t search_nodes() const { return search_.nodes(); }

 private:
  std::uint32_t goal_id(const Prop& goal);
  const std::vector<std::vector<TermId>>& omega_instances(TermId t);

  const Theory* theory_;
  TermBank* bank_;
  DerivationSearch search_;
  ClosureBounds bounds_;
  std::unordered_map<std::string, std::uint32_t> goals_;
  std::vector<Prop> goal_props_;
  std::unordered_map<std::uint64_t, bool> cl0_memo_;
  std::unordered_map<std::uint64_t, bool> stage_memo_;
  std::unordered_map<TermId, std::vector<std::vector<TermId>>> omega_memo_;
  std::size_t omega_unknown_ = 0;
  std::size_t capped_ = 0;
};

/// One Cl^{k+1} step inside the universe: statuses of instances come from
/// `prev` (its oracle for instances outside the universe).
FiniteCandidate cl_step(const FiniteCandidate& prev, std::size_t n_max);

struct ClosureTable {
  Prop prop;
  Environment env;
  Prop goal;  // φA
  std::size_t k_max = 0;
  const Universe* universe = nullptr;
  /// in_stage[k][i]: universe member i belongs to Cl^k.
  std::vector<std::vector<bool>> in_stage;
  std::vector<std::optional<std::size_t>> first_stage;
  std::vector<std::optional<std::size_t>> sn_max;  // longest reduction, if known
  std::vector<FiniteCandidate> stages;             // with exact oracles

  std::size_t stage_size(std::size_t k) const;
};

struct LemmaReport {
  std::string lemma;
  std::size_t checked = 0;
  std::size_t violations = 0;
  std::size_t boundary = 0;
  std::vector<std::string> examples;  // first few violations
  double seconds = 0;

  bool pass() const { return violations == 0; }
  void violation(std::string what);
};

/// Stage sets are increasing.
LemmaReport check_monotone(const ClosureTable& tab);
/// First-entry stage is at most the longest reduction length.
LemmaReport check_mink(const ClosureTable& tab);
/// Normal members enter at stage 0.
LemmaReport check_normal_stage0(const ClosureTable& tab);
/// Every stage is made of SN terms and is closed under one-step reduction.
LemmaReport check_clc(ClosureEngine& e, const ClosureTable& tab);
/// λβ.π ∈ Cl(A⇒B) whenever (α/β)π ∈ Cl(B) for a Δ-variable α of type φA
/// not free in π, over the abstractions of the universe.
LemmaReport check_lambdacl(ClosureEngine& e, const Universe& u, const Prop& a, const Prop& b,
                           const Environment& env, std::size_t k_floor);
/// Cl(A⇒B) = Cl(A) ⇒̃ Cl(B) over the universe, μ ranging over Cl(A) ∩ u.
LemmaReport check_clramorph(ClosureEngine& e, const Universe& u, const Prop& a, const Prop& b,
                            const Environment& env, std::size_t k_floor);
/// Cl^k((t/x)A)_φ = Cl^k(A)_{φ+x:=t} for every k ≤ k_max.
LemmaReport check_clsubst(ClosureEngine& e, const Universe& u, const Prop& a, const std::string& x,
                          const Term& t, const Environment& env, std::size_t k_max);
/// Cl(∀x.A)_φ = ∩_t Cl(A)_{φ+x:=t} over `terms`.
LemmaReport check_clfamorph(ClosureEngine& e, const Universe& u, const Prop& forall, const Environment& env,
                            const std::vector<Term>& terms, std::size_t k_floor);

struct AdequacyResult {
  Tri verdict = Tri::Unknown;  // Unknown: the instance escaped the bounds
  bool adequate = true;        // σα ∈ Cl(B) held for every hypothesis used
  Proof instance = Proof::var("_");
  std::string detail;
};

/// For Γ ⊢ π : A and σ with σα ∈ Cl(B)_φ for each α:B of Γ free in π,
/// decides σπ ∈ Cl(A)_φ. The engine's Δ must declare what σ uses.
AdequacyResult adequacy_check(ClosureEngine& e, const Derivation& d, const std::map<std::string, Proof>& sigma,
                              const Environment& env, std::size_t k_floor, std::size_t max_size);

struct AdequacyOptions {
  std::size_t derivations = 30;
  std::uint64_t seed = 0;
  std::size_t max_subject_size = 8;
  std::size_t max_size = 12;  // σπ beyond this size is a boundary escape
  std::size_t k_floor = 3;
  ClosureBounds bounds;
};

/// Runs adequacy over a generated Curry corpus of `t`: each free hypothesis
/// is sent to Δ-variables of its type or to a β-expansion of one.
LemmaReport adequacy_suite(const Theory& t, const std::vector<Term>& terms, const AdequacyOptions& opts);

struct DefectEntry {
  Prop forall;
  Term t1;
  Term t2;
  Proof church_term;             // h t1
  bool church_at_t1 = false;     // Δ ⊢ h t1 : (t1/x)A
  bool church_at_t2 = false;     // Δ ⊢ h t1 : (t2/x)A
  bool curry_in_all = false;     // erased h typed at every instance
};

struct DefectReport {
  std::vector<DefectEntry> entries;
  std::string text() const;
};

/// Over the universal propositions given, shows that the Church application
/// of a Δ-variable to t₁ is typed at the t₁ instance only, while its erasure
/// belongs to every instance.
DefectReport church_forall_defect_demo(const Theory& t, const std::vector<Prop>& foralls,
                                       const std::vector<Term>& terms, std::size_t fuel);

}  // namespace mdm

#endif  // MDM_CANDIDATES_HPP
