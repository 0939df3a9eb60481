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

#include "mdm/acceptance.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <functional>
#include <iomanip>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mdm/candidates.hpp"
#include "mdm/corpus.hpp"
#include "mdm/reduction.hpp"
#include "mdm/rewriting.hpp"
#include "mdm/semantics.hpp"
#include "mdm/syntax.hpp"
#include "mdm/termbank.hpp"
#include "mdm/typing.hpp"

namespace mdm {

namespace {

constexpr std::size_t kFuel = 200;

// Theories whose corpora exercise the transforms; the confusion theory is
// kept for its own criterion.
const char* const kCorpusTheories[] = {"empty", "selfapp", "arith-toy"};

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

Theory load(const AcceptanceOptions& o, const std::string& name) { return load_theory(o.data_dir + "/" + name + ".mdm"); }

// Collects the first failure messages of a criterion.
struct Failures {
  std::size_t count = 0;
  std::vector<std::string> first;

  void add(std::string what) {
    if (first.size() < 3) first.push_back(std::move(what));
    ++count;
  }
  std::string text() const {
    std::string s;
    for (const auto& f : first) s += "; " + f;
    return s;
  }
};

std::string fmt(double x, int digits = 2) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << x;
  return os.str();
}

struct Corpus {
  std::string theory;
  Theory t;
  std::vector<Derivation> curry;
  std::vector<Derivation> church;
};

std::vector<Corpus> corpora(const AcceptanceOptions& o) {
  std::vector<Corpus> out;
  for (const char* name : kCorpusTheories) {
    Corpus c{name, load(o, name), {}, {}};
    CorpusOptions co;
    co.count = o.quick ? 10 : 50;
    co.max_subject_size = 10;
    co.fuel = kFuel;
    co.seed = o.seed;
    co.require_redex = true;
    co.style = Style::Curry;
    c.curry = generate_corpus(c.t, co);
    co.style = Style::Church;
    c.church = generate_corpus(c.t, co);
    out.push_back(std::move(c));
  }
  return out;
}

// A closed term of the signature when there is one, used as a substitution
// instance.
Term sample_term(const Signature& sig) {
  const SymbolDecl* constant = nullptr;
  const SymbolDecl* unary = nullptr;
  for (const auto& f : sig.functions()) {
    if (f.arity == 0 && !constant) constant = &f;
    if (f.arity == 1 && !unary) unary = &f;
  }
  if (!constant) return Term::var("y");
  Term c = Term::app(constant->name);
  return unary ? Term::app(unary->name, {c}) : c;
}

CriterionResult delta_divergence(const AcceptanceOptions&) {
  CriterionResult r{1, "delta-delta diverges with a cycle of length 1", false, "", 0};
  double t0 = now();
  auto v = sn_verdict(parse_proof("(\\a. a a) (\\a. a a)", Style::Curry), 1000);
  double secs = now() - t0;
  std::size_t cycle = v.cycle.empty() ? 0 : v.cycle.size() - 1;
  r.pass = v.kind == SNVerdict::Kind::Diverges && cycle == 1 && secs < 1.0;
  r.detail = "verdict " + to_string(v.kind) + ", cycle length " + std::to_string(cycle) + ", " + fmt(secs, 4) + " s";
  return r;
}

CriterionResult deltadelta_derivation(const AcceptanceOptions& o) {
  CriterionResult r{2, "delta-delta derivation checks with fuel 50", false, "", 0};
  Theory t = load(o, "selfapp");
  Derivation d = load_derivation(o.data_dir + "/deltadelta.drv", Style::Curry, &t.sig);
  auto rep = check_derivation(t, d, 50);
  r.pass = rep.ok && rep.max_fuel() <= 50;
  r.detail = std::string(rep.ok ? "Ok" : "Fail at " + rep.path + ": " + rep.reason) + ", " +
             std::to_string(d.node_count()) + " nodes, " + std::to_string(rep.side_conditions.size()) +
             " congruence conditions, max fuel " + std::to_string(rep.max_fuel());
  return r;
}

CriterionResult subject_reduction(const AcceptanceOptions& o) {
  CriterionResult r{3, "subject reduction on every derivation and redex", false, "", 0};
  double t0 = now();
  Failures f;
  std::size_t derivations = 0;
  std::size_t pairs = 0;
  for (auto& c : corpora(o)) {
    for (const auto* set : {&c.curry, &c.church}) {
      for (const auto& d : *set) {
        ++derivations;
        for (const auto& step : beta_steps(d.subject)) {
          ++pairs;
          std::string where = c.theory + " " + to_string(d.subject) + " at " + to_string(step.path);
          try {
            Derivation red = reduce_derivation(c.t, d, step.path, kFuel);
            auto rep = check_derivation(c.t, red, kFuel);
            if (!rep.ok)
              f.add(where + ": " + rep.reason);
            else if (!alpha_eq(red.subject, step.reduct) || !red.ctx.same_as(d.ctx) ||
                     !congruent(c.t, red.prop, d.prop, kFuel).yes())
              f.add(where + ": judgement changed");
          } catch (const std::exception& e) {
            f.add(where + ": " + e.what());
          }
        }
      }
    }
  }
  double secs = now() - t0;
  r.pass = f.count == 0 && pairs > 0 && secs < 60;
  r.detail = std::to_string(derivations) + " derivations, " + std::to_string(pairs) + " redex pairs, " +
             std::to_string(pairs - f.count) + " re-check Ok, " + fmt(secs) + " s" + f.text();
  return r;
}

CriterionResult transforms(const AcceptanceOptions& o) {
  CriterionResult r{4, "weakening and both substitutions re-check", false, "", 0};
  Failures f;
  std::size_t weak = 0;
  std::size_t proofs = 0;
  std::size_t terms = 0;
  auto attempt = [&](const Theory& t, const std::string& what, const std::function<Derivation()>& make) {
    try {
      auto rep = check_derivation(t, make(), kFuel);
      if (!rep.ok) f.add(what + ": " + rep.reason);
    } catch (const std::exception& e) {
      f.add(what + ": " + e.what());
    }
  };
  for (auto& c : corpora(o)) {
    Term inst = sample_term(c.t.sig);
    for (const auto* set : {&c.curry, &c.church}) {
      for (const auto& d : *set) {
        std::string subj = c.theory + " " + to_string(d.subject);
        std::set<std::string> taken = all_proof_vars(d);
        std::string w = fresh_name("w", taken);
        ++weak;
        attempt(c.t, "weaken " + subj, [&] { return weaken(d, d.ctx.extend(w, d.prop)); });
        // Each hypothesis is replaced by the redex (λz.z) g with g : A fresh.
        for (const auto& [a, prop] : d.ctx.entries()) {
          std::string g = fresh_name("g", taken);
          std::string z = fresh_name("z", taken);
          Context gc({{g, prop}});
          Derivation id = make_imp_intro(gc, z, Prop::imp(prop, prop), Prop::imp(prop, prop),
                                         make_axiom(d.style, gc.extend(z, prop), z, prop));
          Derivation arg = make_imp_elim(gc, Prop::imp(prop, prop), prop, id, make_axiom(d.style, gc, g, prop));
          ++proofs;
          attempt(c.t, "subst " + a + " in " + subj, [&] { return subst_derivation_proof(d, a, arg); });
        }
        std::set<std::string> xs = free_term_vars(d.prop);
        for (const auto& x : d.ctx.free_term_vars()) xs.insert(x);
        if (xs.empty()) xs.insert("x");  // vacuous, still re-checked
        for (const auto& x : xs) {
          ++terms;
          attempt(c.t, "subst " + x + " in " + subj, [&] { return subst_derivation_term(d, x, inst); });
        }
      }
    }
  }
  std::size_t total = weak + proofs + terms;
  r.pass = f.count == 0 && proofs > 0;
  r.detail = std::to_string(weak) + " weakenings, " + std::to_string(proofs) + " proof substitutions, " +
             std::to_string(terms) + " term substitutions, " + std::to_string(total - f.count) + "/" +
             std::to_string(total) + " Ok" + f.text();
  return r;
}

CriterionResult lsub(const AcceptanceOptions& o) {
  CriterionResult r{5, "substitution lemma of the interpretation", false, "", 0};
  Theory t = load(o, "empty");
  PowersetAlgebra alg(2);
  std::vector<Term> universe{Term::app("c"), Term::app("d")};
  auto samples = lsub_samples(t.sig, universe, 500, 4, o.seed);
  std::size_t checked = 0;
  std::size_t violations = 0;
  for (std::uint64_t s = 0; s < 2; ++s) {
    auto vs = ValuedStructure::hashed(alg, t.sig, o.seed + s);
    for (const auto& sm : samples) {
      ++checked;
      violations += !check_lsub(vs, sm.prop, sm.var, sm.term, sm.env, universe);
    }
  }
  r.pass = violations == 0 && checked >= 500;
  r.detail = std::to_string(checked) + " samples over 2 structures, " + std::to_string(violations) + " violations";
  return r;
}

CriterionResult confusion(const AcceptanceOptions& o) {
  CriterionResult r{6, "confusion transports, Church abstractions stay out of universals", false, "", 0};
  Theory c = load(o, "confusion");
  Theory e = load(o, "empty");
  Failures f;
  // h : ∀x.B(x) ⊢ λa.h : A ⇒ ∀x.B(x), and an opaque hypothesis of that type.
  const char* sources[] = {
      R"d((imp-intro ctx:"h:!x. B(x)" subj:"\a. h" prop:"A => !x. B(x)" (axiom ctx:"h:!x. B(x), a:A" subj:"h" prop:"!x. B(x)")))d",
      R"d((axiom ctx:"f:A => !x. B(x)" subj:"f" prop:"A => !x. B(x)"))d"};
  Prop target = parse_prop("!x. (A => B(x))", &c.sig);
  std::size_t transported = 0;
  for (const char* src : sources) {
    Derivation d = parse_derivation(src, Style::Curry, &c.sig);
    if (!check_derivation(c, d, kFuel).ok) {
      f.add("source does not check");
      continue;
    }
    auto tr = confusion_transport(d);
    if (!tr) {
      f.add("no transport for " + to_string(d.subject));
      continue;
    }
    auto rep = check_derivation(c, tr->derivation, kFuel);
    if (!rep.ok || !alpha_eq(tr->derivation.prop, target) || !alpha_eq(tr->derivation.subject, d.subject))
      f.add("transport of " + to_string(d.subject) + " fails: " + rep.reason);
    else
      ++transported;
  }
  std::vector<Prop> seeds{parse_prop("P", &e.sig), parse_prop("Q(x)", &e.sig), parse_prop("!x. Q(x)", &e.sig)};
  std::vector<Term> terms{Term::app("c"), Term::var("x")};
  auto en = enumerate_church_derivations(e, seeds, terms, 4);
  if (!en.complete) f.add("enumeration hit its judgement cap");
  if (en.forall_typed_lambdas != 0) f.add(std::to_string(en.forall_typed_lambdas) + " abstractions with universal type");
  if (en.lambda_subjects == 0) f.add("no abstraction subjects enumerated");
  r.pass = f.count == 0;
  r.detail = std::to_string(transported) + "/2 transports check, depth-4 enumeration: " +
             std::to_string(en.judgements) + " judgements, " + std::to_string(en.lambda_subjects) +
             " abstractions, " + std::to_string(en.forall_typed_lambdas) + " with universal type" + f.text();
  return r;
}

CriterionResult erasure(const AcceptanceOptions& o) {
  CriterionResult r{7, "erasure simulates Church reduction", false, "", 0};
  Failures f;
  std::size_t proof_steps = 0;
  std::size_t term_steps = 0;
  std::size_t erased = 0;
  for (auto& c : corpora(o)) {
    for (const auto& d : c.church) {
      Proof e0 = erase(d.subject);
      auto curry_reducts = beta_reducts(e0);
      for (const auto& step : beta_steps(d.subject)) {
        Proof e1 = erase(step.reduct);
        std::string where = c.theory + " " + to_string(d.subject) + " at " + to_string(step.path);
        if (step.term_beta) {
          ++term_steps;
          if (!alpha_eq(e0, e1)) f.add(where + ": term step changes the erasure");
        } else {
          ++proof_steps;
          bool found = std::any_of(curry_reducts.begin(), curry_reducts.end(),
                                   [&](const Proof& q) { return alpha_eq(q, e1); });
          if (!found) f.add(where + ": no matching Curry step");
        }
      }
      ++erased;
      try {
        auto rep = check_derivation(c.t, erase_derivation(d), kFuel);
        if (!rep.ok) f.add("erasure of " + to_string(d.subject) + ": " + rep.reason);
      } catch (const std::exception& e) {
        f.add("erasure of " + to_string(d.subject) + ": " + e.what());
      }
    }
  }
  r.pass = f.count == 0 && proof_steps > 0 && term_steps > 0;
  r.detail = std::to_string(proof_steps) + " proof steps, " + std::to_string(term_steps) + " term steps, " +
             std::to_string(erased) + " erased derivations, " + std::to_string(f.count) + " failures" + f.text();
  return r;
}

CriterionResult closure_lemmas(const AcceptanceOptions& o) {
  CriterionResult r{8, "closure lemmas at desk scale", false, "", 0};
  const std::size_t size = o.quick ? 6 : 7;
  const std::size_t k_max = 3;
  ClosureBounds bounds;
  bounds.depth = 3;
  Theory t = load(o, "empty");
  auto P = [&](const char* s) { return parse_prop(s, &t.sig); };
  std::vector<Term> terms{Term::app("c"), Term::app("d")};
  std::map<std::string, LemmaReport> total;
  auto merge = [&](const LemmaReport& rep) {
    auto& m = total[rep.lemma];
    m.lemma = rep.lemma;
    m.checked += rep.checked;
    m.violations += rep.violations;
    m.boundary += rep.boundary;
    m.seconds += rep.seconds;
    for (const auto& ex : rep.examples)
      if (m.examples.size() < 2) m.examples.push_back(ex);
  };
  {
    TermBank bank;
    UniversalContext delta;
    Context slice = delta.slice({{P("P"), 2}, {P("P => P"), 1}});
    Universe u(bank, {size, {"h0", "h1", "h2"}});
    ClosureEngine e(t, bank, slice, terms, bounds);
    for (const char* a : {"P", "P => P"}) {
      auto tab = e.closure(u, P(a), {}, k_max);
      merge(check_monotone(tab));
      merge(check_mink(tab));
      merge(check_normal_stage0(tab));
    }
    merge(check_clramorph(e, u, P("P"), P("P"), {}, k_max));
    merge(check_clramorph(e, u, P("P => P"), P("P"), {}, k_max));
  }
  {
    TermBank bank;
    UniversalContext delta;
    Context slice = delta.slice({{P("!x. Q(x)"), 1}, {P("Q(c)"), 1}, {P("Q(d) => Q(d)"), 1}});
    Universe u(bank, {size, {"h0", "h1", "h2"}});
    ClosureEngine e(t, bank, slice, terms, bounds);
    merge(check_clsubst(e, u, P("Q(x) => Q(y)"), "x", Term::app("c"), parse_environment("y:=d", &t.sig), k_max));
    merge(check_clsubst(e, u, P("Q(x)"), "x", Term::app("d"), {}, k_max));
    merge(check_clfamorph(e, u, P("!x. Q(x)"), {}, terms, k_max));
    merge(check_clfamorph(e, u, P("!x. (Q(x) => Q(x))"), {}, terms, k_max));
  }
  bool ok = true;
  std::string detail = "universe size " + std::to_string(size) + " over 3 variables, k_max 3";
  for (const char* name : {"monotone", "mink", "normal-stage0", "clramorph", "clsubst", "clfamorph"}) {
    const auto& m = total[name];
    ok = ok && m.pass() && m.checked > 0 && m.seconds < 120;
    detail += "; " + m.lemma + " " + std::to_string(m.checked) + " checked, " + std::to_string(m.violations) +
              " violations, " + std::to_string(m.boundary) + " boundary, " + fmt(m.seconds) + " s";
    for (const auto& ex : m.examples) detail += " [" + ex + "]";
  }
  r.pass = ok;
  r.detail = detail;
  return r;
}

// a ⊆ b on every determined member of the universe.
bool below(const FiniteCandidate& a, const FiniteCandidate& b, std::size_t& undetermined) {
  for (std::size_t i = 0; i < a.universe().size(); ++i) {
    if (a.at(i) == Tri::Out || b.at(i) == Tri::In) continue;
    if (a.at(i) == Tri::In && b.at(i) == Tri::Out) return false;
    ++undetermined;
  }
  return true;
}

bool all_pass(const FiniteCandidate& c) {
  const auto& v = c.verdicts(2);
  return v.cr1.pass() && v.cr2.pass() && v.cr3prime.pass();
}

CriterionResult algebra(const AcceptanceOptions& o) {
  CriterionResult r{9, "candidate algebra laws", false, "", 0};
  // Candidates live on a large universe that holds every application of two
  // members of the small one, so arrows over the small one are determined.
  const std::size_t big_size = o.quick ? 7 : 9;
  const std::size_t small_size = o.quick ? 3 : 4;
  const std::size_t wanted = o.quick ? 30 : 100;
  TermBank bank;
  Universe big(bank, {big_size, {"g", "h"}});
  Universe small(bank, {small_size, {"g", "h"}});
  std::mt19937_64 rng(o.seed);
  std::vector<FiniteCandidate> pool;
  std::size_t rejected = 0;
  while (pool.size() < wanted && rejected < 10 * wanted) {
    std::vector<TermId> seeds;
    std::size_t n = 1 + rng() % 3;
    for (std::size_t j = 0; j < n; ++j) seeds.push_back(big.members()[rng() % big.size()]);
    auto c = cr_closure(big, seeds, 2);
    if (all_pass(c))
      pool.push_back(std::move(c));
    else
      ++rejected;
  }
  std::vector<FiniteCandidate> local;
  for (const auto& c : pool) local.push_back(restrict_to(c, small));

  Failures f;
  std::size_t arrows = 0;
  std::size_t arrow_in = 0;
  std::size_t arrow_unknown = 0;
  for (std::size_t i = 0; i < local.size(); ++i) {
    for (std::size_t j : {i, (7 * i + 3) % local.size()}) {
      auto out = imp_candidate(local[i], local[j]);
      ++arrows;
      arrow_in += out.count(Tri::In);
      arrow_unknown += out.count(Tri::Unknown);
      if (!all_pass(out)) f.add("arrow " + std::to_string(i) + "," + std::to_string(j) + " fails a verdict");
    }
  }
  // Every family of at most four among the first eight candidates.
  const std::size_t base = std::min<std::size_t>(8, pool.size());
  std::size_t families = 0;
  std::size_t undetermined = 0;
  for (std::uint32_t mask = 1; mask < (1u << base); ++mask) {
    if (std::popcount(mask) > 4) continue;
    std::vector<const FiniteCandidate*> fam;
    for (std::size_t b = 0; b < base; ++b)
      if (mask & (1u << b)) fam.push_back(&pool[b]);
    ++families;
    auto meet = forall_candidate(fam);
    if (!all_pass(meet)) f.add("meet of family " + std::to_string(mask) + " fails a verdict");
    for (const auto* m : fam)
      if (!below(meet, *m, undetermined)) f.add("meet of family " + std::to_string(mask) + " is not a lower bound");
    for (const auto& c : pool) {
      bool lower = std::all_of(fam.begin(), fam.end(), [&](const auto* m) {
        std::size_t ignored = 0;
        return below(c, *m, ignored) && ignored == 0;
      });
      if (lower && !below(c, meet, undetermined))
        f.add("a lower bound of family " + std::to_string(mask) + " is not below its meet");
    }
  }
  r.pass = f.count == 0 && pool.size() == wanted;
  r.detail = std::to_string(pool.size()) + " candidates on " + std::to_string(big.size()) + " terms (" +
             std::to_string(rejected) + " rejected), " + std::to_string(arrows) + " arrows on " +
             std::to_string(small.size()) + " terms (" + std::to_string(arrow_in) + " members, " +
             std::to_string(arrow_unknown) + " undetermined), " + std::to_string(families) + " meets, " +
             std::to_string(undetermined) + " undetermined comparisons" + f.text();
  return r;
}

CriterionResult adequacy(const AcceptanceOptions& o) {
  CriterionResult r{10, "adequacy of closure interpretations", false, "", 0};
  bool ok = true;
  std::string detail;
  for (const char* name : {"empty", "arith-toy"}) {
    Theory t = load(o, name);
    std::vector<Term> terms;
    for (const auto& f : t.sig.functions())
      if (f.arity == 0) terms.push_back(Term::app(f.name));
    if (terms.size() < 2) terms.push_back(sample_term(t.sig));
    AdequacyOptions ao;
    ao.derivations = o.quick ? 10 : 30;
    ao.seed = o.seed;
    auto rep = adequacy_suite(t, terms, ao);
    double share = rep.checked ? static_cast<double>(rep.boundary) / static_cast<double>(rep.checked) : 1.0;
    ok = ok && rep.pass() && rep.checked > 0 && share < 0.2;
    detail += std::string(detail.empty() ? "" : "; ") + name + " " + std::to_string(rep.checked) + " instances, " +
              std::to_string(rep.violations) + " violations, " + std::to_string(rep.boundary) + " boundary (" +
              fmt(100 * share, 1) + "%)";
    for (const auto& ex : rep.examples) detail += " [" + ex + "]";
  }
  r.pass = ok;
  r.detail = detail;
  return r;
}

CriterionResult heyting(const AcceptanceOptions&) {
  CriterionResult r{11, "pre-Heyting laws of powerset algebras", false, "", 0};
  bool ok = true;
  std::size_t checks = 0;
  for (unsigned n = 1; n <= 3; ++n) {
    auto rep = check_algebra_laws(PowersetAlgebra(n));
    ok = ok && rep.ok;
    checks += rep.checks;
  }
  r.pass = ok;
  r.detail = "n = 1..3, " + std::to_string(checks) + " law instances";
  return r;
}

using Runner = CriterionResult (*)(const AcceptanceOptions&);

const std::map<int, Runner>& runners() {
  static const std::map<int, Runner> m{
      {1, delta_divergence}, {2, deltadelta_derivation}, {3, subject_reduction}, {4, transforms},
      {5, lsub},             {6, confusion},             {7, erasure},           {8, closure_lemmas},
      {9, algebra},          {10, adequacy},             {11, heyting}};
  return m;
}

}  // namespace

std::vector<int> criterion_ids() {
  std::vector<int> ids;
  for (const auto& [id, fn] : runners()) ids.push_back(id);
  return ids;
}

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  auto it = runners().find(id);
  if (it == runners().end()) throw std::invalid_argument("no criterion " + std::to_string(id));
  double t0 = now();
  CriterionResult r;
  try {
    r = it->second(opts);
  } catch (const std::exception& e) {
    r.id = id;
    r.name = "criterion " + std::to_string(id);
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = now() - t0;
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, const std::vector<int>& only) {
  std::vector<CriterionResult> out;
  for (int id : only.empty() ? criterion_ids() : only) out.push_back(run_criterion(id, opts));
  return out;
}

std::string to_line(const CriterionResult& r) {
  return std::string(r.pass ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name + ": " + r.detail +
         " (" + fmt(r.seconds) + " s)";
}

}  // namespace mdm
