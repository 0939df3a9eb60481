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

#include "mdm/corpus.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "mdm/reduction.hpp"

namespace mdm {

namespace {

std::size_t uniform(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[uniform(rng, v.size())];
}

void vars_of(const Term& t, std::set<std::string>& out) {
  if (t.is_var()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) vars_of(a, out);
}

void vars_of(const Prop& p, std::set<std::string>& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      for (const auto& a : p.args()) vars_of(a, out);
      return;
    case Prop::Kind::Imp:
      vars_of(p.lhs(), out);
      vars_of(p.rhs(), out);
      return;
    case Prop::Kind::Forall:
      out.insert(p.name());
      vars_of(p.body(), out);
      return;
  }
}

Term replace_term(const Term& in, const Term& t, const Term& v) {
  if (in == t) return v;
  if (in.is_var()) return in;
  std::vector<Term> args;
  for (const auto& a : in.args()) args.push_back(replace_term(a, t, v));
  return Term::app(in.name(), std::move(args));
}

/// Replaces the free occurrences of t in p by v. v must be fresh for p.
Prop abstract_term(const Prop& p, const Term& t, const Term& v, const std::set<std::string>& t_vars) {
  switch (p.kind()) {
    case Prop::Kind::Atom: {
      std::vector<Term> args;
      for (const auto& a : p.args()) args.push_back(replace_term(a, t, v));
      return Prop::atom(p.name(), std::move(args));
    }
    case Prop::Kind::Imp:
      return Prop::imp(abstract_term(p.lhs(), t, v, t_vars), abstract_term(p.rhs(), t, v, t_vars));
    case Prop::Kind::Forall:
      if (t_vars.count(p.name())) return p;
      return Prop::forall(p.name(), abstract_term(p.body(), t, v, t_vars));
  }
  return p;
}

void free_subterms(const Term& t, std::vector<Term>& out) {
  out.push_back(t);
  if (!t.is_var())
    for (const auto& a : t.args()) free_subterms(a, out);
}

/// Terms occurring in p none of whose variables is bound at the occurrence.
void free_subterms(const Prop& p, std::set<std::string>& bound, std::vector<Term>& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      for (const auto& a : p.args()) {
        std::vector<Term> subs;
        free_subterms(a, subs);
        for (auto& s : subs) {
          auto fv = free_term_vars(s);
          if (std::none_of(fv.begin(), fv.end(), [&](const std::string& x) { return bound.count(x); }))
            out.push_back(s);
        }
      }
      return;
    case Prop::Kind::Imp:
      free_subterms(p.lhs(), bound, out);
      free_subterms(p.rhs(), bound, out);
      return;
    case Prop::Kind::Forall: {
      bool added = bound.insert(p.name()).second;
      free_subterms(p.body(), bound, out);
      if (added) bound.erase(p.name());
      return;
    }
  }
}

void subformulas(const Prop& p, std::vector<Prop>& out) {
  out.push_back(p);
  if (p.is_imp()) {
    subformulas(p.lhs(), out);
    subformulas(p.rhs(), out);
  }
}

const std::vector<std::string> kProofNames = {"a", "b", "c", "d"};
const std::vector<std::string> kHypNames = {"p", "q", "r"};

class Generator {
 public:
  Generator(const Theory& t, const CorpusOptions& o, std::mt19937_64& rng) : t_(t), o_(o), rng_(rng) {}

  std::optional<Derivation> prove(const Context& g, const Prop& goal, std::size_t depth, std::size_t budget) {
    if (budget == 0) return std::nullopt;
    enum S { Ax, II, IE, FI, FE };
    std::vector<std::pair<S, double>> options = {{Ax, 3.0}};
    if (depth > 0) {
      options.push_back({II, 3.0});
      options.push_back({IE, budget >= 3 ? 2.0 : 0.0});
      options.push_back({FI, 2.0});
      options.push_back({FE, 1.0});
    }
    while (!options.empty()) {
      double total = 0;
      for (const auto& [s, w] : options) total += w;
      if (total <= 0) break;
      double r = std::uniform_real_distribution<double>(0, total)(rng_);
      std::size_t i = 0;
      for (; i + 1 < options.size(); ++i) {
        if (r < options[i].second) break;
        r -= options[i].second;
      }
      S s = options[i].first;
      options.erase(options.begin() + static_cast<std::ptrdiff_t>(i));
      std::optional<Derivation> d;
      switch (s) {
        case Ax:
          d = axiom(g, goal);
          break;
        case II:
          d = imp_intro(g, goal, depth, budget);
          break;
        case IE:
          d = imp_elim(g, goal, depth, budget);
          break;
        case FI:
          d = forall_intro(g, goal, depth, budget);
          break;
        case FE:
          d = forall_elim(g, goal, depth, budget);
          break;
      }
      if (d && d->subject.size() <= budget) return d;
    }
    return std::nullopt;
  }

 private:
  std::vector<Prop> neighbors(const Prop& p) {
    if (t_.rules.empty() && t_.term_rules.empty()) return {};
    return rewrite_neighbors(t_, p);
  }

  std::optional<Derivation> axiom(const Context& g, const Prop& goal) {
    std::vector<std::string> hits;
    for (const auto& [n, p] : g.entries()) {
      if (alpha_eq(p, goal) || (!t_.rules.empty() && congruent(t_, p, goal, o_.fuel / 4 + 1).yes()))
        hits.push_back(n);
    }
    if (hits.empty()) return std::nullopt;
    return make_axiom(o_.style, g, pick(hits, rng_), goal);
  }

  std::string binder_name(const Context& g) {
    std::vector<std::string> free;
    for (const auto& n : kProofNames)
      if (!g.has(n)) free.push_back(n);
    if (free.empty() || coin(rng_, 0.15)) return pick(kProofNames, rng_);  // shadowing
    return pick(free, rng_);
  }

  std::optional<Derivation> imp_intro(const Context& g, const Prop& goal, std::size_t depth, std::size_t budget) {
    std::vector<Prop> ws;
    if (goal.is_imp()) ws.push_back(goal);
    for (const auto& n : neighbors(goal))
      if (n.is_imp()) ws.push_back(n);
    if (ws.empty()) return std::nullopt;
    Prop w = pick(ws, rng_);
    std::string h = binder_name(g);
    auto body = prove(g.extend(h, w.lhs()), w.rhs(), depth - 1, budget - 1);
    if (!body) return std::nullopt;
    return make_imp_intro(g, h, w, goal, std::move(*body));
  }

  std::optional<Derivation> imp_elim(const Context& g, const Prop& goal, std::size_t depth, std::size_t budget) {
    std::vector<Prop> cuts;
    for (const auto& [n, p] : g.entries()) subformulas(p, cuts);
    subformulas(goal, cuts);
    auto fv = free_term_vars(goal);
    std::vector<std::string> fvs(fv.begin(), fv.end());
    cuts.push_back(random_prop(t_.sig, 1, {"x"}, fvs, rng_));
    Prop cut = pick(cuts, rng_);
    Prop w = Prop::imp(cut, goal);
    Prop fun_goal = w;
    if (coin(rng_, 0.3)) {
      auto ns = neighbors(w);
      if (!ns.empty()) fun_goal = pick(ns, rng_);
    }
    auto fun = prove(g, fun_goal, depth - 1, budget - 2);
    if (!fun) return std::nullopt;
    std::size_t used = fun->subject.size();
    if (used + 2 > budget) return std::nullopt;
    auto arg = prove(g, cut, depth - 1, budget - 1 - used);
    if (!arg) return std::nullopt;
    return make_imp_elim(g, w, goal, std::move(*fun), std::move(*arg));
  }

  std::optional<Derivation> forall_intro(const Context& g, const Prop& goal, std::size_t depth, std::size_t budget) {
    std::vector<Prop> ws;
    if (goal.is_forall()) ws.push_back(goal);
    for (const auto& n : neighbors(goal))
      if (n.is_forall()) ws.push_back(n);
    if (ws.empty()) return std::nullopt;
    Prop w = pick(ws, rng_);
    auto gfv = g.free_term_vars();
    if (gfv.count(w.name())) {
      std::set<std::string> taken = gfv;
      vars_of(w, taken);
      std::string x = fresh_name(w.name(), taken);
      w = Prop::forall(x, subst_term_in_prop(w.body(), w.name(), Term::var(x)));
    }
    std::size_t cost = o_.style == Style::Church ? 1 : 0;
    if (budget <= cost) return std::nullopt;
    auto body = prove(g, w.body(), depth - 1, budget - cost);
    if (!body) return std::nullopt;
    return make_forall_intro(g, w, goal, std::move(*body));
  }

  std::optional<Derivation> forall_elim(const Context& g, const Prop& goal, std::size_t depth, std::size_t budget) {
    std::size_t cost = o_.style == Style::Church ? 1 : 0;
    if (budget <= cost) return std::nullopt;
    std::vector<Term> occurring;
    std::set<std::string> bound;
    free_subterms(goal, bound, occurring);
    Term t = Term::var("x");
    if (!occurring.empty() && coin(rng_, 0.6)) {
      t = pick(occurring, rng_);
    } else {
      auto fv = free_term_vars(goal);
      std::vector<std::string> vars(fv.begin(), fv.end());
      vars.push_back("x");
      t = random_term(t_.sig, vars, 1, rng_);
    }
    std::set<std::string> taken = g.free_term_vars();
    vars_of(goal, taken);
    vars_of(t, taken);
    std::string v = fresh_name("y", taken);
    std::set<std::string> t_vars;
    vars_of(t, t_vars);
    Prop w = Prop::forall(v, abstract_term(goal, t, Term::var(v), t_vars));
    Prop premise_goal = w;
    if (coin(rng_, 0.3)) {
      auto ns = neighbors(w);
      if (!ns.empty()) premise_goal = pick(ns, rng_);
    }
    auto p = prove(g, premise_goal, depth - 1, budget - cost);
    if (!p) return std::nullopt;
    return make_forall_elim(g, w, t, goal, std::move(*p));
  }

  const Theory& t_;
  const CorpusOptions& o_;
  std::mt19937_64& rng_;
};

Prop random_goal(const Theory& t, const Context& g, std::mt19937_64& rng) {
  std::vector<Prop> hyps;
  for (const auto& [n, p] : g.entries()) hyps.push_back(p);
  Prop x = random_prop(t.sig, 1, {"x"}, {"x"}, rng);
  switch (uniform(rng, 6)) {
    case 0:
      if (!hyps.empty()) return pick(hyps, rng);
      break;
    case 1:
      if (!hyps.empty()) return Prop::imp(x, pick(hyps, rng));
      break;
    case 2:
      return Prop::imp(x, x);
    case 3:
      return Prop::forall("x", Prop::imp(x, x));
    case 4:
      if (!hyps.empty()) return Prop::imp(Prop::imp(x, pick(hyps, rng)), pick(hyps, rng));
      break;
    default:
      break;
  }
  return random_prop(t.sig, 2, {"x", "y"}, {"x"}, rng);
}

}  // namespace

Term random_term(const Signature& sig, const std::vector<std::string>& vars, std::size_t max_depth,
                 std::mt19937_64& rng) {
  std::vector<Term> leaves;
  for (const auto& v : vars) leaves.push_back(Term::var(v));
  std::vector<SymbolDecl> funs;
  for (const auto& f : sig.functions()) {
    if (f.arity == 0)
      leaves.push_back(Term::app(f.name));
    else
      funs.push_back(f);
  }
  if (leaves.empty()) throw std::invalid_argument("no variables or constants to build terms from");
  if (max_depth == 0 || funs.empty() || coin(rng, 0.6)) return pick(leaves, rng);
  const auto& f = pick(funs, rng);
  std::vector<Term> args;
  for (std::size_t i = 0; i < f.arity; ++i) args.push_back(random_term(sig, vars, max_depth - 1, rng));
  return Term::app(f.name, std::move(args));
}

Prop random_prop(const Signature& sig, std::size_t max_depth, const std::vector<std::string>& binders,
                 const std::vector<std::string>& free_vars, std::mt19937_64& rng) {
  if (sig.predicates().empty()) throw std::invalid_argument("signature has no predicate symbols");
  std::vector<std::string> scope = free_vars;
  auto gen = [&](auto&& self, std::size_t depth) -> Prop {
    std::size_t choice = depth == 0 ? 0 : uniform(rng, 10);
    if (choice < 3) {
      const auto& p = pick(sig.predicates(), rng);
      std::vector<Term> args;
      for (std::size_t i = 0; i < p.arity; ++i) {
        bool has_leaf = !scope.empty() ||
                        std::any_of(sig.functions().begin(), sig.functions().end(),
                                    [](const SymbolDecl& f) { return f.arity == 0; });
        args.push_back(has_leaf ? random_term(sig, scope, 1, rng) : Term::var("x"));
      }
      return Prop::atom(p.name, std::move(args));
    }
    if (choice < 7 || binders.empty()) {
      Prop a = self(self, depth - 1);
      return Prop::imp(std::move(a), self(self, depth - 1));
    }
    std::string x = pick(binders, rng);
    scope.push_back(x);
    Prop body = self(self, depth - 1);
    scope.pop_back();
    return Prop::forall(x, std::move(body));
  };
  return gen(gen, max_depth);
}

std::vector<LsubSample> lsub_samples(const Signature& sig, const std::vector<Term>& universe, std::size_t count,
                                     std::size_t max_depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> vars = {"x", "y", "z"};
  std::vector<LsubSample> out;
  while (out.size() < count) {
    LsubSample s{random_prop(sig, uniform(rng, max_depth + 1), vars, vars, rng), pick(vars, rng),
                 random_term(sig, vars, 2, rng), {}};
    if (coin(rng, 0.3)) s.term = pick(universe, rng);
    auto fv = free_term_vars(s.prop);
    fv.merge(free_term_vars(s.term));
    for (const auto& v : vars) {
      if (fv.count(v) || coin(rng, 0.3)) s.env.emplace(v, pick(universe, rng));
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Derivation> generate_corpus(const Theory& t, const CorpusOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  Generator gen(t, opts, rng);
  std::vector<Derivation> out;
  std::set<std::string> seen;
  const std::size_t max_attempts = std::max<std::size_t>(opts.count * 2000, 1000);
  for (std::size_t attempt = 0; attempt < max_attempts && out.size() < opts.count; ++attempt) {
    std::vector<std::pair<std::string, Prop>> entries;
    std::size_t k = uniform(rng, 4);
    for (std::size_t i = 0; i < k; ++i) entries.emplace_back(kHypNames[i], random_prop(t.sig, 2, {"x", "y"}, {"x"}, rng));
    Context g(std::move(entries));
    Prop goal = random_goal(t, g, rng);
    auto d = gen.prove(g, goal, opts.max_depth, opts.max_subject_size);
    if (!d || d->subject.size() > opts.max_subject_size) continue;
    if (opts.require_redex && is_normal(d->subject)) continue;
    std::string key = to_string(d->ctx) + "|" + alpha_key(d->subject) + "|" + alpha_key(d->prop);
    if (seen.count(key)) continue;
    if (!check_derivation(t, *d, opts.fuel).ok) continue;
    seen.insert(key);
    out.push_back(std::move(*d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exhaustive Church enumeration

namespace {

struct Judgement {
  Rule rule;
  std::uint32_t ctx;
  Proof subject;
  Prop prop;
  std::string hyp;
  std::optional<Prop> witness;
  std::optional<Term> inst;
  int p0 = -1;
  int p1 = -1;
  std::size_t height = 0;
};

class ChurchEnumerator {
 public:
  ChurchEnumerator(const Theory& t, const std::vector<Prop>& seeds, const std::vector<Term>& terms,
                   std::size_t max_judgements)
      : t_(t), seeds_(seeds), terms_(terms), max_(max_judgements) {
    if (seeds.size() > 12) throw std::invalid_argument("too many seed propositions");
    for (std::size_t i = 0; i < seeds.size(); ++i) names_.push_back("h" + std::to_string(i));
    for (std::uint32_t m = 0; m < (1u << seeds.size()); ++m) {
      std::vector<std::pair<std::string, Prop>> es;
      for (std::size_t i = 0; i < seeds.size(); ++i)
        if (m >> i & 1) es.emplace_back(names_[i], seeds[i]);
      ctxs_.emplace_back(std::move(es));
      ctx_fv_.push_back(ctxs_.back().free_term_vars());
    }
  }

  ChurchEnumeration run(std::size_t depth) {
    for (std::uint32_t m = 0; m < ctxs_.size(); ++m) {
      for (std::size_t i = 0; i < seeds_.size(); ++i) {
        if (!(m >> i & 1)) continue;
        for (const auto& c : with_neighbors(seeds_[i]))
          add({Rule::Axiom, m, Proof::var(names_[i]), c, names_[i], std::nullopt, std::nullopt, -1, -1, 0});
      }
    }
    for (std::size_t h = 1; h <= depth && out_.complete; ++h) {
      std::size_t end = nodes_.size();
      for (std::size_t i = 0; i < end && out_.complete; ++i) {
        if (nodes_[i].height != h - 1) continue;
        unary(static_cast<int>(i), h);
      }
      for (std::size_t i = 0; i < end && out_.complete; ++i) {
        if (!nodes_[i].prop.is_imp()) continue;
        const Judgement f = nodes_[i];
        auto it = by_ctx_prop_.find(key2(f.ctx, f.prop.lhs()));
        if (it == by_ctx_prop_.end()) continue;
        std::vector<int> args = it->second;
        for (int a : args) {
          if (static_cast<std::size_t>(a) >= end) continue;
          if (std::max(f.height, nodes_[a].height) != h - 1) continue;
          Proof subject = Proof::app(f.subject, nodes_[a].subject);
          add({Rule::ImpElim, f.ctx, std::move(subject), f.prop.rhs(), "", f.prop, std::nullopt, static_cast<int>(i), a,
               h});
          if (!out_.complete) break;
        }
      }
    }
    out_.judgements = nodes_.size();
    return out_;
  }

 private:
  std::vector<Prop> with_neighbors(const Prop& p) {
    std::vector<Prop> out{p};
    if (!t_.rules.empty() || !t_.term_rules.empty())
      for (auto& n : rewrite_neighbors(t_, p)) out.push_back(std::move(n));
    return out;
  }

  static std::string key2(std::uint32_t ctx, const Prop& p) { return std::to_string(ctx) + "|" + alpha_key(p); }

  void unary(int i, std::size_t h) {
    const Judgement n = nodes_[i];
    // Proof abstraction over each declared hypothesis.
    for (std::size_t k = 0; k < seeds_.size(); ++k) {
      if (!(n.ctx >> k & 1)) continue;
      Prop w = Prop::imp(seeds_[k], n.prop);
      for (const auto& c : with_neighbors(w))
        add({Rule::ImpIntro, n.ctx & ~(1u << k), Proof::lam(names_[k], n.subject), c, names_[k], w, std::nullopt, i,
             -1, h});
    }
    // Term abstraction.
    std::set<std::string> xs = free_term_vars(n.prop);
    xs.insert("x");
    for (const auto& x : xs) {
      if (ctx_fv_[n.ctx].count(x)) continue;
      Prop w = Prop::forall(x, n.prop);
      for (const auto& c : with_neighbors(w))
        add({Rule::ForallIntro, n.ctx, Proof::tlam(x, n.subject), c, "", w, std::nullopt, i, -1, h});
    }
    // Term application.
    if (n.prop.is_forall()) {
      for (const auto& t : terms_)
        add({Rule::ForallElim, n.ctx, Proof::tapp(n.subject, t), subst_term_in_prop(n.prop.body(), n.prop.name(), t),
             "", n.prop, t, i, -1, h});
    }
  }

  void add(Judgement j) {
    if (!out_.complete) return;
    std::string key = std::to_string(j.ctx) + "|" + alpha_key(j.subject) + "|" + alpha_key(j.prop);
    if (!seen_.insert(key).second) return;
    if (nodes_.size() >= max_) {
      out_.complete = false;
      return;
    }
    int idx = static_cast<int>(nodes_.size());
    if (j.subject.is_lam()) {
      ++out_.lambda_subjects;
      if (j.prop.is_forall()) {
        ++out_.forall_typed_lambdas;
        nodes_.push_back(j);
        if (out_.examples.size() < 5) out_.examples.push_back(materialize(idx));
        by_ctx_prop_[key2(j.ctx, j.prop)].push_back(idx);
        return;
      }
    }
    by_ctx_prop_[key2(j.ctx, j.prop)].push_back(idx);
    nodes_.push_back(std::move(j));
  }

  Derivation materialize(int i) const {
    const Judgement& j = nodes_[i];
    const Context& g = ctxs_[j.ctx];
    switch (j.rule) {
      case Rule::Axiom:
        return make_axiom(Style::Church, g, j.hyp, j.prop);
      case Rule::ImpIntro:
        return make_imp_intro(g, j.hyp, *j.witness, j.prop, materialize(j.p0));
      case Rule::ImpElim:
        return make_imp_elim(g, *j.witness, j.prop, materialize(j.p0), materialize(j.p1));
      case Rule::ForallIntro:
        return make_forall_intro(g, *j.witness, j.prop, materialize(j.p0));
      case Rule::ForallElim:
        return make_forall_elim(g, *j.witness, *j.inst, j.prop, materialize(j.p0));
    }
    throw std::logic_error("unreachable");
  }

  const Theory& t_;
  const std::vector<Prop>& seeds_;
  const std::vector<Term>& terms_;
  std::size_t max_;
  std::vector<std::string> names_;
  std::vector<Context> ctxs_;
  std::vector<std::set<std::string>> ctx_fv_;
  std::vector<Judgement> nodes_;
  std::unordered_set<std::string> seen_;
  std::unordered_map<std::string, std::vector<int>> by_ctx_prop_;
  ChurchEnumeration out_;
};

}  // namespace

ChurchEnumeration enumerate_church_derivations(const Theory& t, const std::vector<Prop>& seeds,
                                               const std::vector<Term>& terms, std::size_t depth,
                                               std::size_t max_judgements) {
  return ChurchEnumerator(t, seeds, terms, max_judgements).run(depth);
}

}  // namespace mdm
