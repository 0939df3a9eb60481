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

#include "mdm/candidates.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mdm/corpus.hpp"
#include "mdm/reduction.hpp"

namespace mdm {

std::string_view to_string(Tri v) {
  switch (v) {
    case Tri::Out:
      return "out";
    case Tri::In:
      return "in";
    case Tri::Unknown:
      return "unknown";
  }
  return "?";
}

std::string_view to_string(CRVerdict::Kind kind) {
  switch (kind) {
    case CRVerdict::Kind::Pass:
      return "pass";
    case CRVerdict::Kind::Fail:
      return "fail";
    case CRVerdict::Kind::Unknown:
      return "unknown";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Finite candidates

FiniteCandidate::FiniteCandidate(const Universe& u, Tri fill) : u_(&u), status_(u.size(), fill) {}

FiniteCandidate FiniteCandidate::of(const Universe& u, const std::vector<TermId>& members) {
  FiniteCandidate c(u);
  for (TermId t : members) {
    auto i = u.index_of(t);
    if (!i) throw std::invalid_argument("candidate member outside the universe: " + u.bank().show(t));
    c.status_[*i] = Tri::In;
  }
  return c;
}

void FiniteCandidate::set(std::size_t index, Tri v) {
  status_[index] = v;
  cache_.reset();
}

Tri FiniteCandidate::status(TermId t) const {
  if (auto i = u_->index_of(t)) return status_[*i];
  return oracle_ ? oracle_(t) : Tri::Unknown;
}

std::size_t FiniteCandidate::count(Tri v) const { return std::count(status_.begin(), status_.end(), v); }

std::vector<TermId> FiniteCandidate::members() const {
  std::vector<TermId> out;
  for (std::size_t i = 0; i < status_.size(); ++i)
    if (status_[i] == Tri::In) out.push_back(u_->members()[i]);
  return out;
}

const CRVerdicts& FiniteCandidate::verdicts(std::size_t n_max) const {
  if (!cache_ || cache_n_ != n_max) {
    cache_ = CRVerdicts{cr1(*this), cr2(*this), cr3(*this), cr3aux(*this), cr3prime(*this, n_max)};
    cache_n_ = n_max;
  }
  return *cache_;
}

namespace {

void fail_with(CRVerdict& v, const std::string& what) {
  if (v.kind != CRVerdict::Kind::Fail) v.counterexample = what;
  v.kind = CRVerdict::Kind::Fail;
}

}  // namespace

CRVerdict cr1(const FiniteCandidate& s) {
  CRVerdict v;
  TermBank& bank = s.universe().bank();
  bool unknown = false;
  for (TermId t : s.members()) {
    ++v.checked;
    auto sn = bank.sn(t);
    if (sn.kind == TermBank::SN::Kind::Diverges) fail_with(v, bank.show(t) + " is not strongly normalizing");
    if (sn.kind == TermBank::SN::Kind::Unknown) {
      unknown = true;
      ++v.boundary;
    }
  }
  if (!v.fail() && unknown) v.kind = CRVerdict::Kind::Unknown;
  return v;
}

CRVerdict cr2(const FiniteCandidate& s) {
  CRVerdict v;
  TermBank& bank = s.universe().bank();
  for (TermId t : s.members()) {
    for (TermId r : bank.reducts(t)) {
      ++v.checked;
      Tri st = s.status(r);
      if (st == Tri::Out) fail_with(v, bank.show(t) + " -> " + bank.show(r) + " leaves the set");
      if (st == Tri::Unknown) ++v.boundary;
    }
  }
  return v;
}

namespace {

CRVerdict cr3_impl(const FiniteCandidate& s, bool non_normal_only) {
  CRVerdict v;
  const Universe& u = s.universe();
  TermBank& bank = u.bank();
  for (std::size_t i = 0; i < u.size(); ++i) {
    TermId t = u.members()[i];
    if (!bank.neutral(t)) continue;
    if (non_normal_only && bank.normal(t)) continue;
    ++v.checked;
    if (s.at(i) == Tri::In) continue;
    bool all_in = true;
    bool any_out = false;
    for (TermId r : bank.reducts(t)) {
      Tri st = s.status(r);
      all_in = all_in && st == Tri::In;
      any_out = any_out || st == Tri::Out;
    }
    if (any_out) continue;
    if (all_in && s.at(i) == Tri::Out)
      fail_with(v, bank.show(t) + " is neutral with every reduct in the set but is missing");
    else
      ++v.boundary;
  }
  return v;
}

}  // namespace

CRVerdict cr3(const FiniteCandidate& s) { return cr3_impl(s, false); }
CRVerdict cr3aux(const FiniteCandidate& s) { return cr3_impl(s, true); }

CRVerdict cr3prime(const FiniteCandidate& s, std::size_t n_max) {
  CRVerdict v;
  const Universe& u = s.universe();
  TermBank& bank = u.bank();
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (s.at(i) == Tri::In) continue;
    for (const auto& d : u.decompositions(i, n_max)) {
      ++v.checked;
      bool all_in = true;
      bool any_out = false;
      for (TermId r : d.instances) {
        Tri st = s.status(r);
        all_in = all_in && st == Tri::In;
        any_out = any_out || st == Tri::Out;
      }
      if (any_out) continue;
      if (all_in && s.at(i) == Tri::Out) {
        std::string where;
        for (const auto& p : d.positions) where += (where.empty() ? "" : ", ") + bank.show(bank.at(u.members()[i], p));
        fail_with(v, bank.show(u.members()[i]) + " is missing although every instance of marking {" + where +
                         "} is in the set");
      } else {
        ++v.boundary;
      }
    }
  }
  return v;
}

Tri omega(TermBank& bank, TermId t) {
  if (!bank.neutral(t) || bank.normal(t)) return Tri::Out;
  auto sn = bank.sn(t);
  if (sn.kind == TermBank::SN::Kind::SN) return Tri::In;
  return sn.kind == TermBank::SN::Kind::Diverges ? Tri::Out : Tri::Unknown;
}

Tri omega(const Proof& p, std::size_t fuel) {
  if (!is_neutral(p) || is_normal(p)) return Tri::Out;
  auto v = sn_verdict(p, fuel);
  if (v.kind == SNVerdict::Kind::SN) return Tri::In;
  return v.kind == SNVerdict::Kind::Diverges ? Tri::Out : Tri::Unknown;
}

FiniteCandidate imp_candidate(const FiniteCandidate& a, const FiniteCandidate& b) {
  if (&a.universe() != &b.universe()) throw std::invalid_argument("candidates over different universes");
  const Universe& u = a.universe();
  TermBank& bank = u.bank();
  FiniteCandidate out(u, Tri::In);
  std::vector<std::size_t> domain;
  for (std::size_t j = 0; j < u.size(); ++j)
    if (a.at(j) != Tri::Out) domain.push_back(j);
  for (std::size_t i = 0; i < u.size(); ++i) {
    Tri r = Tri::In;
    for (std::size_t j : domain) {
      Tri st = b.status(bank.app(u.members()[i], u.members()[j]));
      if (a.at(j) == Tri::In && st == Tri::Out) {
        r = Tri::Out;
        break;
      }
      if (st != Tri::In) r = Tri::Unknown;
    }
    out.set(i, r);
  }
  return out;
}

FiniteCandidate forall_candidate(const std::vector<const FiniteCandidate*>& family) {
  if (family.empty()) throw std::invalid_argument("empty family");
  const Universe& u = family.front()->universe();
  for (const auto* c : family)
    if (&c->universe() != &u) throw std::invalid_argument("candidates over different universes");
  FiniteCandidate out(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    Tri r = Tri::In;
    for (const auto* c : family) {
      if (c->at(i) == Tri::Out) {
        r = Tri::Out;
        break;
      }
      if (c->at(i) == Tri::Unknown) r = Tri::Unknown;
    }
    out.set(i, r);
  }
  bool oracles = std::all_of(family.begin(), family.end(), [](const auto* c) { return c->has_oracle(); });
  if (oracles) {
    std::vector<const FiniteCandidate*> fam = family;
    out.set_oracle([fam](TermId t) {
      Tri r = Tri::In;
      for (const auto* c : fam) {
        Tri st = c->status(t);
        if (st == Tri::Out) return Tri::Out;
        if (st == Tri::Unknown) r = Tri::Unknown;
      }
      return r;
    });
  }
  return out;
}

FiniteCandidate cr_closure(const Universe& u, const std::vector<TermId>& seeds, std::size_t n_max) {
  TermBank& bank = u.bank();
  FiniteCandidate c = FiniteCandidate::of(u, seeds);
  std::vector<Tri> st(u.size(), Tri::Out);
  for (std::size_t i = 0; i < u.size(); ++i) st[i] = c.at(i);
  auto status = [&](TermId t) {
    auto j = u.index_of(t);
    return j ? st[*j] : Tri::Unknown;
  };
  // Least fixpoint of reduct closure and forced expansions.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (st[i] == Tri::In) {
        for (TermId r : bank.reducts(u.members()[i]))
          if (auto j = u.index_of(r); j && st[*j] != Tri::In) {
            st[*j] = Tri::In;
            changed = true;
          }
        continue;
      }
      for (const auto& d : u.decompositions(i, n_max)) {
        bool all_in = std::all_of(d.instances.begin(), d.instances.end(),
                                  [&](TermId r) { return status(r) == Tri::In; });
        if (all_in) {
          st[i] = Tri::In;
          changed = true;
          break;
        }
      }
    }
  }
  // Terms that a larger universe might force in.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (st[i] != Tri::Out) continue;
      for (const auto& d : u.decompositions(i, n_max)) {
        bool none_out = std::none_of(d.instances.begin(), d.instances.end(),
                                     [&](TermId r) { return status(r) == Tri::Out; });
        if (none_out) {
          st[i] = Tri::Unknown;
          changed = true;
          break;
        }
      }
    }
  }
  for (std::size_t i = 0; i < u.size(); ++i) c.set(i, st[i]);
  return c;
}

FiniteCandidate restrict_to(const FiniteCandidate& c, const Universe& u) {
  if (&c.universe().bank() != &u.bank()) throw std::invalid_argument("universes over different banks");
  FiniteCandidate out(u);
  for (std::size_t i = 0; i < u.size(); ++i) out.set(i, c.status(u.members()[i]));
  const FiniteCandidate* src = &c;
  out.set_oracle([src](TermId t) { return src->status(t); });
  return out;
}

// ---------------------------------------------------------------------------
// Universal context

std::string UniversalContext::name(const Prop& p, std::size_t index) {
  auto key = std::make_pair(alpha_key(p), index);
  auto it = names_.find(key);
  if (it != names_.end()) return it->second;
  std::string n = prefix_ + std::to_string(entries_.size());
  names_.emplace(key, n);
  entries_.emplace_back(n, p);
  return n;
}

Context UniversalContext::slice(const std::vector<std::pair<Prop, std::size_t>>& wanted) {
  std::vector<std::pair<std::string, Prop>> out;
  std::set<std::string> seen;
  for (const auto& [p, count] : wanted)
    for (std::size_t i = 0; i < count; ++i) {
      std::string n = name(p, i);
      if (seen.insert(n).second) out.emplace_back(n, p);
    }
  return Context(std::move(out));
}

// ---------------------------------------------------------------------------
// Derivation search

namespace {

std::string context_key(const Context& ctx) {
  std::string k;
  for (const auto& [n, p] : ctx.entries()) k += n + ":" + alpha_key(p) + ";";
  return k;
}

void subterms(const Term& t, std::vector<Term>& out) {
  out.push_back(t);
  for (const auto& a : t.args()) subterms(a, out);
}

void atom_subterms(const Prop& p, std::vector<Term>& out) {
  switch (p.kind()) {
    case Prop::Kind::Atom:
      for (const auto& a : p.args()) subterms(a, out);
      return;
    case Prop::Kind::Imp:
      atom_subterms(p.lhs(), out);
      return atom_subterms(p.rhs(), out);
    case Prop::Kind::Forall:
      return atom_subterms(p.body(), out);
  }
}

}  // namespace

DerivationSearch::DerivationSearch(const Theory& t, Context delta, std::vector<Term> terms, SearchBounds bounds)
    : theory_(&t),
      congruence_(t, bounds.fuel),
      delta_(std::move(delta)),
      terms_(std::move(terms)),
      bounds_(bounds) {}

bool DerivationSearch::cong(const Prop& a, const Prop& b) { return congruence_(a, b).yes(); }

const std::vector<Prop>& DerivationSearch::cls(const Prop& p) {
  std::string key = alpha_key(p);
  auto it = classes_.find(key);
  if (it != classes_.end()) return it->second;
  std::vector<Prop> members;
  if (theory_->rules.empty() && theory_->term_rules.empty())
    members.push_back(p);
  else
    members = congruence_class(*theory_, p, p.size() + bounds_.class_slack, bounds_.fuel);
  return classes_.emplace(key, std::move(members)).first->second;
}

std::vector<Prop> DerivationSearch::exposed(const Prop& p, Prop::Kind kind) {
  std::vector<Prop> out;
  if (p.kind() == kind) out.push_back(p);
  for (const auto& q : cls(p))
    if (q.kind() == kind && !alpha_eq(q, p)) out.push_back(q);
  return out;
}

std::vector<Term> DerivationSearch::instances(const Prop& w, const Prop* target, const Prop& goal) {
  std::vector<Term> cands = terms_;
  for (const auto& v : free_term_vars(goal)) cands.push_back(Term::var(v));
  if (target) atom_subterms(*target, cands);
  std::vector<Term> out;
  std::set<std::string> seen;
  for (auto& t : cands)
    if (seen.insert(to_string(t)).second) out.push_back(std::move(t));
  (void)w;
  return out;
}

const std::vector<Prop>& DerivationSearch::pool(const Prop& goal) {
  std::string gk = alpha_key(goal);
  auto it = pools_.find(gk);
  if (it != pools_.end()) return it->second.second;

  std::vector<Prop> base;
  std::set<std::string> seen;
  auto add = [&](auto& self, const Prop& p) -> void {
    if (!seen.insert(alpha_key(p)).second) return;
    base.push_back(p);
    switch (p.kind()) {
      case Prop::Kind::Atom:
        return;
      case Prop::Kind::Imp:
        self(self, p.lhs());
        return self(self, p.rhs());
      case Prop::Kind::Forall:
        self(self, p.body());
        for (const auto& t : terms_) self(self, subst_term_in_prop(p.body(), p.name(), t));
        return;
    }
  };
  add(add, goal);
  for (const auto& [n, p] : delta_.entries()) add(add, p);
  std::size_t n0 = base.size();
  for (std::size_t i = 0; i < n0; ++i) {
    std::vector<Prop> c = cls(base[i]);
    for (const auto& q : c) add(add, q);
  }
  auto by_size = [](const Prop& a, const Prop& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return alpha_key(a) < alpha_key(b);
  };
  std::sort(base.begin(), base.end(), by_size);
  std::vector<Prop> imps;
  for (const auto& l : base)
    for (const auto& r : base) {
      Prop i = Prop::imp(l, r);
      if (!seen.count(alpha_key(i))) imps.push_back(i);
    }
  std::sort(imps.begin(), imps.end(), by_size);
  std::vector<Prop> out = base;
  for (auto& i : imps) {
    if (out.size() >= bounds_.max_pool) break;
    out.push_back(std::move(i));
  }
  std::size_t id = pools_.size();
  return pools_.emplace(gk, std::make_pair(id, std::move(out))).first->second.second;
}

std::optional<Derivation> DerivationSearch::find(const Proof& subject, const Prop& goal) {
  pool_ = &pool(goal);
  pool_id_ = pools_.at(alpha_key(goal)).first;
  Scope s{delta_, context_key(delta_)};
  Result r = check(s, subject, goal, bounds_.depth);
  if (!r) return std::nullopt;
  return *r;
}

DerivationSearch::Result DerivationSearch::check(const Scope& s, const Proof& p, const Prop& goal, std::size_t d) {
  std::string key = std::to_string(pool_id_) + "#" + s.key + "|" + to_string(p) + "|" + alpha_key(goal) + "|" +
                    std::to_string(d);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Result r = check_uncached(s, p, goal, d);
  memo_.emplace(std::move(key), r);
  return r;
}

DerivationSearch::Result DerivationSearch::check_uncached(const Scope& s, const Proof& p, const Prop& goal,
                                                         std::size_t d) {
  ++nodes_;
  switch (p.kind()) {
    case Proof::Kind::Var:
      if (const Prop* h = s.ctx.lookup(p.name())) {
        Derivation ax = make_axiom(Style::Curry, s.ctx, p.name(), *h);
        if (Result r = spine(s, ax, *h, {}, 0, goal, d)) return r;
      }
      break;
    case Proof::Kind::Lam:
      for (const auto& w : exposed(goal, Prop::Kind::Imp)) {
        Scope inner{s.ctx.extend(p.name(), w.lhs()), s.key + p.name() + ":" + alpha_key(w.lhs()) + ";"};
        if (Result prem = check(inner, p.body(), w.rhs(), d))
          return std::make_shared<const Derivation>(make_imp_intro(s.ctx, p.name(), w, goal, *prem));
      }
      break;
    case Proof::Kind::App: {
      std::vector<Proof> args;
      Proof head = p;
      while (head.is_app()) {
        args.push_back(head.arg());
        head = head.fun();
      }
      std::reverse(args.begin(), args.end());
      if (head.is_var()) {
        if (const Prop* h = s.ctx.lookup(head.name())) {
          Derivation ax = make_axiom(Style::Curry, s.ctx, head.name(), *h);
          if (Result r = spine(s, ax, *h, args, 0, goal, d)) return r;
        }
      } else if (d >= 1) {
        const std::vector<Prop> cuts = *pool_;
        for (const auto& b : cuts) {
          Result a = check(s, p.arg(), b, d - 1);
          if (!a) continue;
          Prop w = Prop::imp(b, goal);
          if (Result f = check(s, p.fun(), w, d - 1))
            return std::make_shared<const Derivation>(make_imp_elim(s.ctx, w, goal, *f, *a));
        }
      }
      break;
    }
    default:
      return nullptr;
  }
  if (d >= 1) {
    for (const auto& w : exposed(goal, Prop::Kind::Forall)) {
      std::string x = w.name();
      Prop body = w.body();
      auto fv = s.ctx.free_term_vars();
      if (fv.count(x)) {
        auto avoid = fv;
        avoid.merge(free_term_vars(w));
        std::string y = fresh_name(x, avoid);
        body = subst_term_in_prop(body, x, Term::var(y));
        x = y;
      }
      if (Result prem = check(s, p, body, d - 1))
        return std::make_shared<const Derivation>(make_forall_intro(s.ctx, Prop::forall(x, body), goal, *prem));
    }
  }
  return nullptr;
}

DerivationSearch::Result DerivationSearch::spine(const Scope& s, const Derivation& head, const Prop& type,
                                                 const std::vector<Proof>& args, std::size_t i, const Prop& goal,
                                                 std::size_t d) {
  if (i == args.size()) {
    if (cong(type, goal))
      return std::make_shared<const Derivation>(alpha_eq(type, goal) ? head : reconclude(head, goal));
  } else {
    for (const auto& w : exposed(type, Prop::Kind::Imp)) {
      Result a = check(s, args[i], w.lhs(), d);
      if (!a) continue;
      Derivation next = make_imp_elim(s.ctx, w, w.rhs(), head, *a);
      if (Result r = spine(s, next, w.rhs(), args, i + 1, goal, d)) return r;
    }
  }
  if (d == 0) return nullptr;
  for (const auto& w : exposed(type, Prop::Kind::Forall)) {
    for (const auto& t : instances(w, i == args.size() ? &goal : nullptr, goal)) {
      Prop inst = subst_term_in_prop(w.body(), w.name(), t);
      Derivation next = make_forall_elim(s.ctx, w, t, inst, head);
      if (Result r = spine(s, next, inst, args, i, goal, d - 1)) return r;
    }
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Closure

ClosureEngine::ClosureEngine(const Theory& t, TermBank& bank, Context delta, std::vector<Term> terms,
                             ClosureBounds bounds)
    : theory_(&t),
      bank_(&bank),
      search_(t, std::move(delta), std::move(terms), SearchBounds{bounds.depth, bounds.fuel}),
      bounds_(bounds) {}

std::uint32_t ClosureEngine::goal_id(const Prop& goal) {
  std::string k = alpha_key(goal);
  auto it = goals_.find(k);
  if (it != goals_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(goal_props_.size());
  goals_.emplace(k, id);
  goal_props_.push_back(goal);
  return id;
}

bool ClosureEngine::in_cl0(TermId t, const Prop& goal) {
  std::uint64_t key = (std::uint64_t(goal_id(goal)) << 40) | t;
  auto it = cl0_memo_.find(key);
  if (it != cl0_memo_.end()) return it->second;
  bool r = false;
  if (bank_->size(t) > bounds_.max_term_size)
    ++capped_;
  else if (bank_->loose(t) == 0)
    r = search_.find(bank_->to_proof(t), goal).has_value();
  cl0_memo_.emplace(key, r);
  return r;
}

const std::vector<std::vector<TermId>>& ClosureEngine::omega_instances(TermId t) {
  auto it = omega_memo_.find(t);
  if (it != omega_memo_.end()) return it->second;
  std::vector<Path> positions;
  for (auto& p : bank_->redex_positions(t)) {
    auto sn = bank_->sn(bank_->at(t, p));
    if (sn.kind == TermBank::SN::Kind::Unknown) ++omega_unknown_;
    if (sn.sn()) positions.push_back(std::move(p));
  }
  std::vector<std::vector<TermId>> out;
  for (auto& d : bank_->decompositions(t, positions, bounds_.n_max)) out.push_back(std::move(d.instances));
  return omega_memo_.emplace(t, std::move(out)).first->second;
}

bool ClosureEngine::in_stage(TermId t, const Prop& goal, std::size_t k) {
  if (k == 0) return in_cl0(t, goal);
  std::uint64_t key = (std::uint64_t(goal_id(goal)) << 40) | (std::uint64_t(k & 0xff) << 32) | t;
  auto it = stage_memo_.find(key);
  if (it != stage_memo_.end()) return it->second;
  bool r = in_stage(t, goal, k - 1);
  if (!r && bank_->size(t) > bounds_.max_term_size) ++capped_;
  if (!r && bank_->size(t) <= bounds_.max_term_size) {
    const auto& decs = omega_instances(t);
    for (const auto& inst : decs) {
      bool all = true;
      for (TermId x : inst)
        if (!in_stage(x, goal, k - 1)) {
          all = false;
          break;
        }
      if (all) {
        r = true;
        break;
      }
    }
  }
  stage_memo_.emplace(key, r);
  return r;
}

Tri ClosureEngine::member(TermId t, const Prop& goal, std::size_t k_floor) {
  if (bank_->size(t) > bounds_.max_term_size) return Tri::Unknown;
  auto sn = bank_->sn(t);
  if (sn.sn()) return in_stage(t, goal, std::max(k_floor, sn.max_length)) ? Tri::In : Tri::Out;
  return in_stage(t, goal, k_floor) ? Tri::In : Tri::Unknown;
}

std::optional<Derivation> ClosureEngine::certificate(TermId t, const Prop& goal) {
  if (bank_->loose(t) != 0) return std::nullopt;
  return search_.find(bank_->to_proof(t), goal);
}

FiniteCandidate ClosureEngine::cl0(const Universe& u, const Prop& a, const Environment& env) {
  Prop goal = subst_terms(a, env);
  FiniteCandidate c(u);
  for (std::size_t i = 0; i < u.size(); ++i) c.set(i, in_cl0(u.members()[i], goal) ? Tri::In : Tri::Out);
  c.set_oracle([this, goal](TermId t) { return in_cl0(t, goal) ? Tri::In : Tri::Out; });
  return c;
}

ClosureTable ClosureEngine::closure(const Universe& u, const Prop& a, const Environment& env, std::size_t k_max) {
  ClosureTable tab{a, env, subst_terms(a, env), k_max, &u, {}, {}, {}, {}};
  tab.in_stage.assign(k_max + 1, std::vector<bool>(u.size(), false));
  tab.first_stage.assign(u.size(), std::nullopt);
  tab.sn_max.assign(u.size(), std::nullopt);
  for (std::size_t i = 0; i < u.size(); ++i) {
    TermId t = u.members()[i];
    auto sn = bank_->sn(t);
    if (sn.sn()) tab.sn_max[i] = sn.max_length;
    for (std::size_t k = 0; k <= k_max; ++k) {
      tab.in_stage[k][i] = in_stage(t, tab.goal, k);
      if (tab.in_stage[k][i] && !tab.first_stage[i]) tab.first_stage[i] = k;
    }
  }
  for (std::size_t k = 0; k <= k_max; ++k) {
    FiniteCandidate c(u);
    for (std::size_t i = 0; i < u.size(); ++i) c.set(i, tab.in_stage[k][i] ? Tri::In : Tri::Out);
    Prop goal = tab.goal;
    c.set_oracle([this, goal, k](TermId t) { return in_stage(t, goal, k) ? Tri::In : Tri::Out; });
    tab.stages.push_back(std::move(c));
  }
  return tab;
}

std::size_t ClosureTable::stage_size(std::size_t k) const {
  return static_cast<std::size_t>(std::count(in_stage[k].begin(), in_stage[k].end(), true));
}

FiniteCandidate cl_step(const FiniteCandidate& prev, std::size_t n_max) {
  const Universe& u = prev.universe();
  TermBank& bank = u.bank();
  FiniteCandidate out(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (prev.at(i) == Tri::In) {
      out.set(i, Tri::In);
      continue;
    }
    TermId t = u.members()[i];
    std::vector<Path> positions;
    bool skipped = false;
    for (auto& p : bank.redex_positions(t)) {
      Tri o = omega(bank, bank.at(t, p));
      if (o == Tri::In) positions.push_back(std::move(p));
      if (o == Tri::Unknown) skipped = true;
    }
    Tri r = prev.at(i) == Tri::Unknown || skipped ? Tri::Unknown : Tri::Out;
    for (const auto& d : bank.decompositions(t, positions, n_max)) {
      bool all_in = true;
      bool any_out = false;
      for (TermId x : d.instances) {
        Tri st = prev.status(x);
        all_in = all_in && st == Tri::In;
        any_out = any_out || st == Tri::Out;
      }
      if (all_in) {
        r = Tri::In;
        break;
      }
      if (!any_out) r = Tri::Unknown;
    }
    out.set(i, r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lemma checks

void LemmaReport::violation(std::string what) {
  ++violations;
  if (examples.size() < 5) examples.push_back(std::move(what));
}

namespace {

class Timer {
 public:
  explicit Timer(LemmaReport& r) : r_(r), start_(std::chrono::steady_clock::now()) {}
  ~Timer() { r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count(); }

 private:
  LemmaReport& r_;
  std::chrono::steady_clock::time_point start_;
};

Tri all_of_tri(std::initializer_list<Tri> xs) {
  Tri r = Tri::In;
  for (Tri x : xs) {
    if (x == Tri::Out) return Tri::Out;
    if (x == Tri::Unknown) r = Tri::Unknown;
  }
  return r;
}

}  // namespace

LemmaReport check_monotone(const ClosureTable& tab) {
  LemmaReport r;
  r.lemma = "monotone";
  Timer timer(r);
  const TermBank& bank = tab.universe->bank();
  for (std::size_t k = 0; k < tab.k_max; ++k)
    for (std::size_t i = 0; i < tab.universe->size(); ++i) {
      ++r.checked;
      if (tab.in_stage[k][i] && !tab.in_stage[k + 1][i])
        r.violation(bank.show(tab.universe->members()[i]) + " in stage " + std::to_string(k) + " but not in " +
                    std::to_string(k + 1));
    }
  return r;
}

LemmaReport check_mink(const ClosureTable& tab) {
  LemmaReport r;
  r.lemma = "mink";
  Timer timer(r);
  const TermBank& bank = tab.universe->bank();
  for (std::size_t i = 0; i < tab.universe->size(); ++i) {
    if (!tab.first_stage[i]) continue;
    ++r.checked;
    if (!tab.sn_max[i]) {
      ++r.boundary;
      continue;
    }
    if (*tab.first_stage[i] > *tab.sn_max[i])
      r.violation(bank.show(tab.universe->members()[i]) + " enters at stage " + std::to_string(*tab.first_stage[i]) +
                  " with longest reduction " + std::to_string(*tab.sn_max[i]));
  }
  return r;
}

LemmaReport check_normal_stage0(const ClosureTable& tab) {
  LemmaReport r;
  r.lemma = "normal-stage0";
  Timer timer(r);
  TermBank& bank = tab.universe->bank();
  for (std::size_t i = 0; i < tab.universe->size(); ++i) {
    TermId t = tab.universe->members()[i];
    if (!tab.first_stage[i] || !bank.normal(t)) continue;
    ++r.checked;
    if (*tab.first_stage[i] != 0)
      r.violation(bank.show(t) + " is normal but enters at stage " + std::to_string(*tab.first_stage[i]));
  }
  return r;
}

LemmaReport check_clc(ClosureEngine& e, const ClosureTable& tab) {
  LemmaReport r;
  r.lemma = "clc";
  Timer timer(r);
  TermBank& bank = e.bank();
  for (std::size_t k = 0; k <= tab.k_max; ++k)
    for (std::size_t i = 0; i < tab.universe->size(); ++i) {
      if (!tab.in_stage[k][i]) continue;
      TermId t = tab.universe->members()[i];
      ++r.checked;
      auto sn = bank.sn(t);
      if (sn.kind == TermBank::SN::Kind::Diverges) r.violation(bank.show(t) + " is in a stage but not SN");
      if (sn.kind == TermBank::SN::Kind::Unknown) ++r.boundary;
      for (TermId x : bank.reducts(t)) {
        ++r.checked;
        if (bank.size(x) > e.bounds().max_term_size) {
          ++r.boundary;
          continue;
        }
        if (!e.in_stage(x, tab.goal, k))
          r.violation(bank.show(t) + " -> " + bank.show(x) + " leaves stage " + std::to_string(k));
      }
    }
  return r;
}

LemmaReport check_lambdacl(ClosureEngine& e, const Universe& u, const Prop& a, const Prop& b,
                           const Environment& env, std::size_t k_floor) {
  LemmaReport r;
  r.lemma = "lambdacl";
  Timer timer(r);
  TermBank& bank = e.bank();
  Prop ga = subst_terms(a, env);
  Prop gb = subst_terms(b, env);
  Prop gab = subst_terms(Prop::imp(a, b), env);
  std::vector<std::string> alphas;
  for (const auto& [n, p] : e.delta().entries())
    if (alpha_eq(p, ga)) alphas.push_back(n);
  for (TermId t : u.members()) {
    if (bank.kind(t) != TermBank::Kind::Lam) continue;
    for (const auto& al : alphas) {
      if (bank.has_free(t, al)) continue;
      TermId inst = bank.shift(bank.subst(bank.body(t), 0, bank.free(al)), -1);
      Tri premise = e.member(inst, gb, k_floor);
      if (premise == Tri::Unknown) ++r.boundary;
      if (premise != Tri::In) continue;
      ++r.checked;
      Tri concl = e.member(t, gab, k_floor);
      if (concl == Tri::Unknown) ++r.boundary;
      if (concl == Tri::Out)
        r.violation(bank.show(inst) + " is in Cl(" + to_string(gb) + ") but " + bank.show(t) + " is not in Cl(" +
                    to_string(gab) + ")");
    }
  }
  return r;
}

LemmaReport check_clramorph(ClosureEngine& e, const Universe& u, const Prop& a, const Prop& b,
                            const Environment& env, std::size_t k_floor) {
  LemmaReport r;
  r.lemma = "clramorph";
  Timer timer(r);
  TermBank& bank = e.bank();
  Prop ga = subst_terms(a, env);
  Prop gb = subst_terms(b, env);
  Prop gab = subst_terms(Prop::imp(a, b), env);
  std::vector<TermId> in_a;
  std::vector<TermId> maybe_a;
  for (TermId m : u.members()) {
    Tri st = e.member(m, ga, k_floor);
    if (st == Tri::In) in_a.push_back(m);
    if (st == Tri::Unknown) maybe_a.push_back(m);
  }
  for (TermId t : u.members()) {
    Tri left = e.member(t, gab, k_floor);
    Tri right = Tri::In;
    for (TermId m : in_a) {
      Tri st = e.member(bank.app(t, m), gb, k_floor);
      if (st == Tri::Out) {
        right = Tri::Out;
        break;
      }
      if (st == Tri::Unknown) right = Tri::Unknown;
    }
    if (right == Tri::In)
      for (TermId m : maybe_a)
        if (e.member(bank.app(t, m), gb, k_floor) != Tri::In) right = Tri::Unknown;
    ++r.checked;
    if (left == Tri::Unknown || right == Tri::Unknown) {
      ++r.boundary;
      continue;
    }
    if (left == Tri::In && right == Tri::Out)
      r.violation("subset: " + bank.show(t) + " is in Cl(" + to_string(gab) + ") but not in the arrow candidate");
    if (left == Tri::Out && right == Tri::In)
      r.violation("superset: " + bank.show(t) + " is in the arrow candidate but not in Cl(" + to_string(gab) + ")");
  }
  return r;
}

LemmaReport check_clsubst(ClosureEngine& e, const Universe& u, const Prop& a, const std::string& x,
                          const Term& t, const Environment& env, std::size_t k_max) {
  LemmaReport r;
  r.lemma = "clsubst";
  Timer timer(r);
  TermBank& bank = e.bank();
  Prop left = subst_terms(subst_term_in_prop(a, x, t), env);
  Environment env2 = env;
  env2.insert_or_assign(x, subst_terms(t, env));
  Prop right = subst_terms(a, env2);
  if (!alpha_eq(left, right)) r.violation("goals differ: " + to_string(left) + " vs " + to_string(right));
  for (std::size_t k = 0; k <= k_max; ++k)
    for (TermId m : u.members()) {
      ++r.checked;
      if (e.in_stage(m, left, k) != e.in_stage(m, right, k))
        r.violation(bank.show(m) + " differs at stage " + std::to_string(k));
    }
  return r;
}

LemmaReport check_clfamorph(ClosureEngine& e, const Universe& u, const Prop& forall, const Environment& env,
                            const std::vector<Term>& terms, std::size_t k_floor) {
  LemmaReport r;
  r.lemma = "clfamorph";
  Timer timer(r);
  if (!forall.is_forall()) throw std::invalid_argument("clfamorph needs a universal proposition");
  TermBank& bank = e.bank();
  Prop g = subst_terms(forall, env);
  std::vector<Prop> instances;
  for (const auto& t : terms) {
    Environment env2 = env;
    env2.insert_or_assign(forall.name(), t);
    instances.push_back(subst_terms(forall.body(), env2));
  }
  for (TermId m : u.members()) {
    Tri left = e.member(m, g, k_floor);
    Tri right = Tri::In;
    for (const auto& p : instances) right = all_of_tri({right, e.member(m, p, k_floor)});
    ++r.checked;
    if (left == Tri::Unknown || right == Tri::Unknown) {
      ++r.boundary;
      continue;
    }
    if (left != right)
      r.violation(bank.show(m) + (left == Tri::In ? " is in Cl(" + to_string(g) + ") only"
                                                  : " is in every instance but not in Cl(" + to_string(g) + ")"));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Adequacy

AdequacyResult adequacy_check(ClosureEngine& e, const Derivation& d, const std::map<std::string, Proof>& sigma,
                              const Environment& env, std::size_t k_floor, std::size_t max_size) {
  AdequacyResult res;
  TermBank& bank = e.bank();
  Proof inst = d.subject;
  for (const auto& a : free_proof_vars(d.subject)) {
    const Prop* b = d.ctx.lookup(a);
    auto it = sigma.find(a);
    if (!b || it == sigma.end()) {
      res.adequate = false;
      res.detail = "no image for " + a;
      return res;
    }
    if (e.member(bank.from_proof(it->second), subst_terms(*b, env), k_floor) != Tri::In) {
      res.adequate = false;
      res.detail = to_string(it->second) + " is not in Cl(" + to_string(subst_terms(*b, env)) + ")";
      return res;
    }
  }
  for (const auto& a : free_proof_vars(d.subject)) inst = subst_proof(inst, a, sigma.at(a));
  res.instance = inst;
  if (inst.size() > max_size) {
    res.detail = "instance of size " + std::to_string(inst.size()) + " escapes the bound";
    return res;
  }
  res.verdict = e.member(bank.from_proof(inst), subst_terms(d.prop, env), k_floor);
  if (res.verdict == Tri::Out) res.detail = to_string(inst) + " is not in Cl(" + to_string(subst_terms(d.prop, env)) + ")";
  if (res.verdict == Tri::Unknown) res.detail = "membership undetermined within bounds";
  return res;
}

LemmaReport adequacy_suite(const Theory& t, const std::vector<Term>& terms, const AdequacyOptions& opts) {
  LemmaReport r;
  r.lemma = "adequacy";
  Timer timer(r);
  if (terms.empty()) throw std::invalid_argument("adequacy needs a non-empty term universe");
  CorpusOptions co;
  co.style = Style::Curry;
  co.count = opts.derivations;
  co.seed = opts.seed;
  co.max_subject_size = opts.max_subject_size;
  co.fuel = opts.bounds.fuel;
  auto corpus = generate_corpus(t, co);
  UniversalContext delta;
  TermBank bank;
  for (const auto& d : corpus) {
    std::set<std::string> fv = d.ctx.free_term_vars();
    fv.merge(free_term_vars(d.prop));
    Environment env;
    std::size_t j = 0;
    for (const auto& x : fv) env.emplace(x, terms[j++ % terms.size()]);
    std::vector<std::pair<Prop, std::size_t>> wanted;
    for (const auto& [n, p] : d.ctx.entries()) wanted.emplace_back(subst_terms(p, env), 2);
    ClosureEngine e(t, bank, delta.slice(wanted), terms, opts.bounds);
    for (int variant = 0; variant < 3; ++variant) {
      std::map<std::string, Proof> sigma;
      for (const auto& a : free_proof_vars(d.subject)) {
        Prop b = subst_terms(*d.ctx.lookup(a), env);
        Proof h = Proof::var(delta.name(b, variant == 1 ? 1 : 0));
        sigma.emplace(a, variant == 2 ? Proof::app(Proof::lam("w", Proof::var("w")), h) : h);
      }
      auto res = adequacy_check(e, d, sigma, env, opts.k_floor, opts.max_size);
      ++r.checked;
      if (!res.adequate || res.verdict == Tri::Unknown) {
        ++r.boundary;
        continue;
      }
      if (res.verdict == Tri::Out)
        r.violation(to_string(d.ctx) + " |- " + to_string(d.subject) + " : " + to_string(d.prop) + " but " +
                    res.detail);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Church ∀ defect

std::string DefectReport::text() const {
  std::ostringstream os;
  for (const auto& e : entries) {
    os << to_string(e.church_term) << " with h : " << to_string(e.forall) << "\n"
       << "  Church, typed at the " << to_string(e.t1) << " instance: " << (e.church_at_t1 ? "yes" : "no") << "\n"
       << "  Church, typed at the " << to_string(e.t2) << " instance: " << (e.church_at_t2 ? "yes" : "no") << "\n"
       << "  Curry erasure typed at every instance: " << (e.curry_in_all ? "yes" : "no") << "\n";
  }
  return os.str();
}

DefectReport church_forall_defect_demo(const Theory& t, const std::vector<Prop>& foralls,
                                       const std::vector<Term>& terms, std::size_t fuel) {
  DefectReport rep;
  UniversalContext delta;
  for (const auto& f : foralls) {
    if (!f.is_forall()) continue;
    std::string h = delta.name(f, 0);
    Context ctx({{h, f}});
    auto inst = [&](const Term& x) { return subst_term_in_prop(f.body(), f.name(), x); };
    bool curry_all = true;
    for (const auto& x : terms) {
      auto d = make_forall_elim(ctx, f, x, inst(x), make_axiom(Style::Curry, ctx, h, f));
      curry_all = curry_all && check_derivation(t, d, fuel).ok;
    }
    for (const auto& t1 : terms)
      for (const auto& t2 : terms) {
        if (t1 == t2) continue;
        DefectEntry e{f, t1, t2, Proof::tapp(Proof::var(h), t1)};
        auto d1 = make_forall_elim(ctx, f, t1, inst(t1), make_axiom(Style::Church, ctx, h, f));
        e.church_at_t1 = check_derivation(t, d1, fuel).ok;
        auto d2 = make_forall_elim(ctx, f, t1, inst(t2), make_axiom(Style::Church, ctx, h, f));
        e.church_at_t2 = check_derivation(t, d2, fuel).ok;
        e.curry_in_all = curry_all;
        rep.entries.push_back(std::move(e));
      }
  }
  return rep;
}

}  // namespace mdm
