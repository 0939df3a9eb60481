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

#include "mdm/termbank.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace mdm {

TermId TermBank::intern(Kind k, std::uint32_t a, std::uint32_t b) {
  std::uint64_t key = (std::uint64_t(k) << 62) | (std::uint64_t(a) << 31) | b;
  auto it = index_.find(key);
  if (it != index_.end()) return it->second;
  Node n{k, a, b, 1, 0};
  switch (k) {
    case Kind::Bound:
      n.loose = a + 1;
      break;
    case Kind::Free:
      break;
    case Kind::Lam:
      n.size = 1 + nodes_[a].size;
      n.loose = nodes_[a].loose > 0 ? nodes_[a].loose - 1 : 0;
      break;
    case Kind::App:
      n.size = 1 + nodes_[a].size + nodes_[b].size;
      n.loose = std::max(nodes_[a].loose, nodes_[b].loose);
      break;
  }
  auto id = static_cast<TermId>(nodes_.size());
  nodes_.push_back(n);
  sn_mark_.push_back(Mark::None);
  sn_len_.push_back(0);
  index_.emplace(key, id);
  return id;
}

TermId TermBank::bound(std::uint32_t index) { return intern(Kind::Bound, index, 0); }

TermId TermBank::free(const std::string& name) {
  auto it = name_index_.find(name);
  std::uint32_t i;
  if (it == name_index_.end()) {
    i = static_cast<std::uint32_t>(names_.size());
    names_.push_back(name);
    name_index_.emplace(name, i);
  } else {
    i = it->second;
  }
  return intern(Kind::Free, i, 0);
}

TermId TermBank::lam(TermId body) { return intern(Kind::Lam, body, 0); }
TermId TermBank::app(TermId fun, TermId arg) { return intern(Kind::App, fun, arg); }

TermId TermBank::from_proof(const Proof& p) {
  std::vector<std::string> binders;
  return from_proof(p, binders);
}

TermId TermBank::from_proof(const Proof& p, std::vector<std::string>& binders) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      for (std::size_t i = binders.size(); i-- > 0;)
        if (binders[i] == p.name()) return bound(static_cast<std::uint32_t>(binders.size() - 1 - i));
      return free(p.name());
    case Proof::Kind::Lam: {
      binders.push_back(p.name());
      TermId b = from_proof(p.body(), binders);
      binders.pop_back();
      return lam(b);
    }
    case Proof::Kind::App: {
      TermId f = from_proof(p.fun(), binders);
      return app(f, from_proof(p.arg(), binders));
    }
    default:
      throw std::invalid_argument("term bank holds Curry proof-terms only");
  }
}

void TermBank::free_names(TermId t, std::vector<std::string>& out) const {
  switch (kind(t)) {
    case Kind::Bound:
      return;
    case Kind::Free:
      if (std::find(out.begin(), out.end(), name(t)) == out.end()) out.push_back(name(t));
      return;
    case Kind::Lam:
      return free_names(body(t), out);
    case Kind::App:
      free_names(fun(t), out);
      return free_names(arg(t), out);
  }
}

bool TermBank::has_free(TermId t, const std::string& n) const {
  switch (kind(t)) {
    case Kind::Bound:
      return false;
    case Kind::Free:
      return name(t) == n;
    case Kind::Lam:
      return has_free(body(t), n);
    case Kind::App:
      return has_free(fun(t), n) || has_free(arg(t), n);
  }
  return false;
}

Proof TermBank::to_proof(TermId t) const {
  std::vector<std::string> binders;
  std::vector<std::string> avoid;
  free_names(t, avoid);
  return to_proof(t, binders, avoid);
}

Proof TermBank::to_proof(TermId t, std::vector<std::string>& binders, const std::vector<std::string>& avoid) const {
  switch (kind(t)) {
    case Kind::Bound:
      if (index(t) >= binders.size()) throw std::invalid_argument("term has a loose index");
      return Proof::var(binders[binders.size() - 1 - index(t)]);
    case Kind::Free:
      return Proof::var(name(t));
    case Kind::Lam: {
      std::string n = "v" + std::to_string(binders.size());
      while (std::find(avoid.begin(), avoid.end(), n) != avoid.end()) n += "'";
      binders.push_back(n);
      Proof b = to_proof(body(t), binders, avoid);
      binders.pop_back();
      return Proof::lam(n, std::move(b));
    }
    case Kind::App: {
      Proof f = to_proof(fun(t), binders, avoid);
      return Proof::app(std::move(f), to_proof(arg(t), binders, avoid));
    }
  }
  throw std::logic_error("bad term kind");
}

std::string TermBank::show(TermId t) const {
  if (loose(t) == 0) return to_string(to_proof(t));
  switch (kind(t)) {
    case Kind::Bound:
      return "#" + std::to_string(index(t));
    case Kind::Free:
      return name(t);
    case Kind::Lam:
      return "(\\. " + show(body(t)) + ")";
    case Kind::App:
      return "(" + show(fun(t)) + " " + show(arg(t)) + ")";
  }
  return "?";
}

TermId TermBank::shift(TermId t, int by, std::uint32_t cutoff) {
  if (loose(t) <= cutoff) return t;
  switch (kind(t)) {
    case Kind::Bound:
      return bound(static_cast<std::uint32_t>(static_cast<int>(index(t)) + by));
    case Kind::Lam:
      return lam(shift(body(t), by, cutoff + 1));
    case Kind::App: {
      TermId f = shift(fun(t), by, cutoff);
      return app(f, shift(arg(t), by, cutoff));
    }
    default:
      return t;
  }
}

TermId TermBank::subst(TermId t, std::uint32_t j, TermId s) {
  if (loose(t) <= j) return t;
  switch (kind(t)) {
    case Kind::Bound:
      return index(t) == j ? s : t;
    case Kind::Lam:
      return lam(subst(body(t), j + 1, shift(s, 1)));
    case Kind::App: {
      TermId f = subst(fun(t), j, s);
      return app(f, subst(arg(t), j, s));
    }
    default:
      return t;
  }
}

TermId TermBank::beta(TermId redex) {
  TermId b = body(fun(redex));
  TermId a = arg(redex);
  return shift(subst(b, 0, shift(a, 1)), -1);
}

TermId TermBank::at(TermId t, const Path& path) const {
  for (int step : path) {
    if (kind(t) == Kind::Lam)
      t = body(t);
    else
      t = step == 0 ? fun(t) : arg(t);
  }
  return t;
}

TermId TermBank::replace(TermId t, const Path& path, TermId by) {
  std::vector<TermId> trail;
  for (int step : path) {
    trail.push_back(t);
    t = kind(t) == Kind::Lam ? body(t) : (step == 0 ? fun(t) : arg(t));
  }
  TermId cur = by;
  for (std::size_t i = path.size(); i-- > 0;) {
    TermId parent = trail[i];
    if (kind(parent) == Kind::Lam)
      cur = lam(cur);
    else
      cur = path[i] == 0 ? app(cur, arg(parent)) : app(fun(parent), cur);
  }
  return cur;
}

const std::vector<TermId>& TermBank::reducts(TermId t) {
  auto it = reducts_.find(t);
  if (it != reducts_.end()) return it->second;
  std::vector<TermId> out;
  switch (kind(t)) {
    case Kind::Lam: {
      TermId b = body(t);
      std::vector<TermId> rs = reducts(b);
      for (TermId r : rs) out.push_back(lam(r));
      break;
    }
    case Kind::App: {
      TermId f = fun(t);
      TermId a = arg(t);
      if (kind(f) == Kind::Lam) out.push_back(beta(t));
      std::vector<TermId> rf = reducts(f);
      for (TermId r : rf) out.push_back(app(r, a));
      std::vector<TermId> ra = reducts(a);
      for (TermId r : ra) out.push_back(app(f, r));
      break;
    }
    default:
      break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return reducts_.emplace(t, std::move(out)).first->second;
}

TermBank::SN TermBank::sn(TermId t) {
  if (sn_unknown_.count(t)) return {};
  std::size_t budget = sn_budget_;
  SN s = sn_visit(t, budget);
  if (s.kind == SN::Kind::Unknown) sn_unknown_[t] = true;
  return s;
}

TermBank::SN TermBank::sn_visit(TermId t, std::size_t& budget) {
  switch (sn_mark_[t]) {
    case Mark::Done:
      return {SN::Kind::SN, sn_len_[t]};
    case Mark::Diverges:
    case Mark::Active:
      return {SN::Kind::Diverges, 0};
    case Mark::None:
      break;
  }
  if (budget == 0 || size(t) > sn_size_cap_) return {};
  --budget;
  sn_mark_[t] = Mark::Active;
  std::vector<TermId> rs = reducts(t);
  std::uint32_t longest = 0;
  for (TermId r : rs) {
    SN s = sn_visit(r, budget);
    if (s.kind == SN::Kind::Diverges) {
      sn_mark_[t] = Mark::Diverges;
      return s;
    }
    if (s.kind == SN::Kind::Unknown) {
      sn_mark_[t] = Mark::None;
      return s;
    }
    longest = std::max(longest, static_cast<std::uint32_t>(s.max_length + 1));
  }
  sn_mark_[t] = Mark::Done;
  sn_len_[t] = longest;
  return {SN::Kind::SN, longest};
}

void TermBank::collect_positions(TermId t, Path& path, std::vector<Path>& out) {
  switch (kind(t)) {
    case Kind::Lam:
      path.push_back(0);
      collect_positions(body(t), path, out);
      path.pop_back();
      return;
    case Kind::App:
      if (!normal(t)) out.push_back(path);
      path.push_back(0);
      collect_positions(fun(t), path, out);
      path.back() = 1;
      collect_positions(arg(t), path, out);
      path.pop_back();
      return;
    default:
      return;
  }
}

std::vector<Path> TermBank::redex_positions(TermId t) {
  std::vector<Path> out;
  Path path;
  collect_positions(t, path, out);
  return out;
}

namespace {

bool prefix_of(const Path& a, const Path& b) {
  return a.size() <= b.size() && std::equal(a.begin(), a.end(), b.begin());
}

}  // namespace

std::vector<TermBank::Decomposition> TermBank::decompositions(TermId t, const std::vector<Path>& positions,
                                                            std::size_t n_max) {
  std::vector<Decomposition> out;
  std::vector<std::size_t> chosen;
  auto emit = [&] {
    Decomposition d;
    std::vector<TermId> acc{t};
    for (std::size_t i : chosen) {
      const Path& p = positions[i];
      d.positions.push_back(p);
      std::vector<TermId> rs = reducts(at(t, p));
      std::vector<TermId> next;
      for (TermId base : acc)
        for (TermId r : rs) next.push_back(replace(base, p, r));
      acc = std::move(next);
    }
    std::sort(acc.begin(), acc.end());
    acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
    d.instances = std::move(acc);
    out.push_back(std::move(d));
  };
  auto rec = [&](auto& self, std::size_t from) -> void {
    for (std::size_t i = from; i < positions.size(); ++i) {
      bool disjoint = true;
      for (std::size_t j : chosen)
        if (prefix_of(positions[j], positions[i]) || prefix_of(positions[i], positions[j])) disjoint = false;
      if (!disjoint) continue;
      chosen.push_back(i);
      emit();
      if (chosen.size() < n_max) self(self, i + 1);
      chosen.pop_back();
    }
  };
  rec(rec, 0);
  return out;
}

Universe::Universe(TermBank& bank, UniverseBounds bounds) : bank_(&bank), bounds_(std::move(bounds)) {
  std::map<std::pair<std::size_t, std::size_t>, std::vector<TermId>> level;
  auto terms = [&](auto& self, std::size_t size, std::size_t depth) -> const std::vector<TermId>& {
    auto key = std::make_pair(size, depth);
    auto it = level.find(key);
    if (it != level.end()) return it->second;
    std::vector<TermId> out;
    if (size == 1) {
      for (const auto& v : bounds_.vars) out.push_back(bank.free(v));
      for (std::size_t i = 0; i < depth; ++i) out.push_back(bank.bound(static_cast<std::uint32_t>(i)));
    } else {
      for (TermId b : self(self, size - 1, depth + 1)) out.push_back(bank.lam(b));
      for (std::size_t i = 1; i + 1 < size; ++i) {
        const std::vector<TermId> fs = self(self, i, depth);
        const std::vector<TermId> as = self(self, size - 1 - i, depth);
        for (TermId f : fs)
          for (TermId a : as) out.push_back(bank.app(f, a));
      }
    }
    return level.emplace(key, std::move(out)).first->second;
  };
  for (std::size_t s = 1; s <= bounds_.max_size; ++s)
    for (TermId t : terms(terms, s, 0)) {
      index_.emplace(t, members_.size());
      members_.push_back(t);
    }
  for (TermId t : members_)
    for (TermId r : bank.reducts(t))
      if (!index_.count(r)) ++boundary_reducts_;
}

std::optional<std::size_t> Universe::index_of(TermId t) const {
  auto it = index_.find(t);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

const std::vector<TermBank::Decomposition>& Universe::decompositions(std::size_t index, std::size_t n_max) const {
  std::uint64_t key = (std::uint64_t(index) << 8) | (n_max & 0xff);
  auto it = decompositions_.find(key);
  if (it != decompositions_.end()) return it->second;
  TermId t = members_[index];
  auto ds = bank_->decompositions(t, bank_->redex_positions(t), n_max);
  return decompositions_.emplace(key, std::move(ds)).first->second;
}

}  // namespace mdm
