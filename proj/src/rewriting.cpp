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

#include "mdm/rewriting.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <unordered_set>

namespace mdm {

TheoryError::TheoryError(const std::string& message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}

std::string_view to_string(CongruenceVerdict::Kind kind) {
  switch (kind) {
    case CongruenceVerdict::Kind::Yes:
      return "yes";
    case CongruenceVerdict::Kind::No:
      return "no";
    case CongruenceVerdict::Kind::Unknown:
      return "unknown";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Theory files

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::pair<std::string, std::size_t> parse_decl(const std::string& body, std::size_t line) {
  auto slash = body.find('/');
  if (slash == std::string::npos) throw TheoryError("expected name/arity", line);
  std::string name = trim(body.substr(0, slash));
  std::string ar = trim(body.substr(slash + 1));
  if (name.empty() || ar.empty() || !std::all_of(ar.begin(), ar.end(), ::isdigit))
    throw TheoryError("expected name/arity", line);
  return {name, static_cast<std::size_t>(std::stoul(ar))};
}

std::string head_symbol(const std::string& side) {
  std::size_t i = 0;
  while (i < side.size() && (std::isspace(static_cast<unsigned char>(side[i])) || side[i] == '(')) ++i;
  std::size_t start = i;
  while (i < side.size() && (std::isalnum(static_cast<unsigned char>(side[i])) || side[i] == '_' || side[i] == '\''))
    ++i;
  return side.substr(start, i - start);
}

bool subset(const std::set<std::string>& a, const std::set<std::string>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

Theory parse_theory(std::string_view text, std::string name) {
  Theory th;
  th.name = std::move(name);
  struct PendingRule {
    std::string lhs, rhs;
    bool oriented;
    std::size_t line;
  };
  std::vector<PendingRule> pending;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto hash = raw.find('#');
    std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.back() != '.') throw TheoryError("statement must end with '.'", lineno);
    line = trim(line.substr(0, line.size() - 1));
    auto space = line.find_first_of(" \t");
    std::string kw = line.substr(0, space);
    std::string body = space == std::string::npos ? "" : trim(line.substr(space));
    try {
      if (kw == "pred") {
        auto [n, a] = parse_decl(body, lineno);
        th.sig.add_predicate(n, a);
      } else if (kw == "fun") {
        auto [n, a] = parse_decl(body, lineno);
        th.sig.add_function(n, a);
      } else if (kw == "rule") {
        auto bi = body.find("<->");
        auto or_ = body.find("-->");
        if (bi == std::string::npos && or_ == std::string::npos)
          throw TheoryError("rule needs '<->' or '-->'", lineno);
        bool oriented = bi == std::string::npos;
        auto at = oriented ? or_ : bi;
        pending.push_back({trim(body.substr(0, at)), trim(body.substr(at + 3)), oriented, lineno});
      } else {
        throw TheoryError("unknown statement '" + kw + "'", lineno);
      }
    } catch (const std::invalid_argument& e) {
      throw TheoryError(e.what(), lineno);
    }
  }
  for (const auto& r : pending) {
    // A side whose head symbol is a predicate, a quantifier or an
    // implication makes a proposition rule; anything else is a term rule.
    std::string head = head_symbol(r.lhs);
    bool prop_rule = th.sig.predicate_arity(head) || head.empty() || r.lhs.find("=>") != std::string::npos;
    try {
      if (prop_rule) {
        th.rules.push_back({parse_prop(r.lhs, &th.sig), parse_prop(r.rhs, &th.sig), r.oriented});
      } else {
        th.term_rules.push_back({parse_term(r.lhs, &th.sig), parse_term(r.rhs, &th.sig), r.oriented});
      }
    } catch (const SyntaxError& e) {
      throw TheoryError(e.what(), r.line);
    }
  }
  try {
    th.sig.validate();
  } catch (const std::invalid_argument& e) {
    throw TheoryError(e.what(), 0);
  }
  validate_theory(th);
  return th;
}

Theory load_theory(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw TheoryError("cannot open theory file '" + path + "'", 0);
  std::stringstream ss;
  ss << f.rdbuf();
  std::string stem = path;
  if (auto s = stem.find_last_of('/'); s != std::string::npos) stem = stem.substr(s + 1);
  if (auto d = stem.find_last_of('.'); d != std::string::npos) stem = stem.substr(0, d);
  return parse_theory(ss.str(), stem);
}

void validate_theory(const Theory& t) {
  for (const auto& r : t.rules)
    if (!subset(free_term_vars(r.rhs), free_term_vars(r.lhs)))
      throw TheoryError("rule " + to_string(r.lhs) + " -> " + to_string(r.rhs) +
                            ": right-hand side has variables not in the left-hand side",
                        0);
  for (const auto& r : t.term_rules) {
    if (r.lhs.is_var()) throw TheoryError("term rule with a variable left-hand side", 0);
    if (!subset(free_term_vars(r.rhs), free_term_vars(r.lhs)))
      throw TheoryError("term rule " + to_string(r.lhs) + " -> " + to_string(r.rhs) +
                            ": right-hand side has variables not in the left-hand side",
                        0);
  }
}

// ---------------------------------------------------------------------------
// Matching

namespace {

// Pairs of (pattern binder, subject binder), innermost last.
using BinderPairs = std::vector<std::pair<std::string, std::string>>;

// Index of the innermost pairing binding `name` on the given side, or -1.
int bound_index(const BinderPairs& pairs, const std::string& name, bool pattern_side) {
  for (int i = static_cast<int>(pairs.size()) - 1; i >= 0; --i) {
    const auto& n = pattern_side ? pairs[i].first : pairs[i].second;
    if (n == name) return i;
  }
  return -1;
}

bool mentions_bound(const Term& t, const BinderPairs& pairs) {
  if (t.is_var()) return bound_index(pairs, t.name(), false) >= 0;
  return std::any_of(t.args().begin(), t.args().end(), [&](const Term& a) { return mentions_bound(a, pairs); });
}

bool match_term(const Term& pat, const Term& subj, const BinderPairs& pairs, TermSubst& s) {
  if (pat.is_var()) {
    int pi = bound_index(pairs, pat.name(), true);
    if (pi >= 0) return subj.is_var() && bound_index(pairs, subj.name(), false) == pi;
    if (mentions_bound(subj, pairs)) return false;
    auto it = s.find(pat.name());
    if (it != s.end()) return it->second == subj;
    s.emplace(pat.name(), subj);
    return true;
  }
  if (subj.is_var() || subj.name() != pat.name() || subj.args().size() != pat.args().size()) return false;
  for (std::size_t i = 0; i < pat.args().size(); ++i)
    if (!match_term(pat.args()[i], subj.args()[i], pairs, s)) return false;
  return true;
}

bool match_prop(const Prop& pat, const Prop& subj, BinderPairs& pairs, TermSubst& s) {
  if (pat.kind() != subj.kind()) return false;
  switch (pat.kind()) {
    case Prop::Kind::Atom:
      if (pat.name() != subj.name() || pat.args().size() != subj.args().size()) return false;
      for (std::size_t i = 0; i < pat.args().size(); ++i)
        if (!match_term(pat.args()[i], subj.args()[i], pairs, s)) return false;
      return true;
    case Prop::Kind::Imp:
      return match_prop(pat.lhs(), subj.lhs(), pairs, s) && match_prop(pat.rhs(), subj.rhs(), pairs, s);
    case Prop::Kind::Forall: {
      pairs.emplace_back(pat.name(), subj.name());
      bool ok = match_prop(pat.body(), subj.body(), pairs, s);
      pairs.pop_back();
      return ok;
    }
  }
  return false;
}

struct Direction {
  const Prop* from;
  const Prop* to;
};

struct TermDirection {
  const Term* from;
  const Term* to;
};

std::vector<Direction> prop_directions(const Theory& t) {
  std::vector<Direction> out;
  for (const auto& r : t.rules) {
    out.push_back({&r.lhs, &r.rhs});
    if (subset(free_term_vars(r.lhs), free_term_vars(r.rhs))) out.push_back({&r.rhs, &r.lhs});
  }
  return out;
}

std::vector<TermDirection> term_directions(const Theory& t) {
  std::vector<TermDirection> out;
  for (const auto& r : t.term_rules) {
    out.push_back({&r.lhs, &r.rhs});
    if (!r.rhs.is_var() && subset(free_term_vars(r.lhs), free_term_vars(r.rhs))) out.push_back({&r.rhs, &r.lhs});
  }
  return out;
}

void term_neighbors(const std::vector<TermDirection>& dirs, const Term& t, const std::function<void(Term)>& emit) {
  for (const auto& d : dirs) {
    TermSubst s;
    if (match_term(*d.from, t, {}, s)) emit(subst_terms(*d.to, s));
  }
  if (t.is_var()) return;
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    term_neighbors(dirs, t.args()[i], [&](Term r) {
      auto args = t.args();
      args[i] = std::move(r);
      emit(Term::app(t.name(), std::move(args)));
    });
  }
}

void prop_neighbors(const std::vector<Direction>& dirs, const std::vector<TermDirection>& tdirs, const Prop& p,
                    const std::function<void(Prop)>& emit) {
  for (const auto& d : dirs) {
    BinderPairs pairs;
    TermSubst s;
    if (match_prop(*d.from, p, pairs, s)) emit(subst_terms(*d.to, s));
  }
  switch (p.kind()) {
    case Prop::Kind::Atom:
      if (tdirs.empty()) return;
      for (std::size_t i = 0; i < p.args().size(); ++i) {
        term_neighbors(tdirs, p.args()[i], [&](Term r) {
          auto args = p.args();
          args[i] = std::move(r);
          emit(Prop::atom(p.name(), std::move(args)));
        });
      }
      return;
    case Prop::Kind::Imp:
      prop_neighbors(dirs, tdirs, p.lhs(), [&](Prop l) { emit(Prop::imp(std::move(l), p.rhs())); });
      prop_neighbors(dirs, tdirs, p.rhs(), [&](Prop r) { emit(Prop::imp(p.lhs(), std::move(r))); });
      return;
    case Prop::Kind::Forall:
      prop_neighbors(dirs, tdirs, p.body(), [&](Prop b) { emit(Prop::forall(p.name(), std::move(b))); });
      return;
  }
}

}  // namespace

std::vector<Prop> rewrite_neighbors(const Theory& t, const Prop& p) {
  auto dirs = prop_directions(t);
  auto tdirs = term_directions(t);
  std::map<std::string, Prop> found;
  prop_neighbors(dirs, tdirs, p, [&](Prop q) { found.emplace(alpha_key(q), std::move(q)); });
  std::vector<Prop> out;
  out.reserve(found.size());
  for (auto& [k, q] : found) out.push_back(std::move(q));
  return out;
}

// ---------------------------------------------------------------------------
// Congruence search

CongruenceVerdict congruent(const Theory& t, const Prop& a, const Prop& b, std::size_t fuel) {
  CongruenceOptions opts;
  opts.fuel = fuel;
  return congruent(t, a, b, opts);
}

CongruenceVerdict congruent(const Theory& t, const Prop& a, const Prop& b, const CongruenceOptions& opts) {
  CongruenceVerdict v;
  std::string ka = alpha_key(a), kb = alpha_key(b);
  if (ka == kb) {
    v.kind = CongruenceVerdict::Kind::Yes;
    return v;
  }
  if (t.rules.empty() && t.term_rules.empty()) {
    v.kind = CongruenceVerdict::Kind::No;
    return v;
  }
  auto dirs = prop_directions(t);
  auto tdirs = term_directions(t);

  struct Side {
    std::unordered_map<std::string, std::size_t> dist;
    std::deque<std::pair<Prop, std::size_t>> frontier;
  };
  Side sides[2];
  sides[0].dist.emplace(ka, 0);
  sides[0].frontier.emplace_back(a, 0);
  sides[1].dist.emplace(kb, 0);
  sides[1].frontier.emplace_back(b, 0);

  while (true) {
    // Expand the side with the smaller frontier; a saturated side proves No.
    for (int s = 0; s < 2; ++s) {
      if (sides[s].frontier.empty()) {
        v.kind = (v.capped && !opts.cap_is_exhaustive) ? CongruenceVerdict::Kind::Unknown
                                                       : CongruenceVerdict::Kind::No;
        return v;
      }
    }
    int s = sides[0].frontier.size() <= sides[1].frontier.size() ? 0 : 1;
    Side& me = sides[s];
    Side& other = sides[1 - s];
    if (v.fuel_spent >= opts.fuel) {
      v.kind = CongruenceVerdict::Kind::Unknown;
      return v;
    }
    auto [p, d] = me.frontier.front();
    me.frontier.pop_front();
    ++v.fuel_spent;
    std::optional<std::size_t> met;
    prop_neighbors(dirs, tdirs, p, [&](Prop q) {
      if (met) return;
      if (opts.size_cap && q.size() > *opts.size_cap) {
        v.capped = true;
        return;
      }
      std::string k = alpha_key(q);
      if (auto it = other.dist.find(k); it != other.dist.end()) {
        met = d + 1 + it->second;
        return;
      }
      if (me.dist.emplace(k, d + 1).second) me.frontier.emplace_back(std::move(q), d + 1);
    });
    if (met) {
      v.kind = CongruenceVerdict::Kind::Yes;
      v.path_length = *met;
      return v;
    }
  }
}

CongruenceVerdict Congruence::operator()(const Prop& a, const Prop& b) {
  std::string ka = alpha_key(a), kb = alpha_key(b);
  std::string key = ka < kb ? ka + "|" + kb : kb + "|" + ka;
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  auto v = congruent(*theory_, a, b, fuel_);
  memo_.emplace(std::move(key), v);
  return v;
}

std::vector<Prop> congruence_class(const Theory& t, const Prop& p, std::size_t size_cap, std::size_t fuel,
                                   bool* complete) {
  auto dirs = prop_directions(t);
  auto tdirs = term_directions(t);
  std::map<std::string, Prop> seen;
  seen.emplace(alpha_key(p), p);
  std::deque<Prop> frontier{p};
  std::size_t spent = 0;
  while (!frontier.empty() && spent < fuel) {
    Prop q = frontier.front();
    frontier.pop_front();
    ++spent;
    prop_neighbors(dirs, tdirs, q, [&](Prop r) {
      if (r.size() > size_cap) return;
      std::string k = alpha_key(r);
      if (seen.count(k)) return;
      seen.emplace(k, r);
      frontier.push_back(std::move(r));
    });
  }
  if (complete) *complete = frontier.empty();
  std::vector<Prop> out;
  for (auto& [k, q] : seen) out.push_back(q);
  return out;
}

// ---------------------------------------------------------------------------
// Enumeration and confusion

std::vector<Term> enumerate_terms(const Signature& sig, std::size_t max_size, const std::vector<std::string>& vars) {
  // by_size[n] = all terms of size exactly n.
  std::vector<std::vector<Term>> by_size(max_size + 1);
  if (max_size >= 1) {
    for (const auto& v : vars) by_size[1].push_back(Term::var(v));
    for (const auto& f : sig.functions())
      if (f.arity == 0) by_size[1].push_back(Term::app(f.name));
  }
  for (std::size_t n = 2; n <= max_size; ++n) {
    for (const auto& f : sig.functions()) {
      if (f.arity == 0) continue;
      // Distribute n-1 among f.arity arguments, each of size >= 1.
      std::vector<Term> args;
      std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t left) {
        if (i == f.arity) {
          if (left == 0) by_size[n].push_back(Term::app(f.name, args));
          return;
        }
        for (std::size_t k = 1; k + (f.arity - i - 1) <= left; ++k) {
          for (const auto& t : by_size[k]) {
            args.push_back(t);
            go(i + 1, left - k);
            args.pop_back();
          }
        }
      };
      go(0, n - 1);
    }
  }
  std::vector<Term> out;
  for (auto& level : by_size)
    for (auto& t : level) out.push_back(std::move(t));
  return out;
}

std::vector<Prop> enumerate_props(const Signature& sig, std::size_t max_size, const std::vector<std::string>& term_vars,
                                  std::size_t max_term_size) {
  std::vector<std::vector<Prop>> by_size(max_size + 1);
  auto terms = enumerate_terms(sig, max_term_size, term_vars);
  std::vector<std::vector<Term>> terms_by_size(max_term_size + 1);
  for (const auto& t : terms) terms_by_size[t.size()].push_back(t);

  for (std::size_t n = 1; n <= max_size; ++n) {
    for (const auto& pr : sig.predicates()) {
      std::vector<Term> args;
      std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t left) {
        if (i == pr.arity) {
          if (left == 0) by_size[n].push_back(Prop::atom(pr.name, args));
          return;
        }
        for (std::size_t k = 1; k <= std::min(left, max_term_size); ++k) {
          for (const auto& t : terms_by_size[k]) {
            args.push_back(t);
            go(i + 1, left - k);
            args.pop_back();
          }
        }
      };
      go(0, n - 1);
    }
    for (std::size_t k = 1; k + 1 < n; ++k)
      for (const auto& l : by_size[k])
        for (const auto& r : by_size[n - 1 - k]) by_size[n].push_back(Prop::imp(l, r));
    if (n >= 2)
      for (const auto& x : term_vars)
        for (const auto& b : by_size[n - 1]) by_size[n].push_back(Prop::forall(x, b));
  }
  std::map<std::string, Prop> uniq;
  for (auto& level : by_size)
    for (auto& p : level) uniq.emplace(alpha_key(p), std::move(p));
  std::vector<Prop> out;
  for (auto& [k, p] : uniq) out.push_back(std::move(p));
  std::stable_sort(out.begin(), out.end(), [](const Prop& a, const Prop& b) { return a.size() < b.size(); });
  return out;
}

ConfusionReport detect_confusion(const Theory& t, std::size_t size_bound, std::size_t fuel) {
  ConfusionReport rep;
  rep.size_cap = size_bound + 2;
  auto props = enumerate_props(t.sig, size_bound, {"x", "y"}, 2);
  auto dirs = prop_directions(t);
  auto tdirs = term_directions(t);
  std::unordered_set<std::string> explored;  // classes already known to stay Imp/Atom-headed
  std::size_t spent = 0;
  bool capped = false;
  for (const auto& p : props) {
    if (!p.is_imp()) continue;
    ++rep.enumerated;
    if (explored.count(alpha_key(p))) continue;
    std::unordered_set<std::string> seen{alpha_key(p)};
    std::deque<Prop> frontier{p};
    while (!frontier.empty()) {
      if (spent >= fuel) {
        rep.verdict.kind = CongruenceVerdict::Kind::Unknown;
        rep.verdict.fuel_spent = spent;
        rep.verdict.capped = capped;
        return rep;
      }
      Prop q = frontier.front();
      frontier.pop_front();
      ++spent;
      bool hit = false;
      prop_neighbors(dirs, tdirs, q, [&](Prop r) {
        if (hit) return;
        if (r.size() > rep.size_cap) {
          capped = true;
          return;
        }
        std::string k = alpha_key(r);
        if (!seen.insert(k).second) return;
        if (r.is_forall()) {
          hit = true;
          rep.imp_witness = p;
          rep.forall_witness = r;
          return;
        }
        frontier.push_back(std::move(r));
      });
      if (hit) {
        rep.verdict.kind = CongruenceVerdict::Kind::Yes;
        rep.verdict.fuel_spent = spent;
        rep.verdict.capped = capped;
        return rep;
      }
    }
    explored.insert(seen.begin(), seen.end());
  }
  rep.verdict.kind = CongruenceVerdict::Kind::No;
  rep.verdict.fuel_spent = spent;
  rep.verdict.capped = capped;
  return rep;
}

}  // namespace mdm
