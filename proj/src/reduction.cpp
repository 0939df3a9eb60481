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

#include "mdm/reduction.hpp"

#include <deque>
#include <limits>
#include <sstream>
#include <unordered_map>

namespace mdm {

std::string to_string(const Path& path) {
  std::string out;
  for (int i : path) out += static_cast<char>('0' + i);
  return out.empty() ? "." : out;
}

Path parse_path(const std::string& text) {
  Path out;
  if (text == "." || text.empty()) return out;
  for (char c : text) {
    if (c != '0' && c != '1') throw std::invalid_argument("redex path must be a string of 0/1 digits");
    out.push_back(c - '0');
  }
  return out;
}

std::string to_string(SNVerdict::Kind kind) {
  switch (kind) {
    case SNVerdict::Kind::SN:
      return "sn";
    case SNVerdict::Kind::Diverges:
      return "diverges";
    case SNVerdict::Kind::Unknown:
      return "unknown";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// One-step reduction

namespace {

void steps(const Proof& p, Path& path, std::vector<Redex>& out, const std::function<Proof(Proof)>& wrap) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      return;
    case Proof::Kind::Lam:
      path.push_back(0);
      steps(p.body(), path, out, [&](Proof b) { return wrap(Proof::lam(p.name(), std::move(b))); });
      path.pop_back();
      return;
    case Proof::Kind::TLam:
      path.push_back(0);
      steps(p.body(), path, out, [&](Proof b) { return wrap(Proof::tlam(p.name(), std::move(b))); });
      path.pop_back();
      return;
    case Proof::Kind::App:
      if (p.fun().is_lam())
        out.push_back({path, wrap(subst_proof(p.fun().body(), p.fun().name(), p.arg())), false});
      path.push_back(0);
      steps(p.fun(), path, out, [&](Proof f) { return wrap(Proof::app(std::move(f), p.arg())); });
      path.back() = 1;
      steps(p.arg(), path, out, [&](Proof a) { return wrap(Proof::app(p.fun(), std::move(a))); });
      path.pop_back();
      return;
    case Proof::Kind::TApp:
      if (p.fun().is_tlam())
        out.push_back(
            {path, wrap(subst_term_in_proof(p.fun().body(), p.fun().name(), p.term_arg(), Style::Church)), true});
      path.push_back(0);
      steps(p.fun(), path, out, [&](Proof f) { return wrap(Proof::tapp(std::move(f), p.term_arg())); });
      path.pop_back();
      return;
  }
}

bool has_redex(const Proof& p) {
  switch (p.kind()) {
    case Proof::Kind::Var:
      return false;
    case Proof::Kind::Lam:
    case Proof::Kind::TLam:
      return has_redex(p.body());
    case Proof::Kind::App:
      return p.fun().is_lam() || has_redex(p.fun()) || has_redex(p.arg());
    case Proof::Kind::TApp:
      return p.fun().is_tlam() || has_redex(p.fun());
  }
  return false;
}

}  // namespace

std::vector<Redex> beta_steps(const Proof& p) {
  std::vector<Redex> out;
  Path path;
  steps(p, path, out, [](Proof q) { return q; });
  return out;
}

std::vector<Proof> beta_reducts(const Proof& p) {
  std::vector<Proof> out;
  for (auto& r : beta_steps(p)) out.push_back(std::move(r.reduct));
  return out;
}

bool is_normal(const Proof& p) { return !has_redex(p); }

const Proof& subterm_at(const Proof& p, const Path& path) {
  const Proof* cur = &p;
  for (int i : path) {
    switch (cur->kind()) {
      case Proof::Kind::Lam:
      case Proof::Kind::TLam:
        if (i != 0) throw std::out_of_range("invalid path");
        cur = &cur->body();
        break;
      case Proof::Kind::App:
        cur = i == 0 ? &cur->fun() : &cur->arg();
        break;
      case Proof::Kind::TApp:
        if (i != 0) throw std::out_of_range("invalid path");
        cur = &cur->fun();
        break;
      case Proof::Kind::Var:
        throw std::out_of_range("invalid path");
    }
  }
  return *cur;
}

// ---------------------------------------------------------------------------
// Reduction trees

ReductionTree reduction_tree(const Proof& p, std::size_t node_budget) {
  ReductionTree tree;
  std::vector<std::optional<std::size_t>> parent;
  std::vector<std::string> keys;
  tree.nodes.push_back({p, {}, std::nullopt, std::nullopt, false});
  parent.push_back(std::nullopt);
  keys.push_back(alpha_key(p));
  std::deque<std::size_t> queue{0};
  bool exhausted = false;
  while (!queue.empty()) {
    std::size_t n = queue.front();
    queue.pop_front();
    if (tree.nodes[n].cycle) continue;
    auto rs = beta_steps(tree.nodes[n].term);
    if (rs.empty()) continue;
    if (exhausted || tree.nodes.size() + rs.size() > node_budget) {
      exhausted = true;
      tree.nodes[n].truncated = true;
      continue;
    }
    for (auto& r : rs) {
      std::size_t c = tree.nodes.size();
      std::string k = alpha_key(r.reduct);
      std::optional<std::size_t> cyc;
      for (std::optional<std::size_t> a = n; a; a = parent[*a])
        if (keys[*a] == k) {
          cyc = *a;
          break;
        }
      tree.nodes.push_back({std::move(r.reduct), {}, r.path, cyc, false});
      parent.push_back(n);
      keys.push_back(std::move(k));
      tree.nodes[n].children.push_back(c);
      queue.push_back(c);
    }
  }
  return tree;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string ReductionTree::to_dot() const {
  std::ostringstream os;
  os << "digraph reduction {\n  node [shape=box, fontname=\"monospace\"];\n";
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    os << "  n" << i << " [label=\"" << dot_escape(to_string(n.term)) << "\"";
    if (n.truncated) os << ", style=dashed";
    if (n.cycle) os << ", color=red";
    os << "];\n";
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t c : nodes[i].children)
      os << "  n" << i << " -> n" << c << " [label=\"" << to_string(*nodes[c].redex) << "\"];\n";
    if (nodes[i].cycle) os << "  n" << i << " -> n" << *nodes[i].cycle << " [style=dotted, label=\"=α\"];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Strong normalization

SNVerdict sn_verdict(const Proof& p, std::size_t node_budget) {
  struct Info {
    bool done = false;
    std::size_t maxlen = 0;
    std::size_t size = 0;
  };
  struct Frame {
    Proof term;
    std::string key;
    std::vector<Proof> reducts;
    std::vector<std::string> rkeys;
    std::size_t next = 0;
  };
  constexpr std::size_t kMax = std::numeric_limits<std::size_t>::max();
  auto sat_add = [](std::size_t a, std::size_t b) { return a > kMax - b ? kMax : a + b; };

  SNVerdict v;
  std::unordered_map<std::string, Info> memo;
  std::unordered_map<std::string, std::size_t> on_stack;  // key -> stack index
  std::vector<Frame> stack;

  auto push = [&](const Proof& q, std::string k) -> bool {
    if (v.fuel_spent >= node_budget) return false;
    ++v.fuel_spent;
    Frame f{q, std::move(k), beta_reducts(q), {}, 0};
    for (const auto& r : f.reducts) f.rkeys.push_back(alpha_key(r));
    on_stack.emplace(f.key, stack.size());
    memo.emplace(f.key, Info{});
    stack.push_back(std::move(f));
    return true;
  };

  if (!push(p, alpha_key(p))) return v;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.reducts.size()) {
      std::size_t i = f.next++;
      const std::string& k = f.rkeys[i];
      if (auto it = on_stack.find(k); it != on_stack.end()) {
        v.kind = SNVerdict::Kind::Diverges;
        for (std::size_t j = it->second; j < stack.size(); ++j) v.cycle.push_back(stack[j].term);
        v.cycle.push_back(stack[it->second].term);
        return v;
      }
      if (memo.count(k)) continue;
      Proof r = f.reducts[i];
      if (!push(r, k)) return v;
      continue;
    }
    Info info;
    info.done = true;
    info.size = 1;
    for (const auto& k : f.rkeys) {
      const Info& c = memo.at(k);
      info.maxlen = std::max(info.maxlen, c.maxlen + 1);
      info.size = sat_add(info.size, c.size);
    }
    memo[f.key] = info;
    on_stack.erase(f.key);
    stack.pop_back();
  }
  const Info& root = memo.at(alpha_key(p));
  v.kind = SNVerdict::Kind::SN;
  v.max_length = root.maxlen;
  v.tree_size = root.size;
  return v;
}

NormalizeResult normalize(const Proof& p, std::size_t fuel) {
  NormalizeResult r{p, 0, false};
  while (true) {
    auto rs = beta_steps(r.term);
    if (rs.empty()) {
      r.normal = true;
      return r;
    }
    if (r.steps >= fuel) return r;
    r.term = rs.front().reduct;
    ++r.steps;
  }
}

// ---------------------------------------------------------------------------
// Subject reduction

namespace {

bool is_silent(const Derivation& d) {
  return d.style == Style::Curry && (d.rule == Rule::ForallIntro || d.rule == Rule::ForallElim);
}

class SubjectReducer {
 public:
  SubjectReducer(const Theory& t, std::size_t fuel) : theory_(t), fuel_(fuel) {}

  Derivation reduce(const Derivation& d, const Path& path, std::size_t at) {
    if (is_silent(d)) {
      Derivation prem = reduce(d.premises[0], path, at);
      if (d.rule == Rule::ForallIntro) return make_forall_intro(d.ctx, *d.witness, d.prop, std::move(prem));
      return make_forall_elim(d.ctx, *d.witness, *d.inst, d.prop, std::move(prem));
    }
    if (at == path.size()) return contract(d);
    int dir = path[at];
    switch (d.rule) {
      case Rule::Axiom:
        throw ReductionError("path leaves the subject");
      case Rule::ImpIntro:
        if (dir != 0) throw ReductionError("invalid path under an abstraction");
        return make_imp_intro(d.ctx, d.subject.name(), *d.witness, d.prop, reduce(d.premises[0], path, at + 1));
      case Rule::ImpElim:
        if (dir == 0) return make_imp_elim(d.ctx, *d.witness, d.prop, reduce(d.premises[0], path, at + 1), d.premises[1]);
        return make_imp_elim(d.ctx, *d.witness, d.prop, d.premises[0], reduce(d.premises[1], path, at + 1));
      case Rule::ForallIntro:
        if (dir != 0) throw ReductionError("invalid path under a term abstraction");
        return make_forall_intro(d.ctx, *d.witness, d.prop, reduce(d.premises[0], path, at + 1));
      case Rule::ForallElim:
        if (dir != 0) throw ReductionError("invalid path in a term application");
        return make_forall_elim(d.ctx, *d.witness, *d.inst, d.prop, reduce(d.premises[0], path, at + 1));
    }
    throw ReductionError("unreachable");
  }

 private:
  void require(const Prop& a, const Prop& b, const char* what) {
    auto v = congruent(theory_, a, b, fuel_);
    if (!v.yes()) throw ReductionError(std::string("cannot establish ") + what + ": " + to_string(a) + " vs " + to_string(b));
  }

  // Cancels a quantifier introduction immediately eliminated: from
  // Γ ⊢ π : ∀x.M (by intro over Γ ⊢ π : M′) and elimination at t, a derivation
  // of (t/x)M′ reconcluded to the eliminated proposition.
  Derivation cancel(const Derivation& elim, const Derivation& intro) {
    const Prop& w = *intro.witness;
    require(w, *elim.witness, "∀x.M ≡ ∀x.M′");
    Derivation body = subst_derivation_term(intro.premises[0], w.name(), *elim.inst);
    return reconclude(body, elim.prop);
  }

  Derivation expose_forall(const Derivation& d) {
    if (d.rule == Rule::ForallIntro) return d;
    if (d.rule == Rule::ForallElim && is_silent(d)) return expose_forall(cancel(d, expose_forall(d.premises[0])));
    throw ReductionError("universal statement proven by " + std::string(to_string(d.rule)) +
                         " (confusing congruence is not supported)");
  }

  Derivation expose_imp(const Derivation& d) {
    if (d.rule == Rule::ImpIntro) return d;
    if (d.rule == Rule::ForallElim && is_silent(d)) return expose_imp(cancel(d, expose_forall(d.premises[0])));
    throw ReductionError("implication proven by " + std::string(to_string(d.rule)) +
                         " (confusing congruence is not supported)");
  }

  Derivation contract(const Derivation& d) {
    if (d.rule == Rule::ImpElim && d.subject.fun().is_lam()) {
      const Prop& w = *d.witness;  // A => B
      Derivation lam = expose_imp(d.premises[0]);
      const Derivation& arg = d.premises[1];
      const Prop& lw = *lam.witness;  // A0 => B0
      require(lam.prop, d.premises[0].prop, "function type");
      require(lw.lhs(), w.lhs(), "A0 ≡ A");
      require(lw.rhs(), w.rhs(), "B0 ≡ B");
      std::string a = lam.subject.name();
      Derivation body = lam.premises[0];
      if (free_proof_vars(arg.subject).count(a)) {
        std::set<std::string> avoid = all_proof_vars(d);
        std::string a2 = fresh_name(a, avoid);
        body = weaken(subst_derivation_proof(body, a, make_axiom(d.style, lam.ctx.extend(a2, lw.lhs()), a2, lw.lhs())),
                      lam.ctx.extend(a2, lw.lhs()));
        a = a2;
      }
      Derivation out = subst_derivation_proof(body, a, arg);
      if (!out.ctx.same_as(d.ctx)) out = weaken(out, d.ctx);
      return reconclude(out, d.prop);
    }
    if (d.rule == Rule::ForallElim && d.style == Style::Church && d.subject.fun().is_tlam()) {
      const Derivation& intro = d.premises[0];
      if (intro.rule != Rule::ForallIntro) throw ReductionError("term abstraction not typed by forall-intro");
      return cancel(d, intro);
    }
    throw ReductionError("path does not address a redex");
  }

  const Theory& theory_;
  std::size_t fuel_;
};

}  // namespace

Derivation reduce_derivation(const Theory& t, const Derivation& d, const Path& redex_path, std::size_t fuel) {
  return SubjectReducer(t, fuel).reduce(d, redex_path, 0);
}

}  // namespace mdm
