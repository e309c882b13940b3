#include "confym/expr.hpp"

#include <algorithm>
#include <set>

namespace confym {

namespace {

std::vector<int> identity_perm(int k) {
  std::vector<int> p(k);
  for (int i = 0; i < k; ++i) p[i] = i;
  return p;
}

// applying p then q: result[i] = p[q[i]]
std::vector<int> compose(const std::vector<int>& p, const std::vector<int>& q) {
  std::vector<int> r(p.size());
  for (size_t i = 0; i < p.size(); ++i) r[i] = p[q[i]];
  return r;
}

}  // namespace

static void compile_group(SymbolDecl& d) {
  const int k = static_cast<int>(d.slots.size());
  std::vector<std::pair<std::vector<int>, int>> gens;
  for (const auto& blk : d.symmetry.blocks) {
    for (size_t i = 0; i + 1 < blk.slots.size(); ++i) {
      auto p = identity_perm(k);
      std::swap(p[blk.slots[i]], p[blk.slots[i + 1]]);
      gens.push_back({p, blk.anti ? -1 : 1});
    }
  }
  for (const auto& ex : d.symmetry.pair_exchanges) {
    auto p = identity_perm(k);
    for (size_t i = 0; i < ex.first.size(); ++i) {
      p[ex.first[i]] = ex.second[i];
      p[ex.second[i]] = ex.first[i];
    }
    gens.push_back({p, 1});
  }
  std::map<std::vector<int>, int> seen;
  std::vector<std::pair<std::vector<int>, int>> work{{identity_perm(k), 1}};
  seen[identity_perm(k)] = 1;
  for (size_t w = 0; w < work.size(); ++w) {
    auto cur = work[w];
    for (const auto& g : gens) {
      auto np = compose(cur.first, g.first);
      int ns = cur.second * g.second;
      auto it = seen.find(np);
      if (it == seen.end()) {
        seen[np] = ns;
        work.push_back({np, ns});
        if (work.size() > 64) throw error("symmetry group of " + d.name + " too large");
      } else if (it->second != ns) {
        throw error("inconsistent symmetry signs for " + d.name);
      }
    }
  }
  d.group.assign(work.begin(), work.end());
  std::sort(d.group.begin(), d.group.end());
}

SymbolTable::SymbolTable() { declare_builtins(); }

int SymbolTable::declare(SymbolDecl decl) {
  if (by_name_.count(decl.name)) throw error("symbol already declared: " + decl.name);
  compile_group(decl);
  int id = static_cast<int>(decls_.size());
  by_name_[decl.name] = id;
  decls_.push_back(std::move(decl));
  return id;
}

int SymbolTable::id(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw error("unknown symbol: " + name);
  return it->second;
}

void SymbolTable::declare_builtins() {
  auto space = [](int k) {
    return std::vector<SlotSpec>(k, SlotSpec{Family::Space, Variance::Down});
  };
  SymmetrySpec sym2{{{{0, 1}, false}}, {}, {}};
  SymmetrySpec riemann{{{{0, 1}, true}, {{2, 3}, true}}, {{{0, 1}, {2, 3}}}, {}};

  // conformal metric and tractor metric; mixed-variance instances act as
  // Kronecker deltas and full traces give n resp. n+2
  g = declare({"g", space(2), 2, sym2, {}});
  h = declare({"h", {{Family::Tractor, Variance::Down}, {Family::Tractor, Variance::Down}}, 0, sym2, {}});

  R = declare({"R", space(4), 2, riemann, {}});
  Ric = declare({"Ric", space(2), 0, sym2, {}});
  Sc = declare({"Sc", {}, -2, {}, {}});
  P = declare({"P", space(2), 0, sym2, {}});
  J = declare({"J", {}, -2, {}, {}});
  {
    SymmetrySpec s{{{{1, 2}, true}}, {}, {{0, 1}, {0, 2}}};
    A = declare({"A", space(3), 0, s, {}});
  }
  {
    SymmetrySpec s = riemann;
    s.tracefree_pairs = {{0, 2}, {0, 3}, {1, 2}, {1, 3}};
    C = declare({"C", space(4), 2, s, {}});
  }
  {
    SymmetrySpec s = sym2;
    s.tracefree_pairs = {{0, 1}};
    B = declare({"B", space(2), -2, s, {}});
  }
  F = declare({"F",
               {{Family::Space, Variance::Down},
                {Family::Space, Variance::Down},
                {Family::Gauge, Variance::Up},
                {Family::Gauge, Variance::Down}},
               0,
               SymmetrySpec{{{{0, 1}, true}}, {}, {}},
               true,
               {}});
  Omega = declare({"Om",
                   {{Family::Space, Variance::Down},
                    {Family::Space, Variance::Down},
                    {Family::Tractor, Variance::Up},
                    {Family::Tractor, Variance::Down}},
                   0,
                   SymmetrySpec{{{{0, 1}, true}}, {}, {}},
                   true,
                   {}});
  X = declare({"X", {{Family::Tractor, Variance::Up}}, 1, {}, {}});
  Y = declare({"Y", {{Family::Tractor, Variance::Up}}, -1, {}, {}});
  Z = declare({"Z", {{Family::Tractor, Variance::Up}, {Family::Space, Variance::Up}}, -1, {}, {}});
  Ups = declare({"Ups", {}, 0, {}, {}});
  Ups1 = declare({"Ups1", space(1), 0, {}, {}});
}

}  // namespace confym
