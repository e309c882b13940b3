#include "confym/canon.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "confym/io.hpp"

namespace confym {

namespace {

struct Occurrence {
  int factor;
  int pos;  // deriv position, or derivs.size()+slot
};

// ---- metric elimination ----

bool eliminate_one_metric(const Context& ctx, Term& t, bool& killed) {
  for (size_t fi = 0; fi < t.factors.size(); ++fi) {
    Factor& f = t.factors[fi];
    if (f.sym != ctx.syms.g && f.sym != ctx.syms.h) continue;
    if (!f.derivs.empty()) {  // the conformal and tractor metrics are parallel
      killed = true;
      return true;
    }
    const Index& x = f.slots[0];
    const Index& y = f.slots[1];
    if (x.name == y.name) {
      t.coeff *= (f.sym == ctx.syms.g) ? ctx.spec(ctx.dim_coeff())
                                       : ctx.spec(ctx.dim_coeff() + Coeff(2));
      t.factors.erase(t.factors.begin() + fi);
      return true;
    }
    // find a partner occurrence of either slot name outside this factor
    for (int side = 0; side < 2; ++side) {
      const Index& own = side == 0 ? x : y;
      const Index& other = side == 0 ? y : x;
      for (size_t fj = 0; fj < t.factors.size(); ++fj) {
        if (fj == fi) continue;
        Factor& p = t.factors[fj];
        for (auto* vec : {&p.derivs, &p.slots}) {
          for (auto& idx : *vec) {
            if (idx.name == own.name) {
              idx.name = other.name;
              idx.variance = other.variance;
              t.factors.erase(t.factors.begin() + fi);
              return true;
            }
          }
        }
      }
    }
  }
  return false;
}

}  // namespace

Expr metric_normalize(const Context& ctx, const Expr& e) {
  Expr out;
  for (const auto& t0 : e.terms) {
    Term t = t0;
    bool killed = false;
    while (eliminate_one_metric(ctx, t, killed) && !killed) {
    }
    if (killed || t.coeff.is_zero()) continue;
    out.terms.push_back(std::move(t));
  }
  return out;
}

namespace {

// ---- canonical arrangement search ----

struct Candidate {
  std::vector<int> order;                 // factor order: new position -> old factor
  std::vector<const std::vector<int>*> perm;  // per new position, group element
  int sign = 1;
};

struct Walker {
  const Context& ctx;
  const Term& t;
  const Candidate& cand;

  // visit indices of the arranged candidate in scan order
  template <typename Fn>
  void walk(Fn&& fn) const {
    for (size_t np = 0; np < cand.order.size(); ++np) {
      const Factor& f = t.factors[cand.order[np]];
      for (const auto& d : f.derivs) fn(d);
      const auto& perm = *cand.perm[np];
      for (size_t s = 0; s < f.slots.size(); ++s) fn(f.slots[perm[s]]);
    }
  }
};

std::string dummy_stem(Family f) {
  switch (f) {
    case Family::Space: return "i";
    case Family::Tractor: return "I";
    default: return "%G";
  }
}

// Computes the key of a candidate arrangement. Dummy pairs in metric-bearing
// families are re-varianced so their first occurrence is down; dummy names are
// assigned by first appearance, skipping any name already used by a free index.
std::string candidate_key(const Context& ctx, const Term& t, const Candidate& cand,
                          const std::map<std::string, int>& counts,
                          const std::set<std::string>& free_names) {
  Walker w{ctx, t, cand};
  std::map<std::string, std::string> names;   // dummy -> canonical name
  std::map<std::string, Variance> first_var;  // dummy -> variance of first occurrence
  int counters[3] = {0, 0, 0};
  auto next_name = [&](Family f) {
    for (;;) {
      std::string cand_name = dummy_stem(f) + std::to_string(counters[int(f)]++);
      if (!free_names.count(cand_name)) return cand_name;
    }
  };
  w.walk([&](const Index& i) {
    if (counts.at(i.name) < 2) return;
    if (!names.count(i.name)) {
      names[i.name] = next_name(i.family);
      first_var[i.name] = i.variance;
    }
  });
  std::string key;
  key.reserve(64);
  for (size_t np = 0; np < cand.order.size(); ++np) {
    const Factor& f = t.factors[cand.order[np]];
    key += ctx.syms[f.sym].name;
    key += ':';
    key += std::to_string(f.derivs.size());
    auto emit = [&](const Index& i) {
      bool dummy = counts.at(i.name) >= 2;
      Variance v = i.variance;
      std::string nm = i.name;
      if (dummy) {
        nm = names[i.name];
        // flip the pair so its first occurrence is down (gauge has no metric)
        if (i.family != Family::Gauge && first_var[i.name] == Variance::Up) v = flip(v);
      }
      key += v == Variance::Up ? '^' : '_';
      key += nm;
      key += ',';
    };
    for (const auto& d : f.derivs) emit(d);
    key += ';';
    const auto& perm = *cand.perm[np];
    for (size_t s = 0; s < f.slots.size(); ++s) emit(f.slots[perm[s]]);
    key += '|';
  }
  return key;
}

// materialize the arranged term (same transformation the key walk applies)
Term materialize(const Context& ctx, const Term& t, const Candidate& cand,
                 const std::map<std::string, int>& counts,
                 const std::set<std::string>& free_names) {
  Term r;
  r.coeff = t.coeff * Coeff(cand.sign);
  std::map<std::string, std::string> names;
  std::map<std::string, Variance> first_var;
  int counters[3] = {0, 0, 0};
  auto next_name = [&](Family f) {
    for (;;) {
      std::string cand_name = dummy_stem(f) + std::to_string(counters[int(f)]++);
      if (!free_names.count(cand_name)) return cand_name;
    }
  };
  Walker w{ctx, t, cand};
  w.walk([&](const Index& i) {
    if (counts.at(i.name) < 2) return;
    if (!names.count(i.name)) {
      names[i.name] = next_name(i.family);
      first_var[i.name] = i.variance;
    }
  });
  auto fix = [&](Index i) {
    if (counts.at(i.name) >= 2) {
      if (i.family != Family::Gauge && first_var[i.name] == Variance::Up) i.variance = flip(i.variance);
      i.name = names[i.name];
    }
    return i;
  };
  for (size_t np = 0; np < cand.order.size(); ++np) {
    const Factor& f = t.factors[cand.order[np]];
    Factor nf;
    nf.sym = f.sym;
    for (const auto& d : f.derivs) nf.derivs.push_back(fix(d));
    const auto& perm = *cand.perm[np];
    for (size_t s = 0; s < f.slots.size(); ++s) nf.slots.push_back(fix(f.slots[perm[s]]));
    r.factors.push_back(std::move(nf));
  }
  return r;
}

struct CanonResult {
  Term term;      // canonical arrangement (coeff includes sign)
  std::string key;
  bool zero = false;
};

CanonResult canonicalize_term(const Context& ctx, const Term& t0) {
  CanonResult res;
  if (t0.coeff.is_zero()) {
    res.zero = true;
    return res;
  }
  Term t = t0;

  std::map<std::string, int> counts;
  for (const auto& f : t.factors) {
    for (const auto& d : f.derivs) counts[d.name]++;
    for (const auto& s : f.slots) counts[s.name]++;
  }
  std::set<std::string> free_names;
  for (const auto& [k, v] : counts)
    if (v == 1) free_names.insert(k);

  const size_t nf = t.factors.size();
  // skeleton sort: (symbol name, deriv count) with ties enumerated below
  std::vector<int> base(nf);
  std::iota(base.begin(), base.end(), 0);
  auto skel = [&](int i) {
    return std::make_pair(ctx.syms[t.factors[i].sym].name, t.factors[i].derivs.size());
  };
  std::stable_sort(base.begin(), base.end(), [&](int a, int b) { return skel(a) < skel(b); });

  // tie groups of equal skeleton
  std::vector<std::pair<size_t, size_t>> groups;
  for (size_t i = 0; i < nf;) {
    size_t j = i + 1;
    while (j < nf && skel(base[j]) == skel(base[i])) ++j;
    if (j - i > 1) groups.push_back({i, j});
    i = j;
  }

  // cost guard
  double cost = 1;
  for (auto [a, b] : groups)
    for (size_t k = 2; k <= b - a; ++k) cost *= double(k);
  for (size_t i = 0; i < nf; ++i) cost *= double(ctx.syms[t.factors[i].sym].group.size());
  if (cost > 5e6) throw error("canonicalize: symmetry search too large for term");

  std::string best_key;
  int best_sign = 0;
  Candidate best;
  bool zero = false;

  Candidate cand;
  cand.order = base;
  cand.perm.assign(nf, nullptr);

  // enumerate tie-group permutations via recursion over groups
  std::vector<std::vector<int>> group_perms;
  for (auto [a, b] : groups) {
    std::vector<int> ids(base.begin() + a, base.begin() + b);
    std::sort(ids.begin(), ids.end());
    group_perms.push_back(ids);
  }

  std::function<void(size_t)> enum_syms = [&](size_t fpos) {
    if (fpos == nf) {
      std::string key = candidate_key(ctx, t, cand, counts, free_names);
      if (best_sign == 0 || key < best_key) {
        best_key = key;
        best_sign = cand.sign;
        best = cand;
      } else if (key == best_key && cand.sign != best_sign) {
        zero = true;
      }
      return;
    }
    const auto& grp = ctx.syms[t.factors[cand.order[fpos]].sym].group;
    if (grp.empty()) {
      static const std::vector<int> empty_perm;
      cand.perm[fpos] = &empty_perm;
      enum_syms(fpos + 1);
      return;
    }
    for (const auto& g : grp) {
      cand.perm[fpos] = &g.first;
      int s = cand.sign;
      cand.sign *= g.second;
      enum_syms(fpos + 1);
      cand.sign = s;
    }
  };

  std::function<void(size_t)> enum_orders = [&](size_t gi) {
    if (gi == groups.size()) {
      enum_syms(0);
      return;
    }
    auto [a, b] = groups[gi];
    std::vector<int> ids = group_perms[gi];
    do {
      for (size_t k = a; k < b; ++k) cand.order[k] = ids[k - a];
      enum_orders(gi + 1);
    } while (std::next_permutation(ids.begin(), ids.end()));
  };

  enum_orders(0);

  if (zero) {
    res.zero = true;
    return res;
  }
  res.term = materialize(ctx, t, best, counts, free_names);
  res.key = best_key;
  return res;
}

}  // namespace

std::string term_key(const Context& ctx, const Term& t) {
  Expr one = metric_normalize(ctx, expr_term(t));
  if (one.terms.empty()) return "";
  return canonicalize_term(ctx, one.terms[0]).key;
}

Expr canonicalize(const Context& ctx, const Expr& e) {
  Expr mn = metric_normalize(ctx, specialize(ctx, e));
  std::map<std::string, Term> acc;
  for (const auto& t : mn.terms) {
    CanonResult r = canonicalize_term(ctx, t);
    if (r.zero) continue;
    auto it = acc.find(r.key);
    if (it == acc.end()) {
      acc.emplace(r.key, std::move(r.term));
    } else {
      it->second.coeff += r.term.coeff;
    }
  }
  Expr out;
  for (auto& [k, t] : acc) {
    Coeff c = ctx.spec(t.coeff);
    if (c.is_zero()) continue;
    t.coeff = std::move(c);
    out.terms.push_back(std::move(t));
  }
  return out;
}

bool equivalent(const Context& ctx, const Expr& a, const Expr& b) {
  if (!a.is_zero() && !b.is_zero()) {
    auto fr = [&](const Expr& e) {
      std::vector<std::string> k;
      for (const auto& i : free_indices(e.terms[0]))
        k.push_back(i.name + (i.variance == Variance::Up ? "^" : "_"));
      std::sort(k.begin(), k.end());
      return k;
    };
    if (fr(a) != fr(b)) throw error("equivalent: free-index mismatch");
    if (weight_of(ctx, a) != weight_of(ctx, b)) throw error("equivalent: weight mismatch");
  }
  return canonicalize(ctx, a - b).is_zero();
}

}  // namespace confym
