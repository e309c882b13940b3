#include "confym/rules.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "confym/canon.hpp"
#include "confym/io.hpp"

namespace confym {

namespace {

// natural order on index names: "i2" < "i10", frees and dummies interleaved
// by plain (stem, number) comparison
std::pair<std::string, long> split_name(const std::string& n) {
  size_t p = n.size();
  while (p > 0 && std::isdigit(static_cast<unsigned char>(n[p - 1]))) --p;
  long num = -1;
  if (p < n.size()) num = std::stol(n.substr(p));
  return {n.substr(0, p), num};
}

bool name_less(const std::string& a, const std::string& b) {
  auto sa = split_name(a), sb = split_name(b);
  if (sa.first != sb.first) return sa.first < sb.first;
  if (sa.second != sb.second) return sa.second < sb.second;
  return a < b;
}


bool factor_has_slot_name(const Factor& f, const std::string& name) {
  for (const auto& s : f.slots)
    if (s.name == name) return true;
  return false;
}

// ---- commutation ----

struct DerivKey {
  int contracted;  // 1 if paired with a slot of the same factor
  std::string name;
};

bool deriv_out_of_order(const DerivKey& a, const DerivKey& b) {
  if (a.contracted != b.contracted) return a.contracted > b.contracted;
  return name_less(b.name, a.name) ? true : false;
}

Expr commute_correction(const Context& ctx, const Term& t, size_t fi, size_t k) {
  // correction terms for swapping deriv positions k, k+1 of factor fi:
  // outer derivs 0..k-1 are reapplied by Leibniz over (curvature x factor)
  const Factor& f = t.factors[fi];
  const Index& u = f.derivs[k];
  const Index& v = f.derivs[k + 1];

  Expr corr;
  // affected positions: deeper derivs, then slots
  const size_t ndeep = f.derivs.size() - (k + 2);
  for (size_t a = 0; a < ndeep + f.slots.size(); ++a) {
    bool is_deriv = a < ndeep;
    Index affected = is_deriv ? f.derivs[k + 2 + a] : f.slots[a - ndeep];
    int curv_sym;
    std::string stem;
    switch (affected.family) {
      case Family::Space: curv_sym = ctx.syms.R; stem = "j"; break;
      case Family::Gauge: curv_sym = ctx.syms.F; stem = "%J"; break;
      default: curv_sym = ctx.syms.Omega; stem = "J"; break;
    }
    std::string fres = fresh_name({&t}, stem);

    Factor curv;
    curv.sym = curv_sym;
    Factor inner;
    inner.sym = f.sym;
    inner.derivs.assign(f.derivs.begin() + k + 2, f.derivs.end());
    inner.slots = f.slots;
    Index& target = is_deriv ? inner.derivs[a] : inner.slots[a - ndeep];

    Coeff sign(1);
    if (affected.variance == Variance::Up) {
      // [nabla_u, nabla_v] T^m = +Curv_{uv}^m{}_j T^j
      curv.slots = {u, v, affected, Index{fres, affected.family, Variance::Down}};
      target = Index{fres, affected.family, Variance::Up};
    } else {
      // [nabla_u, nabla_v] T_m = -Curv_{uv}^j{}_m T_j
      curv.slots = {u, v, Index{fres, affected.family, Variance::Up}, affected};
      target = Index{fres, affected.family, Variance::Down};
      sign = Coeff(-1);
    }
    if (affected.family == Family::Space) {
      // R is declared all-down: the third slot above is written in the
      // affected/fresh index variance, which the key shows as raised slots
    }
    Term piece;
    piece.coeff = sign;
    piece.factors = {curv, inner};
    corr = corr + expr_term(piece);
  }
  // reapply outer derivs, innermost first
  for (size_t j = k; j-- > 0;) corr = derivative(corr, f.derivs[j]);
  // multiply by the untouched factors and the term's coefficient
  Term rest;
  rest.coeff = t.coeff;
  for (size_t i = 0; i < t.factors.size(); ++i)
    if (i != fi) rest.factors.push_back(t.factors[i]);
  return mul(ctx, expr_term(rest), corr);
}

}  // namespace

Expr commute_to_order(const Context& ctx, const Expr& e, DerivOrder policy) {
  std::vector<Term> work(e.terms.begin(), e.terms.end());
  Expr out;
  size_t guard = 0;
  while (!work.empty()) {
    if (++guard > 2000000) throw error("commute_to_order: no convergence");
    Term t = std::move(work.back());
    work.pop_back();

    bool swapped = false;
    for (size_t fi = 0; fi < t.factors.size() && !swapped; ++fi) {
      Factor& f = t.factors[fi];
      if (f.derivs.size() < 2) continue;
      auto key = [&](const Index& d) {
        int c = policy == DerivOrder::contracted_innermost && factor_has_slot_name(f, d.name) ? 1 : 0;
        return DerivKey{c, d.name};
      };
      for (size_t k = 0; k + 1 < f.derivs.size(); ++k) {
        if (deriv_out_of_order(key(f.derivs[k]), key(f.derivs[k + 1]))) {
          Expr corr = commute_correction(ctx, t, fi, k);
          std::swap(f.derivs[k], f.derivs[k + 1]);
          work.push_back(t);
          for (auto& ct : corr.terms) work.push_back(std::move(ct));
          swapped = true;
          break;
        }
      }
    }
    if (!swapped) out.terms.push_back(std::move(t));
  }
  return out;
}

// ---- basis substitutions ----

namespace {

struct SubstRule {
  int sym;
  std::vector<Index> params;
  Expr tmpl;
};

std::vector<SubstRule> parse_rules(const Context& ctx,
                                   const std::vector<std::pair<std::string, std::string>>& defs) {
  std::vector<SubstRule> out;
  for (const auto& [lhs, rhs] : defs) {
    Expr l = parse(ctx, lhs);
    if (l.terms.size() != 1 || l.terms[0].factors.size() != 1)
      throw error("substitution lhs must be a single factor: " + lhs);
    SubstRule r;
    r.sym = l.terms[0].factors[0].sym;
    r.params = l.terms[0].factors[0].slots;
    r.tmpl = parse(ctx, rhs);
    out.push_back(std::move(r));
  }
  return out;
}

bool contains_symbol(const Expr& e, int sym) {
  for (const auto& t : e.terms)
    for (const auto& f : t.factors)
      if (f.sym == sym) return true;
  return false;
}

const std::vector<std::pair<std::string, std::string>>& riemann_defs() {
  static const std::vector<std::pair<std::string, std::string>> defs = {
      {"B[a,b]", "nd[^c](A[a,c,b]) + P[^c,^d]*C[c,a,d,b]"},
      {"C[a,b,c,d]",
       "R[a,b,c,d] + g[c,b]*P[a,d] - g[c,a]*P[b,d] + g[d,a]*P[b,c] - g[d,b]*P[a,c]"},
      {"A[a,b,c]", "nd[b](P[c,a]) - nd[c](P[b,a])"},
      {"P[a,b]", "(1)/(n-2)*Ric[a,b] - (1)/(2*n^2-6*n+4)*g[a,b]*Sc[]"},
      {"J[]", "(1)/(2*n-2)*Sc[]"},
  };
  return defs;
}

const std::vector<std::pair<std::string, std::string>>& weyl_defs() {
  static const std::vector<std::pair<std::string, std::string>> defs = {
      {"R[a,b,c,d]",
       "C[a,b,c,d] - g[c,b]*P[a,d] + g[c,a]*P[b,d] - g[d,a]*P[b,c] + g[d,b]*P[a,c]"},
      {"Ric[a,b]", "(n-2)*P[a,b] + J[]*g[a,b]"},
      {"Sc[]", "(2*n-2)*J[]"},
  };
  return defs;
}

}  // namespace

Expr substitute_basis(const Context& ctx, const Expr& e, Basis basis) {
  auto rules = parse_rules(ctx, basis == Basis::riemann ? riemann_defs() : weyl_defs());
  Expr cur = e;
  for (int pass = 0; pass < 16; ++pass) {
    bool any = false;
    for (const auto& r : rules) {
      if (contains_symbol(cur, r.sym)) {
        cur = subst_symbol(ctx, cur, r.sym, r.params, r.tmpl);
        any = true;
      }
    }
    if (!any) return cur;
  }
  throw error("substitute_basis: no convergence");
}

// ---- traces ----

Expr apply_traces(const Context& ctx, const Expr& e) {
  Expr out;
  for (const auto& t0 : e.terms) {
    std::vector<Term> work{t0};
    while (!work.empty()) {
      Term t = std::move(work.back());
      work.pop_back();
      bool rewritten = false;
      bool killed = false;
      for (size_t fi = 0; fi < t.factors.size() && !rewritten; ++fi) {
        Factor& f = t.factors[fi];
        // find a self-contracted slot pair
        int p = -1, q = -1;
        for (size_t i = 0; i < f.slots.size() && p < 0; ++i)
          for (size_t j = i + 1; j < f.slots.size(); ++j)
            if (f.slots[i].name == f.slots[j].name) {
              p = static_cast<int>(i);
              q = static_cast<int>(j);
              break;
            }
        if (p < 0) continue;
        const auto& decl = ctx.syms[f.sym];
        // trace-free pair or a pair inside an antisymmetric block
        auto kill = [&] {
          for (const auto& tf : decl.symmetry.tracefree_pairs)
            if ((tf.first == p && tf.second == q) || (tf.first == q && tf.second == p)) return true;
          for (const auto& blk : decl.symmetry.blocks) {
            if (!blk.anti) continue;
            bool hp = std::count(blk.slots.begin(), blk.slots.end(), p);
            bool hq = std::count(blk.slots.begin(), blk.slots.end(), q);
            if (hp && hq) return true;
          }
          return false;
        };
        if (kill()) {
          killed = true;
          rewritten = true;
          break;
        }
        if (f.sym == ctx.syms.P || f.sym == ctx.syms.Ric) {
          Factor nf;
          nf.sym = f.sym == ctx.syms.P ? ctx.syms.J : ctx.syms.Sc;
          nf.derivs = f.derivs;
          t.factors[fi] = nf;
          rewritten = true;
        } else if (f.sym == ctx.syms.R) {
          // trace positions map: (0,2),(1,3) -> +Ric, (0,3),(1,2) -> -Ric
          int sgn = ((p == 0 && q == 2) || (p == 1 && q == 3)) ? 1 : -1;
          Factor nf;
          nf.sym = ctx.syms.Ric;
          nf.derivs = f.derivs;
          for (int i = 0; i < 4; ++i)
            if (i != p && i != q) nf.slots.push_back(f.slots[i]);
          t.factors[fi] = nf;
          t.coeff *= Coeff(sgn);
          rewritten = true;
        }
        // other symbols: leave the self-contraction in place
      }
      if (killed) continue;
      if (rewritten)
        work.push_back(std::move(t));
      else
        out.terms.push_back(std::move(t));
    }
  }
  return out;
}

// ---- first-Bianchi / cyclic straightening ----

namespace {

// Straightens one factor of Riemann/Weyl type: with slot names ranked
// w<x<y<z, the arrangement class with (w,z) leading satisfies
// T(w,z,x,y) = T(w,y,x,z) - T(w,x,y,z).
bool straighten_riemann_factor(const Context& ctx, const Term& t, size_t fi,
                               std::vector<Term>& out) {
  const Factor& f = t.factors[fi];
  std::set<std::string> names;
  for (const auto& s : f.slots) names.insert(s.name);
  if (names.size() != 4) return false;
  std::vector<std::string> sorted(names.begin(), names.end());
  std::sort(sorted.begin(), sorted.end(), name_less);
  const std::string &w = sorted[0], &x = sorted[1], &y = sorted[2], &z = sorted[3];

  const auto& grp = ctx.syms[f.sym].group;
  for (const auto& [perm, sgn] : grp) {
    std::vector<Index> arr(4);
    for (int i = 0; i < 4; ++i) arr[i] = f.slots[perm[i]];
    if (arr[0].name == w && arr[1].name == z && arr[2].name == x && arr[3].name == y) {
      // original = sgn * T(w,z,x,y) = sgn * (T(w,y,x,z) - T(w,x,y,z))
      Term t1 = t, t2 = t;
      t1.coeff *= Coeff(sgn);
      t2.coeff *= Coeff(-sgn);
      t1.factors[fi].slots = {arr[0], arr[3], arr[2], arr[1]};  // (w,y,x,z)
      t2.factors[fi].slots = {arr[0], arr[2], arr[3], arr[1]};  // (w,x,y,z)
      out.push_back(std::move(t1));
      out.push_back(std::move(t2));
      return true;
    }
  }
  return false;
}

// Cotton cyclic identity A_[abc] = 0 with antisymmetry in the last two slots:
// with ranks w<x<y, A(y,w,x) = A(x,w,y) - A(w,x,y).
bool straighten_cotton_factor(const Context& ctx, const Term& t, size_t fi,
                              std::vector<Term>& out) {
  const Factor& f = t.factors[fi];
  std::set<std::string> names;
  for (const auto& s : f.slots) names.insert(s.name);
  if (names.size() != 3) return false;
  std::vector<std::string> sorted(names.begin(), names.end());
  std::sort(sorted.begin(), sorted.end(), name_less);
  const std::string &w = sorted[0], &x = sorted[1], &y = sorted[2];
  const auto& grp = ctx.syms[f.sym].group;
  for (const auto& [perm, sgn] : grp) {
    std::vector<Index> arr(3);
    for (int i = 0; i < 3; ++i) arr[i] = f.slots[perm[i]];
    if (arr[0].name == y && arr[1].name == w && arr[2].name == x) {
      Term t1 = t, t2 = t;
      t1.coeff *= Coeff(sgn);
      t2.coeff *= Coeff(-sgn);
      t1.factors[fi].slots = {arr[2], arr[1], arr[0]};  // (x,w,y)
      t2.factors[fi].slots = {arr[1], arr[2], arr[0]};  // (w,x,y)
      out.push_back(std::move(t1));
      out.push_back(std::move(t2));
      return true;
    }
  }
  return false;
}

// d-closedness of a declared-closed 2-form S: nabla_[d S_ab] = 0, with the
// innermost derivative taking part. With ranks w<x<y:
// nabla_y S(w,x) = nabla_x S(w,y) - nabla_w S(x,y).
bool straighten_closed_factor(const Context& ctx, const Term& t, size_t fi,
                              std::vector<Term>& out) {
  const Factor& f = t.factors[fi];
  const auto& decl = ctx.syms[f.sym];
  if (!decl.closed || f.derivs.empty()) return false;
  // the two spacetime form slots are the first two by declaration
  const Index& d = f.derivs.back();
  const Index& s0 = f.slots[0];
  const Index& s1 = f.slots[1];
  std::set<std::string> names{d.name, s0.name, s1.name};
  if (names.size() != 3) return false;
  std::vector<std::string> sorted(names.begin(), names.end());
  std::sort(sorted.begin(), sorted.end(), name_less);
  const std::string &w = sorted[0], &x = sorted[1], &y = sorted[2];
  // bring to the arrangement (deriv, slot0, slot1) with slot0-rank < slot1-rank
  Index dd = d, a0 = s0, a1 = s1;
  int sgn = 1;
  if (name_less(a1.name, a0.name)) {
    std::swap(a0, a1);
    sgn = -1;
  }
  if (dd.name != y) return false;  // only the top-ranked deriv arrangement rewrites
  // sgn * nabla_y S(a0,a1) with (a0,a1) = (w,x)
  (void)w;
  Term t1 = t, t2 = t;
  auto install = [&](Term& dst, const Index& nd, const Index& n0, const Index& n1) {
    Factor& g = dst.factors[fi];
    g.derivs.back() = nd;
    g.slots[0] = n0;
    g.slots[1] = n1;
  };
  t1.coeff *= Coeff(sgn);
  t2.coeff *= Coeff(-sgn);
  install(t1, a1, a0, dd);  // nabla_x S(w,y)
  install(t2, a0, a1, dd);  // nabla_w S(x,y)
  out.push_back(std::move(t1));
  out.push_back(std::move(t2));
  return true;
}

}  // namespace

Expr straighten(const Context& ctx, const Expr& e) {
  Expr out;
  for (const auto& t0 : e.terms) {
    std::vector<Term> work{t0};
    while (!work.empty()) {
      Term t = std::move(work.back());
      work.pop_back();
      bool rewritten = false;
      for (size_t fi = 0; fi < t.factors.size() && !rewritten; ++fi) {
        int sym = t.factors[fi].sym;
        if (sym == ctx.syms.R || sym == ctx.syms.C)
          rewritten = straighten_riemann_factor(ctx, t, fi, work);
        else if (sym == ctx.syms.A)
          rewritten = straighten_cotton_factor(ctx, t, fi, work);
        else if (ctx.syms[sym].closed)
          rewritten = straighten_closed_factor(ctx, t, fi, work);
      }
      if (!rewritten) out.terms.push_back(std::move(t));
    }
  }
  return out;
}

// ---- divergence normal set ----

namespace {

// returns the slot position paired with the innermost deriv, or -1
int innermost_contracted_slot(const Factor& f) {
  if (f.derivs.empty()) return -1;
  const std::string& n = f.derivs.back().name;
  for (size_t i = 0; i < f.slots.size(); ++i)
    if (f.slots[i].name == n) return static_cast<int>(i);
  return -1;
}

// bring the contracted slot of a Riemann/Weyl-type factor to `target_pos`
// using the symmetry group; returns (arranged slots, sign)
bool arrange_contracted(const Context& ctx, const Factor& f, int slot, int target_pos,
                        std::vector<Index>& arr, int& sgn) {
  const auto& grp = ctx.syms[f.sym].group;
  for (const auto& [perm, s] : grp) {
    if (perm[target_pos] == slot) {
      arr.resize(f.slots.size());
      for (size_t i = 0; i < f.slots.size(); ++i) arr[i] = f.slots[perm[i]];
      sgn = s;
      return true;
    }
  }
  return false;
}

Expr divergence_replacement(const Context& ctx, const Term& t, size_t fi, Basis basis,
                            bool& applied) {
  applied = false;
  const Factor& f = t.factors[fi];
  int slot = innermost_contracted_slot(f);
  if (slot < 0) return {};
  std::vector<Index> outer(f.derivs.begin(), f.derivs.end() - 1);

  auto build = [&](const Expr& repl) {
    // outer derivatives applied to the replacement, times the other factors
    Expr acc = repl;
    for (size_t j = outer.size(); j-- > 0;) acc = derivative(acc, outer[j]);
    Term rest;
    rest.coeff = t.coeff;
    for (size_t i = 0; i < t.factors.size(); ++i)
      if (i != fi) rest.factors.push_back(t.factors[i]);
    applied = true;
    return mul(ctx, expr_term(rest), acc);
  };

  auto idx_expr = [&](std::initializer_list<Factor> fs, int sgn) {
    Term nt;
    nt.coeff = Coeff(sgn);
    nt.factors = fs;
    return expr_term(nt);
  };

  if (basis == Basis::riemann && f.sym == ctx.syms.R) {
    std::vector<Index> arr;
    int sgn;
    if (!arrange_contracted(ctx, f, slot, 2, arr, sgn)) return {};
    // nabla^x R(b,c,x,e) = nabla_b Ric(c,e) - nabla_c Ric(b,e)
    Factor r1{ctx.syms.Ric, {arr[0]}, {arr[1], arr[3]}};
    Factor r2{ctx.syms.Ric, {arr[1]}, {arr[0], arr[3]}};
    return build(idx_expr({r1}, sgn) + idx_expr({r2}, -sgn));
  }
  if (basis == Basis::riemann && f.sym == ctx.syms.Ric) {
    // nabla^x Ric(x,b) = 1/2 nabla_b Sc
    Index other = f.slots[1 - slot];
    Factor r{ctx.syms.Sc, {other}, {}};
    Expr repl = Coeff(1, 2) * expr_factor(Coeff(1), r);
    return build(repl);
  }
  if (basis == Basis::weyl_schouten && f.sym == ctx.syms.C) {
    std::vector<Index> arr;
    int sgn;
    if (!arrange_contracted(ctx, f, slot, 0, arr, sgn)) return {};
    // nabla^x C(x,b,c,d) = (n-3) A(b,c,d)
    Factor a{ctx.syms.A, {}, {arr[1], arr[2], arr[3]}};
    return build((ctx.spec(Coeff(sgn) * (Coeff::n() - Coeff(3)))) * expr_factor(Coeff(1), a));
  }
  if (basis == Basis::weyl_schouten && f.sym == ctx.syms.A) {
    if (slot == 0) {
      applied = true;
      return Expr::zero();  // nabla^x A(x,b,c) = 0
    }
    // bring the contraction to the middle slot: A antisymmetric in (1,2)
    Index a0 = f.slots[0], a1 = f.slots[1], a2 = f.slots[2];
    int sgn = 1;
    if (slot == 2) {
      std::swap(a1, a2);
      sgn = -1;
    }
    // nabla^x A(b,x,c) = B(b,c) - P^{uv} C(u,b,v,c)
    Factor b{ctx.syms.B, {}, {a0, a2}};
    std::string u = fresh_name({&t}, "u");
    std::string v = fresh_name({&t}, "v");
    Factor p{ctx.syms.P, {}, {up(u), up(v)}};
    Factor c{ctx.syms.C, {}, {dn(u), a0, dn(v), a2}};
    return build(idx_expr({b}, sgn) + idx_expr({p, c}, -sgn));
  }
  if (basis == Basis::weyl_schouten && f.sym == ctx.syms.P) {
    // nabla^x P(x,b) = nabla_b J
    Index other = f.slots[1 - slot];
    Factor j{ctx.syms.J, {other}, {}};
    return build(expr_factor(Coeff(1), j));
  }
  return {};
}

}  // namespace

Expr apply_divergences(const Context& ctx, const Expr& e, Basis basis) {
  std::vector<Term> work(e.terms.begin(), e.terms.end());
  Expr out;
  size_t guard = 0;
  while (!work.empty()) {
    if (++guard > 500000) throw error("apply_divergences: no convergence");
    Term t = std::move(work.back());
    work.pop_back();
    bool any = false;
    for (size_t fi = 0; fi < t.factors.size() && !any; ++fi) {
      bool applied = false;
      Expr repl = divergence_replacement(ctx, t, fi, basis, applied);
      if (applied) {
        for (auto& nt : repl.terms) work.push_back(std::move(nt));
        any = true;
      }
    }
    if (!any) out.terms.push_back(std::move(t));
  }
  return out;
}

// ---- normal forms ----

namespace {

Expr one_pass(const Context& ctx, Expr e, Basis basis) {
  e = substitute_basis(ctx, e, basis);
  e = apply_traces(ctx, e);
  e = canonicalize(ctx, e);
  e = commute_to_order(ctx, e, DerivOrder::contracted_innermost);
  e = substitute_basis(ctx, e, basis);  // corrections insert R
  e = apply_traces(ctx, e);
  e = apply_divergences(ctx, e, basis);
  e = substitute_basis(ctx, e, basis);
  e = apply_traces(ctx, e);
  e = commute_to_order(ctx, e, DerivOrder::sorted);
  e = substitute_basis(ctx, e, basis);
  e = apply_traces(ctx, e);
  e = straighten(ctx, e);
  e = canonicalize(ctx, e);
  return e;
}

}  // namespace

Expr normal_form(const Context& ctx, const Expr& e, Basis basis) {
  Expr cur = canonicalize(ctx, e);
  std::set<std::string> seen;
  std::string best_print;
  Expr best;
  for (int it = 0; it < 40; ++it) {
    std::string s = print(ctx, cur);
    if (best_print.empty() || s.size() < best_print.size() ||
        (s.size() == best_print.size() && s < best_print)) {
      best_print = s;
      best = cur;
    }
    if (!seen.insert(s).second) return best;  // fixed point or cycle
    cur = one_pass(ctx, cur, basis);
    if (cur.is_zero()) return cur;
  }
  return best;
}

Expr bianchi_simplify(const Context& ctx, const Expr& e) {
  return normal_form(ctx, e, Basis::riemann);
}

ZeroCertificate is_zero_symbolic(const Context& ctx, const Expr& e) {
  ZeroCertificate c;
  c.residual = normal_form(ctx, e, Basis::riemann);
  c.zero = c.residual.is_zero();
  c.kind = "symbolic";
  return c;
}

// ---- integration by parts ----

namespace {

// one IBP step: move the outermost derivative of factor fi onto all other
// factors, modulo a total divergence; valid for scalar terms
Expr ibp_step(const Term& t, size_t fi) {
  Term base = t;
  Index d = base.factors[fi].derivs.front();
  base.factors[fi].derivs.erase(base.factors[fi].derivs.begin());
  Expr out;
  for (size_t j = 0; j < base.factors.size(); ++j) {
    if (j == fi) continue;
    Term nt = base;
    nt.coeff = -nt.coeff;
    nt.factors[j].derivs.insert(nt.factors[j].derivs.begin(), d);
    out.terms.push_back(std::move(nt));
  }
  return out;
}

}  // namespace

Expr ibp_normal_form(const Context& ctx, const Expr& e) {
  // depth-capped: repeated moves between same-class factors cannot cycle
  std::vector<std::pair<Term, int>> work;
  for (const auto& t : e.terms) work.push_back({t, 0});
  Expr out;
  while (!work.empty()) {
    auto [t, depth] = std::move(work.back());
    work.pop_back();
    if (t.factors.size() < 2 || depth > 32) {
      out.terms.push_back(std::move(t));
      continue;
    }
    // first symbol class present in the term
    std::string first_class;
    for (const auto& f : t.factors) {
      const std::string& nm = ctx.syms[f.sym].name;
      if (first_class.empty() || nm < first_class) first_class = nm;
    }
    // move derivatives off the highest class factor that carries any
    int best = -1;
    std::string best_name;
    for (size_t i = 0; i < t.factors.size(); ++i) {
      const std::string& nm = ctx.syms[t.factors[i].sym].name;
      if (nm == first_class || t.factors[i].derivs.empty()) continue;
      if (best < 0 || nm > best_name) {
        best = static_cast<int>(i);
        best_name = nm;
      }
    }
    if (best < 0) {
      // all derivatives sit on the first class; balance between instances of
      // one class so that J*Lap(J)-style terms meet their by-parts partners
      int max_i = -1, min_c = 1 << 20, max_c = -1;
      for (size_t i = 0; i < t.factors.size(); ++i) {
        int c = static_cast<int>(t.factors[i].derivs.size());
        min_c = std::min(min_c, c);
        if (c > max_c && ctx.syms[t.factors[i].sym].name == first_class) {
          max_c = c;
          max_i = static_cast<int>(i);
        }
      }
      if (max_i >= 0 && max_c >= min_c + 2) {
        Expr stepped = ibp_step(t, static_cast<size_t>(max_i));
        for (auto& nt : stepped.terms) work.push_back({std::move(nt), depth + 1});
      } else {
        out.terms.push_back(std::move(t));
      }
      continue;
    }
    Expr stepped = ibp_step(t, static_cast<size_t>(best));
    for (auto& nt : stepped.terms) work.push_back({std::move(nt), depth + 1});
  }
  return out;
}

ZeroCertificate divergence_equivalent_symbolic(const Context& ctx, const Expr& e1,
                                               const Expr& e2) {
  ZeroCertificate c;
  c.kind = "symbolic";
  Expr diff = normal_form(ctx, e1 - e2, Basis::weyl_schouten);
  for (int round = 0; round < 6 && !diff.is_zero(); ++round) {
    Expr next = normal_form(ctx, ibp_normal_form(ctx, diff), Basis::weyl_schouten);
    if (print(ctx, next) == print(ctx, diff)) break;
    diff = next;
  }
  c.residual = diff;
  c.zero = diff.is_zero();
  return c;
}

// ---- catalog ----

std::vector<RuleInfo> rule_catalog() {
  std::vector<RuleInfo> rules;
  auto add = [&](std::string name, std::string group, std::string lhs, std::string rhs,
                 bool procedural = false) {
    rules.push_back({std::move(name), std::move(group), std::move(lhs), std::move(rhs), procedural});
  };

  add("leibniz-product", "leibniz", "nd[e](P[a,b])*J[] + P[a,b]*nd[e](J[])",
      "nd[e](P[a,b])*J[] + P[a,b]*nd[e](J[])", true);
  add("commute-spacetime", "commute",
      "nd[a](nd[b](P[c,d])) - nd[b](nd[a](P[c,d]))",
      "-R[a,b,^u,c]*P[u,d] - R[a,b,^u,d]*P[c,u]", true);
  add("commute-scalar-density", "commute", "nd[a](nd[b](J[])) - nd[b](nd[a](J[]))", "0", true);
  add("commute-gauge", "commute",
      "nd[a](nd[b](F[c,d,^%G,%H])) - nd[b](nd[a](F[c,d,^%G,%H]))",
      "-R[a,b,^u,c]*F[u,d,^%G,%H] - R[a,b,^u,d]*F[c,u,^%G,%H]"
      " + F[a,b,^%G,%U]*F[c,d,^%U,%H] - F[a,b,^%U,%H]*F[c,d,^%G,%U]",
      true);
  add("commute-tractor", "commute", "nd[a](nd[b](X[^D])) - nd[b](nd[a](X[^D]))",
      "Om[a,b,^D,I]*X[^I]", true);

  for (const auto& [l, r] : riemann_defs()) add("to-riemann " + l, "to_riemann", l, r);
  for (const auto& [l, r] : weyl_defs()) add("to-weyl " + l, "to_weyl_schouten", l, r);

  add("trace-P", "traces", "P[u,^u]", "J[]", true);
  add("trace-Ric", "traces", "Ric[u,^u]", "Sc[]", true);
  add("trace-R-02", "traces", "R[u,a,^u,b]", "Ric[a,b]", true);
  add("trace-R-03", "traces", "R[u,a,b,^u]", "-Ric[a,b]", true);
  add("trace-C", "traces", "C[u,a,^u,b]", "0", true);
  add("trace-A", "traces", "A[u,^u,c]", "0", true);
  add("trace-B", "traces", "B[u,^u]", "0", true);

  add("first-bianchi-R", "bianchi", "R[a,b,c,d] + R[a,c,d,b] + R[a,d,b,c]", "0", true);
  add("first-bianchi-C", "bianchi", "C[a,b,c,d] + C[a,c,d,b] + C[a,d,b,c]", "0", true);
  add("cotton-cyclic", "bianchi", "A[a,b,c] + A[b,c,a] + A[c,a,b]", "0", true);
  add("second-bianchi-contracted", "bianchi",
      "nd[^u](R[b,c,u,e]) - nd[b](Ric[c,e]) + nd[c](Ric[b,e])", "0", true);
  add("ricci-divergence", "bianchi", "nd[^u](Ric[u,b]) - 1/2*nd[b](Sc[])", "0", true);
  add("weyl-divergence", "bianchi", "nd[^u](C[u,b,c,d]) - (n-3)*A[b,c,d]", "0", true);
  add("cotton-divergence-first", "bianchi", "nd[^u](A[u,b,c])", "0", true);
  add("cotton-divergence-mid", "bianchi",
      "nd[^u](A[a,u,b]) - B[a,b] + P[^u,^v]*C[u,a,v,b]", "0", true);
  add("schouten-divergence", "bianchi", "nd[^u](P[u,b]) - nd[b](J[])", "0", true);
  add("gauge-bianchi", "bianchi",
      "nd[a](F[b,c,^%G,%H]) + nd[b](F[c,a,^%G,%H]) + nd[c](F[a,b,^%G,%H])", "0", true);

  add("connid-X", "tractor", "nd[a](X[^B])", "Z[^B,a]");
  add("connid-Y", "tractor", "nd[a](Y[^B])", "P[a,c]*Z[^B,^c]");
  add("connid-Z", "tractor", "nd[a](Z[^B,^c])", "-P[a,^c]*X[^B] - g[a,^c]*Y[^B]");
  add("contraction-YX", "tractor", "Y[B]*X[^B]", "1", true);
  add("contraction-XY", "tractor", "X[B]*Y[^B]", "1", true);
  add("contraction-XX", "tractor", "X[B]*X[^B]", "0", true);
  add("contraction-YY", "tractor", "Y[B]*Y[^B]", "0", true);
  add("contraction-XZ", "tractor", "X[B]*Z[^B,^c]", "0", true);
  add("contraction-YZ", "tractor", "Y[B]*Z[^B,^c]", "0", true);
  add("contraction-ZZ", "tractor", "Z[B,a]*Z[^B,c]", "g[a,c]", true);
  add("h-expansion", "tractor", "h[B,C]", "Y[B]*X[C] + X[B]*Y[C] + Z[B,^c]*Z[C,c]");
  add("omega-expansion", "tractor", "Om[a,b,^D,E]",
      "Z[^D,^c]*Z[E,^e]*C[a,b,c,e] - X[^D]*Z[E,^e]*A[e,a,b] + X[E]*Z[^D,^e]*A[e,a,b]");

  return rules;
}

}  // namespace confym
