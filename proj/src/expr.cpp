#include "confym/expr.hpp"

#include <algorithm>
#include <set>

namespace confym {

Expr expr_term(Term t) {
  Expr e;
  if (!t.coeff.is_zero()) e.terms.push_back(std::move(t));
  return e;
}

Expr expr_factor(const Coeff& c, Factor f) {
  Term t;
  t.coeff = c;
  t.factors.push_back(std::move(f));
  return expr_term(std::move(t));
}

Expr operator+(const Expr& a, const Expr& b) {
  Expr r = a;
  r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
  return r;
}

Expr operator-(const Expr& a) {
  Expr r = a;
  for (auto& t : r.terms) t.coeff = -t.coeff;
  return r;
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Coeff& c, const Expr& e) {
  if (c.is_zero()) return {};
  Expr r = e;
  for (auto& t : r.terms) t.coeff *= c;
  return r;
}

namespace {

template <typename Fn>
void for_each_index(const Term& t, Fn&& fn) {
  for (const auto& f : t.factors) {
    for (const auto& d : f.derivs) fn(d);
    for (const auto& s : f.slots) fn(s);
  }
}

template <typename Fn>
void for_each_index_mut(Term& t, Fn&& fn) {
  for (auto& f : t.factors) {
    for (auto& d : f.derivs) fn(d);
    for (auto& s : f.slots) fn(s);
  }
}

std::map<std::string, int> name_counts(const Term& t) {
  std::map<std::string, int> c;
  for_each_index(t, [&](const Index& i) { c[i.name]++; });
  return c;
}

}  // namespace

Expr derivative(const Expr& e, const Index& d) {
  Expr r;
  for (const auto& t : e.terms) {
    for (size_t i = 0; i < t.factors.size(); ++i) {
      Term nt = t;
      nt.factors[i].derivs.insert(nt.factors[i].derivs.begin(), d);
      r.terms.push_back(std::move(nt));
    }
  }
  return r;
}

std::vector<Index> free_indices(const Term& t) {
  auto counts = name_counts(t);
  std::vector<Index> out;
  std::set<std::string> emitted;
  for_each_index(t, [&](const Index& i) {
    if (counts[i.name] == 1 && !emitted.count(i.name)) {
      out.push_back(i);
      emitted.insert(i.name);
    }
  });
  return out;
}

std::vector<std::string> dummy_names(const Term& t) {
  auto counts = name_counts(t);
  std::vector<std::string> out;
  for (const auto& [k, v] : counts)
    if (v >= 2) out.push_back(k);
  return out;
}

bool uses_name(const Term& t, const std::string& name) {
  bool found = false;
  for_each_index(t, [&](const Index& i) { found |= (i.name == name); });
  return found;
}

bool uses_name(const Expr& e, const std::string& name) {
  for (const auto& t : e.terms)
    if (uses_name(t, name)) return true;
  return false;
}

std::string fresh_name(const std::vector<const Term*>& terms, const std::string& stem) {
  std::set<std::string> used;
  for (const Term* t : terms)
    for_each_index(*t, [&](const Index& i) { used.insert(i.name); });
  for (int k = 0;; ++k) {
    std::string cand = stem + std::to_string(k);
    if (!used.count(cand)) return cand;
  }
}

Expr rename_free(const Expr& e, const std::string& from, const std::string& to) {
  Expr r = e;
  for (auto& t : r.terms)
    for_each_index_mut(t, [&](Index& i) {
      if (i.name == from) i.name = to;
    });
  return r;
}

Term swap_lower(const Term& t, const std::string& a, const std::string& b) {
  Term r = t;
  int na = 0, nb = 0;
  for_each_index_mut(r, [&](Index& i) {
    if (i.variance != Variance::Down) return;
    if (i.name == a) {
      i.name = b;
      ++na;
    } else if (i.name == b) {
      i.name = a;
      ++nb;
    }
  });
  if (na != 1 || nb != 1)
    throw error("swap_lower: expected exactly one lower occurrence of each of " + a + ", " + b);
  return r;
}

Expr alt_lower(const Expr& e, const std::string& a, const std::string& b) {
  Expr r;
  Coeff half(1, 2);
  for (const auto& t : e.terms) {
    Term t1 = t;
    t1.coeff *= half;
    Term t2 = swap_lower(t, a, b);
    t2.coeff *= -half;
    r.terms.push_back(std::move(t1));
    r.terms.push_back(std::move(t2));
  }
  return r;
}

int term_weight(const Context& ctx, const Term& t) {
  int w = 0;
  for (const auto& f : t.factors) {
    const auto& decl = ctx.syms[f.sym];
    w += decl.weight;
    for (size_t i = 0; i < f.slots.size(); ++i) {
      if (decl.slots[i].family != Family::Space) continue;
      if (f.slots[i].variance == decl.slots[i].natural) continue;
      w += f.slots[i].variance == Variance::Up ? -2 : 2;
    }
    for (const auto& d : f.derivs)
      if (d.variance == Variance::Up) w += -2;
  }
  return w;
}

namespace {

Term rename_dummies_apart(const Term& t, std::set<std::string>& used) {
  auto counts = name_counts(t);
  std::map<std::string, std::string> ren;
  int k = 0;
  auto next = [&]() {
    for (;; ++k) {
      std::string cand = "w" + std::to_string(k);
      if (!used.count(cand) && !counts.count(cand)) {
        ++k;
        return cand;
      }
    }
  };
  Term r = t;
  for_each_index_mut(r, [&](Index& i) {
    if (counts[i.name] < 2) return;
    auto it = ren.find(i.name);
    if (it == ren.end()) {
      if (used.count(i.name)) {
        it = ren.emplace(i.name, next()).first;
      } else {
        it = ren.emplace(i.name, i.name).first;
      }
    }
    i.name = it->second;
  });
  for (const auto& [from, to] : ren) used.insert(to);
  return r;
}

}  // namespace

Expr mul(const Context& ctx, const Expr& a, const Expr& b) {
  (void)ctx;
  Expr r;
  for (const auto& ta : a.terms) {
    for (const auto& tb : b.terms) {
      // dummies of either side must not collide with any name of the other;
      // shared free names become the intended contractions
      std::set<std::string> used;
      for_each_index(ta, [&](const Index& i) { used.insert(i.name); });
      for_each_index(tb, [&](const Index& i) { used.insert(i.name); });
      Term ta2 = rename_dummies_apart(ta, used);
      Term tb2 = rename_dummies_apart(tb, used);
      Term nt;
      nt.coeff = ta2.coeff * tb2.coeff;
      if (nt.coeff.is_zero()) continue;
      nt.factors = ta2.factors;
      nt.factors.insert(nt.factors.end(), tb2.factors.begin(), tb2.factors.end());
      r.terms.push_back(std::move(nt));
    }
  }
  return r;
}

Expr subst_symbol(const Context& ctx, const Expr& e, int sym,
                  const std::vector<Index>& params, const Expr& tmpl) {
  Expr out;
  for (const auto& t : e.terms) {
    // split into target factors and the rest, then rebuild multiplicatively
    Expr acc = expr_term(Term{t.coeff, {}});
    for (const auto& f : t.factors) {
      Expr piece;
      if (f.sym != sym) {
        piece = expr_factor(Coeff(1), f);
      } else {
        if (params.size() != f.slots.size())
          throw error("subst_symbol: parameter count mismatch");
        const auto& decl = ctx.syms[f.sym];
        piece = tmpl;
        // rename template-internal dummies apart from everything in sight
        std::set<std::string> avoid;
        for (const auto& p : params) avoid.insert(p.name);
        for_each_index(t, [&](const Index& i) { avoid.insert(i.name); });
        for (auto& tt : piece.terms) {
          std::set<std::string> used = avoid;
          tt = rename_dummies_apart(tt, used);
        }
        // bind parameters to the factor's written slot indices
        for (auto& tt : piece.terms) {
          for_each_index_mut(tt, [&](Index& i) {
            for (size_t k = 0; k < params.size(); ++k) {
              if (i.name == params[k].name && i.family == params[k].family) {
                bool flipped = f.slots[k].variance != decl.slots[k].natural;
                i.name = f.slots[k].name;
                if (flipped) i.variance = flip(i.variance);
                break;
              }
            }
          });
        }
        for (size_t j = f.derivs.size(); j-- > 0;) piece = derivative(piece, f.derivs[j]);
      }
      acc = mul(ctx, acc, piece);
    }
    out = out + acc;
  }
  return out;
}

Expr specialize(const Context& ctx, const Expr& e) {
  if (!ctx.dim) return e;
  Expr r;
  for (const auto& t : e.terms) {
    Coeff c = t.coeff.specialized(*ctx.dim);
    if (c.is_zero()) continue;
    Term nt = t;
    nt.coeff = std::move(c);
    r.terms.push_back(std::move(nt));
  }
  return r;
}

}  // namespace confym
