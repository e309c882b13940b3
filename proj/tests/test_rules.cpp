#include <doctest.h>

#include "confym/canon.hpp"
#include "confym/io.hpp"
#include "confym/rules.hpp"

using namespace confym;

namespace {
Context at6() {
  Context c;
  c.dim = Rat(6);
  return c;
}
}  // namespace

TEST_CASE("commutation inserts curvature corrections with the right signs") {
  Context ctx;
  // nabla_a nabla_b P_cd reordered to nabla_b nabla_a P_cd (b<a by name order)
  Expr e = parse(ctx, "nd[b](nd[a](P[c,d]))");
  Expr sorted = commute_to_order(ctx, e, DerivOrder::sorted);
  // difference against the commutator identity
  Expr lhs = parse(ctx, "nd[b](nd[a](P[c,d])) - nd[a](nd[b](P[c,d]))");
  Expr rhs = parse(ctx, "R[b,a,^u,c]*P[u,d] + R[b,a,^u,d]*P[c,u]");
  Expr diff = commute_to_order(ctx, lhs - (Coeff(-1) * rhs), DerivOrder::sorted);
  CHECK(canonicalize(ctx, diff).is_zero());
  CHECK(!sorted.is_zero());
}

TEST_CASE("scalar density commutes freely") {
  Context ctx;
  Expr e = parse(ctx, "nd[b](nd[a](J[])) - nd[a](nd[b](J[]))");
  CHECK(canonicalize(ctx, commute_to_order(ctx, e, DerivOrder::sorted)).is_zero());
}

TEST_CASE("basis substitutions invert each other") {
  Context ctx;
  // Ric -> (n-2)P + Jg, then back to the Riemann basis, minus itself
  Expr ric = parse(ctx, "Ric[a,b]");
  Expr wy = substitute_basis(ctx, ric, Basis::weyl_schouten);
  Expr back = substitute_basis(ctx, wy, Basis::riemann);
  Expr self = substitute_basis(ctx, ric, Basis::riemann);
  CHECK(canonicalize(ctx, apply_traces(ctx, metric_normalize(ctx, back - self))).is_zero());

  // Weyl of a flat-curvature configuration: C with R -> 0 substituted is
  // minus the metric-Schouten combination; full round trip vanishes
  Expr c = parse(ctx, "C[a,b,c,d]");
  Expr cr = substitute_basis(ctx, c, Basis::riemann);
  Expr cw = substitute_basis(ctx, cr, Basis::weyl_schouten);
  CHECK(equivalent(ctx, apply_traces(ctx, cw), c));
}

TEST_CASE("traces") {
  Context ctx;
  CHECK(equivalent(ctx, apply_traces(ctx, parse(ctx, "P[u,^u]")), parse(ctx, "J[]")));
  CHECK(equivalent(ctx, apply_traces(ctx, parse(ctx, "Ric[u,^u]")), parse(ctx, "Sc[]")));
  CHECK(equivalent(ctx, apply_traces(ctx, parse(ctx, "R[u,a,^u,b]")), parse(ctx, "Ric[a,b]")));
  CHECK(equivalent(ctx, apply_traces(ctx, parse(ctx, "R[u,a,b,^u]")), -parse(ctx, "Ric[a,b]")));
  CHECK(apply_traces(ctx, parse(ctx, "C[u,a,^u,b]")).is_zero());
  CHECK(apply_traces(ctx, parse(ctx, "A[u,^u,c]")).is_zero());
  CHECK(apply_traces(ctx, parse(ctx, "B[u,^u]")).is_zero());
  CHECK(apply_traces(ctx, parse(ctx, "nd[e](P[u,^u])")).terms[0].factors[0].sym == ctx.syms.J);
  // antisymmetric pairs die in canonicalize even without a trace rule
  CHECK(canonicalize(ctx, parse(ctx, "R[u,^u,a,b]")).is_zero());
}

TEST_CASE("first Bianchi straightening") {
  Context ctx;
  Expr e = parse(ctx, "R[a,b,c,d] + R[a,c,d,b] + R[a,d,b,c]");
  CHECK(canonicalize(ctx, straighten(ctx, canonicalize(ctx, e))).is_zero());
  Expr ec = parse(ctx, "C[a,b,c,d] + C[a,c,d,b] + C[a,d,b,c]");
  CHECK(canonicalize(ctx, straighten(ctx, canonicalize(ctx, ec))).is_zero());
  Expr ea = parse(ctx, "A[a,b,c] + A[b,c,a] + A[c,a,b]");
  CHECK(canonicalize(ctx, straighten(ctx, canonicalize(ctx, ea))).is_zero());
  // with contractions: a symmetric tensor against the Riemann pair swap
  Expr f = parse(ctx, "P[^i,^a]*R[a,c,i,b] - P[^i,^a]*R[a,b,i,c]");
  CHECK(normal_form(ctx, f, Basis::riemann).is_zero());
  // while the same combination with an antisymmetric pairing survives
  Expr f2 = parse(ctx, "P[^i,^a]*R[a,c,i,b] + P[^i,^a]*R[a,b,i,c]");
  CHECK(!normal_form(ctx, f2, Basis::riemann).is_zero());
}

TEST_CASE("TraceNbP: Schouten divergence is the gradient of J") {
  Context ctx;
  Expr e = parse(ctx, "nd[^u](P[u,b]) - nd[b](J[])");
  auto cert = is_zero_symbolic(ctx, e);
  CHECK(cert.zero);
}

TEST_CASE("Cotton divergence on the first slot vanishes") {
  Context ctx;
  Expr e = parse(ctx, "nd[^u](A[u,b,c])");
  auto cert = is_zero_symbolic(ctx, e);
  CHECK(cert.zero);
}

TEST_CASE("Weyl divergence identity at general n") {
  Context ctx;
  Expr e = parse(ctx, "nd[^u](C[u,b,c,d]) - (n-3)*A[b,c,d]");
  auto cert = is_zero_symbolic(ctx, e);
  CHECK(cert.zero);
}

TEST_CASE("second Bianchi contracted") {
  Context ctx;
  Expr e = parse(ctx, "nd[^u](R[b,c,u,e]) - nd[b](Ric[c,e]) + nd[c](Ric[b,e])");
  CHECK(is_zero_symbolic(ctx, e).zero);
  Expr f = parse(ctx, "nd[^u](Ric[u,b]) - 1/2*nd[b](Sc[])");
  CHECK(is_zero_symbolic(ctx, f).zero);
}

TEST_CASE("Bach divergence identity holds exactly in dimension six") {
  Context ctx6 = at6();
  Expr e = parse(ctx6, "nd[^u](B[u,c]) + 2*P[^e,^k]*A[e,k,c]");
  auto cert = is_zero_symbolic(ctx6, e);
  CHECK(cert.zero);

  // at symbolic n the residual is proportional to (n-6): the engine proves
  // the closed form nabla^u B_uc = (4-n) P^{ek} A_{ekc}, so the residual is
  // exactly (6-n) P^{ek} A_{ekc}
  Context ctx;
  Expr en = parse(ctx, "nd[^u](B[u,c]) + 2*P[^e,^k]*A[e,k,c]");
  auto gen = is_zero_symbolic(ctx, en);
  CHECK(!gen.zero);
  Expr closed = parse(ctx, "nd[^u](B[u,c]) - (4-n)*P[^e,^k]*A[e,k,c]");
  CHECK(is_zero_symbolic(ctx, closed).zero);
  Context probe7;
  probe7.dim = Rat(7);
  Expr en7 = parse(probe7, "nd[^u](B[u,c]) + 2*P[^e,^k]*A[e,k,c]");
  CHECK(!is_zero_symbolic(probe7, en7).zero);
}

TEST_CASE("divergence equivalence by parts") {
  Context ctx6 = at6();
  // the two displayed forms of the Lagrangian density agree mod divergences
  Expr e1 = parse(ctx6,
                  "4*A[a,b,c]*nd[^b](P[^a,^c]) - J[]*C[a,b,c,d]*C[^a,^b,^c,^d]"
                  " + 4*C[a,b,c,d]*nd[^d](nd[^b](P[^a,^c]))"
                  " + 4*P[a,b]*C[^a,c,d,e]*C[^b,^c,^d,^e]");
  Expr e2 = parse(ctx6,
                  "8*A[a,b,c]*nd[^c](P[^a,^b]) - J[]*C[a,b,c,d]*C[^a,^b,^c,^d]"
                  " + 4*P[a,b]*C[^a,c,d,e]*C[^b,^c,^d,^e]");
  auto cert = divergence_equivalent_symbolic(ctx6, e1, e2);
  CHECK(cert.zero);

  // a pure divergence is equivalent to zero
  Expr vec = parse(ctx6, "J[]*nd[^a](J[])");  // weight -6 vector, free ^a
  Expr dv = derivative(vec, dn("a"));
  CHECK(divergence_equivalent_symbolic(ctx6, dv, Expr::zero()).zero);

  // J^3 is not a divergence: the symbolic route must at least not claim zero
  Expr j3 = parse(ctx6, "J[]*J[]*J[]");
  CHECK(!divergence_equivalent_symbolic(ctx6, j3, Expr::zero()).zero);
}

TEST_CASE("rule catalog is well formed") {
  Context ctx;
  auto rules = rule_catalog();
  CHECK(rules.size() > 25);
  for (const auto& r : rules) {
    Expr l = parse(ctx, r.lhs);
    Expr rr = parse(ctx, r.rhs);
    if (!r.procedural && !l.is_zero() && !rr.is_zero()) {
      // substitution rules preserve free indices and weight
      CHECK(weight_of(ctx, l) == weight_of(ctx, rr));
    }
  }
}
