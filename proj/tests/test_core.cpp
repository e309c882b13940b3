#include <doctest.h>

#include "confym/canon.hpp"
#include "confym/io.hpp"

using namespace confym;

TEST_CASE("rational-function coefficients") {
  Coeff n = Coeff::n();
  Coeff a = (n - Coeff(4)) / (n - Coeff(2));
  CHECK(a.at(6) == Rat(1, 2));
  CHECK((a * (n - Coeff(2))) == (n - Coeff(4)));
  Coeff b = (n * n - Coeff(4)) / (n - Coeff(2));  // reduces to n+2
  CHECK(b == n + Coeff(2));
  CHECK(to_string(b) == "(n+2)");
  CHECK((b - b).is_zero());
  CHECK(Coeff(1, 2) + Coeff(1, 2) == Coeff(1));
  CHECK_THROWS(Coeff(Poly(1), Poly(0)));
  // denominator sign normalization
  Coeff c = Coeff(Poly(1), Poly(-2));
  CHECK(c == Coeff(-1, 2));
}

TEST_CASE("parse/print round trip") {
  Context ctx;
  for (const char* s : {
           "B[a,b]",
           "nd[^c](A[a,c,b]) + P[^c,^d]*C[c,a,d,b]",
           "P[a,b] - P[b,a]",
           "(n-4)*Z[^D,^d]*Z[E,^e]*A[c,d,e]",
           "J[]",
           "2/3*F[a,b,^%G,%H]",
           "nd[a](nd[b](P[c,d]))",
           "-X[^D]*Y[E] + 5*h[^D,E]",
           "0",
       }) {
    Expr e = parse(ctx, s);
    std::string p1 = print(ctx, e);
    Expr e2 = parse(ctx, p1);
    CHECK(print(ctx, e2) == p1);
  }
  // unicode minus tolerated
  CHECK(print(ctx, parse(ctx, "P[a,b] \xe2\x88\x92 P[b,a]")) == "P[a,b] - P[b,a]");
}

TEST_CASE("parse errors carry positions and reasons") {
  Context ctx;
  CHECK_THROWS_AS(parse(ctx, "Q[a,b]"), parse_error);          // unknown symbol
  CHECK_THROWS_AS(parse(ctx, "P[a]"), parse_error);            // arity
  CHECK_THROWS_AS(parse(ctx, "P[a,B]"), parse_error);          // family mismatch
  CHECK_THROWS_AS(parse(ctx, "P[a,b] + J[]"), parse_error);    // free-index mismatch
  CHECK_THROWS_AS(parse(ctx, "P[a,a]"), parse_error);          // dummy variance
  CHECK_THROWS_AS(parse(ctx, "P[a,"), parse_error);            // syntax
  CHECK_THROWS_AS(parse(ctx, "nd[B](P[a,b])"), parse_error);   // non-spacetime derivative
}

TEST_CASE("weights follow the convention table") {
  Context ctx;
  CHECK(weight_of(ctx, parse(ctx, "C[a,b,c,d]")) == 2);
  CHECK(weight_of(ctx, parse(ctx, "C[^a,^b,^c,^d]")) == -6);
  CHECK(weight_of(ctx, parse(ctx, "J[]")) == -2);
  CHECK(weight_of(ctx, parse(ctx, "B[a,b]")) == -2);
  CHECK(weight_of(ctx, parse(ctx, "P[a,b]")) == 0);
  CHECK(weight_of(ctx, parse(ctx, "A[a,b,c]")) == 0);
  CHECK(weight_of(ctx, parse(ctx, "g[a,b]")) == 2);
  CHECK(weight_of(ctx, parse(ctx, "g[^a,^b]")) == -2);
  CHECK(weight_of(ctx, parse(ctx, "X[^D]")) == 1);
  CHECK(weight_of(ctx, parse(ctx, "Z[^D,^d]")) == -1);
  CHECK(weight_of(ctx, parse(ctx, "Z[^D,d]")) == 1);
  CHECK(weight_of(ctx, parse(ctx, "nd[^a](P[a,b])")) == -2);
  // raising/lowering a dummy pair is weight-neutral
  CHECK(weight_of(ctx, parse(ctx, "P[a,b]*P[^a,^b]")) == -4);
  CHECK(weight_of(ctx, parse(ctx, "P[a,^b]*P[^a,b]")) == -4);
}

TEST_CASE("validate reports invariant violations") {
  Context ctx;
  CHECK(validate(ctx, parse(ctx, "nd[^c](A[a,c,b]) + P[^c,^d]*C[c,a,d,b]")).empty());

  Expr bad;  // hand-built: index a twice down
  Term t;
  t.coeff = Coeff(1);
  Factor f;
  f.sym = ctx.syms.P;
  f.slots = {dn("a"), dn("a")};
  t.factors.push_back(f);
  bad.terms.push_back(t);
  auto d = validate(ctx, bad);
  REQUIRE(d.size() == 1);
  CHECK(d[0].find("dummy pair variance") != std::string::npos);

  Expr mixed = parse(ctx, "J[]") + parse(ctx, "Sc[]");  // weights -2 and -2: fine
  CHECK(validate(ctx, mixed).empty());
  Expr wmix;
  wmix.terms = parse(ctx, "J[]").terms;
  wmix.terms.push_back(parse(ctx, "Ups[]").terms[0]);  // weight 0 vs -2
  auto d2 = validate(ctx, wmix);
  REQUIRE(!d2.empty());
  CHECK(d2[0].find("weight mismatch") != std::string::npos);
}

TEST_CASE("metric elimination and traces") {
  Context ctx;
  // g^{ab} g_{bc} -> delta^a_c, then full trace -> n
  Expr e = parse(ctx, "g[^a,^b]*g[b,a]");
  Expr m = metric_normalize(ctx, e);
  REQUIRE(m.terms.size() == 1);
  CHECK(m.terms[0].factors.empty());
  CHECK(m.terms[0].coeff == Coeff::n());

  // metric_normalize alone leaves the P self-trace
  Expr p = metric_normalize(ctx, parse(ctx, "g[^a,^b]*P[a,b]"));
  REQUIRE(p.terms.size() == 1);
  REQUIRE(p.terms[0].factors.size() == 1);
  CHECK(p.terms[0].factors[0].sym == ctx.syms.P);

  // tractor trace
  Expr th = metric_normalize(ctx, parse(ctx, "h[^D,D]"));
  CHECK(th.terms[0].coeff == Coeff::n() + Coeff(2));

  // nabla of the metric kills the term
  CHECK(metric_normalize(ctx, parse(ctx, "nd[c](g[a,b])")).is_zero());
}

TEST_CASE("canonicalize basics") {
  Context ctx;
  CHECK(canonicalize(ctx, parse(ctx, "P[a,b] - P[b,a]")).is_zero());
  CHECK(canonicalize(ctx, parse(ctx, "A[a,b,c] + A[a,c,b]")).is_zero());

  // antisymmetric block against a symmetric tensor
  {
    SymbolDecl s;
    s.name = "S";
    s.slots = {{Family::Space, Variance::Down}, {Family::Space, Variance::Down}};
    s.weight = 0;
    s.symmetry.blocks = {{{0, 1}, false}};
    Context c2;
    c2.syms.declare(s);
    CHECK(canonicalize(c2, parse(c2, "C[a,b,c,d]*S[^a,^b]")).is_zero());
  }

  // dummy renaming identifies relabeled terms, including variance flips
  CHECK(equivalent(ctx, parse(ctx, "P[a,b]*P[^a,^b]"), parse(ctx, "P[c,^d]*P[^c,d]")));
  CHECK(equivalent(ctx, parse(ctx, "nd[^c](A[a,c,b]) + P[^c,^d]*C[c,a,d,b]"),
                   parse(ctx, "P[^e,^f]*C[e,a,f,b] + nd[^k](A[a,k,b])")));
  CHECK(!equivalent(ctx, parse(ctx, "P[a,b]"), parse(ctx, "P[a,b] + J[]*g[a,b]")));
  CHECK_THROWS(equivalent(ctx, parse(ctx, "P[a,b]"), parse(ctx, "J[]")));

  // Riemann symmetries
  CHECK(equivalent(ctx, parse(ctx, "R[a,b,c,d]"), parse(ctx, "-R[b,a,c,d]")));
  CHECK(equivalent(ctx, parse(ctx, "R[a,b,c,d]"), parse(ctx, "R[c,d,a,b]")));

  // idempotence on a motley expression
  Expr e = parse(ctx, "2*C[a,b,c,d]*P[^c,^d] - C[b,a,c,d]*P[^d,^c] + B[a,b]");
  Expr c1 = canonicalize(ctx, e);
  CHECK(print(ctx, canonicalize(ctx, c1)) == print(ctx, c1));
}

TEST_CASE("canonicalize collects like terms in the coefficient field") {
  Context ctx;
  Expr e = parse(ctx, "(n-4)*P[a,b] + (4-n)*P[b,a]");
  CHECK(canonicalize(ctx, e).is_zero());
  Context ctx6;
  ctx6.dim = Rat(6);
  Expr f = parse(ctx, "(n-6)*P[a,b]");
  CHECK(canonicalize(ctx6, f).is_zero());
  CHECK(!canonicalize(ctx, f).is_zero());
}
