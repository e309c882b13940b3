#pragma once

#include <functional>
#include <string>
#include <vector>

#include "confym/expr.hpp"

namespace confym {

enum class Basis { weyl_schouten, riemann };

/// One entry of the audited rule catalog. lhs/rhs are parseable expression
/// strings; for procedural rule families they are representative instances.
struct RuleInfo {
  std::string name;
  std::string group;  // leibniz | commute | to_weyl_schouten | to_riemann | bianchi | traces | tractor
  std::string lhs;
  std::string rhs;
  bool procedural = false;
};

/// Every registered rule, for --dump-rules and the numeric soundness harness.
std::vector<RuleInfo> rule_catalog();

/// Deriving-string reordering policies.
enum class DerivOrder {
  sorted,               // ascending by index rank
  contracted_innermost  // indices contracted with the factor's own slots last
};

/// Reorder all derivative strings per the policy, inserting curvature
/// correction terms (R / F / Om by index family; none for pure weights).
Expr commute_to_order(const Context& ctx, const Expr& e, DerivOrder policy);

/// Eliminate one curvature basis in favor of the other.
Expr substitute_basis(const Context& ctx, const Expr& e, Basis basis);

/// Execute self-contractions of declared symbols (P->J, Ric->Sc, R->Ric,
/// trace-free symbols -> 0). Metric traces are canon's job.
Expr apply_traces(const Context& ctx, const Expr& e);

/// First-Bianchi straightening of R and C factors, the cyclic Cotton identity,
/// and d_A-closedness of symbols declared closed.
Expr straighten(const Context& ctx, const Expr& e);

/// Divergence normal set. In the Riemann basis: contracted nabla-R to
/// nabla-Ric patterns, contracted nabla-Ric to nabla-Sc. In the Weyl-Schouten
/// basis: contracted nabla-C to Cotton, contracted nabla-A to Bach minus PC,
/// contracted nabla-P to nabla-J.
Expr apply_divergences(const Context& ctx, const Expr& e, Basis basis);

/// Full normal form used by the identity decision routines: substitution to
/// the requested basis, traces, commutation, divergences, straightening and
/// canonicalization iterated to a fixed point.
Expr normal_form(const Context& ctx, const Expr& e, Basis basis);

/// Normal form modulo first/second Bianchi in the Riemann basis (spec order:
/// input already in the Riemann basis); idempotent.
Expr bianchi_simplify(const Context& ctx, const Expr& e);

/// Result of a zero test or divergence-equivalence attempt.
struct ZeroCertificate {
  bool zero = false;
  std::string kind;      // "symbolic" when decided here
  Expr residual;         // normal form when not zero
};

/// Symbolic zero attempt via the Riemann-basis normal form. The numeric
/// fallback lives with the oracle; see checks.hpp for the combined routine.
ZeroCertificate is_zero_symbolic(const Context& ctx, const Expr& e);

/// Move derivatives off later factor classes onto the lexicographically first
/// one, modulo total divergences (valid for scalar integrands only).
Expr ibp_normal_form(const Context& ctx, const Expr& e);

/// Symbolic divergence-equivalence attempt: ibp + normal form on e1 - e2.
ZeroCertificate divergence_equivalent_symbolic(const Context& ctx, const Expr& e1, const Expr& e2);

}  // namespace confym
