#pragma once

#include "confym/expr.hpp"
#include "confym/rules.hpp"

namespace confym {

/// Eliminate every contracted tractor index between splitting operators via
/// the contraction table (YX=1, ZZ=g, all other pairs zero); h is eliminated
/// by metric normalization first.
Expr tractor_contract(const Context& ctx, const Expr& e);

/// Expand all derivatives resting on X, Y or Z via the connection identities
/// until none remain.
Expr nabla_splitting(const Context& ctx, const Expr& e);

/// The tractor curvature in splitting-operator form,
///   Om_ab^D_E = Z^Dc Z_E^e C_abce - X^D Z_E^e A_eab + X_E Z^De A_eab,
/// with free indices (a, b, ^D, E). Construction is guarded by the
/// consistency check [nabla_a, nabla_b] X^D = Om_ab^D_E X^E.
Expr tractor_curvature(const Context& ctx);

/// nabla^a Om_ac^D_E computed from the curvature via the splitting rules and
/// the divergence normal set; asserts equality with
///   (n-4) Z^Dd Z_E^e A_cde - X^D Z_E^e B_ec + X_E Z^De B_ec
/// and returns it. Free indices (c, ^D, E).
Expr tractor_divergence(const Context& ctx);

/// Normalization pipeline for tractor-valued expressions in the
/// Weyl-Schouten basis: splitting expansion, contraction, traces,
/// commutation, divergence identities, straightening, canonical form.
Expr tractor_normal(const Context& ctx, const Expr& e);

}  // namespace confym
