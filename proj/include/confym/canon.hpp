#pragma once

#include "confym/expr.hpp"

namespace confym {

/// Execute all metric/Kronecker contractions: no g or h factor remains
/// contracted against anything; full traces become n resp. n+2. Derivatives
/// of g or h kill the term. Uncontracted (fully free) metric factors stay.
Expr metric_normalize(const Context& ctx, const Expr& e);

/// Canonical form: per-term lexicographic minimization over factor orderings
/// (within equal symbol/derivative-count skeletons) and the full expansion of
/// each symbol's declared symmetry group, with dummy names assigned by first
/// appearance and dummy pairs re-varianced so the first occurrence is down.
/// Like terms are collected, zero terms dropped, output sorted by key.
Expr canonicalize(const Context& ctx, const Expr& e);

/// true iff canonicalize(a - b) == 0. Throws on free-index/weight mismatch.
bool equivalent(const Context& ctx, const Expr& a, const Expr& b);

/// Canonical key of a single term (minimized arrangement), used as the
/// collection and ordering key.
std::string term_key(const Context& ctx, const Term& t);

}  // namespace confym
