#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "confym/coeff.hpp"

namespace confym {

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Family : uint8_t { Space, Tractor, Gauge };
enum class Variance : uint8_t { Up, Down };

inline Variance flip(Variance v) { return v == Variance::Up ? Variance::Down : Variance::Up; }

/// Abstract index: a name within one of the three families, with variance
/// as written. Dummy names produced by canonicalization start with '!'.
struct Index {
  std::string name;
  Family family = Family::Space;
  Variance variance = Variance::Down;

  bool operator==(const Index& o) const {
    return name == o.name && family == o.family && variance == o.variance;
  }
  bool operator<(const Index& o) const {
    if (name != o.name) return name < o.name;
    if (family != o.family) return family < o.family;
    return variance < o.variance;
  }
};

inline Index up(std::string name, Family f = Family::Space) {
  return Index{std::move(name), f, Variance::Up};
}
inline Index dn(std::string name, Family f = Family::Space) {
  return Index{std::move(name), f, Variance::Down};
}

struct SlotSpec {
  Family family = Family::Space;
  Variance natural = Variance::Down;
};

struct SymmetryBlock {
  std::vector<int> slots;  // pairwise interchange within the block
  bool anti = false;
};

/// Declared slot symmetries of a symbol; compiled into an explicit
/// permutation group with signs at registration time.
struct SymmetrySpec {
  std::vector<SymmetryBlock> blocks;
  // swaps of equal-length slot lists that fix the symbol with sign +1,
  // e.g. {0,1} <-> {2,3} for a Riemann-type tensor
  std::vector<std::pair<std::vector<int>, std::vector<int>>> pair_exchanges;
  std::vector<std::pair<int, int>> tracefree_pairs;
};

struct SymbolDecl {
  std::string name;
  std::vector<SlotSpec> slots;
  int weight = 0;
  SymmetrySpec symmetry;
  // a closed 2-form valued section: nabla_[a S_bc] = 0 is a registered fact
  bool closed = false;
  // compiled group: (slot permutation images, sign)
  std::vector<std::pair<std::vector<int>, int>> group;
};

class SymbolTable {
public:
  SymbolTable();

  int declare(SymbolDecl decl);
  bool has(const std::string& name) const { return by_name_.count(name) != 0; }
  int id(const std::string& name) const;
  const SymbolDecl& operator[](int id) const { return decls_.at(id); }
  size_t size() const { return decls_.size(); }

  // built-in ids, resolved once at construction
  int g, h, R, Ric, Sc, P, J, A, C, B, F, Omega, X, Y, Z, Ups, Ups1;

private:
  void declare_builtins();
  std::vector<SymbolDecl> decls_;
  std::map<std::string, int> by_name_;
};

/// One tensor factor: derivative string (outermost first) applied to a
/// declared symbol with as-written slot indices.
struct Factor {
  int sym = -1;
  std::vector<Index> derivs;
  std::vector<Index> slots;

  bool operator==(const Factor& o) const {
    return sym == o.sym && derivs == o.derivs && slots == o.slots;
  }
};

struct Term {
  Coeff coeff;
  std::vector<Factor> factors;
};

struct Expr {
  std::vector<Term> terms;

  bool is_zero() const { return terms.empty(); }
  static Expr zero() { return {}; }
};

/// Evaluation context: symbol table plus the dimension mode. When dim is
/// set, pipelines specialize all coefficients at that value.
struct Context {
  SymbolTable syms;
  std::optional<Rat> dim;  // nullopt = symbolic n

  Coeff dim_coeff() const { return dim ? Coeff(*dim) : Coeff::n(); }
  Coeff spec(const Coeff& c) const { return dim ? c.specialized(*dim) : c; }
};

// ---- construction helpers ----

Expr expr_term(Term t);
Expr expr_factor(const Coeff& c, Factor f);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Coeff& c, const Expr& e);
/// Product of expressions; dummies of the right operand are renamed apart.
Expr mul(const Context& ctx, const Expr& a, const Expr& b);

/// Apply one covariant derivative with the given index (Leibniz over factors).
Expr derivative(const Expr& e, const Index& d);

/// Names appearing exactly once (free) / twice (dummy) in a term.
std::vector<Index> free_indices(const Term& t);
std::vector<std::string> dummy_names(const Term& t);
bool uses_name(const Term& t, const std::string& name);
bool uses_name(const Expr& e, const std::string& name);

/// Fresh dummy name not used in any of the given terms.
std::string fresh_name(const std::vector<const Term*>& terms, const std::string& stem = "u");

/// Rename every occurrence of a free index name (any variance).
Expr rename_free(const Expr& e, const std::string& from, const std::string& to);
/// Swap the names of the unique *down* occurrences of a and b in each term,
/// leaving up occurrences untouched (the figures' lower-index swap).
Term swap_lower(const Term& t, const std::string& a, const std::string& b);
/// (e - swap_lower(e))/2 over the named lower index pair.
Expr alt_lower(const Expr& e, const std::string& a, const std::string& b);

/// Total conformal weight of a term (symbol weights plus +-2 per re-varianced
/// spacetime position relative to natural variance).
int term_weight(const Context& ctx, const Term& t);

/// Replace every factor built on `sym` by the template expression whose
/// placeholder indices are listed in `params` (one per slot of sym).
/// Derivatives on the factor are applied to the instantiated template.
Expr subst_symbol(const Context& ctx, const Expr& e, int sym,
                  const std::vector<Index>& params, const Expr& tmpl);

/// Specialize all coefficients at the context dimension (no-op if symbolic).
Expr specialize(const Context& ctx, const Expr& e);

}  // namespace confym
