#pragma once

#include <gmpxx.h>
#include <optional>
#include <string>
#include <vector>

namespace confym {

using Rat = mpq_class;

/// Polynomial in the dimension symbol n with exact rational coefficients.
/// coef[i] multiplies n^i; no trailing zero coefficients are stored.
struct Poly {
  std::vector<Rat> coef;

  Poly() = default;
  Poly(long v) { if (v != 0) coef.assign(1, Rat(v)); }
  Poly(const Rat& v) { if (v != 0) coef.assign(1, v); }

  static Poly var();  // the polynomial n

  bool is_zero() const { return coef.empty(); }
  int degree() const { return static_cast<int>(coef.size()) - 1; }
  void trim();

  Rat at(const Rat& n) const;
  Rat lead() const { return coef.empty() ? Rat(0) : coef.back(); }

  bool operator==(const Poly& o) const { return coef == o.coef; }
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Rat& a, const Poly& b);
Poly operator-(const Poly& a);

// Division with remainder over the rationals; b must be nonzero.
void poly_divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem);
Poly poly_gcd(Poly a, Poly b);

/// Element of Q(n): numerator/denominator polynomials, gcd-reduced,
/// denominator with positive leading coefficient.
class Coeff {
public:
  Coeff() : num_(), den_(1) {}
  Coeff(long v) : num_(v), den_(1) {}
  Coeff(const Rat& v) : num_(v), den_(1) {}
  Coeff(long p, long q);
  Coeff(Poly num, Poly den);

  static Coeff n();  // the dimension symbol

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const;
  bool is_constant() const { return num_.degree() <= 0 && den_.degree() <= 0; }
  /// Constant value; only valid when is_constant().
  Rat constant() const;

  /// Evaluate at a concrete dimension; throws if the denominator vanishes.
  Rat at(const Rat& n) const;
  /// Replace n by the given value, producing a constant coefficient.
  Coeff specialized(const Rat& n) const { return Coeff(at(n)); }

  Coeff operator-() const;
  Coeff& operator+=(const Coeff& o);
  Coeff& operator-=(const Coeff& o);
  Coeff& operator*=(const Coeff& o);
  Coeff& operator/=(const Coeff& o);

  friend Coeff operator+(Coeff a, const Coeff& b) { return a += b; }
  friend Coeff operator-(Coeff a, const Coeff& b) { return a -= b; }
  friend Coeff operator*(Coeff a, const Coeff& b) { return a *= b; }
  friend Coeff operator/(Coeff a, const Coeff& b) { return a /= b; }

  bool operator==(const Coeff& o) const;

private:
  void reduce();
  Poly num_, den_;
};

std::string to_string(const Poly& p);
std::string to_string(const Coeff& c);

}  // namespace confym
