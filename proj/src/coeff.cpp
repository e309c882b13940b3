#include "confym/coeff.hpp"

#include <sstream>
#include <stdexcept>

namespace confym {

Poly Poly::var() {
  Poly p;
  p.coef = {Rat(0), Rat(1)};
  return p;
}

void Poly::trim() {
  while (!coef.empty() && coef.back() == 0) coef.pop_back();
}

Rat Poly::at(const Rat& n) const {
  Rat acc(0);
  for (size_t i = coef.size(); i-- > 0;) acc = acc * n + coef[i];
  return acc;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly r;
  r.coef.resize(std::max(a.coef.size(), b.coef.size()), Rat(0));
  for (size_t i = 0; i < a.coef.size(); ++i) r.coef[i] += a.coef[i];
  for (size_t i = 0; i < b.coef.size(); ++i) r.coef[i] += b.coef[i];
  r.trim();
  return r;
}

Poly operator-(const Poly& a) {
  Poly r = a;
  for (auto& c : r.coef) c = -c;
  return r;
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  Poly r;
  r.coef.assign(a.coef.size() + b.coef.size() - 1, Rat(0));
  for (size_t i = 0; i < a.coef.size(); ++i)
    for (size_t j = 0; j < b.coef.size(); ++j) r.coef[i + j] += a.coef[i] * b.coef[j];
  r.trim();
  return r;
}

Poly operator*(const Rat& a, const Poly& b) {
  if (a == 0) return {};
  Poly r = b;
  for (auto& c : r.coef) c *= a;
  return r;
}

void poly_divmod(const Poly& a, const Poly& b, Poly& quot, Poly& rem) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  quot = Poly();
  rem = a;
  while (!rem.is_zero() && rem.degree() >= b.degree()) {
    int d = rem.degree() - b.degree();
    Rat f = rem.lead() / b.lead();
    Poly m;
    m.coef.assign(d + 1, Rat(0));
    m.coef[d] = f;
    quot = quot + m;
    rem = rem - m * b;
  }
}

Poly poly_gcd(Poly a, Poly b) {
  a.trim();
  b.trim();
  while (!b.is_zero()) {
    Poly q, r;
    poly_divmod(a, b, q, r);
    a = b;
    b = r;
  }
  if (!a.is_zero()) a = (Rat(1) / a.lead()) * a;  // monic
  return a;
}

Coeff::Coeff(long p, long q) : num_(p), den_(q) {
  if (q == 0) throw std::domain_error("zero denominator");
  reduce();
}

Coeff::Coeff(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("zero denominator");
  reduce();
}

Coeff Coeff::n() { return Coeff(Poly::var(), Poly(1)); }

void Coeff::reduce() {
  if (num_.is_zero()) {
    den_ = Poly(1);
    return;
  }
  Poly g = poly_gcd(num_, den_);
  if (g.degree() > 0) {
    Poly q, r;
    poly_divmod(num_, g, q, r);
    num_ = q;
    poly_divmod(den_, g, q, r);
    den_ = q;
  }
  // normalize: denominator leading coefficient positive, and scale so the
  // denominator content is 1 when it is constant
  Rat lead = den_.lead();
  if (lead < 0) {
    num_ = Rat(-1) * num_;
    den_ = Rat(-1) * den_;
    lead = -lead;
  }
  if (den_.degree() == 0) {
    num_ = (Rat(1) / lead) * num_;
    den_ = Poly(1);
  }
}

bool Coeff::is_one() const {
  return num_.degree() == 0 && den_.degree() == 0 && !num_.is_zero() &&
         num_.coef[0] == den_.coef[0];
}

Rat Coeff::constant() const {
  if (!is_constant()) throw std::logic_error("coefficient is not constant");
  if (num_.is_zero()) return Rat(0);
  return num_.coef[0] / den_.coef[0];
}

Rat Coeff::at(const Rat& n) const {
  Rat d = den_.at(n);
  if (d == 0) throw std::domain_error("coefficient denominator vanishes at n=" + std::string(n.get_str()));
  return num_.at(n) / d;
}

Coeff Coeff::operator-() const {
  Coeff r = *this;
  r.num_ = -r.num_;
  return r;
}

Coeff& Coeff::operator+=(const Coeff& o) {
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  reduce();
  return *this;
}

Coeff& Coeff::operator-=(const Coeff& o) { return *this += -o; }

Coeff& Coeff::operator*=(const Coeff& o) {
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  reduce();
  return *this;
}

Coeff& Coeff::operator/=(const Coeff& o) {
  if (o.is_zero()) throw std::domain_error("division by zero coefficient");
  num_ = num_ * o.den_;
  den_ = den_ * o.num_;
  reduce();
  return *this;
}

bool Coeff::operator==(const Coeff& o) const {
  return num_ == o.num_ && den_ == o.den_;
}

static void append_rat(std::ostringstream& os, const Rat& q) {
  os << q.get_str();
}

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = p.degree(); i >= 0; --i) {
    const Rat& c = p.coef[i];
    if (c == 0) continue;
    Rat a = c;
    if (first) {
      if (a < 0) {
        os << "-";
        a = -a;
      }
    } else {
      os << (a < 0 ? "-" : "+");
      if (a < 0) a = -a;
    }
    if (i == 0) {
      append_rat(os, a);
    } else {
      if (a != 1) {
        append_rat(os, a);
        os << "*";
      }
      os << "n";
      if (i > 1) os << "^" << i;
    }
    first = false;
  }
  return os.str();
}

std::string to_string(const Coeff& c) {
  if (c.is_zero()) return "0";
  if (c.is_constant()) return c.constant().get_str();
  std::ostringstream os;
  os << "(" << to_string(c.num()) << ")";
  if (c.den().degree() > 0 || c.den().lead() != 1) os << "/(" << to_string(c.den()) << ")";
  return os.str();
}

}  // namespace confym
