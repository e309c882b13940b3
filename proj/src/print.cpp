#include <sstream>

#include "confym/io.hpp"

namespace confym {

namespace {

void print_index(std::ostringstream& os, const Index& i) {
  if (i.variance == Variance::Up) os << "^";
  os << i.name;  // gauge names already carry their '%' prefix
}

void print_factor(const Context& ctx, std::ostringstream& os, const Factor& f) {
  const auto& decl = ctx.syms[f.sym];
  if (!f.derivs.empty()) {
    os << "nd[";
    for (size_t i = 0; i < f.derivs.size(); ++i) {
      if (i) os << ",";
      print_index(os, f.derivs[i]);
    }
    os << "](";
  }
  os << decl.name << "[";
  for (size_t i = 0; i < f.slots.size(); ++i) {
    if (i) os << ",";
    print_index(os, f.slots[i]);
  }
  os << "]";
  if (!f.derivs.empty()) os << ")";
}

// prints |coeff| and reports the sign separately
std::string coeff_body(const Coeff& c, bool with_factors, int& sign) {
  Coeff a = c;
  sign = 1;
  if (a.is_constant()) {
    Rat v = a.constant();
    if (v < 0) {
      sign = -1;
      v = -v;
    }
    if (with_factors && v == 1) return "";
    return v.get_str();
  }
  // pull the sign of the leading numerator coefficient out front
  if (a.num().lead() < 0) {
    sign = -1;
    a = -a;
  }
  return to_string(a);
}

}  // namespace

std::string print(const Context& ctx, const Term& t) {
  std::ostringstream os;
  int sign;
  std::string cs = coeff_body(t.coeff, !t.factors.empty(), sign);
  if (sign < 0) os << "-";
  os << cs;
  if (!t.factors.empty()) {
    if (!cs.empty()) os << "*";
    for (size_t i = 0; i < t.factors.size(); ++i) {
      if (i) os << "*";
      print_factor(ctx, os, t.factors[i]);
    }
  }
  return os.str();
}

std::string print(const Context& ctx, const Expr& e) {
  if (e.terms.empty()) return "0";
  std::ostringstream os;
  for (size_t i = 0; i < e.terms.size(); ++i) {
    std::string s = print(ctx, e.terms[i]);
    if (i == 0) {
      os << s;
    } else if (!s.empty() && s[0] == '-') {
      os << " - " << s.substr(1);
    } else {
      os << " + " << s;
    }
  }
  return os.str();
}

namespace {

std::string latex_index(const Index& i) {
  std::string n = i.name;
  if (n.size() > 0 && n[0] == '%') n = n.substr(1);
  // a1 -> a_1 style only inside the brace group when multi-char
  return n.size() == 1 ? n : "\\mathit{" + n + "}";
}

void latex_factor(const Context& ctx, std::ostringstream& os, const Factor& f) {
  const auto& decl = ctx.syms[f.sym];
  for (const auto& d : f.derivs) {
    os << "\\nabla";
    os << (d.variance == Variance::Up ? "^{" : "_{") << latex_index(d) << "}";
  }
  std::string name = decl.name;
  if (name == "Om") name = "\\Omega";
  if (name == "Ups") name = "\\Upsilon";
  if (name == "Ups1") name = "\\Upsilon";
  if (name == "g") name = "\\bar g";
  os << name;
  for (const auto& s : f.slots) {
    os << (s.variance == Variance::Up ? "^{" : "_{") << latex_index(s) << "}";
  }
  os << " ";
}

}  // namespace

std::string print_latex(const Context& ctx, const Expr& e) {
  if (e.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : e.terms) {
    int sign;
    std::string cs = coeff_body(t.coeff, !t.factors.empty(), sign);
    if (sign < 0)
      os << (first ? "-" : " - ");
    else if (!first)
      os << " + ";
    if (!cs.empty()) {
      if (cs.find('(') != std::string::npos || cs.find('/') != std::string::npos)
        os << "\\tfrac{" << to_string(t.coeff.num()) << "}{" << to_string(t.coeff.den()) << "} ";
      else
        os << cs << " ";
    }
    for (const auto& f : t.factors) latex_factor(ctx, os, f);
    first = false;
  }
  return os.str();
}

std::vector<std::string> validate(const Context& ctx, const Expr& e) {
  std::vector<std::string> diags;
  auto at = [](size_t i) { return "term " + std::to_string(i) + ": "; };
  for (size_t ti = 0; ti < e.terms.size(); ++ti) {
    const Term& t = e.terms[ti];
    std::map<std::string, std::vector<Index>> occ;
    for (const auto& f : t.factors) {
      if (f.sym < 0 || f.sym >= static_cast<int>(ctx.syms.size())) {
        diags.push_back(at(ti) + "invalid symbol id");
        continue;
      }
      const auto& decl = ctx.syms[f.sym];
      if (f.slots.size() != decl.slots.size()) {
        diags.push_back(at(ti) + "slot count mismatch on " + decl.name);
        continue;
      }
      for (size_t i = 0; i < f.slots.size(); ++i)
        if (f.slots[i].family != decl.slots[i].family)
          diags.push_back(at(ti) + "slot family mismatch on " + decl.name + " slot " +
                          std::to_string(i));
      for (const auto& d : f.derivs)
        if (d.family != Family::Space)
          diags.push_back(at(ti) + "derivative index " + d.name + " not spacetime");
      for (const auto& d : f.derivs) occ[d.name].push_back(d);
      for (const auto& s : f.slots) occ[s.name].push_back(s);
    }
    for (const auto& [name, v] : occ) {
      if (v.size() > 2) diags.push_back(at(ti) + "index " + name + " appears " +
                                        std::to_string(v.size()) + " times");
      if (v.size() == 2) {
        if (v[0].family != v[1].family)
          diags.push_back(at(ti) + "dummy pair family mismatch on " + name);
        else if (v[0].variance == v[1].variance)
          diags.push_back(at(ti) + "dummy pair variance on " + name);
      }
    }
  }
  if (e.terms.size() > 1) {
    auto key = [&](const Term& t) {
      std::vector<std::string> k;
      for (const auto& i : free_indices(t))
        k.push_back(i.name + (i.variance == Variance::Up ? "^" : "_") + std::to_string(int(i.family)));
      std::sort(k.begin(), k.end());
      return k;
    };
    auto k0 = key(e.terms[0]);
    for (size_t i = 1; i < e.terms.size(); ++i)
      if (key(e.terms[i]) != k0) {
        diags.push_back(at(i) + "free-index mismatch");
        return diags;  // weight check below would be noise
      }
    int w0 = term_weight(ctx, e.terms[0]);
    for (size_t i = 1; i < e.terms.size(); ++i)
      if (term_weight(ctx, e.terms[i]) != w0) diags.push_back(at(i) + "weight mismatch");
  }
  return diags;
}

int weight_of(const Context& ctx, const Expr& e) {
  if (e.terms.empty()) throw error("weight_of: zero expression has no definite weight");
  int w = term_weight(ctx, e.terms[0]);
  for (size_t i = 1; i < e.terms.size(); ++i)
    if (term_weight(ctx, e.terms[i]) != w) throw error("weight_of: heterogeneous weights");
  return w;
}

}  // namespace confym
