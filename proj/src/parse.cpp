#include <cctype>
#include <sstream>

#include "confym/io.hpp"

namespace confym {

namespace {

enum class Tok { Num, Ident, Caret, LBrack, RBrack, LParen, RParen, Plus, Minus, Star, Slash, Comma, Percent, End };

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(normalize(src)) { advance(); }

  const Token& cur() const { return cur_; }

  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) bump();
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= src_.size()) {
      cur_ = {Tok::End, "", line_, col_};
      return;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        num += src_[pos_];
        bump();
      }
      cur_ = {Tok::Num, num, cur_.line, cur_.col};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string id;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        id += src_[pos_];
        bump();
      }
      cur_ = {Tok::Ident, id, cur_.line, cur_.col};
      return;
    }
    Tok k;
    switch (c) {
      case '^': k = Tok::Caret; break;
      case '[': k = Tok::LBrack; break;
      case ']': k = Tok::RBrack; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case ',': k = Tok::Comma; break;
      case '%': k = Tok::Percent; break;
      default:
        throw parse_error(std::string("unexpected character '") + c + "'", line_, col_);
    }
    bump();
    cur_ = {k, std::string(1, c), cur_.line, cur_.col};
  }

private:
  // accept a few unicode spellings that show up when pasting math text
  static std::string normalize(const std::string& s) {
    std::string out;
    for (size_t i = 0; i < s.size();) {
      if (s.compare(i, 3, "\xe2\x88\x92") == 0) {  // minus sign
        out += '-';
        i += 3;
      } else if (s.compare(i, 2, "\xc2\xb7") == 0) {  // middle dot
        out += '*';
        i += 2;
      } else {
        out += s[i];
        i += 1;
      }
    }
    return out;
  }

  void bump() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
  Token cur_{Tok::End, "", 1, 1};
};

class Parser {
public:
  Parser(const Context& ctx, const std::string& src) : ctx_(ctx), lex_(src) {}

  Expr parse_expr() {
    Expr e;
    bool neg = accept(Tok::Minus);
    if (!neg) accept(Tok::Plus);
    parse_term_into(e, neg);
    while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
      bool minus = cur().kind == Tok::Minus;
      lex_.advance();
      parse_term_into(e, minus);
    }
    expect(Tok::End, "end of input");
    return e;
  }

private:
  const Token& cur() const { return lex_.cur(); }

  bool accept(Tok k) {
    if (cur().kind == k) {
      lex_.advance();
      return true;
    }
    return false;
  }

  void expect(Tok k, const char* what) {
    if (!accept(k)) throw parse_error(std::string("expected ") + what, cur().line, cur().col);
  }

  [[noreturn]] void fail(const std::string& msg) { throw parse_error(msg, cur().line, cur().col); }

  Rat parse_uint_rat() {
    if (cur().kind != Tok::Num) fail("expected number");
    Rat v(cur().text);
    lex_.advance();
    if (accept(Tok::Slash)) {
      if (cur().kind != Tok::Num) fail("expected denominator");
      Rat d(cur().text);
      if (d == 0) fail("zero denominator");
      lex_.advance();
      v /= d;
    }
    return v;
  }

  // polynomial in n: inside parentheses
  Poly parse_poly() {
    Poly p;
    bool neg = accept(Tok::Minus);
    p = parse_poly_term(neg);
    while (cur().kind == Tok::Plus || cur().kind == Tok::Minus) {
      bool minus = cur().kind == Tok::Minus;
      lex_.advance();
      p = p + parse_poly_term(minus);
    }
    return p;
  }

  Poly parse_poly_term(bool neg) {
    Poly acc(1);
    bool first = true;
    do {
      Poly atom;
      if (cur().kind == Tok::Num) {
        atom = Poly(parse_uint_rat());
      } else if (cur().kind == Tok::Ident && cur().text == "n") {
        lex_.advance();
        atom = Poly::var();
        if (accept(Tok::Caret)) {
          if (cur().kind != Tok::Num) fail("expected exponent");
          long e = std::stol(cur().text);
          lex_.advance();
          Poly b = atom;
          for (long i = 1; i < e; ++i) atom = atom * b;
        }
      } else {
        fail("expected polynomial atom (number or n)");
      }
      acc = acc * atom;
      first = false;
    } while (accept(Tok::Star));
    (void)first;
    if (neg) acc = -acc;
    return acc;
  }

  Coeff parse_coeff() {
    if (cur().kind == Tok::Num) return Coeff(parse_uint_rat());
    expect(Tok::LParen, "'('");
    Poly num = parse_poly();
    expect(Tok::RParen, "')'");
    Poly den(1);
    if (accept(Tok::Slash)) {
      expect(Tok::LParen, "'('");
      den = parse_poly();
      expect(Tok::RParen, "')'");
    }
    return Coeff(num, den);
  }

  Index parse_index() {
    Variance v = accept(Tok::Caret) ? Variance::Up : Variance::Down;
    Family fam = Family::Space;
    if (accept(Tok::Percent)) fam = Family::Gauge;
    if (cur().kind != Tok::Ident) fail("expected index name");
    std::string name = cur().text;
    lex_.advance();
    if (fam == Family::Gauge) {
      name = "%" + name;
    } else if (std::isupper(static_cast<unsigned char>(name[0]))) {
      fam = Family::Tractor;
    }
    return Index{name, fam, v};
  }

  std::vector<Index> parse_index_list(bool allow_empty) {
    std::vector<Index> out;
    expect(Tok::LBrack, "'['");
    if (cur().kind == Tok::RBrack) {
      if (!allow_empty) fail("empty index list");
      lex_.advance();
      return out;
    }
    out.push_back(parse_index());
    while (accept(Tok::Comma)) out.push_back(parse_index());
    expect(Tok::RBrack, "']'");
    return out;
  }

  Factor parse_factor() {
    if (cur().kind != Tok::Ident) fail("expected symbol or nd");
    if (cur().text == "nd") {
      int line = cur().line, col = cur().col;
      lex_.advance();
      auto derivs = parse_index_list(false);
      for (const auto& d : derivs)
        if (d.family != Family::Space)
          throw parse_error("derivative index must be a spacetime index", line, col);
      expect(Tok::LParen, "'('");
      Factor inner = parse_factor();
      expect(Tok::RParen, "')'");
      inner.derivs.insert(inner.derivs.begin(), derivs.begin(), derivs.end());
      return inner;
    }
    std::string name = cur().text;
    int line = cur().line, col = cur().col;
    if (!ctx_.syms.has(name)) throw parse_error("unknown symbol '" + name + "'", line, col);
    lex_.advance();
    Factor f;
    f.sym = ctx_.syms.id(name);
    f.slots = parse_index_list(true);
    const auto& decl = ctx_.syms[f.sym];
    if (f.slots.size() != decl.slots.size())
      throw parse_error("symbol '" + name + "' expects " + std::to_string(decl.slots.size()) +
                            " indices, got " + std::to_string(f.slots.size()),
                        line, col);
    for (size_t i = 0; i < f.slots.size(); ++i)
      if (f.slots[i].family != decl.slots[i].family)
        throw parse_error("index family mismatch in slot " + std::to_string(i) + " of '" + name + "'",
                          line, col);
    return f;
  }

  void parse_term_into(Expr& e, bool negated) {
    int line = cur().line, col = cur().col;
    Term t;
    t.coeff = Coeff(1);
    bool have_coef = false;
    if (cur().kind == Tok::Num || cur().kind == Tok::LParen) {
      t.coeff = parse_coeff();
      have_coef = true;
    }
    if (!have_coef || cur().kind == Tok::Star || cur().kind == Tok::Ident) {
      if (have_coef) expect(Tok::Star, "'*'");
      t.factors.push_back(parse_factor());
      while (accept(Tok::Star)) t.factors.push_back(parse_factor());
    }
    if (negated) t.coeff = -t.coeff;
    check_term(t, line, col);
    if (!t.coeff.is_zero()) e.terms.push_back(std::move(t));
  }

  void check_term(const Term& t, int line, int col) {
    std::map<std::string, std::vector<Index>> occ;
    for (const auto& f : t.factors) {
      for (const auto& d : f.derivs) occ[d.name].push_back(d);
      for (const auto& s : f.slots) occ[s.name].push_back(s);
    }
    for (const auto& [name, v] : occ) {
      if (v.size() > 2)
        throw parse_error("index '" + name + "' appears more than twice", line, col);
      if (v.size() == 2) {
        if (v[0].family != v[1].family)
          throw parse_error("index '" + name + "' pairs across families", line, col);
        if (v[0].variance == v[1].variance)
          throw parse_error("dummy index '" + name + "' must appear once up and once down", line, col);
      }
    }
  }

  const Context& ctx_;
  Lexer lex_;
};

}  // namespace

Expr parse(const Context& ctx, const std::string& text) {
  Parser p(ctx, text);
  Expr e = p.parse_expr();
  // cross-term checks: common free-index set and weight
  if (e.terms.size() > 1) {
    auto key = [&](const Term& t) {
      auto fr = free_indices(t);
      std::vector<std::string> k;
      for (const auto& i : fr)
        k.push_back(i.name + (i.variance == Variance::Up ? "^" : "_") + std::to_string(int(i.family)));
      std::sort(k.begin(), k.end());
      return k;
    };
    auto k0 = key(e.terms[0]);
    for (size_t i = 1; i < e.terms.size(); ++i)
      if (key(e.terms[i]) != k0) throw parse_error("free-index mismatch across terms", 1, 1);
    int w0 = term_weight(ctx, e.terms[0]);
    for (size_t i = 1; i < e.terms.size(); ++i)
      if (term_weight(ctx, e.terms[i]) != w0) throw parse_error("weight mismatch across terms", 1, 1);
  }
  return e;
}

}  // namespace confym
