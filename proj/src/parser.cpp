#include "loja/errors.hpp"
#include "loja/polynomial.hpp"

#include <algorithm>
#include <cctype>

namespace loja {

namespace {

enum class Tok { Number, Ident, Plus, Minus, Star, Caret, Slash, LParen, RParen, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t pos;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
    } else if (digit(c)) {
      std::size_t j = i;
      while (j < s.size() && digit(s[j])) ++j;
      out.push_back({Tok::Number, std::string(s.substr(i, j - i)), i});
      i = j;
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < s.size() && ident_char(s[j])) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), i});
      i = j;
    } else {
      Tok k;
      switch (c) {
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '^': k = Tok::Caret; break;
        case '/': k = Tok::Slash; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        default:
          throw ParseError(std::string("unknown character '") + c + "'", i);
      }
      out.push_back({k, std::string(1, c), i});
      ++i;
    }
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

// expr   := term (('+'|'-') term)*
// term   := unary ('*' unary)*
// unary  := '-' unary | '+' unary | power
// power  := primary ('^' INTEGER)?
// primary:= NUMBER ('/' NUMBER)? | IDENT | '(' expr ')'
class Parser {
 public:
  Parser(std::vector<Token> toks, std::vector<std::string> vars) : toks_(std::move(toks)), vars_(std::move(vars)) {}

  Polynomial parse() {
    Polynomial p = expr();
    if (peek().kind != Tok::End) fail_unexpected();
    return p;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void fail_unexpected() const {
    const Token& t = peek();
    if (t.kind == Tok::End) throw ParseError("unexpected end of input", t.pos);
    if (t.kind == Tok::Ident || t.kind == Tok::Number || t.kind == Tok::LParen) {
      throw ParseError("unexpected '" + t.text + "' (implicit multiplication is not allowed)", t.pos);
    }
    throw ParseError("unexpected '" + t.text + "'", t.pos);
  }

  Polynomial expr() {
    Polynomial acc = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      bool minus = take().kind == Tok::Minus;
      Polynomial rhs = term();
      acc = minus ? acc - rhs : acc + rhs;
    }
    return acc;
  }

  Polynomial term() {
    Polynomial acc = unary();
    while (peek().kind == Tok::Star) {
      take();
      acc = acc * unary();
    }
    return acc;
  }

  Polynomial unary() {
    if (peek().kind == Tok::Minus) {
      take();
      return -unary();
    }
    if (peek().kind == Tok::Plus) {
      take();
      return unary();
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (peek().kind != Tok::Caret) return base;
    const Token& caret = take();
    const Token& e = peek();
    if (e.kind != Tok::Number) {
      if (e.kind == Tok::End) throw ParseError("missing exponent", e.pos);
      throw ParseError("non-integer exponent", e.pos);
    }
    take();
    if (peek().kind == Tok::Slash) throw ParseError("non-integer exponent", e.pos);
    if (e.text.size() > 4 || std::stoul(e.text) > kMaxDegreePerVariable * 64ul) {
      throw LimitError("exponent " + e.text + " at position " + std::to_string(caret.pos) + " exceeds the degree cap");
    }
    if (peek().kind == Tok::Caret) throw ParseError("chained '^' is ambiguous; use parentheses", peek().pos);
    return pow(base, static_cast<unsigned>(std::stoul(e.text)));
  }

  Polynomial primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        take();
        Rational value = parse_rational(t.text);
        if (peek().kind == Tok::Slash) {
          take();
          const Token& den = peek();
          if (den.kind != Tok::Number) throw ParseError("expected integer denominator", den.pos);
          take();
          Rational d = parse_rational(den.text);
          if (d == 0) throw ParseError("zero denominator", den.pos);
          value /= d;
        }
        return Polynomial::constant(vars_, value);
      }
      case Tok::Ident: {
        take();
        auto it = std::find(vars_.begin(), vars_.end(), t.text);
        return Polynomial::variable(vars_, static_cast<std::size_t>(it - vars_.begin()));
      }
      case Tok::LParen: {
        take();
        Polynomial inner = expr();
        if (peek().kind != Tok::RParen) {
          if (peek().kind == Tok::End) throw ParseError("unbalanced '('", t.pos);
          fail_unexpected();
        }
        take();
        return inner;
      }
      default:
        fail_unexpected();
    }
  }

  std::vector<Token> toks_;
  std::vector<std::string> vars_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial parse(std::string_view text, std::vector<std::string> declared) {
  auto toks = lex(text);
  std::vector<std::string> vars = std::move(declared);
  for (const auto& t : toks) {
    if (t.kind == Tok::Ident && std::find(vars.begin(), vars.end(), t.text) == vars.end()) vars.push_back(t.text);
  }
  return Parser(std::move(toks), std::move(vars)).parse();
}

}  // namespace loja
