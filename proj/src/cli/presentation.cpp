#include <cctype>
#include <set>

#include "prism/cli.hpp"
#include "prism/errors.hpp"

namespace prism {

namespace {

enum class Tok { Name, Integer, Comma, Caret, Plus, Minus, Star, LParen, RParen, Semi, Newline, Arrow, PlusMinus, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, col;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i)
      if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) ++col;
  };
  while (i < s.size()) {
    const char c = s[i];
    const std::size_t l = line, cl = col;
    if (c == '\n') {
      out.push_back({Tok::Newline, "\n", l, cl});
      ++i;
      ++line;
      col = 1;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Name, s.substr(i, j - i), l, cl});
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Tok::Integer, s.substr(i, j - i), l, cl});
      advance(j - i);
    } else if (s.compare(i, 2, "->") == 0) {
      out.push_back({Tok::Arrow, "->", l, cl});
      advance(2);
    } else if (s.compare(i, 2, "\xC2\xB1") == 0) {
      out.push_back({Tok::PlusMinus, "\xC2\xB1", l, cl});
      advance(2);
    } else {
      Tok k;
      switch (c) {
        case ',': k = Tok::Comma; break;
        case '^': k = Tok::Caret; break;
        case '+': k = Tok::Plus; break;
        case '-': k = Tok::Minus; break;
        case '*': k = Tok::Star; break;
        case '(': k = Tok::LParen; break;
        case ')': k = Tok::RParen; break;
        case ';': k = Tok::Semi; break;
        default: throw ParseError(l, cl, "a name, integer or one of , ^ + - * ( ) ; ->");
      }
      out.push_back({k, std::string(1, c), l, cl});
      advance(1);
    }
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(tokenize(text)) {}

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& take() { return toks_[pos_++]; }
  const Token& expect(Tok k, const char* what) {
    if (!at(k)) throw ParseError(peek().line, peek().col, what);
    return take();
  }
  void skip_newlines() {
    while (at(Tok::Newline)) take();
  }

  ExprPtr expr() {
    ExprPtr lhs = term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const bool plus = take().kind == Tok::Plus;
      lhs = node(plus ? Expr::Kind::Add : Expr::Kind::Sub, {lhs, term()});
    }
    return lhs;
  }

  ExprPtr term() {
    ExprPtr lhs = unary();
    while (at(Tok::Star)) {
      take();
      lhs = node(Expr::Kind::Mul, {lhs, unary()});
    }
    return lhs;
  }

  ExprPtr unary() {
    if (at(Tok::Minus)) {
      take();
      return node(Expr::Kind::Neg, {unary()});
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (!at(Tok::Caret)) return base;
    take();
    bool neg = false;
    if (at(Tok::Minus)) {
      take();
      neg = true;
    }
    const Token& t = expect(Tok::Integer, "an integer exponent");
    if (t.text.size() > 6) throw ParseError(t.line, t.col, "an exponent below 10^6");
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::Pow;
    e->exponent = std::stol(t.text) * (neg ? -1 : 1);
    e->args = {base};
    return e;
  }

  ExprPtr atom() {
    const Token& t = peek();
    auto e = std::make_shared<Expr>();
    switch (t.kind) {
      case Tok::Integer:
        take();
        e->kind = Expr::Kind::Integer;
        e->value = Int(t.text);
        return e;
      case Tok::Name:
        take();
        if (t.text == "p") {
          e->kind = Expr::Kind::P;
        } else if (t.text == "q") {
          e->kind = Expr::Kind::Q;
        } else {
          e->kind = Expr::Kind::Var;
          e->name = t.text;
        }
        return e;
      case Tok::LParen: {
        take();
        ExprPtr inner = expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        throw ParseError(t.line, t.col, "an integer, p, q, a generator or '('");
    }
  }

  static ExprPtr node(Expr::Kind k, std::vector<ExprPtr> args) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    e->args = std::move(args);
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

std::string print(const Expr& e, int min_prec) {
  std::string s;
  switch (e.kind) {
    case Expr::Kind::Integer: s = e.value.get_str(); break;
    case Expr::Kind::P: s = "p"; break;
    case Expr::Kind::Q: s = "q"; break;
    case Expr::Kind::Var: s = e.name; break;
    case Expr::Kind::Neg: s = "-" + print(*e.args[0], 3); break;
    case Expr::Kind::Add: s = print(*e.args[0], 1) + " + " + print(*e.args[1], 2); break;
    case Expr::Kind::Sub: s = print(*e.args[0], 1) + " - " + print(*e.args[1], 2); break;
    case Expr::Kind::Mul: s = print(*e.args[0], 2) + "*" + print(*e.args[1], 3); break;
    case Expr::Kind::Pow: s = print(*e.args[0], 5) + "^" + std::to_string(e.exponent); break;
  }
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

void collect_vars(const Expr& e, std::set<std::string>& out) {
  if (e.kind == Expr::Kind::Var) out.insert(e.name);
  for (const auto& a : e.args) collect_vars(*a, out);
}

}  // namespace

std::string to_string(const Expr& e) { return print(e, 0); }

ExprPtr parse_expression(const std::string& text) {
  Parser ps(text);
  ExprPtr e = ps.expr();
  ps.expect(Tok::End, "end of expression");
  return e;
}

RingPresentation parse_presentation(const std::string& text) {
  Parser ps(text);
  RingPresentation pres;
  std::set<std::string> seen;
  ps.skip_newlines();
  for (;;) {
    const Token& t = ps.expect(Tok::Name, "a generator name");
    if (t.text == "p" || t.text == "q") throw ParseError(t.line, t.col, "a generator name other than p or q");
    if (!seen.insert(t.text).second) throw ParseError(t.line, t.col, "a new generator name");
    Generator g{t.text, false};
    if (ps.at(Tok::Caret)) {
      ps.take();
      if (ps.at(Tok::PlusMinus)) {
        ps.take();
      } else {
        ps.expect(Tok::Plus, "'±' or '+-'");
        ps.expect(Tok::Minus, "'-' after '+'");
      }
      const Token& one = ps.expect(Tok::Integer, "'1'");
      if (one.text != "1") throw ParseError(one.line, one.col, "'1'");
      g.laurent = true;
    }
    pres.generators.push_back(std::move(g));
    ps.skip_newlines();
    if (!ps.at(Tok::Comma)) break;
    ps.take();
    ps.skip_newlines();
  }
  ps.expect(Tok::End, "',' or end of input");
  return pres;
}

void parse_framing(RingPresentation& pres, const std::string& text) {
  Parser ps(text);
  std::set<std::string> names;
  for (const auto& g : pres.generators) names.insert(g.name);
  std::map<std::string, ExprPtr> assigned;
  for (const auto& [n, e] : pres.framing) assigned.emplace(n, e);
  for (;;) {
    while (ps.at(Tok::Newline) || ps.at(Tok::Semi)) ps.take();
    if (ps.at(Tok::End)) break;
    const Token& t = ps.expect(Tok::Name, "a generator name");
    if (!names.count(t.text)) throw ParseError(t.line, t.col, "a generator of the ring");
    if (assigned.count(t.text)) throw ParseError(t.line, t.col, "a generator not framed yet");
    ps.expect(Tok::Arrow, "'->'");
    const Token& start = ps.peek();
    ExprPtr e = ps.expr();
    std::set<std::string> used;
    collect_vars(*e, used);
    for (const auto& u : used)
      if (!names.count(u)) throw ParseError(start.line, start.col, "an expression in the ring's generators");
    assigned.emplace(t.text, e);
    if (!(ps.at(Tok::Newline) || ps.at(Tok::Semi) || ps.at(Tok::End)))
      throw ParseError(ps.peek().line, ps.peek().col, "';', newline or end of input");
  }
  pres.framing.clear();
  for (const auto& g : pres.generators) {
    auto it = assigned.find(g.name);
    if (it != assigned.end()) pres.framing.emplace_back(g.name, it->second);
  }
}

std::string print_ring(const RingPresentation& pres) {
  std::string out;
  for (const auto& g : pres.generators) {
    if (!out.empty()) out += ", ";
    out += g.name + (g.laurent ? "^\xC2\xB1" "1" : "");
  }
  return out;
}

std::string print_framing(const RingPresentation& pres) {
  std::string out;
  for (const auto& [n, e] : pres.framing) {
    if (!out.empty()) out += "; ";
    out += n + " -> " + to_string(*e);
  }
  return out;
}

LPoly evaluate(const Expr& e, const BaseRingPtr& base, const std::vector<Generator>& gens) {
  const unsigned r = static_cast<unsigned>(gens.size());
  switch (e.kind) {
    case Expr::Kind::Integer: return LPoly::constant(base, r, BaseElem(base, e.value));
    case Expr::Kind::P: return LPoly::constant(base, r, BaseElem(base, Int(base->p())));
    case Expr::Kind::Q: return LPoly::constant(base, r, BaseElem::q(base));
    case Expr::Kind::Var:
      for (unsigned s = 0; s < r; ++s)
        if (gens[s].name == e.name) return LPoly::variable(base, r, s);
      throw std::invalid_argument("unknown generator " + e.name);
    case Expr::Kind::Neg: return BaseElem(base, Int(-1)) * evaluate(*e.args[0], base, gens);
    case Expr::Kind::Add: return evaluate(*e.args[0], base, gens) + evaluate(*e.args[1], base, gens);
    case Expr::Kind::Sub: return evaluate(*e.args[0], base, gens) - evaluate(*e.args[1], base, gens);
    case Expr::Kind::Mul: return evaluate(*e.args[0], base, gens) * evaluate(*e.args[1], base, gens);
    case Expr::Kind::Pow: {
      LPoly b = evaluate(*e.args[0], base, gens);
      if (e.exponent < 0) b = invert_unit_perturbation(b, 4096);
      LPoly acc = LPoly::constant(base, r, BaseElem::one(base));
      for (long k = 0; k < std::abs(e.exponent); ++k) acc = acc * b;
      return acc;
    }
  }
  return LPoly(base, r);
}

FramedAlgebraPtr build_algebra(const RingPresentation& pres, const BaseRingPtr& base) {
  std::vector<LPoly> coords;
  if (!pres.framing.empty()) {
    const unsigned r = static_cast<unsigned>(pres.generators.size());
    for (unsigned s = 0; s < r; ++s) coords.push_back(LPoly::variable(base, r, s));
    for (const auto& [n, e] : pres.framing)
      for (unsigned s = 0; s < r; ++s)
        if (pres.generators[s].name == n) coords[s] = evaluate(*e, base, pres.generators);
  }
  return FramedAlgebra::create(base, pres.generators, coords);
}

}  // namespace prism
