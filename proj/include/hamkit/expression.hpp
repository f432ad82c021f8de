#ifndef HAMKIT_EXPRESSION_HPP
#define HAMKIT_EXPRESSION_HPP

// Recursive-descent parser for nonlinearity expressions in one variable x.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ('^' factor)?
//   base   := number | 'x' | 'pi' | 'e' | func '(' expr ')' | '(' expr ')'
//           | '-' base
//   func   := exp | log | sqrt | sin | cos | abs

#include "hamkit/errors.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hamkit {

class Expression {
public:
  /// Throws ParseError with the column (1-based) of the offending token.
  /// `line` is reported as given, for callers embedding expressions in files.
  static Expression parse(std::string_view source, int line = 1);

  double operator()(double x) const { return root_->eval(x); }

  const std::string& source() const noexcept { return source_; }

private:
  struct Node {
    virtual ~Node() = default;
    virtual double eval(double x) const = 0;
  };
  using NodePtr = std::shared_ptr<const Node>;

  struct Constant final : Node {
    explicit Constant(double v) : value(v) {}
    double eval(double) const override { return value; }
    double value;
  };
  struct Variable final : Node {
    double eval(double x) const override { return x; }
  };
  struct Negate final : Node {
    explicit Negate(NodePtr a) : arg(std::move(a)) {}
    double eval(double x) const override { return -arg->eval(x); }
    NodePtr arg;
  };
  struct Binary final : Node {
    Binary(char o, NodePtr l, NodePtr r)
        : op(o), lhs(std::move(l)), rhs(std::move(r)) {}
    double eval(double x) const override {
      const double a = lhs->eval(x);
      const double b = rhs->eval(x);
      switch (op) {
      case '+': return a + b;
      case '-': return a - b;
      case '*': return a * b;
      case '/': return a / b;
      default: return std::pow(a, b);
      }
    }
    char op;
    NodePtr lhs, rhs;
  };
  struct Call final : Node {
    Call(double (*f)(double), NodePtr a) : fn(f), arg(std::move(a)) {}
    double eval(double x) const override { return fn(arg->eval(x)); }
    double (*fn)(double);
    NodePtr arg;
  };

  enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen,
                   RParen, Comma, End };

  struct Token {
    Tok kind;
    std::string_view text;
    double number = 0;
    int column = 0;
  };

  class Parser;

  Expression(std::string source, NodePtr root)
      : source_(std::move(source)), root_(std::move(root)) {}

  std::string source_;
  NodePtr root_;
};

class Expression::Parser {
public:
  Parser(std::string_view src, int line) : src_(src), line_(line) {
    tokenize();
  }

  NodePtr parse_all() {
    NodePtr e = expr();
    if (peek().kind != Tok::End)
      fail("unexpected '" + std::string(peek().text) + "'", peek().column);
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& msg, int column) const {
    throw ParseError(msg, line_, column);
  }

  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  void tokenize() {
    std::size_t i = 0;
    while (i < src_.size()) {
      const char ch = src_[i];
      const int col = static_cast<int>(i) + 1;
      if (std::isspace(static_cast<unsigned char>(ch))) {
        ++i;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') {
        std::size_t j = i;
        while (j < src_.size() &&
               (std::isdigit(static_cast<unsigned char>(src_[j])) || src_[j] == '.'))
          ++j;
        if (j < src_.size() && (src_[j] == 'e' || src_[j] == 'E')) {
          std::size_t k = j + 1;
          if (k < src_.size() && (src_[k] == '+' || src_[k] == '-'))
            ++k;
          if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
            while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k])))
              ++k;
            j = k;
          }
        }
        std::string text(src_.substr(i, j - i));
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size())
          fail("malformed number '" + text + "'", col);
        tokens_.push_back({Tok::Number, src_.substr(i, j - i), v, col});
        i = j;
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t j = i;
        while (j < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
          ++j;
        tokens_.push_back({Tok::Ident, src_.substr(i, j - i), 0, col});
        i = j;
        continue;
      }
      Tok kind;
      switch (ch) {
      case '+': kind = Tok::Plus; break;
      case '-': kind = Tok::Minus; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '^': kind = Tok::Caret; break;
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case ',': kind = Tok::Comma; break;
      default: fail(std::string("unexpected character '") + ch + "'", col);
      }
      tokens_.push_back({kind, src_.substr(i, 1), 0, col});
      ++i;
    }
    tokens_.push_back({Tok::End, "end of input", 0,
                       static_cast<int>(src_.size()) + 1});
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
      char op = advance().kind == Tok::Plus ? '+' : '-';
      lhs = std::make_shared<Binary>(op, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
      char op = advance().kind == Tok::Star ? '*' : '/';
      lhs = std::make_shared<Binary>(op, lhs, factor());
    }
    return lhs;
  }

  NodePtr factor() {
    NodePtr b = base();
    if (peek().kind == Tok::Caret) {
      advance();
      return std::make_shared<Binary>('^', b, factor());
    }
    return b;
  }

  // Parses '(' expr ')' after the opening parenthesis has been consumed.
  NodePtr parenthesized(const Token& open) {
    if (peek().kind == Tok::End)
      fail("unclosed '('", open.column);
    NodePtr inner = expr();
    if (peek().kind == Tok::Comma)
      fail("too many arguments", peek().column);
    if (peek().kind == Tok::End)
      fail("unclosed '('", open.column);
    if (peek().kind != Tok::RParen)
      fail("expected ')' but found '" + std::string(peek().text) + "'",
           peek().column);
    advance();
    return inner;
  }

  static double (*lookup(std::string_view name))(double) {
    if (name == "exp") return [](double v) { return std::exp(v); };
    if (name == "log") return [](double v) { return std::log(v); };
    if (name == "sqrt") return [](double v) { return std::sqrt(v); };
    if (name == "sin") return [](double v) { return std::sin(v); };
    if (name == "cos") return [](double v) { return std::cos(v); };
    if (name == "abs") return [](double v) { return std::abs(v); };
    return nullptr;
  }

  NodePtr base() {
    const Token& tok = advance();
    switch (tok.kind) {
    case Tok::Number:
      return std::make_shared<Constant>(tok.number);
    case Tok::Minus:
      return std::make_shared<Negate>(base());
    case Tok::LParen:
      return parenthesized(tok);
    case Tok::Ident: {
      if (auto fn = lookup(tok.text)) {
        if (peek().kind != Tok::LParen)
          fail("function '" + std::string(tok.text) + "' expects 1 argument",
               tok.column);
        const Token& open = advance();
        if (peek().kind == Tok::RParen)
          fail("function '" + std::string(tok.text) + "' expects 1 argument",
               peek().column);
        return std::make_shared<Call>(fn, parenthesized(open));
      }
      if (peek().kind == Tok::LParen)
        fail("unknown function '" + std::string(tok.text) + "'", tok.column);
      if (tok.text == "x")
        return std::make_shared<Variable>();
      if (tok.text == "pi")
        return std::make_shared<Constant>(std::numbers::pi);
      if (tok.text == "e")
        return std::make_shared<Constant>(std::numbers::e);
      fail("unknown identifier '" + std::string(tok.text) + "'", tok.column);
    }
    case Tok::End:
      fail("unexpected end of input", tok.column);
    default:
      fail("unexpected '" + std::string(tok.text) + "'", tok.column);
    }
  }

  std::string_view src_;
  int line_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

inline Expression Expression::parse(std::string_view source, int line) {
  Parser parser(source, line);
  NodePtr root = parser.parse_all();
  return Expression(std::string(source), std::move(root));
}

} // namespace hamkit

#endif // HAMKIT_EXPRESSION_HPP
