#pragma once

// Small expression language for user-defined effect and resistance models.
//
//   expr    ::= term { ("+" | "-") term }
//   term    ::= unary { ("*" | "/") unary }
//   unary   ::= ("-" | "+") unary | power
//   power   ::= primary [ "^" unary ]          (right-associative)
//   primary ::= number | ident | ident "(" expr { "," expr } ")" | "(" expr ")"
//   ident   ::= (letter | "_") { letter | digit | "_" }
//   number  ::= digits [ "." digits ] [ ("e" | "E") [ "+" | "-" ] digits ]
//
// Unary minus sits above "^" so "-x^2" is -(x^2), while "2^-x" is 2^(-x).
// Functions: sin cos tan sinh cosh tanh sqrt exp ln abs (one argument),
// min max (two or more arguments). Identifiers are case-sensitive.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "homog/errors.hpp"

namespace homog::dsl {

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Sqrt, Exp, Ln, Abs, Min, Max };
enum class BinOp { Add, Sub, Mul, Div, Pow };

inline std::optional<Func> func_from_name(std::string_view n) {
  static const std::pair<std::string_view, Func> table[] = {
      {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"sinh", Func::Sinh},
      {"cosh", Func::Cosh}, {"tanh", Func::Tanh}, {"sqrt", Func::Sqrt}, {"exp", Func::Exp},
      {"ln", Func::Ln},     {"abs", Func::Abs},   {"min", Func::Min},   {"max", Func::Max}};
  for (const auto& [name, f] : table)
    if (name == n) return f;
  return std::nullopt;
}

inline std::string_view func_name(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
    case Func::Sqrt: return "sqrt";
    case Func::Exp: return "exp";
    case Func::Ln: return "ln";
    case Func::Abs: return "abs";
    case Func::Min: return "min";
    case Func::Max: return "max";
  }
  return "?";
}

inline bool is_variadic(Func f) { return f == Func::Min || f == Func::Max; }

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Kind { Number, Variable, Negate, Binary, Call };

  Kind kind = Kind::Number;
  double number = 0.0;
  std::string name;
  BinOp op = BinOp::Add;
  Func func = Func::Sin;
  std::vector<NodePtr> args;

  static NodePtr make_number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->number = v;
    return n;
  }
  static NodePtr make_variable(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->name = std::move(name);
    return n;
  }
  static NodePtr make_negate(NodePtr a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Negate;
    n->args = {std::move(a)};
    return n;
  }
  static NodePtr make_binary(BinOp op, NodePtr l, NodePtr r) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Binary;
    n->op = op;
    n->args = {std::move(l), std::move(r)};
    return n;
  }
  static NodePtr make_call(Func f, std::vector<NodePtr> args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Call;
    n->func = f;
    n->args = std::move(args);
    return n;
  }
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline int precedence(const Node& n) {
  switch (n.kind) {
    case Node::Kind::Number: return n.number < 0.0 ? 3 : 5;
    case Node::Kind::Variable:
    case Node::Kind::Call: return 5;
    case Node::Kind::Negate: return 3;
    case Node::Kind::Binary:
      switch (n.op) {
        case BinOp::Add:
        case BinOp::Sub: return 1;
        case BinOp::Mul:
        case BinOp::Div: return 2;
        case BinOp::Pow: return 4;
      }
  }
  return 5;
}

inline std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline void print(const Node& n, std::string& out);

inline void print_wrapped(const Node& n, bool parens, std::string& out) {
  if (parens) out += '(';
  print(n, out);
  if (parens) out += ')';
}

inline void print(const Node& n, std::string& out) {
  switch (n.kind) {
    case Node::Kind::Number: out += format_number(n.number); return;
    case Node::Kind::Variable: out += n.name; return;
    case Node::Kind::Negate:
      out += '-';
      print_wrapped(*n.args[0], precedence(*n.args[0]) < 3, out);
      return;
    case Node::Kind::Call:
      out += func_name(n.func);
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], out);
      }
      out += ')';
      return;
    case Node::Kind::Binary: {
      const int p = precedence(n);
      const Node& l = *n.args[0];
      const Node& r = *n.args[1];
      if (n.op == BinOp::Pow) {
        print_wrapped(l, precedence(l) <= 4, out);
        out += '^';
        print_wrapped(r, precedence(r) < 3, out);
        return;
      }
      print_wrapped(l, precedence(l) < p, out);
      switch (n.op) {
        case BinOp::Add: out += " + "; break;
        case BinOp::Sub: out += " - "; break;
        case BinOp::Mul: out += '*'; break;
        case BinOp::Div: out += '/'; break;
        case BinOp::Pow: break;
      }
      print_wrapped(r, precedence(r) <= p, out);
      return;
    }
  }
}

}  // namespace detail

inline std::string to_string(const Node& n) {
  std::string s;
  detail::print(n, s);
  return s;
}

// ---------------------------------------------------------------------------
// Expr

class Expr {
 public:
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const noexcept { return *root_; }
  const NodePtr& root_ptr() const noexcept { return root_; }
  std::string to_string() const { return dsl::to_string(*root_); }

 private:
  NodePtr root_;
};

inline bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size()) return false;
  switch (a.kind) {
    case Node::Kind::Number:
      if (a.number != b.number) return false;
      break;
    case Node::Kind::Variable:
      if (a.name != b.name) return false;
      break;
    case Node::Kind::Binary:
      if (a.op != b.op) return false;
      break;
    case Node::Kind::Call:
      if (a.func != b.func) return false;
      break;
    case Node::Kind::Negate: break;
  }
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  return true;
}

inline bool structurally_equal(const Expr& a, const Expr& b) {
  return structurally_equal(a.root(), b.root());
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct Token {
  enum class Kind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };
  Kind kind = Kind::End;
  std::string text;
  double value = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) return t;

    const char c = src_[pos_];
    if (is_ident_start(c)) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && is_ident_char(src_[pos_])) advance();
      t.kind = Token::Kind::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
      return number(t);
    }
    advance();
    t.text = std::string(1, c);
    switch (c) {
      case '+': t.kind = Token::Kind::Plus; break;
      case '-': t.kind = Token::Kind::Minus; break;
      case '*': t.kind = Token::Kind::Star; break;
      case '/': t.kind = Token::Kind::Slash; break;
      case '^': t.kind = Token::Kind::Caret; break;
      case '(': t.kind = Token::Kind::LParen; break;
      case ')': t.kind = Token::Kind::RParen; break;
      case ',': t.kind = Token::Kind::Comma; break;
      default: throw SyntaxError("unexpected character", t.line, t.column, t.text);
    }
    return t;
  }

 private:
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
  static bool is_ident_start(char c) { return is_alpha(c) || c == '_'; }
  static bool is_ident_char(char c) { return is_ident_start(c) || is_digit(c); }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() &&
           (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' || src_[pos_] == '\r'))
      advance();
  }

  Token number(Token t) {
    std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      int save_col = column_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && is_digit(src_[pos_])) {
        while (pos_ < src_.size() && is_digit(src_[pos_])) advance();
      } else {
        pos_ = save;
        column_ = save_col;
      }
    }
    t.kind = Token::Kind::Number;
    t.text = std::string(src_.substr(start, pos_ - start));
    const char* first = t.text.data();
    auto [ptr, ec] = std::from_chars(first, first + t.text.size(), t.value);
    if (ec != std::errc() || ptr != first + t.text.size())
      throw SyntaxError("malformed number", t.line, t.column, t.text);
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { tok_ = lexer_.next(); }

  NodePtr parse_all() {
    NodePtr e = expr();
    if (tok_.kind != Token::Kind::End) fail("unexpected token after expression");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, tok_.line, tok_.column,
                      tok_.kind == Token::Kind::End ? "<end of input>" : tok_.text);
  }

  void bump() { tok_ = lexer_.next(); }

  void expect(Token::Kind k, const char* what) {
    if (tok_.kind != k) fail(std::string("expected ") + what);
    bump();
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (tok_.kind == Token::Kind::Plus || tok_.kind == Token::Kind::Minus) {
      const BinOp op = tok_.kind == Token::Kind::Plus ? BinOp::Add : BinOp::Sub;
      bump();
      lhs = Node::make_binary(op, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary();
    while (tok_.kind == Token::Kind::Star || tok_.kind == Token::Kind::Slash) {
      const BinOp op = tok_.kind == Token::Kind::Star ? BinOp::Mul : BinOp::Div;
      bump();
      lhs = Node::make_binary(op, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    if (tok_.kind == Token::Kind::Minus) {
      bump();
      return Node::make_negate(unary());
    }
    if (tok_.kind == Token::Kind::Plus) {
      bump();
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (tok_.kind == Token::Kind::Caret) {
      bump();
      return Node::make_binary(BinOp::Pow, base, unary());
    }
    return base;
  }

  NodePtr primary() {
    switch (tok_.kind) {
      case Token::Kind::Number: {
        NodePtr n = Node::make_number(tok_.value);
        bump();
        return n;
      }
      case Token::Kind::Ident: {
        Token id = tok_;
        bump();
        if (tok_.kind != Token::Kind::LParen) return Node::make_variable(id.text);
        const auto f = func_from_name(id.text);
        if (!f) throw SyntaxError("unknown function", id.line, id.column, id.text);
        bump();
        std::vector<NodePtr> args{expr()};
        while (tok_.kind == Token::Kind::Comma) {
          bump();
          args.push_back(expr());
        }
        expect(Token::Kind::RParen, "')'");
        const bool ok = is_variadic(*f) ? args.size() >= 2 : args.size() == 1;
        if (!ok) throw SyntaxError("wrong number of arguments", id.line, id.column, id.text);
        return Node::make_call(*f, std::move(args));
      }
      case Token::Kind::LParen: {
        bump();
        NodePtr e = expr();
        expect(Token::Kind::RParen, "')'");
        return e;
      }
      default: fail("expected operand");
    }
  }

  Lexer lexer_;
  Token tok_;
};

}  // namespace detail

inline Expr parse(std::string_view source) { return Expr(detail::Parser(source).parse_all()); }

// ---------------------------------------------------------------------------
// Analysis and evaluation

inline void collect_variables(const Node& n, std::set<std::string>& out) {
  if (n.kind == Node::Kind::Variable) out.insert(n.name);
  for (const auto& a : n.args) collect_variables(*a, out);
}

inline std::set<std::string> free_variables(const Expr& e) {
  std::set<std::string> s;
  collect_variables(e.root(), s);
  return s;
}

using Bindings = std::map<std::string, double>;

/// An expression with its variables resolved to positions in an argument
/// vector, so evaluation needs no name lookups.
class CompiledExpr {
 public:
  CompiledExpr(const Expr& e, std::span<const std::string> order) : expr_(e) {
    root_ = compile(e.root(), order);
  }

  double operator()(std::span<const double> values) const { return eval(root_, values); }

  const Expr& expr() const noexcept { return expr_; }

 private:
  struct Op {
    const Node* src = nullptr;
    std::size_t index = 0;
    std::vector<Op> args;
  };

  static Op compile(const Node& n, std::span<const std::string> order) {
    Op op;
    op.src = &n;
    if (n.kind == Node::Kind::Variable) {
      auto it = std::find(order.begin(), order.end(), n.name);
      if (it == order.end()) throw EvaluationError("unbound variable '" + n.name + "'", "");
      op.index = static_cast<std::size_t>(it - order.begin());
    }
    for (const auto& a : n.args) op.args.push_back(compile(*a, order));
    return op;
  }

  [[noreturn]] static void fail(const char* what, const Op& op) {
    throw EvaluationError(what, to_string(*op.src));
  }

  static double checked(double v, const Op& op) {
    if (!std::isfinite(v)) fail("non-finite result", op);
    return v;
  }

  static double eval(const Op& op, std::span<const double> x) {
    const Node& n = *op.src;
    switch (n.kind) {
      case Node::Kind::Number: return n.number;
      case Node::Kind::Variable: return checked(x[op.index], op);
      case Node::Kind::Negate: return -eval(op.args[0], x);
      case Node::Kind::Binary: {
        const double a = eval(op.args[0], x);
        const double b = eval(op.args[1], x);
        switch (n.op) {
          case BinOp::Add: return checked(a + b, op);
          case BinOp::Sub: return checked(a - b, op);
          case BinOp::Mul: return checked(a * b, op);
          case BinOp::Div:
            if (b == 0.0) fail("division by zero", op);
            return checked(a / b, op);
          case BinOp::Pow:
            if (a < 0.0 && std::trunc(b) != b) fail("negative base with non-integer exponent", op);
            if (a == 0.0 && b < 0.0) fail("zero base with negative exponent", op);
            return checked(std::pow(a, b), op);
        }
        break;
      }
      case Node::Kind::Call: {
        if (is_variadic(n.func)) {
          double acc = eval(op.args[0], x);
          for (std::size_t i = 1; i < op.args.size(); ++i) {
            const double v = eval(op.args[i], x);
            acc = n.func == Func::Min ? std::min(acc, v) : std::max(acc, v);
          }
          return acc;
        }
        const double a = eval(op.args[0], x);
        switch (n.func) {
          case Func::Sin: return checked(std::sin(a), op);
          case Func::Cos: return checked(std::cos(a), op);
          case Func::Tan: return checked(std::tan(a), op);
          case Func::Sinh: return checked(std::sinh(a), op);
          case Func::Cosh: return checked(std::cosh(a), op);
          case Func::Tanh: return checked(std::tanh(a), op);
          case Func::Sqrt:
            if (a < 0.0) fail("sqrt of negative argument", op);
            return std::sqrt(a);
          case Func::Exp: return checked(std::exp(a), op);
          case Func::Ln:
            if (!(a > 0.0)) fail("ln of non-positive argument", op);
            return std::log(a);
          case Func::Abs: return std::abs(a);
          case Func::Min:
          case Func::Max: break;
        }
        break;
      }
    }
    fail("malformed expression", op);
  }

  Expr expr_;
  Op root_;
};

inline double evaluate(const Expr& e, const Bindings& bindings) {
  std::vector<std::string> names;
  std::vector<double> values;
  for (const auto& v : free_variables(e)) {
    auto it = bindings.find(v);
    if (it == bindings.end()) throw EvaluationError("unbound variable '" + v + "'", "");
    names.push_back(v);
    values.push_back(it->second);
  }
  return CompiledExpr(e, names)(values);
}

}  // namespace homog::dsl
