#pragma once

// Tiny arithmetic expressions in one variable x:
//   numbers, x, pi, + - * / ^, unary minus, sin cos exp, parentheses.

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace dimtrunc {

class ExpressionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Expression {
 public:
  static Expression parse(std::string_view text) {
    Parser parser{text, 0};
    NodePtr root = parser.expression();
    parser.skip_space();
    if (parser.pos != text.size()) {
      parser.fail("unexpected trailing input");
    }
    return Expression(std::string(text), std::move(root));
  }

  double operator()(double x) const { return root_->eval(x); }
  const std::string& text() const { return text_; }

 private:
  enum class Op { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos, Exp };

  struct Node {
    Op op;
    double value = 0.0;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;

    double eval(double x) const {
      switch (op) {
        case Op::Const: return value;
        case Op::Var: return x;
        case Op::Neg: return -lhs->eval(x);
        case Op::Add: return lhs->eval(x) + rhs->eval(x);
        case Op::Sub: return lhs->eval(x) - rhs->eval(x);
        case Op::Mul: return lhs->eval(x) * rhs->eval(x);
        case Op::Div: return lhs->eval(x) / rhs->eval(x);
        case Op::Pow: return std::pow(lhs->eval(x), rhs->eval(x));
        case Op::Sin: return std::sin(lhs->eval(x));
        case Op::Cos: return std::cos(lhs->eval(x));
        case Op::Exp: return std::exp(lhs->eval(x));
      }
      return 0.0;
    }
  };
  using NodePtr = std::shared_ptr<const Node>;

  static NodePtr make(Op op, NodePtr lhs = {}, NodePtr rhs = {}, double value = 0.0) {
    return std::make_shared<const Node>(Node{op, value, std::move(lhs), std::move(rhs)});
  }

  // expression := term (('+' | '-') term)*
  // term       := unary (('*' | '/') unary)*
  // unary      := ('-' | '+') unary | power
  // power      := primary ('^' unary)?
  struct Parser {
    std::string_view text;
    std::size_t pos;

    [[noreturn]] void fail(const std::string& message) const {
      throw ExpressionError("expression '" + std::string(text) + "': " + message + " at offset " +
                            std::to_string(pos));
    }

    void skip_space() {
      while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool accept(char c) {
      skip_space();
      if (pos < text.size() && text[pos] == c) {
        ++pos;
        return true;
      }
      return false;
    }

    NodePtr expression() {
      NodePtr lhs = term();
      for (;;) {
        if (accept('+')) {
          lhs = make(Op::Add, lhs, term());
        } else if (accept('-')) {
          lhs = make(Op::Sub, lhs, term());
        } else {
          return lhs;
        }
      }
    }

    NodePtr term() {
      NodePtr lhs = unary();
      for (;;) {
        if (accept('*')) {
          lhs = make(Op::Mul, lhs, unary());
        } else if (accept('/')) {
          lhs = make(Op::Div, lhs, unary());
        } else {
          return lhs;
        }
      }
    }

    NodePtr unary() {
      if (accept('-')) return make(Op::Neg, unary());
      if (accept('+')) return unary();
      return power();
    }

    NodePtr power() {
      NodePtr base = primary();
      if (accept('^')) return make(Op::Pow, base, unary());
      return base;
    }

    NodePtr primary() {
      skip_space();
      if (pos >= text.size()) fail("unexpected end of input");
      const char c = text[pos];
      if (c == '(') {
        ++pos;
        NodePtr inner = expression();
        if (!accept(')')) fail("expected ')'");
        return inner;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
        const std::string rest(text.substr(pos));
        char* end = nullptr;
        const double value = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) fail("malformed number");
        pos += static_cast<std::size_t>(end - rest.c_str());
        return make(Op::Const, {}, {}, value);
      }
      if (std::isalpha(static_cast<unsigned char>(c))) {
        const std::size_t start = pos;
        while (pos < text.size() && std::isalpha(static_cast<unsigned char>(text[pos]))) ++pos;
        const std::string_view name = text.substr(start, pos - start);
        if (name == "x") return make(Op::Var);
        if (name == "pi") return make(Op::Const, {}, {}, std::numbers::pi);
        Op fn;
        if (name == "sin") {
          fn = Op::Sin;
        } else if (name == "cos") {
          fn = Op::Cos;
        } else if (name == "exp") {
          fn = Op::Exp;
        } else {
          pos = start;
          fail("unknown identifier '" + std::string(name) + "'");
        }
        if (!accept('(')) fail("expected '(' after function name");
        NodePtr arg = expression();
        if (!accept(')')) fail("expected ')'");
        return make(fn, arg);
      }
      fail(std::string("unexpected character '") + c + "'");
    }
  };

  Expression(std::string text, NodePtr root) : text_(std::move(text)), root_(std::move(root)) {}

  std::string text_;
  NodePtr root_;
};

}  // namespace dimtrunc
