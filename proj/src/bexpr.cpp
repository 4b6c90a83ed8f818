#include "solitonlab/bexpr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "solitonlab/errors.hpp"

namespace solitonlab {

struct BExpr::Node {
  enum class Op { Num, Var, Add, Sub, Mul, Div, Neg, Pow, Exp, Log };
  Op op;
  double value = 0.0;  // Num: the number, Pow: the exponent
  std::shared_ptr<const Node> a, b;
};

namespace {

using Op = BExpr::Node::Op;
using NodePtr = std::shared_ptr<const BExpr::Node>;

NodePtr num(double v) { return std::make_shared<const BExpr::Node>(BExpr::Node{Op::Num, v, nullptr, nullptr}); }
NodePtr var() { return std::make_shared<const BExpr::Node>(BExpr::Node{Op::Var, 0.0, nullptr, nullptr}); }
bool is_num(const NodePtr& p, double v) { return p->op == Op::Num && p->value == v; }

NodePtr make(Op op, NodePtr a, NodePtr b = nullptr, double value = 0.0) {
  // light constant folding keeps derivatives readable
  switch (op) {
    case Op::Add:
      if (is_num(a, 0)) return b;
      if (is_num(b, 0)) return a;
      if (a->op == Op::Num && b->op == Op::Num) return num(a->value + b->value);
      break;
    case Op::Sub:
      if (is_num(b, 0)) return a;
      if (a->op == Op::Num && b->op == Op::Num) return num(a->value - b->value);
      break;
    case Op::Mul:
      if (is_num(a, 0) || is_num(b, 0)) return num(0);
      if (is_num(a, 1)) return b;
      if (is_num(b, 1)) return a;
      if (a->op == Op::Num && b->op == Op::Num) return num(a->value * b->value);
      break;
    case Op::Div:
      if (is_num(a, 0)) return num(0);
      if (is_num(b, 1)) return a;
      break;
    case Op::Neg:
      if (a->op == Op::Num) return num(-a->value);
      break;
    case Op::Pow:
      if (value == 0) return num(1);
      if (value == 1) return a;
      if (a->op == Op::Num) return num(std::pow(a->value, value));
      break;
    default: break;
  }
  return std::make_shared<const BExpr::Node>(BExpr::Node{op, value, std::move(a), std::move(b)});
}

double eval(const NodePtr& p, double s) {
  switch (p->op) {
    case Op::Num: return p->value;
    case Op::Var: return s;
    case Op::Add: return eval(p->a, s) + eval(p->b, s);
    case Op::Sub: return eval(p->a, s) - eval(p->b, s);
    case Op::Mul: return eval(p->a, s) * eval(p->b, s);
    case Op::Div: return eval(p->a, s) / eval(p->b, s);
    case Op::Neg: return -eval(p->a, s);
    case Op::Pow: return std::pow(eval(p->a, s), p->value);
    case Op::Exp: return std::exp(eval(p->a, s));
    case Op::Log: return std::log(eval(p->a, s));
  }
  return 0.0;
}

NodePtr diff(const NodePtr& p) {
  switch (p->op) {
    case Op::Num: return num(0);
    case Op::Var: return num(1);
    case Op::Add: return make(Op::Add, diff(p->a), diff(p->b));
    case Op::Sub: return make(Op::Sub, diff(p->a), diff(p->b));
    case Op::Mul: return make(Op::Add, make(Op::Mul, diff(p->a), p->b), make(Op::Mul, p->a, diff(p->b)));
    case Op::Div:
      return make(Op::Div, make(Op::Sub, make(Op::Mul, diff(p->a), p->b), make(Op::Mul, p->a, diff(p->b))),
                  make(Op::Pow, p->b, nullptr, 2.0));
    case Op::Neg: return make(Op::Neg, diff(p->a));
    case Op::Pow:
      return make(Op::Mul, make(Op::Mul, num(p->value), make(Op::Pow, p->a, nullptr, p->value - 1)), diff(p->a));
    case Op::Exp: return make(Op::Mul, p, diff(p->a));
    case Op::Log: return make(Op::Div, diff(p->a), p->a);
  }
  return num(0);
}

using Interval = std::pair<double, double>;

Interval mul(Interval x, Interval y) {
  double c[4] = {x.first * y.first, x.first * y.second, x.second * y.first, x.second * y.second};
  return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
}

Interval bound(const NodePtr& p, Interval s) {
  switch (p->op) {
    case Op::Num: return {p->value, p->value};
    case Op::Var: return s;
    case Op::Add: {
      auto x = bound(p->a, s), y = bound(p->b, s);
      return {x.first + y.first, x.second + y.second};
    }
    case Op::Sub: {
      auto x = bound(p->a, s), y = bound(p->b, s);
      return {x.first - y.second, x.second - y.first};
    }
    case Op::Mul: return mul(bound(p->a, s), bound(p->b, s));
    case Op::Div: {
      auto y = bound(p->b, s);
      if (!(y.first > 0 || y.second < 0))
        throw Error(ErrorCode::WeightDomain, "denominator not certified nonzero on the range");
      return mul(bound(p->a, s), {1 / y.second, 1 / y.first});
    }
    case Op::Neg: {
      auto x = bound(p->a, s);
      return {-x.second, -x.first};
    }
    case Op::Pow: {
      auto x = bound(p->a, s);
      const double e = p->value;
      const bool integer = std::floor(e) == e;
      if (!integer || e < 0) {
        if (x.first > 0) {
          double lo = std::pow(x.first, e), hi = std::pow(x.second, e);
          return {std::min(lo, hi), std::max(lo, hi)};
        }
        if (integer && x.second < 0) {
          double lo = std::pow(x.first, e), hi = std::pow(x.second, e);
          return {std::min(lo, hi), std::max(lo, hi)};
        }
        throw Error(ErrorCode::WeightDomain, "power base not certified positive on the range");
      }
      double lo = std::pow(x.first, e), hi = std::pow(x.second, e);
      Interval r{std::min(lo, hi), std::max(lo, hi)};
      if (static_cast<long long>(e) % 2 == 0 && x.first < 0 && x.second > 0) r.first = 0.0;
      return r;
    }
    case Op::Exp: {
      auto x = bound(p->a, s);
      return {std::exp(x.first), std::exp(x.second)};
    }
    case Op::Log: {
      auto x = bound(p->a, s);
      if (!(x.first > 0)) throw Error(ErrorCode::WeightDomain, "log argument not certified positive");
      return {std::log(x.first), std::log(x.second)};
    }
  }
  return {0.0, 0.0};
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string print(const NodePtr& p) {
  switch (p->op) {
    case Op::Num: return p->value < 0 ? "(" + format_number(p->value) + ")" : format_number(p->value);
    case Op::Var: return "s";
    case Op::Add: return "(" + print(p->a) + " + " + print(p->b) + ")";
    case Op::Sub: return "(" + print(p->a) + " - " + print(p->b) + ")";
    case Op::Mul: return print(p->a) + "*" + print(p->b);
    case Op::Div: return print(p->a) + "/" + print(p->b);
    case Op::Neg: return "(-" + print(p->a) + ")";
    case Op::Pow: return print(p->a) + "^" + (p->value < 0 ? "(" + format_number(p->value) + ")" : format_number(p->value));
    case Op::Exp: return "exp(" + print(p->a) + ")";
    case Op::Log: return "log(" + print(p->a) + ")";
  }
  return "";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : s_(text) {}

  NodePtr run() {
    auto e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) {
    throw Error(ErrorCode::InvalidInput, "b-expression: " + msg + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto e = term();
    while (true) {
      if (eat('+'))
        e = make(Op::Add, e, term());
      else if (eat('-'))
        e = make(Op::Sub, e, term());
      else
        return e;
    }
  }
  NodePtr term() {
    auto e = unary();
    while (true) {
      if (eat('*'))
        e = make(Op::Mul, e, unary());
      else if (eat('/'))
        e = make(Op::Div, e, unary());
      else
        return e;
    }
  }
  NodePtr unary() {
    if (eat('-')) return make(Op::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }
  NodePtr power() {
    auto base = primary();
    if (!eat('^')) return base;
    // exponent must be a constant expression
    auto e = unary();
    if (e->op != Op::Num) fail("exponent must be a number");
    return make(Op::Pow, base, nullptr, e->value);
  }
  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    char c = s_[pos_];
    if (eat('(')) {
      auto e = expr();
      if (!eat(')')) fail("missing ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = std::stod(s_.substr(pos_), &used);
      pos_ += used;
      return num(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalpha(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string id = s_.substr(start, pos_ - start);
      if (id == "s") return var();
      if (id == "exp" || id == "log") {
        if (!eat('(')) fail("expected '(' after " + id);
        auto arg = expr();
        if (!eat(')')) fail("missing ')'");
        return make(id == "exp" ? Op::Exp : Op::Log, arg);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  std::size_t pos_ = 0;
};

}  // namespace

BExpr BExpr::parse(const std::string& text) { return BExpr(Parser(text).run()); }
BExpr BExpr::variable() { return BExpr(var()); }
BExpr BExpr::number(double v) { return BExpr(num(v)); }

double BExpr::operator()(double s) const { return eval(root_, s); }
BExpr BExpr::derivative() const { return BExpr(diff(root_)); }
std::pair<double, double> BExpr::bounds(double lo, double hi) const { return bound(root_, {lo, hi}); }
std::string BExpr::to_string() const { return print(root_); }

}  // namespace solitonlab
