#include "herglotz/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <variant>

namespace herglotz {

namespace {

constexpr std::array<std::string_view, kVariableCount> kVariableNames = {
    "t", "x", "dx", "xtau", "dxtau", "z", "eps"};

constexpr std::array<std::string_view, 7> kFunctionNames = {
    "sin", "cos", "exp", "log", "sqrt", "abs", "tanh"};

std::optional<Function> function_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kFunctionNames.size(); ++i) {
    if (kFunctionNames[i] == name) return static_cast<Function>(i);
  }
  return std::nullopt;
}

}  // namespace

std::string_view variable_name(Variable v) {
  return kVariableNames[static_cast<std::size_t>(v)];
}

std::optional<Variable> variable_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kVariableNames.size(); ++i) {
    if (kVariableNames[i] == name) return static_cast<Variable>(i);
  }
  return std::nullopt;
}

std::string_view function_name(Function f) {
  return kFunctionNames[static_cast<std::size_t>(f)];
}

using NodePtr = std::shared_ptr<const Expression::Node>;

struct NumberNode {
  double value;
};
struct VariableNode {
  Variable var;
};
struct NegateNode {
  NodePtr operand;
};
struct BinaryNode {
  BinaryOp op;
  NodePtr lhs;
  NodePtr rhs;
};
struct CallNode {
  Function fn;
  NodePtr argument;
};

struct Expression::Node {
  std::variant<NumberNode, VariableNode, NegateNode, BinaryNode, CallNode> data;
  VariableSet vars;
};

namespace {

template <typename T>
NodePtr make_node(T payload, VariableSet vars) {
  return std::make_shared<const Expression::Node>(Expression::Node{std::move(payload), vars});
}

// ---------------------------------------------------------------- printing

// Binding strength used for parenthesization: + - < * / < unary - < ^ < atom.
int precedence(const Expression::Node& n) {
  if (const auto* b = std::get_if<BinaryNode>(&n.data)) {
    switch (b->op) {
      case BinaryOp::add:
      case BinaryOp::sub: return 1;
      case BinaryOp::mul:
      case BinaryOp::div: return 2;
      case BinaryOp::pow: return 4;
    }
  }
  if (std::holds_alternative<NegateNode>(n.data)) return 3;
  if (const auto* num = std::get_if<NumberNode>(&n.data); num && std::signbit(num->value)) return 3;
  return 5;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void print_node(const Expression::Node& n, std::string& out);

void print_child(const Expression::Node& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print_node(child, out);
  if (parens) out += ')';
}

void print_node(const Expression::Node& n, std::string& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NumberNode>) {
          out += format_number(node.value);
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          out += variable_name(node.var);
        } else if constexpr (std::is_same_v<T, NegateNode>) {
          out += '-';
          print_child(*node.operand, precedence(*node.operand) < 3, out);
        } else if constexpr (std::is_same_v<T, CallNode>) {
          out += function_name(node.fn);
          out += '(';
          print_node(*node.argument, out);
          out += ')';
        } else {
          const int p = precedence(n);
          if (node.op == BinaryOp::pow) {
            print_child(*node.lhs, precedence(*node.lhs) <= 4, out);
            out += '^';
            print_child(*node.rhs, precedence(*node.rhs) < 3, out);
            return;
          }
          print_child(*node.lhs, precedence(*node.lhs) < p, out);
          switch (node.op) {
            case BinaryOp::add: out += " + "; break;
            case BinaryOp::sub: out += " - "; break;
            case BinaryOp::mul: out += "*"; break;
            case BinaryOp::div: out += "/"; break;
            case BinaryOp::pow: break;
          }
          print_child(*node.rhs, precedence(*node.rhs) <= p, out);
        }
      },
      n.data);
}

void dump_node(const Expression::Node& n, std::string& out) {
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NumberNode>) {
          out += "Num " + format_number(node.value);
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          out += "Var ";
          out += variable_name(node.var);
        } else if constexpr (std::is_same_v<T, NegateNode>) {
          out += "Neg(";
          dump_node(*node.operand, out);
          out += ')';
        } else if constexpr (std::is_same_v<T, CallNode>) {
          out += "Call ";
          out += function_name(node.fn);
          out += '(';
          dump_node(*node.argument, out);
          out += ')';
        } else {
          static constexpr const char* kNames[] = {"Add", "Sub", "Mul", "Div", "Pow"};
          out += kNames[static_cast<int>(node.op)];
          out += '(';
          dump_node(*node.lhs, out);
          out += ", ";
          dump_node(*node.rhs, out);
          out += ')';
        }
      },
      n.data);
}

bool equal_nodes(const Expression::Node& a, const Expression::Node& b) {
  if (a.data.index() != b.data.index()) return false;
  return std::visit(
      [&](const auto& lhs) -> bool {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.data);
        if constexpr (std::is_same_v<T, NumberNode>) {
          return std::memcmp(&lhs.value, &rhs.value, sizeof(double)) == 0;
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          return lhs.var == rhs.var;
        } else if constexpr (std::is_same_v<T, NegateNode>) {
          return equal_nodes(*lhs.operand, *rhs.operand);
        } else if constexpr (std::is_same_v<T, CallNode>) {
          return lhs.fn == rhs.fn && equal_nodes(*lhs.argument, *rhs.argument);
        } else {
          return lhs.op == rhs.op && equal_nodes(*lhs.lhs, *rhs.lhs) &&
                 equal_nodes(*lhs.rhs, *rhs.rhs);
        }
      },
      a.data);
}

// ----------------------------------------------------------------- parsing

// Recursive descent:
//   expr    := term   (('+' | '-') term)*
//   term    := unary  (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | variable | function '(' expr ')' | '(' expr ')'
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expression run() {
    Expression e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, std::size_t at) const {
    throw SyntaxError(ErrorKind::Syntax, msg, at);
  }
  [[noreturn]] void fail(const std::string& msg) const { fail(msg, pos_); }

  void skip_space() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression expr() {
    Expression lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expression::binary(BinaryOp::add, lhs, term());
      } else if (accept('-')) {
        lhs = Expression::binary(BinaryOp::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expression term() {
    Expression lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expression::binary(BinaryOp::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = Expression::binary(BinaryOp::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expression unary() {
    if (accept('-')) return Expression::negate(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expression power() {
    Expression base = primary();
    if (accept('^')) return Expression::binary(BinaryOp::pow, base, unary());
    return base;
  }

  Expression primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("expected an operand");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expression inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail(std::string("unexpected character '") + c + "'");
  }

  Expression number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent", start);
    }
    double value = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (res.ec != std::errc() || res.ptr != text_.data() + pos_ || !std::isfinite(value)) {
      fail("number out of range", start);
    }
    return Expression::number(value);
  }

  Expression identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    skip_space();
    const bool is_call = pos_ < text_.size() && text_[pos_] == '(';
    if (is_call) {
      auto fn = function_from_name(name);
      if (!fn) {
        throw SyntaxError(ErrorKind::UnknownIdentifier,
                          "unknown function '" + std::string(name) + "'", start);
      }
      ++pos_;
      Expression arg = expr();
      if (!accept(')')) fail("expected ')'");
      return Expression::call(*fn, arg);
    }
    auto var = variable_from_name(name);
    if (!var) {
      const std::string what = function_from_name(name)
                                   ? "function '" + std::string(name) + "' used without arguments"
                                   : "unknown identifier '" + std::string(name) + "'";
      throw SyntaxError(ErrorKind::UnknownIdentifier, what, start);
    }
    return Expression::variable(*var);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// -------------------------------------------------------------- evaluation

[[noreturn]] void domain_error(const std::string& what) { throw Error(ErrorKind::Domain, what); }

[[noreturn]] void kink_error(const std::string& what) {
  throw Error(ErrorKind::NonDifferentiable, what);
}

template <typename G>
Dual<G> power(const Dual<G>& base, const Dual<G>& exponent) {
  const double a = base.value;
  const double p = exponent.value;
  const bool integral = std::trunc(p) == p;
  if (a < 0.0 && !integral) domain_error("negative base with non-integer exponent");
  if (a == 0.0 && p < 0.0) domain_error("zero raised to a negative power");

  const double value = std::pow(a, p);
  Dual<G> out = Dual<G>::constant(value);

  if (base.has_nonzero_seed()) {
    if (p == 0.0) {
      // d/da a^0 = 0
    } else if (a == 0.0 && p < 1.0) {
      kink_error("power with exponent below 1 differentiated at 0");
    } else {
      out.grad = out.grad + (p * std::pow(a, p - 1.0)) * base.grad;
    }
  }
  if (exponent.has_nonzero_seed()) {
    if (a <= 0.0) kink_error("variable exponent requires a positive base");
    out.grad = out.grad + (value * std::log(a)) * exponent.grad;
  }
  return out;
}

template <typename G>
Dual<G> apply(Function fn, const Dual<G>& a) {
  const double v = a.value;
  switch (fn) {
    case Function::sin: return chain(a, std::sin(v), std::cos(v));
    case Function::cos: return chain(a, std::cos(v), -std::sin(v));
    case Function::exp: {
      const double e = std::exp(v);
      return chain(a, e, e);
    }
    case Function::log:
      if (v <= 0.0) domain_error("log of a non-positive value");
      return chain(a, std::log(v), 1.0 / v);
    case Function::sqrt: {
      if (v < 0.0) domain_error("sqrt of a negative value");
      const double s = std::sqrt(v);
      if (s == 0.0) {
        if (a.has_nonzero_seed()) kink_error("sqrt differentiated at 0");
        return Dual<G>::constant(0.0);
      }
      return chain(a, s, 0.5 / s);
    }
    case Function::abs:
      if (v == 0.0) {
        if (a.has_nonzero_seed()) kink_error("abs differentiated at 0");
        return Dual<G>::constant(0.0);
      }
      return chain(a, std::abs(v), v > 0.0 ? 1.0 : -1.0);
    case Function::tanh: {
      const double th = std::tanh(v);
      return chain(a, th, 1.0 - th * th);
    }
  }
  return a;
}

template <typename G, typename Leaf>
Dual<G> evaluate(const Expression::Node& n, const Leaf& leaf) {
  return std::visit(
      [&](const auto& node) -> Dual<G> {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, NumberNode>) {
          return Dual<G>::constant(node.value);
        } else if constexpr (std::is_same_v<T, VariableNode>) {
          return leaf(node.var);
        } else if constexpr (std::is_same_v<T, NegateNode>) {
          return -evaluate<G>(*node.operand, leaf);
        } else if constexpr (std::is_same_v<T, CallNode>) {
          return apply(node.fn, evaluate<G>(*node.argument, leaf));
        } else {
          const Dual<G> lhs = evaluate<G>(*node.lhs, leaf);
          const Dual<G> rhs = evaluate<G>(*node.rhs, leaf);
          switch (node.op) {
            case BinaryOp::add: return lhs + rhs;
            case BinaryOp::sub: return lhs - rhs;
            case BinaryOp::mul: return lhs * rhs;
            case BinaryOp::div:
              if (rhs.value == 0.0) domain_error("division by zero");
              return lhs / rhs;
            case BinaryOp::pow: return power(lhs, rhs);
          }
          return lhs;
        }
      },
      n.data);
}

template <typename G>
void require_finite(const Dual<G>& d) {
  bool ok = std::isfinite(d.value);
  if constexpr (std::is_arithmetic_v<G>) {
    ok = ok && std::isfinite(d.grad);
  } else {
    ok = ok && d.grad.allFinite();
  }
  if (!ok) throw Error(ErrorKind::NonFinite, "expression evaluated to a non-finite value");
}

}  // namespace

// -------------------------------------------------------------- Expression

Expression::Expression() : Expression(make_node(NumberNode{0.0}, {})) {}

Expression Expression::number(double value) { return Expression(make_node(NumberNode{value}, {})); }

Expression Expression::variable(Variable v) {
  VariableSet vars;
  vars.set(static_cast<int>(v));
  return Expression(make_node(VariableNode{v}, vars));
}

Expression Expression::negate(Expression operand) {
  const VariableSet vars = operand.root_->vars;
  return Expression(make_node(NegateNode{std::move(operand.root_)}, vars));
}

Expression Expression::binary(BinaryOp op, Expression lhs, Expression rhs) {
  const VariableSet vars = lhs.root_->vars | rhs.root_->vars;
  return Expression(make_node(BinaryNode{op, std::move(lhs.root_), std::move(rhs.root_)}, vars));
}

Expression Expression::call(Function f, Expression argument) {
  const VariableSet vars = argument.root_->vars;
  return Expression(make_node(CallNode{f, std::move(argument.root_)}, vars));
}

VariableSet Expression::variables() const { return root_->vars; }

std::string Expression::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

std::string Expression::debug_tree() const {
  std::string out;
  dump_node(*root_, out);
  return out;
}

bool operator==(const Expression& a, const Expression& b) {
  return a.root_ == b.root_ || equal_nodes(*a.root_, *b.root_);
}

Expression parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------- Bindings

Bindings::Bindings(std::initializer_list<std::pair<Variable, double>> values) {
  for (const auto& [v, x] : values) set(v, x);
}

Bindings Bindings::from_names(const std::map<std::string, double>& values) {
  Bindings b;
  for (const auto& [name, x] : values) {
    auto v = variable_from_name(name);
    if (!v) throw Error(ErrorKind::UnknownIdentifier, "unknown variable '" + name + "'");
    b.set(*v, x);
  }
  return b;
}

Bindings& Bindings::set(Variable v, double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::NonFinite,
                "non-finite binding for '" + std::string(variable_name(v)) + "'");
  }
  values_[static_cast<std::size_t>(v)] = value;
  bound_.set(static_cast<int>(v));
  return *this;
}

double Bindings::get(Variable v) const {
  if (!is_bound(v)) {
    throw Error(ErrorKind::UnboundVariable,
                "variable '" + std::string(variable_name(v)) + "' is not bound");
  }
  return values_[static_cast<std::size_t>(v)];
}

// -------------------------------------------------------------- evaluation

double eval(const Expression& e, const Bindings& b) {
  auto leaf = [&](Variable v) { return Dual<double>::constant(b.get(v)); };
  const Dual<double> r = evaluate<double>(e.root(), leaf);
  require_finite(r);
  return r.value;
}

Dual<double> value_and_partial(const Expression& e, Variable seed, const Bindings& b) {
  auto leaf = [&](Variable w) { return Dual<double>{b.get(w), w == seed ? 1.0 : 0.0}; };
  const Dual<double> r = evaluate<double>(e.root(), leaf);
  require_finite(r);
  return r;
}

double partial(const Expression& e, Variable v, const Bindings& b) {
  return value_and_partial(e, v, b).grad;
}

Jet gradient(const Expression& e, const Bindings& b) {
  auto leaf = [&](Variable w) {
    Jet j = Jet::constant(b.get(w));
    j.grad(static_cast<int>(w)) = 1.0;
    return j;
  };
  const Jet r = evaluate<Partials7>(e.root(), leaf);
  require_finite(r);
  return r;
}

// ------------------------------------------------------------------ errors

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::NonDifferentiable: return "NonDifferentiable";
    case ErrorKind::BadInterval: return "BadInterval";
    case ErrorKind::DelayNotAligned: return "DelayNotAligned";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::FixedNode: return "FixedNode";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::BadGuess: return "BadGuess";
    case ErrorKind::Config: return "ConfigError";
  }
  return "Error";
}

bool Error::is_configuration_error() const noexcept {
  switch (kind_) {
    case ErrorKind::Syntax:
    case ErrorKind::UnknownIdentifier:
    case ErrorKind::UnboundVariable:
    case ErrorKind::BadInterval:
    case ErrorKind::DelayNotAligned:
    case ErrorKind::FixedNode:
    case ErrorKind::BadGuess:
    case ErrorKind::Config: return true;
    default: return false;
  }
}

}  // namespace herglotz
