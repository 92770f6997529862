#pragma once

#include <array>
#include <bitset>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "herglotz/dual.hpp"
#include "herglotz/errors.hpp"

namespace herglotz {

/// The fixed variable set. The first six are the Lagrangian slots in order:
/// time, x(t), x'(t), x(t - tau), x'(t - tau), z(t).
enum class Variable : std::uint8_t { t, x, dx, xtau, dxtau, z, eps };

inline constexpr int kVariableCount = 7;
using VariableSet = std::bitset<kVariableCount>;

std::string_view variable_name(Variable v);
std::optional<Variable> variable_from_name(std::string_view name);

enum class Function : std::uint8_t { sin, cos, exp, log, sqrt, abs, tanh };
enum class BinaryOp : std::uint8_t { add, sub, mul, div, pow };

std::string_view function_name(Function f);

/// Immutable expression tree. Copies share structure; evaluation is
/// reentrant.
class Expression {
 public:
  struct Node;

  Expression();  // the literal 0

  static Expression number(double value);
  static Expression variable(Variable v);
  static Expression negate(Expression operand);
  static Expression binary(BinaryOp op, Expression lhs, Expression rhs);
  static Expression call(Function f, Expression argument);

  const Node& root() const { return *root_; }

  VariableSet variables() const;
  bool uses(Variable v) const { return variables().test(static_cast<int>(v)); }

  /// Source text in the expression grammar; parse(to_string()) == *this.
  std::string to_string() const;

  /// Constructor-style dump, e.g. "Add(Pow(Var dxtau, Num 2), Var z)".
  std::string debug_tree() const;

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  std::shared_ptr<const Node> root_;
};

/// Parses `text`. Throws SyntaxError (kind Syntax or UnknownIdentifier)
/// carrying the byte offset of the offending token.
Expression parse(std::string_view text);

/// Finite values for a subset of the variables. Reading an unbound variable
/// is an error.
class Bindings {
 public:
  Bindings() = default;
  Bindings(std::initializer_list<std::pair<Variable, double>> values);

  static Bindings from_names(const std::map<std::string, double>& values);

  Bindings& set(Variable v, double value);
  bool is_bound(Variable v) const { return bound_.test(static_cast<int>(v)); }
  double get(Variable v) const;

 private:
  std::array<double, kVariableCount> values_{};
  VariableSet bound_;
};

/// All first partials at once; grad(i) is the derivative with respect to
/// Variable(i).
using Jet = Dual<Partials7>;

double eval(const Expression& e, const Bindings& b);
double partial(const Expression& e, Variable v, const Bindings& b);
/// Value and derivative with respect to `seed` in one pass.
Dual<double> value_and_partial(const Expression& e, Variable seed, const Bindings& b);
Jet gradient(const Expression& e, const Bindings& b);

}  // namespace herglotz
