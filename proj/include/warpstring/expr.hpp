#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "warpstring/errors.hpp"

namespace warpstring {

enum class ExprKind { Constant, Variable, Add, Sub, Mul, Div, Pow, Exp, Cosh, Sinh };

/// Immutable expression-tree node. Pow carries an integer exponent only,
/// which keeps derivatives closed-form and free of branch cuts.
struct ExprNode {
  ExprKind kind;
  double value = 0.0;           // Constant
  std::string name;             // Variable ("x" or "s")
  int exponent = 0;             // Pow
  std::shared_ptr<const ExprNode> lhs, rhs;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

/// A warp-profile expression together with its first and second symbolic
/// derivative trees (taken with respect to "x"; any other variable is held
/// constant). Derivatives are built once at construction, so instances are
/// immutable afterwards and safe to share across threads.
class ProfileExpr {
 public:
  /// Parse an infix expression over {+, -, *, /, ^int, exp, cosh, sinh}
  /// in the variables x and s. Throws ParseError with a byte offset.
  static ProfileExpr parse(std::string_view text);

  /// Evaluate at x (expression must not reference s). Division by zero and
  /// 0^negative raise DomainError.
  double eval(double x) const;

  /// Evaluate a two-variable family expression at (x, s).
  double eval(double x, double s) const;

  /// Exact symbolic derivative of the given order (1 or 2) with respect to
  /// x. Returns the cached tree; repeat calls yield the same object.
  const ProfileExpr& derivative(int order) const;

  /// Substitute s := value and return the resulting single-variable profile.
  ProfileExpr bind_parameter(double s) const;

  /// Infix rendering that reparses to an evaluation-identical tree.
  std::string to_string() const;

  bool depends_on(std::string_view var) const;

  /// Certify by grid sampling that every division denominator (and negative
  /// power base) is bounded away from zero with constant sign over
  /// [lo, hi] plus the given extra points. Throws DomainError with a
  /// witness otherwise. Sampling is a documented soundness gap versus true
  /// interval arithmetic.
  void certify_denominators(double lo, double hi, int grid_n,
                            const std::vector<double>& extra = {}) const;

  const ExprPtr& root() const { return root_; }

  explicit ProfileExpr(ExprPtr root);

 private:
  ProfileExpr(ExprPtr root, std::shared_ptr<const ProfileExpr> d1,
              std::shared_ptr<const ProfileExpr> d2);

  ExprPtr root_;
  bool uses_parameter_ = false;
  std::shared_ptr<const ProfileExpr> deriv1_, deriv2_;
};

}  // namespace warpstring
