#pragma once

#include <Eigen/Dense>

namespace aerial {

/// Gauss-Laguerre rule for integrals of the form
///   int_0^inf exp(-x) f(x) dx  ~=  sum_p weight(p) * f(node(p)),
/// exact for polynomials f of degree <= 2*order - 1.
struct QuadratureRule {
    int order = 0;
    Eigen::VectorXd nodes;    // ascending, strictly positive
    Eigen::VectorXd weights;  // sum to 1
};

/// Builds the rule via the Golub-Welsch eigen-decomposition of the Laguerre
/// Jacobi matrix. Valid orders: 1..128.
QuadratureRule laguerre_rule(int order);

/// Process-wide cached lookup (rules are immutable once built).
const QuadratureRule& cached_laguerre_rule(int order);

}  // namespace aerial
