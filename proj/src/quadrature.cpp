#include "aerial/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "aerial/errors.hpp"

namespace aerial {

namespace {

// Orthonormal Laguerre recurrence: p_{k+1} = ((x - (2k+1)) p_k - k p_{k-1})/(k+1),
// with p_0 = 1. Returns p_n, p_n' and the Christoffel sum 1/weight =
// sum_{k<n} p_k(x)^2. Following the dominant (growing) solution forward is
// stable, which keeps even the e-200-scale weights accurate in relative
// terms where eigenvector-based weights degrade to absolute accuracy.
struct RecurrenceEval {
    double p_n = 0.0;
    double dp_n = 0.0;
    double christoffel = 0.0;  // sum of squares of p_0..p_{n-1}
};

RecurrenceEval eval_laguerre(int n, double x) {
    double p_prev = 0.0, p = 1.0;
    double dp_prev = 0.0, dp = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < n; ++k) {
        sum_sq += p * p;
        double p_next = ((x - (2.0 * k + 1.0)) * p - k * p_prev) / (k + 1.0);
        double dp_next = ((x - (2.0 * k + 1.0)) * dp + p - k * dp_prev) / (k + 1.0);
        p_prev = p;
        p = p_next;
        dp_prev = dp;
        dp = dp_next;
    }
    return {p, dp, sum_sq};
}

}  // namespace

QuadratureRule laguerre_rule(int order) {
    if (order < 1 || order > 128)
        throw PreconditionError("laguerre_rule: order must lie in [1, 128]");

    // Jacobi matrix of the Laguerre recurrence: diagonal 2k+1, off-diagonal k.
    Eigen::VectorXd diag(order), sub(std::max(order - 1, 0));
    for (int k = 0; k < order; ++k) diag(k) = 2.0 * k + 1.0;
    for (int k = 1; k < order; ++k) sub(k - 1) = static_cast<double>(k);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw NumericError("laguerre_rule: eigen-decomposition failed");

    QuadratureRule rule;
    rule.order = order;
    rule.nodes = solver.eigenvalues();
    rule.weights.resize(order);
    for (int i = 0; i < order; ++i) {
        double x = rule.nodes(i);
        // two Newton polish steps take the eigenvalue to full precision
        for (int step = 0; step < 2; ++step) {
            RecurrenceEval e = eval_laguerre(order, x);
            if (e.dp_n != 0.0) x -= e.p_n / e.dp_n;
        }
        RecurrenceEval e = eval_laguerre(order, x);
        rule.nodes(i) = x;
        rule.weights(i) = 1.0 / e.christoffel;
    }
    return rule;
}

const QuadratureRule& cached_laguerre_rule(int order) {
    static std::mutex mutex;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, laguerre_rule(order)).first;
    return it->second;
}

}  // namespace aerial
