#include "aerial/pole_expansion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "aerial/errors.hpp"

namespace aerial {

namespace {

constexpr double kMachineEps = std::numeric_limits<double>::epsilon();

double merge_tol(int m1, int m2, double merge_scale) {
    return merge_scale * std::pow(kMachineEps, 1.0 / (m1 + m2 + 1));
}

}  // namespace

std::vector<std::pair<PoleFactor, std::vector<int>>> merge_pole_factors(
    const std::vector<PoleFactor>& factors, double merge_scale) {
    std::vector<std::pair<PoleFactor, std::vector<int>>> items;
    items.reserve(factors.size());
    for (std::size_t i = 0; i < factors.size(); ++i) {
        const auto& f = factors[i];
        if (!(f.location > 0.0) || !std::isfinite(f.location))
            throw PreconditionError("pole expansion: pole location must be finite and > 0 (factor " +
                                    std::to_string(i) + ")");
        if (f.multiplicity < 1)
            throw PreconditionError("pole expansion: multiplicity must be >= 1 (factor " +
                                    std::to_string(i) + ")");
        items.push_back({f, {static_cast<int>(i)}});
    }
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first.location < b.first.location; });

    // Repeatedly merge the tightest adjacent pair below its threshold.
    bool changed = true;
    while (changed && items.size() > 1) {
        changed = false;
        double best_gap = std::numeric_limits<double>::infinity();
        std::size_t best = 0;
        for (std::size_t i = 0; i + 1 < items.size(); ++i) {
            const auto& a = items[i].first;
            const auto& b = items[i + 1].first;
            double gap = (b.location - a.location) / b.location;
            if (gap < merge_tol(a.multiplicity, b.multiplicity, merge_scale) && gap < best_gap) {
                best_gap = gap;
                best = i;
                changed = true;
            }
        }
        if (changed) {
            auto& a = items[best];
            auto& b = items[best + 1];
            int m = a.first.multiplicity + b.first.multiplicity;
            double loc = (a.first.multiplicity * a.first.location +
                          b.first.multiplicity * b.first.location) / m;
            a.first = PoleFactor{loc, m};
            a.second.insert(a.second.end(), b.second.begin(), b.second.end());
            items.erase(items.begin() + best + 1);
        }
    }
    return items;
}

PoleExpansion PoleExpansion::decompose(std::vector<PoleFactor> factors, double merge_scale) {
    PoleExpansion out;
    if (factors.empty()) return out;

    auto merged = merge_pole_factors(factors, merge_scale);
    int n = static_cast<int>(merged.size());
    int total_mult = 0;
    for (const auto& [f, _] : merged) total_mult += f.multiplicity;

    // Scale = multiplicity-weighted geometric mean of the pole locations.
    double log_scale = 0.0;
    for (const auto& [f, _] : merged) log_scale += f.multiplicity * std::log(f.location);
    out.scale_ = std::exp(log_scale / total_mult);

    std::vector<double> q(n);
    for (int i = 0; i < n; ++i) {
        out.poles_.push_back(merged[i].first);
        out.absorbed_.push_back(merged[i].second);
        q[i] = merged[i].first.location / out.scale_;
    }
    for (int i = 0; i + 1 < n; ++i) {
        if ((q[i + 1] - q[i]) / q[i + 1] < 1e-12)
            throw NumericError("pole expansion: poles " + std::to_string(i) + " and " +
                               std::to_string(i + 1) + " coincide after merging");
    }

    // In z = s/scale coordinates: R = K * prod (z - q_i)^{-m_i},
    // K = prod (-q_i)^{m_i}. Residue of order k at q_i is
    //   K / (m_i - k)! * d^{m_i-k}/dz^{m_i-k} [prod_{j!=i} (z - q_j)^{-m_j}] at q_i,
    // with derivatives from the logarithmic recurrence g' = g * L.
    double big_k = 1.0;
    for (int i = 0; i < n; ++i)
        for (int r = 0; r < merged[i].first.multiplicity; ++r) big_k *= -q[i];

    for (int i = 0; i < n; ++i) {
        int mi = merged[i].first.multiplicity;
        double g0 = 1.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int r = 0; r < merged[j].first.multiplicity; ++r) g0 /= (q[i] - q[j]);
        }
        std::vector<double> d = {g0};  // d[r] = g^{(r)}(q_i)
        auto l_deriv = [&](int r) {
            double fact = 1.0;
            for (int t = 2; t <= r; ++t) fact *= t;
            double sign = (r % 2 == 0) ? 1.0 : -1.0;
            double s = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                s += -merged[j].first.multiplicity * sign * fact /
                     std::pow(q[i] - q[j], r + 1);
            }
            return s;
        };
        for (int r = 0; r + 1 < mi; ++r) {
            double next = 0.0;
            double binom = 1.0;
            for (int t = 0; t <= r; ++t) {
                if (t > 0) binom = binom * (r - t + 1) / t;
                next += binom * d[t] * l_deriv(r - t);
            }
            d.push_back(next);
        }
        double fact = 1.0;
        for (int k = mi; k >= 1; --k) {
            int der = mi - k;
            if (der > 0) fact *= der;
            double rho = big_k * d[der] / fact;
            if (!std::isfinite(rho))
                throw NumericError("pole expansion: non-finite residue at pole " +
                                   std::to_string(i) + " order " + std::to_string(k));
            out.terms_.push_back({i, k, rho});
        }
    }
    return out;
}

double PoleExpansion::condition() const {
    double sum = 0.0;
    for (const auto& t : terms_) {
        double q = poles_[t.pole].location / scale_;
        sum += std::abs(t.residue_scaled) / std::pow(q, t.order);
    }
    return std::max(sum, 1.0);
}

double PoleExpansion::probe_point(double fraction) const {
    if (poles_.empty()) return -1.0;
    double min_pole = poles_.front().location;
    for (const auto& p : poles_) min_pole = std::min(min_pole, p.location);
    return -min_pole * fraction;
}

double PoleExpansion::exp_moment(double c) const {
    if (poles_.empty()) return 1.0;
    double cz = c / scale_;
    double sum = 0.0;
    for (const auto& t : terms_) {
        double q = poles_[t.pole].location / scale_;
        double sign = (t.order % 2 == 0) ? 1.0 : -1.0;
        sum += t.residue_scaled * sign / std::pow(cz + q, t.order);
    }
    return sum;
}

double PoleExpansion::exp_moment_product(double c) const {
    double prod = 1.0;
    for (const auto& p : poles_)
        prod /= std::pow(1.0 + c / p.location, p.multiplicity);
    return prod;
}

double PoleExpansion::evaluate_residue_sum(double s) const {
    if (poles_.empty()) return 1.0;
    double z = s / scale_;
    double sum = 0.0;
    for (const auto& t : terms_) {
        double q = poles_[t.pole].location / scale_;
        sum += t.residue_scaled / std::pow(z - q, t.order);
    }
    return sum;
}

double PoleExpansion::evaluate_product(double s) const {
    double prod = 1.0;
    for (const auto& p : poles_)
        prod /= std::pow(1.0 - s / p.location, p.multiplicity);
    return prod;
}

double PoleExpansion::reconstruction_error(double s) const {
    double prod = evaluate_product(s);
    double sum = evaluate_residue_sum(s);
    return std::abs(sum - prod) / std::abs(prod);
}

}  // namespace aerial
