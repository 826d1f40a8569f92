#include "aerial/outage.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aerial/errors.hpp"
#include "aerial/pole_expansion.hpp"
#include "aerial/quadrature.hpp"
#include "aerial/rng.hpp"
#include "aerial/special_functions.hpp"

namespace aerial {

namespace {

constexpr double kClampTol = 1e-9;
constexpr double kConvergenceTol = 1e-6;
// Cancellation mass beyond this would push the assembled outage's absolute
// round-off past ~1e-8 and the order-doubling delta toward its 1e-6 bound;
// such expansions are rejected and callers use the product-MGF route.
constexpr double kConditionLimit = 1e7;

double finalize_probability(double p, const char* where) {
    if (!std::isfinite(p))
        throw NumericError(std::string(where) + ": non-finite outage value");
    if (p < -kClampTol || p > 1.0 + kClampTol)
        throw NumericError(std::string(where) + ": outage " + std::to_string(p) +
                           " leaves [0,1] beyond the clamp tolerance");
    return std::clamp(p, 0.0, 1.0);
}

void check_mean(double v, const char* name) {
    if (v < 0.0 || !std::isfinite(v))
        throw PreconditionError(std::string("LinkSpec.") + name + " must be finite and >= 0");
}

/// Serving-side decomposition terms with the evaluation route resolved.
struct ServingTerm {
    double pole = 0.0;      // physical location
    double pole_scaled = 0.0;
    int order = 1;
    double coeff = 0.0;     // rho (-1)^k / q^k, so that F(x) = 1 - sum coeff Q(k, pole x)
    bool exponential = false;  // pure NLoS-origin pole: closed-form route
};

std::vector<ServingTerm> serving_terms(const LinkSpec& link, double merge_scale) {
    std::vector<PoleFactor> factors;
    int nlos_index = -1;
    if (link.serving_los_mean > 0.0)
        factors.push_back({link.nakagami_m / link.serving_los_mean, link.nakagami_m});
    if (link.serving_nlos_mean > 0.0) {
        nlos_index = static_cast<int>(factors.size());
        factors.push_back({1.0 / link.serving_nlos_mean, 1});
    }
    if (factors.empty())
        throw PreconditionError("LinkSpec: serving LoS and NLoS means are both zero");

    auto expansion = PoleExpansion::decompose(factors, merge_scale);
    std::vector<ServingTerm> terms;
    for (const auto& t : expansion.terms()) {
        ServingTerm st;
        st.pole = expansion.poles()[t.pole].location;
        st.pole_scaled = st.pole / expansion.scale();
        st.order = t.order;
        double sign = (t.order % 2 == 0) ? 1.0 : -1.0;
        st.coeff = t.residue_scaled * sign / std::pow(st.pole_scaled, t.order);
        const auto& absorbed = expansion.absorbed(t.pole);
        st.exponential = absorbed.size() == 1 && absorbed[0] == nlos_index && t.order == 1;
        terms.push_back(st);
    }
    return terms;
}

PoleExpansion interference_expansion(const LinkSpec& link, double merge_scale) {
    std::vector<PoleFactor> factors;
    if (link.kind == UserKind::ue) {
        for (double mean : link.interferer_mean_snr)
            if (mean > 0.0) factors.push_back({1.0 / mean, 1});
    } else {
        for (const auto& [a, b] : link.interferer_los_nlos) {
            if (a > 0.0) factors.push_back({link.nakagami_m / a, link.nakagami_m});
            if (b > 0.0) factors.push_back({1.0 / b, 1});
        }
    }
    return PoleExpansion::decompose(factors, merge_scale);
}

/// sum over interference terms of
///   rho (-1)^K/(K-1)! * int_0^inf Q(k, c(1+u)) u^{K-1} e^{-P u} du,
/// each integral taken with the substitution x = (P+c) u, under which the
/// non-weight part of the integrand is the degree-(k-1 + K-1) polynomial
///   e^{-c} x^{K-1} sum_{r<k} (c (1 + x/(P+c)))^r / r!.
double gamma_cross_term_quad(const PoleExpansion& intf, int k, double c,
                             const QuadratureRule& rule) {
    double sigma = intf.scale();
    double total = 0.0;
    for (const auto& t : intf.terms()) {
        double p_phys = intf.poles()[t.pole].location;
        double rate = p_phys + c;
        double denom_scaled = rate / sigma;  // q + c/sigma, O(1)
        double quad = 0.0;
        for (int i = 0; i < rule.order; ++i) {
            double x = rule.nodes(i);
            double poly = 1.0;
            double term = 1.0;
            double z = c * (1.0 + x / rate);
            for (int r = 1; r < k; ++r) {
                term *= z / r;
                poly += term;
            }
            quad += rule.weights(i) * std::pow(x, t.order - 1) * poly;
        }
        double sign = (t.order % 2 == 0) ? 1.0 : -1.0;
        double coeff = t.residue_scaled * sign /
                       (std::exp(log_factorial(t.order - 1)) * std::pow(denom_scaled, t.order));
        total += coeff * quad;
    }
    return std::exp(-c) * total;
}

/// Same quantity with the integrals expanded binomially into factorials.
double gamma_cross_term_series(const PoleExpansion& intf, int k, double c) {
    double sigma = intf.scale();
    double total = 0.0;
    for (const auto& t : intf.terms()) {
        double p_phys = intf.poles()[t.pole].location;
        double rate = p_phys + c;
        double denom_scaled = rate / sigma;
        int K = t.order;
        // int (1+u)^r u^{K-1} e^{-rate u} du = sum_i C(r,i) (K-1+i)! / rate^{K+i}
        double inner = 0.0;
        double cr = 1.0;  // c^r / r!
        for (int r = 0; r < k; ++r) {
            if (r > 0) cr *= c / r;
            double binom = 1.0;
            double fact_ratio = 1.0;  // (K-1+i)! / (K-1)!
            double rate_i = 1.0;      // rate^i
            for (int i = 0; i <= r; ++i) {
                if (i > 0) {
                    binom = binom * (r - i + 1) / i;
                    fact_ratio *= (K - 1 + i);
                    rate_i *= rate;
                }
                inner += cr * binom * fact_ratio / rate_i;
            }
        }
        double sign = (K % 2 == 0) ? 1.0 : -1.0;
        total += t.residue_scaled * sign / std::pow(denom_scaled, K) * inner;
    }
    return std::exp(-c) * total;
}

double assemble_uav(const LinkSpec& link, const PoleExpansion& intf,
                    const std::vector<ServingTerm>& serving, const QuadratureRule* rule) {
    double out = 1.0;
    for (const auto& st : serving) {
        double c = st.pole * link.gamma_th;
        double expectation;
        if (intf.empty()) {
            expectation = regularized_upper_gamma_int(st.order, c);
        } else if (st.exponential) {
            expectation = std::exp(-c) * intf.exp_moment(c);
        } else if (rule != nullptr) {
            expectation = gamma_cross_term_quad(intf, st.order, c, *rule);
        } else {
            expectation = gamma_cross_term_series(intf, st.order, c);
        }
        out -= st.coeff * expectation;
    }
    return out;
}

}  // namespace

void LinkSpec::validate() const {
    if (!(gamma_th > 0.0) || !std::isfinite(gamma_th))
        throw PreconditionError("LinkSpec.gamma_th must be finite and > 0");
    if (kind == UserKind::ue) {
        check_mean(serving_mean_snr, "serving_mean_snr");
        if (serving_mean_snr == 0.0)
            throw PreconditionError("LinkSpec.serving_mean_snr must be > 0 for a UE link");
        for (double v : interferer_mean_snr) check_mean(v, "interferer_mean_snr");
    } else {
        if (nakagami_m < 1) throw PreconditionError("LinkSpec.nakagami_m must be >= 1");
        check_mean(serving_los_mean, "serving_los_mean");
        check_mean(serving_nlos_mean, "serving_nlos_mean");
        if (serving_los_mean == 0.0 && serving_nlos_mean == 0.0)
            throw PreconditionError("LinkSpec: serving LoS and NLoS means are both zero");
        for (const auto& [a, b] : interferer_los_nlos) {
            check_mean(a, "interferer_los_mean");
            check_mean(b, "interferer_nlos_mean");
        }
    }
}

void require_healthy(const PoleExpansion& expansion, const char* where) {
    if (expansion.condition() > kConditionLimit)
        throw NumericError(std::string(where) + ": pole expansion ill-conditioned (cancellation mass " +
                           std::to_string(expansion.condition()) +
                           "); clustered means would erase the result");
}

double outage_ue(const LinkSpec& link) {
    link.validate();
    if (link.kind != UserKind::ue) throw PreconditionError("outage_ue: link kind must be UE");
    double c = link.gamma_th / link.serving_mean_snr;
    auto intf = interference_expansion(link, 1.0);
    require_healthy(intf, "outage_ue");
    double p = 1.0 - std::exp(-c) * intf.exp_moment(c);
    return finalize_probability(p, "outage_ue");
}

double outage_uav(const LinkSpec& link, int laguerre_order, bool check_convergence,
                  double merge_scale) {
    link.validate();
    if (link.kind != UserKind::uav) throw PreconditionError("outage_uav: link kind must be UAV");
    auto serving = serving_terms(link, merge_scale);
    auto intf = interference_expansion(link, merge_scale);
    require_healthy(intf, "outage_uav");
    const QuadratureRule& rule = cached_laguerre_rule(laguerre_order);
    double p = assemble_uav(link, intf, serving, &rule);
    if (check_convergence && !intf.empty()) {
        const QuadratureRule& doubled = cached_laguerre_rule(std::min(2 * laguerre_order, 128));
        double p2 = assemble_uav(link, intf, serving, &doubled);
        if (std::abs(p - p2) > kConvergenceTol)
            throw NumericError("outage_uav: quadrature did not converge (order " +
                               std::to_string(laguerre_order) + " vs doubled: delta " +
                               std::to_string(std::abs(p - p2)) + ")");
    }
    return finalize_probability(p, "outage_uav");
}

namespace detail {

double outage_uav_series(const LinkSpec& link, double merge_scale) {
    link.validate();
    if (link.kind != UserKind::uav)
        throw PreconditionError("outage_uav_series: link kind must be UAV");
    auto serving = serving_terms(link, merge_scale);
    auto intf = interference_expansion(link, merge_scale);
    double p = assemble_uav(link, intf, serving, nullptr);
    return finalize_probability(p, "outage_uav_series");
}

double outage_uav_stable(const LinkSpec& link) {
    link.validate();
    if (link.kind != UserKind::uav)
        throw PreconditionError("outage_uav_stable: link kind must be UAV");
    auto serving = serving_terms(link, 1.0);

    // Interference as raw components: count kappa of i.i.d. exponentials with
    // scale theta (Gamma(m, A/m) -> m of A/m; the NLoS part -> one of B).
    struct Component { double kappa, theta; };
    std::vector<Component> comps;
    for (const auto& [a, b] : link.interferer_los_nlos) {
        if (a > 0.0) comps.push_back({static_cast<double>(link.nakagami_m), a / link.nakagami_m});
        if (b > 0.0) comps.push_back({1.0, b});
    }

    // mu_i(c) = E[I^i exp(-c I)] via mu_{n+1} = sum_t C(n,t) Lambda_{n-t} mu_t,
    // Lambda_r = r! sum_j kappa_j (theta_j/(1+c theta_j))^{r+1}. All terms
    // positive: no cancellation regardless of how the means cluster.
    auto tilted_moments = [&](double c, int top) {
        std::vector<double> mu(top + 1, 0.0);
        double m0 = 1.0;
        for (const auto& comp : comps) m0 /= std::pow(1.0 + c * comp.theta, comp.kappa);
        mu[0] = m0;
        auto lambda_r = [&](int r) {
            double fact = 1.0;
            for (int t = 2; t <= r; ++t) fact *= t;
            double s = 0.0;
            for (const auto& comp : comps)
                s += comp.kappa * std::pow(comp.theta / (1.0 + c * comp.theta), r + 1);
            return fact * s;
        };
        for (int n = 0; n < top; ++n) {
            double next = 0.0;
            double binom = 1.0;
            for (int t = n; t >= 0; --t) {
                next += binom * lambda_r(n - t) * mu[t];
                if (t > 0) binom = binom * t / (n - t + 1);
            }
            mu[n + 1] = next;
        }
        return mu;
    };

    double out = 1.0;
    for (const auto& st : serving) {
        double c = st.pole * link.gamma_th;
        // E[Q(k, c(1+I))] = exp(-c) sum_{r<k} c^r/r! sum_{i<=r} C(r,i) mu_i(c)
        auto mu = tilted_moments(c, st.order - 1);
        double sum = 0.0;
        double cr = 1.0;
        for (int r = 0; r < st.order; ++r) {
            if (r > 0) cr *= c / r;
            double binom = 1.0;
            double inner = 0.0;
            for (int i = 0; i <= r; ++i) {
                if (i > 0) binom = binom * (r - i + 1) / i;
                inner += binom * mu[i];
            }
            sum += cr * inner;
        }
        out -= st.coeff * std::exp(-c) * sum;
    }
    return finalize_probability(out, "outage_uav_stable");
}

double outage_ue_product(const LinkSpec& link) {
    link.validate();
    if (link.kind != UserKind::ue)
        throw PreconditionError("outage_ue_product: link kind must be UE");
    double c = link.gamma_th / link.serving_mean_snr;
    double prod = 1.0;
    for (double mean : link.interferer_mean_snr)
        if (mean > 0.0) prod /= 1.0 + c * mean;
    return finalize_probability(1.0 - std::exp(-c) * prod, "outage_ue_product");
}

}  // namespace detail

double outage_special_case(int case_id, const LinkSpec& link) {
    link.validate();
    if (link.kind != UserKind::uav)
        throw PreconditionError("outage_special_case: link kind must be UAV");

    auto as_rayleigh = [&](bool use_los) {
        LinkSpec ue;
        ue.kind = UserKind::ue;
        ue.gamma_th = link.gamma_th;
        ue.serving_mean_snr = use_los ? link.serving_los_mean : link.serving_nlos_mean;
        for (const auto& [a, b] : link.interferer_los_nlos)
            ue.interferer_mean_snr.push_back(use_los ? a : b);
        return outage_ue(ue);
    };
    auto require = [&](bool ok, const char* what) {
        if (!ok)
            throw PreconditionError("outage_special_case " + std::to_string(case_id) + ": " + what);
    };
    auto all_nlos = [&] {
        bool ok = link.serving_los_mean == 0.0;
        for (const auto& [a, b] : link.interferer_los_nlos) ok = ok && a == 0.0;
        return ok;
    };
    auto all_los = [&] {
        bool ok = link.serving_nlos_mean == 0.0;
        for (const auto& [a, b] : link.interferer_los_nlos) ok = ok && b == 0.0;
        return ok;
    };

    switch (case_id) {
        case 1:
            require(all_nlos(), "requires LoS components to vanish everywhere");
            return as_rayleigh(false);
        case 2:
            require(all_los(), "requires NLoS components to vanish everywhere");
            return detail::outage_uav_series(link);
        case 3:
            require(all_los() && link.nakagami_m == 1,
                    "requires NLoS components to vanish and m = 1");
            return as_rayleigh(true);
        case 4: {
            require(link.serving_los_mean == 0.0, "requires an NLoS-only serving link");
            double c = link.gamma_th / link.serving_nlos_mean;
            double prod = 1.0;
            for (const auto& [a, b] : link.interferer_los_nlos) {
                if (a > 0.0) prod /= std::pow(1.0 + c * a / link.nakagami_m, link.nakagami_m);
                if (b > 0.0) prod /= 1.0 + c * b;
            }
            return finalize_probability(1.0 - std::exp(-c) * prod, "outage_special_case 4");
        }
        default:
            throw PreconditionError("outage_special_case: case_id must lie in 1..4");
    }
}

McEstimate outage_mc(const LinkSpec& link, long draws, std::uint64_t seed) {
    link.validate();
    if (draws < 10000) throw PreconditionError("outage_mc: draws must be >= 1e4");

    constexpr long kBlock = 65536;
    long failures = 0;
    long done = 0;
    for (long block = 0; done < draws; ++block) {
        long n = std::min(kBlock, draws - done);
        std::mt19937_64 rng(sub_seed(seed, seed_tag::monte_carlo, static_cast<std::uint64_t>(block)));
        for (long i = 0; i < n; ++i) {
            double serving, interference = 0.0;
            if (link.kind == UserKind::ue) {
                serving = sample_exponential(rng, link.serving_mean_snr);
                for (double mean : link.interferer_mean_snr)
                    if (mean > 0.0) interference += sample_exponential(rng, mean);
            } else {
                serving = 0.0;
                if (link.serving_los_mean > 0.0)
                    serving += sample_gamma_int(rng, link.nakagami_m, link.serving_los_mean);
                if (link.serving_nlos_mean > 0.0)
                    serving += sample_exponential(rng, link.serving_nlos_mean);
                for (const auto& [a, b] : link.interferer_los_nlos) {
                    if (a > 0.0) interference += sample_gamma_int(rng, link.nakagami_m, a);
                    if (b > 0.0) interference += sample_exponential(rng, b);
                }
            }
            if (serving <= link.gamma_th * (1.0 + interference)) ++failures;
        }
        done += n;
    }
    McEstimate est;
    est.outage = static_cast<double>(failures) / static_cast<double>(draws);
    est.std_error = std::sqrt(est.outage * (1.0 - est.outage) / static_cast<double>(draws));
    return est;
}

}  // namespace aerial
