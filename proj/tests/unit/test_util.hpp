#pragma once

#include <vector>

#include "aerial/channel.hpp"
#include "aerial/outage.hpp"
#include "aerial/rng.hpp"
#include "aerial/scenario.hpp"
#include "aerial/types.hpp"

namespace aerial::test {

/// Scenario from explicit stations and users (association included).
inline Scenario make_manual_scenario(SimConfig cfg, std::vector<BaseStation> bss,
                                     std::vector<User> users) {
    Scenario sc;
    sc.config = cfg;
    sc.bss = std::move(bss);
    sc.users = std::move(users);
    sc.serving_bs = associate_users(sc.bss, sc.users, sc.config);
    sc.served_users.assign(sc.bss.size(), {});
    for (int v = 0; v < sc.n_users(); ++v) sc.served_users[sc.serving_bs[v]].push_back(v);
    return sc;
}

/// Draws log-uniform values over [lo, hi] decades whose pairwise relative
/// separation stays above 5%, the generic-link regime the analytic pipeline
/// accepts (true ties are exercised by dedicated degenerate fixtures).
inline double separated_draw(std::mt19937_64& rng, std::vector<double>& taken, double lo,
                             double hi) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        double v = std::pow(10.0, uniform_range(rng, lo, hi));
        bool ok = true;
        for (double t : taken) ok = ok && std::abs(v - t) / std::max(v, t) > 0.05;
        if (ok) {
            taken.push_back(v);
            return v;
        }
    }
    taken.push_back(taken.empty() ? 1.0 : taken.back() * 1.1);
    return taken.back();
}

/// Random UE link with n interferers, means log-uniform over ~3 decades.
inline LinkSpec random_ue_link(std::mt19937_64& rng, int n_interferers,
                               double gamma_th = 0.1) {
    LinkSpec link;
    link.kind = UserKind::ue;
    link.gamma_th = gamma_th;
    std::vector<double> taken;
    link.serving_mean_snr = separated_draw(rng, taken, 0.5, 3.5);
    for (int i = 0; i < n_interferers; ++i)
        link.interferer_mean_snr.push_back(separated_draw(rng, taken, 0.0, 3.0));
    return link;
}

/// Random UAV link; LoS shares drawn uniformly so both components appear.
/// Redrawn until all implied pole locations (m/A, 1/B per link) are pairwise
/// separated by at least 5%.
inline LinkSpec random_uav_link(std::mt19937_64& rng, int n_interferers, int m,
                                double gamma_th = 0.1) {
    for (int attempt = 0; attempt < 256; ++attempt) {
        LinkSpec link;
        link.kind = UserKind::uav;
        link.gamma_th = gamma_th;
        link.nakagami_m = m;
        auto split = [&](double decade_lo, double decade_hi) -> std::pair<double, double> {
            double p_los = uniform_range(rng, 0.05, 0.95);
            double total = std::pow(10.0, uniform_range(rng, decade_lo, decade_hi));
            return {p_los * total, (1.0 - p_los) * total};
        };
        auto [a0, b0] = split(1.0, 3.5);
        link.serving_los_mean = a0;
        link.serving_nlos_mean = b0;
        for (int i = 0; i < n_interferers; ++i)
            link.interferer_los_nlos.push_back(split(0.0, 3.0));

        std::vector<double> poles = {m / link.serving_los_mean, 1.0 / link.serving_nlos_mean};
        for (const auto& [a, b] : link.interferer_los_nlos) {
            poles.push_back(m / a);
            poles.push_back(1.0 / b);
        }
        bool ok = true;
        for (std::size_t i = 0; i < poles.size(); ++i)
            for (std::size_t j = i + 1; j < poles.size(); ++j)
                ok = ok && std::abs(poles[i] - poles[j]) / std::max(poles[i], poles[j]) > 0.05;
        if (ok) return link;
    }
    throw std::runtime_error("random_uav_link: no separated draw found");
}

}  // namespace aerial::test
