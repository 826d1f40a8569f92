#include "aerial/power.hpp"

#include <cmath>
#include <string>

#include "aerial/errors.hpp"

namespace aerial {

LinkSpec build_link_spec(const Scenario& scenario, const LinkBudgetTable& budgets, int user,
                         const std::vector<int>& members, const Eigen::VectorXd& p_w,
                         double gamma_th) {
    const User& u = scenario.users[user];
    int serving = scenario.serving_bs[user];
    double p_serv = p_w(serving);
    if (!(p_serv > 0.0))
        throw PreconditionError("build_link_spec: serving BS " + std::to_string(serving) +
                                " has no transmit power on the carrier");

    LinkSpec spec;
    spec.kind = u.kind;
    spec.gamma_th = gamma_th;
    spec.nakagami_m = scenario.config.nakagami_m;

    const LinkBudget& own = budgets.at(serving, user);
    if (u.kind == UserKind::ue)
        spec.serving_mean_snr = p_serv * own.gain_per_w;
    else {
        spec.serving_los_mean = p_serv * own.los_gain_per_w;
        spec.serving_nlos_mean = p_serv * own.nlos_gain_per_w;
    }
    for (int other : members) {
        if (other == user) continue;
        int bs = scenario.serving_bs[other];
        double p = p_w(bs);
        if (!(p > 0.0)) continue;
        const LinkBudget& lb = budgets.at(bs, user);
        if (u.kind == UserKind::ue)
            spec.interferer_mean_snr.push_back(p * lb.gain_per_w);
        else
            spec.interferer_los_nlos.push_back({p * lb.los_gain_per_w, p * lb.nlos_gain_per_w});
    }
    return spec;
}

double user_outage(const Scenario& scenario, const LinkBudgetTable& budgets, int user,
                   const std::vector<int>& members, const Eigen::VectorXd& p_w, double gamma_th) {
    LinkSpec spec = build_link_spec(scenario, budgets, user, members, p_w, gamma_th);
    // Scenario links routinely cluster many interferer means inside one
    // decade, where the residue pipeline is ill-conditioned and refuses.
    // The product-MGF route evaluates the same outage integral without a
    // decomposition, stays exact for clustered means, and is what the game
    // loops hammer millions of times.
    if (spec.kind == UserKind::ue) return detail::outage_ue_product(spec);
    return detail::outage_uav_stable(spec);
}

PowerResult optimize_carrier_power(const Scenario& scenario, const LinkBudgetTable& budgets,
                                   const std::vector<int>& members) {
    const SimConfig& cfg = scenario.config;
    int n_bs = scenario.n_bs();

    // serving BS -> member, ascending BS id; at most one per BS on a carrier.
    std::vector<int> member_of_bs(n_bs, -1);
    for (int v : members) {
        int bs = scenario.serving_bs[v];
        if (member_of_bs[bs] >= 0)
            throw PreconditionError("optimize_carrier_power: BS " + std::to_string(bs) +
                                    " serves two users on one carrier");
        member_of_bs[bs] = v;
    }

    std::vector<long> steps(n_bs, 0);
    // Largest step count keeping the power strictly above the user's floor.
    std::vector<long> max_steps(n_bs, 0);
    for (int bs = 0; bs < n_bs; ++bs) {
        if (member_of_bs[bs] < 0) continue;
        double floor = budgets.at(bs, member_of_bs[bs]).power_floor_w;
        long t = static_cast<long>(std::floor((cfg.p_max_w - floor) / cfg.p_stp_w));
        while (t > 0 && !(cfg.p_max_w - t * cfg.p_stp_w > floor)) --t;
        while (cfg.p_max_w - (t + 1) * cfg.p_stp_w > floor) ++t;
        max_steps[bs] = std::max<long>(t, 0);
    }

    Eigen::VectorXd p = Eigen::VectorXd::Zero(n_bs);
    auto refresh = [&] {
        for (int bs = 0; bs < n_bs; ++bs)
            p(bs) = member_of_bs[bs] >= 0 ? cfg.p_max_w - steps[bs] * cfg.p_stp_w : 0.0;
    };
    refresh();

    long sweep_guard = static_cast<long>(n_bs * (cfg.p_max_w / cfg.p_stp_w + 1.0)) + 2;
    int sweeps = 0;
    while (true) {
        ++sweeps;
        bool changed = false;
        for (int bs = 0; bs < n_bs; ++bs) {
            int v = member_of_bs[bs];
            if (v < 0) continue;
            long room = max_steps[bs] - steps[bs];
            if (room <= 0) continue;
            auto admissible = [&](long extra) {
                Eigen::VectorXd probe = p;
                probe(bs) = cfg.p_max_w - (steps[bs] + extra) * cfg.p_stp_w;
                return user_outage(scenario, budgets, v, members, probe, cfg.gamma_th) <=
                       cfg.p_out_th;
            };
            // Last admissible step count in [0, room]; outage grows as the
            // serving power drops, so the admissible set is a prefix.
            long take = 0;
            if (admissible(room)) {
                take = room;
            } else {
                long lo = 0, hi = room;  // admissible(lo), !admissible(hi)
                while (hi - lo > 1) {
                    long mid = lo + (hi - lo) / 2;
                    (admissible(mid) ? lo : hi) = mid;
                }
                take = lo;
            }
            if (take > 0) {
                steps[bs] += take;
                refresh();
                changed = true;
            }
        }
        if (!changed) break;
        if (sweeps > sweep_guard)
            throw NumericError("optimize_carrier_power: sweep guard exceeded");
    }

    return {p, sweeps};
}

}  // namespace aerial
