#include "aerial/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "aerial/errors.hpp"
#include "aerial/rng.hpp"

namespace aerial {

namespace {
// 99th percentile of |N(0,1)|: erf(z/sqrt(2)) = 0.99.
constexpr double kHalfNormal99 = 2.5758293035489004;
}  // namespace

std::vector<VirtualUser> inject_virtual_users(const Scenario& scenario,
                                              const LinkBudgetTable& budgets,
                                              std::uint64_t seed) {
    const SimConfig& cfg = scenario.config;
    std::mt19937_64 rng(sub_seed(seed, seed_tag::virtual_users));
    std::vector<VirtualUser> virtuals;
    int next_id = scenario.n_users();

    // Network-wide fallback anchor for BSs that serve nobody.
    double global_min = cfg.p_max_w;
    for (int bs = 0; bs < scenario.n_bs(); ++bs)
        for (int v : scenario.served_users[bs])
            global_min = std::min(global_min, budgets.at(bs, v).power_floor_w);

    for (int bs = 0; bs < scenario.n_bs(); ++bs) {
        int missing = cfg.n_carriers - static_cast<int>(scenario.served_users[bs].size());
        if (missing <= 0) continue;
        double anchor = cfg.p_max_w;
        for (int v : scenario.served_users[bs])
            anchor = std::min(anchor, budgets.at(bs, v).power_floor_w);
        if (scenario.served_users[bs].empty()) anchor = global_min;
        double sigma = std::max((cfg.p_max_w - anchor) / kHalfNormal99, 0.0);
        for (int i = 0; i < missing; ++i) {
            VirtualUser vu;
            vu.id = next_id++;
            vu.serving_bs = bs;
            vu.power_floor_w =
                std::clamp(anchor + sigma * sample_half_normal(rng), anchor, cfg.p_max_w);
            vu.ue_like = (i % 2 == 0);
            virtuals.push_back(vu);
        }
    }
    return virtuals;
}

PreferenceProfile build_preferences(const Scenario& scenario, const LinkBudgetTable& budgets,
                                    const std::vector<VirtualUser>& virtuals) {
    const int n_real = scenario.n_users();
    const int n_carriers = scenario.config.n_carriers;
    PreferenceProfile prof;
    prof.n_real = n_real;
    prof.carrier_order.resize(n_real + virtuals.size());
    prof.floor_w.resize(n_real + virtuals.size());
    prof.serving_bs.resize(n_real + virtuals.size());

    auto ascending = [&] {
        std::vector<int> order(n_carriers);
        std::iota(order.begin(), order.end(), 0);
        return order;
    };
    auto descending = [&] {
        auto order = ascending();
        std::reverse(order.begin(), order.end());
        return order;
    };

    for (int v = 0; v < n_real; ++v) {
        int bs = scenario.serving_bs[v];
        prof.serving_bs[v] = bs;
        prof.floor_w[v] = budgets.at(bs, v).power_floor_w;
        prof.carrier_order[v] =
            scenario.users[v].kind == UserKind::ue ? ascending() : descending();
    }
    for (const auto& vu : virtuals) {
        prof.serving_bs[vu.id] = vu.serving_bs;
        prof.floor_w[vu.id] = vu.power_floor_w;
        prof.carrier_order[vu.id] = vu.ue_like ? ascending() : descending();
    }
    return prof;
}

Assignment run_matching_with_virtuals(const Scenario& scenario, const LinkBudgetTable& budgets,
                                      const std::vector<VirtualUser>& virtuals) {
    const int n_real = scenario.n_users();
    const int n_total = n_real + static_cast<int>(virtuals.size());
    const int n_carriers = scenario.config.n_carriers;
    const int n_bs = scenario.n_bs();
    PreferenceProfile prof = build_preferences(scenario, budgets, virtuals);

    std::vector<int> next_choice(n_total, 0);        // index into carrier_order
    std::vector<int> held(n_total, -1);              // carrier currently held
    // holder[c][bs]: participant of this BS currently held by carrier c.
    std::vector<std::vector<int>> holder(n_carriers, std::vector<int>(n_bs, -1));

    std::vector<int> unplaced(n_total);
    std::iota(unplaced.begin(), unplaced.end(), 0);

    long rounds = 0;
    const long guard = static_cast<long>(n_total) * n_carriers + 1;
    while (!unplaced.empty()) {
        if (++rounds > guard)
            throw Error("run_matching: round guard exceeded; matching did not terminate");
        std::vector<int> rejected;
        for (int v : unplaced) {
            if (next_choice[v] >= n_carriers)
                throw Error("run_matching: participant " + std::to_string(v) +
                            " exhausted all carriers");
            int c = prof.carrier_order[v][next_choice[v]++];
            int bs = prof.serving_bs[v];
            int& slot = holder[c][bs];
            if (slot < 0) {
                slot = v;
                held[v] = c;
            } else if (prof.carrier_prefers(v, slot)) {
                held[slot] = -1;
                rejected.push_back(slot);
                slot = v;
                held[v] = c;
            } else {
                rejected.push_back(v);
            }
        }
        unplaced = std::move(rejected);
    }

    Assignment result;
    result.users_on_carrier.resize(n_carriers);
    result.carrier_of.assign(n_real, -1);
    for (int v = 0; v < n_real; ++v) {
        result.carrier_of[v] = held[v];
        result.users_on_carrier[held[v]].push_back(v);
    }
    for (auto& users : result.users_on_carrier) std::sort(users.begin(), users.end());
    return result;
}

Assignment run_matching(const Scenario& scenario, const LinkBudgetTable& budgets,
                        std::uint64_t seed) {
    auto virtuals = inject_virtual_users(scenario, budgets, seed);
    return run_matching_with_virtuals(scenario, budgets, virtuals);
}

std::vector<BlockingPair> audit_matching_stability(const Scenario& scenario,
                                                   const LinkBudgetTable& budgets,
                                                   const Assignment& matching) {
    PreferenceProfile prof = build_preferences(scenario, budgets, {});
    std::vector<BlockingPair> blocking;
    for (int bs = 0; bs < scenario.n_bs(); ++bs) {
        const auto& mine = scenario.served_users[bs];
        for (int v1 : mine) {
            int c1 = matching.carrier_of[v1];
            for (int v2 : mine) {
                if (v1 == v2) continue;
                int c2 = matching.carrier_of[v2];
                if (c1 == c2) continue;
                bool v1_wants_c2 = prof.rank_of(v1, c2) < prof.rank_of(v1, c1);
                bool c2_wants_v1 = prof.carrier_prefers(v1, v2);
                if (v1_wants_c2 && c2_wants_v1)
                    blocking.push_back({bs, v1, v2, c1, c2});
            }
        }
    }
    return blocking;
}

}  // namespace aerial
