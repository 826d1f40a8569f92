#pragma once

#include <cstdint>
#include <vector>

#include "aerial/channel.hpp"
#include "aerial/types.hpp"

namespace aerial {

/// Placeholder user padding a BS to the full carrier count during matching.
/// Carries only a power floor, a serving BS, and which carrier end it walks
/// from; removed from the result once the matching is done.
struct VirtualUser {
    int id = -1;          // >= number of real users
    int serving_bs = -1;
    double power_floor_w = 0.0;
    bool ue_like = true;  // walks carriers from the low end (like a UE)
};

/// Pads every BS to exactly C users. Floors are drawn from a half-normal
/// law anchored at the smallest floor observed at the BS, scaled so the
/// 99th percentile reaches the power cap (mass biased toward large floors,
/// which makes virtual users the least attractive applicants), then clamped
/// to [anchor, p_max]. Kinds alternate UE-like / UAV-like per BS.
std::vector<VirtualUser> inject_virtual_users(const Scenario& scenario,
                                              const LinkBudgetTable& budgets,
                                              std::uint64_t seed);

/// Preference structures of the matching game. Users rank carriers by
/// index (UEs ascending, UAVs descending); carriers rank same-BS applicants
/// by ascending power floor, ties broken by ascending user id.
struct PreferenceProfile {
    std::vector<std::vector<int>> carrier_order;  // per participant id
    std::vector<double> floor_w;                  // per participant id
    std::vector<int> serving_bs;                  // per participant id
    int n_real = 0;

    bool carrier_prefers(int candidate, int over) const {
        if (floor_w[candidate] != floor_w[over]) return floor_w[candidate] < floor_w[over];
        return candidate < over;
    }
    /// Position of carrier c in participant v's order (0 = most preferred).
    int rank_of(int v, int c) const {
        const auto& order = carrier_order[v];
        for (std::size_t i = 0; i < order.size(); ++i)
            if (order[i] == c) return static_cast<int>(i);
        return static_cast<int>(order.size());
    }
};

PreferenceProfile build_preferences(const Scenario& scenario, const LinkBudgetTable& budgets,
                                    const std::vector<VirtualUser>& virtuals);

/// Deferred acceptance over the padded instance: each round every unplaced
/// participant applies to its best carrier not yet tried; each carrier keeps,
/// per BS, the best-floored applicant among holder and newcomers. Terminates
/// when everyone holds a carrier; virtual users are then stripped from the
/// returned assignment.
Assignment run_matching(const Scenario& scenario, const LinkBudgetTable& budgets,
                        std::uint64_t seed);

/// Same, with the virtual users supplied by the caller.
Assignment run_matching_with_virtuals(const Scenario& scenario, const LinkBudgetTable& budgets,
                                      const std::vector<VirtualUser>& virtuals);

struct BlockingPair {
    int bs = -1;
    int v1 = -1, v2 = -1;  // same-BS users; v1 would rather hold v2's carrier
    int c1 = -1, c2 = -1;
};

/// Exhaustive instability scan: every same-BS ordered pair (v1, v2) such
/// that v1 strictly prefers v2's carrier and that carrier strictly prefers
/// v1 over v2. Empty result means the matching is stable.
std::vector<BlockingPair> audit_matching_stability(const Scenario& scenario,
                                                   const LinkBudgetTable& budgets,
                                                   const Assignment& matching);

}  // namespace aerial
