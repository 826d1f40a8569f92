#pragma once

#include <utility>
#include <vector>

#include "aerial/types.hpp"

namespace aerial {

/// Default BS antenna height; only enters the 3D distance of aerial links.
constexpr double kBsHeightM = 25.0;

/// Minimum link distance; shorter separations are clamped to avoid the
/// log singularity.
constexpr double kMinDistanceM = 1.0;

enum class PathCondition { los, nlos };

/// Urban-macro path loss toward a ground UE: 15.3 + 37.6 log10(d2d).
double pathloss_ue_db(double d2d_m);

/// Aerial path loss. LoS: 28 + 22 log10(d3d) + 20 log10(f_c).
/// NLoS: -17.5 + (46 - 7 log10(h)) log10(d3d) + 20 log10(40 pi f_c / 3).
/// Valid for altitudes in [22.5, 300] m; outside that band it throws.
double pathloss_uav_db(double d3d_m, double h_uav_m, double f_c_ghz, PathCondition condition);

/// LoS probability of an aerial link: 1 above 100 m altitude; 1 within the
/// breakpoint distance d1; beyond it d1/d + exp(-d/p1) (1 - d1/d), with
/// p1 = 4300 log10(h) - 3800 and d1 = max(460 log10(h) - 700, 18).
double los_probability(double d2d_m, double h_uav_m);

/// Mean SNR of a Rayleigh link: p * 10^(-pl/10) / n0.
double mean_snr_ue(double p_w, double pl_db, double n0_w);

/// Mean SNRs (A, B) of the LoS and NLoS components of an aerial link.
std::pair<double, double> mean_snr_uav(double p_w, double pl_los_db, double pl_nlos_db,
                                       double p_los, double n0_w);

/// Everything derived for one (BS, user) pair. Gains are mean SNR per watt
/// of transmit power, so the serving mean at power P is P * gain.
struct LinkBudget {
    int bs = -1;
    int user = -1;
    UserKind kind = UserKind::ue;
    double d2d_m = 0.0;
    double d3d_m = 0.0;
    double pl_ue_db = 0.0;                        // UE links
    double pl_los_db = 0.0, pl_nlos_db = 0.0;     // UAV links
    double p_los = 0.0;                           // UAV links
    double gain_per_w = 0.0;                      // UE: mean SNR per watt
    double los_gain_per_w = 0.0;                  // UAV: A per watt
    double nlos_gain_per_w = 0.0;                 // UAV: B per watt
    double power_floor_w = 0.0;                   // minimum usable transmit power
};

/// Minimum transmit power below which reception fails even without
/// interference. UE: snr_th n0 / 10^(-PL/10);
/// UAV: snr_th n0 / (P_LoS 10^(-PL_LoS/10) + P_NLoS 10^(-PL_NLoS/10)).
double min_power_w(const LinkBudget& link, double snr_th, double n0_w);

LinkBudget make_link_budget(const BaseStation& bs, const User& user, const SimConfig& config);

/// Dense table of link budgets over all (BS, user) pairs.
class LinkBudgetTable {
public:
    static LinkBudgetTable build(const SimConfig& config,
                                 const std::vector<BaseStation>& bss,
                                 const std::vector<User>& users);
    static LinkBudgetTable build(const Scenario& scenario) {
        return build(scenario.config, scenario.bss, scenario.users);
    }

    const LinkBudget& at(int bs, int user) const { return cells_[bs * n_users_ + user]; }
    int n_bs() const { return n_bs_; }
    int n_users() const { return n_users_; }

private:
    int n_bs_ = 0;
    int n_users_ = 0;
    std::vector<LinkBudget> cells_;
};

}  // namespace aerial
