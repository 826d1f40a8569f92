#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerial/errors.hpp"

namespace aerial {

enum class UserKind { ue, uav, virtual_user };

inline const char* to_string(UserKind k) {
    switch (k) {
        case UserKind::ue: return "UE";
        case UserKind::uav: return "UAV";
        default: return "VIRTUAL";
    }
}

/// Simulation constants. Defaults reproduce the reference parameter set:
/// 1 km^2 area, 10 BSs with 11 sub-carriers, 2 GHz carrier, -130 dBm noise,
/// Nakagami m = 2, 20 W power cap with 0.1 W steps, outage threshold 0.1.
struct SimConfig {
    double area_width_m = 1000.0;
    double area_height_m = 1000.0;
    int n_bs = 10;
    int n_carriers = 11;
    int n_ues = 50;
    int n_uavs = 50;
    double uav_alt_min_m = 22.5;
    double uav_alt_max_m = 300.0;
    double p_max_w = 20.0;
    double p_stp_w = 0.1;
    double f_c_ghz = 2.0;
    double n0_w = 1e-16;           // -130 dBm
    int nakagami_m = 2;
    double gamma_th = 0.1;         // linear SINR threshold
    double p_out_th = 0.1;
    double snr_th = 0.1;           // linear receiver-sensitivity threshold
    int laguerre_order = 32;
    long mc_draws = 1000000;
    std::uint64_t seed = 1;

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0)) throw ConfigError(std::string("SimConfig.") + name + " must be > 0");
        };
        positive(area_width_m, "area_width_m");
        positive(area_height_m, "area_height_m");
        positive(p_max_w, "p_max_w");
        positive(p_stp_w, "p_stp_w");
        positive(f_c_ghz, "f_c_ghz");
        positive(n0_w, "n0_w");
        positive(gamma_th, "gamma_th");
        positive(snr_th, "snr_th");
        positive(uav_alt_min_m, "uav_alt_min_m");
        if (n_bs < 1) throw ConfigError("SimConfig.n_bs must be >= 1");
        if (n_carriers < 1) throw ConfigError("SimConfig.n_carriers must be >= 1");
        if (n_ues < 0) throw ConfigError("SimConfig.n_ues must be >= 0");
        if (n_uavs < 0) throw ConfigError("SimConfig.n_uavs must be >= 0");
        if (nakagami_m < 1) throw ConfigError("SimConfig.nakagami_m must be >= 1");
        if (!(p_stp_w < p_max_w)) throw ConfigError("SimConfig.p_stp_w must be < p_max_w");
        if (!(p_out_th > 0.0 && p_out_th < 1.0))
            throw ConfigError("SimConfig.p_out_th must lie in (0, 1)");
        if (!(uav_alt_min_m <= uav_alt_max_m))
            throw ConfigError("SimConfig.uav_alt_min_m must be <= uav_alt_max_m");
        if (uav_alt_min_m < 22.5 || uav_alt_max_m > 300.0)
            throw ConfigError("SimConfig UAV altitude range must lie within [22.5, 300] m");
        if (laguerre_order < 1 || laguerre_order > 128)
            throw ConfigError("SimConfig.laguerre_order must lie in [1, 128]");
        if (mc_draws < 10000) throw ConfigError("SimConfig.mc_draws must be >= 10000");
    }
};

struct BaseStation {
    int id = -1;
    double x_m = 0.0;
    double y_m = 0.0;
    double height_m = 25.0;
};

struct User {
    int id = -1;
    UserKind kind = UserKind::ue;
    double x_m = 0.0;
    double y_m = 0.0;
    double altitude_m = 0.0;
};

/// Immutable world state: stations, users and the user->BS association.
struct Scenario {
    SimConfig config;
    std::vector<BaseStation> bss;
    std::vector<User> users;
    std::vector<int> serving_bs;                 // per user id
    std::vector<std::vector<int>> served_users;  // per BS id (V(u), ascending)

    int n_users() const { return static_cast<int>(users.size()); }
    int n_bs() const { return static_cast<int>(bss.size()); }
};

/// A feasible sub-carrier assignment: per carrier the set of users on it,
/// and per user its carrier. At most one user per (carrier, BS) pair.
struct Assignment {
    std::vector<std::vector<int>> users_on_carrier;  // per carrier, ascending user ids
    std::vector<int> carrier_of;                     // per user id

    int n_carriers() const { return static_cast<int>(users_on_carrier.size()); }
};

struct ObjectiveReport {
    double max_outage = 0.0;
    double mean_outage = 0.0;
    std::vector<std::pair<int, double>> per_user;  // (user id, outage)
};

}  // namespace aerial
