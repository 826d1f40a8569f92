#include "aerial/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "aerial/errors.hpp"

namespace aerial {

namespace {
constexpr double kPi = 3.14159265358979323846;

double db_to_linear(double db) { return std::pow(10.0, -db / 10.0); }
}  // namespace

double pathloss_ue_db(double d2d_m) {
    double d = std::max(d2d_m, kMinDistanceM);
    return 15.3 + 37.6 * std::log10(d);
}

double pathloss_uav_db(double d3d_m, double h_uav_m, double f_c_ghz, PathCondition condition) {
    if (h_uav_m < 22.5 || h_uav_m > 300.0)
        throw PreconditionError("pathloss_uav_db: altitude " + std::to_string(h_uav_m) +
                                " m outside the validity band [22.5, 300]");
    double d = std::max(d3d_m, kMinDistanceM);
    if (condition == PathCondition::los)
        return 28.0 + 22.0 * std::log10(d) + 20.0 * std::log10(f_c_ghz);
    return -17.5 + (46.0 - 7.0 * std::log10(h_uav_m)) * std::log10(d) +
           20.0 * std::log10(40.0 * kPi * f_c_ghz / 3.0);
}

double los_probability(double d2d_m, double h_uav_m) {
    if (h_uav_m < 22.5)
        throw PreconditionError("los_probability: altitude below 22.5 m");
    if (h_uav_m > 100.0) return 1.0;
    double p1 = 4300.0 * std::log10(h_uav_m) - 3800.0;
    double d1 = std::max(460.0 * std::log10(h_uav_m) - 700.0, 18.0);
    if (d2d_m <= d1) return 1.0;
    return d1 / d2d_m + std::exp(-d2d_m / p1) * (1.0 - d1 / d2d_m);
}

double mean_snr_ue(double p_w, double pl_db, double n0_w) {
    return p_w * db_to_linear(pl_db) / n0_w;
}

std::pair<double, double> mean_snr_uav(double p_w, double pl_los_db, double pl_nlos_db,
                                       double p_los, double n0_w) {
    double a = p_los * p_w * db_to_linear(pl_los_db) / n0_w;
    double b = (1.0 - p_los) * p_w * db_to_linear(pl_nlos_db) / n0_w;
    return {a, b};
}

double min_power_w(const LinkBudget& link, double snr_th, double n0_w) {
    if (link.kind == UserKind::ue)
        return snr_th * n0_w / db_to_linear(link.pl_ue_db);
    double denom = link.p_los * db_to_linear(link.pl_los_db) +
                   (1.0 - link.p_los) * db_to_linear(link.pl_nlos_db);
    return snr_th * n0_w / denom;
}

LinkBudget make_link_budget(const BaseStation& bs, const User& user, const SimConfig& config) {
    LinkBudget lb;
    lb.bs = bs.id;
    lb.user = user.id;
    lb.kind = user.kind;
    double dx = bs.x_m - user.x_m;
    double dy = bs.y_m - user.y_m;
    lb.d2d_m = std::max(std::sqrt(dx * dx + dy * dy), kMinDistanceM);
    if (user.kind == UserKind::ue) {
        lb.d3d_m = lb.d2d_m;
        lb.pl_ue_db = pathloss_ue_db(lb.d2d_m);
        lb.gain_per_w = mean_snr_ue(1.0, lb.pl_ue_db, config.n0_w);
    } else {
        double dz = user.altitude_m - bs.height_m;
        lb.d3d_m = std::max(std::sqrt(lb.d2d_m * lb.d2d_m + dz * dz), kMinDistanceM);
        lb.pl_los_db = pathloss_uav_db(lb.d3d_m, user.altitude_m, config.f_c_ghz, PathCondition::los);
        lb.pl_nlos_db = pathloss_uav_db(lb.d3d_m, user.altitude_m, config.f_c_ghz, PathCondition::nlos);
        lb.p_los = los_probability(lb.d2d_m, user.altitude_m);
        auto [a, b] = mean_snr_uav(1.0, lb.pl_los_db, lb.pl_nlos_db, lb.p_los, config.n0_w);
        lb.los_gain_per_w = a;
        lb.nlos_gain_per_w = b;
    }
    lb.power_floor_w = min_power_w(lb, config.snr_th, config.n0_w);
    return lb;
}

LinkBudgetTable LinkBudgetTable::build(const SimConfig& config,
                                       const std::vector<BaseStation>& bss,
                                       const std::vector<User>& users) {
    LinkBudgetTable table;
    table.n_bs_ = static_cast<int>(bss.size());
    table.n_users_ = static_cast<int>(users.size());
    table.cells_.reserve(bss.size() * users.size());
    for (const auto& bs : bss)
        for (const auto& user : users)
            table.cells_.push_back(make_link_budget(bs, user, config));
    return table;
}

}  // namespace aerial
