#include "aerial/scenario.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aerial/errors.hpp"
#include "aerial/rng.hpp"

namespace aerial {

using nlohmann::json;

std::vector<int> associate_users(const std::vector<BaseStation>& bss,
                                 const std::vector<User>& users,
                                 const SimConfig& config) {
    const int n_bs = static_cast<int>(bss.size());
    const int n_users = static_cast<int>(users.size());
    const long capacity = static_cast<long>(n_bs) * config.n_carriers;
    if (n_users > capacity)
        throw InfeasibleError("cannot serve " + std::to_string(n_users) + " users with " +
                              std::to_string(n_bs) + " BSs of " +
                              std::to_string(config.n_carriers) + " sub-carriers each");

    std::vector<std::vector<double>> floor(n_bs, std::vector<double>(n_users));
    for (int b = 0; b < n_bs; ++b)
        for (int v = 0; v < n_users; ++v)
            floor[b][v] = make_link_budget(bss[b], users[v], config).power_floor_w;

    // Everyone starts at the BS with the smallest power floor (lowest id on
    // ties). Random layouts routinely overload one station far beyond the
    // carrier quota, so users are then displaced: at each step the user
    // whose move to its best under-quota station costs the least extra
    // floor leaves the most overloaded station. Receivers never exceed the
    // quota and full stations never shrink, so every displaced user still
    // holds the best floor among stations that end with spare capacity.
    std::vector<int> serving(n_users, -1);
    std::vector<int> load(n_bs, 0);
    for (int v = 0; v < n_users; ++v) {
        int best = 0;
        for (int b = 1; b < n_bs; ++b)
            if (floor[b][v] < floor[best][v]) best = b;
        serving[v] = best;
        ++load[best];
    }
    while (true) {
        int over = -1;
        for (int b = 0; b < n_bs; ++b)
            if (load[b] > config.n_carriers && (over < 0 || load[b] > load[over])) over = b;
        if (over < 0) break;
        int move_user = -1, move_to = -1;
        double best_delta = 0.0;
        for (int v = 0; v < n_users; ++v) {
            if (serving[v] != over) continue;
            for (int b = 0; b < n_bs; ++b) {
                if (load[b] >= config.n_carriers) continue;
                double delta = floor[b][v] - floor[over][v];
                if (move_user < 0 || delta < best_delta ||
                    (delta == best_delta && (v < move_user || (v == move_user && b < move_to)))) {
                    move_user = v;
                    move_to = b;
                    best_delta = delta;
                }
            }
        }
        if (move_user < 0)
            throw InfeasibleError("association deadlock at BS " + std::to_string(over));
        serving[move_user] = move_to;
        --load[over];
        ++load[move_to];
    }
    return serving;
}

namespace {

void finalize_association(Scenario& sc) {
    sc.serving_bs = associate_users(sc.bss, sc.users, sc.config);
    sc.served_users.assign(sc.bss.size(), {});
    for (int v = 0; v < sc.n_users(); ++v) sc.served_users[sc.serving_bs[v]].push_back(v);
    for (const auto& bs : sc.bss) {
        if (static_cast<int>(sc.served_users[bs.id].size()) > sc.config.n_carriers)
            throw InfeasibleError("BS " + std::to_string(bs.id) + " serves " +
                                  std::to_string(sc.served_users[bs.id].size()) +
                                  " users but only " + std::to_string(sc.config.n_carriers) +
                                  " sub-carriers exist");
    }
}

}  // namespace

Scenario generate_scenario(const SimConfig& config, std::uint64_t seed) {
    config.validate();
    Scenario sc;
    sc.config = config;
    std::mt19937_64 rng(sub_seed(seed, seed_tag::placement));

    sc.bss.reserve(config.n_bs);
    for (int b = 0; b < config.n_bs; ++b) {
        BaseStation bs;
        bs.id = b;
        bs.x_m = uniform_range(rng, 0.0, config.area_width_m);
        bs.y_m = uniform_range(rng, 0.0, config.area_height_m);
        bs.height_m = kBsHeightM;
        sc.bss.push_back(bs);
    }
    sc.users.reserve(config.n_ues + config.n_uavs);
    for (int i = 0; i < config.n_ues + config.n_uavs; ++i) {
        User u;
        u.id = i;
        u.kind = i < config.n_ues ? UserKind::ue : UserKind::uav;
        u.x_m = uniform_range(rng, 0.0, config.area_width_m);
        u.y_m = uniform_range(rng, 0.0, config.area_height_m);
        u.altitude_m = u.kind == UserKind::uav
                           ? uniform_range(rng, config.uav_alt_min_m, config.uav_alt_max_m)
                           : 0.0;
        sc.users.push_back(u);
    }
    finalize_association(sc);
    return sc;
}

std::pair<Scenario, int> generate_feasible_scenario(const SimConfig& config, std::uint64_t seed,
                                                    int max_redraws) {
    for (int attempt = 0; attempt < max_redraws; ++attempt) {
        try {
            return {generate_scenario(config, sub_seed(seed, seed_tag::redraw, attempt)), attempt};
        } catch (const InfeasibleError&) {
            continue;
        }
    }
    throw InfeasibleError("no feasible scenario after " + std::to_string(max_redraws) +
                          " redraws; reduce users or add carriers");
}

namespace {

json config_to_json_obj(const SimConfig& c) {
    return json{{"area_width_m", c.area_width_m},
                {"area_height_m", c.area_height_m},
                {"n_bs", c.n_bs},
                {"n_carriers", c.n_carriers},
                {"n_ues", c.n_ues},
                {"n_uavs", c.n_uavs},
                {"uav_alt_min_m", c.uav_alt_min_m},
                {"uav_alt_max_m", c.uav_alt_max_m},
                {"p_max_w", c.p_max_w},
                {"p_stp_w", c.p_stp_w},
                {"f_c_ghz", c.f_c_ghz},
                {"n0_w", c.n0_w},
                {"nakagami_m", c.nakagami_m},
                {"gamma_th", c.gamma_th},
                {"p_out_th", c.p_out_th},
                {"snr_th", c.snr_th},
                {"laguerre_order", c.laguerre_order},
                {"mc_draws", c.mc_draws},
                {"seed", c.seed}};
}

template <typename T>
void read_field(const json& j, const char* key, T& out) {
    if (j.contains(key)) {
        try {
            out = j.at(key).get<T>();
        } catch (const json::exception& e) {
            throw ParseError(std::string("config field '") + key + "': " + e.what());
        }
    }
}

SimConfig config_from_json_obj(const json& j) {
    static const char* known[] = {
        "area_width_m", "area_height_m", "n_bs", "n_carriers", "n_ues", "n_uavs",
        "uav_alt_min_m", "uav_alt_max_m", "p_max_w", "p_stp_w", "f_c_ghz", "n0_w",
        "nakagami_m", "gamma_th", "p_out_th", "snr_th", "laguerre_order", "mc_draws", "seed"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw ParseError("unknown config field '" + it.key() + "'");
    }
    SimConfig c;
    read_field(j, "area_width_m", c.area_width_m);
    read_field(j, "area_height_m", c.area_height_m);
    read_field(j, "n_bs", c.n_bs);
    read_field(j, "n_carriers", c.n_carriers);
    read_field(j, "n_ues", c.n_ues);
    read_field(j, "n_uavs", c.n_uavs);
    read_field(j, "uav_alt_min_m", c.uav_alt_min_m);
    read_field(j, "uav_alt_max_m", c.uav_alt_max_m);
    read_field(j, "p_max_w", c.p_max_w);
    read_field(j, "p_stp_w", c.p_stp_w);
    read_field(j, "f_c_ghz", c.f_c_ghz);
    read_field(j, "n0_w", c.n0_w);
    read_field(j, "nakagami_m", c.nakagami_m);
    read_field(j, "gamma_th", c.gamma_th);
    read_field(j, "p_out_th", c.p_out_th);
    read_field(j, "snr_th", c.snr_th);
    read_field(j, "laguerre_order", c.laguerre_order);
    read_field(j, "mc_draws", c.mc_draws);
    read_field(j, "seed", c.seed);
    c.validate();
    return c;
}

UserKind kind_from_string(const std::string& s) {
    if (s == "UE") return UserKind::ue;
    if (s == "UAV") return UserKind::uav;
    throw ParseError("unknown user kind '" + s + "' (expected UE or UAV)");
}

}  // namespace

std::string config_to_json(const SimConfig& config) { return config_to_json_obj(config).dump(2); }

SimConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    return config_from_json_obj(j);
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_json(ss.str());
}

std::string scenario_to_json(const Scenario& sc) {
    json j;
    j["config"] = config_to_json_obj(sc.config);
    j["bss"] = json::array();
    for (const auto& bs : sc.bss)
        j["bss"].push_back({{"id", bs.id}, {"x", bs.x_m}, {"y", bs.y_m}, {"height_m", bs.height_m}});
    j["users"] = json::array();
    for (const auto& u : sc.users)
        j["users"].push_back({{"id", u.id},
                              {"kind", to_string(u.kind)},
                              {"x", u.x_m},
                              {"y", u.y_m},
                              {"altitude_m", u.altitude_m}});
    return j.dump(2);
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    for (const char* key : {"config", "bss", "users"})
        if (!j.contains(key)) throw ParseError(std::string("scenario: missing required field '") + key + "'");

    Scenario sc;
    sc.config = config_from_json_obj(j["config"]);

    auto require = [](const json& obj, const char* field, const char* where) -> const json& {
        if (!obj.contains(field))
            throw ParseError(std::string("scenario: ") + where + " entry missing field '" + field + "'");
        return obj.at(field);
    };

    for (const auto& e : j["bss"]) {
        BaseStation bs;
        bs.id = require(e, "id", "bss").get<int>();
        bs.x_m = require(e, "x", "bss").get<double>();
        bs.y_m = require(e, "y", "bss").get<double>();
        bs.height_m = require(e, "height_m", "bss").get<double>();
        sc.bss.push_back(bs);
    }
    for (std::size_t i = 0; i < sc.bss.size(); ++i)
        if (sc.bss[i].id != static_cast<int>(i))
            throw ParseError("scenario: BS ids must be dense 0..B-1 in order");

    for (const auto& e : j["users"]) {
        User u;
        u.id = require(e, "id", "users").get<int>();
        u.kind = kind_from_string(require(e, "kind", "users").get<std::string>());
        u.x_m = require(e, "x", "users").get<double>();
        u.y_m = require(e, "y", "users").get<double>();
        u.altitude_m = require(e, "altitude_m", "users").get<double>();
        if (u.kind == UserKind::ue && u.altitude_m != 0.0)
            throw ParseError("scenario: UE " + std::to_string(u.id) + " must have altitude 0");
        if (u.kind == UserKind::uav &&
            (u.altitude_m < sc.config.uav_alt_min_m || u.altitude_m > sc.config.uav_alt_max_m))
            throw ParseError("scenario: UAV " + std::to_string(u.id) + " altitude outside configured band");
        sc.users.push_back(u);
    }
    for (std::size_t i = 0; i < sc.users.size(); ++i)
        if (sc.users[i].id != static_cast<int>(i))
            throw ParseError("scenario: user ids must be dense 0..A-1 in order");

    finalize_association(sc);
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return scenario_from_json(ss.str());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write scenario file '" + path + "'");
    out << scenario_to_json(scenario) << "\n";
}

}  // namespace aerial
