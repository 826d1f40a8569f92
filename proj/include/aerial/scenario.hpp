#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "aerial/channel.hpp"
#include "aerial/types.hpp"

namespace aerial {

/// Serves each user from the BS with the smallest power floor (strongest
/// effective link); ties go to the lower BS id. Stations are capped at one
/// user per sub-carrier: overloads are resolved by displacing, one at a
/// time, the user whose best under-quota alternative costs the least extra
/// floor. Users exceeding the total network capacity are an error.
std::vector<int> associate_users(const std::vector<BaseStation>& bss,
                                 const std::vector<User>& users,
                                 const SimConfig& config);

/// Uniform i.i.d. placement of BSs and users in the area; UAV altitudes
/// uniform in the configured band. Association runs afterwards; a BS ending
/// up with more users than carriers makes the draw infeasible and throws.
Scenario generate_scenario(const SimConfig& config, std::uint64_t seed);

/// Redraws sub-seeds derived from `seed` until association is feasible.
/// Returns the scenario and the number of rejected draws.
std::pair<Scenario, int> generate_feasible_scenario(const SimConfig& config, std::uint64_t seed,
                                                    int max_redraws = 100000);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

std::string config_to_json(const SimConfig& config);
/// Parses a config JSON; absent keys keep their defaults, unknown keys throw.
SimConfig config_from_json(const std::string& text);
SimConfig load_config(const std::string& path);

}  // namespace aerial
