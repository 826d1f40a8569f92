#pragma once

#include <vector>

#include <Eigen/Dense>

#include "aerial/channel.hpp"
#include "aerial/outage.hpp"
#include "aerial/types.hpp"

namespace aerial {

struct PowerResult {
    Eigen::VectorXd p_w;  // per BS; 0 where the BS serves nobody on the carrier
    int sweeps = 0;       // stability sweeps executed, including the final clean one
};

/// Fading situation of `user` on a carrier carrying `members`, at the given
/// per-BS powers. Only base stations serving a member transmit; everyone
/// else contributes no interference.
LinkSpec build_link_spec(const Scenario& scenario, const LinkBudgetTable& budgets, int user,
                         const std::vector<int>& members, const Eigen::VectorXd& p_w,
                         double gamma_th);

/// Analytic outage of `user` in the above situation.
double user_outage(const Scenario& scenario, const LinkBudgetTable& budgets, int user,
                   const std::vector<int>& members, const Eigen::VectorXd& p_w, double gamma_th);

/// Iterative transmit-power reduction on one carrier. Starting from the
/// power cap, BSs are swept in ascending id; each serving BS lowers its
/// power in p_stp decrements while its own user's outage at the decremented
/// power stays within p_out_th and the power stays above the user's floor.
/// Sweeps repeat until one changes nothing. Lowering a power can only help
/// the other users on the carrier, so checking the owner suffices.
///
/// Powers are maintained as integer step counts off the cap, and the descent
/// within a sweep locates the last admissible step by bisection; outage is
/// monotone in the serving power, so this matches the step-by-step loop.
PowerResult optimize_carrier_power(const Scenario& scenario, const LinkBudgetTable& budgets,
                                   const std::vector<int>& members);

}  // namespace aerial
