#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "aerial/channel.hpp"
#include "aerial/types.hpp"

namespace aerial {

enum class Objective { mean_outage, max_outage };

struct AssignmentEvaluation {
    std::vector<Eigen::VectorXd> powers;  // per carrier, per BS
    ObjectiveReport report;
    double alg1_mean_sweeps = 0.0;        // 0 when power optimization is skipped
};

/// Outage report for an assignment. With optimize_power set, the power
/// descent runs per carrier; otherwise every serving BS transmits at the
/// power cap.
AssignmentEvaluation evaluate_assignment(const Scenario& scenario, const LinkBudgetTable& budgets,
                                         const Assignment& assignment, bool optimize_power);

/// Per BS, a uniform random injection of its users into the carriers.
Assignment random_assignment(const Scenario& scenario, std::uint64_t seed);

/// Number of feasible per-BS injections: prod_u C!/(C-|V(u)|)!.
double enumeration_count(const Scenario& scenario);

struct BruteForceResult {
    Assignment assignment;
    ObjectiveReport report;
    double enumerated = 0.0;  // candidates actually evaluated
};

/// Exhaustive optimum over all feasible assignments, with the power descent
/// applied to every candidate. Ties resolve to the lexicographically
/// smallest carrier_of vector. Refuses instances whose enumeration count
/// exceeds 1e8 (SizeGateError carries the count).
BruteForceResult brute_force_optimum(const Scenario& scenario, const LinkBudgetTable& budgets,
                                     Objective objective);

}  // namespace aerial
