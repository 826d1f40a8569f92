#pragma once

#include <map>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "aerial/channel.hpp"
#include "aerial/power.hpp"
#include "aerial/types.hpp"

namespace aerial {

/// Strict-improvement margin for accepting an operation; prevents cycling
/// on numerically tied candidates.
constexpr double kAcceptEps = 1e-9;
/// Slack for "did not decrease" comparisons in the exchange rule; power
/// re-optimization perturbs payoffs at the last bit.
constexpr double kNumEps = 1e-12;

/// Coalition structure: one coalition of users per sub-carrier, with the
/// per-carrier optimized powers and the cached payoffs
/// payoff(v) = 1 - outage(v) under the coalition's power vector.
struct Partition {
    std::vector<std::vector<int>> members;   // per carrier, ascending user ids
    std::vector<Eigen::VectorXd> powers;     // per carrier, per BS
    std::vector<int> alg1_sweeps;            // per carrier
    std::vector<double> payoff;              // per user id

    int n_carriers() const { return static_cast<int>(members.size()); }
};

struct OperationRecord {
    enum class Type { transfer, exchange };
    Type type = Type::transfer;
    int user1 = -1;
    int user2 = -1;   // exchange only
    int from = -1;    // carrier
    int to = -1;      // carrier
    double sum_w_before = 0.0;
    double sum_w_after = 0.0;
    int sweep = 0;
};

struct OperationLog {
    std::vector<OperationRecord> records;
    int sweeps = 0;  // full sweeps executed, including the final clean one
};

/// Power optimization and payoffs for each carrier of the assignment.
Partition make_initial_partition(const Scenario& scenario, const LinkBudgetTable& budgets,
                                 const Assignment& assignment);

/// Sum of member payoffs of one coalition (its benefit w).
double coalition_benefit(const Partition& partition, int carrier);
double total_benefit(const Partition& partition);

/// Memoizing evaluator for hypothetical coalitions. Power optimization
/// depends only on the member set (carriers are interchangeable frequency
/// resources), so solutions are cached by member list.
class CoalitionContext {
public:
    CoalitionContext(const Scenario& scenario, const LinkBudgetTable& budgets)
        : scenario_(scenario), budgets_(budgets) {}

    struct CarrierSolution {
        Eigen::VectorXd p_w;
        int sweeps = 0;
        std::vector<double> payoffs;  // aligned with the member list
        double benefit = 0.0;
    };

    const CarrierSolution& solve(const std::vector<int>& members);
    const Scenario& scenario() const { return scenario_; }
    const LinkBudgetTable& budgets() const { return budgets_; }

private:
    const Scenario& scenario_;
    const LinkBudgetTable& budgets_;
    std::map<std::vector<int>, CarrierSolution> memo_;
};

struct TransferOutcome {
    std::vector<int> members_from, members_to;
    double delta_w = 0.0;  // total benefit gain over the two coalitions
};

struct ExchangeOutcome {
    std::vector<int> members_c1, members_c2;
    double max_gain = 0.0;  // best single-member payoff gain
};

/// Transfer rule: moving v1 from its coalition to one with no same-BS user
/// is accepted when the two coalitions' combined benefit strictly rises.
/// Returns the hypothetical member lists and the gain, or nullopt when the
/// move is rejected. Violated preconditions throw.
std::optional<TransferOutcome> evaluate_transfer(CoalitionContext& ctx, const Partition& partition,
                                                 int v1, int c1, int c2);

/// Exchange rule: swapping same-BS users v1 and v2 across coalitions is
/// accepted when neither swapped user nor any other member of the two
/// coalitions loses payoff, and someone strictly gains.
std::optional<ExchangeOutcome> evaluate_exchange(CoalitionContext& ctx, const Partition& partition,
                                                 int v1, int c1, int v2, int c2);

/// Sweeps all coalition pairs and BSs, applying accepted transfers and
/// exchanges immediately, until a full sweep applies nothing.
std::pair<Partition, OperationLog> run_coalition(const Scenario& scenario,
                                                 const LinkBudgetTable& budgets,
                                                 Partition initial);

/// Re-evaluates every legal operation on the partition without applying.
/// Empty result means the partition is stable.
std::vector<OperationRecord> audit_coalition_stability(const Scenario& scenario,
                                                       const LinkBudgetTable& budgets,
                                                       const Partition& partition);

}  // namespace aerial
