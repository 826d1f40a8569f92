#include "aerial/coalition.hpp"

#include <algorithm>
#include <string>

#include "aerial/errors.hpp"

namespace aerial {

namespace {

int member_of_bs(const Scenario& sc, const std::vector<int>& members, int bs) {
    for (int v : members)
        if (sc.serving_bs[v] == bs) return v;
    return -1;
}

std::vector<int> without(const std::vector<int>& members, int v) {
    std::vector<int> out;
    out.reserve(members.size());
    for (int m : members)
        if (m != v) out.push_back(m);
    return out;
}

std::vector<int> with(const std::vector<int>& members, int v) {
    std::vector<int> out = members;
    out.insert(std::lower_bound(out.begin(), out.end(), v), v);
    return out;
}

void install(Partition& partition, int carrier, const std::vector<int>& members,
             const CoalitionContext::CarrierSolution& sol) {
    partition.members[carrier] = members;
    partition.powers[carrier] = sol.p_w;
    partition.alg1_sweeps[carrier] = sol.sweeps;
    for (std::size_t i = 0; i < members.size(); ++i)
        partition.payoff[members[i]] = sol.payoffs[i];
}

}  // namespace

const CoalitionContext::CarrierSolution& CoalitionContext::solve(const std::vector<int>& members) {
    auto it = memo_.find(members);
    if (it != memo_.end()) return it->second;

    CarrierSolution sol;
    PowerResult pr = optimize_carrier_power(scenario_, budgets_, members);
    sol.p_w = std::move(pr.p_w);
    sol.sweeps = pr.sweeps;
    sol.payoffs.reserve(members.size());
    for (int v : members) {
        double outage =
            user_outage(scenario_, budgets_, v, members, sol.p_w, scenario_.config.gamma_th);
        sol.payoffs.push_back(1.0 - outage);
        sol.benefit += 1.0 - outage;
    }
    return memo_.emplace(members, std::move(sol)).first->second;
}

Partition make_initial_partition(const Scenario& scenario, const LinkBudgetTable& budgets,
                                 const Assignment& assignment) {
    CoalitionContext ctx(scenario, budgets);
    Partition partition;
    partition.members.resize(assignment.n_carriers());
    partition.powers.resize(assignment.n_carriers());
    partition.alg1_sweeps.assign(assignment.n_carriers(), 0);
    partition.payoff.assign(scenario.n_users(), 0.0);
    for (int c = 0; c < assignment.n_carriers(); ++c)
        install(partition, c, assignment.users_on_carrier[c], ctx.solve(assignment.users_on_carrier[c]));
    return partition;
}

double coalition_benefit(const Partition& partition, int carrier) {
    double sum = 0.0;
    for (int v : partition.members[carrier]) sum += partition.payoff[v];
    return sum;
}

double total_benefit(const Partition& partition) {
    double sum = 0.0;
    for (int c = 0; c < partition.n_carriers(); ++c) sum += coalition_benefit(partition, c);
    return sum;
}

std::optional<TransferOutcome> evaluate_transfer(CoalitionContext& ctx, const Partition& partition,
                                                 int v1, int c1, int c2) {
    const Scenario& sc = ctx.scenario();
    const auto& from = partition.members[c1];
    const auto& to = partition.members[c2];
    if (std::find(from.begin(), from.end(), v1) == from.end())
        throw PreconditionError("evaluate_transfer: user " + std::to_string(v1) +
                                " is not in coalition " + std::to_string(c1));
    if (member_of_bs(sc, to, sc.serving_bs[v1]) >= 0)
        throw PreconditionError("evaluate_transfer: coalition " + std::to_string(c2) +
                                " already holds a user of BS " +
                                std::to_string(sc.serving_bs[v1]));

    TransferOutcome out;
    out.members_from = without(from, v1);
    out.members_to = with(to, v1);
    double w_before = coalition_benefit(partition, c1) + coalition_benefit(partition, c2);
    double w_after =
        ctx.solve(out.members_from).benefit + ctx.solve(out.members_to).benefit;
    out.delta_w = w_after - w_before;
    if (out.delta_w > kAcceptEps) return out;
    return std::nullopt;
}

std::optional<ExchangeOutcome> evaluate_exchange(CoalitionContext& ctx, const Partition& partition,
                                                 int v1, int c1, int v2, int c2) {
    const Scenario& sc = ctx.scenario();
    const auto& s1 = partition.members[c1];
    const auto& s2 = partition.members[c2];
    if (std::find(s1.begin(), s1.end(), v1) == s1.end() ||
        std::find(s2.begin(), s2.end(), v2) == s2.end())
        throw PreconditionError("evaluate_exchange: users are not in the stated coalitions");
    if (sc.serving_bs[v1] != sc.serving_bs[v2])
        throw PreconditionError("evaluate_exchange: users " + std::to_string(v1) + " and " +
                                std::to_string(v2) + " are served by different BSs");

    ExchangeOutcome out;
    out.members_c1 = with(without(s1, v1), v2);
    out.members_c2 = with(without(s2, v2), v1);
    const auto& sol1 = ctx.solve(out.members_c1);
    const auto& sol2 = ctx.solve(out.members_c2);

    auto payoff_in = [](const CoalitionContext::CarrierSolution& sol,
                        const std::vector<int>& members, int v) {
        for (std::size_t i = 0; i < members.size(); ++i)
            if (members[i] == v) return sol.payoffs[i];
        return 0.0;
    };

    double max_gain = -1.0;
    auto check_member = [&](int v, double new_payoff) {
        double gain = new_payoff - partition.payoff[v];
        max_gain = std::max(max_gain, gain);
        return gain >= -kNumEps;
    };
    if (!check_member(v1, payoff_in(sol2, out.members_c2, v1))) return std::nullopt;
    if (!check_member(v2, payoff_in(sol1, out.members_c1, v2))) return std::nullopt;
    for (int v : out.members_c1)
        if (v != v2 && !check_member(v, payoff_in(sol1, out.members_c1, v))) return std::nullopt;
    for (int v : out.members_c2)
        if (v != v1 && !check_member(v, payoff_in(sol2, out.members_c2, v))) return std::nullopt;

    if (max_gain > kAcceptEps) {
        out.max_gain = max_gain;
        return out;
    }
    return std::nullopt;
}

namespace {

/// One full pass over coalition pairs and BSs. When `apply` is set, accepted
/// operations are installed immediately; otherwise they are only collected.
int sweep_operations(CoalitionContext& ctx, Partition& partition, bool apply, int sweep_index,
                     std::vector<OperationRecord>* found) {
    const Scenario& sc = ctx.scenario();
    int applied = 0;
    int n_carriers = partition.n_carriers();
    for (int c1 = 0; c1 < n_carriers; ++c1) {
        for (int c2 = c1 + 1; c2 < n_carriers; ++c2) {
            for (int bs = 0; bs < sc.n_bs(); ++bs) {
                int m1 = member_of_bs(sc, partition.members[c1], bs);
                int m2 = member_of_bs(sc, partition.members[c2], bs);
                OperationRecord rec;
                rec.sweep = sweep_index;
                rec.sum_w_before = total_benefit(partition);
                if (m1 >= 0 && m2 >= 0) {
                    auto res = evaluate_exchange(ctx, partition, m1, c1, m2, c2);
                    if (!res) continue;
                    rec.type = OperationRecord::Type::exchange;
                    rec.user1 = m1;
                    rec.user2 = m2;
                    rec.from = c1;
                    rec.to = c2;
                    if (apply) {
                        install(partition, c1, res->members_c1, ctx.solve(res->members_c1));
                        install(partition, c2, res->members_c2, ctx.solve(res->members_c2));
                    }
                } else if (m1 >= 0 || m2 >= 0) {
                    int v = m1 >= 0 ? m1 : m2;
                    int from = m1 >= 0 ? c1 : c2;
                    int to = m1 >= 0 ? c2 : c1;
                    auto res = evaluate_transfer(ctx, partition, v, from, to);
                    if (!res) continue;
                    rec.type = OperationRecord::Type::transfer;
                    rec.user1 = v;
                    rec.from = from;
                    rec.to = to;
                    if (apply) {
                        install(partition, from, res->members_from, ctx.solve(res->members_from));
                        install(partition, to, res->members_to, ctx.solve(res->members_to));
                    }
                } else {
                    continue;
                }
                rec.sum_w_after = apply ? total_benefit(partition) : rec.sum_w_before;
                if (found) found->push_back(rec);
                ++applied;
            }
        }
    }
    return applied;
}

}  // namespace

std::pair<Partition, OperationLog> run_coalition(const Scenario& scenario,
                                                 const LinkBudgetTable& budgets,
                                                 Partition initial) {
    constexpr int kSweepGuard = 10000;
    CoalitionContext ctx(scenario, budgets);
    Partition partition = std::move(initial);
    OperationLog log;
    while (true) {
        ++log.sweeps;
        int applied = sweep_operations(ctx, partition, true, log.sweeps, &log.records);
        if (applied == 0) break;
        if (log.sweeps > kSweepGuard)
            throw NumericError("run_coalition: sweep guard exceeded after " +
                               std::to_string(log.records.size()) + " applied operations");
    }
    return {std::move(partition), std::move(log)};
}

std::vector<OperationRecord> audit_coalition_stability(const Scenario& scenario,
                                                       const LinkBudgetTable& budgets,
                                                       const Partition& partition) {
    CoalitionContext ctx(scenario, budgets);
    Partition copy = partition;
    std::vector<OperationRecord> found;
    sweep_operations(ctx, copy, false, 0, &found);
    return found;
}

}  // namespace aerial
