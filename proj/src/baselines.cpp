#include "aerial/baselines.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <numeric>
#include <string>

#include "aerial/errors.hpp"
#include "aerial/power.hpp"
#include "aerial/rng.hpp"

namespace aerial {

AssignmentEvaluation evaluate_assignment(const Scenario& scenario, const LinkBudgetTable& budgets,
                                         const Assignment& assignment, bool optimize_power) {
    AssignmentEvaluation eval;
    int n_carriers = assignment.n_carriers();
    eval.powers.resize(n_carriers);
    double sweep_sum = 0.0;
    for (int c = 0; c < n_carriers; ++c) {
        const auto& members = assignment.users_on_carrier[c];
        if (optimize_power) {
            PowerResult pr = optimize_carrier_power(scenario, budgets, members);
            eval.powers[c] = std::move(pr.p_w);
            sweep_sum += pr.sweeps;
        } else {
            Eigen::VectorXd p = Eigen::VectorXd::Zero(scenario.n_bs());
            for (int v : members) p(scenario.serving_bs[v]) = scenario.config.p_max_w;
            eval.powers[c] = std::move(p);
        }
    }
    eval.alg1_mean_sweeps = optimize_power && n_carriers > 0 ? sweep_sum / n_carriers : 0.0;

    double sum = 0.0, worst = 0.0;
    for (int c = 0; c < n_carriers; ++c) {
        for (int v : assignment.users_on_carrier[c]) {
            double out = user_outage(scenario, budgets, v, assignment.users_on_carrier[c],
                                     eval.powers[c], scenario.config.gamma_th);
            eval.report.per_user.push_back({v, out});
            sum += out;
            worst = std::max(worst, out);
        }
    }
    std::sort(eval.report.per_user.begin(), eval.report.per_user.end());
    eval.report.max_outage = worst;
    eval.report.mean_outage =
        eval.report.per_user.empty() ? 0.0 : sum / eval.report.per_user.size();
    return eval;
}

Assignment random_assignment(const Scenario& scenario, std::uint64_t seed) {
    const int n_carriers = scenario.config.n_carriers;
    std::mt19937_64 rng(sub_seed(seed, seed_tag::random_assign));
    Assignment out;
    out.users_on_carrier.resize(n_carriers);
    out.carrier_of.assign(scenario.n_users(), -1);
    for (int bs = 0; bs < scenario.n_bs(); ++bs) {
        const auto& mine = scenario.served_users[bs];
        if (static_cast<int>(mine.size()) > n_carriers)
            throw PreconditionError("random_assignment: BS " + std::to_string(bs) +
                                    " oversubscribed");
        // Fisher-Yates over the carrier list; the first |V(u)| entries form
        // a uniform random injection.
        std::vector<int> carriers(n_carriers);
        std::iota(carriers.begin(), carriers.end(), 0);
        for (int i = n_carriers - 1; i > 0; --i) {
            int j = static_cast<int>(uniform01(rng) * (i + 1));
            std::swap(carriers[i], carriers[j]);
        }
        for (std::size_t k = 0; k < mine.size(); ++k) {
            out.carrier_of[mine[k]] = carriers[k];
            out.users_on_carrier[carriers[k]].push_back(mine[k]);
        }
    }
    for (auto& users : out.users_on_carrier) std::sort(users.begin(), users.end());
    return out;
}

double enumeration_count(const Scenario& scenario) {
    double count = 1.0;
    for (int bs = 0; bs < scenario.n_bs(); ++bs) {
        int k = static_cast<int>(scenario.served_users[bs].size());
        for (int i = 0; i < k; ++i) count *= scenario.config.n_carriers - i;
    }
    return count;
}

namespace {

struct SearchState {
    const Scenario& scenario;
    const LinkBudgetTable& budgets;
    Objective objective;
    std::vector<int> carrier_of;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<int> best_carrier_of;
    ObjectiveReport best_report;
    double enumerated = 0.0;

    void evaluate_candidate() {
        Assignment a;
        a.users_on_carrier.resize(scenario.config.n_carriers);
        a.carrier_of = carrier_of;
        for (int v = 0; v < scenario.n_users(); ++v)
            a.users_on_carrier[carrier_of[v]].push_back(v);
        AssignmentEvaluation eval = evaluate_assignment(scenario, budgets, a, true);
        double value = objective == Objective::mean_outage ? eval.report.mean_outage
                                                           : eval.report.max_outage;
        enumerated += 1.0;
        if (value < best_value ||
            (value == best_value && carrier_of < best_carrier_of)) {
            best_value = value;
            best_carrier_of = carrier_of;
            best_report = std::move(eval.report);
        }
    }

    void recurse(int bs) {
        if (bs == scenario.n_bs()) {
            evaluate_candidate();
            return;
        }
        const auto& mine = scenario.served_users[bs];
        std::vector<bool> used(scenario.config.n_carriers, false);
        assign_user(bs, 0, mine, used);
    }

    void assign_user(int bs, std::size_t idx, const std::vector<int>& mine,
                     std::vector<bool>& used) {
        if (idx == mine.size()) {
            recurse(bs + 1);
            return;
        }
        for (int c = 0; c < scenario.config.n_carriers; ++c) {
            if (used[c]) continue;
            used[c] = true;
            carrier_of[mine[idx]] = c;
            assign_user(bs, idx + 1, mine, used);
            used[c] = false;
        }
    }
};

}  // namespace

BruteForceResult brute_force_optimum(const Scenario& scenario, const LinkBudgetTable& budgets,
                                     Objective objective) {
    double count = enumeration_count(scenario);
    if (count > 1e8) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.4g", count);
        throw SizeGateError("brute_force_optimum: " + std::string(buf) +
                                " candidate assignments exceed the 1e8 gate",
                            count);
    }

    SearchState state{scenario, budgets, objective, std::vector<int>(scenario.n_users(), -1),
                      std::numeric_limits<double>::infinity(),
                      std::vector<int>(scenario.n_users(), std::numeric_limits<int>::max()),
                      {}, 0.0};
    state.recurse(0);

    BruteForceResult result;
    result.assignment.users_on_carrier.resize(scenario.config.n_carriers);
    result.assignment.carrier_of = state.best_carrier_of;
    for (int v = 0; v < scenario.n_users(); ++v)
        result.assignment.users_on_carrier[state.best_carrier_of[v]].push_back(v);
    result.report = std::move(state.best_report);
    result.enumerated = state.enumerated;
    return result;
}

}  // namespace aerial
