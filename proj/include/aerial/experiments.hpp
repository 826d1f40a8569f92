#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aerial/baselines.hpp"
#include "aerial/coalition.hpp"
#include "aerial/matching.hpp"
#include "aerial/outage.hpp"
#include "aerial/scenario.hpp"
#include "aerial/types.hpp"

namespace aerial {

struct GlobalGameResult {
    Assignment assignment;       // matching sub-game output
    Partition partition;         // final coalition structure
    OperationLog oplog;
    ObjectiveReport report;
    double alg1_mean_sweeps = 0.0;  // mean power-descent sweeps at the initial run
    int coalition_sweeps = 0;
};

/// Matching sub-game, per-carrier power optimization, coalition refinement,
/// final report. Both stability audits run and must come back empty.
GlobalGameResult run_global_game(const Scenario& scenario, const LinkBudgetTable& budgets);

/// Per-user outage under a fixed (members, powers) state at an arbitrary
/// SINR threshold; serves the threshold sweeps.
ObjectiveReport report_at_threshold(const Scenario& scenario, const LinkBudgetTable& budgets,
                                    const Partition& partition, double gamma_th);

double mean_outage_of_kind(const Scenario& scenario, const ObjectiveReport& report, UserKind kind);

/// Redraws until every BS serves exactly n_carriers users (the fully
/// occupied instances of the optimality study). Returns the rejection count.
std::pair<Scenario, int> generate_fully_occupied_scenario(const SimConfig& config,
                                                          std::uint64_t seed,
                                                          int max_redraws = 1000000);

// ---- experiment runners -------------------------------------------------

struct RunFailure {
    std::uint64_t seed = 0;
    std::string error;
};

struct GammaSweepRow {
    double gamma_th = 0.0;
    std::uint64_t seed = 0;
    double mean_outage_ue = 0.0;
    double mean_outage_uav = 0.0;
};
struct GammaSweepResult {
    std::vector<GammaSweepRow> rows;
    std::vector<RunFailure> failures;
};
GammaSweepResult run_gamma_sweep(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                                 const std::vector<double>& gamma_grid);

struct DeviceSweepRow {
    int n_users = 0;
    std::uint64_t seed = 0;
    double mean_outage_ue = 0.0;
    double mean_outage_uav = 0.0;
};
struct DeviceSweepResult {
    std::vector<DeviceSweepRow> rows;
    std::vector<RunFailure> failures;
};
DeviceSweepResult run_device_sweep(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                                   const std::vector<int>& user_counts);

struct CompareRow {
    int n_users = 0;
    std::uint64_t seed = 0;
    std::string method;  // random | power_only | matching | global
    double mean_outage = 0.0;
    double max_outage = 0.0;
    double alg1_mean_s = 0.0;
    int coalition_sweeps = 0;
};
struct CompareResult {
    std::vector<CompareRow> rows;
    std::vector<RunFailure> failures;
};
CompareResult run_compare(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                          const std::vector<int>& user_counts);

struct DistributionRow {
    int carrier_index = 0;
    long n_ue = 0;
    long n_uav = 0;
};
struct DistributionSeedRow {
    std::uint64_t seed = 0;
    double mean_carrier_ue = 0.0;
    double mean_carrier_uav = 0.0;
};
struct DistributionResult {
    std::vector<DistributionRow> rows;           // aggregated over seeds
    std::vector<DistributionSeedRow> per_seed;
    std::vector<RunFailure> failures;
};
DistributionResult run_distribution(const SimConfig& config,
                                    const std::vector<std::uint64_t>& seeds);

struct OptimalityRow {
    std::uint64_t seed = 0;
    double game_mean = 0.0;
    double optimum_mean = 0.0;
    double ratio = 0.0;  // game_mean / optimum_mean (1 when both are 0)
};
struct OptimalityResult {
    std::vector<OptimalityRow> rows;
    std::vector<RunFailure> failures;
};
OptimalityResult run_optimality(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                                Objective objective = Objective::mean_outage);

struct OutageCheckRow {
    double analytic = 0.0;
    double mc = 0.0;
    double std_error = 0.0;
    double abs_diff = 0.0;
    bool pass = false;
};
struct OutageCheckResult {
    std::vector<OutageCheckRow> rows;
    std::vector<RunFailure> failures;
};
OutageCheckResult run_outage_check(const std::vector<LinkSpec>& links, long draws,
                                   std::uint64_t seed, int laguerre_order);

/// LinkSpec CSV: kind,m,gamma_th,means... (UE: serving then interferer
/// means; UAV: serving A,B then interferer A,B pairs).
std::vector<LinkSpec> load_link_specs_csv(const std::string& path);

// ---- CSV / digest -------------------------------------------------------

void write_gamma_sweep_csv(const GammaSweepResult&, const std::string& path);
void write_device_sweep_csv(const DeviceSweepResult&, const std::string& path);
void write_compare_csv(const CompareResult&, const std::string& path);
void write_distribution_csv(const DistributionResult&, const std::string& path);
void write_distribution_per_seed_csv(const DistributionResult&, const std::string& path);
void write_optimality_csv(const OptimalityResult&, const std::string& path);
void write_outage_check_csv(const OutageCheckResult&, const std::string& path);

void dump_links_csv(const LinkBudgetTable&, const std::string& path);
void dump_matching_csv(const Scenario&, const Assignment&, const std::string& path);
void dump_ops_csv(const OperationLog&, const std::string& path);

/// Aggregate of one metric grouped by a label: (label, mean, stddev, count).
struct AggregateRow {
    std::string label;
    double mean = 0.0;
    double stddev = 0.0;
    long count = 0;
};
std::vector<AggregateRow> aggregate_by_label(
    const std::vector<std::pair<std::string, double>>& samples);
void write_aggregate_csv(const std::vector<AggregateRow>&, const std::string& path);

/// Human-readable digest: aggregates plus one line per failed seed.
std::string emit_summary(const std::string& title,
                         const std::vector<std::pair<std::string, double>>& samples,
                         const std::vector<RunFailure>& failures);

}  // namespace aerial
