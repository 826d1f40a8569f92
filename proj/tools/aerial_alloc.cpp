#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aerial/experiments.hpp"

namespace fs = std::filesystem;
using namespace aerial;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string scenario_path;
    std::string out_dir = ".";
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    std::string objective = "mean";
    bool dump_links = false;
    bool dump_matching = false;
    bool dump_ops = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file (SimConfig fields)");
    cmd->add_option("--scenario", opts.scenario_path, "scenario JSON; bypasses generation");
    cmd->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--seeds", opts.seeds, "seed list")->delimiter(',')->capture_default_str();
    cmd->add_option("--objective", opts.objective, "mean|max")
        ->check(CLI::IsMember({"mean", "max"}))
        ->capture_default_str();
    cmd->add_flag("--dump-links", opts.dump_links, "write the link-budget table as CSV");
    cmd->add_flag("--dump-matching", opts.dump_matching, "write the matching as CSV");
    cmd->add_flag("--dump-ops", opts.dump_ops, "write the coalition operation log as CSV");
}

SimConfig resolve_config(const CommonOpts& opts) {
    return opts.config_path.empty() ? SimConfig{} : load_config(opts.config_path);
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    return (fs::path(opts.out_dir) / name).string();
}

Scenario resolve_scenario(const CommonOpts& opts, const SimConfig& config, std::uint64_t seed) {
    if (!opts.scenario_path.empty()) return load_scenario(opts.scenario_path);
    SimConfig cfg = config;
    cfg.seed = seed;
    return generate_feasible_scenario(cfg, seed).first;
}

Objective resolve_objective(const CommonOpts& opts) {
    return opts.objective == "max" ? Objective::max_outage : Objective::mean_outage;
}

template <typename Result>
int report_failures(const Result& result) {
    for (const auto& f : result.failures)
        std::cerr << "seed " << f.seed << " failed: " << f.error << "\n";
    return result.failures.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interference-limited downlink outage simulator with joint "
                 "sub-carrier / power allocation"};
    app.require_subcommand(1);

    CommonOpts opts;

    auto* run = app.add_subcommand("run", "single global-game run with optional dumps");
    add_common(run, opts);

    auto* gamma = app.add_subcommand("gamma-sweep", "mean outage vs SINR threshold");
    add_common(gamma, opts);
    std::vector<double> gamma_grid = {0.001, 0.01, 0.1, 1.0, 10.0};
    gamma->add_option("--grid", gamma_grid, "thresholds")->delimiter(',')->capture_default_str();

    auto* device = app.add_subcommand("device-sweep", "mean outage vs device count");
    add_common(device, opts);
    std::vector<int> device_grid = {20, 30, 40, 50, 60, 70, 80, 90, 100};
    device->add_option("--sizes", device_grid, "total user counts")
        ->delimiter(',')
        ->capture_default_str();

    auto* compare = app.add_subcommand("compare", "random / power-only / matching / global");
    add_common(compare, opts);
    std::vector<int> compare_sizes = {70, 100};
    compare->add_option("--sizes", compare_sizes, "total user counts")
        ->delimiter(',')
        ->capture_default_str();

    auto* distribution =
        app.add_subcommand("distribution", "user distribution over carriers after the game");
    add_common(distribution, opts);

    auto* optimality = app.add_subcommand("optimality", "global game vs brute-force optimum");
    add_common(optimality, opts);

    auto* outage_check =
        app.add_subcommand("outage-check", "analytic vs Monte-Carlo outage on a link corpus");
    add_common(outage_check, opts);
    std::string links_path;
    long draws = 1000000;
    outage_check->add_option("--links", links_path, "LinkSpec CSV")->required();
    outage_check->add_option("--draws", draws, "Monte-Carlo draws")->capture_default_str();

    auto* brute = app.add_subcommand("brute-force", "exhaustive optimum on a small instance");
    add_common(brute, opts);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            SimConfig config = resolve_config(opts);
            Scenario scenario = resolve_scenario(opts, config, opts.seeds.at(0));
            LinkBudgetTable budgets = LinkBudgetTable::build(scenario);
            if (opts.dump_links) dump_links_csv(budgets, out_path(opts, "links.csv"));
            GlobalGameResult game = run_global_game(scenario, budgets);
            if (opts.dump_matching)
                dump_matching_csv(scenario, game.assignment, out_path(opts, "matching.csv"));
            if (opts.dump_ops) dump_ops_csv(game.oplog, out_path(opts, "ops.csv"));
            std::cout << "users=" << scenario.n_users()
                      << " mean_outage=" << game.report.mean_outage
                      << " max_outage=" << game.report.max_outage
                      << " alg1_mean_S=" << game.alg1_mean_sweeps
                      << " coalition_sweeps=" << game.coalition_sweeps
                      << " ops=" << game.oplog.records.size() << "\n";
            return 0;
        }
        if (gamma->parsed()) {
            auto result = run_gamma_sweep(resolve_config(opts), opts.seeds, gamma_grid);
            write_gamma_sweep_csv(result, out_path(opts, "gamma_sweep.csv"));
            std::vector<std::pair<std::string, double>> samples;
            for (const auto& row : result.rows) {
                samples.push_back({"gamma=" + std::to_string(row.gamma_th) + " ue",
                                   row.mean_outage_ue});
                samples.push_back({"gamma=" + std::to_string(row.gamma_th) + " uav",
                                   row.mean_outage_uav});
            }
            std::cout << emit_summary("gamma-sweep", samples, result.failures);
            return report_failures(result);
        }
        if (device->parsed()) {
            auto result = run_device_sweep(resolve_config(opts), opts.seeds, device_grid);
            write_device_sweep_csv(result, out_path(opts, "device_sweep.csv"));
            std::vector<std::pair<std::string, double>> samples;
            for (const auto& row : result.rows) {
                samples.push_back({"n=" + std::to_string(row.n_users) + " ue", row.mean_outage_ue});
                samples.push_back(
                    {"n=" + std::to_string(row.n_users) + " uav", row.mean_outage_uav});
            }
            std::cout << emit_summary("device-sweep", samples, result.failures);
            return report_failures(result);
        }
        if (compare->parsed()) {
            auto result = run_compare(resolve_config(opts), opts.seeds, compare_sizes);
            write_compare_csv(result, out_path(opts, "compare.csv"));
            std::vector<std::pair<std::string, double>> samples;
            for (const auto& row : result.rows)
                samples.push_back(
                    {"n=" + std::to_string(row.n_users) + " " + row.method, row.mean_outage});
            auto aggregates = aggregate_by_label(samples);
            write_aggregate_csv(aggregates, out_path(opts, "compare_aggregate.csv"));
            std::cout << emit_summary("compare", samples, result.failures);
            return report_failures(result);
        }
        if (distribution->parsed()) {
            auto result = run_distribution(resolve_config(opts), opts.seeds);
            write_distribution_csv(result, out_path(opts, "distribution.csv"));
            write_distribution_per_seed_csv(result, out_path(opts, "distribution_per_seed.csv"));
            std::vector<std::pair<std::string, double>> samples;
            for (const auto& row : result.per_seed) {
                samples.push_back({"mean_carrier ue", row.mean_carrier_ue});
                samples.push_back({"mean_carrier uav", row.mean_carrier_uav});
            }
            std::cout << emit_summary("distribution", samples, result.failures);
            return report_failures(result);
        }
        if (optimality->parsed()) {
            SimConfig config = resolve_config(opts);
            if (opts.config_path.empty()) {
                config.n_bs = 3;
                config.n_carriers = 3;
                config.n_ues = 5;
                config.n_uavs = 4;
            }
            auto result = run_optimality(config, opts.seeds, resolve_objective(opts));
            write_optimality_csv(result, out_path(opts, "optimality.csv"));
            std::vector<std::pair<std::string, double>> samples;
            for (const auto& row : result.rows) samples.push_back({"ratio", row.ratio});
            std::cout << emit_summary("optimality", samples, result.failures);
            return report_failures(result);
        }
        if (outage_check->parsed()) {
            SimConfig config = resolve_config(opts);
            auto links = load_link_specs_csv(links_path);
            auto result =
                run_outage_check(links, draws, opts.seeds.at(0), config.laguerre_order);
            write_outage_check_csv(result, out_path(opts, "outage_check.csv"));
            long passed = 0;
            for (const auto& row : result.rows) passed += row.pass ? 1 : 0;
            std::cout << "outage-check: " << passed << "/" << result.rows.size()
                      << " links within tolerance\n";
            bool ok = result.failures.empty() &&
                      passed == static_cast<long>(result.rows.size());
            return ok ? 0 : 1;
        }
        if (brute->parsed()) {
            SimConfig config = resolve_config(opts);
            Scenario scenario = resolve_scenario(opts, config, opts.seeds.at(0));
            LinkBudgetTable budgets = LinkBudgetTable::build(scenario);
            try {
                BruteForceResult best =
                    brute_force_optimum(scenario, budgets, resolve_objective(opts));
                std::cout << "candidates=" << best.enumerated
                          << " mean_outage=" << best.report.mean_outage
                          << " max_outage=" << best.report.max_outage << "\n";
            } catch (const SizeGateError& e) {
                std::cerr << "refused: " << e.what() << " (count " << e.enumeration_count
                          << ")\n";
                return 2;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
