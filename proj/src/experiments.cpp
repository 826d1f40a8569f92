#include "aerial/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "aerial/errors.hpp"
#include "aerial/rng.hpp"

namespace aerial {

GlobalGameResult run_global_game(const Scenario& scenario, const LinkBudgetTable& budgets) {
    GlobalGameResult result;
    result.assignment = run_matching(scenario, budgets, scenario.config.seed);

    auto blocking = audit_matching_stability(scenario, budgets, result.assignment);
    if (!blocking.empty())
        throw AuditError("run_global_game: matching audit found " +
                         std::to_string(blocking.size()) + " blocking pairs");

    Partition initial = make_initial_partition(scenario, budgets, result.assignment);
    double sweep_sum = 0.0;
    for (int s : initial.alg1_sweeps) sweep_sum += s;
    result.alg1_mean_sweeps =
        initial.n_carriers() > 0 ? sweep_sum / initial.n_carriers() : 0.0;

    auto [final_partition, log] = run_coalition(scenario, budgets, std::move(initial));
    result.partition = std::move(final_partition);
    result.oplog = std::move(log);
    result.coalition_sweeps = result.oplog.sweeps;

    auto residual = audit_coalition_stability(scenario, budgets, result.partition);
    if (!residual.empty())
        throw AuditError("run_global_game: coalition audit found " +
                         std::to_string(residual.size()) + " applicable operations");

    double sum = 0.0, worst = 0.0;
    for (int v = 0; v < scenario.n_users(); ++v) {
        double outage = 1.0 - result.partition.payoff[v];
        result.report.per_user.push_back({v, outage});
        sum += outage;
        worst = std::max(worst, outage);
    }
    result.report.max_outage = worst;
    result.report.mean_outage = scenario.n_users() > 0 ? sum / scenario.n_users() : 0.0;
    return result;
}

ObjectiveReport report_at_threshold(const Scenario& scenario, const LinkBudgetTable& budgets,
                                    const Partition& partition, double gamma_th) {
    ObjectiveReport report;
    double sum = 0.0, worst = 0.0;
    for (int c = 0; c < partition.n_carriers(); ++c) {
        for (int v : partition.members[c]) {
            double out = user_outage(scenario, budgets, v, partition.members[c],
                                     partition.powers[c], gamma_th);
            report.per_user.push_back({v, out});
            sum += out;
            worst = std::max(worst, out);
        }
    }
    std::sort(report.per_user.begin(), report.per_user.end());
    report.max_outage = worst;
    report.mean_outage = report.per_user.empty() ? 0.0 : sum / report.per_user.size();
    return report;
}

double mean_outage_of_kind(const Scenario& scenario, const ObjectiveReport& report, UserKind kind) {
    double sum = 0.0;
    long n = 0;
    for (const auto& [v, outage] : report.per_user) {
        if (scenario.users[v].kind != kind) continue;
        sum += outage;
        ++n;
    }
    return n > 0 ? sum / n : 0.0;
}

std::pair<Scenario, int> generate_fully_occupied_scenario(const SimConfig& config,
                                                          std::uint64_t seed, int max_redraws) {
    if (config.n_ues + config.n_uavs != config.n_bs * config.n_carriers)
        throw ConfigError("generate_fully_occupied_scenario: need exactly n_bs*n_carriers users");
    for (int attempt = 0; attempt < max_redraws; ++attempt) {
        try {
            Scenario sc = generate_scenario(config, sub_seed(seed, seed_tag::redraw, attempt));
            bool full = true;
            for (int bs = 0; bs < sc.n_bs(); ++bs)
                full = full &&
                       static_cast<int>(sc.served_users[bs].size()) == config.n_carriers;
            if (full) return {std::move(sc), attempt};
        } catch (const InfeasibleError&) {
        }
    }
    throw InfeasibleError("generate_fully_occupied_scenario: no balanced draw after " +
                          std::to_string(max_redraws) + " attempts");
}

namespace {

SimConfig with_users(SimConfig config, int total_users) {
    config.n_ues = total_users / 2;
    config.n_uavs = total_users - config.n_ues;
    return config;
}

template <typename Fn>
void per_seed(const std::vector<std::uint64_t>& seeds, std::vector<RunFailure>& failures, Fn fn) {
    for (std::uint64_t seed : seeds) {
        try {
            fn(seed);
        } catch (const std::exception& e) {
            failures.push_back({seed, e.what()});
        }
    }
}

}  // namespace

GammaSweepResult run_gamma_sweep(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                                 const std::vector<double>& gamma_grid) {
    if (seeds.empty()) throw PreconditionError("run_gamma_sweep: seed list is empty");
    GammaSweepResult result;
    per_seed(seeds, result.failures, [&](std::uint64_t seed) {
        SimConfig cfg = config;
        cfg.seed = seed;
        auto [scenario, rejections] = generate_feasible_scenario(cfg, seed);
        (void)rejections;
        LinkBudgetTable budgets = LinkBudgetTable::build(scenario);
        GlobalGameResult game = run_global_game(scenario, budgets);
        for (double gamma : gamma_grid) {
            ObjectiveReport report =
                report_at_threshold(scenario, budgets, game.partition, gamma);
            result.rows.push_back({gamma, seed,
                                   mean_outage_of_kind(scenario, report, UserKind::ue),
                                   mean_outage_of_kind(scenario, report, UserKind::uav)});
        }
    });
    return result;
}

DeviceSweepResult run_device_sweep(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                                   const std::vector<int>& user_counts) {
    if (seeds.empty()) throw PreconditionError("run_device_sweep: seed list is empty");
    DeviceSweepResult result;
    for (int n_users : user_counts) {
        per_seed(seeds, result.failures, [&](std::uint64_t seed) {
            SimConfig cfg = with_users(config, n_users);
            cfg.seed = seed;
            auto [scenario, rejections] = generate_feasible_scenario(cfg, seed);
            (void)rejections;
            LinkBudgetTable budgets = LinkBudgetTable::build(scenario);
            GlobalGameResult game = run_global_game(scenario, budgets);
            result.rows.push_back({n_users, seed,
                                   mean_outage_of_kind(scenario, game.report, UserKind::ue),
                                   mean_outage_of_kind(scenario, game.report, UserKind::uav)});
        });
    }
    return result;
}

CompareResult run_compare(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                          const std::vector<int>& user_counts) {
    if (seeds.empty()) throw PreconditionError("run_compare: seed list is empty");
    CompareResult result;
    for (int n_users : user_counts) {
        per_seed(seeds, result.failures, [&](std::uint64_t seed) {
            SimConfig cfg = with_users(config, n_users);
            cfg.seed = seed;
            auto [scenario, rejections] = generate_feasible_scenario(cfg, seed);
            (void)rejections;
            LinkBudgetTable budgets = LinkBudgetTable::build(scenario);

            Assignment random = random_assignment(scenario, seed);
            AssignmentEvaluation at_cap = evaluate_assignment(scenario, budgets, random, false);
            result.rows.push_back({n_users, seed, "random", at_cap.report.mean_outage,
                                   at_cap.report.max_outage, 0.0, 0});

            AssignmentEvaluation optimized = evaluate_assignment(scenario, budgets, random, true);
            result.rows.push_back({n_users, seed, "power_only", optimized.report.mean_outage,
                                   optimized.report.max_outage, optimized.alg1_mean_sweeps, 0});

            Assignment matched = run_matching(scenario, budgets, seed);
            AssignmentEvaluation match_eval = evaluate_assignment(scenario, budgets, matched, true);
            result.rows.push_back({n_users, seed, "matching", match_eval.report.mean_outage,
                                   match_eval.report.max_outage, match_eval.alg1_mean_sweeps, 0});

            GlobalGameResult game = run_global_game(scenario, budgets);
            result.rows.push_back({n_users, seed, "global", game.report.mean_outage,
                                   game.report.max_outage, game.alg1_mean_sweeps,
                                   game.coalition_sweeps});
        });
    }
    return result;
}

DistributionResult run_distribution(const SimConfig& config,
                                    const std::vector<std::uint64_t>& seeds) {
    if (seeds.empty()) throw PreconditionError("run_distribution: seed list is empty");
    DistributionResult result;
    std::vector<long> ue_count(config.n_carriers, 0), uav_count(config.n_carriers, 0);
    per_seed(seeds, result.failures, [&](std::uint64_t seed) {
        SimConfig cfg = config;
        cfg.seed = seed;
        auto [scenario, rejections] = generate_feasible_scenario(cfg, seed);
        (void)rejections;
        LinkBudgetTable budgets = LinkBudgetTable::build(scenario);
        GlobalGameResult game = run_global_game(scenario, budgets);
        double ue_sum = 0.0, uav_sum = 0.0;
        long n_ue = 0, n_uav = 0;
        for (int c = 0; c < game.partition.n_carriers(); ++c) {
            for (int v : game.partition.members[c]) {
                if (scenario.users[v].kind == UserKind::ue) {
                    ++ue_count[c];
                    ue_sum += c;
                    ++n_ue;
                } else {
                    ++uav_count[c];
                    uav_sum += c;
                    ++n_uav;
                }
            }
        }
        result.per_seed.push_back({seed, n_ue > 0 ? ue_sum / n_ue : 0.0,
                                   n_uav > 0 ? uav_sum / n_uav : 0.0});
    });
    for (int c = 0; c < config.n_carriers; ++c)
        result.rows.push_back({c, ue_count[c], uav_count[c]});
    return result;
}

OptimalityResult run_optimality(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                                Objective objective) {
    if (seeds.empty()) throw PreconditionError("run_optimality: seed list is empty");
    OptimalityResult result;
    per_seed(seeds, result.failures, [&](std::uint64_t seed) {
        SimConfig cfg = config;
        cfg.seed = seed;
        auto [scenario, rejections] = generate_fully_occupied_scenario(cfg, seed);
        (void)rejections;
        LinkBudgetTable budgets = LinkBudgetTable::build(scenario);
        GlobalGameResult game = run_global_game(scenario, budgets);
        BruteForceResult best = brute_force_optimum(scenario, budgets, objective);
        double game_value = objective == Objective::mean_outage ? game.report.mean_outage
                                                                : game.report.max_outage;
        double best_value = objective == Objective::mean_outage ? best.report.mean_outage
                                                                : best.report.max_outage;
        double ratio = best_value > 0.0 ? game_value / best_value : 1.0;
        result.rows.push_back({seed, game_value, best_value, ratio});
    });
    return result;
}

OutageCheckResult run_outage_check(const std::vector<LinkSpec>& links, long draws,
                                   std::uint64_t seed, int laguerre_order) {
    OutageCheckResult result;
    for (std::size_t i = 0; i < links.size(); ++i) {
        try {
            const LinkSpec& link = links[i];
            double analytic = link.kind == UserKind::ue
                                  ? outage_ue(link)
                                  : outage_uav(link, laguerre_order);
            McEstimate mc = outage_mc(link, draws, sub_seed(seed, seed_tag::monte_carlo, i));
            double diff = std::abs(analytic - mc.outage);
            bool pass = diff <= std::max(0.005, 3.0 * mc.std_error);
            result.rows.push_back({analytic, mc.outage, mc.std_error, diff, pass});
        } catch (const std::exception& e) {
            result.failures.push_back({static_cast<std::uint64_t>(i), e.what()});
        }
    }
    return result;
}

std::vector<LinkSpec> load_link_specs_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open link-spec file '" + path + "'");
    std::vector<LinkSpec> links;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line.rfind("kind", 0) == 0) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        auto fail = [&](const std::string& what) {
            throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
        };
        if (cells.size() < 4) fail("expected kind,m,gamma_th,means...");
        LinkSpec link;
        try {
            if (cells[0] == "UE")
                link.kind = UserKind::ue;
            else if (cells[0] == "UAV")
                link.kind = UserKind::uav;
            else
                fail("kind must be UE or UAV, got '" + cells[0] + "'");
            link.nakagami_m = std::stoi(cells[1]);
            link.gamma_th = std::stod(cells[2]);
            if (link.kind == UserKind::ue) {
                link.serving_mean_snr = std::stod(cells[3]);
                for (std::size_t i = 4; i < cells.size(); ++i)
                    link.interferer_mean_snr.push_back(std::stod(cells[i]));
            } else {
                if (cells.size() < 5 || cells.size() % 2 != 1)
                    fail("UAV rows need serving A,B then interferer A,B pairs");
                link.serving_los_mean = std::stod(cells[3]);
                link.serving_nlos_mean = std::stod(cells[4]);
                for (std::size_t i = 5; i + 1 < cells.size(); i += 2)
                    link.interferer_los_nlos.push_back(
                        {std::stod(cells[i]), std::stod(cells[i + 1])});
            }
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception&) {
            fail("malformed numeric field");
        }
        link.validate();
        links.push_back(std::move(link));
    }
    return links;
}

// ---- CSV ------------------------------------------------------------------

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::ofstream open_csv(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    return out;
}

}  // namespace

void write_gamma_sweep_csv(const GammaSweepResult& r, const std::string& path) {
    auto out = open_csv(path);
    out << "gamma_th,seed,mean_outage_ue,mean_outage_uav\n";
    for (const auto& row : r.rows)
        out << fmt(row.gamma_th) << ',' << row.seed << ',' << fmt(row.mean_outage_ue) << ','
            << fmt(row.mean_outage_uav) << '\n';
}

void write_device_sweep_csv(const DeviceSweepResult& r, const std::string& path) {
    auto out = open_csv(path);
    out << "n_users,seed,mean_outage_ue,mean_outage_uav\n";
    for (const auto& row : r.rows)
        out << row.n_users << ',' << row.seed << ',' << fmt(row.mean_outage_ue) << ','
            << fmt(row.mean_outage_uav) << '\n';
}

void write_compare_csv(const CompareResult& r, const std::string& path) {
    auto out = open_csv(path);
    out << "n_users,seed,method,mean_outage,max_outage,alg1_mean_S,coalition_sweeps\n";
    for (const auto& row : r.rows)
        out << row.n_users << ',' << row.seed << ',' << row.method << ',' << fmt(row.mean_outage)
            << ',' << fmt(row.max_outage) << ',' << fmt(row.alg1_mean_s) << ','
            << row.coalition_sweeps << '\n';
}

void write_distribution_csv(const DistributionResult& r, const std::string& path) {
    auto out = open_csv(path);
    out << "carrier_index,n_ue,n_uav\n";
    for (const auto& row : r.rows)
        out << row.carrier_index << ',' << row.n_ue << ',' << row.n_uav << '\n';
}

void write_distribution_per_seed_csv(const DistributionResult& r, const std::string& path) {
    auto out = open_csv(path);
    out << "seed,mean_carrier_ue,mean_carrier_uav\n";
    for (const auto& row : r.per_seed)
        out << row.seed << ',' << fmt(row.mean_carrier_ue) << ',' << fmt(row.mean_carrier_uav)
            << '\n';
}

void write_optimality_csv(const OptimalityResult& r, const std::string& path) {
    auto out = open_csv(path);
    out << "seed,game_mean,optimum_mean,ratio\n";
    for (const auto& row : r.rows)
        out << row.seed << ',' << fmt(row.game_mean) << ',' << fmt(row.optimum_mean) << ','
            << fmt(row.ratio) << '\n';
}

void write_outage_check_csv(const OutageCheckResult& r, const std::string& path) {
    auto out = open_csv(path);
    out << "analytic,mc,stderr,abs_diff,pass\n";
    for (const auto& row : r.rows)
        out << fmt(row.analytic) << ',' << fmt(row.mc) << ',' << fmt(row.std_error) << ','
            << fmt(row.abs_diff) << ',' << (row.pass ? 1 : 0) << '\n';
}

void dump_links_csv(const LinkBudgetTable& budgets, const std::string& path) {
    auto out = open_csv(path);
    out << "bs,user,kind,d2d_m,d3d_m,pl_ue_db,pl_los_db,pl_nlos_db,p_los,power_floor_w\n";
    for (int bs = 0; bs < budgets.n_bs(); ++bs) {
        for (int v = 0; v < budgets.n_users(); ++v) {
            const LinkBudget& lb = budgets.at(bs, v);
            out << bs << ',' << v << ',' << to_string(lb.kind) << ',' << fmt(lb.d2d_m) << ','
                << fmt(lb.d3d_m) << ',';
            if (lb.kind == UserKind::ue)
                out << fmt(lb.pl_ue_db) << ",,,,";
            else
                out << ',' << fmt(lb.pl_los_db) << ',' << fmt(lb.pl_nlos_db) << ','
                    << fmt(lb.p_los) << ',';
            out << fmt(lb.power_floor_w) << '\n';
        }
    }
}

void dump_matching_csv(const Scenario& scenario, const Assignment& assignment,
                       const std::string& path) {
    auto out = open_csv(path);
    out << "user,kind,bs,carrier\n";
    for (int v = 0; v < scenario.n_users(); ++v)
        out << v << ',' << to_string(scenario.users[v].kind) << ',' << scenario.serving_bs[v]
            << ',' << assignment.carrier_of[v] << '\n';
}

void dump_ops_csv(const OperationLog& log, const std::string& path) {
    auto out = open_csv(path);
    out << "step,type,user_ids,from,to,sum_w_before,sum_w_after\n";
    for (std::size_t i = 0; i < log.records.size(); ++i) {
        const auto& rec = log.records[i];
        out << i << ',' << (rec.type == OperationRecord::Type::transfer ? "transfer" : "exchange")
            << ',' << rec.user1;
        if (rec.user2 >= 0) out << ';' << rec.user2;
        out << ',' << rec.from << ',' << rec.to << ',' << fmt(rec.sum_w_before) << ','
            << fmt(rec.sum_w_after) << '\n';
    }
}

std::vector<AggregateRow> aggregate_by_label(
    const std::vector<std::pair<std::string, double>>& samples) {
    std::map<std::string, std::vector<double>> groups;
    for (const auto& [label, value] : samples) groups[label].push_back(value);
    std::vector<AggregateRow> rows;
    for (const auto& [label, values] : groups) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= values.size();
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var = values.size() > 1 ? var / (values.size() - 1) : 0.0;
        rows.push_back({label, mean, std::sqrt(var), static_cast<long>(values.size())});
    }
    return rows;
}

void write_aggregate_csv(const std::vector<AggregateRow>& rows, const std::string& path) {
    auto out = open_csv(path);
    out << "label,mean,stddev,count\n";
    for (const auto& row : rows)
        out << row.label << ',' << fmt(row.mean) << ',' << fmt(row.stddev) << ',' << row.count
            << '\n';
}

std::string emit_summary(const std::string& title,
                         const std::vector<std::pair<std::string, double>>& samples,
                         const std::vector<RunFailure>& failures) {
    std::ostringstream out;
    out << "== " << title << " ==\n";
    for (const auto& row : aggregate_by_label(samples))
        out << "  " << row.label << ": mean " << fmt(row.mean) << " stddev " << fmt(row.stddev)
            << " (n=" << row.count << ")\n";
    if (failures.empty()) {
        out << "  all seeds OK\n";
    } else {
        for (const auto& f : failures)
            out << "  FAIL seed=" << f.seed << ": " << f.error << "\n";
    }
    return out.str();
}

}  // namespace aerial
