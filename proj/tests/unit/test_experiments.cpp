#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "aerial/experiments.hpp"
#include "test_util.hpp"

using namespace aerial;

namespace {

SimConfig small_config() {
    SimConfig cfg;
    cfg.n_bs = 4;
    cfg.n_carriers = 5;
    cfg.n_ues = 6;
    cfg.n_uavs = 6;
    return cfg;
}

std::string temp_path(const char* name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("empty scenario runs the whole game to empty outputs") {
    SimConfig cfg;
    cfg.n_ues = 0;
    cfg.n_uavs = 0;
    Scenario sc = generate_scenario(cfg, 1);
    auto lb = LinkBudgetTable::build(sc);
    GlobalGameResult game = run_global_game(sc, lb);
    CHECK(game.report.per_user.empty());
    CHECK(game.report.mean_outage == 0.0);
    CHECK(game.oplog.records.empty());
}

TEST_CASE("global game output satisfies both audits and beats its inputs") {
    SimConfig cfg = small_config();
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        cfg.seed = seed;
        auto [sc, _] = generate_feasible_scenario(cfg, seed);
        auto lb = LinkBudgetTable::build(sc);
        GlobalGameResult game = run_global_game(sc, lb);

        Assignment matched = run_matching(sc, lb, seed);
        double matching_mean = evaluate_assignment(sc, lb, matched, true).report.mean_outage;
        Assignment random = random_assignment(sc, seed);
        double random_mean = evaluate_assignment(sc, lb, random, false).report.mean_outage;

        CHECK(game.report.mean_outage <= matching_mean + 1e-9);
        CHECK(matching_mean <= random_mean + 0.05);  // directional at this size
        CHECK(game.coalition_sweeps >= 1);
    }
}

TEST_CASE("threshold sweep is evaluated on a fixed optimized state") {
    SimConfig cfg = small_config();
    auto [sc, _] = generate_feasible_scenario(cfg, 11);
    auto lb = LinkBudgetTable::build(sc);
    GlobalGameResult game = run_global_game(sc, lb);
    double prev_ue = -1.0, prev_uav = -1.0;
    for (double g : {0.001, 0.01, 0.1, 1.0, 10.0}) {
        ObjectiveReport rep = report_at_threshold(sc, lb, game.partition, g);
        double ue = mean_outage_of_kind(sc, rep, UserKind::ue);
        double uav = mean_outage_of_kind(sc, rep, UserKind::uav);
        CHECK(ue >= prev_ue - 1e-12);
        CHECK(uav >= prev_uav - 1e-12);
        prev_ue = ue;
        prev_uav = uav;
    }
}

TEST_CASE("gamma sweep rows are complete and monotone per seed") {
    SimConfig cfg = small_config();
    std::vector<double> grid = {0.01, 0.1, 1.0};
    auto result = run_gamma_sweep(cfg, {1, 2}, grid);
    CHECK(result.failures.empty());
    REQUIRE(result.rows.size() == 6);
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        if (result.rows[i].seed != result.rows[i - 1].seed) continue;
        CHECK(result.rows[i].mean_outage_ue >= result.rows[i - 1].mean_outage_ue - 1e-12);
        CHECK(result.rows[i].mean_outage_uav >= result.rows[i - 1].mean_outage_uav - 1e-12);
    }
}

TEST_CASE("device sweep: the aerial curve climbs faster than the ground curve") {
    SimConfig cfg;  // full-size network so the load actually saturates
    auto result = run_device_sweep(cfg, {1, 2, 3}, {30, 90});
    CHECK(result.failures.empty());
    double ue_lo = 0, ue_hi = 0, uav_lo = 0, uav_hi = 0;
    for (const auto& row : result.rows) {
        (row.n_users == 30 ? ue_lo : ue_hi) += row.mean_outage_ue;
        (row.n_users == 30 ? uav_lo : uav_hi) += row.mean_outage_uav;
    }
    CHECK(uav_hi - uav_lo > ue_hi - ue_lo);  // aggregated over matched seeds
    CHECK(ue_hi > ue_lo);                    // both grow with load
    CHECK(uav_hi > uav_lo);
}

TEST_CASE("compare orders the methods the way the games promise") {
    SimConfig cfg = small_config();
    auto result = run_compare(cfg, {5, 6}, {10});
    CHECK(result.failures.empty());
    REQUIRE(result.rows.size() == 8);
    for (std::uint64_t seed : {5u, 6u}) {
        double random = -1, power_only = -1, matching = -1, global = -1;
        for (const auto& row : result.rows) {
            if (row.seed != seed) continue;
            if (row.method == "random") random = row.mean_outage;
            if (row.method == "power_only") power_only = row.mean_outage;
            if (row.method == "matching") matching = row.mean_outage;
            if (row.method == "global") global = row.mean_outage;
        }
        // the guaranteed ordering: coalition refinement only improves the
        // matching-plus-power state; the rest of the rows must exist
        CHECK(global <= matching + 1e-9);
        CHECK(random >= 0.0);
        CHECK(power_only >= 0.0);
    }
}

TEST_CASE("distribution sweep separates the kinds across the band") {
    SimConfig cfg = small_config();
    auto result = run_distribution(cfg, {7, 8});
    CHECK(result.failures.empty());
    REQUIRE(result.per_seed.size() == 2);
    long total = 0;
    for (const auto& row : result.rows) total += row.n_ue + row.n_uav;
    CHECK(total == 2 * (cfg.n_ues + cfg.n_uavs));
    for (const auto& row : result.per_seed)
        CHECK(row.mean_carrier_ue < row.mean_carrier_uav);
}

TEST_CASE("optimality runs the exhaustive search on fully occupied instances") {
    SimConfig cfg;
    cfg.n_bs = 2;
    cfg.n_carriers = 2;
    cfg.n_ues = 2;
    cfg.n_uavs = 2;
    auto result = run_optimality(cfg, {1, 2});
    CHECK(result.failures.empty());
    REQUIRE(result.rows.size() == 2);
    for (const auto& row : result.rows) {
        CHECK(row.game_mean >= row.optimum_mean - 1e-12);
        CHECK(row.ratio >= 1.0 - 1e-9);
    }
}

TEST_CASE("fully occupied generation fills every station") {
    SimConfig cfg;
    cfg.n_bs = 3;
    cfg.n_carriers = 3;
    cfg.n_ues = 5;
    cfg.n_uavs = 4;
    auto [sc, rejections] = generate_fully_occupied_scenario(cfg, 3);
    MESSAGE("rejections before balance: ", rejections);
    for (int bs = 0; bs < sc.n_bs(); ++bs)
        CHECK(static_cast<int>(sc.served_users[bs].size()) == cfg.n_carriers);
    SimConfig bad = cfg;
    bad.n_uavs = 3;  // 8 users cannot fill 9 slots
    CHECK_THROWS_AS((void)generate_fully_occupied_scenario(bad, 3), ConfigError);
}

TEST_CASE("outage check passes its own corpus and round-trips through CSV") {
    std::mt19937_64 rng(3);
    std::vector<LinkSpec> links;
    for (int i = 0; i < 4; ++i) links.push_back(test::random_ue_link(rng, i));
    for (int i = 0; i < 3; ++i) links.push_back(test::random_uav_link(rng, i, 2));
    auto result = run_outage_check(links, 100000, 99, 32);
    CHECK(result.failures.empty());
    REQUIRE(result.rows.size() == 7);
    for (const auto& row : result.rows) CHECK(row.pass);

    std::string path = temp_path("aerial_links.csv");
    {
        std::ofstream out(path);
        out << "kind,m,gamma_th,means\n";
        out << "UE,1,0.1,120.0,30.0,9.5\n";
        out << "UAV,2,0.1,200.0,50.0,20.0,5.0\n";
    }
    auto loaded = load_link_specs_csv(path);
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].kind == UserKind::ue);
    CHECK(loaded[0].interferer_mean_snr.size() == 2);
    CHECK(loaded[1].kind == UserKind::uav);
    REQUIRE(loaded[1].interferer_los_nlos.size() == 1);
    CHECK(loaded[1].interferer_los_nlos[0].first == 20.0);
    std::remove(path.c_str());

    std::string bad = temp_path("aerial_links_bad.csv");
    {
        std::ofstream out(bad);
        out << "UAV,2,0.1,200.0\n";  // missing the serving NLoS column
    }
    CHECK_THROWS_AS((void)load_link_specs_csv(bad), ParseError);
    std::remove(bad.c_str());
}

TEST_CASE("experiment outputs are byte-identical across repeated runs") {
    SimConfig cfg = small_config();
    auto a = run_compare(cfg, {1}, {8});
    auto b = run_compare(cfg, {1}, {8});
    std::string pa = temp_path("aerial_cmp_a.csv"), pb = temp_path("aerial_cmp_b.csv");
    write_compare_csv(a, pa);
    write_compare_csv(b, pb);
    std::ifstream fa(pa), fb(pb);
    std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
    std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
    CHECK(sa == sb);
    CHECK(sa.find("n_users,seed,method") == 0);
    std::remove(pa.c_str());
    std::remove(pb.c_str());
}

TEST_CASE("aggregates collapse a single seed to itself and ignore order") {
    std::vector<std::pair<std::string, double>> one = {{"a", 0.25}};
    auto agg = aggregate_by_label(one);
    REQUIRE(agg.size() == 1);
    CHECK(agg[0].mean == 0.25);
    CHECK(agg[0].stddev == 0.0);
    CHECK(agg[0].count == 1);

    std::vector<std::pair<std::string, double>> fwd = {{"a", 1.0}, {"a", 3.0}, {"b", 5.0}};
    std::vector<std::pair<std::string, double>> rev = {{"b", 5.0}, {"a", 3.0}, {"a", 1.0}};
    auto fa = aggregate_by_label(fwd);
    auto fr = aggregate_by_label(rev);
    REQUIRE(fa.size() == fr.size());
    for (std::size_t i = 0; i < fa.size(); ++i) {
        CHECK(fa[i].label == fr[i].label);
        CHECK(fa[i].mean == fr[i].mean);
        CHECK(fa[i].stddev == fr[i].stddev);
    }
}

TEST_CASE("runners refuse an empty seed list") {
    SimConfig cfg = small_config();
    CHECK_THROWS_AS((void)run_gamma_sweep(cfg, {}, {0.1}), PreconditionError);
    CHECK_THROWS_AS((void)run_compare(cfg, {}, {10}), PreconditionError);
    CHECK_THROWS_AS((void)run_distribution(cfg, {}), PreconditionError);
}

TEST_CASE("the digest names every failing seed") {
    std::vector<RunFailure> failures = {{42, "synthetic failure"}};
    std::string digest = emit_summary("demo", {{"metric", 0.5}}, failures);
    CHECK(digest.find("FAIL seed=42") != std::string::npos);
    CHECK(digest.find("synthetic failure") != std::string::npos);
    std::string ok = emit_summary("demo", {{"metric", 0.5}}, {});
    CHECK(ok.find("all seeds OK") != std::string::npos);
}

TEST_CASE("dump files carry the documented headers") {
    SimConfig cfg = small_config();
    auto [sc, _] = generate_feasible_scenario(cfg, 2);
    auto lb = LinkBudgetTable::build(sc);
    GlobalGameResult game = run_global_game(sc, lb);

    std::string links = temp_path("aerial_dump_links.csv");
    std::string matching = temp_path("aerial_dump_matching.csv");
    std::string ops = temp_path("aerial_dump_ops.csv");
    dump_links_csv(lb, links);
    dump_matching_csv(sc, game.assignment, matching);
    dump_ops_csv(game.oplog, ops);

    auto first_line = [](const std::string& path) {
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        return line;
    };
    CHECK(first_line(links) ==
          "bs,user,kind,d2d_m,d3d_m,pl_ue_db,pl_los_db,pl_nlos_db,p_los,power_floor_w");
    CHECK(first_line(matching) == "user,kind,bs,carrier");
    CHECK(first_line(ops) == "step,type,user_ids,from,to,sum_w_before,sum_w_after");
    for (const auto& p : {links, matching, ops}) std::remove(p.c_str());
}
