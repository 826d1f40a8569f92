#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "aerial/channel.hpp"
#include "aerial/errors.hpp"
#include "aerial/rng.hpp"

using namespace aerial;

TEST_CASE("UE path loss anchor points") {
    CHECK(pathloss_ue_db(1.0) == doctest::Approx(15.3).epsilon(1e-12));
    CHECK(pathloss_ue_db(100.0) == doctest::Approx(90.5).epsilon(1e-12));
    // monotone in distance
    double prev = pathloss_ue_db(1.0);
    for (double d = 2.0; d < 2000.0; d *= 1.7) {
        double pl = pathloss_ue_db(d);
        CHECK(pl > prev);
        prev = pl;
    }
    // sub-metre distances clamp to the 1 m value
    CHECK(pathloss_ue_db(0.2) == doctest::Approx(15.3));
}

TEST_CASE("aerial path loss anchor points") {
    CHECK(pathloss_uav_db(1.0, 50.0, 2.0, PathCondition::los) ==
          doctest::Approx(28.0 + 20.0 * std::log10(2.0)).epsilon(1e-12));
    // NLoS, h=100, d=100, f=2: -17.5 + (46-14)*2 + 20 log10(80 pi / 3),
    // evaluated independently below from its three parts
    double part = -17.5 + (46.0 - 7.0 * std::log10(100.0)) * std::log10(100.0) +
                  20.0 * std::log10(40.0 * M_PI * 2.0 / 3.0);
    CHECK(part == doctest::Approx(84.96).epsilon(1e-3));
    CHECK(pathloss_uav_db(100.0, 100.0, 2.0, PathCondition::nlos) ==
          doctest::Approx(part).epsilon(1e-12));
}

TEST_CASE("NLoS exceeds LoS at equal distance beyond the overhead corner") {
    // (24 - 7 log10 h) log10 d > 13.06 delimits the region; d >= 92 m covers
    // the whole altitude band.
    for (double h = 22.5; h <= 300.0; h += 12.5)
        for (double d = 92.0; d <= 1000.0; d *= 1.4)
            CHECK(pathloss_uav_db(d, h, 2.0, PathCondition::nlos) >
                  pathloss_uav_db(d, h, 2.0, PathCondition::los));
    // nearly-overhead high-altitude links genuinely invert: the printed NLoS
    // slope (46 - 7 log10 h) sinks below the LoS slope there
    CHECK(pathloss_uav_db(50.0, 222.5, 2.0, PathCondition::nlos) <
          pathloss_uav_db(50.0, 222.5, 2.0, PathCondition::los));
}

TEST_CASE("altitude outside the validity band is rejected") {
    CHECK_THROWS_AS((void)pathloss_uav_db(100.0, 21.0, 2.0, PathCondition::los),
                    PreconditionError);
    CHECK_THROWS_AS((void)pathloss_uav_db(100.0, 301.0, 2.0, PathCondition::los),
                    PreconditionError);
}

TEST_CASE("LoS probability branches") {
    CHECK(los_probability(12345.0, 150.0) == 1.0);  // above 100 m, always LoS
    CHECK(los_probability(10.0, 50.0) == 1.0);      // inside the breakpoint
    // continuity at d1 and monotone decay beyond it
    double h = 50.0;
    double d1 = std::max(460.0 * std::log10(h) - 700.0, 18.0);
    CHECK(std::abs(los_probability(d1, h) - los_probability(d1 + 1e-9, h)) < 1e-9);
    CHECK(std::abs(los_probability(d1, h) - 1.0) < 1e-12);
    double prev = 1.0;
    for (double d = d1; d < 5000.0; d += 25.0) {
        double p = los_probability(d, h);
        CHECK(p <= prev + 1e-15);
        CHECK(p >= 0.0);
        prev = p;
    }
    CHECK(prev < 0.35);  // decays far from the BS
}

TEST_CASE("mean SNR formulas") {
    CHECK(mean_snr_ue(1.0, 0.0, 1.0) == doctest::Approx(1.0));
    CHECK(mean_snr_ue(20.0, 90.5, 1e-16) == doctest::Approx(1.7825018762674918e8).epsilon(1e-12));
    CHECK(mean_snr_ue(2.0, 50.0, 1e-16) == doctest::Approx(2.0 * mean_snr_ue(1.0, 50.0, 1e-16)));

    auto [a1, b1] = mean_snr_uav(5.0, 60.0, 70.0, 1.0, 1e-16);
    CHECK(b1 == 0.0);
    auto [a2, b2] = mean_snr_uav(5.0, 60.0, 70.0, 0.0, 1e-16);
    CHECK(a2 == 0.0);
    auto [a3, b3] = mean_snr_uav(5.0, 65.0, 65.0, 0.5, 1e-16);
    CHECK(a3 == doctest::Approx(b3));
    CHECK(a2 + b2 == doctest::Approx(mean_snr_ue(5.0, 70.0, 1e-16)));
}

TEST_CASE("power floor anchor value and scaling laws") {
    LinkBudget ue;
    ue.kind = UserKind::ue;
    ue.pl_ue_db = 90.5;
    CHECK(min_power_w(ue, 0.1, 1e-16) == doctest::Approx(1.1220184543019632e-8).epsilon(1e-12));
    CHECK(min_power_w(ue, 0.0, 1e-16) == 0.0);
    // exact linearity in snr_th and n0
    CHECK(min_power_w(ue, 0.2, 1e-16) == doctest::Approx(2.0 * min_power_w(ue, 0.1, 1e-16)));
    CHECK(min_power_w(ue, 0.1, 2e-16) == doctest::Approx(2.0 * min_power_w(ue, 0.1, 1e-16)));
}

TEST_CASE("UE round trip: mean SNR at the floor equals snr_th") {
    SimConfig cfg;
    BaseStation bs{0, 0.0, 0.0, 25.0};
    User u{0, UserKind::ue, 140.0, -220.0, 0.0};
    LinkBudget lb = make_link_budget(bs, u, cfg);
    CHECK(mean_snr_ue(lb.power_floor_w, lb.pl_ue_db, cfg.n0_w) ==
          doctest::Approx(cfg.snr_th).epsilon(1e-12));
}

TEST_CASE("gains positive and finite over the distance range") {
    SimConfig cfg;
    BaseStation bs{0, 0.0, 0.0, 25.0};
    std::mt19937_64 rng(3);
    for (int i = 0; i < 500; ++i) {
        double d = uniform_range(rng, 1.0, 2000.0);
        bool uav = uniform01(rng) < 0.5;
        User u{0, uav ? UserKind::uav : UserKind::ue, d, 0.0,
               uav ? uniform_range(rng, 22.5, 300.0) : 0.0};
        LinkBudget lb = make_link_budget(bs, u, cfg);
        if (uav) {
            CHECK(lb.los_gain_per_w + lb.nlos_gain_per_w > 0.0);
            CHECK(std::isfinite(lb.los_gain_per_w));
            CHECK(std::isfinite(lb.nlos_gain_per_w));
            CHECK(lb.p_los >= 0.0);
            CHECK(lb.p_los <= 1.0);
        } else {
            CHECK(lb.gain_per_w > 0.0);
            CHECK(std::isfinite(lb.gain_per_w));
        }
        CHECK(lb.power_floor_w > 0.0);
    }
}

TEST_CASE("aerial floors usually sit below ground floors at equal distance") {
    // Directional claim; measured as a violation rate over random geometries.
    SimConfig cfg;
    BaseStation bs{0, 0.0, 0.0, 25.0};
    std::mt19937_64 rng(11);
    int total = 2000, violations = 0;
    for (int i = 0; i < total; ++i) {
        double x = uniform_range(rng, 20.0, 900.0);
        double y = uniform_range(rng, 20.0, 900.0);
        User ue{0, UserKind::ue, x, y, 0.0};
        User uav{1, UserKind::uav, x, y, uniform_range(rng, 22.5, 300.0)};
        double floor_ue = make_link_budget(bs, ue, cfg).power_floor_w;
        double floor_uav = make_link_budget(bs, uav, cfg).power_floor_w;
        if (floor_uav >= floor_ue) ++violations;
    }
    double rate = static_cast<double>(violations) / total;
    MESSAGE("aerial-floor violation rate: ", rate);
    CHECK(rate < 0.2);
}

TEST_CASE("link budget table covers every pair") {
    SimConfig cfg;
    cfg.n_bs = 3;
    cfg.n_ues = 2;
    cfg.n_uavs = 2;
    std::vector<BaseStation> bss = {{0, 100, 100, 25}, {1, 800, 200, 25}, {2, 400, 700, 25}};
    std::vector<User> users = {{0, UserKind::ue, 50, 50, 0},
                               {1, UserKind::ue, 600, 600, 0},
                               {2, UserKind::uav, 300, 300, 80},
                               {3, UserKind::uav, 700, 100, 250}};
    auto table = LinkBudgetTable::build(cfg, bss, users);
    CHECK(table.n_bs() == 3);
    CHECK(table.n_users() == 4);
    for (int b = 0; b < 3; ++b)
        for (int v = 0; v < 4; ++v) {
            CHECK(table.at(b, v).bs == b);
            CHECK(table.at(b, v).user == v);
        }
}
