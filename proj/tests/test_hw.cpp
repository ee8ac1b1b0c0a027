#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <fstream>

#include "doctest.h"
#include "qraft/hw.hpp"

using namespace qraft;

TEST_CASE("depolarizing rate inversion") {
    CHECK(depolarizing_rate(1.0, 1) == doctest::Approx(0.0));
    CHECK(depolarizing_rate(1.0 - 0.003, 2) == doctest::Approx(0.00375).epsilon(1e-12));
    CHECK(depolarizing_rate(1.0 - 0.0004, 1) == doctest::Approx(0.0006).epsilon(1e-12));
    CHECK_THROWS_AS(depolarizing_rate(0.5, 3), std::invalid_argument);
    CHECK_THROWS_AS(depolarizing_rate(1.5, 1), std::invalid_argument);
}

TEST_CASE("depolarizing rate round-trips the fidelity formula") {
    for (int n = 1; n <= 2; ++n) {
        double c = n == 1 ? 2.0 / 3.0 : 4.0 / 5.0;
        double max_p = n == 1 ? 0.75 : 0.9375;
        for (int i = 0; i <= 100; ++i) {
            double p = max_p * i / 100.0;
            double fid = 1.0 - c * p;
            CHECK(depolarizing_rate(fid, n) == doctest::Approx(p).epsilon(1e-12));
        }
    }
}

TEST_CASE("idle error rate") {
    CHECK(idle_error_rate(0.0, 100e-6) == doctest::Approx(0.0));
    CHECK(idle_error_rate(200e-9, 100e-6) ==
          doctest::Approx(0.75 * (1.0 - std::exp(-0.002))).epsilon(1e-12));
    CHECK(idle_error_rate(1.0, 100e-6) == doctest::Approx(0.75).epsilon(1e-9));
    CHECK_THROWS(idle_error_rate(-1.0, 1e-4));
    CHECK_THROWS(idle_error_rate(1.0, 0.0));

    // monotone, and derivative at 0 is (3/4)/t1
    double t1 = 37e-6;
    double prev = 0;
    for (int i = 1; i <= 50; ++i) {
        double cur = idle_error_rate(i * 1e-6, t1);
        CHECK(cur > prev);
        prev = cur;
    }
    double h = 1e-12;
    double deriv = idle_error_rate(h, t1) / h;
    CHECK(deriv == doctest::Approx(0.75 / t1).epsilon(1e-6));
}

TEST_CASE("noise channel derivation") {
    auto base = hardware_preset("baseline");
    auto n = derive_noise_channels(base);
    CHECK(n.p_dep_2q == doctest::Approx(0.00375).epsilon(1e-12));
    CHECK(n.p_dep_1q == doctest::Approx(0.0006).epsilon(1e-12));
    CHECK(n.p_prep_flip == doctest::Approx(0.02));
    CHECK(n.p_meas_flip == doctest::Approx(0.01));
    CHECK(n.p_reset_flip == doctest::Approx(0.01));

    auto target = hardware_preset("target");
    CHECK(derive_noise_channels(target).p_dep_2q == doctest::Approx(0.000625).epsilon(1e-12));

    HardwareParams zero = base;
    zero.err_1q = zero.err_2q = zero.err_prep = zero.err_meas = zero.err_reset = 0;
    auto nz = derive_noise_channels(zero);
    CHECK(nz.p_dep_1q == 0.0);
    CHECK(nz.p_dep_2q == 0.0);
    CHECK(nz.p_prep_flip == 0.0);
}

TEST_CASE("logical cycle time") {
    auto base = hardware_preset("baseline");
    CHECK(logical_cycle_time(base, 1) == doctest::Approx(750e-9).epsilon(1e-12));
    auto target = hardware_preset("target");
    CHECK(logical_cycle_time(target, 39) == doctest::Approx(17.55e-6).epsilon(1e-12));
    // exactly linear in d
    for (long long d : {3LL, 5LL, 7LL, 9LL, 107LL})
        CHECK(logical_cycle_time(base, d) == doctest::Approx(double(d) * 750e-9).epsilon(1e-12));
    CHECK_THROWS(logical_cycle_time(base, 4));
    CHECK_THROWS(logical_cycle_time(base, 0));
    // single measurement interval variant
    CHECK(logical_cycle_time(base, 1, true) == doctest::Approx(550e-9).epsilon(1e-12));
}

TEST_CASE("duration parsing") {
    CHECK(parse_duration("25ns") == doctest::Approx(25e-9));
    CHECK(parse_duration("1us") == doctest::Approx(1e-6));
    CHECK(parse_duration("100µs") == doctest::Approx(100e-6));
    CHECK(parse_duration("1.5ms") == doctest::Approx(1.5e-3));
    CHECK(parse_duration("2") == doctest::Approx(2.0));
    CHECK_THROWS_AS(parse_duration("12parsecs"), parse_error);
}

static std::string write_temp(const std::string& name, const std::string& contents) {
    std::string path = std::string("/tmp/") + name;
    std::ofstream out(path);
    out << contents;
    return path;
}

TEST_CASE("hardware parameter files") {
    const char* good = R"({"t1":"100us","t2":"100us","err_1q":4e-4,"err_2q":3e-3,
      "err_prep":0.02,"err_meas":0.01,"err_reset":0.01,"time_1q":"25ns","time_2q":"25ns",
      "time_prep":"1us","time_meas":"200ns","time_reset":"200ns","t1_tailedness":"71us"})";
    auto p = load_hardware_params(write_temp("hw_good.json", good));
    auto base = hardware_preset("baseline");
    CHECK(p.t1 == doctest::Approx(base.t1));
    CHECK(p.err_2q == doctest::Approx(base.err_2q));
    CHECK(p.time_meas == doctest::Approx(base.time_meas));
    CHECK(p.t1_tailedness == doctest::Approx(71e-6));

    SUBCASE("invariant violation") {
        std::string bad(good);
        bad.replace(bad.find("3e-3"), 4, "1.5 ");
        CHECK_THROWS_WITH_AS(load_hardware_params(write_temp("hw_bad.json", bad)),
                             doctest::Contains("err_2q"), std::invalid_argument);
    }
    SUBCASE("missing field") {
        std::string missing = good;
        missing.replace(missing.find("\"t1\":\"100us\","), 13, "");
        CHECK_THROWS_WITH_AS(load_hardware_params(write_temp("hw_missing.json", missing)),
                             doctest::Contains("t1"), parse_error);
    }
    SUBCASE("parse error") {
        CHECK_THROWS_AS(load_hardware_params(write_temp("hw_junk.json", "{nope")), parse_error);
    }
    SUBCASE("fixtures ship all presets") {
        for (const char* name : {"baseline", "target", "desired"}) {
            auto fp = load_hardware_params(std::string(QRAFT_SOURCE_DIR) + "/data/hw/" + name +
                                           ".json");
            auto preset = hardware_preset(name);
            CHECK(fp.t1 == doctest::Approx(preset.t1));
            CHECK(fp.err_2q == doctest::Approx(preset.err_2q));
            CHECK(fp.err_prep == doctest::Approx(preset.err_prep));
            CHECK(fp.time_reset == doctest::Approx(preset.time_reset));
            CHECK(fp.t1_tailedness == doctest::Approx(preset.t1_tailedness));
        }
    }
}
