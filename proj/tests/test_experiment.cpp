// SPDX-License-Identifier: Apache-2.0

#include "fdadm/experiment.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace fdadm;

namespace
{

ExperimentConfig small_config(SweepVariable var, std::vector<double> grid, std::uint64_t symbols = 2000)
{
    auto cfg = default_config();
    cfg.sweep.variable = var;
    cfg.sweep.grid = std::move(grid);
    cfg.symbols = symbols;
    cfg.seed = 42;
    return cfg;
}

std::string config_error_path(std::string_view text)
{
    try
    {
        (void)parse_config(text);
    }
    catch (const ConfigError& e)
    {
        return e.path;
    }
    return "<none>";
}

} // namespace

TEST_CASE("empty config yields the defaults")
{
    const auto cfg = parse_config("{}");
    CHECK(cfg.array.half_count == 3);
    CHECK(cfg.array.f0 == 10e9);
    CHECK(cfg.array.delta_f == 2e3);
    CHECK(cfg.array.g == 1.0);
    CHECK(cfg.array.height == doctest::Approx(4.25 * kSpeedOfLight / 10e9));
    CHECK(cfg.beta1 == 0.6);
    CHECK(cfg.transmit().beta2 == doctest::Approx(0.8));
    CHECK(cfg.snr_db == 10.0);
    CHECK(cfg.bob_r == 150e3);
    CHECK(cfg.bob_theta == 40.0);
    CHECK(cfg.bob_psi == 70.0);
    CHECK(cfg.time() == doctest::Approx(150e3 / kSpeedOfLight));
    CHECK(cfg.mode == ChannelMode::TwoRayMultipath);
    CHECK(cfg.symbols == 100000);
    CHECK(cfg.sweep.variable == SweepVariable::Theta);
    CHECK(cfg.sweep.grid.size() == 181);
    CHECK(cfg.sweep.grid.front() == 0.0);
    CHECK(cfg.sweep.grid.back() == 90.0);
    CHECK(cfg.synthesis.tol == 1e-9);
    CHECK(cfg.warnings.empty());
}

TEST_CASE("config parsing")
{
    SUBCASE("fields are read")
    {
        const auto cfg = parse_config(R"({
            "schema_version": 1,
            "array": {"N": 5, "f0_hz": 2.4e9, "height_m": 3.0},
            "transmit": {"beta1": 0.9, "snr_db": 5, "noise_calibration": "total-power"},
            "bob": {"r_m": 90000, "theta_deg": 30, "psi_deg": 45},
            "observation_time_s": 0.001,
            "eves": {"count": 3, "r_range_m": [60000, 70000], "seed": 11},
            "sweep": {"variable": "r", "grid": [60000, 80000, 100000]},
            "mode": "single-path",
            "monte_carlo": {"symbols": 500, "seed": 9},
            "weights": {"regeneration": "static", "an_modulus": "bounded", "b_max": 2},
            "output": {"directory": "out"}
        })");
        CHECK(cfg.array.half_count == 5);
        CHECK(cfg.array.spacing == doctest::Approx(kSpeedOfLight / 4.8e9));
        CHECK(cfg.array.height == 3.0);
        CHECK(cfg.transmit().beta2 == doctest::Approx(std::sqrt(1 - 0.81)));
        CHECK(cfg.calibration == NoiseCalibration::TotalPower);
        CHECK(cfg.bob().range() == 90000);
        CHECK(cfg.time() == 0.001);
        CHECK(cfg.eves.count == 3);
        CHECK(cfg.eves.r_max == 70000);
        CHECK(cfg.sweep.variable == SweepVariable::Range);
        CHECK(cfg.sweep.grid.size() == 3);
        CHECK(cfg.mode == ChannelMode::SinglePathLoS);
        CHECK(cfg.symbols == 500);
        CHECK(cfg.seed == 9);
        CHECK(cfg.regeneration == Regeneration::Static);
        CHECK(cfg.synthesis.an_modulus == AnModulus::Bounded);
        CHECK(cfg.output_dir == "out");
    }

    SUBCASE("beta2 alone implies beta1; inconsistent pair rejected")
    {
        const auto cfg = parse_config(R"({"transmit": {"beta2": 0.6}})");
        CHECK(cfg.beta1 == doctest::Approx(0.8));
        CHECK(config_error_path(R"({"transmit": {"beta1": 0.6, "beta2": 0.6}})") == "transmit.beta2");
    }

    SUBCASE("errors name the offending field")
    {
        CHECK(config_error_path(R"({"schema_version": 2})") == "schema_version");
        CHECK(config_error_path(R"({"array": {"N": 3, "colour": 1}})") == "array.colour");
        CHECK(config_error_path(R"({"unknown": 1})") == "unknown");
        CHECK(config_error_path(R"({"array": {"N": "three"}})") == "array.N");
        CHECK(config_error_path(R"({"array": {"N": 2.5}})") == "array.N");
        CHECK(config_error_path(R"({"bob": {"r_m": -1}})") == "bob.r_m");
        CHECK(config_error_path(R"({"sweep": {"variable": "theta", "grid": []}})") == "sweep.grid");
        CHECK(config_error_path(R"({"sweep": {"variable": "theta", "grid": [1, 3, 2]}})") == "sweep.grid");
        CHECK(config_error_path(R"({"sweep": {"variable": "phi", "grid": [1]}})") == "sweep.variable");
        CHECK(config_error_path(R"({"mode": "three-ray"})") == "mode");
        CHECK(config_error_path(R"({"transmit": {"noise_calibration": "x"}})") ==
              "transmit.noise_calibration");
        CHECK(config_error_path(R"({"monte_carlo": {"symbols": 0}})") == "monte_carlo.symbols");
        CHECK(config_error_path(R"({"eves": {"theta_range_deg": [50, 10]}})") == "eves.theta_range_deg");
        CHECK(config_error_path("{not json") == "$");
    }

    SUBCASE("range grids and narrowband warning")
    {
        const auto cfg = parse_config(R"({"sweep": {"variable": "psi", "grid": {"start": 0, "stop": 180, "points": 7}},
                                          "array": {"delta_f_hz": 1e8}})");
        REQUIRE(cfg.sweep.grid.size() == 7);
        CHECK(cfg.sweep.grid[1] == doctest::Approx(30.0));
        CHECK(cfg.warnings.size() == 1);
    }

    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("linspace")
{
    const auto g = linspace(0.0, 90.0, 181);
    CHECK(g.size() == 181);
    CHECK(g[80] == doctest::Approx(40.0));
    CHECK(g.back() == 90.0);
    CHECK(linspace(3.0, 7.0, 1) == std::vector<double>{3.0});
}

TEST_CASE("sampled eavesdroppers respect the configured box")
{
    auto cfg = default_config();
    cfg.eves.count = 50;
    const auto eves = sample_eves(cfg);
    REQUIRE(eves.points.size() == 50);
    for (const auto& e : eves.points)
    {
        CHECK(e.range() >= 50e3);
        CHECK(e.range() <= 300e3);
        CHECK(rad_to_deg(e.theta()) <= 90.0);
        CHECK(rad_to_deg(e.psi()) <= 180.0);
        CHECK_FALSE(e == cfg.bob());
    }
    CHECK(sample_eves(cfg).points == eves.points);
}

TEST_CASE("BER sweeps")
{
    SUBCASE("theta lobe is centred on Bob")
    {
        const auto cfg = small_config(SweepVariable::Theta, linspace(30.0, 50.0, 21));
        const auto rows = run_ber_sweep(cfg);
        REQUIRE(rows.size() == 21);
        const auto best = std::min_element(rows.begin(), rows.end(), [](const auto& x, const auto& y) {
            return x.result.ber < y.result.ber;
        });
        CHECK(rows[10].result.ber == best->result.ber);
        CHECK(rows[10].sweep_value == doctest::Approx(40.0));
        CHECK(rows.front().result.ber > 0.1);
        CHECK(rows.back().result.ber > 0.1);
    }

    SUBCASE("range plateau away from Bob")
    {
        const auto cfg = small_config(SweepVariable::Range, linspace(60e3, 240e3, 7));
        const auto rows = run_ber_sweep(cfg);
        for (const auto& row : rows)
        {
            if (row.sweep_value == 150e3)
                CHECK(row.result.ber < 0.01);
            else
            {
                CHECK(row.result.ber > 0.2);
                CHECK(row.result.ber < 0.6);
            }
        }
    }

    SUBCASE("modes share the grid and differ in the lobe")
    {
        auto cfg = small_config(SweepVariable::Theta, linspace(30.0, 50.0, 21));
        const auto two_ray = run_ber_sweep(cfg);
        cfg.mode = ChannelMode::SinglePathLoS;
        const auto single = run_ber_sweep(cfg);
        REQUIRE(two_ray.size() == single.size());
        for (std::size_t i = 0; i < single.size(); ++i)
        {
            CHECK(two_ray[i].sweep_value == single[i].sweep_value);
            CHECK(single[i].result.mode == ChannelMode::SinglePathLoS);
        }
        CHECK(single[10].result.ber < 0.01);
    }

    SUBCASE("wrong variable")
    {
        const auto cfg = small_config(SweepVariable::SnrDb, {0.0, 10.0});
        CHECK_THROWS_AS(run_ber_sweep(cfg), ConfigError);
        CHECK_THROWS_AS(sweep_point(cfg, 1.0), ConfigError);
    }
}

TEST_CASE("secrecy sweeps")
{
    SUBCASE("nested eavesdropper sets")
    {
        auto cfg = small_config(SweepVariable::SnrDb, {-10.0, 0.0, 10.0, 20.0}, 500);
        cfg.eves.count = 4;
        const auto rows = run_secrecy_sweep(cfg);
        REQUIRE(rows.size() == 16);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t v = 0; v < 4; ++v)
            {
                const auto& row = rows[4 * i + v];
                CHECK(row.eve_count == v + 1);
                CHECK(row.secrecy_rate >= 0.0);
                if (v > 0)
                    CHECK(row.secrecy_rate <= rows[4 * i + v - 1].secrecy_rate);
            }
        std::ostringstream os;
        write_secrecy_csv(os, cfg.sweep.variable, rows);
        CHECK(os.str().rfind("snr_db,secrecy_rate,V,beta1\n-10,", 0) == 0);
    }

    SUBCASE("eavesdropper heatmap vanishes at Bob")
    {
        auto cfg = small_config(SweepVariable::EveLocation, {100e3, 150e3, 200e3}, 300);
        cfg.sweep.grid2 = {20.0, 40.0, 60.0};
        const auto rows = run_secrecy_sweep(cfg);
        REQUIRE(rows.size() == 9);
        CHECK(rows[4].r == 150e3);
        CHECK(rows[4].theta == 40.0);
        CHECK(rows[4].secrecy_rate < 1e-8);
        for (const auto& row : rows)
            CHECK(row.secrecy_rate <= bob_rate(cfg.transmit()) + 1e-12);
        std::ostringstream os;
        write_secrecy_csv(os, cfg.sweep.variable, rows);
        CHECK(os.str().rfind("eve_r_m,eve_theta_deg,secrecy_rate,V,beta1\n100000,20,", 0) == 0);
    }

    CHECK_THROWS_AS(run_secrecy_sweep(small_config(SweepVariable::Theta, {1.0}, 10)), ConfigError);
}

TEST_CASE("weight emission and verification")
{
    auto cfg = default_config();
    const auto one = emit_weights(cfg, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].weights.size() == 7);
    for (const auto& a : one[0].weights.a)
        CHECK(std::abs(std::abs(a) - 1.0) <= 1e-9);

    const auto draws = emit_weights(cfg, 5);
    CHECK(draws[0].weights.a == one[0].weights.a);
    CHECK(draws[1].weights.a != draws[0].weights.a);

    const auto rows = verify_draws(cfg, draws, 1e-9);
    REQUIRE(rows.size() == 5);
    for (const auto& r : rows)
        CHECK(r.report.passed);

    std::ostringstream os;
    write_verify_csv(os, rows);
    CHECK(os.str().rfind("draw_index,kappa_residual,eta_residual,passed\n0,", 0) == 0);

    // Weights for one Bob do not serve another.
    auto moved = cfg;
    moved.bob_theta = 20.0;
    CHECK_FALSE(verify_draws(moved, draws, 1e-9).front().report.passed);

    auto bigger = cfg;
    bigger.array = ArrayConfig::with_carrier(5, 10e9, 2e3, 1.0);
    CHECK_THROWS_AS(verify_draws(bigger, draws, 1e-9), ConfigError);
    CHECK_THROWS_AS(emit_weights(cfg, 0), std::invalid_argument);
}

TEST_CASE("lobe width")
{
    const std::vector<double> grid{0, 1, 2, 3, 4, 5, 6};
    const std::vector<double> vals{0.5, 0.5, 0.1, 0.0, 0.1, 0.5, 0.5};
    // Crossings at 1.75 and 4.25.
    CHECK(lobe_width(grid, vals, 0.2, 3) == doctest::Approx(2.5));
    CHECK(lobe_width(grid, vals, 0.05, 3) == doctest::Approx(0.5 + 0.5));
    CHECK(lobe_width(grid, vals, 0.0, 3) == 0.0);
    // Open at the edge: the region runs to the last grid value.
    const std::vector<double> edge{0.0, 0.0, 0.5};
    CHECK(lobe_width(std::vector<double>{0, 1, 2}, edge, 0.25, 0) == doctest::Approx(1.5));
    CHECK_THROWS_AS(lobe_width(grid, edge, 0.1, 0), std::invalid_argument);
}

TEST_CASE("region area")
{
    // 3 x 4 map; the low cells at (0,0), (1,0), (1,1) are connected, (2,3) is not.
    const std::vector<double> v{0, 1, 1, 1, 0, 0, 1, 1, 1, 1, 1, 0};
    CHECK(region_area(v, 3, 4, 0.5, 1, 1) == 3);
    CHECK(region_area(v, 3, 4, 0.5, 2, 3) == 1);
    CHECK(region_area(v, 3, 4, 0.5, 0, 2) == 0);
    CHECK(region_area(v, 3, 4, 2.0, 0, 2) == 12);
    CHECK_THROWS_AS(region_area(v, 3, 3, 0.5, 0, 0), std::invalid_argument);
}

TEST_CASE("CSV output is reproducible")
{
    const auto cfg = small_config(SweepVariable::Psi, linspace(60.0, 80.0, 5), 500);
    std::ostringstream a, b;
    write_ber_csv(a, run_ber_sweep(cfg));
    write_ber_csv(b, run_ber_sweep(cfg));
    CHECK(a.str() == b.str());
    CHECK(a.str().rfind("sweep_value,ber,stderr,trials,mode\n60,", 0) == 0);

    std::ostringstream wa, wb;
    write_weights_csv(wa, emit_weights(cfg, 3));
    write_weights_csv(wb, emit_weights(cfg, 3));
    CHECK(wa.str() == wb.str());

    auto other = cfg;
    other.seed = 43;
    std::ostringstream c;
    write_ber_csv(c, run_ber_sweep(other));
    CHECK(c.str() != a.str());
}
