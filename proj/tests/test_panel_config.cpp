#include <filesystem>
#include <fstream>

#include "bps/config.hpp"
#include "bps/panel.hpp"
#include "bps/synth.hpp"
#include "doctest.h"

using namespace bps;
namespace fs = std::filesystem;

TEST_CASE("month encoding") {
    CHECK(parse_month("1986-01") == 1986 * 12);
    CHECK(parse_month("2015-12") == 2015 * 12 + 11);
    CHECK(format_month(parse_month("1993-07")) == "1993-07");
    CHECK(parse_month("2001-01") - parse_month("2000-12") == 1);
    CHECK_THROWS_AS(parse_month("1986-13"), DataError);
    CHECK_THROWS_AS(parse_month("1986/01"), DataError);
    CHECK_THROWS_AS(parse_month("86-01"), DataError);
}

TEST_CASE("panel save/load round-trip is bit-exact") {
    TimeSeriesPanel p;
    p.names = {"a", "b"};
    p.roles = {SeriesRole::change, SeriesRole::level};
    p.months = {2000 * 12, 2000 * 12 + 1};
    p.values = Matrix(2, 2);
    p.values << 0.1, -2.0 / 3.0, 1e-17, 123456.789012345678;

    auto path = fs::temp_directory_path() / "bps_panel_test.csv";
    save_panel(p, path.string());
    TimeSeriesPanel q = load_panel(path.string());
    CHECK(q.names == p.names);
    CHECK(q.months == p.months);
    CHECK((q.values - p.values).cwiseAbs().maxCoeff() == 0.0);
    fs::remove(path);
}

TEST_CASE("panel validation errors") {
    auto path = fs::temp_directory_path() / "bps_panel_bad.csv";
    {
        std::ofstream out(path);
        out << "date,a\n2000-01,1.0\n2000-03,2.0\n";
    }
    CHECK_THROWS_WITH_AS(load_panel(path.string()),
                         doctest::Contains("missing 2000-02"), DataError);
    {
        std::ofstream out(path);
        out << "date,a\n2000-01,1.0\n2000-02,oops\n";
    }
    CHECK_THROWS_AS(load_panel(path.string()), DataError);
    {
        std::ofstream out(path);
        out << "date,a\n2000-01,1.0\n2000-01,2.0\n";
    }
    CHECK_THROWS_AS(load_panel(path.string()), DataError);
    fs::remove(path);
    CHECK_THROWS_AS(load_panel((path.string() + ".nope")), DataError);
}

TEST_CASE("full-schedule panel loads with T=360") {
    SynthSpec spec;
    spec.q = 6;
    spec.T = 360;
    spec.start_month = parse_month("1986-01");
    spec.ar = 0.8;
    spec.cross = 0.02;
    TimeSeriesPanel p = synth_generate(spec, 99);
    auto path = fs::temp_directory_path() / "bps_panel_360.csv";
    save_panel(p, path.string());
    TimeSeriesPanel q = load_panel(path.string());
    CHECK(q.rows() == 360);
    CHECK(q.cols() == 6);
    CHECK(q.months.front() == parse_month("1986-01"));
    CHECK(q.months.back() == parse_month("2015-12"));
    fs::remove(path);
}

TEST_CASE("config defaults match the reference setup") {
    RunConfig cfg = parse_config_text("data.panel=panel.csv\n");
    CHECK(cfg.bps_delta == 0.99);
    CHECK(cfg.bps_beta == 0.99);
    CHECK(cfg.bps_n0 == 7.0);
    CHECK(cfg.bps_d0_scale == 0.01);
    CHECK(cfg.agent_delta == 0.99);
    CHECK(cfg.agent_beta == 0.99);
    CHECK(cfg.agent_draws == 5000);
    CHECK(cfg.agent_lags == std::vector<std::string>{"1", "12", "3", "1:3:9", "1:6:12"});
    CHECK(cfg.density_mode == DensityMode::empirical);
    CHECK(cfg.bps_start == parse_month("1993-07"));
    CHECK(cfg.train_end == parse_month("2000-12"));
    CHECK(cfg.test_end == parse_month("2015-12"));
    CHECK(cfg.burn_in == 3000);
    CHECK(cfg.n_saved == 5000);
    CHECK(cfg.horizons == std::vector<int>{1});
    CHECK(cfg.intercept_var_for(1) == 0.001);
    CHECK(cfg.intercept_var_for(12) == 0.01);
    CHECK(cfg.intercept_var_for(24) == 0.1);
    CHECK(cfg.coef_var_for("anything") == 1.0);
}

TEST_CASE("config parsing, overrides, and errors") {
    RunConfig cfg = parse_config_text(
        "# comment\n"
        "data.panel = data/p.csv\n"
        "data.role.i = cumulative\n"
        "out.dir=results\n"
        "seed=42\n"
        "horizons=1, 12,24\n"
        "bps.delta=0.95\n"
        "bps.intercept_var.k12=0.5\n"
        "bps.coef_var.i=0.1\n"
        "agents.lags=1,3\n"
        "agents.draws=200\n"
        "agents.shift.2.i=0.5\n"
        "agents.density_mode=student_t\n"
        "schedule.bps_start=1995-01\n"
        "schedule.train_end=1999-12\n"
        "schedule.test_end=2005-12\n"
        "mcmc.burn_in=10\n"
        "mcmc.n_saved=20\n"
        "mcmc.thin=2\n"
        "synth.noise_dof=5\n"
        "synth.sv_phi=0.95\n"
        "synth.sv_sd=0.25\n");
    CHECK(cfg.panel_path == "data/p.csv");
    CHECK(cfg.roles.at("i") == "cumulative");
    CHECK(cfg.out_dir == "results");
    CHECK(cfg.seed == 42);
    CHECK(cfg.horizons == std::vector<int>{1, 12, 24});
    CHECK(cfg.bps_delta == 0.95);
    CHECK(cfg.intercept_var_for(12) == 0.5);
    CHECK(cfg.intercept_var_for(1) == 0.001);
    CHECK(cfg.coef_var_for("i") == 0.1);
    CHECK(cfg.agent_lags == std::vector<std::string>{"1", "3"});
    CHECK(cfg.agent_draws == 200);
    CHECK(cfg.agent_shift.at({2, "i"}) == 0.5);
    CHECK(cfg.density_mode == DensityMode::student_t);
    CHECK(cfg.bps_start == parse_month("1995-01"));
    CHECK(cfg.burn_in == 10);
    CHECK(cfg.thin == 2);
    CHECK(cfg.synth.noise_dof == 5.0);
    CHECK(cfg.synth.sv_phi == 0.95);
    CHECK(cfg.synth.sv_sd == 0.25);

    CHECK_THROWS_AS(parse_config_text("nonsense.key=1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("bps.delta=abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("bps.delta=1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("mcmc.n_saved=0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("horizons=0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("agents.lags=1:3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("data.role.x=upward\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("just a line\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("schedule.train_end=1990-01\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/no/such/config"), ConfigError);
}
