#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "doctest.h"
#include "vhts/cli.hpp"
#include "vhts/errors.hpp"

using namespace vhts;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    auto d = fs::temp_directory_path() / ("vhts_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string write_ini(const fs::path& dir, const std::string& body) {
    auto p = dir / "run.ini";
    std::ofstream(p) << body;
    return p.string();
}

}  // namespace

TEST_CASE("config sections merge into curves") {
    auto d = scratch_dir("merge");
    auto cfg = cli::load_config(write_ini(d, R"(
[run]
metric = outage, capacity
method = exact
out = somewhere

[sweep]
variable = mu_r_db
start = 0
stop = 20
step = 10

[scenario]
hpa = sspa
ibo_db = 20

[curve.a]
[curve.b]
hpa = linear
)"));
    CHECK(cfg.sweep.values == std::vector<double>{0, 10, 20});
    CHECK(cfg.metrics.size() == 2);
    REQUIRE(cfg.curves.size() == 2);
    CHECK(cfg.curves[0].settings.at("hpa") == "sspa");
    CHECK(cfg.curves[1].settings.at("hpa") == "linear");
    CHECK(cfg.curves[1].settings.at("ibo_db") == "20");
    CHECK(cfg.curves[1].settings.at("xi") == "1.1");
    cli::override_all(cfg, "ibo_db", "15");
    CHECK(cfg.curves[0].settings.at("ibo_db") == "15");
    CHECK(cfg.curves[1].settings.at("ibo_db") == "15");
}

TEST_CASE("config errors are reported as ConfigError") {
    auto d = scratch_dir("errors");
    CHECK_THROWS_AS(cli::load_config(write_ini(d, "[scenario]\nbogus = 1\n")), ConfigError);
    CHECK_THROWS_AS(cli::load_config(write_ini(d, "[nonsense]\n")), ConfigError);
    CHECK_THROWS_AS(cli::load_config(write_ini(d, "xi = 2\n[scenario]\nhpa = sspa\n")), ConfigError);
    CHECK_THROWS_AS(cli::load_config(write_ini(d, "[sweep]\nvariable = mu_r_db\n")), ConfigError);
    CHECK_THROWS_AS(cli::load_config((d / "missing.ini").string()), ConfigError);

    auto cfg = cli::default_config();
    cfg.out_dir = (d / "out").string();
    cfg.metrics = {cli::Metric::Capacity};
    cfg.methods = {analytics::Method::Oracle};
    CHECK_THROWS_AS(cli::run(cfg), ConfigError);

    cfg = cli::default_config();
    cfg.sweep.variable = "P_g";
    CHECK_THROWS_AS(cli::run(cfg), ConfigError);

    cfg = cli::default_config();
    cfg.metrics = {cli::Metric::Ber};
    cli::override_all(cfg, "detection", "het");
    cli::override_all(cfg, "modulation", "ook");
    CHECK_THROWS_AS(cli::run(cfg), ConfigError);

    cfg = cli::default_config();
    cli::override_all(cfg, "shadowing", "2.5,0.2,0.5");
    CHECK_THROWS_AS(cli::run(cfg), ConfigError);
    CHECK_THROWS_AS(cli::scenario_spec({{"detection", "pin"}}), ConfigError);
}

TEST_CASE("run writes one CSV per curve/metric/method and a complete manifest") {
    auto d = scratch_dir("run");
    auto cfg = cli::default_config();
    cfg.out_dir = (d / "out").string();
    cfg.sweep.values = {10, 30};
    cfg.metrics = {cli::Metric::Outage};
    cfg.methods = {analytics::Method::Exact, analytics::Method::MonteCarlo};
    cli::override_all(cfg, "hpa", "linear");
    cli::override_all(cfg, "samples", "20000");
    auto summary = cli::run(cfg);
    REQUIRE(summary.files.size() == 3);

    std::ifstream exact_in(d / "out" / "main_outage_exact.csv");
    auto exact = cli::read_csv(exact_in, cli::Metric::Outage, analytics::Method::Exact);
    std::ifstream mc_in(d / "out" / "main_outage_monte-carlo.csv");
    auto mc = cli::read_csv(mc_in, cli::Metric::Outage, analytics::Method::MonteCarlo);
    REQUIRE(exact.size() == 2);
    REQUIRE(mc.size() == 2);
    for (int i = 0; i < 2; ++i) {
        CHECK(exact[i].sweep_value_db == cfg.sweep.values[i]);
        CHECK(mc[i].n_samples == 20000);
        CHECK(exact[i].fingerprint == mc[i].fingerprint);
        CHECK(std::abs(mc[i].value - exact[i].value) <= mc[i].error + 1e-12);
    }
    CHECK(exact[0].value > exact[1].value);

    // the written values are the evaluated ones, bit for bit
    auto s = cfg.curves[0].settings;
    s["mu_r_db"] = "30";
    auto sc = sys::build_scenario(cli::scenario_spec(s));
    auto direct = cli::evaluate(cli::Metric::Outage, analytics::Method::Exact, sc, cli::point_settings(s), nullptr);
    CHECK(direct.value == exact[1].value);

    std::ifstream ms(d / "out" / "manifest.json");
    auto m = nlohmann::json::parse(ms);
    REQUIRE(m["curves"].size() == 1);
    const auto& settings = m["curves"][0]["settings"];
    for (const auto& [k, def] : cli::schema()) {
        REQUIRE(settings.contains(k));
        CHECK(settings[k].contains("default"));
    }
    CHECK(settings["hpa"]["default"] == false);
    CHECK(settings["xi"]["default"] == true);
    CHECK(m["curves"][0]["derived"].contains("alpha"));
    CHECK(m["curves"][0]["files"].size() == 2);
}

TEST_CASE("CSV round trip keeps full precision") {
    std::vector<analytics::MetricResult> rows(2);
    rows[0].sweep_value_db = 12.5;
    rows[0].value = 0.1 + 1e-17;
    rows[0].error = 1.0 / 3.0;
    rows[0].n_samples = 7;
    rows[0].fingerprint = "abc";
    rows[1].value = 1e-300;
    std::stringstream ss;
    cli::write_csv(ss, rows);
    auto back = cli::read_csv(ss, cli::Metric::Ber, analytics::Method::Exact);
    REQUIRE(back.size() == 2);
    CHECK(back[0].value == rows[0].value);
    CHECK(back[0].error == rows[0].error);
    CHECK(back[0].n_samples == 7);
    CHECK(back[0].fingerprint == "abc");
    CHECK(back[1].value == 1e-300);
    std::stringstream bad("x,y\n");
    CHECK_THROWS_AS(cli::read_csv(bad, cli::Metric::Ber, analytics::Method::Exact), ConfigError);
}
