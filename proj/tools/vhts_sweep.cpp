// Batch sweeps: config in, CSV curves and a JSON manifest out.
//
// exit codes: 0 success, 1 configuration error, 2 numerical non-convergence
#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <sstream>

#include "vhts/cli.hpp"
#include "vhts/errors.hpp"

using namespace vhts;

int main(int argc, char** argv) {
    CLI::App app{"Performance sweeps for an FSO-fed multibeam satellite downlink"};
    std::string config, sweep, metric, methods, detection, hpa_family, out;
    std::optional<double> ibo_db, gamma_th_db;
    std::optional<long> samples;
    std::optional<std::uint64_t> seed;
    bool self = false;
    app.add_option("--config", config, "INI scenario/sweep file")->check(CLI::ExistingFile);
    app.add_option("--sweep", sweep, "swept variable: mu_r_db, ibo_db, gamma_th_db, cn2_ground, xi or W0");
    app.add_option("--metric", metric, "outage, ber, capacity or moments (comma list allowed)");
    app.add_option("--method", methods, "comma list of exact, asymptotic, oracle, mc");
    app.add_option("--detection", detection, "imdd or het")->check(CLI::IsMember({"imdd", "het"}));
    app.add_option("--hpa", hpa_family, "twta, sspa or linear")->check(CLI::IsMember({"twta", "sspa", "linear"}));
    app.add_option("--ibo-db", ibo_db, "input back-off in dB");
    app.add_option("--gamma-th-db", gamma_th_db, "outage threshold in dB");
    app.add_option("--samples", samples, "Monte Carlo samples per point");
    app.add_option("--seed", seed, "master seed");
    app.add_option("--out", out, "output directory");
    app.add_flag("--selftest", self, "run the invariant suite and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (self) return cli::selftest(std::cout);

    try {
        auto cfg = config.empty() ? cli::default_config() : cli::load_config(config);
        if (!sweep.empty()) cfg.sweep.variable = sweep;
        if (!metric.empty()) {
            cfg.metrics.clear();
            std::stringstream ss(metric);
            for (std::string m; std::getline(ss, m, ',');) cfg.metrics.push_back(cli::metric_from_string(m));
        }
        if (!methods.empty()) {
            cfg.methods.clear();
            std::stringstream ss(methods);
            for (std::string m; std::getline(ss, m, ',');) cfg.methods.push_back(analytics::method_from_string(m));
        }
        if (!detection.empty()) cli::override_all(cfg, "detection", detection);
        if (!hpa_family.empty()) cli::override_all(cfg, "hpa", hpa_family);
        if (ibo_db) cli::override_all(cfg, "ibo_db", std::to_string(*ibo_db));
        if (gamma_th_db) cli::override_all(cfg, "gamma_th_db", std::to_string(*gamma_th_db));
        if (samples) cli::override_all(cfg, "samples", std::to_string(*samples));
        if (seed) cli::override_all(cfg, "seed", std::to_string(*seed));
        if (!out.empty()) cfg.out_dir = out;

        auto summary = cli::run(cfg);
        for (const auto& f : summary.files) std::cout << f << '\n';
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const DomainError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 1;
    } catch (const ConvergenceError& e) {
        std::cerr << "numerical non-convergence: " << e.what() << '\n';
        return 2;
    }
}
