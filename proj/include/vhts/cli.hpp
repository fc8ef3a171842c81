#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vhts/analytics.hpp"
#include "vhts/system.hpp"

namespace vhts::cli {

enum class Metric { Outage, Ber, Capacity, Moments };
std::string to_string(Metric m);
Metric metric_from_string(const std::string& s);

// One swept variable. Values are kept in the unit the user wrote them in
// (dB for SNR-like quantities) and converted once when a scenario is built.
struct SweepSpec {
    std::string variable = "mu_r_db";  // mu_r_db | ibo_db | gamma_th_db | cn2_ground | xi | W0
    std::vector<double> values;
};

// Flat key/value settings as they appear in a config section; the run and
// scenario builders validate every key against the schema.
using Settings = std::map<std::string, std::string>;

struct Curve {
    std::string name;
    Settings settings;  // base section merged with the curve's overrides
};

struct RunConfig {
    std::string source;  // config path, or empty for flags only
    SweepSpec sweep;
    std::vector<Curve> curves;
    std::vector<Metric> metrics{Metric::Outage};
    std::vector<analytics::Method> methods{analytics::Method::Exact};
    std::string out_dir = "out";
};

// Keys accepted in [scenario] / [curve.*] sections with their defaults.
const std::vector<std::pair<std::string, std::string>>& schema();

RunConfig load_config(const std::string& path);
RunConfig default_config();
// Applies a key to every curve (command-line overrides).
void override_all(RunConfig& cfg, const std::string& key, const std::string& value);

sys::ScenarioSpec scenario_spec(const Settings& s);

struct PointSettings {
    double gamma_th_db = 5.0;
    analytics::ModulationSpec modulation;
    int moment_order = 1;
    long samples = 1000000;
    std::uint64_t seed = 1;
    analytics::AsymptoticForm form = analytics::AsymptoticForm::Corrected;
};
PointSettings point_settings(const Settings& s);

// Evaluates one metric with one method for one scenario.
analytics::MetricResult evaluate(Metric metric, analytics::Method method, const sys::Scenario& sc,
                                 const PointSettings& ps, const std::vector<double>* mc_samples);

struct RunSummary {
    std::vector<std::string> files;
};
RunSummary run(const RunConfig& cfg);

void write_csv(std::ostream& os, const std::vector<analytics::MetricResult>& rows);
std::vector<analytics::MetricResult> read_csv(std::istream& is, Metric metric, analytics::Method method);

// Exit code 0 iff every invariant holds; progress goes to `log`.
int selftest(std::ostream& log);

}  // namespace vhts::cli
