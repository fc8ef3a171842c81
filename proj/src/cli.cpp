#include "vhts/cli.hpp"

#include <algorithm>
#include <atomic>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <istream>
#include <limits>
#include <nlohmann/json.hpp>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "vhts/errors.hpp"
#include "vhts/montecarlo.hpp"

namespace vhts::cli {
namespace {

using analytics::Method;
using analytics::MetricResult;

const std::vector<std::pair<std::string, std::string>> kScenarioKeys = {
    {"detection", "imdd"},
    {"xi", "1.1"},
    {"A0", "1"},
    {"Il", "1"},
    {"eta", "1"},
    {"sigma1_sq", "1"},
    {"cn2_ground", "1e-12"},
    {"W0", "0.02"},
    {"F0", "inf"},
    {"wavelength", "1.55e-6"},
    {"zenith_deg", "30"},
    {"wind_rms", "21"},
    {"H", "35786e3"},
    {"h0", "0"},
    {"beam_wander", "true"},
    {"alpha", "auto"},
    {"beta", "auto"},
    {"beam_radius", "250e3"},
    {"shadowing", "light"},
    {"hpa", "twta"},
    {"ibo_db", "25"},
    {"swap_hpa_labels", "false"},
    {"P_g", "1"},
    {"P_r", "1"},
    {"G", "1"},
    {"sigma2_sq", "1"},
    {"user_index", "0"},
    {"mu_r_db", "50"},
    {"gbar2_mode", "tracking"},
    {"gbar2_offset_db", "35"},
    {"gbar2_db", "20"},
    {"gamma_th_db", "5"},
    {"modulation", "auto"},
    {"moment_order", "1"},
    {"samples", "1000000"},
    {"seed", "1"},
    {"asymptotic_form", "corrected"},
};

// the CSV column keeps its contract name; cn2_ground, xi and W0 are written in their own units
const std::vector<std::string> kSweepVariables = {"mu_r_db", "ibo_db", "gamma_th_db", "cn2_ground", "xi", "W0"};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    return s.substr(a, s.find_last_not_of(" \t\r\n") - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        double d = std::stod(v, &pos);
        if (trim(v.substr(pos)).empty()) return d;
    } catch (const std::exception&) {
    }
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
}

long to_long(const std::string& key, const std::string& v) {
    const double d = to_double(key, v);
    if (d != std::floor(d) || std::abs(d) > 9e15) throw ConfigError("key '" + key + "': expected an integer");
    return static_cast<long>(d);
}

bool to_bool(const std::string& key, const std::string& v) {
    const auto s = lower(v);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

const std::string& get(const Settings& s, const std::string& key) {
    auto it = s.find(key);
    if (it == s.end()) throw ConfigError("missing key '" + key + "'");
    return it->second;
}

void check_keys(const Settings& s, const std::string& where) {
    for (const auto& [k, v] : s) {
        bool known = std::any_of(kScenarioKeys.begin(), kScenarioKeys.end(), [&](const auto& e) { return e.first == k; });
        if (!known) throw ConfigError("unknown key '" + k + "' in " + where);
    }
}

Settings defaults() {
    Settings s;
    for (const auto& [k, v] : kScenarioKeys) s[k] = v;
    return s;
}

std::vector<double> grid(const std::string& start, const std::string& stop, const std::string& step) {
    const double a = to_double("start", start), b = to_double("stop", stop), h = to_double("step", step);
    if (!(h > 0) || b < a) throw ConfigError("sweep grid needs start <= stop and step > 0");
    std::vector<double> v;
    const long n = std::lround(std::floor((b - a) / h + 1e-9));
    for (long i = 0; i <= n; ++i) v.push_back(a + i * h);
    return v;
}

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool metric_supports(Metric m, Method method) {
    switch (method) {
        case Method::Exact:
        case Method::MonteCarlo: return true;
        case Method::Asymptotic: return m == Metric::Outage || m == Metric::Ber;
        case Method::Oracle: return m == Metric::Outage;
    }
    return false;
}

void validate(const RunConfig& cfg) {
    if (cfg.sweep.values.empty()) throw ConfigError("sweep grid is empty");
    if (std::find(kSweepVariables.begin(), kSweepVariables.end(), cfg.sweep.variable) == kSweepVariables.end())
        throw ConfigError("unsupported sweep variable '" + cfg.sweep.variable + "'");
    if (cfg.curves.empty()) throw ConfigError("no curves to evaluate");
    for (auto m : cfg.metrics)
        for (auto me : cfg.methods)
            if (!metric_supports(m, me))
                throw ConfigError("method '" + analytics::to_string(me) + "' is not available for metric '" +
                                  to_string(m) + "'");
    for (const auto& c : cfg.curves) {
        check_keys(c.settings, "curve '" + c.name + "'");
        // build once to surface configuration errors before any evaluation
        auto spec = scenario_spec(c.settings);
        auto ps = point_settings(c.settings);
        auto sc = sys::build_scenario(spec);
        for (auto m : cfg.metrics)
            if (m == Metric::Ber && ps.modulation.detection_r != spec.feeder.r)
                throw ConfigError("curve '" + c.name + "': " + ps.modulation.name + " does not match the detection type");
        bool needs_integer_m = std::any_of(cfg.methods.begin(), cfg.methods.end(),
                                           [](Method me) { return me != Method::MonteCarlo; });
        if (needs_integer_m && !rf::has_integer_m(sc.shadowing()))
            throw ConfigError("curve '" + c.name + "': closed forms and the oracle need an integer shadowing m");
    }
}

Settings apply_sweep(Settings s, const std::string& var, double v) {
    s[var] = num(v);
    return s;
}

}  // namespace

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Outage: return "outage";
        case Metric::Ber: return "ber";
        case Metric::Capacity: return "capacity";
        default: return "moments";
    }
}

Metric metric_from_string(const std::string& s) {
    const auto l = lower(s);
    if (l == "outage") return Metric::Outage;
    if (l == "ber") return Metric::Ber;
    if (l == "capacity") return Metric::Capacity;
    if (l == "moments") return Metric::Moments;
    throw ConfigError("unknown metric '" + s + "'");
}

const std::vector<std::pair<std::string, std::string>>& schema() { return kScenarioKeys; }

sys::ScenarioSpec scenario_spec(const Settings& s) {
    sys::ScenarioSpec spec;
    auto d = [&](const char* k) { return to_double(k, get(s, k)); };
    const auto det = lower(get(s, "detection"));
    if (det == "imdd")
        spec.feeder.r = 2;
    else if (det == "het" || det == "heterodyne")
        spec.feeder.r = 1;
    else
        throw ConfigError("detection must be imdd or het");
    spec.feeder.pointing.xi = d("xi");
    spec.feeder.pointing.A0 = d("A0");
    spec.feeder.Il = d("Il");
    spec.feeder.eta = d("eta");
    spec.feeder.sigma1_sq = d("sigma1_sq");
    auto& a = spec.feeder.atmosphere;
    a.cn2_ground = d("cn2_ground");
    a.W0 = d("W0");
    a.F0 = d("F0");
    a.wavelength = d("wavelength");
    a.zenith = d("zenith_deg") * std::numbers::pi / 180.0;
    a.wind_rms = d("wind_rms");
    a.H = d("H");
    a.h0 = d("h0");
    a.beam_wander = to_bool("beam_wander", get(s, "beam_wander"));
    const auto& al = get(s, "alpha");
    const auto& be = get(s, "beta");
    if ((al == "auto") != (be == "auto")) throw ConfigError("alpha and beta must be given together");
    if (al != "auto") spec.shapes = std::make_pair(to_double("alpha", al), to_double("beta", be));
    spec.beam_radius = d("beam_radius");
    const auto sh = lower(get(s, "shadowing"));
    if (sh == "light") {
        spec.shadowing = rf::light_shadowing();
    } else if (sh == "heavy") {
        spec.shadowing = rf::heavy_shadowing();
    } else {
        // "m,b,Omega"
        auto parts = split_list(sh);
        if (parts.size() != 3) throw ConfigError("shadowing must be light, heavy or 'm,b,Omega'");
        spec.shadowing = {to_double("shadowing", parts[0]), to_double("shadowing", parts[1]),
                          to_double("shadowing", parts[2])};
    }
    spec.hpa_family = hpa::family_from_string(lower(get(s, "hpa")));
    spec.ibo_db = d("ibo_db");
    spec.swap_hpa_labels = to_bool("swap_hpa_labels", get(s, "swap_hpa_labels"));
    spec.P_g = d("P_g");
    spec.P_r = d("P_r");
    spec.G = d("G");
    spec.sigma2_sq = d("sigma2_sq");
    spec.user_index = static_cast<int>(to_long("user_index", get(s, "user_index")));
    const auto& mu = get(s, "mu_r_db");
    if (lower(mu) == "derived")
        spec.mu_r_db.reset();
    else
        spec.mu_r_db = to_double("mu_r_db", mu);
    spec.gbar2_mode = sys::gbar2_mode_from_string(lower(get(s, "gbar2_mode")));
    spec.gbar2_offset_db = d("gbar2_offset_db");
    spec.gbar2_db = d("gbar2_db");
    return spec;
}

PointSettings point_settings(const Settings& s) {
    PointSettings p;
    p.gamma_th_db = to_double("gamma_th_db", get(s, "gamma_th_db"));
    const auto& mod = get(s, "modulation");
    if (lower(mod) == "auto") {
        p.modulation = lower(get(s, "detection")) == "imdd" ? analytics::ModulationSpec::ook()
                                                             : analytics::ModulationSpec::bpsk();
    } else {
        p.modulation = analytics::ModulationSpec::parse(mod);
    }
    p.moment_order = static_cast<int>(to_long("moment_order", get(s, "moment_order")));
    if (p.moment_order < 1) throw ConfigError("moment_order must be at least 1");
    p.samples = to_long("samples", get(s, "samples"));
    if (p.samples < 1) throw ConfigError("samples must be at least 1");
    const auto& seed = get(s, "seed");
    try {
        p.seed = std::stoull(seed);
    } catch (const std::exception&) {
        throw ConfigError("seed must be an unsigned 64-bit integer");
    }
    const auto form = lower(get(s, "asymptotic_form"));
    if (form == "corrected")
        p.form = analytics::AsymptoticForm::Corrected;
    else if (form == "printed")
        p.form = analytics::AsymptoticForm::Printed;
    else if (form == "printed_high_gbar2")
        p.form = analytics::AsymptoticForm::PrintedHighGbar2;
    else
        throw ConfigError("asymptotic_form must be corrected, printed or printed_high_gbar2");
    return p;
}

RunConfig default_config() {
    RunConfig cfg;
    cfg.sweep.values = grid("0", "80", "5");
    cfg.curves.push_back({"main", defaults()});
    return cfg;
}

RunConfig load_config(const std::string& path) {
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try {
        pt::read_ini(path, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("cannot read config: ") + e.what());
    }
    // the ini reader drops sections without keys; an empty [curve.x] is still a curve
    std::vector<std::string> sections;
    {
        std::ifstream in(path);
        for (std::string line; std::getline(in, line);) {
            line = trim(line);
            if (line.size() > 2 && line.front() == '[' && line.back() == ']') sections.push_back(trim(line.substr(1, line.size() - 2)));
        }
    }
    for (const auto& [k, v] : tree)
        if (v.empty()) throw ConfigError("key '" + k + "' outside any section");
    RunConfig cfg;
    cfg.source = path;
    Settings base = defaults();
    std::vector<Curve> curves;
    for (const auto& section : sections) {
        Settings kv;
        if (auto it = tree.find(section); it != tree.not_found())
            for (const auto& [k, v] : it->second) kv[k] = trim(v.data());
        if (section == "run") {
            for (const auto& [k, v] : kv) {
                if (k == "metric") {
                    cfg.metrics.clear();
                    for (const auto& m : split_list(v)) cfg.metrics.push_back(metric_from_string(m));
                } else if (k == "method") {
                    cfg.methods.clear();
                    for (const auto& m : split_list(v)) cfg.methods.push_back(analytics::method_from_string(lower(m)));
                } else if (k == "out") {
                    cfg.out_dir = v;
                } else {
                    throw ConfigError("unknown key '" + k + "' in [run]");
                }
            }
        } else if (section == "sweep") {
            for (const auto& [k, v] : kv)
                if (k != "variable" && k != "values" && k != "start" && k != "stop" && k != "step")
                    throw ConfigError("unknown key '" + k + "' in [sweep]");
            if (kv.count("variable")) cfg.sweep.variable = kv["variable"];
            if (kv.count("values")) {
                for (const auto& v : split_list(kv["values"])) cfg.sweep.values.push_back(to_double("values", v));
            } else if (kv.count("start") && kv.count("stop") && kv.count("step")) {
                cfg.sweep.values = grid(kv["start"], kv["stop"], kv["step"]);
            } else {
                throw ConfigError("[sweep] needs either values or start/stop/step");
            }
        } else if (section == "scenario") {
            check_keys(kv, "[scenario]");
            for (const auto& [k, v] : kv) base[k] = v;
        } else if (section.rfind("curve.", 0) == 0 && section.size() > 6) {
            check_keys(kv, "[" + section + "]");
            curves.push_back({section.substr(6), kv});
        } else {
            throw ConfigError("unknown section [" + section + "]");
        }
    }
    if (cfg.sweep.values.empty()) cfg.sweep.values = grid("0", "80", "5");
    if (curves.empty()) curves.push_back({"main", {}});
    for (auto& c : curves) {
        Settings merged = base;
        for (const auto& [k, v] : c.settings) merged[k] = v;
        c.settings = merged;
    }
    cfg.curves = curves;
    return cfg;
}

void override_all(RunConfig& cfg, const std::string& key, const std::string& value) {
    check_keys({{key, value}}, "override");
    for (auto& c : cfg.curves) c.settings[key] = value;
}

MetricResult evaluate(Metric metric, Method method, const sys::Scenario& sc, const PointSettings& ps,
                      const std::vector<double>* samples) {
    MetricResult r;
    r.fingerprint = sc.fingerprint();
    r.metric = to_string(metric);
    r.method = method;
    const double gth = std::pow(10.0, ps.gamma_th_db / 10.0);
    analytics::Options opt;
    opt.form = ps.form;
    analytics::Estimate e;
    if (method == Method::MonteCarlo) {
        if (!samples) throw DomainError("Monte Carlo evaluation without samples");
        r.n_samples = static_cast<long>(samples->size());
        switch (metric) {
            case Metric::Outage: e = mc::empirical_outage(*samples, gth); break;
            case Metric::Ber: e = mc::empirical_ber(*samples, ps.modulation); break;
            case Metric::Capacity: e = mc::empirical_capacity(*samples, sc.r()); break;
            case Metric::Moments: e = mc::empirical_moment(*samples, ps.moment_order); break;
        }
    } else if (method == Method::Asymptotic) {
        e.value = metric == Metric::Outage ? analytics::outage_asymptotic(gth, sc, opt)
                                           : analytics::ber_asymptotic(ps.modulation, sc, opt);
        e.error = std::numeric_limits<double>::quiet_NaN();  // truncation error is not estimated
    } else if (method == Method::Oracle) {
        e = analytics::sndr_cdf_oracle(gth, sc);
    } else {
        switch (metric) {
            case Metric::Outage: e = analytics::outage_exact(gth, sc, opt); break;
            case Metric::Ber: e = analytics::ber_exact(ps.modulation, sc, opt); break;
            case Metric::Capacity: e = analytics::capacity_exact(sc, opt); break;
            case Metric::Moments: e = analytics::sndr_moments(ps.moment_order, sc, opt); break;
        }
    }
    r.value = e.value;
    r.error = e.error;
    return r;
}

void write_csv(std::ostream& os, const std::vector<MetricResult>& rows) {
    os << "sweep_value_dB,value,error_estimate,n_samples,scenario_fingerprint\n";
    for (const auto& r : rows)
        os << num(r.sweep_value_db) << ',' << num(r.value) << ',' << num(r.error) << ',' << r.n_samples << ','
           << r.fingerprint << '\n';
}

std::vector<MetricResult> read_csv(std::istream& is, Metric metric, Method method) {
    std::string line;
    if (!std::getline(is, line) || trim(line) != "sweep_value_dB,value,error_estimate,n_samples,scenario_fingerprint")
        throw ConfigError("unexpected CSV header");
    std::vector<MetricResult> out;
    while (std::getline(is, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 5) throw ConfigError("malformed CSV row: " + line);
        MetricResult r;
        r.sweep_value_db = std::strtod(f[0].c_str(), nullptr);
        r.value = std::strtod(f[1].c_str(), nullptr);
        r.error = std::strtod(f[2].c_str(), nullptr);
        r.n_samples = std::stol(f[3]);
        r.fingerprint = trim(f[4]);
        r.metric = to_string(metric);
        r.method = method;
        out.push_back(r);
    }
    return out;
}

RunSummary run(const RunConfig& cfg) {
    validate(cfg);
    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    RunSummary summary;
    nlohmann::json manifest;
    manifest["tool"] = "vhts_sweep";
    manifest["config"] = cfg.source.empty() ? "(flags only)" : cfg.source;
    manifest["sweep"] = {{"variable", cfg.sweep.variable}, {"values", cfg.sweep.values}};
    for (auto m : cfg.metrics) manifest["metrics"].push_back(to_string(m));
    for (auto m : cfg.methods) manifest["methods"].push_back(analytics::to_string(m));
    manifest["csv_columns"] = {"sweep_value_dB", "value", "error_estimate", "n_samples", "scenario_fingerprint"};

    const bool want_mc = std::find(cfg.methods.begin(), cfg.methods.end(), Method::MonteCarlo) != cfg.methods.end();
    const std::size_t np = cfg.sweep.values.size();
    for (const auto& curve : cfg.curves) {
        // results[metric][method][point]
        std::vector<std::vector<std::vector<MetricResult>>> results(
            cfg.metrics.size(), std::vector<std::vector<MetricResult>>(cfg.methods.size(), std::vector<MetricResult>(np)));
        auto eval_point = [&](std::size_t i, bool monte_carlo) {
            const double v = cfg.sweep.values[i];
            const Settings s = apply_sweep(curve.settings, cfg.sweep.variable, v);
            const auto sc = sys::build_scenario(scenario_spec(s));
            const auto ps = point_settings(s);
            std::vector<double> samples;
            if (monte_carlo) {
                mc::SimPlan plan{sc, ps.samples, CounterRng::mix(ps.seed + i)};
                samples = mc::simulate_sndr(plan);
            }
            for (std::size_t a = 0; a < cfg.metrics.size(); ++a)
                for (std::size_t b = 0; b < cfg.methods.size(); ++b) {
                    if ((cfg.methods[b] == Method::MonteCarlo) != monte_carlo) continue;
                    try {
                        auto r = evaluate(cfg.metrics[a], cfg.methods[b], sc, ps, monte_carlo ? &samples : nullptr);
                        r.sweep_value_db = v;
                        results[a][b][i] = r;
                    } catch (const ConvergenceError& e) {
                        throw ConvergenceError("curve '" + curve.name + "', " + cfg.sweep.variable + " = " + num(v) +
                                               ", " + to_string(cfg.metrics[a]) + "/" +
                                               analytics::to_string(cfg.methods[b]) + ": " + e.what());
                    }
                }
        };
        // analytic points concurrently; Monte Carlo points in order, each parallel inside
        {
            const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
            std::atomic<std::size_t> next{0};
            std::vector<std::future<void>> jobs;
            for (unsigned w = 0; w < std::min<std::size_t>(workers, np); ++w)
                jobs.push_back(std::async(std::launch::async, [&] {
                    for (std::size_t i = next++; i < np; i = next++) eval_point(i, false);
                }));
            for (auto& j : jobs) j.get();
        }
        if (want_mc)
            for (std::size_t i = 0; i < np; ++i) eval_point(i, true);

        nlohmann::json jc;
        jc["name"] = curve.name;
        for (const auto& [k, def] : kScenarioKeys) {
            const auto& v = curve.settings.at(k);
            jc["settings"][k] = {{"value", v}, {"default", v == def}};
        }
        const auto first = sys::build_scenario(
            scenario_spec(apply_sweep(curve.settings, cfg.sweep.variable, cfg.sweep.values.front())));
        for (const auto& [k, v] : first.describe()) jc["scenario"][k] = v;
        jc["derived"] = {{"alpha", first.turbulence.alpha},
                         {"beta", first.turbulence.beta},
                         {"trace_term", first.trace_term},
                         {"b_row_norm_sq", first.b_row_norm_sq},
                         {"hpa_K", first.hpa.K},
                         {"hpa_sigma_nl_sq", first.hpa.sigma_nl_sq}};
        jc["calibration"] = {{"gbar2_mode", curve.settings.at("gbar2_mode")},
                             {"gbar2_offset_db", curve.settings.at("gbar2_offset_db")},
                             {"gbar2_db", curve.settings.at("gbar2_db")}};
        for (std::size_t a = 0; a < cfg.metrics.size(); ++a)
            for (std::size_t b = 0; b < cfg.methods.size(); ++b) {
                const auto name = curve.name + "_" + to_string(cfg.metrics[a]) + "_" +
                                  analytics::to_string(cfg.methods[b]) + ".csv";
                const auto path = (fs::path(cfg.out_dir) / name).string();
                std::ofstream os(path);
                if (!os) throw ConfigError("cannot write " + path);
                write_csv(os, results[a][b]);
                summary.files.push_back(path);
                jc["files"].push_back(name);
            }
        manifest["curves"].push_back(jc);
    }
    std::ofstream ms((fs::path(cfg.out_dir) / "manifest.json").string());
    ms << manifest.dump(2) << '\n';
    summary.files.push_back((fs::path(cfg.out_dir) / "manifest.json").string());
    return summary;
}

int selftest(std::ostream& log) {
    int failures = 0;
    auto report = [&](const std::string& name, bool ok) {
        log << (ok ? "PASS " : "FAIL ") << name << '\n';
        if (!ok) ++failures;
    };
    auto guarded = [&](const std::string& name, auto&& body) {
        try {
            report(name, body());
        } catch (const std::exception& e) {
            log << "  " << e.what() << '\n';
            report(name, false);
        }
    };

    guarded("zero-forcing identities on the default layout", [] {
        sys::ScenarioSpec spec;
        auto sc = sys::build_scenario(spec);
        auto p = sys::zf_precoder(sc.B, 1.0);
        const long n = sc.B.rows();
        const double e1 = (sc.B * p.T - std::sqrt(p.c_zf) * Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
        const double e2 = std::abs((p.T * p.T.transpose()).trace() - 1.0);
        return e1 < 1e-10 && e2 < 1e-10;
    });
    guarded("Bussgang limits", [] {
        for (auto f : {hpa::Family::TWTA, hpa::Family::SSPA}) {
            auto h = hpa::make_hpa(f, 60.0);
            if (!(h.K >= 0.999 && h.K <= 1.0 && h.sigma_nl_sq <= 1e-3)) return false;
        }
        return true;
    });
    for (int r : {2, 1}) {
        guarded(std::string("closed form equals oracle, ") + (r == 2 ? "IM/DD" : "heterodyne"), [r] {
            sys::ScenarioSpec spec;
            spec.feeder.r = r;
            spec.mu_r_db = 30;
            auto sc = sys::build_scenario(spec);
            for (double x : {0.1, 10.0, 1000.0})
                if (std::abs(analytics::sndr_cdf_exact(x, sc).value - analytics::sndr_cdf_oracle(x, sc).value) >= 1e-5)
                    return false;
            return true;
        });
    }
    guarded("Monte Carlo stream independent of worker count", [] {
        sys::ScenarioSpec spec;
        mc::SimPlan plan{sys::build_scenario(spec), 20000, 9, 1000, 1};
        auto a = mc::simulate_sndr(plan);
        plan.workers = 4;
        return a == mc::simulate_sndr(plan);
    });
    guarded("Monte Carlo outage within 3 sigma of the closed form", [] {
        sys::ScenarioSpec spec;
        spec.mu_r_db = 30;
        mc::SimPlan plan{sys::build_scenario(spec), 100000, 4};
        auto e = mc::empirical_outage(plan, 10.0);
        return std::abs(e.value - analytics::sndr_cdf_exact(10.0, plan.scenario).value) < e.error;
    });
    guarded("CSV round trip", [] {
        std::vector<MetricResult> rows(3);
        for (int i = 0; i < 3; ++i) {
            rows[i].sweep_value_db = 5.0 * i;
            rows[i].value = std::exp(-1.0 / (i + 1)) / 3.0;
            rows[i].error = 1e-9 * (i + 1) / 7.0;
            rows[i].n_samples = 1000 * i;
            rows[i].fingerprint = "00ff00ff00ff00ff";
        }
        std::stringstream ss;
        write_csv(ss, rows);
        auto back = read_csv(ss, Metric::Outage, Method::Exact);
        for (int i = 0; i < 3; ++i)
            if (back[i].value != rows[i].value || back[i].error != rows[i].error ||
                back[i].sweep_value_db != rows[i].sweep_value_db || back[i].n_samples != rows[i].n_samples ||
                back[i].fingerprint != rows[i].fingerprint)
                return false;
        return true;
    });
    guarded("heterodyne outage below IM/DD", [] {
        sys::ScenarioSpec spec;
        spec.mu_r_db = 40;
        auto imdd = sys::build_scenario(spec);
        spec.feeder.r = 1;
        auto het = sys::build_scenario(spec);
        return analytics::outage_exact(3.16, het).value <= analytics::outage_exact(3.16, imdd).value;
    });
    log << (failures == 0 ? "selftest passed" : "selftest failed: " + std::to_string(failures) + " invariant(s)")
        << '\n';
    return failures == 0 ? 0 : 1;
}

}  // namespace vhts::cli
