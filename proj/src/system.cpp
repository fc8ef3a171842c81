#include "vhts/system.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>

namespace vhts::sys {
namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void validate(const ScenarioSpec& s) {
    const auto& f = s.feeder;
    if (f.r != 1 && f.r != 2) throw ConfigError("detection exponent r must be 1 or 2");
    if (!(f.Il > 0 && f.Il <= 1)) throw ConfigError("path loss I_l must lie in (0, 1]");
    if (!(f.eta > 0)) throw ConfigError("eta must be positive");
    if (!(f.pointing.xi > 0)) throw ConfigError("xi must be positive");
    if (!(f.pointing.A0 > 0 && f.pointing.A0 <= 1)) throw ConfigError("A0 must lie in (0, 1]");
    if (!(s.P_g > 0 && s.P_r > 0 && s.G > 0 && s.sigma2_sq > 0)) throw ConfigError("powers must be positive");
    if (!(s.shadowing.b > 0 && s.shadowing.Omega >= 0 && s.shadowing.m > 0))
        throw ConfigError("shadowing requires m > 0, b > 0, Omega >= 0");
    if (s.shapes && !(s.shapes->first > 0 && s.shapes->second > 0))
        throw ConfigError("alpha and beta must be positive");
    if (!s.mu_r_db && !(f.sigma1_sq > 0)) throw ConfigError("sigma1_sq must be positive");
    if (s.hpa_family != hpa::Family::LINEAR && !std::isfinite(s.ibo_db)) throw ConfigError("ibo_db must be finite");
}

// Feeder operating point, user-link mean and distortion for a fixed geometry.
void derive_operating_point(Scenario& sc) {
    const auto& s = sc.spec;
    const auto& f = s.feeder;
    const double xi2 = sc.xi2();
    const double mean_scale = std::pow(f.eta * f.pointing.A0 * f.Il * xi2 / (xi2 + 1), f.r);
    if (s.mu_r_db) {
        sc.mu_r = std::pow(10.0, *s.mu_r_db / 10.0);
        sc.sigma1_sq = s.P_g * mean_scale / (sc.trace_term * sc.mu_r);
    } else {
        sc.sigma1_sq = f.sigma1_sq;
        sc.mu_r = s.P_g * mean_scale / (sc.trace_term * sc.sigma1_sq);
    }
    sc.gbar1 = fso::gbar1_from_mu_r(sc.mu_r, sc.turbulence, f.pointing, f.r);

    sc.hpa = hpa::make_hpa(s.hpa_family, s.ibo_db, s.P_r, s.G, sc.sigma1_sq, s.swap_hpa_labels);
    sc.kappa = sc.hpa.kappa;
    sc.C = sc.trace_term * sc.gbar1 + sc.kappa;

    const double N = static_cast<double>(sc.B.rows());
    sc.P_s = N * (sc.hpa.K * sc.hpa.K * s.P_r + sc.hpa.sigma_nl_sq);
    const auto& sh = s.shadowing;
    switch (s.gbar2_mode) {
        case Gbar2Mode::Tracking:
            // ρ·μ_r stands in for P_s‖b‖²/(Nσ2²), so shadowing still scales the link
            sc.gbar2 = std::pow(10.0, s.gbar2_offset_db / 10.0) * sc.mu_r * (2 * sh.b * sh.m + sh.Omega);
            break;
        case Gbar2Mode::Fixed: sc.gbar2 = std::pow(10.0, s.gbar2_db / 10.0); break;
        case Gbar2Mode::FromPower:
            sc.gbar2 = sc.P_s / N * sc.b_row_norm_sq * (2 * sh.b * sh.m + sh.Omega) / s.sigma2_sq;
            break;
    }
}

}  // namespace

std::string to_string(Gbar2Mode m) {
    switch (m) {
        case Gbar2Mode::Tracking: return "tracking";
        case Gbar2Mode::Fixed: return "fixed";
        default: return "from_power";
    }
}

Gbar2Mode gbar2_mode_from_string(const std::string& s) {
    if (s == "tracking") return Gbar2Mode::Tracking;
    if (s == "fixed") return Gbar2Mode::Fixed;
    if (s == "from_power") return Gbar2Mode::FromPower;
    throw ConfigError("unknown gbar2 mode '" + s + "'");
}

Scenario build_scenario(const ScenarioSpec& spec) {
    validate(spec);
    Scenario sc;
    sc.spec = spec;
    sc.turbulence = spec.shapes ? fso::from_shapes(spec.shapes->first, spec.shapes->second)
                                : fso::scintillation_params(spec.feeder.atmosphere);

    auto layout = rf::default_layout(spec.beam_radius, spec.feeder.atmosphere.H - spec.feeder.atmosphere.h0);
    layout.users = spec.users;
    sc.B = rf::beam_gain_matrix(layout, spec.rf);
    if (spec.user_index < 0 || spec.user_index >= sc.B.rows()) throw ConfigError("user_index out of range");
    auto zf = zf_precoder(sc.B, spec.P_g);
    sc.trace_term = zf.trace_term;
    sc.c_zf = zf.c_zf;
    sc.condition = zf.condition;
    sc.b_row_norm_sq = sc.B.row(spec.user_index).squaredNorm();
    derive_operating_point(sc);
    return sc;
}

Scenario at_mu_r(const Scenario& base, double mu_r_db) {
    Scenario sc = base;
    sc.spec.mu_r_db = mu_r_db;
    derive_operating_point(sc);
    return sc;
}

double sndr(double g1, double g2, const Scenario& sc) {
    if (g1 <= 0 || g2 <= 0) return 0.0;
    return g1 * g2 / (sc.b_row_norm_sq * (sc.kappa * g2 + sc.trace_term * sc.gbar1 + sc.kappa));
}

std::vector<std::pair<std::string, std::string>> Scenario::describe() const {
    const auto& s = spec;
    const auto& a = s.feeder.atmosphere;
    std::vector<std::pair<std::string, std::string>> d;
    auto put = [&](const std::string& k, const std::string& v) { d.emplace_back(k, v); };
    put("feeder.detection_r", std::to_string(s.feeder.r));
    put("feeder.path_loss_Il", num(s.feeder.Il));
    put("feeder.eta", num(s.feeder.eta));
    put("pointing.xi", num(s.feeder.pointing.xi));
    put("pointing.A0", num(s.feeder.pointing.A0));
    if (s.shapes) {
        put("turbulence.alpha", num(s.shapes->first));
        put("turbulence.beta", num(s.shapes->second));
    } else {
        put("atmosphere.H", num(a.H));
        put("atmosphere.h0", num(a.h0));
        put("atmosphere.zenith", num(a.zenith));
        put("atmosphere.wavelength", num(a.wavelength));
        put("atmosphere.wind_rms", num(a.wind_rms));
        put("atmosphere.cn2_ground", num(a.cn2_ground));
        put("atmosphere.W0", num(a.W0));
        put("atmosphere.F0", num(a.F0));
        put("atmosphere.beam_wander", a.beam_wander ? "true" : "false");
    }
    put("layout.beam_radius", num(s.beam_radius));
    put("layout.slant_D", num(a.H - a.h0));
    if (s.users.empty()) {
        put("layout.users", "beam_centers");
    } else {
        std::string u;
        for (const auto& p : s.users) u += (u.empty() ? "" : ";") + num(p.x()) + "," + num(p.y());
        put("layout.users", u);
    }
    put("rf.f", num(s.rf.f));
    put("rf.Gt", num(s.rf.Gt));
    put("rf.Gr", num(s.rf.Gr));
    put("rf.Bw", num(s.rf.Bw));
    put("rf.Tr", num(s.rf.Tr));
    put("rf.kB", num(s.rf.kB));
    put("rf.theta_3dB", num(s.rf.theta_3dB));
    put("shadowing.m", num(s.shadowing.m));
    put("shadowing.b", num(s.shadowing.b));
    put("shadowing.Omega", num(s.shadowing.Omega));
    put("hpa.family", hpa::to_string(s.hpa_family));
    put("hpa.ibo_db", num(s.ibo_db));
    put("hpa.swap_labels", s.swap_hpa_labels ? "true" : "false");
    put("power.P_g", num(s.P_g));
    put("power.P_r", num(s.P_r));
    put("power.G", num(s.G));
    put("power.sigma2_sq", num(s.sigma2_sq));
    put("user_index", std::to_string(s.user_index));
    put("operating.mu_r_db", s.mu_r_db ? num(*s.mu_r_db) : "derived");
    if (!s.mu_r_db) put("feeder.sigma1_sq", num(s.feeder.sigma1_sq));
    put("gbar2.mode", to_string(s.gbar2_mode));
    if (s.gbar2_mode == Gbar2Mode::Tracking) put("gbar2.offset_db", num(s.gbar2_offset_db));
    if (s.gbar2_mode == Gbar2Mode::Fixed) put("gbar2.db", num(s.gbar2_db));
    return d;
}

std::string Scenario::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& [k, v] : describe()) {
        if (k == "operating.mu_r_db") continue;  // sweep coordinate is reported separately
        for (char c : k + "=" + v + "\n") {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ULL;
        }
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace vhts::sys
