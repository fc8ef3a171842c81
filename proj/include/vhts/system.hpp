#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vhts/errors.hpp"
#include "vhts/fso_link.hpp"
#include "vhts/rf_link.hpp"
#include "vhts/transponder.hpp"

namespace vhts::sys {

template <class Matrix>
struct Precoder {
    Matrix T;
    double c_zf = 0.0;
    double trace_term = 0.0;  // tr[(B Bᴴ)⁻¹]
    double condition = 0.0;
};

// T = √c_zf · Bᴴ(BBᴴ)⁻¹ with c_zf = P_g / tr[(BBᴴ)⁻¹]; solve-based, guarded by
// the condition number of B.
template <class Derived>
Precoder<typename Derived::PlainObject> zf_precoder(const Eigen::MatrixBase<Derived>& B_in, double P_g,
                                                    double max_condition = 1e10) {
    using Matrix = typename Derived::PlainObject;
    const Matrix B = B_in;
    if (B.rows() != B.cols() || B.rows() == 0) throw DomainError("zf_precoder: B must be square");
    if (!(P_g > 0)) throw DomainError("zf_precoder: P_g must be positive");
    Eigen::JacobiSVD<Matrix> svd(B);
    const auto& s = svd.singularValues();
    const double smax = s(0), smin = s(s.size() - 1);
    if (!(smin > 0) || smax / smin > max_condition)
        throw DomainError("zf_precoder: B is rank deficient or ill conditioned (smallest singular value " +
                          std::to_string(smin) + ", largest " + std::to_string(smax) + ")");
    Precoder<Matrix> p;
    p.condition = smax / smin;
    p.trace_term = s.cwiseInverse().cwiseAbs2().sum();
    p.c_zf = P_g / p.trace_term;
    const Matrix gram = B * B.adjoint();
    const Matrix X = gram.llt().solve(B);  // (BBᴴ)⁻¹ B
    p.T = std::sqrt(p.c_zf) * X.adjoint();
    return p;
}

enum class Gbar2Mode {
    Tracking,   // γ̄2 = ρ · μ_r · (2bm+Ω), ρ given in dB
    Fixed,      // γ̄2 given in dB
    FromPower,  // γ̄2 = (P_s/N)‖b‖²(2bm+Ω)/σ2², P_s/N = K²P_r + σ²_NL
};

std::string to_string(Gbar2Mode m);
Gbar2Mode gbar2_mode_from_string(const std::string& s);

struct ScenarioSpec {
    fso::FeederConfig feeder;
    std::optional<std::pair<double, double>> shapes;  // (α, β) instead of the atmosphere pipeline
    double beam_radius = 250e3;
    std::vector<rf::Point> users;  // empty => beam centres
    rf::RfLinkParams rf;
    rf::ShadowedRicianParams shadowing = rf::light_shadowing();
    hpa::Family hpa_family = hpa::Family::TWTA;
    double ibo_db = 25.0;
    bool swap_hpa_labels = false;
    double P_g = 1.0;
    double P_r = 1.0;
    double G = 1.0;
    double sigma2_sq = 1.0;
    int user_index = 0;
    // When set, σ1² is chosen so that the feeder operates at this μ_r (the sweep
    // variable); otherwise feeder.sigma1_sq is used and μ_r follows.
    std::optional<double> mu_r_db = 50.0;
    Gbar2Mode gbar2_mode = Gbar2Mode::Tracking;
    double gbar2_offset_db = 35.0;  // calibrated once against the reference outage curve
    double gbar2_db = 20.0;
};

struct Scenario {
    ScenarioSpec spec;
    fso::TurbulenceParams turbulence;
    Eigen::MatrixXd B;
    double trace_term = 0.0;
    double b_row_norm_sq = 0.0;
    double c_zf = 0.0;
    double condition = 0.0;
    hpa::HpaState hpa;
    double sigma1_sq = 1.0;
    double mu_r = 0.0;
    double gbar1 = 0.0;
    double gbar2 = 0.0;
    double P_s = 0.0;
    double kappa = 1.0;
    double C = 0.0;  // trace_term·γ̄1 + κ

    int r() const { return spec.feeder.r; }
    double xi2() const { return spec.feeder.pointing.xi * spec.feeder.pointing.xi; }
    const rf::ShadowedRicianParams& shadowing() const { return spec.shadowing; }
    // Every input and default as ordered key/value pairs.
    std::vector<std::pair<std::string, std::string>> describe() const;
    std::string fingerprint() const;
};

Scenario build_scenario(const ScenarioSpec& spec);
// Same scenario at another operating point, reusing turbulence and geometry.
Scenario at_mu_r(const Scenario& base, double mu_r_db);

double sndr(double g1, double g2, const Scenario& sc);

}  // namespace vhts::sys
