#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "vhts/random.hpp"

namespace vhts::rf {

using Point = Eigen::Vector2d;

struct BeamLayout {
    double beam_radius = 250e3;  // m
    double slant_D = 35786e3;    // m, common slant range
    std::vector<Point> centers;
    std::vector<Point> users;    // empty => one user at each beam center
};

struct RfLinkParams {
    double f = 20e9;
    double Gt = std::pow(10.0, 3.816);  // 38.16 dBi
    double Gr = std::pow(10.0, 5.2);    // 52 dBi
    double Bw = 50e6;
    double Tr = 207.0;
    double kB = 1.38e-23;
    double theta_3dB = 0.4 * std::numbers::pi / 180.0;
    double c = 3e8;
};

struct ShadowedRicianParams {
    double m = 19.0;
    double b = 0.158;
    double Omega = 1.29;
};

inline ShadowedRicianParams light_shadowing() { return {19.0, 0.158, 1.29}; }
inline ShadowedRicianParams heavy_shadowing() { return {1.0, 0.063, 8.97e-4}; }

std::vector<Point> beam_centers(double R);
BeamLayout default_layout(double R = 250e3, double D = 35786e3);

// Pattern factor J1(u)/(2u) + 36 J3(u)/u^3, equal to 1 at u = 0.
double pattern(double u);
double boresight_gain(const BeamLayout& layout, const RfLinkParams& rf);
Eigen::MatrixXd beam_gain_matrix(const BeamLayout& layout, const RfLinkParams& rf);

double shadowed_rician_pdf(double y, const ShadowedRicianParams& p);
double sample_shadowed_rician(const ShadowedRicianParams& p, CounterRng& rng);

bool has_integer_m(const ShadowedRicianParams& p);
int integer_m(const ShadowedRicianParams& p);  // throws DomainError otherwise

// SNR of the user link; gbar2 follows the convention P_s‖b‖²(2bm+Ω)/N,
// so E[γ2] = gbar2·(2b+Ω)/(2bm+Ω).
double gamma2_pdf(double g2, const ShadowedRicianParams& p, double gbar2);
double gamma2_ccdf(double x, const ShadowedRicianParams& p, double gbar2);
double gamma2_mean(const ShadowedRicianParams& p, double gbar2);
double gamma2_from_amplitude(double d, const ShadowedRicianParams& p, double gbar2);

}  // namespace vhts::rf
