#include "vhts/fso_link.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <random>

#include "vhts/errors.hpp"
#include "vhts/specfun.hpp"

namespace vhts::fso {
namespace {

constexpr double kPi = std::numbers::pi;

double wavenumber(const AtmosphereConfig& c) { return 2.0 * kPi / c.wavelength; }
double sec(double z) { return 1.0 / std::cos(z); }

// ∫_{h0}^{H} f(h) dh, split on a logarithmic grid because Cn² falls off
// over a few hundred metres and then again over kilometres.
template <class F>
double path_integral(F f, const AtmosphereConfig& c) {
    static const double breaks[] = {100, 300, 1e3, 3e3, 1e4, 3e4, 1e5, 1e6};
    std::vector<double> pts{c.h0};
    for (double b : breaks)
        if (b > c.h0 + 1.0 && b < c.H) pts.push_back(b);
    pts.push_back(c.H);
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double err = 0.0;
        double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, pts[i], pts[i + 1], 20,
                                                                                1e-11, &err);
        if (!(err <= 1e-8 * std::abs(v) + 1e-300))
            throw ConvergenceError("path integral: quadrature did not reach 1e-8 relative");
        total += v;
    }
    return total;
}

}  // namespace

void validate(const AtmosphereConfig& c) {
    if (!(c.H > c.h0 && c.h0 >= 0.0)) throw DomainError("atmosphere: require H > h0 >= 0");
    if (!(c.zenith >= 0.0 && c.zenith < kPi / 2)) throw DomainError("atmosphere: zenith must lie in [0, pi/2)");
    if (!(c.wavelength > 0 && c.wind_rms > 0 && c.cn2_ground >= 0 && c.W0 > 0 && c.F0 > 0))
        throw DomainError("atmosphere: physical quantities must be positive");
}

double hv_cn2(double h, const AtmosphereConfig& c) {
    if (h < 0.0) throw DomainError("hv_cn2: altitude must be nonnegative");
    const double w = c.wind_rms / 27.0;
    return 0.00594 * w * w * std::pow(1e-5 * h, 10.0) * std::exp(-h / 1000.0) +
           2.7e-16 * std::exp(-h / 1500.0) + c.cn2_ground * std::exp(-h / 100.0);
}

double slant_length(const AtmosphereConfig& c) { return (c.H - c.h0) * sec(c.zenith); }

double fried_r0(const AtmosphereConfig& c) {
    validate(c);
    const double k = wavenumber(c);
    const double I = path_integral([&](double h) { return hv_cn2(h, c); }, c);
    return std::pow(0.42 * sec(c.zenith) * k * k * I, -3.0 / 5.0);
}

double rytov_variance(const AtmosphereConfig& c) {
    validate(c);
    const double k = wavenumber(c), span = c.H - c.h0;
    const double I = path_integral(
        [&](double h) {
            double x = (h - c.h0) / span;
            return hv_cn2(h, c) * std::pow(1.0 - x, 5.0 / 6.0) * std::pow(x, 5.0 / 6.0);
        },
        c);
    return 2.25 * std::pow(k, 7.0 / 6.0) * std::pow(span, 5.0 / 6.0) * std::pow(sec(c.zenith), 11.0 / 6.0) * I;
}

namespace {
double sigma_pe_given_r0(const AtmosphereConfig& c, double r0) {
    constexpr double Cr = 2.0 * kPi;
    const double span = c.H - c.h0, s = sec(c.zenith);
    const double q = Cr * Cr * c.W0 * c.W0 / (r0 * r0);
    const double bracket = 1.0 - std::pow(q / (1.0 + q), 1.0 / 6.0);
    const double var = 0.54 * span * span * s * s * std::pow(c.wavelength / (2.0 * c.W0), 2.0) *
                       std::pow(2.0 * c.W0 / r0, 5.0 / 3.0) * bracket;
    return std::sqrt(var);
}
}  // namespace

double beam_wander_sigma_pe(const AtmosphereConfig& c) { return sigma_pe_given_r0(c, fried_r0(c)); }

TurbulenceParams scintillation_params(const AtmosphereConfig& c) {
    validate(c);
    TurbulenceParams t;
    t.fried_r0 = fried_r0(c);
    t.rytov_var = rytov_variance(c);
    t.sigma_pe = sigma_pe_given_r0(c, t.fried_r0);

    const double k = wavenumber(c), L = slant_length(c), span = c.H - c.h0, s = sec(c.zenith);
    const double theta0 = std::isinf(c.F0) ? 1.0 : 1.0 - L / c.F0;
    const double lambda0 = 2.0 * L / (k * c.W0 * c.W0);
    const double W = c.W0 * std::sqrt(theta0 * theta0 + lambda0 * lambda0);
    const double alpha_pe = t.sigma_pe / L;
    const double sr = t.rytov_var;

    double inv_alpha = std::exp(0.49 * sr / std::pow(1.0 + 0.56 * std::pow(sr, 1.2), 7.0 / 6.0)) - 1.0;
    if (c.beam_wander)
        inv_alpha += 5.95 * span * span * s * s * std::pow(2.0 * c.W0 / t.fried_r0, 5.0 / 3.0) *
                     (alpha_pe / W) * (alpha_pe / W);
    t.alpha = 1.0 / inv_alpha;
    t.beta = 1.0 / (std::exp(0.51 * sr / std::pow(1.0 + 0.69 * std::pow(sr, 1.2), 5.0 / 6.0)) - 1.0);
    t.scintillation_index = 1.0 / t.alpha + 1.0 / t.beta + 1.0 / (t.alpha * t.beta);
    return t;
}

TurbulenceParams from_shapes(double alpha, double beta) {
    if (!(alpha > 0 && beta > 0)) throw DomainError("turbulence: alpha and beta must be positive");
    TurbulenceParams t;
    t.alpha = alpha;
    t.beta = beta;
    t.scintillation_index = 1.0 / alpha + 1.0 / beta + 1.0 / (alpha * beta);
    return t;
}

double irradiance_pdf(double I, const TurbulenceParams& t, const PointingConfig& p, double Il) {
    if (!(I > 0.0)) throw DomainError("irradiance_pdf: I must be positive");
    const double xi2 = p.xi * p.xi, scale = p.A0 * Il;
    specfun::GParams g{{xi2}, {xi2 - 1.0, t.alpha - 1.0, t.beta - 1.0}, 3, 0, t.alpha * t.beta * I / scale};
    double G = specfun::meijer_g(g, 1e-10).value;
    double pre = xi2 * t.alpha * t.beta /
                 (scale * std::exp(specfun::ln_gamma(t.alpha) + specfun::ln_gamma(t.beta)));
    return std::max(0.0, pre * G);
}

double sample_irradiance(const TurbulenceParams& t, const PointingConfig& p, double Il, CounterRng& rng) {
    std::gamma_distribution<double> ga(t.alpha, 1.0 / t.alpha), gb(t.beta, 1.0 / t.beta);
    const double Ia = ga(rng) * gb(rng);
    const double Ip = p.A0 * std::pow(rng.uniform(), 1.0 / (p.xi * p.xi));
    return Il * Ia * Ip;
}

double irradiance_moment(double r, const TurbulenceParams& t, const PointingConfig& p, double Il) {
    const double xi2 = p.xi * p.xi;
    const double ga = specfun::ln_gamma(t.alpha + r) - specfun::ln_gamma(t.alpha) - r * std::log(t.alpha);
    const double gb = specfun::ln_gamma(t.beta + r) - specfun::ln_gamma(t.beta) - r * std::log(t.beta);
    return std::pow(p.A0 * Il, r) * xi2 / (xi2 + r) * std::exp(ga + gb);
}

double gamma1_pdf(double g1, const TurbulenceParams& t, const FeederConfig& f, double mu_r) {
    if (!(g1 > 0.0) || !(mu_r > 0.0)) throw DomainError("gamma1_pdf: arguments must be positive");
    const double xi2 = f.pointing.xi * f.pointing.xi;
    const int r = f.r;
    const double lam = t.alpha * t.beta * xi2 / (xi2 + 1.0);
    specfun::GParams g{{xi2 + 1.0}, {xi2, t.alpha, t.beta}, 3, 0, lam * std::pow(g1 / mu_r, 1.0 / r)};
    double G = specfun::meijer_g(g, 1e-10).value;
    double pre = xi2 / (r * std::exp(specfun::ln_gamma(t.alpha) + specfun::ln_gamma(t.beta)) * g1);
    return std::max(0.0, pre * G);
}

double gbar1_from_mu_r(double mu_r, const TurbulenceParams& t, const PointingConfig& p, int r) {
    // γ1 = μ_r (I / (A0 Il ξ²/(ξ²+1)))^r, so E[γ1] = μ_r E[I^r] / (A0 Il ξ²/(ξ²+1))^r.
    const double xi2 = p.xi * p.xi;
    const double mean_ip = p.A0 * xi2 / (xi2 + 1.0);
    return mu_r * irradiance_moment(r, t, p, 1.0) / std::pow(mean_ip, r);
}

double mu_r_from_gbar1(double gbar1, const TurbulenceParams& t, const PointingConfig& p, int r) {
    return gbar1 / gbar1_from_mu_r(1.0, t, p, r);
}

}  // namespace vhts::fso
