#include "vhts/transponder.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "vhts/errors.hpp"
#include "vhts/specfun.hpp"

namespace vhts::hpa {
namespace {

constexpr int kTerms = 24;
constexpr double kSeriesFrom = 40.0;

using Coeffs = std::array<long double, kTerms>;

// Asymptotic coefficients in u = 1/ibo.
Coeffs saleh_K_series() {
    Coeffs k{};
    long double f = 1;  // (n+1)!
    for (int n = 0; n < kTerms; ++n) {
        f *= (n + 1);
        k[n] = (n % 2 ? -f : f);
    }
    return k;
}

// x²((1+x)e^x E1(x) − 1)
Coeffs saleh_power_series() {
    Coeffs a{};
    long double f = 1;
    for (int n = 0; n < kTerms; ++n) {
        f *= (n + 1);
        a[n] = (n % 2 ? -1.0L : 1.0L) * (n + 1) * f;
    }
    return a;
}

Coeffs limiter_K_series() {
    // √(πx)·erfcx(√x) = Σ e_n u^n, e_n = (−1)^n (2n−1)!!/2^n; K = Σ (e_n/2 − e_{n+1}) u^n
    std::array<long double, kTerms + 1> e{};
    e[0] = 1;
    for (int n = 1; n <= kTerms; ++n) e[n] = -e[n - 1] * (2 * n - 1) / 2.0L;
    Coeffs k{};
    for (int n = 0; n < kTerms; ++n) k[n] = e[n] / 2 - e[n + 1];
    return k;
}

Coeffs square(const Coeffs& k) {
    Coeffs c{};
    for (int i = 0; i < kTerms; ++i)
        for (int j = 0; i + j < kTerms; ++j) c[i + j] += k[i] * k[j];
    return c;
}

// Sum an asymptotic series, stopping before the terms start to grow.
double eval(const Coeffs& c, double u) {
    long double s = 0, p = 1, last = INFINITY;
    for (int n = 0; n < kTerms; ++n) {
        long double t = c[n] * p;
        if (n > 2 && std::fabs(t) > last && t != 0) break;
        s += t;
        if (t != 0) last = std::fabs(t);
        p *= u;
    }
    return static_cast<double>(s);
}

void check_ibo(double ibo, double P_r) {
    if (!(ibo > 0) || !(P_r > 0)) throw DomainError("bussgang: ibo and P_r must be positive");
}

}  // namespace

Family family_from_string(const std::string& s) {
    if (s == "twta" || s == "TWTA") return Family::TWTA;
    if (s == "sspa" || s == "SSPA") return Family::SSPA;
    if (s == "linear" || s == "LINEAR") return Family::LINEAR;
    throw ConfigError("unknown amplifier family '" + s + "'");
}

std::string to_string(Family f) {
    switch (f) {
        case Family::TWTA: return "twta";
        case Family::SSPA: return "sspa";
        default: return "linear";
    }
}

double saleh_amam(double x, double A_sat) { return A_sat * A_sat * x / (x * x + A_sat * A_sat); }
double saleh_ampm(double x, double A_sat, double phi0) { return phi0 * x / (x * x + A_sat * A_sat); }

double rapp_amam(double x, double A_sat, double v) {
    const double t = std::pow(x / A_sat, 2 * v);
    if (std::isinf(t)) return A_sat;
    return x / std::pow(1.0 + t, 1.0 / (2 * v));
}

Bussgang saleh_pair(double x, double P_r) {
    check_ibo(x, P_r);
    if (x >= kSeriesFrom) {
        static const Coeffs k = saleh_K_series();
        static const Coeffs a = saleh_power_series();
        static const Coeffs k2 = square(k);
        Coeffs d{};
        for (int n = 0; n < kTerms; ++n) d[n] = a[n] - k2[n];
        return {eval(k, 1 / x), P_r * eval(d, 1 / x)};
    }
    const double g = specfun::exp_e1_scaled(x);  // e^x E1(x) = −e^x Ei(−x)
    const double K = x * (1 - x * g);
    const double s = P_r * (x * x * ((1 + x) * g - 1) - K * K);
    return {K, std::max(0.0, s)};
}

Bussgang limiter_pair(double x, double P_r) {
    check_ibo(x, P_r);
    if (x >= kSeriesFrom) {
        static const Coeffs k = limiter_K_series();
        static const Coeffs ks = saleh_K_series();
        static const Coeffs k2 = square(k);
        Coeffs d{};
        for (int n = 0; n < kTerms; ++n) d[n] = ks[n] - k2[n];
        return {eval(k, 1 / x), P_r * eval(d, 1 / x)};
    }
    const double sx = std::sqrt(x);
    const double K = sx / 2 * (2 * sx - std::sqrt(std::numbers::pi) * specfun::erfcx(sx) * (2 * x - 1));
    const double out = x * (1 - x * specfun::exp_e1_scaled(x));  // E[f_A²]/P_r
    return {K, std::max(0.0, P_r * (out - K * K))};
}

Bussgang bussgang_twta(double ibo, double P_r) { return saleh_pair(ibo, P_r); }
Bussgang bussgang_sspa(double ibo, double P_r) { return limiter_pair(ibo, P_r); }

double kappa(double K, double sigma_nl_sq, double G, double sigma1_sq) {
    if (!(K > 0) || !(G > 0) || !(sigma1_sq > 0)) throw DomainError("kappa: K, G and sigma1_sq must be positive");
    return 1.0 + sigma_nl_sq / (K * K * G * G * sigma1_sq);
}

double relay_gain(double P_r, double P_g, double E_Ir, double sigma1_sq) {
    if (!(P_r > 0) || !(P_g > 0) || E_Ir < 0 || !(sigma1_sq > 0))
        throw DomainError("relay_gain: invalid power inputs");
    return std::sqrt(P_r / (P_g * E_Ir + sigma1_sq));
}

HpaState make_hpa(Family family, double ibo_db, double P_r, double G, double sigma1_sq, bool swap_labels) {
    HpaState h;
    h.family = family;
    h.P_r = P_r;
    if (family == Family::LINEAR) return h;
    h.ibo_linear = std::pow(10.0, ibo_db / 10.0);
    h.A_sat = std::sqrt(h.ibo_linear * P_r);
    bool saleh = (family == Family::TWTA) != swap_labels;
    Bussgang b = saleh ? saleh_pair(h.ibo_linear, P_r) : limiter_pair(h.ibo_linear, P_r);
    h.K = b.K;
    h.sigma_nl_sq = b.sigma_nl_sq;
    h.kappa = kappa(h.K, h.sigma_nl_sq, G, sigma1_sq);
    return h;
}

}  // namespace vhts::hpa
