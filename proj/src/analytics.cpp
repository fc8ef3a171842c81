#include "vhts/analytics.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "vhts/specfun.hpp"

namespace vhts::analytics {
namespace {

using specfun::BivariateGParams;
using specfun::CompensatedSum;

// Shared pieces of the bivariate closed forms. With
//   Ψ(rt) = Γ(ξ²+rt)Γ(α+rt)Γ(β+rt)/Γ(ξ²+1+rt)
// the CDF kernel for index j is
//   T_j = ∫∫ Γ(s+t) Γ(j−s) Γ(1−s) X^s · Ψ(rt)/Γ(1+t) · (Y1/x)^t,
// and Gauss multiplication turns Ψ into standard G blocks.
struct Kernel {
    int m = 1, r = 1;
    double alpha = 0, beta = 0, xi2 = 0;
    double pre = 0;   // ξ² A^{m−1} / (Γ(α)Γ(β))
    double dup = 1;   // r^{α+β−2} / (2π)^{r−1}
    double yscale = 1;  // r^{2r}
    double X = 0;     // C m / (κ γ̄2)
    double Y1 = 0;    // (ξ²+1)^r μ_r / ((αβξ²)^r κ ‖b‖²)
    double Z = 0;     // κ ‖b‖² (αβξ²)^r / (ξ²+1)^r
    std::vector<double> w;   // Σ_{k≥j} C(m−1,k) c^k / j!
    std::vector<double> K1;  // Δ(r,1−ξ²) ∪ Δ(r,1−α) ∪ Δ(r,1−β)
    std::vector<double> Dxi; // Δ(r,−ξ²)
};

Kernel make_kernel(const sys::Scenario& sc) {
    Kernel k;
    const auto& sh = sc.shadowing();
    k.m = rf::integer_m(sh);
    k.r = sc.r();
    k.alpha = sc.turbulence.alpha;
    k.beta = sc.turbulence.beta;
    k.xi2 = sc.xi2();
    const double A = 2 * sh.b * k.m / (2 * sh.b * k.m + sh.Omega);
    const double c = sh.Omega / (2 * sh.b * k.m);
    k.pre = k.xi2 * std::exp((k.m - 1) * std::log(A) - specfun::ln_gamma(k.alpha) - specfun::ln_gamma(k.beta));
    k.dup = std::pow(k.r, k.alpha + k.beta - 2) / std::pow(2 * std::numbers::pi, k.r - 1);
    k.yscale = std::pow(k.r, 2 * k.r);
    k.X = sc.C * k.m / (sc.kappa * sc.gbar2);
    const double lam_r = std::pow(k.alpha * k.beta * k.xi2 / (k.xi2 + 1), k.r);
    k.Y1 = sc.mu_r / (lam_r * sc.kappa * sc.b_row_norm_sq);
    k.Z = sc.kappa * sc.b_row_norm_sq * lam_r;

    std::vector<double> binom(k.m);
    double ck = 1;
    for (int i = 0; i < k.m; ++i) {
        if (i > 0) ck *= (k.m - i) * c / i;
        binom[i] = ck;
    }
    k.w.assign(k.m, 0.0);
    double fact = 1;
    for (int j = 0; j < k.m; ++j) {
        if (j > 0) fact *= j;
        CompensatedSum s;
        for (int i = j; i < k.m; ++i) s.add(binom[i]);
        k.w[j] = static_cast<double>(s.value()) / fact;
    }
    for (double a : {1 - k.xi2, 1 - k.alpha, 1 - k.beta})
        for (double d : specfun::delta(k.r, a)) k.K1.push_back(d);
    k.Dxi = specfun::delta(k.r, -k.xi2);
    return k;
}

BivariateGParams base_params(const Kernel& k, int j) {
    BivariateGParams p;
    p.outer = {0.0};
    p.b1 = {static_cast<double>(j), 1.0};
    p.m1 = 2;
    p.n1 = 0;
    p.a2 = k.K1;
    p.n2 = 3 * k.r;
    p.x = k.X;
    return p;
}

specfun::GResult term(const BivariateGParams& p, int j, const char* what, double tol) {
    try {
        return specfun::meijer_g_bivariate(p, tol);
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string(what) + ": bivariate term j=" + std::to_string(j) + " failed: " + e.what());
    }
}

double clamp_probability(double raw, double hi, const char* what) {
    double c = std::clamp(raw, 0.0, hi);
    if (std::abs(raw - c) >= 1e-6)
        throw ConvergenceError(std::string(what) + ": closed form left the admissible range (raw value " +
                               std::to_string(raw) + ")");
    return c;
}

// Σ_j w_j T_j(y) for the given second-block shape.
Estimate kernel_sum(const Kernel& k, double y, const std::vector<double>& a2, int n2, const std::vector<double>& b2,
                    int m2, const char* what, double tol) {
    CompensatedSum s;
    double err = 0;
    for (int j = 0; j < k.m; ++j) {
        auto p = base_params(k, j);
        p.a2 = a2;
        p.n2 = n2;
        p.b2 = b2;
        p.m2 = m2;
        p.y = k.yscale * y;
        auto g = term(p, j, what, tol);
        s.add(k.w[j] * g.value);
        err += k.w[j] * g.error;
    }
    return {static_cast<double>(s.value()), err};
}

std::vector<double> concat(std::initializer_list<std::vector<double>> parts) {
    std::vector<double> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

bool near_nonpositive_int(double x) { return x < 1e-7 && std::abs(x - std::round(x)) < 1e-7; }

// High-μ_r expansion coefficients J_v and exponents θ_v for one j.
struct Expansion {
    double J[4];
    double theta[4];
};

bool collides(double al, double be, double x2, int r, int j) {
    const double th[3] = {x2 / r, al / r, be / r};
    if (near_nonpositive_int(al - r * j) || near_nonpositive_int(be - r * j) || std::abs(x2 - r * j) < 1e-7)
        return true;
    if (near_nonpositive_int(al - x2) || near_nonpositive_int(be - x2) || near_nonpositive_int(be - al) ||
        near_nonpositive_int(al - be) || std::abs(x2 - al) < 1e-7 || std::abs(x2 - be) < 1e-7)
        return true;
    for (double t : th)
        if (near_nonpositive_int(j - t) || near_nonpositive_int(1 - t)) return true;
    return false;
}

Expansion expansion(const Kernel& k0, int j, AsymptoticForm form) {
    double al = k0.alpha, be = k0.beta, x2 = k0.xi2;
    const int r = k0.r;
    for (int attempt = 0; collides(al, be, x2, r, j); ++attempt) {
        if (attempt == 8) throw DomainError("asymptotic expansion: parameter collision persists after perturbation");
        al += 1e-6;
        be += 2e-6;
        x2 += 3e-6;
    }
    Expansion e;
    e.theta[0] = j;
    e.theta[1] = x2 / r;
    e.theta[2] = al / r;
    e.theta[3] = be / r;
    const double XZ = k0.X * k0.Z;
    e.J[0] = std::tgamma(al - r * j) * std::tgamma(be - r * j) / (x2 - r * j) * std::pow(XZ, j);
    const double pre[3] = {std::tgamma(al - x2) * std::tgamma(be - x2) / r, std::tgamma(be - al) / (r * (x2 - al)),
                           std::tgamma(al - be) / (r * (x2 - be))};
    for (int v = 1; v < 4; ++v) {
        const double th = e.theta[v];
        if (form == AsymptoticForm::PrintedHighGbar2) {
            e.J[v] = 2 * pre[v - 1] * std::tgamma(j - th) * std::pow(XZ, th);
            continue;
        }
        specfun::GParams g{{1 + th}, {static_cast<double>(j), 1.0}, 2, 1, k0.X};
        double G = specfun::meijer_g(g, 1e-12).value;
        double body = G * specfun::rgamma(1 - th);
        if (form == AsymptoticForm::Printed) body += std::tgamma(j - th) * std::pow(k0.X, th);
        e.J[v] = pre[v - 1] * std::pow(k0.Z, th) * body;
    }
    return e;
}

// Adaptive Gauss-Kronrod with an absolute error target, so that pieces
// carrying negligible mass are not refined to a relative tolerance.
template <class F>
Estimate adaptive(F& f, double a, double b, double tol, int depth) {
    double e = 0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 0, 0.0, &e);
    if (e <= tol || depth == 0) return {v, e};
    const double mid = 0.5 * (a + b);
    auto l = adaptive(f, a, mid, tol / std::sqrt(2.0), depth - 1);
    auto r = adaptive(f, mid, b, tol / std::sqrt(2.0), depth - 1);
    return {l.value + r.value, l.error + r.error};
}

}  // namespace

std::string to_string(Method m) {
    switch (m) {
        case Method::Exact: return "exact";
        case Method::Asymptotic: return "asymptotic";
        case Method::Oracle: return "oracle";
        default: return "monte-carlo";
    }
}

Method method_from_string(const std::string& s) {
    if (s == "exact") return Method::Exact;
    if (s == "asymptotic") return Method::Asymptotic;
    if (s == "oracle") return Method::Oracle;
    if (s == "monte-carlo" || s == "mc") return Method::MonteCarlo;
    throw ConfigError("unknown method '" + s + "'");
}

ModulationSpec ModulationSpec::ook() { return {"OOK", 2, 1.0, 0.5, {0.5}, 2}; }
ModulationSpec ModulationSpec::bpsk() { return {"BPSK", 2, 1.0, 0.5, {1.0}, 1}; }

ModulationSpec ModulationSpec::mpsk(int M) {
    if (M < 2 || (M & (M - 1))) throw DomainError("M-PSK: M must be a power of two");
    ModulationSpec s{std::to_string(M) + "-PSK", M, 2.0 / std::max(std::log2(M), 2.0), 0.5, {}, 1};
    const int n = std::max(M / 4, 1);
    for (int u = 1; u <= n; ++u) s.q.push_back(std::pow(std::sin((2 * u - 1) * std::numbers::pi / M), 2));
    return s;
}

ModulationSpec ModulationSpec::mqam(int M) {
    const int root = static_cast<int>(std::lround(std::sqrt(M)));
    if (M < 4 || root * root != M || (M & (M - 1))) throw DomainError("M-QAM: M must be an even power of two");
    ModulationSpec s{std::to_string(M) + "-QAM", M, 4.0 / std::log2(M) * (1 - 1 / std::sqrt(M)), 0.5, {}, 1};
    for (int u = 1; u <= root / 2; ++u) s.q.push_back(3.0 * (2 * u - 1) * (2 * u - 1) / (2.0 * (M - 1)));
    return s;
}

ModulationSpec ModulationSpec::parse(const std::string& in) {
    std::string s;
    for (char c : in) s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "ook") return ook();
    if (s == "bpsk") return bpsk();
    auto suffix = [&](const std::string& tail) {
        return s.size() > tail.size() && s.compare(s.size() - tail.size(), tail.size(), tail) == 0;
    };
    try {
        if (suffix("psk")) return mpsk(std::stoi(s.substr(0, s.size() - 3)));
        if (suffix("qam")) return mqam(std::stoi(s.substr(0, s.size() - 3)));
    } catch (const std::invalid_argument&) {
    }
    throw ConfigError("unknown modulation '" + in + "'");
}

Estimate sndr_cdf_exact(double x, const sys::Scenario& sc, const Options& opt) {
    if (!(x > 0)) return {0.0, 0.0};
    const Kernel k = make_kernel(sc);
    auto s = kernel_sum(k, k.Y1 / x, k.K1, 3 * k.r, concat({k.Dxi, {0.0}}), 0, "cdf", opt.rel_tol);
    const double f = k.pre * k.dup;
    return {clamp_probability(1.0 - f * s.value, 1.0, "cdf"), f * s.error};
}

Estimate sndr_pdf_exact(double x, const sys::Scenario& sc, const Options& opt) {
    if (!(x > 0)) throw DomainError("sndr_pdf_exact: x must be positive");
    const Kernel k = make_kernel(sc);
    auto s = kernel_sum(k, k.Y1 / x, k.K1, 3 * k.r, concat({k.Dxi, {1.0}}), 0, "pdf", opt.rel_tol);
    const double f = k.pre * k.dup / x;
    return {f * s.value, f * s.error};
}

Estimate sndr_cdf_oracle(double x, const sys::Scenario& sc, double abs_tol) {
    if (!(x > 0)) return {0.0, 0.0};
    const double xl = sc.b_row_norm_sq * x;  // threshold on ‖b‖²γ
    const auto& sh = sc.shadowing();
    const double S = sc.gbar1;
    auto integrand = [&](double th) {
        if (th <= 0 || th >= std::numbers::pi / 2) return 0.0;
        const double tn = std::tan(th), z = S * tn;
        const double tail = rf::gamma2_ccdf(sc.C * xl / z, sh, sc.gbar2);
        if (tail == 0.0) return 0.0;
        const double dz = S * (1 + tn * tn);
        return tail * fso::gamma1_pdf(sc.kappa * xl + z, sc.turbulence, sc.spec.feeder, sc.mu_r) * dz;
    };
    // split the range on a logarithmic grid in z, mapped to θ = atan(z/S)
    std::vector<double> br{0.0};
    for (int e = -14; e <= 6; e += 2) br.push_back(std::atan(std::pow(10.0, e)));
    br.push_back(std::numbers::pi / 2);
    double total = 0, err = 0;
    const double piece_tol = 0.1 * abs_tol / (br.size() - 1);
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
        auto r = adaptive(integrand, br[i], br[i + 1], piece_tol, 24);
        total += r.value;
        err += r.error;
    }
    if (!(err <= abs_tol)) throw ConvergenceError("cdf oracle: quadrature error " + std::to_string(err));
    return {std::clamp(1.0 - total, 0.0, 1.0), err};
}

Estimate sndr_moments(int n, const sys::Scenario& sc, const Options&) {
    if (n < 1) throw DomainError("sndr_moments: n must be a positive integer");
    const Kernel k = make_kernel(sc);
    CompensatedSum s;
    double err = 0;
    for (int j = 0; j < k.m; ++j) {
        specfun::GParams g{{1.0 - n}, {static_cast<double>(j), 1.0}, 2, 1, k.X};
        auto G = specfun::meijer_g(g, 1e-12);
        s.add(k.w[j] * G.value);
        err += k.w[j] * G.error;
    }
    const double rn = static_cast<double>(k.r) * n;
    const double lf = specfun::ln_gamma(k.alpha + rn) + specfun::ln_gamma(k.beta + rn) - std::log(k.xi2 + rn) -
                      specfun::ln_gamma(static_cast<double>(n)) + n * std::log(k.Y1);
    const double f = k.pre * std::exp(lf);
    return {f * static_cast<double>(s.value()), f * err};
}

Estimate outage_exact(double gamma_th, const sys::Scenario& sc, const Options& opt) {
    return sndr_cdf_exact(gamma_th, sc, opt);
}

double outage_asymptotic(double gamma_th, const sys::Scenario& sc, const Options& opt) {
    const Kernel k = make_kernel(sc);
    CompensatedSum s;
    for (int j = 0; j < k.m; ++j) {
        auto e = expansion(k, j, opt.form);
        double t = 0;
        for (int v = 0; v < 4; ++v) t += e.J[v] * std::pow(gamma_th / sc.mu_r, e.theta[v]);
        s.add(k.w[j] * t);
    }
    return 1.0 - k.pre * static_cast<double>(s.value());
}

namespace {
void check_detection(const ModulationSpec& mod, const sys::Scenario& sc) {
    if (mod.detection_r != sc.r())
        throw DomainError(mod.name + " requires " + (mod.detection_r == 2 ? "IM/DD" : "heterodyne") + " detection");
}
}  // namespace

Estimate ber_exact(const ModulationSpec& mod, const sys::Scenario& sc, const Options& opt) {
    check_detection(mod, sc);
    const Kernel k = make_kernel(sc);
    const auto b2 = concat({{mod.p}, k.Dxi, {0.0}});
    const double f = k.pre * k.dup / std::tgamma(mod.p);
    double total = 0, err = 0;
    for (double q : mod.q) {
        auto s = kernel_sum(k, q * k.Y1, k.K1, 3 * k.r, b2, 1, "ber", opt.rel_tol);
        total += 1.0 - f * s.value;
        err += f * s.error;
    }
    const double hi = mod.delta * mod.n() / 2;
    return {clamp_probability(mod.delta / 2 * total, hi, "ber"), mod.delta / 2 * err};
}

double ber_asymptotic(const ModulationSpec& mod, const sys::Scenario& sc, const Options& opt) {
    check_detection(mod, sc);
    const Kernel k = make_kernel(sc);
    CompensatedSum s;
    for (int j = 0; j < k.m; ++j) {
        auto e = expansion(k, j, opt.form);
        double t = 0;
        for (double q : mod.q)
            for (int v = 0; v < 4; ++v)
                t += e.J[v] * std::tgamma(mod.p + e.theta[v]) * std::pow(q * sc.mu_r, -e.theta[v]);
        s.add(k.w[j] * t);
    }
    return mod.delta * mod.n() / 2 - mod.delta / (2 * std::tgamma(mod.p)) * k.pre * static_cast<double>(s.value());
}

double capacity_tau(int r) { return r == 2 ? std::numbers::e / (2 * std::numbers::pi) : 1.0; }

Estimate capacity_exact(const sys::Scenario& sc, const Options& opt) {
    const Kernel k = make_kernel(sc);
    const double tau = capacity_tau(k.r);
    auto s = kernel_sum(k, tau * k.Y1, concat({{1.0}, k.K1}), 3 * k.r + 1, concat({{1.0}, k.Dxi, {0.0}}), 1,
                        "capacity", opt.rel_tol);
    const double f = k.pre * k.dup / std::numbers::ln2;
    return {std::max(0.0, f * s.value), f * s.error};
}

}  // namespace vhts::analytics
