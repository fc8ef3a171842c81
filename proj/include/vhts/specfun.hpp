#pragma once

#include <complex>
#include <vector>

#include "vhts/errors.hpp"

namespace vhts::specfun {

struct SignedLog {
    double value;  // ln|f|
    int sign;      // +1 or -1
};

// ln|Γ(x)| with the sign of Γ(x) carried separately.
SignedLog ln_gamma_signed(double x);
double ln_gamma(double x);
// Principal-ish complex log-gamma; only exp() of it is meaningful to callers.
std::complex<double> ln_gamma(std::complex<double> z);
// 1/Γ(x), zero at the poles.
double rgamma(double x);

double pochhammer(double a, int k);
double hyp1f1(double a, double b, double x);

// Ei(x) for x < 0.
double exp_integral_ei(double x);
// e^x E1(x) for x > 0, i.e. -e^x Ei(-x); stable for large x.
double exp_e1_scaled(double x);

double erfc(double x);
// e^{x^2} erfc(x), stable for large positive x.
double erfcx(double x);
double bessel_j(int order, double x);
double bessel_k(double order, double x);

// Δ(r, a) = {a/r, (a+1)/r, ..., (a+r-1)/r}
std::vector<double> delta(int r, double a);

struct ContourPlan {
    double c_s = 0.0;        // abscissa of the first variable
    double c_t = 0.0;        // abscissa of the second variable (bivariate only)
    double half_height_s = 0.0;
    double half_height_t = 0.0;
    double step = 0.0;
    long nodes = 0;
    double perturbation = 0.0;
    int residues = 0;        // poles on the wrong side of the line, added back explicitly
};

// Standard Meijer G:
//   G^{m,n}_{p,q}(z | a; b) = 1/(2πi) ∫ Π_{j<m}Γ(b_j - s) Π_{j<n}Γ(1 - a_j + s)
//                              / (Π_{j>=m}Γ(1 - b_j + s) Π_{j>=n}Γ(a_j - s)) z^s ds
struct GParams {
    std::vector<double> a;
    std::vector<double> b;
    int m = 0;
    int n = 0;
    double z = 1.0;
};

struct GResult {
    double value = 0.0;
    double error = 0.0;
    ContourPlan plan;
};

GResult meijer_g(const GParams& p, double rel_tol = 1e-10, double step_scale = 1.0);

// Bivariate Meijer G in the three-block form
//   1/(2πi)^2 ∫∫ Π_k Γ(outer_k + s + t) · φ1(s) x^s · φ2(t) y^t ds dt
// where φ1, φ2 are the gamma ratios of a standard univariate G with
// (a1, b1, m1, n1) and (a2, b2, m2, n2).  With outer = {0} this is the
// kernel used by the SNDR distribution, BER and capacity closed forms.
struct BivariateGParams {
    std::vector<double> outer;
    std::vector<double> a1, b1;
    int m1 = 0, n1 = 0;
    std::vector<double> a2, b2;
    int m2 = 0, n2 = 0;
    double x = 1.0;
    double y = 1.0;
};

GResult meijer_g_bivariate(const BivariateGParams& p, double rel_tol = 1e-8,
                           double step_scale = 1.0);

// Neumaier-compensated accumulator in extended precision.
class CompensatedSum {
public:
    void add(long double v) {
        long double t = sum_ + v;
        if ((sum_ < 0 ? -sum_ : sum_) >= (v < 0 ? -v : v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    long double value() const { return sum_ + comp_; }

private:
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
};

}  // namespace vhts::specfun
