#include "vhts/rf_link.hpp"

#include <cmath>
#include <random>

#include "vhts/errors.hpp"
#include "vhts/specfun.hpp"

namespace vhts::rf {

std::vector<Point> beam_centers(double R) {
    if (!(R > 0)) throw DomainError("beam_centers: radius must be positive");
    const double s3 = std::sqrt(3.0);
    return {Point(0, 0),
            Point(-s3 / 2 * R, 1.5 * R),
            Point(s3 / 2 * R, 1.5 * R),
            Point(s3 * R, 0),
            Point(s3 / 2 * R, -1.5 * R),
            Point(-s3 / 2 * R, -1.5 * R),
            Point(-s3 * R, 0)};
}

BeamLayout default_layout(double R, double D) {
    BeamLayout l;
    l.beam_radius = R;
    l.slant_D = D;
    l.centers = beam_centers(R);
    return l;
}

double pattern(double u) {
    u = std::abs(u);
    if (u < 1e-4) return 1.0 - u * u / 8.0;  // series: 1/4 - u²/64 + 3/4 - 3u²/64
    return specfun::bessel_j(1, u) / (2 * u) + 36.0 * specfun::bessel_j(3, u) / (u * u * u);
}

double boresight_gain(const BeamLayout& l, const RfLinkParams& rf) {
    return rf.c * std::sqrt(rf.Gt * rf.Gr) /
           (4 * std::numbers::pi * rf.f * l.slant_D * std::sqrt(rf.kB * rf.Tr * rf.Bw));
}

Eigen::MatrixXd beam_gain_matrix(const BeamLayout& l, const RfLinkParams& rf) {
    if (!(rf.f > 0 && rf.Gt > 0 && rf.Gr > 0 && rf.Bw > 0 && rf.Tr > 0 && rf.kB > 0 && rf.theta_3dB > 0))
        throw DomainError("beam_gain_matrix: RF parameters must be positive");
    const auto& users = l.users.empty() ? l.centers : l.users;
    const Eigen::Index N = static_cast<Eigen::Index>(l.centers.size());
    if (static_cast<Eigen::Index>(users.size()) != N)
        throw DomainError("beam_gain_matrix: need one user per beam");
    const double B0 = boresight_gain(l, rf), s3 = std::sin(rf.theta_3dB);
    Eigen::MatrixXd B(N, N);
    for (Eigen::Index i = 0; i < N; ++i)
        for (Eigen::Index j = 0; j < N; ++j) {
            const double d = (users[i] - l.centers[j]).norm();
            const double u = 2.07123 * std::sin(std::atan(d / l.slant_D)) / s3;
            B(i, j) = B0 * pattern(u);
        }
    return B;
}

double shadowed_rician_pdf(double y, const ShadowedRicianParams& p) {
    if (y < 0) throw DomainError("shadowed_rician_pdf: amplitude must be nonnegative");
    const double s = 2 * p.b * p.m + p.Omega;
    const double A = 2 * p.b * p.m / s;
    const double z = p.Omega * y * y / (2 * p.b * s);
    // e^{-y²/2b} 1F1(m;1;z) overflows separately for large y; combine through Kummer
    // when z is large: 1F1(m;1;z) = e^z 1F1(1-m;1;-z).
    const double e = -y * y / (2 * p.b);
    double val;
    if (z > 50)
        val = std::exp(e + z) * specfun::hyp1f1(1 - p.m, 1, -z);
    else
        val = std::exp(e) * specfun::hyp1f1(p.m, 1, z);
    return std::pow(A, p.m) * (y / p.b) * val;
}

double sample_shadowed_rician(const ShadowedRicianParams& p, CounterRng& rng) {
    double los = 0.0;
    if (p.Omega > 0) {
        std::gamma_distribution<double> g(p.m, p.Omega / p.m);
        los = std::sqrt(g(rng));
    }
    const double phi = 2 * std::numbers::pi * rng.uniform();
    std::normal_distribution<double> n(0.0, std::sqrt(p.b));
    const double re = los * std::cos(phi) + n(rng);
    const double im = los * std::sin(phi) + n(rng);
    return std::hypot(re, im);
}

bool has_integer_m(const ShadowedRicianParams& p) { return p.m >= 1 && p.m == std::floor(p.m) && p.m < 1e6; }

int integer_m(const ShadowedRicianParams& p) {
    if (!has_integer_m(p))
        throw DomainError("analytic user-link statistics need an integer m >= 1; use Monte Carlo for non-integer m");
    return static_cast<int>(p.m);
}

double gamma2_pdf(double g2, const ShadowedRicianParams& p, double gbar2) {
    const int m = integer_m(p);
    if (!(gbar2 > 0)) throw DomainError("gamma2_pdf: gbar2 must be positive");
    if (g2 < 0) return 0.0;
    const double A = 2 * p.b * m / (2 * p.b * m + p.Omega);
    const double w = p.Omega * g2 / (2 * p.b * gbar2);
    specfun::CompensatedSum s;
    double term = 1.0;  // (-1)^k (1-m)_k / k!² · w^k, all terms positive
    for (int k = 0; k < m; ++k) {
        if (k > 0) term *= (m - k) * w / (static_cast<double>(k) * k);
        s.add(term);
    }
    return m / gbar2 * std::pow(A, m - 1) * std::exp(-m * g2 / gbar2) * s.value();
}

double gamma2_ccdf(double x, const ShadowedRicianParams& p, double gbar2) {
    const int m = integer_m(p);
    if (!(gbar2 > 0)) throw DomainError("gamma2_ccdf: gbar2 must be positive");
    if (x <= 0) return 1.0;
    const double A = 2 * p.b * m / (2 * p.b * m + p.Omega);
    const double c = p.Omega / (2 * p.b * m), v = m * x / gbar2;
    specfun::CompensatedSum s;
    double ck = 1.0;  // C(m-1,k) c^k
    for (int k = 0; k < m; ++k) {
        if (k > 0) ck *= (m - k) * c / k;
        double tj = 1.0, inner = 1.0;
        for (int j = 1; j <= k; ++j) {
            tj *= v / j;
            inner += tj;
        }
        s.add(ck * inner);
    }
    return std::pow(A, m - 1) * std::exp(-v) * s.value();
}

double gamma2_mean(const ShadowedRicianParams& p, double gbar2) {
    return gbar2 * (2 * p.b + p.Omega) / (2 * p.b * p.m + p.Omega);
}

double gamma2_from_amplitude(double d, const ShadowedRicianParams& p, double gbar2) {
    return gbar2 / (2 * p.b * p.m + p.Omega) * d * d;
}

}  // namespace vhts::rf
