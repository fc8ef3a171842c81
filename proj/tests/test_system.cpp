#include <cmath>
#include <random>

#include "doctest.h"
#include "vhts/system.hpp"

using namespace vhts;
using namespace vhts::sys;

TEST_CASE("zero-forcing identities") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n;
    int tested = 0;
    while (tested < 100) {
        const int N = 2 + tested % 7;
        Eigen::MatrixXcd B(N, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) B(i, j) = {n(rng), n(rng)};
        B += 3.0 * Eigen::MatrixXcd::Identity(N, N);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
        if (svd.singularValues()(0) / svd.singularValues()(N - 1) > 1e3) continue;
        const double Pg = 0.5 + tested;
        auto p = zf_precoder(B, Pg);
        Eigen::MatrixXcd I = B * p.T / std::sqrt(p.c_zf);
        CHECK((I - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(std::abs((p.T * p.T.adjoint()).trace().real() - Pg) < 1e-10 * Pg);
        ++tested;
    }

    auto id = zf_precoder(Eigen::MatrixXd::Identity(7, 7), 7.0);
    CHECK(id.c_zf == doctest::Approx(1.0));
    CHECK((id.T - Eigen::MatrixXd::Identity(7, 7)).norm() < 1e-14);

    auto B = rf::beam_gain_matrix(rf::default_layout(), rf::RfLinkParams{});
    auto p = zf_precoder(B, 1.0);
    // independent route: LU solve for each column, never forming the inverse
    Eigen::FullPivLU<Eigen::MatrixXd> lu(B * B.transpose());
    double tr = 0.0;
    for (int k = 0; k < 7; ++k) tr += lu.solve(Eigen::VectorXd::Unit(7, k))(k);
    CHECK(p.trace_term == doctest::Approx(tr).epsilon(1e-12));
    CHECK(p.trace_term == doctest::Approx(2.3301383845274444).epsilon(1e-9));
    CHECK(p.c_zf == doctest::Approx(1.0 / tr).epsilon(1e-12));
    CHECK((B * p.T - std::sqrt(p.c_zf) * Eigen::MatrixXd::Identity(7, 7)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(std::abs((p.T * p.T.transpose()).trace() - 1.0) < 1e-10);

    Eigen::MatrixXd S = Eigen::MatrixXd::Ones(3, 3);
    CHECK_THROWS_AS(zf_precoder(S, 1.0), DomainError);
}

TEST_CASE("end-to-end SNDR law") {
    Scenario sc;
    sc.b_row_norm_sq = 1;
    sc.trace_term = 1;
    sc.gbar1 = 10;
    sc.kappa = 1;
    CHECK(sndr(20, 22, sc) == doctest::Approx(440.0 / 33.0));
    CHECK(sndr(0, 22, sc) == 0.0);
    CHECK(sndr(20, 0, sc) == 0.0);

    sc.kappa = 3.0;
    sc.b_row_norm_sq = 13.0;
    double prev = 0;
    for (double g2 = 0.1; g2 < 1e6; g2 *= 1.7) {
        double v = sndr(50, g2, sc);
        CHECK(v >= prev);
        CHECK(v <= 50 / (sc.kappa * sc.b_row_norm_sq));
        prev = v;
    }
    prev = 0;
    for (double g1 = 0.1; g1 < 1e6; g1 *= 1.7) {
        double v = sndr(g1, 30, sc);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("scenario construction") {
    ScenarioSpec spec;
    spec.feeder.atmosphere.cn2_ground = 1e-12;
    auto sc = build_scenario(spec);
    CHECK(sc.turbulence.alpha == doctest::Approx(1.52).epsilon(0.03));
    CHECK(sc.turbulence.beta == doctest::Approx(3.29).epsilon(0.03));
    CHECK(sc.b_row_norm_sq == doctest::Approx(13.15197452774564).epsilon(1e-9));
    CHECK(sc.mu_r == doctest::Approx(1e5));
    CHECK(sc.C == doctest::Approx(sc.trace_term * sc.gbar1 + sc.kappa));
    CHECK(sc.P_s / 7 == doctest::Approx(sc.hpa.K * sc.hpa.K * spec.P_r + sc.hpa.sigma_nl_sq));
    CHECK(sc.kappa > 1.0);
    // σ1² is fixed by μ_r: the feeder SNR definition must reproduce it
    const double xi2 = sc.xi2();
    CHECK(spec.P_g * std::pow(xi2 / (xi2 + 1), 2) / (sc.sigma1_sq * sc.trace_term) == doctest::Approx(sc.mu_r));

    auto again = build_scenario(spec);
    CHECK(again.fingerprint() == sc.fingerprint());
    CHECK(again.B == sc.B);
    CHECK(again.gbar1 == sc.gbar1);

    auto moved = at_mu_r(sc, 70.0);
    CHECK(moved.fingerprint() == sc.fingerprint());
    CHECK(moved.mu_r == doctest::Approx(1e7));
    const double spread = 2 * sc.shadowing().b * sc.shadowing().m + sc.shadowing().Omega;
    CHECK(moved.gbar2 == doctest::Approx(std::pow(10.0, spec.gbar2_offset_db / 10) * 1e7 * spread));

    spec.hpa_family = hpa::Family::LINEAR;
    auto lin = build_scenario(spec);
    CHECK(lin.kappa == 1.0);
    CHECK(lin.fingerprint() != sc.fingerprint());

    spec.gbar2_mode = Gbar2Mode::FromPower;
    auto fp = build_scenario(spec);
    auto sh = spec.shadowing;
    CHECK(fp.gbar2 == doctest::Approx(fp.b_row_norm_sq * (2 * sh.b * sh.m + sh.Omega)));

    auto keys = sc.describe();
    bool seen_A0 = false, seen_users = false;
    for (auto& [k, v] : keys) {
        seen_A0 |= k == "pointing.A0";
        seen_users |= k == "layout.users" && v == "beam_centers";
    }
    CHECK(seen_A0);
    CHECK(seen_users);

    spec.feeder.r = 3;
    CHECK_THROWS_AS(build_scenario(spec), ConfigError);
}
