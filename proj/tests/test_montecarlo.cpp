#include <cmath>

#include "doctest.h"
#include "vhts/analytics.hpp"
#include "vhts/errors.hpp"
#include "vhts/montecarlo.hpp"

using namespace vhts;

namespace {

sys::Scenario corner(int r, hpa::Family fam, double mu_db = 30.0) {
    sys::ScenarioSpec spec;
    spec.feeder.r = r;
    spec.hpa_family = fam;
    spec.mu_r_db = mu_db;
    return sys::build_scenario(spec);
}

}  // namespace

TEST_CASE("sample stream is independent of the worker count") {
    mc::SimPlan plan{corner(2, hpa::Family::TWTA), 50000, 77, 4096, 1};
    auto a = mc::simulate_sndr(plan);
    plan.workers = 7;
    auto b = mc::simulate_sndr(plan);
    CHECK(a == b);
    CHECK(mc::sample_sndr(plan.scenario, 77, 12345) == a[12345]);
    plan.seed = 78;
    CHECK(mc::simulate_sndr(plan) != a);

    plan.n = 0;
    CHECK_THROWS_AS(mc::simulate_sndr(plan), DomainError);
}

TEST_CASE("samples respect the feeder ceiling") {
    auto sc = corner(2, hpa::Family::TWTA);
    const auto& f = sc.spec.feeder;
    const double xi2 = sc.xi2(), mean_I = f.pointing.A0 * f.Il * xi2 / (xi2 + 1);
    for (std::uint64_t i = 0; i < 20000; ++i) {
        CounterRng rng(5, i);
        const double g1 = sc.mu_r * std::pow(fso::sample_irradiance(sc.turbulence, f.pointing, f.Il, rng) / mean_I, 2);
        const double g = mc::sample_sndr(sc, 5, i);
        CHECK(g >= 0);
        CHECK(g <= g1 / (sc.kappa * sc.b_row_norm_sq) * (1 + 1e-12));
    }
}

TEST_CASE("empirical metrics match the closed forms") {
    const long N = 200000;
    for (int r : {2, 1}) {
        mc::SimPlan plan{corner(r, hpa::Family::TWTA), N, 2024};
        auto s = mc::simulate_sndr(plan);
        auto m = mc::empirical_moment(s, 1);
        CHECK(std::abs(m.value - analytics::sndr_moments(1, plan.scenario).value) < m.error);
        for (double x : {0.5, 20.0, 400.0}) {
            auto e = mc::empirical_outage(s, x);
            CHECK(std::abs(e.value - analytics::sndr_cdf_exact(x, plan.scenario).value) < e.error);
        }
        auto mod = r == 2 ? analytics::ModulationSpec::ook() : analytics::ModulationSpec::bpsk();
        auto b = mc::empirical_ber(s, mod);
        CHECK(std::abs(b.value - analytics::ber_exact(mod, plan.scenario).value) < b.error);
        auto c = mc::empirical_capacity(s, r);
        const double exact = analytics::capacity_exact(plan.scenario).value;
        if (r == 1)
            CHECK(std::abs(c.value - exact) < c.error);
        else
            CHECK(exact <= c.value + c.error);
    }
}

TEST_CASE("degenerate and trivial cases") {
    std::vector<double> zero(1000, 0.0);
    CHECK(mc::empirical_ber(zero, analytics::ModulationSpec::ook()).value == 0.5);
    CHECK(mc::empirical_ber(zero, analytics::ModulationSpec::mqam(16)).value ==
          doctest::Approx(analytics::ModulationSpec::mqam(16).delta));
    CHECK(mc::empirical_capacity(zero, 2).value == 0.0);
    mc::SimPlan plan{corner(2, hpa::Family::LINEAR), 10000, 3};
    CHECK(mc::empirical_outage(plan, 0.0).value == 0.0);
}

TEST_CASE("confidence intervals shrink as N^-1/2") {
    mc::SimPlan plan{corner(1, hpa::Family::LINEAR), 1000000, 11};
    auto s = mc::simulate_sndr(plan);
    double prev = 0;
    for (long n : {10000L, 100000L, 1000000L}) {
        std::vector<double> head(s.begin(), s.begin() + n);
        double w = mc::empirical_capacity(head, 1).error;
        if (prev > 0) CHECK(prev / w == doctest::Approx(std::sqrt(10.0)).epsilon(0.2));
        prev = w;
    }
}
