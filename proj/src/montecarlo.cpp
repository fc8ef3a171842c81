#include "vhts/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "vhts/errors.hpp"
#include "vhts/fso_link.hpp"
#include "vhts/rf_link.hpp"

namespace vhts::mc {
namespace {

struct Moments {
    double s1 = 0.0, s2 = 0.0;
};

Moments pairwise(const std::vector<Moments>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    Moments a = pairwise(v, lo, mid), b = pairwise(v, mid, hi);
    return {a.s1 + b.s1, a.s2 + b.s2};
}

template <class F>
void parallel_batches(long n_batches, unsigned workers, F&& body) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<long>(workers, n_batches));
    std::atomic<long> next{0};
    auto run = [&] {
        for (long b = next++; b < n_batches; b = next++) body(b);
    };
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
}

}  // namespace

double sample_sndr(const sys::Scenario& sc, std::uint64_t seed, std::uint64_t index) {
    CounterRng rng(seed, index);
    const auto& f = sc.spec.feeder;
    const double xi2 = sc.xi2();
    const double mean_I = f.pointing.A0 * f.Il * xi2 / (xi2 + 1);
    const double I = fso::sample_irradiance(sc.turbulence, f.pointing, f.Il, rng);
    const double g1 = sc.mu_r * std::pow(I / mean_I, f.r);
    const double d = rf::sample_shadowed_rician(sc.shadowing(), rng);
    const double g2 = rf::gamma2_from_amplitude(d, sc.shadowing(), sc.gbar2);
    return sys::sndr(g1, g2, sc);
}

std::vector<double> simulate_sndr(const SimPlan& plan) {
    if (plan.n < 1) throw DomainError("simulate_sndr: sample count must be at least 1");
    if (plan.batch < 1) throw DomainError("simulate_sndr: batch size must be at least 1");
    std::vector<double> out(static_cast<std::size_t>(plan.n));
    const long nb = (plan.n + plan.batch - 1) / plan.batch;
    parallel_batches(nb, plan.workers, [&](long b) {
        const long lo = b * plan.batch, hi = std::min(plan.n, lo + plan.batch);
        for (long i = lo; i < hi; ++i) out[i] = sample_sndr(plan.scenario, plan.seed, static_cast<std::uint64_t>(i));
    });
    return out;
}

analytics::Estimate sample_mean(const std::vector<double>& s, const std::function<double(double)>& f, long batch) {
    if (s.empty()) throw DomainError("sample_mean: no samples");
    const long n = static_cast<long>(s.size());
    const long nb = (n + batch - 1) / batch;
    std::vector<Moments> parts(static_cast<std::size_t>(nb));
    for (long b = 0; b < nb; ++b) {
        Moments m;
        for (long i = b * batch, hi = std::min(n, (b + 1) * batch); i < hi; ++i) {
            const double v = f(s[i]);
            m.s1 += v;
            m.s2 += v * v;
        }
        parts[b] = m;
    }
    const Moments t = pairwise(parts, 0, parts.size());
    const double mean = t.s1 / n;
    const double var = n > 1 ? std::max(0.0, (t.s2 - n * mean * mean) / (n - 1)) : 0.0;
    return {mean, 3.0 * std::sqrt(var / n)};
}

analytics::Estimate empirical_outage(const std::vector<double>& s, double gamma_th, long batch) {
    auto e = sample_mean(s, [gamma_th](double g) { return g < gamma_th ? 1.0 : 0.0; }, batch);
    e.error = 3.0 * std::sqrt(e.value * (1 - e.value) / static_cast<double>(s.size()));
    return e;
}

analytics::Estimate empirical_ber(const std::vector<double>& s, const analytics::ModulationSpec& mod, long batch) {
    if (mod.p != 0.5) throw DomainError("empirical_ber: only p = 1/2 modulations have the erfc form");
    return sample_mean(s, [&mod](double g) {
        double v = 0.0;
        for (double q : mod.q) v += std::erfc(std::sqrt(q * g));
        return 0.5 * mod.delta * v;
    }, batch);
}

analytics::Estimate empirical_capacity(const std::vector<double>& s, int r, long batch) {
    const double tau = analytics::capacity_tau(r);
    return sample_mean(s, [tau](double g) { return std::log2(1 + tau * g); }, batch);
}

analytics::Estimate empirical_moment(const std::vector<double>& s, int n, long batch) {
    if (n < 1) throw DomainError("empirical_moment: order must be positive");
    return sample_mean(s, [n](double g) { return std::pow(g, n); }, batch);
}

analytics::Estimate empirical_outage(const SimPlan& plan, double gamma_th) {
    return empirical_outage(simulate_sndr(plan), gamma_th, plan.batch);
}
analytics::Estimate empirical_ber(const SimPlan& plan, const analytics::ModulationSpec& mod) {
    return empirical_ber(simulate_sndr(plan), mod, plan.batch);
}
analytics::Estimate empirical_capacity(const SimPlan& plan) {
    return empirical_capacity(simulate_sndr(plan), plan.scenario.r(), plan.batch);
}
analytics::Estimate empirical_moment(const SimPlan& plan, int n) {
    return empirical_moment(simulate_sndr(plan), n, plan.batch);
}

}  // namespace vhts::mc
