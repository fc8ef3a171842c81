#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "vhts/analytics.hpp"
#include "vhts/system.hpp"

namespace vhts::mc {

struct SimPlan {
    sys::Scenario scenario;
    long n = 1000000;
    std::uint64_t seed = 1;
    long batch = 1 << 16;  // fixes the reduction tree; results never depend on `workers`
    unsigned workers = 0;  // 0 = hardware concurrency
};

// Sample i is a pure function of (scenario, seed, i).
double sample_sndr(const sys::Scenario& sc, std::uint64_t seed, std::uint64_t index);
std::vector<double> simulate_sndr(const SimPlan& plan);

// Results carry a 3σ half-width in `error`.
analytics::Estimate empirical_outage(const std::vector<double>& samples, double gamma_th, long batch = 1 << 16);
analytics::Estimate empirical_ber(const std::vector<double>& samples, const analytics::ModulationSpec& mod,
                                  long batch = 1 << 16);
analytics::Estimate empirical_capacity(const std::vector<double>& samples, int r, long batch = 1 << 16);
analytics::Estimate empirical_moment(const std::vector<double>& samples, int n, long batch = 1 << 16);

analytics::Estimate empirical_outage(const SimPlan& plan, double gamma_th);
analytics::Estimate empirical_ber(const SimPlan& plan, const analytics::ModulationSpec& mod);
analytics::Estimate empirical_capacity(const SimPlan& plan);
analytics::Estimate empirical_moment(const SimPlan& plan, int n);

// Mean of f over the samples with a 3σ half-width, summed per batch and then
// pairwise across batches.
analytics::Estimate sample_mean(const std::vector<double>& samples, const std::function<double(double)>& f,
                                long batch = 1 << 16);

}  // namespace vhts::mc
