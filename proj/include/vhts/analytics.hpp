#pragma once

#include <string>
#include <vector>

#include "vhts/system.hpp"

namespace vhts::analytics {

enum class Method { Exact, Asymptotic, Oracle, MonteCarlo };
std::string to_string(Method m);
Method method_from_string(const std::string& s);

// Coefficients of the high-μ_r expansion. Corrected is the default; the two
// printed forms are kept for comparison.
enum class AsymptoticForm { Corrected, Printed, PrintedHighGbar2 };

struct ModulationSpec {
    std::string name;
    int M = 2;
    double delta = 1.0;
    double p = 0.5;
    std::vector<double> q;
    int detection_r = 1;  // 2 for OOK (IM/DD), 1 for the coherent schemes

    int n() const { return static_cast<int>(q.size()); }
    static ModulationSpec ook();
    static ModulationSpec bpsk();
    static ModulationSpec mpsk(int M);
    static ModulationSpec mqam(int M);
    // "ook", "bpsk", "16psk", "16qam", ...
    static ModulationSpec parse(const std::string& s);
};

struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

struct MetricResult {
    std::string fingerprint;
    std::string metric;
    double sweep_value_db = 0.0;
    double value = 0.0;
    double error = 0.0;
    Method method = Method::Exact;
    long n_samples = 0;
};

struct Options {
    double rel_tol = 1e-8;
    AsymptoticForm form = AsymptoticForm::Corrected;
};

Estimate sndr_cdf_exact(double x, const sys::Scenario& sc, const Options& opt = {});
Estimate sndr_cdf_oracle(double x, const sys::Scenario& sc, double abs_tol = 1e-8);
Estimate sndr_pdf_exact(double x, const sys::Scenario& sc, const Options& opt = {});
Estimate sndr_moments(int n, const sys::Scenario& sc, const Options& opt = {});

Estimate outage_exact(double gamma_th, const sys::Scenario& sc, const Options& opt = {});
double outage_asymptotic(double gamma_th, const sys::Scenario& sc, const Options& opt = {});

Estimate ber_exact(const ModulationSpec& mod, const sys::Scenario& sc, const Options& opt = {});
double ber_asymptotic(const ModulationSpec& mod, const sys::Scenario& sc, const Options& opt = {});

double capacity_tau(int r);
Estimate capacity_exact(const sys::Scenario& sc, const Options& opt = {});

}  // namespace vhts::analytics
