#pragma once

#include <string>

namespace vhts::hpa {

enum class Family { TWTA, SSPA, LINEAR };

Family family_from_string(const std::string& s);
std::string to_string(Family f);

struct Bussgang {
    double K = 1.0;
    double sigma_nl_sq = 0.0;
};

struct HpaState {
    Family family = Family::LINEAR;
    double ibo_linear = 0.0;
    double A_sat = 0.0;
    double P_r = 1.0;
    double smoothness_v = 1.0;
    double phi0 = 0.0;
    double K = 1.0;
    double sigma_nl_sq = 0.0;
    double kappa = 1.0;
};

double saleh_amam(double x, double A_sat);
double saleh_ampm(double x, double A_sat, double phi0);
double rapp_amam(double x, double A_sat, double v);

// Closed-form Bussgang pairs for a circular Gaussian input of power P_r.
// saleh_pair is exact for saleh_amam, limiter_pair for rapp_amam with v = 1.
Bussgang saleh_pair(double ibo_linear, double P_r);
Bussgang limiter_pair(double ibo_linear, double P_r);

// Family assignment: the travelling-wave tube uses the Saleh pair and the
// solid-state amplifier the soft-limiter pair.
Bussgang bussgang_twta(double ibo_linear, double P_r);
Bussgang bussgang_sspa(double ibo_linear, double P_r);

double kappa(double K, double sigma_nl_sq, double G, double sigma1_sq);
double relay_gain(double P_r, double P_g, double E_Ir, double sigma1_sq);

// swap_labels reproduces the opposite pairing (limiter pair for TWTA).
HpaState make_hpa(Family family, double ibo_db, double P_r = 1.0, double G = 1.0, double sigma1_sq = 1.0,
                  bool swap_labels = false);

}  // namespace vhts::hpa
