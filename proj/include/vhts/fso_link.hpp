#pragma once

#include <limits>
#include <numbers>

#include "vhts/random.hpp"

namespace vhts::fso {

struct AtmosphereConfig {
    double H = 35786e3;                 // satellite altitude, m
    double h0 = 0.0;                    // ground station altitude, m
    double zenith = std::numbers::pi / 6.0;
    double wavelength = 1550e-9;        // m
    double wind_rms = 21.0;             // m/s
    double cn2_ground = 1e-12;          // m^(-2/3)
    double W0 = 0.02;                   // transmitter beam radius, m
    double F0 = std::numeric_limits<double>::infinity();
    bool beam_wander = true;
};

struct TurbulenceParams {
    double alpha = 0.0;
    double beta = 0.0;
    double rytov_var = 0.0;
    double fried_r0 = 0.0;
    double sigma_pe = 0.0;
    double scintillation_index = 0.0;
};

struct PointingConfig {
    double xi = 1.1;
    double A0 = 1.0;
};

struct FeederConfig {
    int r = 2;  // 1 heterodyne, 2 IM/DD
    double Il = 1.0;
    double eta = 1.0;
    double sigma1_sq = 1.0;
    AtmosphereConfig atmosphere;
    PointingConfig pointing;
};

void validate(const AtmosphereConfig& cfg);

double hv_cn2(double h, const AtmosphereConfig& cfg);
double slant_length(const AtmosphereConfig& cfg);
double fried_r0(const AtmosphereConfig& cfg);
double rytov_variance(const AtmosphereConfig& cfg);
double beam_wander_sigma_pe(const AtmosphereConfig& cfg);
TurbulenceParams scintillation_params(const AtmosphereConfig& cfg);
// Builds the derived block from given shapes (used when α, β are specified directly).
TurbulenceParams from_shapes(double alpha, double beta);

double irradiance_pdf(double I, const TurbulenceParams& t, const PointingConfig& p, double Il);
double sample_irradiance(const TurbulenceParams& t, const PointingConfig& p, double Il, CounterRng& rng);

// E[I^r] for the Gamma-Gamma × pointing-error irradiance.
double irradiance_moment(double r, const TurbulenceParams& t, const PointingConfig& p, double Il);

double gamma1_pdf(double g1, const TurbulenceParams& t, const FeederConfig& f, double mu_r);
double mu_r_from_gbar1(double gbar1, const TurbulenceParams& t, const PointingConfig& p, int r);
double gbar1_from_mu_r(double mu_r, const TurbulenceParams& t, const PointingConfig& p, int r);

}  // namespace vhts::fso
