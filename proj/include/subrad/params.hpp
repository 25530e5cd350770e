#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subrad/core.hpp"

namespace subrad {

// Geometry and atomic constants of the excitation volume (SI units).
//
// The cross-section may be given directly or through a beam diameter
// (S = pi d^2 / 4). The atom number may be given directly or through a
// number density (N = density * S * L_z); if both are present they must agree
// to 0.1%.
struct EnsembleInput {
    double wavelength = 0.0;        // m
    double sample_length = 0.0;     // m, L_z
    std::optional<double> cross_section;  // m^2
    std::optional<double> beam_diameter;  // m
    double excited_lifetime = 0.0;  // s, T1
    std::optional<double> atom_count;
    std::optional<double> number_density;  // m^-3
    std::optional<double> inhomogeneous_linewidth;  // Hz
    // Width of the spectral pit the absorbing peak sits in (Hz). Only used by
    // validate_regime.
    std::optional<double> pit_width;
};

struct EnsembleParams {
    double wavelength = 0.0;
    double sample_length = 0.0;
    double cross_section = 0.0;
    double excited_lifetime = 0.0;
    double atom_count = 0.0;
    double number_density = 0.0;
    std::optional<double> inhomogeneous_linewidth;
    std::optional<double> pit_width;

    double mu = 0.0;       // 3 lambda^2 / (8 pi S)
    double tau_E = 0.0;    // L_z / c
    double tau_R = 0.0;    // T1 / (N mu)
    double tau_c = 0.0;    // sqrt(tau_R tau_E)
    double fresnel = 0.0;  // S / (L_z lambda)
    std::optional<double> t2_star;  // 1 / (pi Gamma_inh)

    // Single-atom emission rate into the collective mode, mu / T1.
    double mode_rate() const { return mu / excited_lifetime; }
};

// Throws DomainError naming the offending field.
EnsembleParams derive_params(const EnsembleInput& input);

struct RegimeWarning {
    std::string code;
    std::string message;
};

// Ordering tau_E << tau_c << tau_R and the other one-mode-model assumptions.
// Never throws; violations are reported as warnings.
std::vector<RegimeWarning> validate_regime(const EnsembleParams& p, double packet_duration,
                                           double pulse_duration);

// Number density that gives the requested superradiant lifetime for the
// geometry of `input` (its atom count and density are ignored).
double density_for_tau_r(const EnsembleInput& input, double target_tau_r);

// Smallest tau_R whose collective linewidth 1/(2 pi tau_R) still fits in a
// spectral pit of the given width.
double min_tau_r_for_pit(double pit_width);

}  // namespace subrad
