#pragma once

#include "subrad/core.hpp"

namespace subrad {

// Three-level atom |0>, |1>, |2>: the signal photon drives 0-1 with coupling
// g_a, a coherent field of amplitude alpha drives 1-2 with coupling g_b.
struct DriveConfig {
    double g_a = 0.0;   // s^-1
    double g_b = 0.0;   // s^-1
    Complex alpha{0.0, 0.0};

    double omega_r() const { return 2.0 * g_b * std::abs(alpha); }
    double omega() const;

    // Real alpha and g_b = g_a, chosen so that omega_r() == omega_r.
    static DriveConfig from_rabi(double g_a, double omega_r);
};

// Amplitudes on |0>|1_a, alpha>, |1>|0_a, alpha> and |2>|0_a, alpha'>.
struct ThreeLevelState {
    Complex ground_photon{0.0, 0.0};
    Complex excited{0.0, 0.0};
    Complex leak{0.0, 0.0};

    double norm_squared() const;
};

// Closed-form evolution from c0 |0>|1_a> + c1 |1>|0_a>. The coherent factor
// alpha g_b of the closed form is written as (Omega_R / 2) e^{i arg alpha}
// so that the tracked subspace evolves unitarily.
ThreeLevelState evolve(Complex c0, Complex c1, const DriveConfig& cfg, double t);

struct PulseOutcome {
    ThreeLevelState final_state;
    double t_p = 0.0;  // pi / Omega
};

// End of the 2 pi pulse on the 1-2 transition, t_p = pi / Omega:
// c0 (1 - 2 g_a^2 / Omega^2), -c1, -2 c0 g_a (Omega_R/2) e^{i arg alpha} / Omega^2.
PulseOutcome pulse_outcome(Complex c0, Complex c1, const DriveConfig& cfg);

// p = |c0|^2 (g_a Omega_R / (g_a^2 + Omega_R^2 / 4))^2.
double failure_probability(Complex c0, const DriveConfig& cfg);

}  // namespace subrad
