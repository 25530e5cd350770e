#pragma once

#include <string>
#include <vector>

#include "subrad/packet.hpp"
#include "subrad/params.hpp"

namespace subrad {

// Amplitude c(t) of the single collective (superradiant) atomic mode.
struct AmplitudeTrajectory {
    TimeGrid grid;
    std::vector<Complex> c;
};

// Default integration step tau_R / 200; steps coarser than tau_R / 20 are rejected.
double default_dt(const EnsembleParams& p);
double max_dt(const EnsembleParams& p);

// Integrates dc/dt = -(1/2 tau_R + loss/2) c - F_in(t) / sqrt(tau_R tau_E),
// c(t0) = c0, with classical fixed-step RK4. `loss_rate` is an extra
// population decay rate (s^-1) for residual non-collective emission.
AmplitudeTrajectory evolve_amplitude(const PacketShape& f_in, const TimeGrid& grid, Complex c0,
                                     const EnsembleParams& p, double loss_rate = 0.0);
AmplitudeTrajectory evolve_amplitude(const WavePacket& f_in, Complex c0, const EnsembleParams& p,
                                     double loss_rate = 0.0);

// F(t) = F_in(t) + sqrt(tau_E / tau_R) c(t), pointwise.
WavePacket output_field(const WavePacket& f_in, const AmplitudeTrajectory& traj,
                        const EnsembleParams& p);

// Single pass through the sample starting from the ground state.
WavePacket forward_scatter(const WavePacket& f_in, const EnsembleParams& p);
WavePacket forward_scatter(const PacketShape& f_in, const TimeGrid& grid, const EnsembleParams& p);

// Rectangular packet of duration tau_ph and amplitude sqrt(tau_E/tau_ph)
// starting at grid.t0, sample initially in the ground state:
//   c = 2 sqrt(tau_R/tau_ph) (exp(-t/2tau_R) - 1)            for t <= tau_ph
//   c = c(tau_ph) exp(-(t - tau_ph)/2tau_R)                  afterwards
// (t measured from grid.t0). Requires tau_ph >= 10 tau_E.
AmplitudeTrajectory closed_form_rectangular(double tau_ph, const EnsembleParams& p,
                                            const TimeGrid& grid);
PacketShape rectangular_packet(double tau_ph, const EnsembleParams& p, double start = 0.0);

// Response to the rising exponential when it has been on since t = -infinity:
// c = -exp(-|t - t_end| / 2tau_R).
AmplitudeTrajectory closed_form_rising_exponential(double t_end, const EnsembleParams& p,
                                                   const TimeGrid& grid);

struct CaptureOptimum {
    double tau_ph = 0.0;         // s
    double x = 0.0;              // tau_ph / tau_R
    double peak_amplitude = 0.0; // max |c|
};

// Peak captured amplitude of a rectangular packet as a function of
// x = tau_ph / tau_R: g(x) = 2 (1 - exp(-x/2)) / sqrt(x).
double capture_amplitude(double x);
CaptureOptimum optimize_capture(const EnsembleParams& p);

// Samples sqrt(tau_E/tau_R) exp((t - t_end)/2tau_R) for grid.t0 <= t <= t_end,
// zero after. Appends a warning if t_end - t0 < 10 tau_R.
WavePacket rising_exponential(double t_end, const EnsembleParams& p, const TimeGrid& grid,
                              std::vector<std::string>* warnings = nullptr);

}  // namespace subrad
