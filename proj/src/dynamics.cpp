#include "subrad/dynamics.hpp"

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>

namespace subrad {

double default_dt(const EnsembleParams& p) { return p.tau_R / 200.0; }
double max_dt(const EnsembleParams& p) { return p.tau_R / 20.0; }

namespace {

void check_resolution(const TimeGrid& grid, const EnsembleParams& p) {
    if (grid.dt > max_dt(p) * (1.0 + 1e-12))
        throw ResolutionError("time step " + std::to_string(grid.dt) +
                              " s is coarser than tau_R/20 = " + std::to_string(max_dt(p)) + " s");
}

}  // namespace

AmplitudeTrajectory evolve_amplitude(const PacketShape& f_in, const TimeGrid& grid, Complex c0,
                                     const EnsembleParams& p, double loss_rate) {
    check_resolution(grid, p);
    if (std::abs(c0) > 1.0 + 1e-9) throw PreconditionError("evolve_amplitude: |c0| > 1");
    if (loss_rate < 0.0) throw PreconditionError("evolve_amplitude: negative loss rate");

    const double gamma = 0.5 / p.tau_R + 0.5 * loss_rate;
    const double kappa = 1.0 / std::sqrt(p.tau_R * p.tau_E);
    auto rhs = [&](Complex c, Complex f) { return -gamma * c - kappa * f; };

    AmplitudeTrajectory traj{grid, std::vector<Complex>(grid.n_samples)};
    Complex c = c0;
    traj.c[0] = c;
    const double h = grid.dt;
    for (std::size_t k = 0; k + 1 < grid.n_samples; ++k) {
        const double t = grid.time(k);
        const Complex f_start = f_in(t, Side::right);
        const Complex f_mid = f_in(t + 0.5 * h, Side::right);
        const Complex f_end = f_in(grid.time(k + 1), Side::left);
        const Complex k1 = rhs(c, f_start);
        const Complex k2 = rhs(c + 0.5 * h * k1, f_mid);
        const Complex k3 = rhs(c + 0.5 * h * k2, f_mid);
        const Complex k4 = rhs(c + h * k3, f_end);
        c += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        traj.c[k + 1] = c;
    }
    return traj;
}

AmplitudeTrajectory evolve_amplitude(const WavePacket& f_in, Complex c0, const EnsembleParams& p,
                                     double loss_rate) {
    return evolve_amplitude(PacketShape::from_samples(f_in), f_in.grid, c0, p, loss_rate);
}

WavePacket output_field(const WavePacket& f_in, const AmplitudeTrajectory& traj,
                        const EnsembleParams& p) {
    if (!(f_in.grid == traj.grid) || traj.c.size() != f_in.samples.size())
        throw PreconditionError("output_field: grid mismatch");
    const double r = std::sqrt(p.tau_E / p.tau_R);
    WavePacket out = f_in;
    for (std::size_t k = 0; k < out.samples.size(); ++k) out.samples[k] += r * traj.c[k];
    return out;
}

WavePacket forward_scatter(const WavePacket& f_in, const EnsembleParams& p) {
    return output_field(f_in, evolve_amplitude(f_in, Complex{}, p), p);
}

WavePacket forward_scatter(const PacketShape& f_in, const TimeGrid& grid, const EnsembleParams& p) {
    const WavePacket in = sample(f_in, grid);
    return output_field(in, evolve_amplitude(f_in, grid, Complex{}, p), p);
}

PacketShape rectangular_packet(double tau_ph, const EnsembleParams& p, double start) {
    return PacketShape::rectangular(start, tau_ph, std::sqrt(p.tau_E / tau_ph));
}

AmplitudeTrajectory closed_form_rectangular(double tau_ph, const EnsembleParams& p,
                                            const TimeGrid& grid) {
    if (!(tau_ph >= 10.0 * p.tau_E))
        throw RegimeError("rectangular packet shorter than 10 tau_E: fronts not resolved by the "
                          "one-mode model");
    const double tr = p.tau_R;
    const double a = 2.0 * std::sqrt(tr / tau_ph);
    const double c_end = a * (std::exp(-tau_ph / (2.0 * tr)) - 1.0);
    AmplitudeTrajectory traj{grid, std::vector<Complex>(grid.n_samples)};
    for (std::size_t k = 0; k < grid.n_samples; ++k) {
        const double t = grid.time(k) - grid.t0;
        traj.c[k] = t <= tau_ph ? a * (std::exp(-t / (2.0 * tr)) - 1.0)
                                : c_end * std::exp(-(t - tau_ph) / (2.0 * tr));
    }
    return traj;
}

AmplitudeTrajectory closed_form_rising_exponential(double t_end, const EnsembleParams& p,
                                                   const TimeGrid& grid) {
    AmplitudeTrajectory traj{grid, std::vector<Complex>(grid.n_samples)};
    for (std::size_t k = 0; k < grid.n_samples; ++k) {
        const double t = grid.time(k);
        traj.c[k] = -std::exp(-std::abs(t - t_end) / (2.0 * p.tau_R));
    }
    return traj;
}

double capture_amplitude(double x) {
    if (!(x > 0.0)) return 0.0;
    return 2.0 * (-std::expm1(-x / 2.0)) / std::sqrt(x);
}

CaptureOptimum optimize_capture(const EnsembleParams& p) {
    // Unimodal on (0, inf); the maximum lies well inside [0.1, 20].
    const auto [x, neg_g] = boost::math::tools::brent_find_minima(
        [](double x) { return -capture_amplitude(x); }, 0.1, 20.0,
        std::numeric_limits<double>::digits / 2);
    return {x * p.tau_R, x, -neg_g};
}

WavePacket rising_exponential(double t_end, const EnsembleParams& p, const TimeGrid& grid,
                              std::vector<std::string>* warnings) {
    if (warnings && t_end - grid.t0 < 10.0 * p.tau_R)
        warnings->push_back("rising exponential starts less than 10 tau_R before its end; "
                            "capture will be incomplete");
    return sample(PacketShape::rising_exponential(grid.t0, t_end, p.tau_R, p.tau_E), grid);
}

}  // namespace subrad
