#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "subrad/core.hpp"

namespace subrad {

struct EnsembleParams;

// Uniform time grid t_k = t0 + k dt, k = 0 .. n_samples-1.
struct TimeGrid {
    double t0 = 0.0;
    double dt = 0.0;
    std::size_t n_samples = 0;

    TimeGrid() = default;
    TimeGrid(double t0, double dt, std::size_t n_samples);

    // Grid from t_begin to t_end (inclusive); the span must be a whole number
    // of steps to within 1e-6 of a step.
    static TimeGrid spanning(double t_begin, double t_end, double dt);

    double time(std::size_t k) const { return t0 + static_cast<double>(k) * dt; }
    double t_end() const { return time(n_samples - 1); }
    double duration() const { return t_end() - t0; }

    // Index of the node at time t; throws PreconditionError if t is not on a node.
    std::size_t index_of(double t) const;

    bool operator==(const TimeGrid& o) const {
        return t0 == o.t0 && dt == o.dt && n_samples == o.n_samples;
    }
};

// Which one-sided limit to evaluate at a discontinuity.
enum class Side { left, right };

// Sampled dimensionless photon density F(t).
struct WavePacket {
    TimeGrid grid;
    std::vector<Complex> samples;

    WavePacket() = default;
    WavePacket(TimeGrid g, std::vector<Complex> s);
    static WavePacket zeros(const TimeGrid& g);
};

// Continuous-time description of an input packet. Jumps are allowed; the
// integrator asks for the right limit at the start of a step and the left
// limit at its end, so steps whose nodes sit on the jumps stay fourth order.
class PacketShape {
public:
    using Fn = std::function<Complex(double, Side)>;

    PacketShape();
    explicit PacketShape(Fn fn);

    Complex operator()(double t, Side side = Side::right) const { return fn_(t, side); }

    static PacketShape zero();
    // Constant amplitude on [start, start + duration].
    static PacketShape rectangular(double start, double duration, Complex amplitude);
    // sqrt(tau_E/tau_R) exp((t - t_end)/2 tau_R) on [t_start, t_end].
    static PacketShape rising_exponential(double t_start, double t_end, double tau_R,
                                          double tau_E);
    // Cubic (four-point Lagrange) interpolation of the samples; zero outside.
    static PacketShape from_samples(const WavePacket& packet);

    PacketShape operator*(Complex k) const;
    PacketShape operator+(const PacketShape& o) const;

private:
    Fn fn_;
};

// Node values of a shape: right limits, except the last node (left limit).
WavePacket sample(const PacketShape& shape, const TimeGrid& grid);

// Fourth-order composite quadrature of uniformly spaced values (Simpson, with a
// 3/8 panel when the interval count is odd).
double integrate_uniform(std::span<const double> values, double dt);
Complex integrate_uniform(std::span<const Complex> values, double dt);

// (1/tau_E) * integral |F|^2 dt: photon probability carried by the packet.
double packet_norm(const WavePacket& f, double tau_E);
// (1/tau_E) * integral conj(a) b dt on a shared grid.
Complex packet_inner(const WavePacket& a, const WavePacket& b, double tau_E);

}  // namespace subrad
