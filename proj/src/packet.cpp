#include "subrad/packet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace subrad {

TimeGrid::TimeGrid(double t0_, double dt_, std::size_t n)
    : t0(t0_), dt(dt_), n_samples(n) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("TimeGrid: dt must be positive");
    if (n < 2) throw PreconditionError("TimeGrid: need at least two samples");
}

TimeGrid TimeGrid::spanning(double t_begin, double t_end, double dt) {
    if (!(dt > 0.0)) throw PreconditionError("TimeGrid: dt must be positive");
    const double steps = (t_end - t_begin) / dt;
    const double rounded = std::round(steps);
    if (rounded < 1.0 || std::abs(steps - rounded) > 1e-6)
        throw PreconditionError("TimeGrid: span is not a whole number of steps");
    return TimeGrid(t_begin, dt, static_cast<std::size_t>(rounded) + 1);
}

std::size_t TimeGrid::index_of(double t) const {
    const double k = (t - t0) / dt;
    const double rounded = std::round(k);
    if (std::abs(k - rounded) > 1e-6 || rounded < 0.0 ||
        rounded > static_cast<double>(n_samples - 1))
        throw PreconditionError("time is not on a grid node");
    return static_cast<std::size_t>(rounded);
}

WavePacket::WavePacket(TimeGrid g, std::vector<Complex> s) : grid(g), samples(std::move(s)) {
    if (samples.size() != grid.n_samples)
        throw PreconditionError("WavePacket: sample count does not match grid");
}

WavePacket WavePacket::zeros(const TimeGrid& g) {
    return WavePacket(g, std::vector<Complex>(g.n_samples));
}

PacketShape::PacketShape() : fn_([](double, Side) { return Complex{}; }) {}

PacketShape::PacketShape(Fn fn) : fn_(std::move(fn)) {}

PacketShape PacketShape::zero() { return PacketShape(); }

namespace {

// Support indicator on [a, b] with one-sided limits at the endpoints.
bool inside(double t, double a, double b, Side side) {
    const double tol = 1e-9 * std::max(b - a, std::abs(b) * 1e-6);
    if (std::abs(t - a) <= tol) return side == Side::right;
    if (std::abs(t - b) <= tol) return side == Side::left;
    return t > a && t < b;
}

}  // namespace

PacketShape PacketShape::rectangular(double start, double duration, Complex amplitude) {
    if (!(duration > 0.0)) throw PreconditionError("rectangular packet: duration must be positive");
    const double end = start + duration;
    return PacketShape([=](double t, Side side) {
        return inside(t, start, end, side) ? amplitude : Complex{};
    });
}

PacketShape PacketShape::rising_exponential(double t_start, double t_end, double tau_R,
                                            double tau_E) {
    if (!(t_end > t_start)) throw PreconditionError("rising exponential: t_end must exceed t_start");
    const double amp = std::sqrt(tau_E / tau_R);
    return PacketShape([=](double t, Side side) {
        if (!inside(t, t_start, t_end, side)) return Complex{};
        return Complex{amp * std::exp((t - t_end) / (2.0 * tau_R))};
    });
}

PacketShape PacketShape::from_samples(const WavePacket& packet) {
    auto data = std::make_shared<const WavePacket>(packet);
    return PacketShape([data](double t, Side) -> Complex {
        const auto& g = data->grid;
        const auto& s = data->samples;
        const double x = (t - g.t0) / g.dt;
        const double last = static_cast<double>(g.n_samples - 1);
        if (x < -1e-9 || x > last + 1e-9) return {};
        const double xr = std::round(x);
        if (std::abs(x - xr) < 1e-9) return s[static_cast<std::size_t>(xr)];
        if (g.n_samples < 4) {
            const auto k = static_cast<std::size_t>(std::floor(x));
            const double w = x - static_cast<double>(k);
            return s[k] * (1.0 - w) + s[k + 1] * w;
        }
        // Four-point stencil k-1..k+2, shifted inward at the ends.
        auto k = static_cast<std::ptrdiff_t>(std::floor(x)) - 1;
        k = std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(g.n_samples) - 4);
        Complex acc{};
        for (int i = 0; i < 4; ++i) {
            double w = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != i) w *= (x - static_cast<double>(k + j)) / static_cast<double>(i - j);
            acc += w * s[static_cast<std::size_t>(k + i)];
        }
        return acc;
    });
}

PacketShape PacketShape::operator*(Complex k) const {
    auto f = fn_;
    return PacketShape([f, k](double t, Side side) { return k * f(t, side); });
}

PacketShape PacketShape::operator+(const PacketShape& o) const {
    auto f = fn_;
    auto g = o.fn_;
    return PacketShape([f, g](double t, Side side) { return f(t, side) + g(t, side); });
}

WavePacket sample(const PacketShape& shape, const TimeGrid& grid) {
    std::vector<Complex> s(grid.n_samples);
    for (std::size_t k = 0; k < grid.n_samples; ++k)
        s[k] = shape(grid.time(k), k + 1 == grid.n_samples ? Side::left : Side::right);
    return WavePacket(grid, std::move(s));
}

namespace {

template <class T>
T integrate_impl(std::span<const T> v, double dt) {
    const std::size_t n = v.size();
    if (n < 2) return T{};
    const std::size_t intervals = n - 1;
    if (intervals == 1) return 0.5 * dt * (v[0] + v[1]);
    T acc{};
    std::size_t simpson_end = intervals;
    if (intervals % 2 == 1) {
        // Simpson 3/8 on the last three intervals.
        simpson_end = intervals - 3;
        const std::size_t a = simpson_end;
        acc += 3.0 * dt / 8.0 * (v[a] + 3.0 * v[a + 1] + 3.0 * v[a + 2] + v[a + 3]);
    }
    if (simpson_end >= 2) {
        T s = v[0] + v[simpson_end];
        for (std::size_t k = 1; k < simpson_end; ++k) s += (k % 2 == 1 ? 4.0 : 2.0) * v[k];
        acc += dt / 3.0 * s;
    }
    return acc;
}

}  // namespace

double integrate_uniform(std::span<const double> values, double dt) {
    return integrate_impl(values, dt);
}

Complex integrate_uniform(std::span<const Complex> values, double dt) {
    return integrate_impl(values, dt);
}

double packet_norm(const WavePacket& f, double tau_E) {
    std::vector<double> w(f.samples.size());
    std::transform(f.samples.begin(), f.samples.end(), w.begin(),
                   [](Complex z) { return std::norm(z); });
    return integrate_uniform(std::span<const double>(w), f.grid.dt) / tau_E;
}

Complex packet_inner(const WavePacket& a, const WavePacket& b, double tau_E) {
    if (!(a.grid == b.grid)) throw PreconditionError("packet_inner: grid mismatch");
    std::vector<Complex> w(a.samples.size());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] = std::conj(a.samples[k]) * b.samples[k];
    return integrate_uniform(std::span<const Complex>(w), a.grid.dt) / tau_E;
}

}  // namespace subrad
