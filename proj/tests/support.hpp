#pragma once

// Shared fixtures and independent oracles for the test programs.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "subrad/dynamics.hpp"
#include "subrad/packet.hpp"
#include "subrad/params.hpp"

namespace testing_support {

using subrad::Complex;

// Pr:YSO sample: 606 nm, 5 mm, 100 um focal spot, T1 = 164 us.
inline subrad::EnsembleInput pr_yso_input(double density) {
    subrad::EnsembleInput in;
    in.wavelength = 606e-9;
    in.sample_length = 5e-3;
    in.beam_diameter = 100e-6;
    in.excited_lifetime = 164e-6;
    in.number_density = density;
    return in;
}

inline subrad::EnsembleParams pr_yso(double density = 2e20) {
    return subrad::derive_params(pr_yso_input(density));
}

inline double rel_dev(double value, double reference) {
    return std::abs(value - reference) / std::abs(reference);
}

// Root of (1 + x) exp(-x/2) = 1 on (0, inf) by plain bisection.
inline double capture_stationary_root() {
    auto f = [](double x) { return (1.0 + x) * std::exp(-0.5 * x) - 1.0; };
    double lo = 1.0, hi = 5.0;  // f(1) > 0, f(5) < 0
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// c(t) = c0 exp(-(t - t0)/2tau_R) - (tau_R tau_E)^{-1/2} int_{t0}^{t} F(s) exp(-(t - s)/2tau_R) ds
// by adaptive Gauss-Kronrod quadrature, split at the given breakpoints.
inline Complex convolution_amplitude(const subrad::PacketShape& f, double t0, double t, Complex c0,
                                     const subrad::EnsembleParams& p,
                                     const std::vector<double>& breaks = {}) {
    using boost::math::quadrature::gauss_kronrod;
    std::vector<double> pts{t0};
    for (double b : breaks)
        if (b > t0 && b < t) pts.push_back(b);
    pts.push_back(t);
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double a = pts[i], b = pts[i + 1];
        if (b <= a) continue;
        // Kronrod nodes are interior, so the one-sided limit never matters.
        auto term = [&](double s) { return f(s) * std::exp(-(t - s) / (2.0 * p.tau_R)); };
        auto re = [&](double s) { return term(s).real(); };
        auto im = [&](double s) { return term(s).imag(); };
        acc += Complex{gauss_kronrod<double, 31>::integrate(re, a, b, 12, 1e-13),
                       gauss_kronrod<double, 31>::integrate(im, a, b, 12, 1e-13)};
    }
    return c0 * std::exp(-(t - t0) / (2.0 * p.tau_R)) - acc / std::sqrt(p.tau_R * p.tau_E);
}

// Smooth random packet: sum of sinusoids under a sin^2 envelope on
// [t0, t0 + duration], scaled to the requested photon number.
struct RandomPacket {
    subrad::PacketShape shape;
    double t0 = 0.0;
    double duration = 0.0;
};

inline RandomPacket random_band_limited(std::mt19937_64& rng, const subrad::EnsembleParams& p,
                                        double t0, double duration, double photons) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> modes(1, 5);
    const int k = modes(rng);
    std::vector<Complex> amp(k);
    std::vector<double> freq(k);
    for (int i = 0; i < k; ++i) {
        amp[i] = {u(rng), u(rng)};
        freq[i] = (2.0 + 3.0 * u(rng)) / p.tau_R;  // |omega| up to 5 / tau_R
    }
    auto raw = [=](double t) {
        if (t < t0 || t > t0 + duration) return Complex{0.0, 0.0};
        const double s = std::sin(subrad::kPi * (t - t0) / duration);
        Complex v{0.0, 0.0};
        for (int i = 0; i < k; ++i) v += amp[i] * std::polar(1.0, freq[i] * (t - t0));
        return s * s * v;
    };
    // Normalize on a fine grid.
    const std::size_t n = 4001;
    double acc = 0.0;
    const double h = duration / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        acc += w * std::norm(raw(t0 + static_cast<double>(i) * h));
    }
    const double norm = acc * h / p.tau_E;
    const double scale = norm > 0.0 ? std::sqrt(photons / norm) : 0.0;
    RandomPacket out;
    out.t0 = t0;
    out.duration = duration;
    out.shape = subrad::PacketShape([=](double t, subrad::Side) { return scale * raw(t); });
    return out;
}

}  // namespace testing_support
