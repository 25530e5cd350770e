#include "subrad/threelevel.hpp"

#include <cmath>

namespace subrad {

namespace {

void check_config(const DriveConfig& cfg) {
    if (!(cfg.g_a >= 0.0) || !std::isfinite(cfg.g_a)) throw DomainError("g_a", "must be non-negative");
    if (!(cfg.g_b > 0.0) || !std::isfinite(cfg.g_b)) throw DomainError("g_b", "must be positive");
    if (!(cfg.omega() > 0.0)) throw DomainError("alpha", "drive has zero frequency");
}

void check_normalized(Complex c0, Complex c1) {
    const double n = std::norm(c0) + std::norm(c1);
    if (std::abs(n - 1.0) > 1e-12)
        throw PreconditionError("three-level evolution needs |c0|^2 + |c1|^2 = 1");
}

Complex phase_of(Complex alpha) {
    const double a = std::abs(alpha);
    return a > 0.0 ? alpha / a : Complex{1.0, 0.0};
}

}  // namespace

double DriveConfig::omega() const { return std::hypot(g_a, 0.5 * omega_r()); }

DriveConfig DriveConfig::from_rabi(double g_a, double omega_r) {
    if (!(g_a > 0.0)) throw DomainError("g_a", "must be positive");
    if (!(omega_r >= 0.0)) throw DomainError("omega_r", "must be non-negative");
    return DriveConfig{g_a, g_a, Complex{omega_r / (2.0 * g_a), 0.0}};
}

double ThreeLevelState::norm_squared() const {
    return std::norm(ground_photon) + std::norm(excited) + std::norm(leak);
}

ThreeLevelState evolve(Complex c0, Complex c1, const DriveConfig& cfg, double t) {
    check_config(cfg);
    check_normalized(c0, c1);
    const Complex i{0.0, 1.0};
    const double a = cfg.g_a;
    const double b = 0.5 * cfg.omega_r();
    const double w = cfg.omega();
    // cos - 1 via the half-angle form keeps small-t values accurate.
    const double s = std::sin(0.5 * w * t);
    const double cm1 = -2.0 * s * s;
    const double sn = std::sin(w * t);
    const double cs = std::cos(w * t);
    const Complex ph = phase_of(cfg.alpha);

    ThreeLevelState out;
    out.ground_photon = c0 * (1.0 + a * a / (w * w) * cm1) - i * c1 * (a / w) * sn;
    out.excited = -i * c0 * (a / w) * sn + c1 * cs;
    out.leak = ph * (c0 * (a * b / (w * w)) * cm1 - i * c1 * (b / w) * sn);
    return out;
}

PulseOutcome pulse_outcome(Complex c0, Complex c1, const DriveConfig& cfg) {
    check_config(cfg);
    const double t_p = kPi / cfg.omega();
    return {evolve(c0, c1, cfg, t_p), t_p};
}

double failure_probability(Complex c0, const DriveConfig& cfg) {
    check_config(cfg);
    if (std::abs(c0) > 1.0 + 1e-12) throw PreconditionError("failure_probability needs |c0| <= 1");
    const double a = cfg.g_a;
    const double r = cfg.omega_r();
    const double k = a * r / (a * a + 0.25 * r * r);
    return std::norm(c0) * k * k;
}

}  // namespace subrad
