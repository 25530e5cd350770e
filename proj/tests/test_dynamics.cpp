#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "subrad/dynamics.hpp"
#include "support.hpp"

using namespace subrad;
using testing_support::convolution_amplitude;
using testing_support::pr_yso;

namespace {

double max_dev(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// Finite-start rising exponential response: -(e^{(t-te)/2tR} - e^{(2 t0 - t - te)/2tR}) before te.
Complex rising_exact(double t, double t0, double te, double tr) {
    const double cte = -(1.0 - std::exp((t0 - te) / tr));
    if (t <= te) return -(std::exp((t - te) / (2.0 * tr)) - std::exp((2.0 * t0 - t - te) / (2.0 * tr)));
    return cte * std::exp(-(t - te) / (2.0 * tr));
}

}  // namespace

TEST_CASE("free superradiant decay") {
    const auto p = pr_yso();
    const TimeGrid g(0.0, default_dt(p), 2001);
    const auto traj = evolve_amplitude(PacketShape::zero(), g, Complex{1.0, 0.0}, p);
    for (std::size_t k = 0; k < g.n_samples; k += 97)
        CHECK(std::abs(traj.c[k] - std::exp(-g.time(k) / (2.0 * p.tau_R))) < 1e-10);
    const auto F = output_field(WavePacket::zeros(g), traj, p);
    for (std::size_t k = 0; k < g.n_samples; k += 97)
        CHECK(std::abs(F.samples[k] - std::sqrt(p.tau_E / p.tau_R) * std::exp(-g.time(k) / (2.0 * p.tau_R))) <
              1e-12);
}

TEST_CASE("rectangular packet matches the closed form") {
    const auto p = pr_yso();
    for (double x : {1.0, 2.5, 5.0}) {
        const double tau_ph = x * p.tau_R;
        const TimeGrid g(0.0, default_dt(p), static_cast<std::size_t>(200 * (x + 5.0)) + 1);
        const auto num = evolve_amplitude(rectangular_packet(tau_ph, p), g, Complex{}, p);
        const auto cf = closed_form_rectangular(tau_ph, p, g);
        CHECK(max_dev(num.c, cf.c) < 1e-6);
    }
}

TEST_CASE("rectangular closed form: published capture figures") {
    const auto p = pr_yso();
    const double tau_ph = 2.5 * p.tau_R;
    const TimeGrid g(0.0, default_dt(p), 1001);
    const auto cf = closed_form_rectangular(tau_ph, p, g);
    CHECK(std::abs(cf.c[0]) == 0.0);
    double peak = 0.0;
    for (const auto& c : cf.c) peak = std::max(peak, std::abs(c));
    CHECK(std::abs(peak - 0.9) / 0.9 < 0.02);
    CHECK(std::abs(std::norm(cf.c[500]) - 0.81) / 0.81 < 0.02);
    CHECK_THROWS_AS(closed_form_rectangular(9.0 * p.tau_E, p, g), RegimeError);
}

TEST_CASE("rising exponential is absorbed completely") {
    const auto p = pr_yso();
    const double te = 20.0 * p.tau_R;
    const TimeGrid g(0.0, default_dt(p), 200 * 30 + 1);
    const auto shape = PacketShape::rising_exponential(0.0, te, p.tau_R, p.tau_E);
    const auto traj = evolve_amplitude(shape, g, Complex{}, p);
    const std::size_t k_end = g.index_of(te);
    CHECK(std::abs(std::norm(traj.c[k_end]) - 1.0) < 1e-4);
    double dev = 0.0, dev_inf = 0.0;
    const auto eq = closed_form_rising_exponential(te, p, g);
    for (std::size_t k = 0; k < g.n_samples; ++k) {
        dev = std::max(dev, std::abs(traj.c[k] - rising_exact(g.time(k), 0.0, te, p.tau_R)));
        // The finite start differs from the eternal one by exp(-(t + te)/2tau_R).
        if (g.time(k) >= 15.0 * p.tau_R) dev_inf = std::max(dev_inf, std::abs(traj.c[k] - eq.c[k]));
    }
    CHECK(dev < 1e-6);
    CHECK(dev_inf < 1e-6);
}

TEST_CASE("rising exponential packet") {
    const auto p = pr_yso();
    for (double d : {1.0, 3.0, 10.0, 25.0}) {
        const TimeGrid g(0.0, default_dt(p), static_cast<std::size_t>(200 * d) + 1);
        std::vector<std::string> warnings;
        const auto f = rising_exponential(d * p.tau_R, p, g, &warnings);
        CHECK(packet_norm(f, p.tau_E) == doctest::Approx(-std::expm1(-d)).epsilon(1e-9));
        CHECK(warnings.empty() == (d >= 10.0));
    }
    // Reversed in time it is the free emission after a read pulse.
    const double te = 12.0 * p.tau_R;
    const TimeGrid g(0.0, default_dt(p), 200 * 12 + 1);
    const auto f = rising_exponential(te, p, g);
    const auto emitted = output_field(WavePacket::zeros(g), evolve_amplitude(PacketShape::zero(), g, 1.0, p), p);
    double dev = 0.0;
    for (std::size_t k = 0; k < g.n_samples; ++k)
        dev = std::max(dev, std::abs(f.samples[g.n_samples - 1 - k] - emitted.samples[k]));
    CHECK(dev < 1e-10 * std::sqrt(p.tau_E / p.tau_R));
}

TEST_CASE("output field identities") {
    const auto p = pr_yso();
    const TimeGrid g(0.0, default_dt(p), 8001);
    const auto in = sample(PacketShape::rectangular(0.0, 1.0, Complex{0.01, 0.02}), g);
    SUBCASE("no atomic amplitude leaves the field unchanged") {
        AmplitudeTrajectory zero{g, std::vector<Complex>(g.n_samples)};
        const auto out = output_field(in, zero, p);
        CHECK(out.samples == in.samples);
    }
    SUBCASE("constant drive reaches F_out = -F_in") {
        const auto traj = evolve_amplitude(in, Complex{}, p);
        const Complex fixed = -2.0 * std::sqrt(p.tau_R / p.tau_E) * in.samples[0];
        CHECK(std::abs(traj.c.back() - fixed) < 1e-8 * std::abs(fixed));
        const auto out = output_field(in, traj, p);
        CHECK(std::abs(out.samples.back() + in.samples.back()) < 1e-8 * std::abs(in.samples[0]));
    }
    SUBCASE("grid mismatch is rejected") {
        AmplitudeTrajectory other{TimeGrid(0.0, g.dt, 10), std::vector<Complex>(10)};
        CHECK_THROWS_AS(output_field(in, other, p), PreconditionError);
    }
}

TEST_CASE("forward scattering") {
    const auto p = pr_yso();
    SUBCASE("zero input stays zero") {
        const TimeGrid g(0.0, default_dt(p), 101);
        const auto out = forward_scatter(WavePacket::zeros(g), p);
        for (const auto& v : out.samples) CHECK(v == Complex{});
    }
    SUBCASE("agrees with direct convolution quadrature") {
        std::mt19937_64 rng(7);
        const auto pk = testing_support::random_band_limited(rng, p, 0.0, 6.0 * p.tau_R, 0.7);
        const TimeGrid g(0.0, default_dt(p), 200 * 10 + 1);
        const auto out = forward_scatter(pk.shape, g, p);
        for (std::size_t k = 0; k < g.n_samples; k += 111) {
            const Complex c = convolution_amplitude(pk.shape, 0.0, g.time(k), Complex{}, p);
            const Complex direct = pk.shape(g.time(k)) + std::sqrt(p.tau_E / p.tau_R) * c;
            CHECK(std::abs(out.samples[k] - direct) < 1e-6 * std::sqrt(p.tau_E / p.tau_R));
        }
    }
    SUBCASE("narrow pulse leaves an exponential tail") {
        const double w = p.tau_E;
        const double A = 1.0;
        const TimeGrid g(0.0, p.tau_E / 4.0, 4 * 2000 + 1);  // w spans four cells
        const auto out = forward_scatter(PacketShape::rectangular(0.0, w, A), g, p);
        for (std::size_t k = 8; k < g.n_samples; k += 503) {
            const double t = g.time(k);
            const double tail = -2.0 * A * std::exp(-t / (2.0 * p.tau_R)) * std::expm1(w / (2.0 * p.tau_R));
            CHECK(std::abs(out.samples[k] - tail) < 1e-6 * std::abs(tail));
            // ~ -(A w / tau_R) e^{-t/2 tau_R}
            CHECK(std::abs(out.samples[k].real() / (-A * w / p.tau_R * std::exp(-t / (2.0 * p.tau_R))) - 1.0) < 1e-2);
        }
    }
}

TEST_CASE("property: integrated law equals the convolution solution") {
    const auto p = pr_yso(2e19);
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const double d = (1.0 + 6.0 * u(rng)) * p.tau_R;
        const auto pk = testing_support::random_band_limited(rng, p, 0.0, d, u(rng));
        const Complex c0 = std::polar(0.5 * u(rng), 6.28 * u(rng));
        const TimeGrid g(0.0, default_dt(p), static_cast<std::size_t>((d + 2.0 * p.tau_R) / default_dt(p)));
        const auto traj = evolve_amplitude(pk.shape, g, c0, p);
        for (std::size_t k = 0; k < g.n_samples; k += 173)
            CHECK(std::abs(traj.c[k] - convolution_amplitude(pk.shape, 0.0, g.time(k), c0, p)) < 1e-6);
    }
}

TEST_CASE("property: flux conservation, linearity and phase covariance") {
    const auto p = pr_yso();
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const TimeGrid g(0.0, default_dt(p), 200 * 12 + 1);
    for (int trial = 0; trial < 30; ++trial) {
        const auto a = testing_support::random_band_limited(rng, p, 0.0, 8.0 * p.tau_R, u(rng));
        const auto b = testing_support::random_band_limited(rng, p, p.tau_R, 6.0 * p.tau_R, u(rng));
        const Complex ca = std::polar(0.3 * u(rng), 6.28 * u(rng));
        const Complex cb = std::polar(0.3 * u(rng), 6.28 * u(rng));

        const auto ta = evolve_amplitude(a.shape, g, ca, p);
        const auto fin = sample(a.shape, g);
        const auto fout = output_field(fin, ta, p);
        const double lhs = std::norm(ta.c.back()) - std::norm(ca);
        const double rhs = packet_norm(fin, p.tau_E) - packet_norm(fout, p.tau_E);
        CHECK(std::abs(lhs - rhs) < 1e-5);

        const Complex x{0.3, -1.1}, y{-0.7, 0.4};
        const auto tb = evolve_amplitude(b.shape, g, cb, p);
        const auto tab = evolve_amplitude(a.shape * x + b.shape * y, g, x * ca + y * cb, p);
        double lin = 0.0;
        for (std::size_t k = 0; k < g.n_samples; ++k)
            lin = std::max(lin, std::abs(tab.c[k] - (x * ta.c[k] + y * tb.c[k])));
        CHECK(lin < 1e-12);

        const Complex ph = std::polar(1.0, 6.28 * u(rng));
        const auto tp = evolve_amplitude(a.shape * ph, g, ph * ca, p);
        const auto fp = output_field(sample(a.shape * ph, g), tp, p);
        double cov = 0.0;
        for (std::size_t k = 0; k < g.n_samples; ++k) {
            cov = std::max(cov, std::abs(tp.c[k] - ph * ta.c[k]));
            cov = std::max(cov, std::abs(fp.samples[k] - ph * fout.samples[k]) / std::sqrt(p.tau_E / p.tau_R));
        }
        CHECK(cov < 1e-12);
    }
}

TEST_CASE("fourth-order convergence against closed forms") {
    const auto p = pr_yso();
    auto rect_error = [&](double steps_per_tau) {
        const double dt = p.tau_R / steps_per_tau;
        const TimeGrid g(0.0, dt, static_cast<std::size_t>(6.0 * steps_per_tau) + 1);
        const auto num = evolve_amplitude(rectangular_packet(2.5 * p.tau_R, p), g, Complex{}, p);
        return max_dev(num.c, closed_form_rectangular(2.5 * p.tau_R, p, g).c);
    };
    auto rise_error = [&](double steps_per_tau) {
        const double dt = p.tau_R / steps_per_tau;
        const double te = 40.0 * p.tau_R;
        const TimeGrid g(0.0, dt, static_cast<std::size_t>(45.0 * steps_per_tau) + 1);
        const auto num = evolve_amplitude(PacketShape::rising_exponential(0.0, te, p.tau_R, p.tau_E), g, Complex{}, p);
        const auto cf = closed_form_rising_exponential(te, p, g);
        // Skip the finite-start transient, exp(-30) by t = 20 tau_R.
        double d = 0.0;
        for (std::size_t k = 0; k < g.n_samples; ++k)
            if (g.time(k) >= 20.0 * p.tau_R) d = std::max(d, std::abs(num.c[k] - cf.c[k]));
        return d;
    };
    CHECK(rect_error(20) / rect_error(40) >= 3.5);
    CHECK(rise_error(20) / rise_error(40) >= 3.5);
    CHECK(rect_error(200) < 1e-6);
    CHECK(rise_error(200) < 1e-6);
}

TEST_CASE("capture optimum") {
    const auto p = pr_yso();
    const auto opt = optimize_capture(p);
    const double root = testing_support::capture_stationary_root();
    CHECK(std::abs(opt.x - root) < 1e-6);
    CHECK(root == doctest::Approx(2.5129).epsilon(1e-4));
    CHECK(opt.peak_amplitude == doctest::Approx(2.0 * (1.0 - std::exp(-root / 2.0)) / std::sqrt(root)).epsilon(1e-12));
    CHECK(opt.peak_amplitude == doctest::Approx(0.9025).epsilon(2e-4));
    CHECK(opt.tau_ph == doctest::Approx(opt.x * p.tau_R));
    CHECK(std::abs(opt.x - 2.5) / 2.5 < 0.02);
    CHECK(std::abs(opt.peak_amplitude - 0.9) / 0.9 < 0.02);
}

TEST_CASE("resolution and amplitude preconditions") {
    const auto p = pr_yso();
    CHECK(default_dt(p) == doctest::Approx(p.tau_R / 200.0));
    CHECK_THROWS_AS(evolve_amplitude(PacketShape::zero(), TimeGrid(0.0, p.tau_R / 19.0, 10), 0.0, p),
                    ResolutionError);
    CHECK_NOTHROW(evolve_amplitude(PacketShape::zero(), TimeGrid(0.0, p.tau_R / 20.0, 10), 0.0, p));
    CHECK_THROWS_AS(evolve_amplitude(PacketShape::zero(), TimeGrid(0.0, default_dt(p), 10), 1.1, p),
                    PreconditionError);
}
