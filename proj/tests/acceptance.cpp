// Acceptance checks. One PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "subrad/dynamics.hpp"
#include "subrad/schedule.hpp"
#include "subrad/states.hpp"
#include "subrad/storage.hpp"
#include "subrad/threelevel.hpp"
#include "support.hpp"

using namespace subrad;
using testing_support::pr_yso;
using testing_support::rel_dev;

namespace {

// Pinned tolerances.
constexpr double kMaterialsRel = 0.05;
constexpr double kCaptureXLo = 2.45, kCaptureXHi = 2.58;
constexpr double kCapturePeakLo = 0.900, kCapturePeakHi = 0.905;
constexpr double kCaptureRootAbs = 1e-6;
constexpr double kWriteAbs = 0.01, kReadAbs = 1e-3, kTotalAbs = 0.01;
constexpr double kRisingStored = 0.9999, kRisingRecall = 0.9995, kRisingOverlap = 0.999;
constexpr double kRateRel = 1e-10, kRateZeroAbs = 1e-12;
constexpr double kFluxAbs = 1e-5, kLedgerAbs = 1e-12, kLinearRel = 1e-8;
constexpr double kLeakAbs = 1e-12, kUnitarityAbs = 1e-12, kP20Bound = 0.04;
constexpr double kConvergenceRatio = 3.5, kDefaultDtAbs = 1e-6;
constexpr double kQubitAbs = 1e-4;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    Outcome() { detail.precision(9); }
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
};

// Step near tau_R / 200 that divides `span` exactly.
double snapped_dt(double span, const EnsembleParams& p) {
    return span / std::round(span / default_dt(p));
}

Outcome criterion1() {
    Outcome o;
    const std::pair<double, double> table[] = {{2e20, 3.7e-9}, {2e19, 37e-9}, {4e17, 1.9e-6}};
    for (const auto& [density, tau] : table) {
        const auto p = pr_yso(density);
        o.detail << " tau_R(" << density << ")=" << p.tau_R;
        o.require(rel_dev(p.tau_R, tau) <= kMaterialsRel, "tau_R at density " + std::to_string(density));
    }
    const auto p = pr_yso();
    o.detail << " tau_E=" << p.tau_E << " mu=" << p.mu;
    o.require(rel_dev(p.tau_E, 17e-12) <= kMaterialsRel, "tau_E");
    o.detail << " mu_rel_dev=" << rel_dev(p.mu, 0.5e-5);
    o.require(rel_dev(p.mu, 0.5e-5) <= kMaterialsRel, "mu vs 0.5e-5");
    return o;
}

Outcome criterion2() {
    Outcome o;
    const auto p = pr_yso();
    const auto opt = optimize_capture(p);
    const double root = testing_support::capture_stationary_root();
    o.detail << " x=" << opt.x << " peak=" << opt.peak_amplitude << " bisection=" << root;
    o.require(opt.x >= kCaptureXLo && opt.x <= kCaptureXHi, "x range");
    o.require(opt.peak_amplitude >= kCapturePeakLo && opt.peak_amplitude <= kCapturePeakHi, "peak range");
    o.require(std::abs(opt.x - root) <= kCaptureRootAbs, "bisection agreement");
    return o;
}

StorageReport long_packet_store(const EnsembleParams& p, double x, std::size_t bins, bool reversed,
                                const StorageOptions& opts = {}) {
    const double T = x * p.tau_R;
    const double dt = snapped_dt(T, p);
    const TimeGrid grid(0.0, dt, static_cast<std::size_t>(std::llround(bins * T / dt)) + 1);
    const double dur = static_cast<double>(bins) * T;
    const auto f = PacketShape::rectangular(0.0, dur, std::sqrt(p.tau_E / dur));
    const auto w = plan_write(4, bins, T);
    return end_to_end(f, grid, w, plan_read(4, bins, T, reversed, w.end()), p, opts);
}

Outcome criterion3() {
    Outcome o;
    const auto p = pr_yso();
    const auto rep = long_packet_store(p, 2.5, 3, false);
    for (const auto& b : rep.write_bins) {
        o.detail << " write" << b.bin + 1 << "=" << b.efficiency;
        o.require(std::abs(b.efficiency - 0.81) <= kWriteAbs, "per-bin write");
    }
    for (const auto& b : rep.read_bins) {
        o.detail << " read" << b.bin + 1 << "=" << b.efficiency;
        o.require(std::abs(b.efficiency - (1.0 - std::exp(-2.5))) <= kReadAbs, "per-bin read");
    }
    o.detail << " total=" << rep.total_efficiency;
    o.require(std::abs(rep.total_efficiency - 0.75) <= kTotalAbs, "end-to-end");
    return o;
}

Outcome criterion4() {
    Outcome o;
    const auto p = pr_yso();
    const double T = 20.0 * p.tau_R;
    const double dt = snapped_dt(T, p);
    const std::size_t n = static_cast<std::size_t>(std::llround(T / dt));
    const TimeGrid grid(0.0, dt, n + 1);
    const auto f = PacketShape::rising_exponential(0.0, T, p.tau_R, p.tau_E);
    const auto w = plan_write(4, 1, T);
    const auto r = plan_read(4, 1, T, false, T);
    // Read window as long as the input so the reversed input lines up sample by sample.
    const auto rep = end_to_end(f, grid, w, r, p);
    const double stored = std::norm(rep.write_bins[0].stored);
    o.detail << " stored=" << stored << " recall=" << rep.total_efficiency;
    o.require(stored >= kRisingStored, "stored |c|^2");
    o.require(rep.total_efficiency >= kRisingRecall, "full recall");
    // Independent shape check: overlap of the output with the mirrored input.
    const WavePacket in = sample(f, grid);
    const auto& out = rep.output.samples;
    if (out.size() != in.samples.size()) {
        o.require(false, "output grid length");
        return o;
    }
    std::vector<Complex> mirrored(in.samples.rbegin(), in.samples.rend());
    Complex ov{0.0, 0.0};
    double na = 0.0, nb = 0.0;
    std::vector<Complex> prod(out.size());
    std::vector<double> a2(out.size()), b2(out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        prod[k] = std::conj(mirrored[k]) * out[k];
        a2[k] = std::norm(mirrored[k]);
        b2[k] = std::norm(out[k]);
    }
    ov = integrate_uniform(prod, dt);
    na = integrate_uniform(a2, dt);
    nb = integrate_uniform(b2, dt);
    const double overlap = std::norm(ov) / (na * nb);
    o.detail << " reversed_overlap=" << overlap;
    o.require(overlap >= kRisingOverlap, "time-reversed shape");
    return o;
}

Outcome criterion5() {
    Outcome o;
    EnsembleParams unit;
    unit.mu = 1.0;
    unit.excited_lifetime = 1.0;
    const std::pair<NamedState, int> states[] = {
        {NamedState::one_sym, 1},     {NamedState::two_sym, 1},   {NamedState::one_AminusB, 2},
        {NamedState::two_AminusB, 2}, {NamedState::two_prime, 2}, {NamedState::two_ABCD, 4}};
    auto formula = [](NamedState s, double n) {
        switch (s) {
            case NamedState::one_sym: return n;
            case NamedState::two_sym: return 2.0 * (n - 1.0);
            case NamedState::one_AminusB: return 0.0;
            case NamedState::two_AminusB: return 2.0 / (n - 1.0);
            case NamedState::two_prime: return n - 2.0;
            case NamedState::two_ABCD: return 4.0 / (n - 2.0);
        }
        return -1.0;
    };
    double worst = 0.0;
    for (int n : {4, 8, 12}) {
        for (const auto& [s, parts] : states) {
            const auto state = named_state(s, Partition::equal(n, parts));
            const double rate = emission_rate(state, unit);
            const double oracle = brute_force_rate(to_full_basis(state), unit);
            const double ref = formula(s, n);
            for (double target : {ref, oracle}) {
                if (target == 0.0) {
                    o.require(std::abs(rate) <= kRateZeroAbs, "zero rate N=" + std::to_string(n));
                } else {
                    worst = std::max(worst, rel_dev(rate, target));
                    o.require(rel_dev(rate, target) <= kRateRel, "rate N=" + std::to_string(n));
                }
            }
            o.require(ref == 0.0 ? std::abs(oracle) <= kRateZeroAbs : rel_dev(oracle, ref) <= kRateRel,
                      "oracle vs formula N=" + std::to_string(n));
        }
    }
    o.detail << " 18 rates, worst rel_dev=" << worst;
    return o;
}

std::string flips(const PulsePlan& plan) {
    std::string s;
    for (const auto& e : plan.events) s += (s.empty() ? "" : ",") + e.mask.flip_labels();
    return s;
}

Outcome criterion6() {
    Outcome o;
    for (std::size_t parts : {2u, 4u, 8u}) {
        const std::size_t bins = parts - 1;
        const auto w = plan_write(parts, bins, 1.0);
        const auto wr = verify_plan(w);
        o.require(wr.ok, "write plan parts=" + std::to_string(parts));
        for (std::size_t a = 0; a < bins; ++a) {
            o.require(wr.stored_rows[a].index != 0, "stored row superradiant");
            for (std::size_t b = 0; b < bins; ++b)
                if (a != b) o.require(wr.orthogonality[a][b] == 0, "orthogonality");
        }
        for (bool reversed : {false, true}) {
            const auto r = plan_read(parts, bins, 1.0, reversed, w.end());
            const auto rr = verify_plan(w, r);
            o.require(rr.ok, "read plan");
            std::vector<std::size_t> expected(bins);
            for (std::size_t i = 0; i < bins; ++i) expected[i] = reversed ? bins - 1 - i : i;
            o.require(rr.emission_order == expected, "read permutation");
            // Passive cumulative frames equal the active products.
            const auto pw = plan_passive(parts, bins, 1.0, PlanPhase::write);
            const auto pr = plan_passive(parts, bins, 1.0, PlanPhase::read, reversed, w.end());
            SignPattern frame = SignPattern::all_plus(parts);
            for (std::size_t i = 0; i < bins; ++i) {
                frame = frame * w.events[i].mask;
                o.require(pw.events[i].mask == frame, "passive write frame");
            }
            for (std::size_t i = 0; i < bins; ++i) {
                frame = frame * r.events[i].mask;
                o.require(pr.events[i].mask == frame, "passive read frame");
            }
        }
    }
    const std::string w4 = flips(plan_write(4, 3, 1.0));
    const std::string r4 = flips(plan_read(4, 3, 1.0, false, 3.0));
    const std::string t4 = flips(plan_read(4, 3, 1.0, true, 3.0));
    o.detail << " write=" << w4 << " read=" << r4 << " reversed=" << t4;
    o.require(w4 == "BD,BC,BD", "write masks");
    o.require(r4 == "AD,BD,BC", "read masks");
    o.require(t4 == "AC,BC,BD", "reversed read masks");
    return o;
}

Outcome criterion7() {
    Outcome o;
    const auto p = pr_yso();
    const double T = 2.5 * p.tau_R;
    const double dt = snapped_dt(T, p);
    const TimeGrid grid(0.0, dt, static_cast<std::size_t>(std::llround(3 * T / dt)) + 1);
    const auto wplan = plan_write(4, 3, T);
    const auto rplan = plan_read(4, 3, T, false, wplan.end());
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    double flux = 0.0, ledger = 0.0, linear = 0.0, covariance = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = testing_support::random_band_limited(rng, p, 0.0, 3 * T, 0.7);
        const auto b = testing_support::random_band_limited(rng, p, 0.0, 3 * T, 0.3);
        const auto ra = end_to_end(a.shape, grid, wplan, rplan, p);
        for (const auto& f : ra.write.flux) flux = std::max(flux, std::abs(f.input_consumed - f.transmitted - f.stored));

        // Pulse events alone on the stored ledger.
        ModeLedger l = ra.write.ledger;
        const double n0 = l.norm_squared();
        for (const auto& e : rplan.events) l.apply(e.mask);
        ledger = std::max(ledger, std::abs(l.norm_squared() - n0));

        const Complex ka = std::polar(0.8, u(rng)), kb = std::polar(1.3, u(rng));
        const auto rb = end_to_end(b.shape, grid, wplan, rplan, p);
        const auto rab = end_to_end(a.shape * ka + b.shape * kb, grid, wplan, rplan, p);
        const Complex phase = std::polar(1.0, u(rng));
        const auto rph = end_to_end(a.shape * phase, grid, wplan, rplan, p);
        double scale = 0.0, dev = 0.0, cdev = 0.0, cscale = 0.0;
        for (std::size_t k = 0; k < rab.output.samples.size(); ++k) {
            const Complex expect = ka * ra.output.samples[k] + kb * rb.output.samples[k];
            dev = std::max(dev, std::abs(rab.output.samples[k] - expect));
            scale = std::max(scale, std::abs(expect));
            cdev = std::max(cdev, std::abs(rph.output.samples[k] - phase * ra.output.samples[k]));
            cscale = std::max(cscale, std::abs(ra.output.samples[k]));
        }
        linear = std::max(linear, dev / scale);
        covariance = std::max(covariance, cdev / cscale);
    }
    o.detail << " flux=" << flux << " ledger=" << ledger << " linearity=" << linear << " covariance=" << covariance;
    o.require(flux < kFluxAbs, "flux");
    o.require(ledger <= kLedgerAbs, "ledger norm");
    o.require(linear <= kLinearRel, "linearity");
    o.require(covariance <= kLinearRel, "phase covariance");
    return o;
}

Outcome criterion8() {
    Outcome o;
    const double g_a = 1e6;
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double leak = 0.0, unitarity = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const double pop = u(rng);
        const Complex c0 = std::polar(std::sqrt(pop), 2.0 * kPi * u(rng));
        const Complex c1 = std::polar(std::sqrt(1.0 - pop), 2.0 * kPi * u(rng));
        const DriveConfig cfg{g_a, g_a * (0.1 + 10.0 * u(rng)), std::polar(0.1 + 20.0 * u(rng), 2.0 * kPi * u(rng))};
        const auto out = pulse_outcome(c0, c1, cfg);
        leak = std::max(leak, std::abs(failure_probability(c0, cfg) - std::norm(out.final_state.leak)));
        const double t = 50.0 * u(rng) / cfg.omega();
        unitarity = std::max(unitarity, std::abs(evolve(c0, c1, cfg, t).norm_squared() - 1.0));
    }
    const Complex c0 = std::sqrt(0.3);
    const double worst = failure_probability(c0, DriveConfig::from_rabi(g_a, 2.0 * g_a));
    const double p20 = failure_probability(c0, DriveConfig::from_rabi(g_a, 20.0 * g_a));
    o.detail << " leak_dev=" << leak << " unitarity_dev=" << unitarity << " p(2g_a)/|c0|^2=" << worst / 0.3
             << " p(20g_a)/|c0|^2=" << p20 / 0.3;
    o.require(leak <= kLeakAbs, "p vs leak");
    o.require(unitarity <= kUnitarityAbs, "unitarity");
    o.require(std::abs(worst - 0.3) <= kLeakAbs, "worst case");
    o.require(p20 < kP20Bound * 0.3, "20 g_a bound");
    return o;
}

double max_dev(const AmplitudeTrajectory& a, const AmplitudeTrajectory& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.c.size(); ++k) d = std::max(d, std::abs(a.c[k] - b.c[k]));
    return d;
}

Outcome criterion9() {
    Outcome o;
    const auto p = pr_yso();
    // Rectangular packet, x = 2.5, followed by free decay.
    const double tau = 2.5 * p.tau_R;
    auto rect = [&](double dt) {
        const TimeGrid g(0.0, dt, static_cast<std::size_t>(std::llround(4.0 * tau / dt)) + 1);
        return max_dev(evolve_amplitude(rectangular_packet(tau, p), g, 0.0, p), closed_form_rectangular(tau, p, g));
    };
    // Rising exponential long enough that the finite start is negligible.
    const double te = 40.0 * p.tau_R;
    auto rising = [&](double dt) {
        const TimeGrid g(0.0, dt, static_cast<std::size_t>(std::llround((te + 10.0 * p.tau_R) / dt)) + 1);
        const auto f = PacketShape::rising_exponential(0.0, te, p.tau_R, p.tau_E);
        const auto num = evolve_amplitude(f, g, 0.0, p);
        const auto cf = closed_form_rising_exponential(te, p, g);
        double d = 0.0;
        for (std::size_t k = 0; k < g.n_samples; ++k)
            if (g.time(k) >= 20.0 * p.tau_R) d = std::max(d, std::abs(num.c[k] - cf.c[k]));
        return d;
    };
    const double r20 = rect(p.tau_R / 20.0), r40 = rect(p.tau_R / 40.0);
    const double e20 = rising(p.tau_R / 20.0), e40 = rising(p.tau_R / 40.0);
    const double r200 = rect(default_dt(p)), e200 = rising(default_dt(p));
    o.detail << " rect ratio=" << r20 / r40 << " rising ratio=" << e20 / e40 << " err(default dt)=" << r200 << ","
             << e200;
    o.require(r20 / r40 >= kConvergenceRatio, "rectangular convergence");
    o.require(e20 / e40 >= kConvergenceRatio, "rising convergence");
    o.require(r200 < kDefaultDtAbs && e200 < kDefaultDtAbs, "default dt error");
    return o;
}

Outcome criterion10() {
    Outcome o;
    const auto p = pr_yso();
    double worst = 0.0;
    for (int k = 0; k < 16; ++k) {
        const double phi = 2.0 * kPi * k / 16.0;
        const auto q = timebin_qubit_fidelity(1.0 / std::sqrt(2.0), std::polar(1.0 / std::sqrt(2.0), phi),
                                              20.0 * p.tau_R, p);
        worst = std::max(worst, std::abs(q.fidelity - 1.0));
    }
    o.detail << " max |F - 1|=" << worst;
    o.require(worst <= kQubitAbs, "qubit fidelity");
    return o;
}

}  // namespace

int main() {
    using Check = Outcome (*)();
    const std::pair<const char*, Check> criteria[] = {
        {"materials regression", criterion1},  {"capture optimum", criterion2},
        {"efficiency chain", criterion3},      {"time-reversal mode", criterion4},
        {"rate table vs oracle", criterion5},  {"schedule correctness", criterion6},
        {"conservation properties", criterion7}, {"three-level failure", criterion8},
        {"numerical convergence", criterion9}, {"qubit storage", criterion10},
    };
    int failed = 0;
    for (std::size_t i = 0; i < std::size(criteria); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu %s:%s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.str().c_str());
    }
    std::printf("%d of %zu criteria failed\n", failed, std::size(criteria));
    return failed == 0 ? 0 : 1;
}
