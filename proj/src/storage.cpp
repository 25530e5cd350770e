#include "subrad/storage.hpp"

#include <algorithm>
#include <cmath>

namespace subrad {

namespace {

std::size_t node_of(const TimeGrid& grid, double t, const char* what) {
    try {
        return grid.index_of(t);
    } catch (const PreconditionError&) {
        throw PreconditionError(std::string(what) + ": pulse event is not on a grid node");
    }
}

// Normalized read kernel exp(-(t - t_start) / 2 tau_R) on a window grid.
WavePacket read_kernel(const TimeGrid& g, const EnsembleParams& p) {
    WavePacket k = WavePacket::zeros(g);
    for (std::size_t i = 0; i < g.n_samples; ++i)
        k.samples[i] = std::exp(-(g.time(i) - g.t0) / (2.0 * p.tau_R));
    const double n = packet_norm(k, p.tau_E);
    for (auto& v : k.samples) v /= std::sqrt(n);
    return k;
}

void decay_subradiant(ModeLedger& L, double duration, const StorageOptions& opts) {
    const double rate = opts.loss_rate + opts.subradiant_leak_rate;
    if (rate == 0.0 || duration <= 0.0) return;
    const double f = std::exp(-0.5 * rate * duration);
    for (std::size_t r = 1; r < L.amplitudes.size(); ++r) L.amplitudes[r] *= f;
}

void apply_pulse(ModeLedger& L, const SignPattern& mask, const StorageOptions& opts) {
    L.apply(mask);
    if (opts.pulse_failure > 0.0) {
        const double f = std::sqrt(1.0 - opts.pulse_failure);
        for (auto& a : L.amplitudes) a *= f;
    }
}

void check_options(const StorageOptions& opts) {
    if (!(opts.loss_rate >= 0.0)) throw PreconditionError("loss_rate must be non-negative");
    if (!(opts.subradiant_leak_rate >= 0.0))
        throw PreconditionError("subradiant_leak_rate must be non-negative");
    if (!(opts.pulse_failure >= 0.0 && opts.pulse_failure <= 1.0))
        throw PreconditionError("pulse_failure must lie in [0, 1]");
    if (!(opts.read_tail >= 0.0)) throw PreconditionError("read_tail must be non-negative");
}

// Node indices where segments start and end: 0, the events, the last node.
std::vector<std::size_t> segment_nodes(const TimeGrid& grid, std::vector<std::size_t> events) {
    std::vector<std::size_t> nodes{0};
    for (auto e : events)
        if (e != nodes.back()) nodes.push_back(e);
    if (nodes.back() != grid.n_samples - 1) nodes.push_back(grid.n_samples - 1);
    return nodes;
}

WavePacket stitch(const TimeGrid& grid, const std::vector<Segment>& segments) {
    WavePacket out = WavePacket::zeros(grid);
    for (const auto& s : segments) {
        const std::size_t a = grid.index_of(s.grid.t0);
        for (std::size_t i = 0; i < s.grid.n_samples; ++i) out.samples[a + i] = s.f_out.samples[i];
    }
    return out;
}

}  // namespace

ModeLedger ModeLedger::empty(std::size_t parts, double time) {
    if (parts < 2 || (parts & (parts - 1)) != 0)
        throw PreconditionError("ledger: part count must be a power of two >= 2");
    return ModeLedger{parts, std::vector<Complex>(parts), std::vector<int>(parts, -1),
                      SignPattern::all_plus(parts), time};
}

SignPattern ModeLedger::row_pattern(std::size_t r) const { return sylvester(parts).row(r); }

double ModeLedger::norm_squared() const {
    double s = 0.0;
    for (const auto& a : amplitudes) s += std::norm(a);
    return s;
}

void ModeLedger::apply(const SignPattern& mask) {
    if (mask.size() != parts) throw PreconditionError("ledger: mask length mismatch");
    const auto ref = hadamard_row_of(mask);
    if (!ref) throw PreconditionError("ledger: mask " + mask.str() + " is not a Hadamard row");
    std::vector<Complex> amps(parts);
    std::vector<int> bins(parts, -1);
    for (std::size_t r = 0; r < parts; ++r) {
        amps[r ^ ref->index] = static_cast<double>(ref->sign) * amplitudes[r];
        bins[r ^ ref->index] = bin_of_row[r];
    }
    amplitudes = std::move(amps);
    bin_of_row = std::move(bins);
}

WriteResult simulate_write(const PacketShape& f_in, const TimeGrid& grid, const PulsePlan& plan,
                           const EnsembleParams& p, const StorageOptions& opts) {
    check_options(opts);
    if (plan.phase != PlanPhase::write) throw PreconditionError("simulate_write: not a write plan");
    const PlanReport check = verify_plan(plan);
    if (!check.ok) throw PreconditionError("simulate_write: unverified plan: " + check.violations.front());
    const double tol = 1e-6 * grid.dt;
    if (std::abs(grid.t0 - plan.start) > tol)
        throw PreconditionError("simulate_write: grid must start at the plan start");
    if (grid.t_end() < plan.end() - tol)
        throw PreconditionError("simulate_write: grid does not cover the plan");

    const PulsePlan active =
        plan.passive() ? to_active_equivalent(plan, SignPattern::all_plus(plan.parts)) : plan;
    std::vector<std::size_t> events;
    for (const auto& e : active.events) events.push_back(node_of(grid, e.time, "simulate_write"));
    const auto nodes = segment_nodes(grid, events);

    WriteResult res;
    res.ledger = ModeLedger::empty(plan.parts, grid.t0);
    res.ledger.bin_of_row[0] = 0;
    ModeLedger& L = res.ledger;
    double consumed = 0.0;
    double transmitted = 0.0;
    std::size_t next_event = 0;
    for (std::size_t s = 0; s + 1 < nodes.size(); ++s) {
        const TimeGrid g(grid.time(nodes[s]), grid.dt, nodes[s + 1] - nodes[s] + 1);
        const auto traj = evolve_amplitude(f_in, g, L.amplitudes[0], p, opts.loss_rate);
        WavePacket fin = sample(f_in, g);
        WavePacket fout = output_field(fin, traj, p);
        L.amplitudes[0] = traj.c.back();
        decay_subradiant(L, g.duration(), opts);
        L.time = g.t_end();
        consumed += packet_norm(fin, p.tau_E);
        transmitted += packet_norm(fout, p.tau_E);
        res.flux.push_back({L.time, consumed, transmitted, L.norm_squared()});
        res.segments.push_back({g, std::move(fin), traj.c, std::move(fout)});

        if (next_event < events.size() && nodes[s + 1] == events[next_event]) {
            apply_pulse(L, active.events[next_event].mask, opts);
            if (plan.passive()) L.frame = plan.events[next_event].mask;
            ++next_event;
            L.bin_of_row[0] = next_event < plan.bins ? static_cast<int>(next_event) : -1;
        }
    }
    res.input_norm = consumed;
    res.transmitted = stitch(grid, res.segments);

    for (std::size_t n = 0; n < plan.bins; ++n) {
        const Segment& seg = res.segments.at(n);
        BinWrite b;
        b.bin = n;
        b.input_norm = packet_norm(seg.f_in, p.tau_E);
        const double T = seg.grid.duration();
        b.input_amplitude = integrate_uniform(seg.f_in.samples, seg.grid.dt) *
                            (std::sqrt(p.tau_E / T) / p.tau_E);
        for (std::size_t r = 0; r < L.parts; ++r)
            if (L.bin_of_row[r] == static_cast<int>(n)) {
                b.row = r;
                b.stored = L.amplitudes[r];
            }
        b.efficiency = b.input_norm > 0.0 ? std::norm(b.stored) / b.input_norm : 0.0;
        res.bins.push_back(b);
    }
    return res;
}

WriteResult simulate_write(const WavePacket& f_in, const PulsePlan& plan, const EnsembleParams& p,
                           const StorageOptions& opts) {
    return simulate_write(PacketShape::from_samples(f_in), f_in.grid, plan, p, opts);
}

ReadResult simulate_read(const ModeLedger& ledger, const PulsePlan& plan, const EnsembleParams& p,
                         const TimeGrid& grid, const StorageOptions& opts) {
    check_options(opts);
    if (plan.phase != PlanPhase::read) throw PreconditionError("simulate_read: not a read plan");
    if (plan.parts != ledger.parts) throw PreconditionError("simulate_read: plan/ledger part mismatch");
    if (plan.events.empty()) throw PreconditionError("simulate_read: plan has no events");
    for (std::size_t i = 1; i < plan.events.size(); ++i)
        if (!(plan.events[i].time > plan.events[i - 1].time))
            throw PreconditionError("simulate_read: event times are not increasing");
    const double tol = 1e-6 * grid.dt;
    if (std::abs(grid.t0 - plan.start) > tol || std::abs(plan.events.front().time - plan.start) > tol)
        throw PreconditionError("simulate_read: grid and first pulse must be at the plan start");

    const PulsePlan active = plan.passive() ? to_active_equivalent(plan, ledger.frame) : plan;
    std::vector<std::size_t> events;
    for (const auto& e : active.events) events.push_back(node_of(grid, e.time, "simulate_read"));
    if (events.back() >= grid.n_samples - 1)
        throw PreconditionError("simulate_read: grid ends at the last read pulse");

    ReadResult res;
    res.ledger = ledger;
    ModeLedger& L = res.ledger;
    const double gap = plan.start - L.time;
    if (gap < -tol) throw PreconditionError("simulate_read: read starts before the ledger time");
    if (gap > 0.0) {
        const double a0 = std::norm(L.amplitudes[0]);
        const double rate = 1.0 / p.tau_R + opts.loss_rate;
        res.pre_read_emission = a0 * (-std::expm1(-gap / p.tau_R)) * std::exp(-opts.loss_rate * gap);
        L.amplitudes[0] *= std::exp(-0.5 * rate * gap);
        decay_subradiant(L, gap, opts);
        L.time = plan.start;
    }

    // Amplitude of each row when the read starts and its sign picked up since.
    std::vector<Complex> initial(L.parts);
    std::vector<int> cumulative(L.parts, 1);
    for (std::size_t r = 0; r < L.parts; ++r)
        if (L.bin_of_row[r] >= 0) initial[static_cast<std::size_t>(L.bin_of_row[r])] = L.amplitudes[r];
    std::vector<bool> emitted(L.parts, false);
    for (std::size_t i = 0; i < events.size(); ++i) {
        const SignPattern& mask = active.events[i].mask;
        const auto ref = hadamard_row_of(mask);
        if (!ref) throw PreconditionError("simulate_read: mask " + mask.str() + " is not a Hadamard row");
        const int bin = L.bin_of_row.at(ref->index);
        if (bin < 0 || emitted[static_cast<std::size_t>(bin)])
            throw PreconditionError("simulate_read: read pulse " + std::to_string(i) +
                                    " does not bring a stored bin into the active row");
        emitted[static_cast<std::size_t>(bin)] = true;
        BinRead b;
        b.bin = static_cast<std::size_t>(bin);
        for (auto& c : cumulative) c *= ref->sign;
        b.stored = initial[b.bin];
        b.sign = cumulative[b.bin];
        apply_pulse(L, mask, opts);
        if (plan.passive()) L.frame = plan.events[i].mask;

        const std::size_t end = i + 1 < events.size() ? events[i + 1] : grid.n_samples - 1;
        const TimeGrid g(grid.time(events[i]), grid.dt, end - events[i] + 1);
        const auto traj = evolve_amplitude(PacketShape::zero(), g, L.amplitudes[0], p, opts.loss_rate);
        WavePacket fin = WavePacket::zeros(g);
        WavePacket fout = output_field(fin, traj, p);
        L.amplitudes[0] = traj.c.back();
        decay_subradiant(L, g.duration(), opts);
        L.time = g.t_end();

        b.window_start = g.t0;
        b.window_end = g.t_end();
        b.emitted_probability = packet_norm(fout, p.tau_E);
        b.emitted = packet_inner(read_kernel(g, p), fout, p.tau_E);
        b.efficiency = std::norm(b.stored) > 0.0 ? b.emitted_probability / std::norm(b.stored) : 0.0;
        res.bins.push_back(b);
        res.segments.push_back({g, std::move(fin), traj.c, std::move(fout)});
    }
    res.output = stitch(grid, res.segments);
    return res;
}

StorageReport end_to_end(const PacketShape& f_in, const TimeGrid& write_grid,
                         const PulsePlan& write_plan, const PulsePlan& read_plan,
                         const EnsembleParams& p, const StorageOptions& opts) {
    if (write_plan.parts != read_plan.parts || write_plan.bins != read_plan.bins)
        throw PreconditionError("end_to_end: write and read plans differ in shape");
    StorageReport rep;
    rep.write = simulate_write(f_in, write_grid, write_plan, p, opts);
    const TimeGrid read_grid =
        TimeGrid::spanning(read_plan.start, read_plan.end() + opts.read_tail, write_grid.dt);
    rep.read = simulate_read(rep.write.ledger, read_plan, p, read_grid, opts);
    rep.write_bins = rep.write.bins;
    rep.read_bins = rep.read.bins;
    rep.output = rep.read.output;
    rep.input_norm = rep.write.input_norm;

    double stored = 0.0;
    double emitted = 0.0;
    for (const auto& b : rep.write_bins) stored += std::norm(b.stored);
    for (const auto& b : rep.read_bins) emitted += std::norm(b.emitted);
    rep.write_efficiency = rep.input_norm > 0.0 ? stored / rep.input_norm : 0.0;
    rep.read_efficiency = stored > 0.0 ? emitted / stored : 0.0;
    rep.total_efficiency = rep.input_norm > 0.0 ? emitted / rep.input_norm : 0.0;

    // Target: each bin's flat-mode input amplitude carried by the read kernel
    // of the window it is emitted in.
    Complex overlap{0.0, 0.0};
    double target_norm = 0.0;
    double output_norm = 0.0;
    double bc = 0.0, p_sum = 0.0, q_sum = 0.0;
    for (std::size_t i = 0; i < rep.read_bins.size(); ++i) {
        const auto& rb = rep.read_bins[i];
        const auto& seg = rep.read.segments[i];
        const auto& wb = rep.write_bins.at(rb.bin);
        WavePacket target = read_kernel(seg.grid, p);
        for (auto& v : target.samples) v *= wb.input_amplitude;
        overlap += packet_inner(target, seg.f_out, p.tau_E);
        target_norm += packet_norm(target, p.tau_E);
        output_norm += packet_norm(seg.f_out, p.tau_E);
        bc += std::sqrt(wb.input_norm * rb.emitted_probability);
        p_sum += wb.input_norm;
        q_sum += rb.emitted_probability;
    }
    const double tiny = 1e-300;
    if (target_norm > tiny && output_norm > tiny)
        rep.fidelity = std::norm(overlap) / (target_norm * output_norm);
    if (p_sum > tiny && q_sum > tiny) rep.bin_probability_match = bc * bc / (p_sum * q_sum);
    return rep;
}

QubitResult timebin_qubit_fidelity(Complex alpha, Complex beta, double separation,
                                   const EnsembleParams& p, const StorageOptions& opts) {
    if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > 1e-9)
        throw PreconditionError("qubit: |alpha|^2 + |beta|^2 must be 1");
    if (!(separation >= 10.0 * p.tau_R))
        throw PreconditionError("qubit: bins overlap (separation below 10 tau_R)");

    const double steps = std::ceil(separation / default_dt(p) - 1e-9);
    const double dt = separation / steps;
    const auto n = static_cast<std::size_t>(steps);
    const TimeGrid grid(0.0, dt, 2 * n + 1);
    const PacketShape early = PacketShape::rising_exponential(0.0, separation, p.tau_R, p.tau_E);
    const PacketShape late =
        PacketShape::rising_exponential(separation, 2.0 * separation, p.tau_R, p.tau_E);
    const PacketShape input = early * alpha + late * beta;

    const PulsePlan write = plan_write(4, 2, separation, 0.0);
    const PulsePlan read = plan_read(4, 2, separation, false, 2.0 * separation);

    QubitResult res;
    res.report = end_to_end(input, grid, write, read, p, opts);
    const Complex coeff[2] = {alpha, beta};
    Complex overlap{0.0, 0.0};
    double output_norm = 0.0;
    for (std::size_t i = 0; i < res.report.read.segments.size(); ++i) {
        const auto& seg = res.report.read.segments[i];
        WavePacket target = read_kernel(seg.grid, p);
        for (auto& v : target.samples) v *= coeff[res.report.read_bins[i].bin];
        overlap += packet_inner(target, seg.f_out, p.tau_E);
        output_norm += packet_norm(seg.f_out, p.tau_E);
    }
    res.recall_overlap = std::norm(overlap);
    res.fidelity = output_norm > 0.0 ? res.recall_overlap / output_norm : 0.0;
    return res;
}

}  // namespace subrad
