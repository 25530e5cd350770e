#include "subrad/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <regex>
#include <set>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "subrad/dynamics.hpp"
#include "subrad/io.hpp"
#include "subrad/schedule.hpp"
#include "subrad/states.hpp"
#include "subrad/storage.hpp"
#include "subrad/threelevel.hpp"

namespace subrad::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kScenarios = {"params", "scatter", "store",     "qubit",
                                             "rates",  "schedule", "threelevel"};

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

double number(const json& v, const std::string& field) {
    if (!v.is_number()) throw ConfigError(field + ": expected a number");
    return v.get<double>();
}

bool boolean(const json& obj, const std::string& key, bool fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_boolean()) throw ConfigError(where + "." + key + ": expected true or false");
    return obj[key].get<bool>();
}

std::size_t count(const json& obj, const std::string& key, std::size_t fallback,
                  const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj[key];
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError(where + "." + key + ": expected a non-negative integer");
    return v.get<std::size_t>();
}

Complex complex_value(const json& v, const std::string& field) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(field + ": expected a number or [re, im]");
}

json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

// {"value", "reference", "rel_dev", "source"}.
json with_reference(double value, double reference, const std::string& source) {
    json j;
    j["value"] = value;
    j["reference"] = reference;
    j["rel_dev"] = reference != 0.0 ? (value - reference) / std::abs(reference) : value - reference;
    j["source"] = source;
    return j;
}

bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

json params_json(const EnsembleParams& p) {
    json j;
    j["wavelength"] = p.wavelength;
    j["sample_length"] = p.sample_length;
    j["cross_section"] = p.cross_section;
    j["excited_lifetime"] = p.excited_lifetime;
    j["atom_count"] = p.atom_count;
    j["number_density"] = p.number_density;
    j["mu"] = p.mu;
    j["tau_E"] = p.tau_E;
    j["tau_R"] = p.tau_R;
    j["tau_c"] = p.tau_c;
    j["fresnel"] = p.fresnel;
    if (p.t2_star) j["t2_star"] = *p.t2_star;
    if (p.inhomogeneous_linewidth) j["inhomogeneous_linewidth"] = *p.inhomogeneous_linewidth;
    if (p.pit_width) j["pit_width"] = *p.pit_width;
    return j;
}

json warnings_json(const std::vector<RegimeWarning>& ws) {
    json arr = json::array();
    for (const auto& w : ws) arr.push_back({{"code", w.code}, {"message", w.message}});
    return arr;
}

struct Context {
    json config;
    fs::path base_dir;
    std::optional<EnsembleParams> params;
    std::optional<double> dt_override;

    const EnsembleParams& p(const std::string& scenario) const {
        if (!params) throw ConfigError(scenario + ": an 'ensemble' block is required");
        return *params;
    }
    std::optional<double> tau_R() const {
        return params ? std::optional<double>(params->tau_R) : std::nullopt;
    }
    double dt() const { return dt_override ? *dt_override : default_dt(*params); }
    double time(const json& block, const std::string& key, std::optional<double> fallback,
                const std::string& where) const {
        if (!block.contains(key)) {
            if (!fallback) throw ConfigError(where + "." + key + ": required");
            return *fallback;
        }
        return parse_time(block[key], tau_R(), where + "." + key);
    }
};

// Step no larger than dt that puts `span` on a whole number of steps.
double snap_dt(double span, double dt) {
    const double n = std::max(1.0, std::ceil(span / dt - 1e-9));
    return span / n;
}

// ---------------------------------------------------------------- packets

struct PacketSpec {
    std::string shape;
    PacketShape fn;
    double start = 0.0;
    double end = 0.0;
    double duration = 0.0;
};

PacketSpec parse_packet(const json& block, const Context& ctx, const std::string& where,
                        double default_start, std::optional<double> default_length) {
    const auto& p = *ctx.params;
    PacketSpec s;
    if (!block.contains("shape")) throw ConfigError(where + ".shape: required");
    s.shape = block["shape"].is_string() ? block["shape"].get<std::string>() : "";
    if (s.shape == "rectangular") {
        check_keys(block, {"shape", "start", "duration", "amplitude"}, where);
        s.start = ctx.time(block, "start", default_start, where);
        s.duration = ctx.time(block, "duration", default_length, where);
        if (!(s.duration > 0.0)) throw ConfigError(where + ".duration: must be positive");
        s.end = s.start + s.duration;
        const Complex amp = block.contains("amplitude")
                                ? complex_value(block["amplitude"], where + ".amplitude")
                                : Complex{std::sqrt(p.tau_E / s.duration), 0.0};
        s.fn = PacketShape::rectangular(s.start, s.duration, amp);
    } else if (s.shape == "rising_exp") {
        check_keys(block, {"shape", "t_start", "t_end"}, where);
        s.start = ctx.time(block, "t_start", default_start, where);
        std::optional<double> end_default;
        if (default_length) end_default = s.start + *default_length;
        s.end = ctx.time(block, "t_end", end_default, where);
        if (!(s.end > s.start)) throw ConfigError(where + ": t_end must follow t_start");
        s.duration = s.end - s.start;
        s.fn = PacketShape::rising_exponential(s.start, s.end, p.tau_R, p.tau_E);
    } else if (s.shape == "samples") {
        check_keys(block, {"shape", "file"}, where);
        if (!block.contains("file") || !block["file"].is_string())
            throw ConfigError(where + ".file: required");
        fs::path file = block["file"].get<std::string>();
        if (file.is_relative()) file = ctx.base_dir / file;
        const WavePacket w = read_samples_file(file);
        s.start = w.grid.t0;
        s.end = w.grid.t_end();
        s.duration = w.grid.duration();
        s.fn = PacketShape::from_samples(w);
    } else {
        throw ConfigError(where + ".shape: expected rectangular, rising_exp or samples");
    }
    return s;
}

// ---------------------------------------------------------------- scenarios

bool is_pr_yso_geometry(const EnsembleParams& p) {
    return close_rel(p.wavelength, 606e-9, 1e-9) && close_rel(p.sample_length, 5e-3, 1e-9) &&
           close_rel(p.cross_section, kPi * 50e-6 * 50e-6, 1e-9) &&
           close_rel(p.excited_lifetime, 164e-6, 1e-9);
}

RunResult run_params(const Context& ctx, const json& block) {
    check_keys(block, {"packet_duration", "pulse_duration", "target_tau_R"}, "params");
    const auto& p = ctx.p("params");
    RunResult r;
    const double packet = ctx.time(block, "packet_duration", 2.5 * p.tau_R, "params");
    const double pulse = ctx.time(block, "pulse_duration", 0.0, "params");
    json res;
    res["params"] = params_json(p);
    res["warnings"] = warnings_json(validate_regime(p, packet, pulse));
    res["mode_rate"] = p.mode_rate();
    if (p.pit_width) res["min_tau_R_for_pit"] = min_tau_r_for_pit(*p.pit_width);
    if (block.contains("target_tau_R")) {
        EnsembleInput in = parse_ensemble(ctx.config.at("ensemble"));
        res["density_for_target_tau_R"] =
            density_for_tau_r(in, parse_time(block["target_tau_R"], p.tau_R, "params.target_tau_R"));
    }

    json refs = json::object();
    if (is_pr_yso_geometry(p)) {
        refs["tau_E"] = with_reference(p.tau_E, 17e-12, "published");
        refs["mu"] = with_reference(p.mu, 0.5e-5, "published");
        const std::pair<double, double> table[] = {{2e20, 3.7e-9}, {2e19, 37e-9}, {4e17, 1.9e-6}};
        for (const auto& [density, tau] : table)
            if (close_rel(p.number_density, density, 1e-3)) refs["tau_R"] = with_reference(p.tau_R, tau, "published");
        if (p.pit_width && close_rel(*p.pit_width, 10e6, 1e-9))
            refs["min_tau_R_for_pit"] = with_reference(min_tau_r_for_pit(*p.pit_width), 20e-9, "published");
    }
    if (p.inhomogeneous_linewidth && close_rel(*p.inhomogeneous_linewidth, 100e3, 1e-9))
        refs["t2_star"] = with_reference(*p.t2_star, 3e-6, "published");
    res["references"] = refs;
    r.report = res;
    r.summary = {{"tau_E", p.tau_E}, {"tau_R", p.tau_R}, {"tau_c", p.tau_c},
                 {"mu", p.mu},       {"fresnel", p.fresnel}, {"atom_count", p.atom_count},
                 {"warnings", res["warnings"].size()}};
    return r;
}

RunResult run_scatter(const Context& ctx, const json& block) {
    check_keys(block, {"packet", "t_start", "t_max"}, "scatter");
    const auto& p = ctx.p("scatter");
    if (!block.contains("packet")) throw ConfigError("scatter.packet: required");
    const PacketSpec pk = parse_packet(block["packet"], ctx, "scatter.packet", 0.0, std::nullopt);
    const double t0 = ctx.time(block, "t_start", pk.start, "scatter");
    const double t_max = ctx.time(block, "t_max", pk.end + 10.0 * p.tau_R, "scatter");
    if (!(t_max > t0)) throw ConfigError("scatter: t_max must follow t_start");
    const double dt = pk.end > t0 ? snap_dt(pk.end - t0, ctx.dt()) : ctx.dt();
    const auto n = static_cast<std::size_t>(std::ceil((t_max - t0) / dt - 1e-9)) + 1;
    const TimeGrid grid(t0, dt, std::max<std::size_t>(n, 2));

    std::vector<std::string> notes;
    const auto traj = evolve_amplitude(pk.fn, grid, Complex{}, p);
    const WavePacket fin = sample(pk.fn, grid);
    const WavePacket fout = output_field(fin, traj, p);

    // Norms piecewise between the packet edges, each piece with its own
    // one-sided limits, so jumps on nodes do not degrade the quadrature.
    std::vector<std::size_t> cuts{0};
    for (double edge : {pk.start, pk.end})
        if (edge > grid.t0 && edge < grid.t_end()) {
            const double k = (edge - grid.t0) / dt;
            if (std::abs(k - std::round(k)) < 1e-6) cuts.push_back(static_cast<std::size_t>(std::llround(k)));
        }
    cuts.push_back(grid.n_samples - 1);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double in_norm = 0.0, out_norm = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const TimeGrid piece(grid.time(cuts[i]), dt, cuts[i + 1] - cuts[i] + 1);
        const WavePacket f = sample(pk.fn, piece);
        const AmplitudeTrajectory t{piece, std::vector<Complex>(traj.c.begin() + cuts[i], traj.c.begin() + cuts[i + 1] + 1)};
        in_norm += packet_norm(f, p.tau_E);
        out_norm += packet_norm(output_field(f, t, p), p.tau_E);
    }

    json res;
    const double final_c2 = std::norm(traj.c.back());
    double peak = 0.0, t_peak = t0;
    for (std::size_t k = 0; k < traj.c.size(); ++k)
        if (std::norm(traj.c[k]) > peak) {
            peak = std::norm(traj.c[k]);
            t_peak = grid.time(k);
        }
    const std::size_t end_node = std::min(grid.n_samples - 1, grid.index_of(std::min(pk.end, grid.t_end())));
    const double capture = std::norm(traj.c[end_node]);
    res["params"] = params_json(p);
    res["dt"] = dt;
    res["input_norm"] = in_norm;
    res["output_norm"] = out_norm;
    res["final_c2"] = final_c2;
    res["peak_c2"] = peak;
    res["t_peak"] = t_peak;
    res["capture_c2"] = capture;
    res["flux_residual"] = final_c2 - (in_norm - out_norm);

    auto warnings = validate_regime(p, pk.duration, 0.0);
    json refs = json::object();
    if (pk.shape == "rectangular" && std::abs(pk.start - t0) < 1e-6 * dt) {
        const double x = pk.duration / p.tau_R;
        const auto cf = closed_form_rectangular(pk.duration, p, grid);
        double dev = 0.0;
        for (std::size_t k = 0; k < grid.n_samples; ++k) dev = std::max(dev, std::abs(cf.c[k] - traj.c[k]));
        res["closed_form_max_abs_dev"] = dev;
        const double g = capture_amplitude(x);
        refs["capture_c2"] = with_reference(capture, g * g, "closed_form");
        if (std::abs(x - 2.5) < 0.05) {
            refs["peak_amplitude"] = with_reference(std::sqrt(peak), 0.9, "published");
            refs["capture_c2_published"] = with_reference(capture, 0.81, "published");
        }
    } else if (pk.shape == "rising_exp") {
        const double d = (pk.end - pk.start) / p.tau_R;
        const double e = -std::expm1(-d);
        refs["capture_c2"] = with_reference(capture, e * e, "closed_form");
        if (d < 10.0)
            warnings.push_back({"rising_exp_short", "rising exponential shorter than 10 tau_R"});
        else
            refs["capture_c2_published"] = with_reference(capture, 1.0, "published");
    }
    res["warnings"] = warnings_json(warnings);
    res["references"] = refs;

    RunResult r;
    r.report = res;
    r.summary = {{"input_norm", in_norm},   {"output_norm", out_norm},
                 {"final_c2", final_c2},    {"peak_c2", peak},
                 {"capture_c2", capture},   {"flux_residual", res["flux_residual"]}};
    r.files.emplace_back("trajectory.tsv", trajectory_table(fin, traj, fout));
    for (std::size_t k = 0; k < grid.n_samples; ++k) r.surface.push_back({grid.time(k), std::norm(traj.c[k])});
    return r;
}

StorageOptions parse_storage_options(const json& block, const Context& ctx, const std::string& where) {
    StorageOptions o;
    if (block.contains("loss_rate")) o.loss_rate = number(block["loss_rate"], where + ".loss_rate");
    if (block.contains("subradiant_leak_rate"))
        o.subradiant_leak_rate = number(block["subradiant_leak_rate"], where + ".subradiant_leak_rate");
    if (block.contains("pulse_failure") && block.contains("drive"))
        throw ConfigError(where + ": give either pulse_failure or drive, not both");
    if (block.contains("pulse_failure")) o.pulse_failure = number(block["pulse_failure"], where + ".pulse_failure");
    if (block.contains("drive")) {
        const auto& d = block["drive"];
        check_keys(d, {"g_a", "omega_r"}, where + ".drive");
        if (!d.contains("g_a") || !d.contains("omega_r")) throw ConfigError(where + ".drive: needs g_a and omega_r");
        const double g_a = parse_rate(d["g_a"], std::nullopt, where + ".drive.g_a");
        const double omega_r = parse_rate(d["omega_r"], g_a, where + ".drive.omega_r");
        o.pulse_failure = failure_probability(1.0, DriveConfig::from_rabi(g_a, omega_r));
    }
    if (!(o.pulse_failure >= 0.0 && o.pulse_failure <= 1.0))
        throw ConfigError(where + ".pulse_failure: must lie in [0, 1]");
    if (!(o.loss_rate >= 0.0) || !(o.subradiant_leak_rate >= 0.0))
        throw ConfigError(where + ": rates must be non-negative");
    (void)ctx;
    return o;
}

json write_bins_json(const std::vector<BinWrite>& bins) {
    json arr = json::array();
    for (const auto& b : bins)
        arr.push_back({{"bin", b.bin},
                       {"input_norm", b.input_norm},
                       {"input_amplitude", complex_json(b.input_amplitude)},
                       {"stored", complex_json(b.stored)},
                       {"row", b.row},
                       {"efficiency", b.efficiency}});
    return arr;
}

json read_bins_json(const std::vector<BinRead>& bins) {
    json arr = json::array();
    for (const auto& b : bins)
        arr.push_back({{"bin", b.bin},
                       {"window", json::array({b.window_start, b.window_end})},
                       {"stored", complex_json(b.stored)},
                       {"emitted", complex_json(b.emitted)},
                       {"sign", b.sign},
                       {"emitted_probability", b.emitted_probability},
                       {"efficiency", b.efficiency}});
    return arr;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

RunResult run_store(const Context& ctx, const json& block) {
    check_keys(block, {"packet", "parts", "bins", "bin_duration", "time_reversed", "passive",
                       "read_delay", "read_tail", "loss_rate", "subradiant_leak_rate",
                       "pulse_failure", "drive"},
               "store");
    const auto& p = ctx.p("store");
    const std::size_t parts = count(block, "parts", 4, "store");
    const std::size_t bins = count(block, "bins", parts > 0 ? parts - 1 : 0, "store");
    const double T = ctx.time(block, "bin_duration", 2.5 * p.tau_R, "store");
    if (!(T > 0.0)) throw ConfigError("store.bin_duration: must be positive");
    const bool reversed = boolean(block, "time_reversed", false, "store");
    const bool passive = boolean(block, "passive", false, "store");
    const double delay = ctx.time(block, "read_delay", 0.0, "store");
    if (delay < 0.0) throw ConfigError("store.read_delay: must be non-negative");
    StorageOptions opts = parse_storage_options(block, ctx, "store");
    const double dt = snap_dt(T, ctx.dt());
    const double tail = ctx.time(block, "read_tail", 0.0, "store");
    if (tail < 0.0) throw ConfigError("store.read_tail: must be non-negative");
    opts.read_tail = std::ceil(tail / dt - 1e-9) * dt;

    const double write_end = static_cast<double>(bins) * T;
    json packet_block = block.contains("packet") ? block["packet"] : json{{"shape", "rectangular"}};
    const PacketSpec pk = parse_packet(packet_block, ctx, "store.packet", 0.0, write_end);

    PulsePlan write, read;
    try {
        write = passive ? plan_passive(parts, bins, T, PlanPhase::write)
                        : plan_write(parts, bins, T);
        read = passive ? plan_passive(parts, bins, T, PlanPhase::read, reversed, write_end + delay)
                       : plan_read(parts, bins, T, reversed, write_end + delay);
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("store: ") + e.what());
    }
    const TimeGrid grid(0.0, dt, static_cast<std::size_t>(std::llround(write_end / dt)) + 1);
    const StorageReport rep = end_to_end(pk.fn, grid, write, read, p, opts);

    json res;
    res["params"] = params_json(p);
    res["dt"] = dt;
    res["input_norm"] = rep.input_norm;
    res["write_efficiency"] = rep.write_efficiency;
    res["read_efficiency"] = rep.read_efficiency;
    res["total_efficiency"] = rep.total_efficiency;
    res["fidelity"] = optional_json(rep.fidelity);
    res["bin_probability_match"] = optional_json(rep.bin_probability_match);
    res["write_bins"] = write_bins_json(rep.write_bins);
    res["read_bins"] = read_bins_json(rep.read_bins);
    res["pre_read_emission"] = rep.read.pre_read_emission;
    res["pulse_failure"] = opts.pulse_failure;
    double flux = 0.0;
    for (const auto& f : rep.write.flux)
        flux = std::max(flux, std::abs(f.input_consumed - f.transmitted - f.stored));
    res["max_flux_residual"] = flux;
    res["warnings"] = warnings_json(validate_regime(p, pk.duration, 0.0));

    json refs = json::object();
    const double x = T / p.tau_R;
    const double g = capture_amplitude(x);
    for (std::size_t n = 0; n < rep.write_bins.size(); ++n) {
        const std::string key = "bin" + std::to_string(n + 1);
        if (pk.shape == "rectangular" && rep.write_bins[n].input_norm > 0.0)
            refs[key + "_write_efficiency"] = with_reference(rep.write_bins[n].efficiency, g * g, "closed_form");
    }
    for (const auto& b : rep.read_bins)
        if (opts.read_tail == 0.0 && delay == 0.0 && std::norm(b.stored) > 0.0)
            refs["bin" + std::to_string(b.bin + 1) + "_read_efficiency"] =
                with_reference(b.efficiency, -std::expm1(-x), "closed_form");
    const bool long_packet = pk.shape == "rectangular" && std::abs(pk.start) < 1e-6 * dt &&
                             std::abs(pk.end - write_end) < 1e-6 * dt;
    if (long_packet && std::abs(x - 2.5) < 0.05 && opts.loss_rate == 0.0 &&
        opts.subradiant_leak_rate == 0.0 && opts.pulse_failure == 0.0) {
        refs["write_efficiency"] = with_reference(rep.write_efficiency, 0.81, "published");
        refs["read_efficiency"] = with_reference(rep.read_efficiency, -std::expm1(-2.5), "published");
        refs["total_efficiency"] = with_reference(rep.total_efficiency, 0.75, "published");
    }
    if (pk.shape == "rising_exp" && bins == 1 && pk.end == write_end && pk.duration >= 10.0 * p.tau_R) {
        refs["write_efficiency"] = with_reference(rep.write_efficiency, 1.0, "published");
        refs["total_efficiency"] = with_reference(rep.total_efficiency, 1.0, "published");
    }
    res["references"] = refs;

    RunResult r;
    r.report = res;
    r.summary = {{"write_efficiency", rep.write_efficiency},
                 {"read_efficiency", rep.read_efficiency},
                 {"total_efficiency", rep.total_efficiency},
                 {"fidelity", optional_json(rep.fidelity)},
                 {"max_flux_residual", flux}};
    r.files.emplace_back("trajectory.tsv", trajectory_table(rep.write.segments));
    r.files.emplace_back("readout.tsv", trajectory_table(rep.read.segments));
    r.files.emplace_back("plan.json", dump({{"write", plan_to_json(write)}, {"read", plan_to_json(read)}}));
    return r;
}

RunResult run_qubit(const Context& ctx, const json& block) {
    check_keys(block, {"alpha", "beta", "separation", "phases", "loss_rate", "subradiant_leak_rate",
                       "pulse_failure", "drive"},
               "qubit");
    const auto& p = ctx.p("qubit");
    const double sep = ctx.time(block, "separation", 20.0 * p.tau_R, "qubit");
    const StorageOptions opts = parse_storage_options(block, ctx, "qubit");
    std::vector<std::pair<Complex, Complex>> inputs;
    std::vector<double> phases;
    if (block.contains("phases")) {
        if (block.contains("alpha") || block.contains("beta"))
            throw ConfigError("qubit: phases replaces alpha and beta");
        const std::size_t n = count(block, "phases", 16, "qubit");
        if (n == 0) throw ConfigError("qubit.phases: must be positive");
        for (std::size_t k = 0; k < n; ++k) {
            const double phi = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
            phases.push_back(phi);
            inputs.emplace_back(Complex{1.0 / std::sqrt(2.0), 0.0}, std::polar(1.0 / std::sqrt(2.0), phi));
        }
    } else {
        const Complex a = block.contains("alpha") ? complex_value(block["alpha"], "qubit.alpha")
                                                  : Complex{1.0 / std::sqrt(2.0), 0.0};
        const Complex b = block.contains("beta") ? complex_value(block["beta"], "qubit.beta")
                                                 : Complex{1.0 / std::sqrt(2.0), 0.0};
        if (std::abs(std::norm(a) + std::norm(b) - 1.0) > 1e-9)
            throw ConfigError("qubit: |alpha|^2 + |beta|^2 must be 1");
        inputs.emplace_back(a, b);
    }
    if (!(sep >= 10.0 * p.tau_R)) throw ConfigError("qubit.separation: must be at least 10 tau_R");

    json runs = json::array();
    double f_min = 1e300, f_max = -1e300, recall_min = 1e300;
    RunResult r;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto q = timebin_qubit_fidelity(inputs[i].first, inputs[i].second, sep, p, opts);
        json row = {{"alpha", complex_json(inputs[i].first)},
                    {"beta", complex_json(inputs[i].second)},
                    {"fidelity", q.fidelity},
                    {"recall_overlap", q.recall_overlap},
                    {"total_efficiency", q.report.total_efficiency}};
        if (!phases.empty()) row["phase"] = phases[i];
        runs.push_back(row);
        f_min = std::min(f_min, q.fidelity);
        f_max = std::max(f_max, q.fidelity);
        recall_min = std::min(recall_min, q.recall_overlap);
        if (i == 0) r.files.emplace_back("readout.tsv", trajectory_table(q.report.read.segments));
    }
    json res;
    res["params"] = params_json(p);
    res["separation"] = sep;
    res["pulse_failure"] = opts.pulse_failure;
    res["runs"] = runs;
    res["fidelity_min"] = f_min;
    res["fidelity_max"] = f_max;
    res["recall_overlap_min"] = recall_min;
    json refs = json::object();
    if (opts.pulse_failure == 0.0 && opts.loss_rate == 0.0 && opts.subradiant_leak_rate == 0.0)
        refs["fidelity_min"] = with_reference(f_min, 1.0, "ideal");
    else
        refs["recall_overlap_min"] =
            with_reference(recall_min, std::pow(1.0 - opts.pulse_failure, 3), "closed_form");
    res["references"] = refs;
    r.report = res;
    r.summary = {{"fidelity_min", f_min}, {"fidelity_max", f_max}, {"recall_overlap_min", recall_min}};
    return r;
}

struct NamedEntry {
    NamedState state;
    const char* name;
    int parts;
};
const NamedEntry kNamed[] = {
    {NamedState::one_sym, "one_sym", 1},         {NamedState::two_sym, "two_sym", 1},
    {NamedState::one_AminusB, "one_AminusB", 2}, {NamedState::two_AminusB, "two_AminusB", 2},
    {NamedState::two_prime, "two_prime", 2},     {NamedState::two_ABCD, "two_ABCD", 4},
};

RunResult run_rates(const Context& ctx, const json& block) {
    check_keys(block, {"N", "brute_force"}, "rates");
    std::vector<int> sizes;
    if (!block.contains("N")) sizes = {4, 8, 12};
    else if (block["N"].is_number_integer()) sizes = {block["N"].get<int>()};
    else if (block["N"].is_array())
        for (const auto& v : block["N"]) {
            if (!v.is_number_integer()) throw ConfigError("rates.N: expected integers");
            sizes.push_back(v.get<int>());
        }
    else throw ConfigError("rates.N: expected an integer or a list");
    const bool brute = boolean(block, "brute_force", true, "rates");

    // Factors are in units of mu/T1; a unit-rate parameter set evaluates them.
    EnsembleParams unit;
    unit.mu = 1.0;
    unit.excited_lifetime = 1.0;

    json table = json::array();
    json summary = json::object();
    for (int n : sizes) {
        if (n < 4 || n % 4 != 0) throw ConfigError("rates.N: each N must be a positive multiple of 4");
        for (const auto& e : kNamed) {
            const Partition part = Partition::equal(n, e.parts);
            const PartitionedState s = named_state(e.state, part);
            const double factor = emission_rate(s, unit);
            const double formula = named_state_rate_factor(e.state, n);
            json row = {{"N", n}, {"state", e.name}, {"factor", factor}};
            row["published_formula"] = with_reference(factor, formula, "published");
            if (formula == 0.0) row["published_formula"]["rel_dev"] = factor;
            if (ctx.params) row["rate"] = factor * ctx.params->mode_rate();
            if (brute && n <= 16) {
                const double oracle = brute_force_rate(to_full_basis(s), unit);
                row["oracle"] = with_reference(factor, oracle, "oracle");
                if (oracle == 0.0) row["oracle"]["rel_dev"] = factor;
            }
            table.push_back(row);
            summary["N" + std::to_string(n) + "_" + e.name] = factor;
        }
    }
    RunResult r;
    r.report = {{"rates", table}, {"units", "mu/T1"}};
    if (ctx.params) {
        r.report["params"] = params_json(*ctx.params);
        r.report["mode_rate"] = ctx.params->mode_rate();
    }
    r.summary = summary;
    return r;
}

json plan_report_json(const PlanReport& rep) {
    json j;
    j["ok"] = rep.ok;
    j["violations"] = rep.violations;
    json rows = json::array();
    for (const auto& r : rep.stored_rows) rows.push_back({{"index", r.index}, {"sign", r.sign}});
    j["stored_rows"] = rows;
    j["orthogonality"] = rep.orthogonality;
    j["emission_order"] = rep.emission_order;
    j["emission_signs"] = rep.emission_signs;
    json frames = json::array();
    for (const auto& f : rep.frames) frames.push_back(f.str());
    j["frames"] = frames;
    return j;
}

std::string flip_sequence(const PulsePlan& plan) {
    std::string s;
    for (const auto& e : plan.events) {
        if (!s.empty()) s += ",";
        s += e.mask.flip_labels();
    }
    return s;
}

std::string modulator_sequence(const PulsePlan& plan) {
    std::string s;
    for (const auto& e : plan.events) {
        if (!s.empty()) s += ",";
        s += modulator_string(e.modulators);
    }
    return s;
}

json string_reference(const std::string& value, const std::string& reference) {
    return {{"value", value}, {"reference", reference}, {"matches", value == reference}, {"source", "published"}};
}

RunResult run_schedule(const Context& ctx, const json& block) {
    check_keys(block, {"parts", "bins", "bin_duration", "time_reversed", "passive", "pi_pair"}, "schedule");
    const std::size_t parts = count(block, "parts", 4, "schedule");
    const std::size_t bins = count(block, "bins", parts > 0 ? parts - 1 : 0, "schedule");
    std::optional<double> default_T;
    if (ctx.params) default_T = 2.5 * ctx.params->tau_R;
    const double T = ctx.time(block, "bin_duration", default_T, "schedule");
    const bool reversed = boolean(block, "time_reversed", false, "schedule");
    const bool passive = boolean(block, "passive", false, "schedule");

    PulsePlan write, read, active_write, active_read;
    try {
        active_write = plan_write(parts, bins, T);
        active_read = plan_read(parts, bins, T, reversed, active_write.end());
        write = passive ? plan_passive(parts, bins, T, PlanPhase::write) : active_write;
        read = passive ? plan_passive(parts, bins, T, PlanPhase::read, reversed, active_write.end())
                       : active_read;
    } catch (const PreconditionError& e) {
        throw ConfigError(std::string("schedule: ") + e.what());
    }
    const PlanReport wrep = verify_plan(write);
    const PlanReport rrep = verify_plan(write, read);
    json res;
    res["write"] = plan_report_json(wrep);
    res["read"] = plan_report_json(rrep);
    res["write_flips"] = flip_sequence(active_write);
    res["read_flips"] = flip_sequence(active_read);
    json refs = json::object();
    if (passive) {
        res["write_modulators"] = modulator_sequence(write);
        res["read_modulators"] = modulator_sequence(read);
        // Cumulative frames of both schemes, event by event.
        bool same = true;
        SignPattern frame = SignPattern::all_plus(parts);
        for (std::size_t i = 0; i < active_write.events.size(); ++i) {
            frame = frame * active_write.events[i].mask;
            same = same && frame == write.events[i].mask;
        }
        for (std::size_t i = 0; i < active_read.events.size(); ++i) {
            frame = frame * active_read.events[i].mask;
            same = same && frame == read.events[i].mask;
        }
        res["passive_matches_active"] = same;
        if (parts == 4 && bins == 3) {
            refs["write_modulators"] = string_reference(res["write_modulators"], "ABCD,~AB~CD,A~BC~D");
            if (!reversed) refs["read_modulators"] = string_reference(res["read_modulators"], "~A~B~CD,ABC~D,~AB~C~D");
        }
    }
    if (parts == 4 && bins == 3) {
        refs["write_flips"] = string_reference(res["write_flips"], "BD,BC,BD");
        refs["read_flips"] = string_reference(res["read_flips"], reversed ? "AC,BC,BD" : "AD,BD,BC");
    }
    res["references"] = refs;

    RunResult r;
    if (block.contains("pi_pair")) {
        const auto& pp = block["pi_pair"];
        check_keys(pp, {"k1", "k2", "m_index", "sample_length", "wavelength"}, "schedule.pi_pair");
        PiPairConfig cfg;
        auto vec = [&](const char* key) {
            std::array<double, 3> v{};
            if (!pp.contains(key) || !pp[key].is_array() || pp[key].size() != 3)
                throw ConfigError(std::string("schedule.pi_pair.") + key + ": expected [x, y, z]");
            for (int i = 0; i < 3; ++i) v[i] = number(pp[key][i], std::string("schedule.pi_pair.") + key);
            return v;
        };
        cfg.k1 = vec("k1");
        cfg.k2 = vec("k2");
        if (!pp.contains("m_index") || !pp["m_index"].is_number_integer())
            throw ConfigError("schedule.pi_pair.m_index: expected an integer");
        cfg.m_index = pp["m_index"].get<int>();
        auto length = [&](const char* key, double EnsembleParams::*field) {
            if (pp.contains(key)) return number(pp[key], std::string("schedule.pi_pair.") + key);
            if (!ctx.params) throw ConfigError(std::string("schedule.pi_pair.") + key + ": required");
            return (*ctx.params).*field;
        };
        cfg.sample_length = length("sample_length", &EnsembleParams::sample_length);
        cfg.wavelength = length("wavelength", &EnsembleParams::wavelength);
        const auto pr = validate_pi_pair(cfg);
        res["pi_pair"] = {{"valid", pr.valid},           {"m_estimate", pr.m_estimate},
                          {"m_residual", pr.m_residual}, {"smallness", pr.smallness},
                          {"along_axis", pr.along_axis}, {"subradiant", pr.subradiant},
                          {"resulting_sign", pr.resulting_sign}, {"issues", pr.issues}};
        r.summary["pi_pair_valid"] = pr.valid;
    }
    r.report = res;
    r.summary["write_ok"] = wrep.ok;
    r.summary["read_ok"] = rrep.ok;
    r.files.emplace_back("plan.json", dump({{"write", plan_to_json(write)}, {"read", plan_to_json(read)}}));
    return r;
}

RunResult run_threelevel(const Context& ctx, const json& block) {
    (void)ctx;
    check_keys(block, {"g_a", "g_b", "alpha", "omega_r", "c0", "c1", "t"}, "threelevel");
    if (!block.contains("g_a")) throw ConfigError("threelevel.g_a: required");
    const double g_a = parse_rate(block["g_a"], std::nullopt, "threelevel.g_a");
    DriveConfig cfg;
    if (block.contains("omega_r")) {
        if (block.contains("g_b") || block.contains("alpha"))
            throw ConfigError("threelevel: give omega_r or (g_b, alpha), not both");
        cfg = DriveConfig::from_rabi(g_a, parse_rate(block["omega_r"], g_a, "threelevel.omega_r"));
    } else {
        if (!block.contains("g_b") || !block.contains("alpha"))
            throw ConfigError("threelevel: needs omega_r or both g_b and alpha");
        cfg = DriveConfig{g_a, parse_rate(block["g_b"], g_a, "threelevel.g_b"),
                          complex_value(block["alpha"], "threelevel.alpha")};
    }
    const Complex c0 = block.contains("c0") ? complex_value(block["c0"], "threelevel.c0") : Complex{1.0, 0.0};
    const Complex c1 = block.contains("c1") ? complex_value(block["c1"], "threelevel.c1") : Complex{0.0, 0.0};
    if (std::abs(std::norm(c0) + std::norm(c1) - 1.0) > 1e-12)
        throw ConfigError("threelevel: |c0|^2 + |c1|^2 must be 1");

    const auto out = pulse_outcome(c0, c1, cfg);
    const double p = failure_probability(c0, cfg);
    auto state_json = [](const ThreeLevelState& s) {
        return json{{"ground_photon", complex_json(s.ground_photon)},
                    {"excited", complex_json(s.excited)},
                    {"leak", complex_json(s.leak)},
                    {"norm", s.norm_squared()}};
    };
    json res;
    res["omega_r"] = cfg.omega_r();
    res["omega"] = cfg.omega();
    res["t_p"] = out.t_p;
    res["final"] = state_json(out.final_state);
    res["failure_probability"] = p;
    res["leak_probability"] = std::norm(out.final_state.leak);
    if (block.contains("t")) res["at_t"] = state_json(evolve(c0, c1, cfg, parse_time(block["t"], std::nullopt, "threelevel.t")));
    json refs = json::object();
    refs["leak_probability"] = with_reference(std::norm(out.final_state.leak), p, "closed_form");
    res["references"] = refs;
    RunResult r;
    r.report = res;
    r.summary = {{"failure_probability", p},
                 {"leak_probability", res["leak_probability"]},
                 {"omega_r", cfg.omega_r()},
                 {"t_p", out.t_p}};
    return r;
}

json load_block(const json& config, const std::string& scenario) {
    std::vector<std::string> present;
    for (const auto& s : kScenarios)
        if (config.contains(s)) present.push_back(s);
    if (present.size() > 1) throw ConfigError("config has more than one scenario block");
    if (present.empty()) return json::object();
    if (present.front() != scenario) {
        if (scenario == "params") return json::object();
        throw ConfigError("config block '" + present.front() + "' does not match scenario '" + scenario + "'");
    }
    return config[scenario];
}

std::pair<double, std::string> split_value(const std::string& text, const std::string& field) {
    static const std::regex re(R"(^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*([A-Za-z_µ]*)\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re) || (!m[1].matched && m[2].length() == 0))
        throw ConfigError(field + ": cannot parse '" + text + "'");
    const double v = m[1].matched ? std::stod(m[1].str()) : 1.0;
    return {v, m[2].str()};
}

}  // namespace

double parse_time(const json& value, std::optional<double> tau_R, const std::string& field) {
    if (value.is_number()) return value.get<double>();
    if (!value.is_string()) throw ConfigError(field + ": expected a time");
    const auto [v, unit] = split_value(value.get<std::string>(), field);
    if (unit.empty() || unit == "s") return v;
    if (unit == "ms") return v * 1e-3;
    if (unit == "us" || unit == "µs") return v * 1e-6;
    if (unit == "ns") return v * 1e-9;
    if (unit == "ps") return v * 1e-12;
    if (unit == "tau_R") {
        if (!tau_R) throw ConfigError(field + ": the tau_R unit needs an ensemble");
        return v * *tau_R;
    }
    throw ConfigError(field + ": unknown time unit '" + unit + "'");
}

double parse_rate(const json& value, std::optional<double> g_a, const std::string& field) {
    if (value.is_number()) return value.get<double>();
    if (!value.is_string()) throw ConfigError(field + ": expected a rate");
    const auto [v, unit] = split_value(value.get<std::string>(), field);
    if (unit.empty()) return v;
    if (unit == "g_a") {
        if (!g_a) throw ConfigError(field + ": the g_a unit is not available here");
        return v * *g_a;
    }
    throw ConfigError(field + ": unknown rate unit '" + unit + "'");
}

EnsembleInput parse_ensemble(const json& block) {
    check_keys(block, {"wavelength", "sample_length", "cross_section", "beam_diameter", "excited_lifetime",
                       "atom_count", "number_density", "inhomogeneous_linewidth", "pit_width"},
               "ensemble");
    EnsembleInput in;
    auto req = [&](const char* key) {
        if (!block.contains(key)) throw ConfigError(std::string("ensemble.") + key + ": required");
        return number(block[key], std::string("ensemble.") + key);
    };
    auto opt = [&](const char* key) -> std::optional<double> {
        if (!block.contains(key)) return std::nullopt;
        return number(block[key], std::string("ensemble.") + key);
    };
    in.wavelength = req("wavelength");
    in.sample_length = req("sample_length");
    in.cross_section = opt("cross_section");
    in.beam_diameter = opt("beam_diameter");
    if (!block.contains("excited_lifetime")) throw ConfigError("ensemble.excited_lifetime: required");
    in.excited_lifetime = parse_time(block["excited_lifetime"], std::nullopt, "ensemble.excited_lifetime");
    in.atom_count = opt("atom_count");
    in.number_density = opt("number_density");
    in.inhomogeneous_linewidth = opt("inhomogeneous_linewidth");
    in.pit_width = opt("pit_width");
    return in;
}

std::string scenario_of(const json& config, const std::string& override_scenario) {
    std::string s = override_scenario;
    if (s.empty()) {
        if (!config.contains("scenario") || !config["scenario"].is_string())
            throw ConfigError("config: 'scenario' is required");
        s = config["scenario"].get<std::string>();
    }
    if (std::find(kScenarios.begin(), kScenarios.end(), s) == kScenarios.end())
        throw ConfigError("unknown scenario '" + s + "'");
    return s;
}

RunResult run(const json& config, const fs::path& base_dir, const std::string& override_scenario) {
    if (!config.is_object()) throw ConfigError("config must be an object");
    std::set<std::string> allowed = {"scenario", "ensemble", "grid"};
    allowed.insert(kScenarios.begin(), kScenarios.end());
    check_keys(config, allowed, "config");
    const std::string scenario = scenario_of(config, override_scenario);
    const json block = load_block(config, scenario);

    Context ctx;
    ctx.config = config;
    ctx.base_dir = base_dir;
    if (config.contains("ensemble")) ctx.params = derive_params(parse_ensemble(config["ensemble"]));
    if (config.contains("grid")) {
        check_keys(config["grid"], {"dt"}, "grid");
        if (config["grid"].contains("dt")) {
            ctx.dt_override = parse_time(config["grid"]["dt"], ctx.tau_R(), "grid.dt");
            if (!(*ctx.dt_override > 0.0)) throw ConfigError("grid.dt: must be positive");
        }
    }

    RunResult r;
    if (scenario == "params") r = run_params(ctx, block);
    else if (scenario == "scatter") r = run_scatter(ctx, block);
    else if (scenario == "store") r = run_store(ctx, block);
    else if (scenario == "qubit") r = run_qubit(ctx, block);
    else if (scenario == "rates") r = run_rates(ctx, block);
    else if (scenario == "schedule") r = run_schedule(ctx, block);
    else r = run_threelevel(ctx, block);
    r.scenario = scenario;
    r.report["scenario"] = scenario;
    return r;
}

std::string resolve_axis(const json& config, const std::string& scenario, const std::string& axis) {
    if (axis == "tau_ph") {
        if (scenario != "scatter" && scenario != "store")
            throw ConfigError("sweep axis tau_ph needs the scatter or store scenario");
        return scenario + ".packet.duration";
    }
    if (axis == "Omega_R" || axis == "omega_r") {
        if (scenario != "threelevel") throw ConfigError("sweep axis " + axis + " needs the threelevel scenario");
        return "threelevel.omega_r";
    }
    if (axis == "density") return "ensemble.number_density";
    if (axis == "bin_duration") {
        if (scenario != "store" && scenario != "schedule")
            throw ConfigError("sweep axis bin_duration needs the store or schedule scenario");
        return scenario + ".bin_duration";
    }
    if (axis == "separation") {
        if (scenario != "qubit") throw ConfigError("sweep axis separation needs the qubit scenario");
        return "qubit.separation";
    }
    // Dotted path to an existing scalar.
    const json* node = &config;
    std::stringstream ss(axis);
    std::string part;
    while (std::getline(ss, part, '.')) {
        if (!node->is_object() || !node->contains(part)) throw ConfigError("unknown sweep axis '" + axis + "'");
        node = &(*node)[part];
    }
    if (!node->is_number() && !node->is_string()) throw ConfigError("sweep axis '" + axis + "' is not a scalar");
    return axis;
}

json with_axis_value(const json& config, const std::string& path, const std::string& value) {
    json out = config;
    json* node = &out;
    std::stringstream ss(path);
    std::string part;
    std::vector<std::string> parts;
    while (std::getline(ss, part, '.')) parts.push_back(part);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        if (!node->contains(parts[i])) (*node)[parts[i]] = json::object();
        node = &(*node)[parts[i]];
    }
    json v;
    char* end = nullptr;
    const double d = std::strtod(value.c_str(), &end);
    if (end != value.c_str() && *end == '\0') v = d;
    else v = value;
    (*node)[parts.back()] = v;
    if (path == "ensemble.number_density") out["ensemble"].erase("atom_count");
    if (path == "scatter.packet.duration" || path == "store.packet.duration") {
        json& packet = (*node);
        if (!packet.contains("shape")) packet["shape"] = "rectangular";
        else if (packet["shape"] != "rectangular") throw ConfigError("sweep axis tau_ph needs a rectangular packet");
    }
    return out;
}

std::vector<RunResult> sweep(const json& config, const fs::path& base_dir, const std::string& override_scenario,
                             const std::string& axis, const std::vector<std::string>& values) {
    if (values.empty()) throw ConfigError("sweep: no values");
    const std::string scenario = scenario_of(config, override_scenario);
    const std::string path = resolve_axis(config, scenario, axis);
    std::vector<json> configs;
    for (const auto& v : values) configs.push_back(with_axis_value(config, path, v));

    std::vector<RunResult> results(values.size());
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t first = 0; first < values.size(); first += workers) {
        std::vector<std::future<RunResult>> batch;
        for (std::size_t i = first; i < std::min(values.size(), first + workers); ++i)
            batch.push_back(std::async(std::launch::async, [&, i] { return run(configs[i], base_dir, scenario); }));
        for (std::size_t k = 0; k < batch.size(); ++k) results[first + k] = batch[k].get();
    }
    return results;
}

namespace {

std::string tsv_value(const json& v) {
    if (v.is_null()) return "NA";
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number()) return format_number(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

}  // namespace

std::string sweep_table(const std::string& axis, const std::vector<std::string>& values,
                        const std::vector<RunResult>& runs) {
    std::vector<std::string> keys;
    if (!runs.empty())
        for (const auto& [k, _] : runs.front().summary.items()) keys.push_back(k);
    std::string out = axis;
    for (const auto& k : keys) out += "\t" + k;
    out += "\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
        out += values[i];
        for (const auto& k : keys) out += "\t" + tsv_value(runs[i].summary.value(k, json(nullptr)));
        out += "\n";
    }
    return out;
}

std::string surface_table(const std::string& axis, const std::vector<std::string>& values,
                          const std::vector<RunResult>& runs) {
    std::string out = axis + "\tt\tabs_c2\n";
    for (std::size_t i = 0; i < runs.size(); ++i)
        for (const auto& [t, c2] : runs[i].surface)
            out += values[i] + "\t" + format_number(t) + "\t" + format_number(c2) + "\n";
    return out;
}

std::string dump(json doc) {
    round_numbers(doc);
    return doc.dump(2) + "\n";
}

namespace {

json load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path.string() + "': " + e.what());
    }
}

std::vector<std::string> split_values(const std::string& list) {
    std::vector<std::string> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) throw ConfigError("sweep: empty value");
        out.push_back(item.substr(b, e - b + 1));
    }
    return out;
}

void print_summary(const json& summary, std::ostream& os) {
    for (const auto& [k, v] : summary.items()) os << k << " = " << tsv_value(v) << "\n";
}

int execute(const std::string& config_path, const std::string& out_dir, const std::string& scenario,
            const std::string& sweep_spec, bool quiet) {
    const fs::path cfg_path(config_path);
    const json config = load_config(cfg_path);
    const fs::path base = cfg_path.has_parent_path() ? cfg_path.parent_path() : fs::path(".");
    const fs::path out(out_dir);

    auto ensure_out = [&] {
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec || !fs::is_directory(out)) throw IoError("cannot create output directory '" + out.string() + "'");
    };

    if (!sweep_spec.empty()) {
        const auto eq = sweep_spec.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--sweep expects axis=v1,v2,...");
        const std::string axis = sweep_spec.substr(0, eq);
        const auto values = split_values(sweep_spec.substr(eq + 1));
        const auto runs = sweep(config, base, scenario, axis, values);
        ensure_out();
        json doc = {{"axis", axis}, {"values", values}, {"runs", json::array()}};
        for (const auto& r : runs) doc["runs"].push_back(r.report);
        write_text(out / "report.json", dump(doc));
        write_text(out / "sweep.tsv", sweep_table(axis, values, runs));
        if (!runs.empty() && runs.front().scenario == "scatter")
            write_text(out / "surface.tsv", surface_table(axis, values, runs));
        if (!quiet) std::cout << sweep_table(axis, values, runs);
        return 0;
    }

    const RunResult r = run(config, base, scenario);
    ensure_out();
    write_text(out / "report.json", dump(r.report));
    for (const auto& [name, content] : r.files) write_text(out / name, content);
    if (!quiet) print_summary(r.summary, std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Collective-emission storage simulator"};
    std::string config_path, out_dir = ".", scenario, sweep_spec;
    bool quiet = false;
    app.add_option("--config", config_path, "Configuration document (JSON)")->required();
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--scenario", scenario, "Override the configured scenario");
    app.add_option("--sweep", sweep_spec, "Parameter sweep, axis=v1,v2,...");
    app.add_flag("--quiet", quiet, "Suppress the summary on stdout");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    try {
        return execute(config_path, out_dir, scenario, sweep_spec, quiet);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "domain error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const RegimeError& e) {
        std::cerr << "regime error: " << e.what() << "\n";
        return 3;
    } catch (const ResolutionError& e) {
        std::cerr << "resolution error: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace subrad::cli
