#include "subrad/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace subrad {

double round_sig(double x, int digits) {
    if (!std::isfinite(x) || x == 0.0) return x;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return std::strtod(buf, nullptr);
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void round_numbers(nlohmann::json& doc) {
    if (doc.is_number_float()) {
        doc = round_sig(doc.get<double>());
    } else if (doc.is_structured()) {
        for (auto& v : doc) round_numbers(v);
    }
}

namespace {

const char* kind_name(PulseKind k) {
    switch (k) {
        case PulseKind::two_pi: return "two_pi";
        case PulseKind::pi_pair: return "pi_pair";
        case PulseKind::modulator_set: return "modulator_set";
    }
    return "two_pi";
}

PulseKind kind_from(const std::string& s) {
    if (s == "two_pi") return PulseKind::two_pi;
    if (s == "pi_pair") return PulseKind::pi_pair;
    if (s == "modulator_set") return PulseKind::modulator_set;
    throw ConfigError("plan: unknown event kind '" + s + "'");
}

}  // namespace

nlohmann::json plan_to_json(const PulsePlan& plan) {
    nlohmann::json doc;
    doc["parts"] = plan.parts;
    doc["bins"] = plan.bins;
    doc["phase"] = plan.phase == PlanPhase::write ? "write" : "read";
    doc["time_reversed"] = plan.time_reversed;
    doc["start"] = plan.start;
    doc["bin_duration"] = plan.bin_duration;
    doc["events"] = nlohmann::json::array();
    for (const auto& e : plan.events) {
        nlohmann::json ev;
        ev["time"] = e.time;
        ev["kind"] = kind_name(e.kind);
        ev["mask"] = e.mask.str();
        if (e.kind == PulseKind::modulator_set) ev["modulators"] = modulator_string(e.modulators);
        else ev["parts_flipped"] = e.mask.flip_labels();
        doc["events"].push_back(ev);
    }
    return doc;
}

PulsePlan plan_from_json(const nlohmann::json& doc) {
    try {
        PulsePlan plan;
        plan.parts = doc.at("parts").get<std::size_t>();
        plan.bins = doc.at("bins").get<std::size_t>();
        const auto phase = doc.at("phase").get<std::string>();
        if (phase != "write" && phase != "read") throw ConfigError("plan: phase must be write or read");
        plan.phase = phase == "write" ? PlanPhase::write : PlanPhase::read;
        plan.time_reversed = doc.value("time_reversed", false);
        plan.start = doc.value("start", 0.0);
        plan.bin_duration = doc.at("bin_duration").get<double>();
        for (const auto& ev : doc.at("events")) {
            PulseEvent e;
            e.time = ev.at("time").get<double>();
            e.kind = kind_from(ev.value("kind", std::string("two_pi")));
            e.mask = SignPattern::parse(ev.at("mask").get<std::string>());
            if (ev.contains("modulators"))
                e.modulators = parse_modulator_string(ev["modulators"].get<std::string>(), plan.parts);
            plan.events.push_back(std::move(e));
        }
        return plan;
    } catch (const nlohmann::json::exception& ex) {
        throw ConfigError(std::string("plan: ") + ex.what());
    } catch (const PreconditionError& ex) {
        throw ConfigError(std::string("plan: ") + ex.what());
    }
}

namespace {

void append_row(std::string& out, double t, Complex fin, Complex c, Complex fout) {
    const double v[7] = {t, fin.real(), fin.imag(), c.real(), c.imag(), fout.real(), fout.imag()};
    for (int i = 0; i < 7; ++i) {
        if (i) out += '\t';
        out += format_number(v[i] == 0.0 ? 0.0 : v[i]);
    }
    out += '\n';
}

const char* kHeader = "t\tre_F_in\tim_F_in\tre_c\tim_c\tre_F_out\tim_F_out\n";

}  // namespace

std::string trajectory_table(const std::vector<Segment>& segments) {
    std::string out = kHeader;
    for (const auto& s : segments)
        for (std::size_t i = 0; i < s.grid.n_samples; ++i)
            append_row(out, s.grid.time(i), s.f_in.samples[i], s.c[i], s.f_out.samples[i]);
    return out;
}

std::string trajectory_table(const WavePacket& f_in, const AmplitudeTrajectory& traj,
                             const WavePacket& f_out) {
    if (!(f_in.grid == traj.grid) || !(f_out.grid == traj.grid))
        throw PreconditionError("trajectory_table: grid mismatch");
    std::string out = kHeader;
    for (std::size_t i = 0; i < traj.grid.n_samples; ++i)
        append_row(out, traj.grid.time(i), f_in.samples[i], traj.c[i], f_out.samples[i]);
    return out;
}

WavePacket read_samples_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("packet file '" + path.string() + "' cannot be opened");
    std::vector<double> t;
    std::vector<Complex> v;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double tt = 0.0, re = 0.0, im = 0.0;
        if (!(ls >> tt)) continue;
        if (!(ls >> re))
            throw ConfigError("packet file line " + std::to_string(line_no) + ": missing value");
        if (!(ls >> im)) im = 0.0;
        t.push_back(tt);
        v.emplace_back(re, im);
    }
    if (t.size() < 2) throw ConfigError("packet file '" + path.string() + "' has fewer than two samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0.0)) throw ConfigError("packet file: times must increase");
    for (std::size_t k = 0; k < t.size(); ++k)
        if (std::abs(t[k] - (t.front() + static_cast<double>(k) * dt)) > 1e-6 * dt)
            throw ConfigError("packet file: samples are not uniformly spaced");
    return WavePacket(TimeGrid(t.front(), dt, t.size()), std::move(v));
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

}  // namespace subrad
