#include "subrad/schedule.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "subrad/core.hpp"

namespace subrad {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && std::has_single_bit(n); }

void check_counts(std::size_t parts, std::size_t bins, double bin_duration) {
    if (!is_power_of_two(parts))
        throw PreconditionError("plan: part count must be a power of two >= 2");
    if (bins < 1 || bins > parts - 1)
        throw PreconditionError("plan: " + std::to_string(parts) + " parts support at most " +
                                std::to_string(parts - 1) + " subradiant bins");
    if (!(bin_duration > 0.0)) throw PreconditionError("plan: bin duration must be positive");
}

// Row that stores bin n after the canonical write: h_bins * h_(n-1).
SignPattern canonical_stored(const HadamardMatrix& h, std::size_t bins, std::size_t n) {
    return h.row(bins) * h.row(n);
}

bool near_time(double a, double b, double scale) { return std::abs(a - b) <= 1e-9 * scale; }

}  // namespace

HadamardMatrix::HadamardMatrix(std::size_t order) : order_(order), entries_(order * order) {
    if (!is_power_of_two(order))
        throw PreconditionError("Hadamard order must be a power of two >= 2");
    entries_[0] = 1;
    for (std::size_t k = 1; k < order; k *= 2) {
        for (std::size_t r = 0; r < k; ++r) {
            for (std::size_t c = 0; c < k; ++c) {
                const auto v = entries_[r * order + c];
                entries_[r * order + c + k] = v;
                entries_[(r + k) * order + c] = v;
                entries_[(r + k) * order + c + k] = static_cast<std::int8_t>(-v);
            }
        }
    }
}

SignPattern HadamardMatrix::row(std::size_t r) const {
    if (r >= order_) throw PreconditionError("Hadamard row out of range");
    return SignPattern(std::vector<std::int8_t>(entries_.begin() + static_cast<std::ptrdiff_t>(r * order_),
                                                entries_.begin() + static_cast<std::ptrdiff_t>((r + 1) * order_)));
}

HadamardMatrix sylvester(std::size_t order) { return HadamardMatrix(order); }

std::optional<RowRef> hadamard_row_of(const SignPattern& pattern) {
    const std::size_t n = pattern.size();
    if (!is_power_of_two(n)) return std::nullopt;
    const int sign = pattern[0];
    std::size_t index = 0;
    for (std::size_t bit = 1; bit < n; bit <<= 1)
        if (pattern[bit] != sign) index |= bit;
    for (std::size_t c = 0; c < n; ++c) {
        const int expected = sign * ((std::popcount(index & c) % 2) ? -1 : 1);
        if (pattern[c] != expected) return std::nullopt;
    }
    return RowRef{index, sign};
}

bool PulsePlan::passive() const {
    return !events.empty() && std::all_of(events.begin(), events.end(), [](const PulseEvent& e) {
        return e.kind == PulseKind::modulator_set;
    });
}

PulsePlan plan_write(std::size_t parts, std::size_t bins, double bin_duration, double start,
                     PulseKind kind) {
    check_counts(parts, bins, bin_duration);
    if (kind == PulseKind::modulator_set) throw PreconditionError("plan_write: use plan_passive");
    const auto h = sylvester(parts);
    PulsePlan plan{parts, bins, PlanPhase::write, false, start, bin_duration, {}};
    for (std::size_t n = 1; n <= bins; ++n)
        plan.events.push_back({start + static_cast<double>(n) * bin_duration,
                               h.row(n) * h.row(n - 1), kind, {}});
    return plan;
}

PulsePlan plan_read(std::size_t parts, std::size_t bins, double bin_duration, bool time_reversed,
                    double start, std::vector<int> emission_signs, PulseKind kind) {
    check_counts(parts, bins, bin_duration);
    if (kind == PulseKind::modulator_set) throw PreconditionError("plan_read: use plan_passive");
    if (emission_signs.empty()) emission_signs.assign(bins, 1);
    if (emission_signs.size() != bins) throw PreconditionError("plan_read: one emission sign per bin");
    for (int s : emission_signs)
        if (s != 1 && s != -1) throw PreconditionError("plan_read: emission signs must be +1 or -1");

    const auto h = sylvester(parts);
    PulsePlan plan{parts, bins, PlanPhase::read, time_reversed, start, bin_duration, {}};
    SignPattern previous = SignPattern::all_plus(parts);
    for (std::size_t step = 0; step < bins; ++step) {
        const std::size_t bin = time_reversed ? bins - 1 - step : step;
        // Cumulative read product that maps the stored row onto -sign * (all-plus).
        SignPattern cumulative = canonical_stored(h, bins, bin);
        if (emission_signs[step] > 0) cumulative = -cumulative;
        plan.events.push_back({start + static_cast<double>(step) * bin_duration,
                               cumulative * previous, kind, {}});
        previous = cumulative;
    }
    return plan;
}

SignPattern modulator_frame(const std::vector<bool>& on) {
    std::vector<std::int8_t> frame(on.size());
    int sign = 1;
    for (std::size_t i = on.size(); i-- > 0;) {
        if (on[i]) sign = -sign;
        frame[i] = static_cast<std::int8_t>(sign);
    }
    return SignPattern(std::move(frame));
}

std::vector<bool> modulators_for_frame(const SignPattern& frame) {
    std::vector<bool> on(frame.size());
    for (std::size_t i = 0; i < frame.size(); ++i) {
        const int downstream = i + 1 < frame.size() ? frame[i + 1] : 1;
        on[i] = frame[i] != downstream;
    }
    return on;
}

std::string modulator_string(const std::vector<bool>& on) {
    std::string s;
    for (std::size_t i = 0; i < on.size(); ++i) {
        if (!on[i]) s += '~';
        s += part_label(i);
    }
    return s;
}

std::vector<bool> parse_modulator_string(const std::string& text, std::size_t parts) {
    std::vector<bool> on;
    bool bar = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (ch == '~') {
            bar = true;
            continue;
        }
        if (ch < 'A' || ch > 'Z') throw PreconditionError("modulator string: unexpected character");
        if (part_label(on.size()) != std::string(1, ch))
            throw PreconditionError("modulator string: parts must appear in order");
        on.push_back(!bar);
        bar = false;
    }
    if (on.size() != parts) throw PreconditionError("modulator string: wrong number of parts");
    return on;
}

PulsePlan plan_passive(std::size_t parts, std::size_t bins, double bin_duration, PlanPhase phase,
                       bool time_reversed, double start) {
    const PulsePlan write = plan_write(parts, bins, bin_duration,
                                       phase == PlanPhase::write ? start : start - bins * bin_duration);
    SignPattern frame = SignPattern::all_plus(parts);
    PulsePlan active = write;
    if (phase == PlanPhase::read) {
        for (const auto& e : write.events) frame = frame * e.mask;
        active = plan_read(parts, bins, bin_duration, time_reversed, start);
    }
    PulsePlan plan = active;
    for (auto& e : plan.events) {
        frame = frame * e.mask;
        e.kind = PulseKind::modulator_set;
        e.mask = frame;
        e.modulators = modulators_for_frame(frame);
    }
    return plan;
}

PulsePlan to_active_equivalent(const PulsePlan& plan, const SignPattern& initial_frame) {
    PulsePlan out = plan;
    SignPattern frame = initial_frame;
    for (auto& e : out.events) {
        if (e.kind != PulseKind::modulator_set) {
            frame = frame * e.mask;
            continue;
        }
        const SignPattern target = e.modulators.empty() ? e.mask : modulator_frame(e.modulators);
        e.mask = target * frame;
        e.kind = PulseKind::two_pi;
        e.modulators.clear();
        frame = target;
    }
    return out;
}

namespace {

void structural_checks(const PulsePlan& plan, PlanReport& rep) {
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    if (plan.events.size() != plan.bins)
        fail("expected " + std::to_string(plan.bins) + " events, found " +
             std::to_string(plan.events.size()));
    for (std::size_t i = 0; i < plan.events.size(); ++i) {
        const auto& e = plan.events[i];
        if (e.mask.size() != plan.parts) fail("event " + std::to_string(i) + ": mask length mismatch");
        if (i > 0 && !(e.time > plan.events[i - 1].time))
            fail("event times are not strictly increasing at event " + std::to_string(i));
        const double expected = plan.start + static_cast<double>(plan.phase == PlanPhase::write ? i + 1 : i) *
                                                 plan.bin_duration;
        if (!near_time(e.time, expected, plan.bin_duration))
            fail("event " + std::to_string(i) + " is not on its bin boundary");
        if (e.kind == PulseKind::modulator_set && !e.modulators.empty() &&
            !(modulator_frame(e.modulators) == e.mask))
            fail("event " + std::to_string(i) + ": modulator states do not produce the stated frame");
    }
}

// Write replay on already-active (flip) events. Returns stored patterns.
std::vector<SignPattern> replay_write(const PulsePlan& plan, PlanReport& rep) {
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    const std::size_t bins = std::min(plan.bins, plan.events.size());
    std::vector<SignPattern> stored;
    SignPattern frame = SignPattern::all_plus(plan.parts);
    for (const auto& e : plan.events) {
        frame = frame * e.mask;
        rep.frames.push_back(frame);
    }
    for (std::size_t n = 0; n < bins; ++n) {
        SignPattern p = SignPattern::all_plus(plan.parts);
        for (std::size_t m = n; m < bins; ++m) {
            p = p * plan.events[m].mask;
            if (p.is_uniform())
                fail("bin " + std::to_string(n) + " is superradiant again after event " + std::to_string(m));
        }
        stored.push_back(p);
        if (const auto ref = hadamard_row_of(p)) rep.stored_rows.push_back(*ref);
        else fail("bin " + std::to_string(n) + " is not stored in a Hadamard row");
    }
    rep.orthogonality.assign(stored.size(), std::vector<int>(stored.size()));
    for (std::size_t i = 0; i < stored.size(); ++i)
        for (std::size_t j = 0; j < stored.size(); ++j) {
            rep.orthogonality[i][j] = stored[i].dot(stored[j]);
            if (i < j && rep.orthogonality[i][j] != 0)
                fail("stored rows of bins " + std::to_string(i) + " and " + std::to_string(j) +
                     " are not orthogonal");
        }
    return stored;
}

}  // namespace

PlanReport verify_plan(const PulsePlan& plan) {
    if (plan.phase == PlanPhase::write) {
        PlanReport rep;
        structural_checks(plan, rep);
        if (!rep.ok) return rep;
        const PulsePlan active = to_active_equivalent(plan, SignPattern::all_plus(plan.parts));
        replay_write(active, rep);
        return rep;
    }
    return verify_plan(plan_write(plan.parts, plan.bins, plan.bin_duration,
                                  plan.start - static_cast<double>(plan.bins) * plan.bin_duration),
                       plan);
}

PlanReport verify_plan(const PulsePlan& write, const PulsePlan& read) {
    PlanReport rep;
    auto fail = [&](const std::string& msg) {
        rep.ok = false;
        rep.violations.push_back(msg);
    };
    if (write.phase != PlanPhase::write || read.phase != PlanPhase::read)
        throw PreconditionError("verify_plan: expected a write plan and a read plan");
    if (write.parts != read.parts || write.bins != read.bins) {
        fail("read plan does not match write plan dimensions");
        return rep;
    }
    structural_checks(write, rep);
    structural_checks(read, rep);
    if (read.start < write.end() - 1e-9 * write.bin_duration) fail("read starts before write ends");
    if (!rep.ok) return rep;

    PlanReport write_rep;
    const PulsePlan active_write = to_active_equivalent(write, SignPattern::all_plus(write.parts));
    auto current = replay_write(active_write, write_rep);
    rep.stored_rows = write_rep.stored_rows;
    rep.orthogonality = write_rep.orthogonality;
    for (auto& v : write_rep.violations) fail("write: " + v);

    const SignPattern write_frame = write_rep.frames.empty() ? SignPattern::all_plus(write.parts)
                                                             : write_rep.frames.back();
    const PulsePlan active_read = to_active_equivalent(read, write_frame);
    SignPattern frame = write_frame;
    std::vector<bool> emitted(current.size(), false);
    for (std::size_t step = 0; step < active_read.events.size(); ++step) {
        const auto& mask = active_read.events[step].mask;
        frame = frame * mask;
        rep.frames.push_back(frame);
        std::vector<std::size_t> radiating;
        for (std::size_t b = 0; b < current.size(); ++b) {
            current[b] = current[b] * mask;
            if (current[b].is_uniform()) radiating.push_back(b);
        }
        if (radiating.size() != 1) {
            fail("read step " + std::to_string(step) + " makes " + std::to_string(radiating.size()) +
                 " bins superradiant");
            continue;
        }
        const std::size_t b = radiating.front();
        if (emitted[b]) fail("bin " + std::to_string(b) + " is emitted twice");
        emitted[b] = true;
        rep.emission_order.push_back(b);
        rep.emission_signs.push_back(current[b][0]);
    }
    if (rep.ok) {
        std::vector<std::size_t> expected(read.bins);
        std::iota(expected.begin(), expected.end(), std::size_t{0});
        if (read.time_reversed) std::reverse(expected.begin(), expected.end());
        if (rep.emission_order != expected)
            fail(std::string("emission order is not the ") +
                 (read.time_reversed ? "reversal" : "identity"));
    }
    return rep;
}

PiPairReport validate_pi_pair(const PiPairConfig& cfg) {
    PiPairReport rep;
    if (!(cfg.sample_length > 0.0) || !(cfg.wavelength > 0.0)) {
        rep.issues.push_back("sample_length and wavelength must be positive");
        return rep;
    }
    std::array<double, 3> dk{};
    for (int i = 0; i < 3; ++i) dk[i] = cfg.k1[i] - cfg.k2[i];
    const double mag = std::sqrt(dk[0] * dk[0] + dk[1] * dk[1] + dk[2] * dk[2]);
    const double transverse = std::hypot(dk[0], dk[1]);
    const double unit = 2.0 * kPi / cfg.sample_length;

    rep.m_estimate = mag / unit;
    rep.m_residual = std::abs(rep.m_estimate - std::round(rep.m_estimate));
    rep.smallness = mag / (2.0 * kPi / cfg.wavelength);
    rep.along_axis = mag == 0.0 || transverse <= 1e-9 * mag;
    rep.subradiant = std::round(rep.m_estimate) != 0.0;

    const double target = unit * std::abs(cfg.m_index);
    const bool matches = std::abs(mag - target) <= 1e-9 * std::max(target, unit);
    if (!matches) {
        std::ostringstream os;
        os << "|k1 - k2| corresponds to m = " << rep.m_estimate << ", not " << cfg.m_index;
        rep.issues.push_back(os.str());
    }
    if (rep.m_residual > 1e-9) rep.issues.push_back("|k1 - k2| L_z / 2pi is not an integer");
    if (!(rep.smallness < 1e-2)) rep.issues.push_back("|k1 - k2| is not small compared to omega_0/c");
    if (!rep.along_axis) rep.issues.push_back("k1 - k2 is not along the sample axis");
    if (!rep.subradiant) rep.issues.push_back("m = 0 leaves the superradiant mode unchanged");
    rep.valid = rep.issues.empty();
    return rep;
}

}  // namespace subrad
