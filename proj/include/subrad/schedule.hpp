#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "subrad/core.hpp"
#include "subrad/sign_pattern.hpp"

namespace subrad {

// Sylvester-Hadamard matrix of power-of-two order; row r, column j holds
// (-1)^popcount(r & j). Rows multiply as h_r * h_k = h_(r xor k).
class HadamardMatrix {
public:
    explicit HadamardMatrix(std::size_t order);

    std::size_t order() const { return order_; }
    int operator()(std::size_t r, std::size_t c) const { return entries_[r * order_ + c]; }
    SignPattern row(std::size_t r) const;

private:
    std::size_t order_;
    std::vector<std::int8_t> entries_;
};

// Recursive block construction H_2k = [[H_k, H_k], [H_k, -H_k]].
HadamardMatrix sylvester(std::size_t order);

// A pattern written as sign * (Hadamard row `index`).
struct RowRef {
    std::size_t index = 0;
    int sign = 1;
    bool operator==(const RowRef&) const = default;
};
std::optional<RowRef> hadamard_row_of(const SignPattern& pattern);

enum class PulseKind { two_pi, pi_pair, modulator_set };
enum class PlanPhase { write, read };

struct PulseEvent {
    double time = 0.0;  // s
    // two_pi / pi_pair: parts whose phase the event flips (-1 entries).
    // modulator_set: absolute phase frame produced by the modulator states.
    SignPattern mask;
    PulseKind kind = PulseKind::two_pi;
    // modulator_set only: on/off state of the modulator after each part.
    std::vector<bool> modulators;
};

// Write plans have bins intervals [start + n T, start + (n+1) T] with one
// event at the end of each. Read plans have one event at the start of each
// interval.
struct PulsePlan {
    std::size_t parts = 0;
    std::size_t bins = 0;
    PlanPhase phase = PlanPhase::write;
    bool time_reversed = false;
    double start = 0.0;
    double bin_duration = 0.0;
    std::vector<PulseEvent> events;

    double end() const { return start + static_cast<double>(bins) * bin_duration; }
    bool passive() const;
};

// Masks mask_n = h_n * h_(n-1), n = 1..bins. The excitation captured in bin n
// ends in row h_bins * h_(n-1).
PulsePlan plan_write(std::size_t parts, std::size_t bins, double bin_duration, double start = 0.0,
                     PulseKind kind = PulseKind::two_pi);

// Read masks chosen so that after the n-th pulse the bin scheduled for step n
// sits in -(all-plus) (emitted phase equal to the incoming one) or, where
// `emission_signs[n]` is -1, in +(all-plus). Forward order emits bins
// 1..bins; time reversal emits bins..1.
PulsePlan plan_read(std::size_t parts, std::size_t bins, double bin_duration, bool time_reversed,
                    double start = 0.0, std::vector<int> emission_signs = {},
                    PulseKind kind = PulseKind::two_pi);

// In-line phase modulators, one after each part, in propagation order. Light
// leaving part X passes the modulators after X, X+1, ..., so the phase frame
// seen by the exit is frame_X = (-1)^(number of "on" modulators at or after X).
SignPattern modulator_frame(const std::vector<bool>& on);
// Modulator states producing `frame` (unique).
std::vector<bool> modulators_for_frame(const SignPattern& frame);
// "A~BC~D" style: a letter is an "on" modulator, "~X" an "off" one.
std::string modulator_string(const std::vector<bool>& on);
std::vector<bool> parse_modulator_string(const std::string& text, std::size_t parts);

// Modulator configurations reproducing the cumulative frames of the active
// plan with the same arguments (write when `phase` is write, otherwise read).
PulsePlan plan_passive(std::size_t parts, std::size_t bins, double bin_duration, PlanPhase phase,
                       bool time_reversed = false, double start = 0.0);

// Same frames expressed as phase flips. For read plans the initial frame is
// the final frame of the matching write plan.
PulsePlan to_active_equivalent(const PulsePlan& plan, const SignPattern& initial_frame);

struct PlanReport {
    bool ok = true;
    std::vector<std::string> violations;
    // Write: row that stores bin n after the last pulse (atomic frame).
    std::vector<RowRef> stored_rows;
    // Gram matrix of the stored rows (dot products).
    std::vector<std::vector<int>> orthogonality;
    // Read: bin emitted after read pulse n and its sign relative to the
    // stored amplitude.
    std::vector<std::size_t> emission_order;
    std::vector<int> emission_signs;
    // Cumulative frame after each event.
    std::vector<SignPattern> frames;
};

// Replays the plan on symbolic sign patterns. Read plans are checked against
// the canonical write plan for the same (parts, bins).
PlanReport verify_plan(const PulsePlan& plan);
PlanReport verify_plan(const PulsePlan& write, const PulsePlan& read);

struct PiPairConfig {
    std::array<double, 3> k1{};  // m^-1
    std::array<double, 3> k2{};
    double sample_length = 0.0;  // m
    int m_index = 0;
    double wavelength = 0.0;     // m, sets omega_0 / c = 2 pi / lambda
};

struct PiPairReport {
    bool valid = false;
    double m_estimate = 0.0;   // |k1 - k2| L_z / 2 pi
    double m_residual = 0.0;   // distance of m_estimate to the nearest integer
    double smallness = 0.0;    // |k1 - k2| / (omega_0 / c)
    bool along_axis = false;
    bool subradiant = false;   // m != 0
    int resulting_sign = -1;   // |1_q> -> -|1_(q + k1 - k2)>
    std::vector<std::string> issues;
};

PiPairReport validate_pi_pair(const PiPairConfig& cfg);

}  // namespace subrad
