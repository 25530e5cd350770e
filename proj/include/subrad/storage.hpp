#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "subrad/dynamics.hpp"
#include "subrad/packet.hpp"
#include "subrad/params.hpp"
#include "subrad/schedule.hpp"

namespace subrad {

// Stored single excitation expanded over the Hadamard rows of the current
// frame. Row 0 is the superradiant (active) row and the only one coupled to
// the longitudinal field; a flip mask sign * h_k moves row r to row r xor k.
struct ModeLedger {
    std::size_t parts = 0;
    std::vector<Complex> amplitudes;
    // Bin whose excitation sits in each row, or -1.
    std::vector<int> bin_of_row;
    // Absolute modulator frame (all-plus for active schemes).
    SignPattern frame;
    double time = 0.0;  // s

    static ModeLedger empty(std::size_t parts, double time = 0.0);

    Complex active() const { return amplitudes.at(0); }
    SignPattern row_pattern(std::size_t r) const;
    double norm_squared() const;
    // Applies a flip mask; throws PreconditionError unless it is +-(Hadamard row).
    void apply(const SignPattern& mask);
};

struct StorageOptions {
    double loss_rate = 0.0;              // s^-1, extra population decay of every row
    double subradiant_leak_rate = 0.0;   // s^-1, residual emission of the subradiant rows
    double pulse_failure = 0.0;          // per-pulse failure probability
    double read_tail = 0.0;              // s, read window appended after the last read bin
};

// Integration piece between two pulse events. The input and output fields use
// one-sided limits at the ends, so adjacent segments share their end times.
struct Segment {
    TimeGrid grid;
    WavePacket f_in;
    std::vector<Complex> c;  // active-row amplitude
    WavePacket f_out;
};

struct FluxCheck {
    double time = 0.0;
    double input_consumed = 0.0;
    double transmitted = 0.0;
    double stored = 0.0;  // ledger norm
};

struct BinWrite {
    std::size_t bin = 0;
    double input_norm = 0.0;              // photon probability arriving in the bin
    Complex input_amplitude{0.0, 0.0};    // projection on the flat bin mode
    Complex stored{0.0, 0.0};             // c_n after the last write pulse
    std::size_t row = 0;
    double efficiency = 0.0;              // |c_n|^2 / input_norm (0 if no input)
};

struct WriteResult {
    ModeLedger ledger;
    WavePacket transmitted;
    std::vector<Segment> segments;
    std::vector<BinWrite> bins;
    std::vector<FluxCheck> flux;
    double input_norm = 0.0;
};

// Grid must start at plan.start and reach plan.end(); events must sit on
// nodes. Throws PreconditionError for unverified plans.
WriteResult simulate_write(const PacketShape& f_in, const TimeGrid& grid, const PulsePlan& plan,
                           const EnsembleParams& p, const StorageOptions& opts = {});
WriteResult simulate_write(const WavePacket& f_in, const PulsePlan& plan, const EnsembleParams& p,
                           const StorageOptions& opts = {});

struct BinRead {
    std::size_t bin = 0;
    double window_start = 0.0;
    double window_end = 0.0;
    Complex stored{0.0, 0.0};   // amplitude of the bin when the read starts
    Complex emitted{0.0, 0.0};  // e_n: projection of the output on the normalized read kernel
    int sign = 0;               // sign picked up by the bin from the read pulses
    double emitted_probability = 0.0;
    double efficiency = 0.0;    // emitted_probability / |stored|^2
};

struct ReadResult {
    ModeLedger ledger;
    WavePacket output;
    std::vector<Segment> segments;
    std::vector<BinRead> bins;  // in emission order
    double pre_read_emission = 0.0;  // residual active population emitted before the read
};

// Reads with F_in = 0 on `grid` (which must start at plan.start). Every read
// pulse must bring a stored bin into the active row; otherwise the plan does
// not match the ledger and PreconditionError is thrown.
ReadResult simulate_read(const ModeLedger& ledger, const PulsePlan& plan, const EnsembleParams& p,
                         const TimeGrid& grid, const StorageOptions& opts = {});

struct StorageReport {
    double input_norm = 0.0;
    double write_efficiency = 0.0;
    double read_efficiency = 0.0;
    double total_efficiency = 0.0;
    std::vector<BinWrite> write_bins;
    std::vector<BinRead> read_bins;
    WavePacket output;
    // |<target|output>|^2 / (|target|^2 |output|^2); absent for empty packets.
    std::optional<double> fidelity;
    // Classical overlap of per-bin input and output probabilities.
    std::optional<double> bin_probability_match;
    WriteResult write;
    ReadResult read;
};

// Read grid spans [read_plan.start, read_plan.end() + opts.read_tail] with the
// write grid's step.
StorageReport end_to_end(const PacketShape& f_in, const TimeGrid& write_grid,
                         const PulsePlan& write_plan, const PulsePlan& read_plan,
                         const EnsembleParams& p, const StorageOptions& opts = {});

struct QubitResult {
    double fidelity = 0.0;        // normalized overlap with the ideal recalled qubit
    double recall_overlap = 0.0;  // the same overlap without normalizing the output
    StorageReport report;
};

// alpha |early> + beta |late>: two rising exponentials of length `separation`
// ending at t1 = separation and t2 = 2 separation, each captured into its own
// subradiant row of a four-part sample and then read forward.
QubitResult timebin_qubit_fidelity(Complex alpha, Complex beta, double separation,
                                   const EnsembleParams& p, const StorageOptions& opts = {});

}  // namespace subrad
