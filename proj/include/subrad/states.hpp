#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "subrad/core.hpp"
#include "subrad/params.hpp"
#include "subrad/sign_pattern.hpp"

namespace subrad {

// Split of N atoms into contiguous spatial parts A, B, ...
class Partition {
public:
    explicit Partition(std::vector<int> part_sizes);
    static Partition equal(int n_atoms, int parts);

    std::size_t parts() const { return sizes_.size(); }
    int size(std::size_t part) const { return sizes_[part]; }
    const std::vector<int>& sizes() const { return sizes_; }
    int atoms() const { return total_; }
    bool is_equal() const;
    // First atom index of each part (atom j is bit j of a basis index).
    int offset(std::size_t part) const;

    bool operator==(const Partition& o) const { return sizes_ == o.sizes_; }

private:
    std::vector<int> sizes_;
    int total_ = 0;
};

using ExcitationTuple = std::vector<int>;

// Superposition of products of symmetric (Dicke) states of each part,
// |n_A, n_B, ...>, stored as tuple -> amplitude.
class PartitionedState {
public:
    explicit PartitionedState(Partition partition);

    const Partition& partition() const { return partition_; }
    const std::map<ExcitationTuple, Complex>& amplitudes() const { return amps_; }

    Complex amplitude(const ExcitationTuple& n) const;
    void set(const ExcitationTuple& n, Complex a);
    void add(const ExcitationTuple& n, Complex a);

    double norm_squared() const;
    // Total excitation number if every nonzero component carries the same one.
    std::optional<int> excitation_number() const;

    PartitionedState operator*(Complex k) const;
    PartitionedState operator+(const PartitionedState& o) const;

private:
    Partition partition_;
    std::map<ExcitationTuple, Complex> amps_;
};

// Full 2^N amplitude vector over individual-atom basis states. Test oracle
// only, capped at 24 atoms.
struct FullBasisState {
    static constexpr int kMaxAtoms = 24;

    int n_atoms = 0;
    std::vector<Complex> amplitudes;

    explicit FullBasisState(int n);
    double norm_squared() const;
    std::optional<int> excitation_number() const;
};

// Equal-amplitude superposition of all n-excitation basis states.
FullBasisState symmetric_state(int n, int n_atoms);

PartitionedState apply_sign_pattern(const PartitionedState& state, const SignPattern& pattern);
FullBasisState apply_sign_pattern(const FullBasisState& state, const SignPattern& pattern,
                                  const Partition& partition);

// R = sum_j b_j applied in each representation.
PartitionedState lower(const PartitionedState& state);
FullBasisState lower(const FullBasisState& state);

// (mu / T1) * ||R psi||^2 for a state of definite excitation number. Zero for
// the ground state. Throws PreconditionError for mixed excitation numbers or
// unnormalized states.
double emission_rate(const PartitionedState& state, const EnsembleParams& p);

// Same quantity evaluated in the full basis.
double brute_force_rate(const FullBasisState& state, const EnsembleParams& p);

enum class NamedState {
    one_sym,      // |1>
    two_sym,      // |2>
    one_AminusB,  // (|1_A,0_B> - |0_A,1_B>)/sqrt2
    two_AminusB,  // |2> with the |1_A,1_B> term sign-flipped
    two_prime,    // (|2_A,0_B> - |0_A,2_B>)/sqrt2
    two_ABCD,     // (|2_{A-B},0_{C+D}> - |0_{A+B},2_{C-D}>)/sqrt2
};

// one_sym/two_sym accept any partition; the A-B states need two equal parts
// and two_ABCD four equal parts.
PartitionedState named_state(NamedState name, const Partition& partition);

// Rate in units of mu/T1 for the named states, as closed-form functions of N.
double named_state_rate_factor(NamedState name, int n_atoms);

FullBasisState to_full_basis(const PartitionedState& state);

struct Projection {
    PartitionedState state;
    double captured_norm = 0.0;  // ||projection||^2
};
// Projection onto the span of per-part Dicke products.
Projection project_to_partitioned(const FullBasisState& state, const Partition& partition);

}  // namespace subrad
