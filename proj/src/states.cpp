#include "subrad/states.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <cmath>
#include <numeric>

namespace subrad {

namespace {

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

void for_each_tuple(const Partition& part, int total, const std::function<void(const ExcitationTuple&)>& fn) {
    ExcitationTuple n(part.parts(), 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == part.parts()) {
            if (left <= part.size(i)) {
                n[i] = left;
                fn(n);
            }
            return;
        }
        for (int k = 0; k <= std::min(left, part.size(i)); ++k) {
            n[i] = k;
            rec(i + 1, left - k);
        }
    };
    rec(0, total);
}

// Symmetric n-excitation state of all atoms of `part`, written per part.
PartitionedState symmetric_partitioned(int n, const Partition& part) {
    PartitionedState s(part);
    const double total = binomial(part.atoms(), n);
    for_each_tuple(part, n, [&](const ExcitationTuple& t) {
        double w = 1.0;
        for (std::size_t i = 0; i < t.size(); ++i) w *= binomial(part.size(i), t[i]);
        s.set(t, std::sqrt(w / total));
    });
    return s;
}

constexpr double kNormTol = 1e-10;

}  // namespace

Partition::Partition(std::vector<int> sizes) : sizes_(std::move(sizes)) {
    if (sizes_.empty()) throw PreconditionError("Partition: need at least one part");
    for (int s : sizes_)
        if (s <= 0) throw PreconditionError("Partition: part sizes must be positive");
    total_ = std::accumulate(sizes_.begin(), sizes_.end(), 0);
}

Partition Partition::equal(int n_atoms, int parts) {
    if (parts <= 0 || n_atoms <= 0 || n_atoms % parts != 0)
        throw PreconditionError("Partition::equal: N must be divisible by the number of parts");
    return Partition(std::vector<int>(static_cast<std::size_t>(parts), n_atoms / parts));
}

bool Partition::is_equal() const {
    return std::all_of(sizes_.begin(), sizes_.end(), [&](int s) { return s == sizes_.front(); });
}

int Partition::offset(std::size_t part) const {
    return std::accumulate(sizes_.begin(), sizes_.begin() + static_cast<std::ptrdiff_t>(part), 0);
}

PartitionedState::PartitionedState(Partition partition) : partition_(std::move(partition)) {}

Complex PartitionedState::amplitude(const ExcitationTuple& n) const {
    const auto it = amps_.find(n);
    return it == amps_.end() ? Complex{} : it->second;
}

void PartitionedState::set(const ExcitationTuple& n, Complex a) {
    if (n.size() != partition_.parts()) throw PreconditionError("PartitionedState: tuple length mismatch");
    for (std::size_t i = 0; i < n.size(); ++i)
        if (n[i] < 0 || n[i] > partition_.size(i))
            throw PreconditionError("PartitionedState: excitation number exceeds part size");
    if (a == Complex{}) amps_.erase(n);
    else amps_[n] = a;
}

void PartitionedState::add(const ExcitationTuple& n, Complex a) { set(n, amplitude(n) + a); }

double PartitionedState::norm_squared() const {
    double acc = 0.0;
    for (const auto& [n, a] : amps_) acc += std::norm(a);
    return acc;
}

std::optional<int> PartitionedState::excitation_number() const {
    std::optional<int> out;
    for (const auto& [n, a] : amps_) {
        if (std::abs(a) < 1e-15) continue;
        const int total = std::accumulate(n.begin(), n.end(), 0);
        if (out && *out != total) return std::nullopt;
        out = total;
    }
    return out ? out : std::optional<int>(0);
}

PartitionedState PartitionedState::operator*(Complex k) const {
    PartitionedState s(partition_);
    for (const auto& [n, a] : amps_) s.set(n, k * a);
    return s;
}

PartitionedState PartitionedState::operator+(const PartitionedState& o) const {
    if (!(o.partition_ == partition_)) throw PreconditionError("PartitionedState: partition mismatch");
    PartitionedState s = *this;
    for (const auto& [n, a] : o.amps_) s.add(n, a);
    return s;
}

FullBasisState::FullBasisState(int n) : n_atoms(n) {
    if (n < 1 || n > kMaxAtoms)
        throw PreconditionError("FullBasisState: atom count must be in [1, 24]");
    amplitudes.assign(std::size_t{1} << n, Complex{});
}

double FullBasisState::norm_squared() const {
    double acc = 0.0;
    for (auto a : amplitudes) acc += std::norm(a);
    return acc;
}

std::optional<int> FullBasisState::excitation_number() const {
    std::optional<int> out;
    for (std::size_t b = 0; b < amplitudes.size(); ++b) {
        if (std::abs(amplitudes[b]) < 1e-15) continue;
        const int n = std::popcount(b);
        if (out && *out != n) return std::nullopt;
        out = n;
    }
    return out ? out : std::optional<int>(0);
}

FullBasisState symmetric_state(int n, int n_atoms) {
    if (n < 0 || n > n_atoms) throw PreconditionError("symmetric_state: n out of range");
    FullBasisState s(n_atoms);
    const double a = 1.0 / std::sqrt(binomial(n_atoms, n));
    for (std::size_t b = 0; b < s.amplitudes.size(); ++b)
        if (std::popcount(b) == n) s.amplitudes[b] = a;
    return s;
}

PartitionedState apply_sign_pattern(const PartitionedState& state, const SignPattern& pattern) {
    if (pattern.size() != state.partition().parts())
        throw PreconditionError("apply_sign_pattern: pattern length does not match part count");
    PartitionedState out(state.partition());
    for (const auto& [n, a] : state.amplitudes()) {
        int sign = 1;
        for (std::size_t i = 0; i < n.size(); ++i)
            if (pattern[i] < 0 && n[i] % 2 == 1) sign = -sign;
        out.set(n, static_cast<double>(sign) * a);
    }
    return out;
}

FullBasisState apply_sign_pattern(const FullBasisState& state, const SignPattern& pattern,
                                  const Partition& partition) {
    if (pattern.size() != partition.parts() || partition.atoms() != state.n_atoms)
        throw PreconditionError("apply_sign_pattern: dimension mismatch");
    std::size_t flip_mask = 0;
    for (std::size_t p = 0; p < partition.parts(); ++p)
        if (pattern[p] < 0)
            for (int j = 0; j < partition.size(p); ++j) flip_mask |= std::size_t{1} << (partition.offset(p) + j);
    FullBasisState out = state;
    for (std::size_t b = 0; b < out.amplitudes.size(); ++b)
        if (std::popcount(b & flip_mask) % 2 == 1) out.amplitudes[b] = -out.amplitudes[b];
    return out;
}

PartitionedState lower(const PartitionedState& state) {
    const auto& part = state.partition();
    PartitionedState out(part);
    for (const auto& [n, a] : state.amplitudes()) {
        for (std::size_t i = 0; i < n.size(); ++i) {
            if (n[i] == 0) continue;
            ExcitationTuple m = n;
            --m[i];
            // R_i |n> = sqrt(n (M - n + 1)) |n - 1> for a Dicke state of M atoms.
            out.add(m, a * std::sqrt(static_cast<double>(n[i]) * (part.size(i) - n[i] + 1)));
        }
    }
    return out;
}

FullBasisState lower(const FullBasisState& state) {
    FullBasisState out(state.n_atoms);
    for (std::size_t b = 0; b < state.amplitudes.size(); ++b) {
        const Complex a = state.amplitudes[b];
        if (a == Complex{}) continue;
        for (int j = 0; j < state.n_atoms; ++j) {
            const std::size_t bit = std::size_t{1} << j;
            if (b & bit) out.amplitudes[b ^ bit] += a;
        }
    }
    return out;
}

double emission_rate(const PartitionedState& state, const EnsembleParams& p) {
    if (std::abs(state.norm_squared() - 1.0) > kNormTol)
        throw PreconditionError("emission_rate: state is not normalized");
    const auto n = state.excitation_number();
    if (!n) throw PreconditionError("emission_rate: state mixes excitation numbers");
    if (*n == 0) return 0.0;
    return p.mode_rate() * lower(state).norm_squared();
}

double brute_force_rate(const FullBasisState& state, const EnsembleParams& p) {
    if (state.n_atoms > FullBasisState::kMaxAtoms)
        throw PreconditionError("brute_force_rate: too many atoms");
    const auto lowered = lower(state);
    double acc = 0.0;
    for (auto a : lowered.amplitudes) acc += std::norm(a);
    return p.mode_rate() * acc;
}

PartitionedState named_state(NamedState name, const Partition& partition) {
    const auto require_parts = [&](std::size_t k) {
        if (partition.parts() != k || !partition.is_equal())
            throw PreconditionError("named_state: needs " + std::to_string(k) + " equal parts");
    };
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    switch (name) {
    case NamedState::one_sym:
        return symmetric_partitioned(1, partition);
    case NamedState::two_sym:
        return symmetric_partitioned(2, partition);
    case NamedState::one_AminusB: {
        require_parts(2);
        PartitionedState s(partition);
        s.set({1, 0}, inv_sqrt2);
        s.set({0, 1}, -inv_sqrt2);
        return s;
    }
    case NamedState::two_AminusB:
        require_parts(2);
        return apply_sign_pattern(symmetric_partitioned(2, partition), SignPattern::parse("+-"));
    case NamedState::two_prime: {
        require_parts(2);
        PartitionedState s(partition);
        s.set({2, 0}, inv_sqrt2);
        s.set({0, 2}, -inv_sqrt2);
        return s;
    }
    case NamedState::two_ABCD: {
        require_parts(4);
        const int m = partition.size(0);
        const auto half = apply_sign_pattern(symmetric_partitioned(2, Partition({m, m})),
                                             SignPattern::parse("+-"));
        PartitionedState s(partition);
        for (const auto& [n, a] : half.amplitudes()) {
            s.add({n[0], n[1], 0, 0}, inv_sqrt2 * a);
            s.add({0, 0, n[0], n[1]}, -inv_sqrt2 * a);
        }
        return s;
    }
    }
    throw PreconditionError("named_state: unknown state");
}

double named_state_rate_factor(NamedState name, int n) {
    const double N = n;
    switch (name) {
    case NamedState::one_sym: return N;
    case NamedState::two_sym: return 2.0 * (N - 1.0);
    case NamedState::one_AminusB: return 0.0;
    case NamedState::two_AminusB: return 2.0 / (N - 1.0);
    case NamedState::two_prime: return N - 2.0;
    case NamedState::two_ABCD: return 4.0 / (N - 2.0);
    }
    return 0.0;
}

FullBasisState to_full_basis(const PartitionedState& state) {
    const auto& part = state.partition();
    FullBasisState out(part.atoms());
    std::vector<std::size_t> masks(part.parts());
    for (std::size_t p = 0; p < part.parts(); ++p)
        for (int j = 0; j < part.size(p); ++j) masks[p] |= std::size_t{1} << (part.offset(p) + j);
    for (std::size_t b = 0; b < out.amplitudes.size(); ++b) {
        ExcitationTuple n(part.parts());
        double w = 1.0;
        for (std::size_t p = 0; p < part.parts(); ++p) {
            n[p] = std::popcount(b & masks[p]);
            w *= binomial(part.size(p), n[p]);
        }
        const Complex a = state.amplitude(n);
        if (a != Complex{}) out.amplitudes[b] = a / std::sqrt(w);
    }
    return out;
}

Projection project_to_partitioned(const FullBasisState& state, const Partition& partition) {
    if (partition.atoms() != state.n_atoms)
        throw PreconditionError("project_to_partitioned: atom count mismatch");
    std::vector<std::size_t> masks(partition.parts());
    for (std::size_t p = 0; p < partition.parts(); ++p)
        for (int j = 0; j < partition.size(p); ++j) masks[p] |= std::size_t{1} << (partition.offset(p) + j);
    std::map<ExcitationTuple, Complex> acc;
    for (std::size_t b = 0; b < state.amplitudes.size(); ++b) {
        const Complex a = state.amplitudes[b];
        if (a == Complex{}) continue;
        ExcitationTuple n(partition.parts());
        double w = 1.0;
        for (std::size_t p = 0; p < partition.parts(); ++p) {
            n[p] = std::popcount(b & masks[p]);
            w *= binomial(partition.size(p), n[p]);
        }
        acc[n] += a / std::sqrt(w);
    }
    Projection out{PartitionedState(partition), 0.0};
    for (const auto& [n, a] : acc) out.state.set(n, a);
    out.captured_norm = out.state.norm_squared();
    return out;
}

}  // namespace subrad
