#include "subrad/params.hpp"

#include <cmath>
#include <sstream>

namespace subrad {

namespace {

void require_positive(const std::string& field, double value) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        std::ostringstream os;
        os << "must be strictly positive and finite (got " << value << ")";
        throw DomainError(field, os.str());
    }
}

double resolve_cross_section(const EnsembleInput& in) {
    if (in.cross_section) {
        require_positive("cross_section", *in.cross_section);
        if (in.beam_diameter) {
            require_positive("beam_diameter", *in.beam_diameter);
            const double from_d = kPi * *in.beam_diameter * *in.beam_diameter / 4.0;
            if (std::abs(from_d - *in.cross_section) > 1e-3 * *in.cross_section)
                throw DomainError("beam_diameter", "inconsistent with cross_section");
        }
        return *in.cross_section;
    }
    if (in.beam_diameter) {
        require_positive("beam_diameter", *in.beam_diameter);
        return kPi * *in.beam_diameter * *in.beam_diameter / 4.0;
    }
    throw DomainError("cross_section", "either cross_section or beam_diameter is required");
}

}  // namespace

EnsembleParams derive_params(const EnsembleInput& in) {
    require_positive("wavelength", in.wavelength);
    require_positive("sample_length", in.sample_length);
    require_positive("excited_lifetime", in.excited_lifetime);
    const double S = resolve_cross_section(in);
    const double volume = S * in.sample_length;

    double n_atoms = 0.0;
    if (in.atom_count) {
        require_positive("atom_count", *in.atom_count);
        n_atoms = *in.atom_count;
        if (n_atoms < 1.0) throw DomainError("atom_count", "must be at least 1");
        if (in.number_density) {
            require_positive("number_density", *in.number_density);
            const double from_density = *in.number_density * volume;
            if (std::abs(from_density - n_atoms) > 1e-3 * n_atoms)
                throw DomainError("number_density",
                                  "disagrees with atom_count by more than 0.1%");
        }
    } else if (in.number_density) {
        require_positive("number_density", *in.number_density);
        n_atoms = *in.number_density * volume;
    } else {
        throw DomainError("atom_count", "either atom_count or number_density is required");
    }
    if (in.inhomogeneous_linewidth) require_positive("inhomogeneous_linewidth", *in.inhomogeneous_linewidth);
    if (in.pit_width) require_positive("pit_width", *in.pit_width);

    EnsembleParams p;
    p.wavelength = in.wavelength;
    p.sample_length = in.sample_length;
    p.cross_section = S;
    p.excited_lifetime = in.excited_lifetime;
    p.atom_count = n_atoms;
    p.number_density = n_atoms / volume;
    p.inhomogeneous_linewidth = in.inhomogeneous_linewidth;
    p.pit_width = in.pit_width;

    p.mu = 3.0 * in.wavelength * in.wavelength / (8.0 * kPi * S);
    p.tau_E = in.sample_length / kSpeedOfLight;
    p.tau_R = in.excited_lifetime / (n_atoms * p.mu);
    p.tau_c = std::sqrt(p.tau_R * p.tau_E);
    p.fresnel = S / (in.sample_length * in.wavelength);
    if (in.inhomogeneous_linewidth) p.t2_star = 1.0 / (kPi * *in.inhomogeneous_linewidth);
    return p;
}

double min_tau_r_for_pit(double pit_width) { return 1.0 / (2.0 * kPi * pit_width); }

std::vector<RegimeWarning> validate_regime(const EnsembleParams& p, double packet_duration,
                                           double pulse_duration) {
    constexpr double kMuchLess = 10.0;
    std::vector<RegimeWarning> out;
    auto warn = [&](std::string code, std::string msg) {
        out.push_back({std::move(code), std::move(msg)});
    };
    std::ostringstream os;

    if (p.tau_c / p.tau_E < kMuchLess) {
        os.str("");
        os << "tau_c/tau_E = " << p.tau_c / p.tau_E << " < 10: Born-Markov condition is marginal";
        warn("tau_c_vs_tau_E", os.str());
    }
    if (p.tau_R / p.tau_c < kMuchLess) {
        os.str("");
        os << "tau_R/tau_c = " << p.tau_R / p.tau_c << " < 10: collective decay not slow compared to tau_c";
        warn("tau_R_vs_tau_c", os.str());
    }
    if (packet_duration > 0.0 && packet_duration / p.tau_c < kMuchLess) {
        os.str("");
        os << "packet duration / tau_c = " << packet_duration / p.tau_c << " < 10";
        warn("packet_vs_tau_c", os.str());
    }
    if (pulse_duration > 0.0 && pulse_duration >= p.tau_R / kMuchLess) {
        os.str("");
        os << "2pi pulse duration " << pulse_duration << " s is not short compared to tau_R = "
           << p.tau_R << " s";
        warn("pulse_vs_tau_R", os.str());
    }
    if (p.fresnel < 0.2 || p.fresnel > 5.0) {
        os.str("");
        os << "Fresnel number " << p.fresnel << " outside [0.2, 5]: one-mode approximation doubtful";
        warn("fresnel", os.str());
    }
    if (p.t2_star && p.tau_R > *p.t2_star) {
        os.str("");
        os << "tau_R = " << p.tau_R << " s exceeds the inhomogeneous lifetime T2* = " << *p.t2_star
           << " s";
        warn("tau_R_vs_t2_star", os.str());
    }
    if (p.pit_width) {
        const double tau_min = min_tau_r_for_pit(*p.pit_width);
        if (p.tau_R < tau_min) {
            os.str("");
            os << "tau_R = " << p.tau_R << " s: for a " << *p.pit_width / 1e6
               << " MHz pit the superradiant decay must be slower than " << tau_min << " s";
            warn("tau_R_vs_pit", os.str());
        }
    }
    return out;
}

double density_for_tau_r(const EnsembleInput& input, double target_tau_r) {
    require_positive("target_tau_r", target_tau_r);
    require_positive("wavelength", input.wavelength);
    require_positive("sample_length", input.sample_length);
    require_positive("excited_lifetime", input.excited_lifetime);
    const double S = resolve_cross_section(input);
    const double mu = 3.0 * input.wavelength * input.wavelength / (8.0 * kPi * S);
    // tau_R = T1 / (density * S * L * mu)
    return input.excited_lifetime / (target_tau_r * mu * S * input.sample_length);
}

}  // namespace subrad
