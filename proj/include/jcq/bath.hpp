#pragma once

#include <string>
#include <variant>

namespace jcq {

// White noise: J(w) = gamma0.
struct FlatSpectrum {
    double gamma0{0.0};
};

// J(w) = alpha w exp(-w / cutoff)
struct OhmicSpectrum {
    double alpha{0.0};
    double cutoff{0.0};
};

// J(w) = gamma0 width^2 / ((w - center)^2 + width^2)
struct LorentzianSpectrum {
    double gamma0{0.0};
    double center{0.0};
    double halfwidth{0.0};
};

using Spectrum = std::variant<FlatSpectrum, OhmicSpectrum, LorentzianSpectrum>;

// Thermal reservoir (k_B = 1, temperature in energy units).
struct BathSpec {
    double temperature{0.0};
    Spectrum spectrum{FlatSpectrum{}};

    void validate() const;
};

std::string spectrum_name(const Spectrum& spectrum);

// J(w) for w > 0.
double spectral_density(double omega, const Spectrum& spectrum);

// Bose occupation 1/(exp(w/T) - 1); exactly 0 at T = 0.
double occupation(double omega, double temperature);

// Emission (w > 0): J(w)(n(w) + 1). Absorption (w < 0): J(|w|) n(|w|).
// Satisfies rate(-w) = exp(-w/T) rate(w). Throws for w = 0.
double rate(double omega, const BathSpec& bath);

} // namespace jcq
