#include "jcq/bath.hpp"

#include <cmath>
#include <stdexcept>

namespace jcq {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double value, const char* what)
{
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
}

} // namespace

void BathSpec::validate() const
{
    if (!(temperature >= 0.0) || !std::isfinite(temperature)) {
        throw std::invalid_argument("bath temperature must be nonnegative and finite");
    }
    std::visit(Overloaded{
                   [](const FlatSpectrum& s) {
                       // Zero is allowed here so the closed-system limit can share the same builder.
                       if (!(s.gamma0 >= 0.0) || !std::isfinite(s.gamma0)) {
                           throw std::invalid_argument("flat gamma0 must be nonnegative and finite");
                       }
                   },
                   [](const OhmicSpectrum& s) {
                       require_positive(s.alpha, "ohmic alpha");
                       require_positive(s.cutoff, "ohmic cutoff");
                   },
                   [](const LorentzianSpectrum& s) {
                       require_positive(s.gamma0, "lorentzian gamma0");
                       require_positive(s.center, "lorentzian center");
                       require_positive(s.halfwidth, "lorentzian halfwidth");
                   },
               },
               spectrum);
}

std::string spectrum_name(const Spectrum& spectrum)
{
    return std::visit(Overloaded{
                          [](const FlatSpectrum&) { return std::string("flat"); },
                          [](const OhmicSpectrum&) { return std::string("ohmic"); },
                          [](const LorentzianSpectrum&) { return std::string("lorentzian"); },
                      },
                      spectrum);
}

double spectral_density(double omega, const Spectrum& spectrum)
{
    if (!(omega > 0.0)) {
        throw std::invalid_argument("spectral density is defined for positive frequencies only");
    }
    return std::visit(Overloaded{
                          [](const FlatSpectrum& s) { return s.gamma0; },
                          [omega](const OhmicSpectrum& s) {
                              return s.alpha * omega * std::exp(-omega / s.cutoff);
                          },
                          [omega](const LorentzianSpectrum& s) {
                              const double d = omega - s.center;
                              const double w2 = s.halfwidth * s.halfwidth;
                              return s.gamma0 * w2 / (d * d + w2);
                          },
                      },
                      spectrum);
}

double occupation(double omega, double temperature)
{
    if (!(omega > 0.0)) {
        throw std::invalid_argument("occupation requires a positive frequency");
    }
    if (!(temperature >= 0.0)) {
        throw std::invalid_argument("occupation requires a nonnegative temperature");
    }
    if (temperature == 0.0) {
        return 0.0;
    }
    return 1.0 / std::expm1(omega / temperature);
}

double rate(double omega, const BathSpec& bath)
{
    if (omega == 0.0 || !std::isfinite(omega)) {
        throw std::invalid_argument("rate is undefined at zero frequency");
    }
    const double w = std::abs(omega);
    const double j = spectral_density(w, bath.spectrum);
    const double n = occupation(w, bath.temperature);
    return omega > 0.0 ? j * (n + 1.0) : j * n;
}

} // namespace jcq
