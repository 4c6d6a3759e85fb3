#pragma once

#include "jcq/hilbert.hpp"
#include "jcq/jcmodel.hpp"

// Closed-form single-excitation populations at zero temperature. Times are in 1/omega0
// units; gamma_a = gamma(omega0 - rabi), gamma_b = gamma(omega0 + rabi).
namespace jcq::analytic {

struct Populations {
    double p0g{0.0};
    double p1g{0.0};
    double pg{0.0};
};

// Microscopic, initial |0,e>.
Populations rabi_micro(double t, double gamma_a, double gamma_b, double rabi);

// Phenomenological, initial |0,e>. Rejects gamma == 4 rabi.
Populations rabi_phen(double t, double gamma, double rabi);

// Microscopic, initial |E_{1,+}>.
Populations bell_micro(double t, double gamma_b);

// Phenomenological, initial |E_{1,+}>. Rejects gamma == 4 rabi.
Populations bell_phen(double t, double gamma, double rabi);

// Microscopic density operator from |0,e> on the sector basis {|E_0>, |E_{1,->}, |E_{1,+}>}.
DensityMatrix rabi_micro_density(double t, double gamma_a, double gamma_b, double rabi, double omega0);

} // namespace jcq::analytic
