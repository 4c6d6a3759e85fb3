#include "jcq/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "jcq/errors.hpp"
#include "jcq/generators.hpp"

namespace jcq::analytic {

namespace {

void require_time(double t)
{
    if (!(t >= 0.0)) {
        throw std::invalid_argument("closed forms are defined for t >= 0");
    }
}

void require_rate(double g)
{
    if (!(g >= 0.0)) {
        throw std::invalid_argument("rates must be nonnegative");
    }
}

double real_part(Complex z, const char* what)
{
    if (std::abs(z.imag()) > 1e-12 * std::max(1.0, std::abs(z.real()))) {
        throw NumericalError(std::string(what) + " has a non-negligible imaginary residue");
    }
    return z.real();
}

// Shared pieces of the phenomenological solution: s = sqrt(gamma^2 - 16 rabi^2) on the
// principal branch, D = 16 rabi^2 - gamma^2, and the three exponentials.
struct PhenTerms {
    Complex s;
    double d;
    double e_slow;
    Complex e_plus;
    Complex e_minus;
};

PhenTerms phen_terms(double t, double gamma, double rabi)
{
    require_time(t);
    require_rate(gamma);
    if (!(rabi > 0.0)) {
        throw std::invalid_argument("phenomenological closed forms need rabi > 0");
    }
    const double d = 16.0 * rabi * rabi - gamma * gamma;
    if (d == 0.0) {
        throw std::invalid_argument("gamma = 4 rabi is a removable singularity of the closed forms; use a solver");
    }
    const Complex s = std::sqrt(Complex(gamma * gamma - 16.0 * rabi * rabi, 0.0));
    return {s, d, std::exp(-0.5 * gamma * t), std::exp(0.5 * (-gamma + s) * t), std::exp(0.5 * (-gamma - s) * t)};
}

} // namespace

Populations rabi_micro(double t, double gamma_a, double gamma_b, double rabi)
{
    require_time(t);
    require_rate(gamma_a);
    require_rate(gamma_b);
    const double ea = std::exp(-0.5 * gamma_a * t);
    const double eb = std::exp(-0.5 * gamma_b * t);
    const double mean = 0.25 * (gamma_a + gamma_b);
    const Complex up = std::exp(Complex(-mean, 2.0 * rabi) * t);
    const Complex down = std::exp(Complex(-mean, -2.0 * rabi) * t);

    Populations p;
    p.p0g = 1.0 - 0.5 * ea - 0.5 * eb;
    p.p1g = real_part(0.25 * (ea + eb - up - down), "P_1g");
    p.pg = p.p0g + p.p1g;
    return p;
}

Populations rabi_phen(double t, double gamma, double rabi)
{
    const auto [s, d, e0, ep, em] = phen_terms(t, gamma, rabi);
    const double g2 = gamma * gamma;
    const double w2 = rabi * rabi;
    const Complex p0g = 1.0 - 16.0 * w2 / d * e0 + (g2 + gamma * s) / (2.0 * d) * ep +
                        (g2 - gamma * s) / (2.0 * d) * em;
    const Complex p1g = 8.0 * w2 / d * e0 - 16.0 * w2 / (4.0 * d) * ep - 16.0 * w2 / (4.0 * d) * em;
    const Complex pg = 1.0 - 8.0 * w2 / d * e0 + (2.0 * g2 + 2.0 * gamma * s - 16.0 * w2) / (4.0 * d) * ep +
                       (2.0 * g2 - 2.0 * gamma * s - 16.0 * w2) / (4.0 * d) * em;
    return {real_part(p0g, "P_0g"), real_part(p1g, "P_1g"), real_part(pg, "P_g")};
}

Populations bell_micro(double t, double gamma_b)
{
    require_time(t);
    require_rate(gamma_b);
    const double eb = std::exp(-0.5 * gamma_b * t);
    return {1.0 - eb, 0.5 * eb, 1.0 - 0.5 * eb};
}

Populations bell_phen(double t, double gamma, double rabi)
{
    const auto [s, d, e0, ep, em] = phen_terms(t, gamma, rabi);
    const double g2 = gamma * gamma;
    const double w2 = rabi * rabi;
    const Complex p0g = 1.0 - 16.0 * w2 / d * e0 + g2 / (2.0 * d) * ep + g2 / (2.0 * d) * em;
    const Complex p1g =
        8.0 * w2 / d * e0 - (g2 - gamma * s) / (4.0 * d) * ep - (g2 + gamma * s) / (4.0 * d) * em;
    const Complex pg =
        1.0 - 8.0 * w2 / d * e0 + (g2 + gamma * s) / (4.0 * d) * ep + (g2 - gamma * s) / (4.0 * d) * em;
    return {real_part(p0g, "P_0g"), real_part(p1g, "P_1g"), real_part(pg, "P_g")};
}

DensityMatrix rabi_micro_density(double t, double gamma_a, double gamma_b, double rabi, double omega0)
{
    require_time(t);
    require_rate(gamma_a);
    require_rate(gamma_b);
    JCParams{omega0, rabi}.validate();
    const double ea = std::exp(-0.5 * gamma_a * t);
    const double eb = std::exp(-0.5 * gamma_b * t);
    const Complex coherence = -0.5 * std::exp(-0.25 * (gamma_a + gamma_b) * t) * std::exp(Complex(0.0, 2.0 * rabi * t));

    Operator rho = Operator::Zero(3, 3);
    rho(kSectorGround, kSectorGround) = 1.0 - 0.5 * ea - 0.5 * eb;
    rho(kSectorMinus, kSectorMinus) = 0.5 * ea;
    rho(kSectorPlus, kSectorPlus) = 0.5 * eb;
    rho(kSectorMinus, kSectorPlus) = coherence;
    rho(kSectorPlus, kSectorMinus) = std::conj(coherence);
    return DensityMatrix(std::move(rho));
}

} // namespace jcq::analytic
