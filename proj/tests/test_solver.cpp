#include <doctest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>
#include <stdexcept>

#include "jcq/analytic.hpp"
#include "jcq/errors.hpp"
#include "jcq/solver.hpp"

using namespace jcq;

namespace {

double max_abs(const Operator& x) { return x.cwiseAbs().maxCoeff(); }

// exp(L t) vec(rho0) through the dense matrix exponential.
Operator expm_evolve(const Superoperator& l, const Operator& rho0, double t)
{
    const Eigen::MatrixXcd prop = (l.matrix * t).exp();
    return unvectorize(prop * vectorize(rho0), l.dim);
}

Operator random_density(Eigen::Index d, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Operator x(d, d);
    for (Eigen::Index j = 0; j < d; ++j)
        for (Eigen::Index i = 0; i < d; ++i)
            x(i, j) = Complex(g(rng), g(rng));
    Operator rho = x * x.adjoint();
    return rho / rho.trace();
}

const JCParams kParams{1.0, 0.1};

} // namespace

TEST_SUITE("solver") {

TEST_CASE("damping basis of the single-excitation generator")
{
    for (auto [ga, gb] : {std::pair{0.015, 0.025}, std::pair{0.02, 0.02}}) {
        const auto l = single_excitation_generator(kParams, ga, gb);
        const auto basis = damping_basis(l);
        REQUIRE(basis.modes.size() == 9);
        CHECK(basis.biorthonormality_residual() < 1e-10);
        CHECK(basis.right_residual(l) < 1e-10);
        CHECK(basis.left_residual(l) < 1e-10);

        // Stationary mode: right = |E0><E0|, left = identity.
        const auto& stat = basis.modes.front();
        CHECK(std::abs(stat.eigenvalue) < 1e-12);
        Operator ground = Operator::Zero(3, 3);
        ground(kSectorGround, kSectorGround) = 1.0;
        CHECK(max_abs(stat.right - ground) < 1e-12);
        CHECK(max_abs(stat.left - Operator::Identity(3, 3)) < 1e-12);

        // Populations decay at gamma/2; the E1-/E1+ coherence at (ga + gb)/4 with frequency 2 rabi.
        int found = 0;
        for (const auto& m : basis.modes) {
            const Complex v = m.eigenvalue;
            if (std::abs(v - Complex(-ga / 2, 0)) < 1e-10 || std::abs(v - Complex(-gb / 2, 0)) < 1e-10 ||
                std::abs(v - Complex(-(ga + gb) / 4, 2 * kParams.rabi)) < 1e-10 ||
                std::abs(v - Complex(-(ga + gb) / 4, -2 * kParams.rabi)) < 1e-10) {
                ++found;
            }
        }
        CHECK(found == 4);
        // Ground/excited coherences oscillate at the Bohr frequencies omega0 -/+ rabi.
        const auto spectrum = liouvillian_spectrum(l);
        for (double w : {kParams.omega0 - kParams.rabi, kParams.omega0 + kParams.rabi}) {
            int hits = 0;
            for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
                hits += std::abs(std::abs(spectrum(k).imag()) - w) < 1e-12;
            }
            CHECK(hits == 2);
        }
    }
}

TEST_CASE("spectral ordering")
{
    Eigen::VectorXcd v(5);
    v << Complex(-1, 2), Complex(0, 0), Complex(-1, -2), Complex(-0.5, 1), Complex(-1 + 1e-12, 0);
    const auto order = spectral_order(v);
    CHECK(order == std::vector<Eigen::Index>{1, 3, 2, 4, 0});
}

TEST_CASE("generator spectra are contractive with a unique stationary state")
{
    const StateSpace space(3);
    const auto micro = microscopic_generator(kParams, space, BathSpec{0.2, FlatSpectrum{0.02}});
    const auto phen = phenomenological_generator(kParams, space, 0.02, 0.1);
    for (const auto* l : {&micro, &phen}) {
        const auto spectrum = liouvillian_spectrum(*l);
        int zeros = 0;
        for (Eigen::Index k = 0; k < spectrum.size(); ++k) {
            CHECK(spectrum(k).real() <= 1e-10);
            zeros += std::abs(spectrum(k)) < 1e-10;
        }
        CHECK(zeros == 1);
    }
}

TEST_CASE("unitary generator has a purely imaginary spectrum")
{
    const StateSpace space(3);
    const auto l = phenomenological_generator(kParams, space, 0.0, 0.0);
    const auto spectrum = liouvillian_spectrum(l);
    CHECK(spectrum.real().cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("damping-basis expansion reproduces arbitrary states")
{
    const StateSpace space(3);
    const auto l = microscopic_generator(kParams, space, BathSpec{0.3, FlatSpectrum{0.02}});
    const auto basis = damping_basis(l);
    for (unsigned seed : {1u, 2u, 3u}) {
        const Operator rho = random_density(space.dim(), seed);
        CHECK(max_abs(basis.reconstruct(basis.coefficients(rho), 0.0) - rho) < 1e-9);
    }
}

TEST_CASE("defective generators are rejected")
{
    Superoperator jordan{2, Eigen::MatrixXcd::Zero(4, 4)};
    jordan.matrix(0, 1) = 1.0;
    CHECK_THROWS_AS(damping_basis(jordan), NumericalError);
}

TEST_CASE("spectral and matrix-exponential propagation agree")
{
    const StateSpace space(3);
    const auto l = microscopic_generator(kParams, space, BathSpec{0.2, OhmicSpectrum{0.02, 3.0}});
    const auto rho0 = DensityMatrix(random_density(space.dim(), 7));
    const std::vector<double> times{0.0, 3.0, 40.0, 250.0};
    const auto ts = evolve_spectral(l, rho0, times);
    CHECK(max_abs(ts.states[0].matrix() - rho0.matrix()) < 1e-10);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(max_abs(ts.states[k].matrix() - expm_evolve(l, rho0.matrix(), times[k])) < 1e-10);
    }
}

TEST_CASE("sector evolution matches the closed-form density operator")
{
    const double ga = 0.015, gb = 0.025;
    const auto l = single_excitation_generator(kParams, ga, gb);
    const auto rho0 = analytic::rabi_micro_density(0.0, ga, gb, kParams.rabi, kParams.omega0);
    std::vector<double> times;
    for (int k = 0; k <= 50; ++k) times.push_back(10.0 * k);
    const auto ts = evolve_spectral(l, rho0, times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        const auto want = analytic::rabi_micro_density(times[k], ga, gb, kParams.rabi, kParams.omega0);
        CHECK(max_abs(ts.states[k].matrix() - want.matrix()) < 1e-10);
    }

    Operator bell = Operator::Zero(3, 3);
    bell(kSectorPlus, kSectorPlus) = 1.0;
    const auto bts = evolve_spectral(l, DensityMatrix(bell), times);
    for (std::size_t k = 0; k < times.size(); ++k) {
        Operator want = Operator::Zero(3, 3);
        const double e = std::exp(-gb * times[k] / 2);
        want(kSectorGround, kSectorGround) = 1.0 - e;
        want(kSectorPlus, kSectorPlus) = e;
        CHECK(max_abs(bts.states[k].matrix() - want) < 1e-10);
    }
}

TEST_CASE("RK4 agrees with the spectral solution")
{
    const StateSpace space(2);
    const auto l = microscopic_generator(kParams, space, BathSpec{0.0, FlatSpectrum{0.02}});
    const auto rho0 = DensityMatrix::pure(space.basis_vector({0, Atom::e}));
    std::vector<double> times;
    for (int k = 0; k <= 100; ++k) times.push_back(5.0 * k);
    const auto spec = evolve_spectral(l, rho0, times);
    const auto ode = evolve_ode(l, rho0, times, 0.01, 1.0);
    for (std::size_t k = 0; k < times.size(); ++k) {
        CHECK(max_abs(spec.states[k].matrix() - ode.states[k].matrix()) < 1e-8);
    }
    CHECK(std::abs(ode.states.back().matrix().trace() - 1.0) < 1e-10);

    const auto uniform = evolve_ode(l, rho0, 1.0, 0.01, 1.0);
    CHECK(uniform.times.size() == 101);
    CHECK(uniform.times.back() == doctest::Approx(1.0));
}

TEST_CASE("RK4 step limit")
{
    const StateSpace space(2);
    const auto l = phenomenological_generator(kParams, space, 0.02, 0.0);
    CHECK(max_ode_step(l, 1.0) == doctest::Approx(0.01));
    const auto rho0 = DensityMatrix::pure(space.basis_vector({0, Atom::e}));
    const std::vector<double> times{0.0, 1.0};
    CHECK_THROWS_AS(evolve_ode(l, rho0, times, 0.02, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve_ode(l, rho0, times, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("unitary RK4 conserves dressed populations")
{
    const StateSpace space(3);
    const auto l = phenomenological_generator(kParams, space, 0.0, 0.0);
    const auto eig = complete_eigensystem(kParams, space);
    StateVector psi = eig[1].coefficients + eig[4].coefficients;
    psi.normalize();
    const auto ts = evolve_ode(l, DensityMatrix::pure(psi), 50.0, 0.01, 1.0);
    for (const auto& rho : ts.states) {
        for (const auto& s : eig) {
            const double p = s.coefficients.dot(rho.matrix() * s.coefficients).real();
            const double p0 = std::norm(s.coefficients.dot(psi));
            CHECK(std::abs(p - p0) < 1e-10);
        }
    }
}

TEST_CASE("steady states")
{
    const StateSpace small(3);
    const auto cold = steady_state(microscopic_generator(kParams, small, BathSpec{0.0, FlatSpectrum{0.02}}));
    CHECK(max_abs(cold.matrix() - projector(small.basis_vector({0, Atom::g}))) < 1e-10);

    const JCParams p{1.0, 0.1};
    const StateSpace space(20);
    const double t = 0.25;
    const auto micro = steady_state(microscopic_generator(p, space, BathSpec{t, FlatSpectrum{0.01}}));
    const auto phen = steady_state(phenomenological_generator(p, space, 0.01, occupation(1.0, t)));
    CHECK(trace_distance(micro.matrix(), gibbs_state(hamiltonian(p, space), t)) < 1e-6);
    CHECK(trace_distance(phen.matrix(), gibbs_state(free_hamiltonian(p, space), t)) < 1e-6);
    CHECK(gibbs_tail_mass(hamiltonian(p, space), space, t) < 1e-10);

    // Two decoupled dark states: kernel of dimension two.
    const auto unitary = phenomenological_generator(p, small, 0.0, 0.0);
    CHECK_THROWS_AS(steady_state(unitary), NumericalError);
}

TEST_CASE("Gibbs state and trace distance")
{
    const StateSpace space(4);
    const Operator h = free_hamiltonian(kParams, space);
    CHECK_THROWS_AS(gibbs_state(h, 0.0), std::invalid_argument);
    const Operator cold = gibbs_state(h, 0.01);
    CHECK(max_abs(cold - projector(space.basis_vector({0, Atom::g}))) < 1e-15);
    const Operator hot = gibbs_state(h, 1.0);
    CHECK(std::abs(hot.trace() - 1.0) < 1e-14);
    const double z0 = 1.0;
    const double z1 = std::exp(-1.0);
    CHECK(hot(space.index({0, Atom::e}), space.index({0, Atom::e})).real() /
              hot(space.index({0, Atom::g}), space.index({0, Atom::g})).real() ==
          doctest::Approx(z1 / z0));
    CHECK(trace_distance(cold, cold) < 1e-16);
    CHECK(trace_distance(projector(space.basis_vector({0, Atom::g})), projector(space.basis_vector({1, Atom::g}))) ==
          doctest::Approx(1.0));
}

TEST_CASE("dominant oscillation reads the Rabi frequency from the spectrum")
{
    const StateSpace space(2);
    const auto rho0 = projector(space.basis_vector({0, Atom::e}));
    Operator pg = space.zero();
    for (int n = 0; n <= space.n_max(); ++n) {
        pg += projector(space.basis_vector({n, Atom::g}));
    }
    const double g = 0.02;
    const auto micro = dominant_oscillation(
        damping_basis(microscopic_generator(kParams, space, BathSpec{0.0, FlatSpectrum{g}})), rho0, pg);
    CHECK(micro.frequency == doctest::Approx(2 * kParams.rabi).epsilon(1e-12));
    const auto phen = dominant_oscillation(damping_basis(phenomenological_generator(kParams, space, g, 0.0)), rho0, pg);
    CHECK(phen.frequency == doctest::Approx(0.5 * std::sqrt(16 * 0.01 - g * g)).epsilon(1e-12));

    // |E1+> populations do not oscillate under the microscopic generator.
    const auto eig = complete_eigensystem(kParams, space);
    const auto bell = projector(eig[find_state(eig, DressedLabel::dressed(1, +1))].coefficients);
    const auto none = dominant_oscillation(
        damping_basis(microscopic_generator(kParams, space, BathSpec{0.0, FlatSpectrum{g}})), bell, pg);
    CHECK(none.frequency == 0.0);
}

} // TEST_SUITE
