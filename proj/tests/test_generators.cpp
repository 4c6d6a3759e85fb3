#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "jcq/generators.hpp"
#include "jcq/solver.hpp"

using namespace jcq;

namespace {

Operator random_operator(Eigen::Index d, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    Operator x(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            x(i, j) = Complex(g(rng), g(rng));
        }
    }
    return x;
}

// Direct dense evaluation of a Lindblad generator on an operator.
Operator lindblad_apply(const Operator& h, const std::vector<JumpChannel>& channels, const Operator& rho)
{
    const Complex i(0.0, 1.0);
    Operator out = -i * (h * rho - rho * h);
    for (const auto& c : channels) {
        const Operator ada = c.op.adjoint() * c.op;
        out += c.rate * (c.op * rho * c.op.adjoint() - 0.5 * (ada * rho + rho * ada));
    }
    return out;
}

double max_abs(const Operator& x) { return x.size() ? x.cwiseAbs().maxCoeff() : 0.0; }

} // namespace

TEST_SUITE("generators") {

TEST_CASE("vectorization is column-major")
{
    const Operator x = random_operator(3, 1);
    const auto v = vectorize(x);
    CHECK(v(1 + 3 * 2) == x(1, 2));
    CHECK(max_abs(unvectorize(v, 3) - x) == 0.0);
    CHECK_THROWS_AS(unvectorize(v, 4), std::invalid_argument);
}

TEST_CASE("Lindblad builder matches the dense formula")
{
    const StateSpace space(2);
    const Operator h = hamiltonian({1.0, 0.2}, space);
    const auto [a, a_dag] = ladder_operators(space);
    const std::vector<JumpChannel> channels{{1.0, a, 0.3}, {-1.0, a_dag, 0.1}};
    const auto l = lindblad_generator(h, channels);
    const Operator rho = random_operator(space.dim(), 2);
    CHECK(max_abs(l.apply(rho) - lindblad_apply(h, channels, rho)) < 1e-13);
    CHECK(l.trace_preservation_defect() < 1e-14);
    CHECK(l.hermiticity_preservation_defect() < 1e-14);

    const std::vector<JumpChannel> bad{{1.0, a, -0.1}};
    CHECK_THROWS_AS(lindblad_generator(h, bad), std::invalid_argument);
}

TEST_CASE("basis change round-trips")
{
    const JCParams p{1.0, 0.1};
    const StateSpace space(3);
    const auto l = phenomenological_generator(p, space, 0.05, 0.2);
    const Operator u = eigenbasis_matrix(complete_eigensystem(p, space));
    const auto ld = superoperator_in_basis(l, u);
    const Operator x = random_operator(space.dim(), 3);
    CHECK(max_abs(u * ld.apply(u.adjoint() * x * u) * u.adjoint() - l.apply(x)) < 1e-13);
    CHECK(max_abs(superoperator_from_basis(ld, u).matrix - l.matrix) < 1e-13);
}

TEST_CASE("eigenoperators of the cavity coupling")
{
    const JCParams p{1.0, 0.1};
    const StateSpace space(4);
    const auto eig = complete_eigensystem(p, space);
    const auto [a, a_dag] = ladder_operators(space);
    const Operator coupling = a + a_dag;
    const auto channels = eigenoperators(coupling, eig, default_freq_tol(p));

    Operator sum = space.zero();
    for (const auto& c : channels) {
        sum += c.op;
    }
    CHECK(max_abs(sum - coupling) < 1e-13);

    // Every channel at w has a partner at -w with the adjoint operator.
    for (const auto& c : channels) {
        bool found = false;
        for (const auto& d : channels) {
            if (std::abs(d.bohr_frequency + c.bohr_frequency) < 1e-12) {
                found = max_abs(d.op - c.op.adjoint()) < 1e-13;
            }
        }
        CHECK(found);
    }

    const auto& e0 = eig[find_state(eig, DressedLabel::ground())];
    for (int branch : {-1, +1}) {
        const auto& e1 = eig[find_state(eig, DressedLabel::dressed(1, branch))];
        const double w = e1.energy - e0.energy;
        const Operator expected = e0.coefficients * e1.coefficients.adjoint() / std::sqrt(2.0);
        bool found = false;
        for (const auto& c : channels) {
            if (std::abs(c.bohr_frequency - w) < 1e-12) {
                found = true;
                CHECK(max_abs(c.op - expected) < 1e-13);
            }
        }
        CHECK(found);
    }

    // Weight of the E_{2,+} -> E_{1,+} transition.
    const auto& e1p = eig[find_state(eig, DressedLabel::dressed(1, +1))];
    const auto& e2p = eig[find_state(eig, DressedLabel::dressed(2, +1))];
    const Complex weight = e1p.coefficients.dot(coupling * e2p.coefficients);
    CHECK(std::abs(weight - (std::sqrt(2.0) + 1.0) / 2.0) < 1e-14);

    std::vector<DressedState> broken = eig;
    broken[1].coefficients *= 2.0;
    CHECK_THROWS_AS(eigenoperators(coupling, broken, 1e-9), std::invalid_argument);
}

TEST_CASE("microscopic generator at zero temperature")
{
    const JCParams p{1.0, 0.1};
    const StateSpace space(3);
    const double g = 0.02;
    const auto l = microscopic_generator(p, space, BathSpec{0.0, FlatSpectrum{g}});
    CHECK(l.trace_preservation_defect() < 1e-12);
    CHECK(l.hermiticity_preservation_defect() < 1e-14);

    const auto eig = complete_eigensystem(p, space);
    const StateVector e0 = eig[find_state(eig, DressedLabel::ground())].coefficients;
    const StateVector e1p = eig[find_state(eig, DressedLabel::dressed(1, +1))].coefficients;
    const Operator out = l.apply(projector(e1p));
    CHECK(max_abs(out - 0.5 * g * (projector(e0) - projector(e1p))) < 1e-14);

    // Absorption channels carry no rate at T = 0.
    for (const auto& c : microscopic_channels(p, space, BathSpec{0.0, FlatSpectrum{g}}, 1e-9)) {
        if (c.bohr_frequency < 0.0) {
            CHECK(c.rate == 0.0);
        }
    }
    CHECK_THROWS_AS(microscopic_generator(p, StateSpace(1), BathSpec{0.0, FlatSpectrum{g}}), std::invalid_argument);
}

TEST_CASE("microscopic population decay weights")
{
    const JCParams p{1.0, 0.1};
    const StateSpace space(5);
    const double g = 0.02;
    const auto l = microscopic_generator(p, space, BathSpec{0.0, FlatSpectrum{g}});
    const auto eig = complete_eigensystem(p, space);
    const auto ld = superoperator_in_basis(l, eigenbasis_matrix(eig));
    const auto d = space.dim();
    for (int n = 2; n < space.n_max(); ++n) {
        for (int branch : {-1, +1}) {
            const auto k = static_cast<Eigen::Index>(find_state(eig, DressedLabel::dressed(n, branch)));
            // Sum over destination branches m of ((sqrt(N) + l m sqrt(N-1)) / 2)^2 gamma.
            double expected = 0.0;
            for (int m : {-1, +1}) {
                const double w = (std::sqrt(n) + branch * m * std::sqrt(n - 1.0)) / 2.0;
                expected += w * w * g;
            }
            CHECK(std::abs(-ld.matrix(k + d * k, k + d * k).real() - expected) < 1e-14);
        }
    }
}

TEST_CASE("microscopic thermal generator annihilates the JC Gibbs state")
{
    const JCParams p{1.0, 0.1};
    const StateSpace space(20);
    const double t = 0.25;
    const auto l = microscopic_generator(p, space, BathSpec{t, FlatSpectrum{0.01}});
    const Operator gibbs = gibbs_state(hamiltonian(p, space), t);
    CHECK(max_abs(l.apply(gibbs)) < 1e-8);
}

TEST_CASE("phenomenological generator")
{
    const JCParams p{1.0, 0.1};
    const StateSpace space(3);
    const double g = 0.03;
    const auto l = phenomenological_generator(p, space, g, 0.0);
    const auto [a, a_dag] = ladder_operators(space);
    const Operator h = hamiltonian(p, space);
    const std::vector<JumpChannel> zero_t{{p.omega0, a, g}};
    CHECK(max_abs(l.matrix - lindblad_generator(h, zero_t).matrix) == 0.0);

    const auto dissipator = [&](const Operator& rho) {
        const Complex i(0.0, 1.0);
        return Operator(l.apply(rho) + i * (h * rho - rho * h));
    };
    const Operator p1g = projector(space.basis_vector({1, Atom::g}));
    const Operator p0g = projector(space.basis_vector({0, Atom::g}));
    CHECK(max_abs(dissipator(p1g) - g * (p0g - p1g)) < 1e-15);
    CHECK(max_abs(dissipator(projector(space.basis_vector({0, Atom::e})))) == 0.0);

    const auto hot = phenomenological_generator(p, space, g, 0.3);
    CHECK(hot.trace_preservation_defect() < 1e-14);
    CHECK_THROWS_AS(phenomenological_generator(p, space, -g, 0.0), std::invalid_argument);
}

TEST_CASE("dressed approximation equals microscopic for white noise at zero temperature")
{
    const JCParams p{1.0, 0.1};
    const StateSpace space(5);
    const double g = p.rabi / 5.0;
    const auto micro = microscopic_generator(p, space, BathSpec{0.0, FlatSpectrum{g}});
    const auto dressed = dressed_approx_generator(p, space, g, 0.0);
    const auto eig = complete_eigensystem(p, space);
    const Operator u = eigenbasis_matrix(eig);
    const auto md = superoperator_in_basis(micro, u);
    const auto dd = superoperator_in_basis(dressed, u);
    const auto d = space.dim();
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            if (eig[static_cast<std::size_t>(i)].label.manifold == eig[static_cast<std::size_t>(j)].label.manifold) {
                const auto row = i + d * j;
                CHECK((md.matrix.row(row) - dd.matrix.row(row)).cwiseAbs().maxCoeff() < 1e-12);
            }
        }
    }
    CHECK(dressed.trace_preservation_defect() < 1e-12);
}

TEST_CASE("without dissipation all builders give the commutator")
{
    const JCParams p{1.0, 0.1};
    const StateSpace space(3);
    const auto unitary = lindblad_generator(hamiltonian(p, space), std::vector<JumpChannel>{});
    const auto micro = microscopic_generator(p, space, BathSpec{0.0, FlatSpectrum{0.0}});
    const auto phen = phenomenological_generator(p, space, 0.0, 0.0);
    const auto dressed = dressed_approx_generator(p, space, 0.0, 0.0);
    CHECK(max_abs(micro.matrix - unitary.matrix) == 0.0);
    CHECK(max_abs(phen.matrix - unitary.matrix) == 0.0);
    CHECK(max_abs(dressed.matrix - unitary.matrix) < 1e-15);
}

TEST_CASE("single-excitation generator agrees with the restricted microscopic generator")
{
    const JCParams p{1.0, 0.1};
    const StateSpace space(3);
    const double g = 0.02;
    const auto sector = single_excitation_generator(p, g, g);
    CHECK(sector.trace_preservation_defect() < 1e-14);

    const auto eig = complete_eigensystem(p, space);
    const auto md = superoperator_in_basis(microscopic_generator(p, space, BathSpec{0.0, FlatSpectrum{g}}),
                                           eigenbasis_matrix(eig));
    const Eigen::Index idx[3] = {
        static_cast<Eigen::Index>(find_state(eig, DressedLabel::ground())),
        static_cast<Eigen::Index>(find_state(eig, DressedLabel::dressed(1, -1))),
        static_cast<Eigen::Index>(find_state(eig, DressedLabel::dressed(1, +1))),
    };
    const auto d = space.dim();
    double worst = 0.0;
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
            for (int q = 0; q < 3; ++q)
                for (int k = 0; k < 3; ++k) {
                    const Complex full = md.matrix(idx[i] + d * idx[j], idx[k] + d * idx[q]);
                    worst = std::max(worst, std::abs(full - sector.matrix(i + 3 * j, k + 3 * q)));
                }
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(single_excitation_generator(p, -0.1, g), std::invalid_argument);
}

} // TEST_SUITE
