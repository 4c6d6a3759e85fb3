#include "jcq/hilbert.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace jcq {

char atom_symbol(Atom s) { return s == Atom::g ? 'g' : 'e'; }

StateSpace::StateSpace(int n_max) : n_max_(n_max)
{
    if (n_max < 0) {
        throw std::invalid_argument("photon cutoff must be nonnegative, got " + std::to_string(n_max));
    }
}

bool StateSpace::contains(const BasisLabel& label) const
{
    return label.photons >= 0 && label.photons <= n_max_;
}

Eigen::Index StateSpace::index(const BasisLabel& label) const
{
    if (!contains(label)) {
        throw std::out_of_range("basis label |" + std::to_string(label.photons) + "," +
                                atom_symbol(label.atom) + "> outside space with n_max=" +
                                std::to_string(n_max_));
    }
    return 2 * static_cast<Eigen::Index>(label.photons) + static_cast<Eigen::Index>(label.atom);
}

BasisLabel StateSpace::label(Eigen::Index i) const
{
    if (i < 0 || i >= dim()) {
        throw std::out_of_range("flat index " + std::to_string(i) + " outside space of dim " +
                                std::to_string(dim()));
    }
    return {static_cast<int>(i / 2), (i % 2 == 0) ? Atom::g : Atom::e};
}

StateVector StateSpace::basis_vector(const BasisLabel& label) const
{
    StateVector v = StateVector::Zero(dim());
    v(index(label)) = 1.0;
    return v;
}

Operator StateSpace::zero() const { return Operator::Zero(dim(), dim()); }

Operator StateSpace::identity() const { return Operator::Identity(dim(), dim()); }

LadderOperators ladder_operators(const StateSpace& space)
{
    Operator a = space.zero();
    for (int n = 1; n <= space.n_max(); ++n) {
        for (Atom s : {Atom::g, Atom::e}) {
            a(space.index({n - 1, s}), space.index({n, s})) = std::sqrt(static_cast<double>(n));
        }
    }
    Operator a_dag = a.adjoint();
    return {std::move(a), std::move(a_dag)};
}

AtomicOperators atomic_operators(const StateSpace& space)
{
    Operator sm = space.zero();
    Operator sz = space.zero();
    for (int n = 0; n <= space.n_max(); ++n) {
        const auto ig = space.index({n, Atom::g});
        const auto ie = space.index({n, Atom::e});
        sm(ig, ie) = 1.0;
        sz(ie, ie) = 1.0;
        sz(ig, ig) = -1.0;
    }
    Operator sp = sm.adjoint();
    return {std::move(sm), std::move(sp), std::move(sz)};
}

Operator excitation_number(const StateSpace& space)
{
    // a_dag a + (sigma_z + 1)/2 is diagonal with entries n + s; build it exactly.
    Operator n = space.zero();
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
        n(i, i) = space.label(i).excitations();
    }
    return n;
}

Operator projector(const StateVector& psi) { return psi * psi.adjoint(); }

double hermiticity_defect(const Operator& x)
{
    if (x.size() == 0) {
        return 0.0;
    }
    return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

} // namespace jcq

namespace jcq {

DensityDefects density_defects(const Operator& rho)
{
    if (rho.rows() != rho.cols() || rho.rows() == 0) {
        throw std::invalid_argument("density matrix must be square and nonempty");
    }
    DensityDefects out;
    out.trace_defect = std::abs(rho.trace() - Complex(1.0));
    out.herm_defect = hermiticity_defect(rho);
    const Operator herm = 0.5 * (rho + rho.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = es.eigenvalues().minCoeff();
    return out;
}

DensityMatrix::DensityMatrix(Operator rho, DensityTolerances tol)
    : rho_(std::move(rho)), tol_(tol), defects_(density_defects(rho_))
{
    if (defects_.herm_defect > tol_.herm) {
        throw std::invalid_argument("density matrix not Hermitian: defect " + std::to_string(defects_.herm_defect));
    }
    if (defects_.trace_defect > tol_.trace) {
        throw std::invalid_argument("density matrix trace off by " + std::to_string(defects_.trace_defect));
    }
    if (defects_.min_eigenvalue < -tol_.pos) {
        throw std::invalid_argument("density matrix has negative eigenvalue " +
                                    std::to_string(defects_.min_eigenvalue));
    }
}

DensityMatrix DensityMatrix::pure(const StateVector& psi, DensityTolerances tol)
{
    return DensityMatrix(projector(psi), tol);
}

} // namespace jcq
