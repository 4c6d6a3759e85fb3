#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace jcq {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;

enum class Atom { g = 0, e = 1 };

char atom_symbol(Atom s);

struct BasisLabel {
    int photons{0};
    Atom atom{Atom::g};

    int excitations() const { return photons + static_cast<int>(atom); }
    friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
};

// Truncated Fock(0..n_max) x {g, e} product space. Flat index i = 2n + s.
class StateSpace {
public:
    explicit StateSpace(int n_max);

    int n_max() const { return n_max_; }
    Eigen::Index dim() const { return 2 * (static_cast<Eigen::Index>(n_max_) + 1); }

    bool contains(const BasisLabel& label) const;
    Eigen::Index index(const BasisLabel& label) const;
    BasisLabel label(Eigen::Index i) const;

    StateVector basis_vector(const BasisLabel& label) const;
    Operator zero() const;
    Operator identity() const;

    friend bool operator==(const StateSpace&, const StateSpace&) = default;

private:
    int n_max_;
};

inline StateSpace build_space(int n_max) { return StateSpace(n_max); }

struct LadderOperators {
    Operator a;
    Operator a_dag;
};

struct AtomicOperators {
    Operator sigma_minus;
    Operator sigma_plus;
    Operator sigma_z;
};

// a|n_max> has the usual coefficient; a_dag|n_max> = 0 (hard cutoff).
LadderOperators ladder_operators(const StateSpace& space);
AtomicOperators atomic_operators(const StateSpace& space);

// a_dag a + (sigma_z + 1)/2, eigenvalue n + s on |n, s>.
Operator excitation_number(const StateSpace& space);

// |psi><psi|
Operator projector(const StateVector& psi);

// max_ij |X_ij - conj(X_ji)|
double hermiticity_defect(const Operator& x);

} // namespace jcq

namespace jcq {

struct DensityTolerances {
    double herm{1e-12};
    double trace{1e-10};
    double pos{1e-10};

    static DensityTolerances uniform(double tol) { return {tol, tol, tol}; }
};

struct DensityDefects {
    double trace_defect{0.0};    // |Tr rho - 1|
    double herm_defect{0.0};     // max |rho_ij - conj(rho_ji)|
    double min_eigenvalue{0.0};  // of the Hermitian part
};

DensityDefects density_defects(const Operator& rho);

// Hermitian, unit-trace, positive semidefinite operator, checked on construction.
class DensityMatrix {
public:
    // Throws std::invalid_argument when any invariant fails at the given tolerances.
    explicit DensityMatrix(Operator rho, DensityTolerances tol = {});

    static DensityMatrix pure(const StateVector& psi, DensityTolerances tol = {});

    const Operator& matrix() const { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }
    const DensityTolerances& tolerances() const { return tol_; }
    const DensityDefects& defects() const { return defects_; }

private:
    Operator rho_;
    DensityTolerances tol_;
    DensityDefects defects_;
};

} // namespace jcq
