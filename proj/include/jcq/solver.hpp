#pragma once

#include <span>
#include <vector>

#include "jcq/generators.hpp"

namespace jcq {

// One eigen-triple of a Liouvillian: L rho = lambda rho and rho_check L = lambda rho_check,
// with Tr{rho_check rho} = 1.
struct DampingMode {
    Complex eigenvalue;
    Operator right;
    Operator left;
};

struct DampingBasis {
    Eigen::Index dim{0};
    std::vector<DampingMode> modes;
    // Column k is vec(modes[k].right); row k of left_vectors gives the expansion coefficient
    // c_k = left_vectors.row(k) * vec(rho).
    Eigen::MatrixXcd right_vectors;
    Eigen::MatrixXcd left_vectors;
    Eigen::VectorXcd eigenvalues;

    Eigen::VectorXcd coefficients(const Operator& rho) const;
    Operator reconstruct(const Eigen::VectorXcd& coefficients, double t) const;

    double biorthonormality_residual() const;
    double right_residual(const Superoperator& l) const;
    double left_residual(const Superoperator& l) const;
};

// Eigenvalue clustering tolerance used for left/right pairing.
inline constexpr double kClusterTol = 1e-8;

// Full set of dim^2 modes, sorted by (Re desc, Im asc). Right eigenoperators with
// |lambda| < 1e-10 and nonzero trace are scaled to unit trace; the rest to unit
// Frobenius norm. Throws NumericalError naming the eigenvalue cluster when the
// Liouvillian is defective at working precision.
DampingBasis damping_basis(const Superoperator& l);

// Eigenvalues only, same ordering as damping_basis.
Eigen::VectorXcd liouvillian_spectrum(const Superoperator& l);

// Indices that order `values` by Re descending, then Im ascending among values whose
// real parts agree within `tol`.
std::vector<Eigen::Index> spectral_order(const Eigen::VectorXcd& values, double tol = 1e-9);

struct TimeSeries {
    std::vector<double> times;
    std::vector<DensityMatrix> states;
};

// Every stored state must satisfy the density-matrix invariants at this tolerance.
inline constexpr double kTrajectoryTol = 1e-8;

TimeSeries evolve_spectral(const Superoperator& l, const DensityMatrix& rho0, std::span<const double> times);
TimeSeries evolve_spectral(const DampingBasis& basis, const DensityMatrix& rho0, std::span<const double> times);

// Largest permitted RK4 step: 0.01 / max(frequency_scale, max_k |Re L_kk|).
double max_ode_step(const Superoperator& l, double frequency_scale);

// Fixed-step classical RK4 of d(vec rho)/dt = L vec rho. Each grid interval is split into
// the smallest number of equal substeps not exceeding dt. frequency_scale is the largest
// system frequency, max(omega0, 2 rabi). Throws std::invalid_argument when dt exceeds
// max_ode_step.
TimeSeries evolve_ode(const Superoperator& l, const DensityMatrix& rho0, std::span<const double> times,
                      double dt, double frequency_scale);

// Samples every step k dt, k = 0..floor(t_max/dt).
TimeSeries evolve_ode(const Superoperator& l, const DensityMatrix& rho0, double t_max, double dt,
                      double frequency_scale);

// Unit-trace Hermitian kernel element. Throws NumericalError when the kernel dimension
// at relative tolerance kernel_tol is not one.
DensityMatrix steady_state(const Superoperator& l, double kernel_tol = 1e-10);

// exp(-H/T)/Tr exp(-H/T), computed from the eigen-decomposition of H.
Operator gibbs_state(const Operator& hamiltonian, double temperature);

// 1/2 sum |eig(a - b)| for Hermitian a, b.
double trace_distance(const Operator& a, const Operator& b);

// Weight of the Gibbs state of `hamiltonian` on basis states with photon number n_max
// (the cutoff layer).
double gibbs_tail_mass(const Operator& hamiltonian, const StateSpace& space, double temperature);

// Dominant oscillation of <O>(t) read from the damping basis: among modes with
// |Im lambda| > freq_floor, the |Im lambda| of the one with the largest
// |c_k Tr{O rho_k}|. Returns 0 when no oscillating mode has amplitude above amp_floor.
struct OscillationInfo {
    double frequency{0.0};
    double amplitude{0.0};
    Complex eigenvalue{0.0};
};
OscillationInfo dominant_oscillation(const DampingBasis& basis, const Operator& rho0, const Operator& observable,
                                     double freq_floor = 1e-9, double amp_floor = 1e-12);

} // namespace jcq
