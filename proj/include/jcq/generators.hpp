#pragma once

#include <span>
#include <vector>

#include "jcq/bath.hpp"
#include "jcq/jcmodel.hpp"

namespace jcq {

// Column-major vectorization: vec(X)[i + d j] = X(i, j), so vec(A X B) = (B^T (x) A) vec(X).
Eigen::VectorXcd vectorize(const Operator& x);
Operator unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim);

// A Bohr-frequency-labelled jump operator. rate is zero for bare skeletons.
struct JumpChannel {
    double bohr_frequency{0.0};
    Operator op;
    double rate{0.0};
};

// Linear map on dim x dim operators, stored as a dim^2 x dim^2 matrix.
struct Superoperator {
    Eigen::Index dim{0};
    Eigen::MatrixXcd matrix;

    Operator apply(const Operator& rho) const;

    // max |(vec 1)^T L|
    double trace_preservation_defect() const;
    // max over basis operators of |L(X^dag) - L(X)^dag|
    double hermiticity_preservation_defect() const;
};

// -i[H, .] + sum_k rate_k (A_k . A_k^dag - 1/2 {A_k^dag A_k, .}).
// Throws std::invalid_argument for a negative or non-finite rate.
Superoperator lindblad_generator(const Operator& hamiltonian, std::span<const JumpChannel> channels);

// Representation of `l` on the span of the orthonormal columns of `basis`:
// matrix element for X -> basis^dag L(basis X basis^dag) basis.
Superoperator superoperator_in_basis(const Superoperator& l, const Operator& basis);

// Inverse of superoperator_in_basis for a square unitary basis.
Superoperator superoperator_from_basis(const Superoperator& l, const Operator& basis);

double default_freq_tol(const JCParams& params);

// A(w) = sum_{e'-e=w} Pi(e) A Pi(e'), with Bohr frequencies closer than freq_tol merged.
// Channels are returned sorted by frequency. Throws std::invalid_argument when the
// eigensystem is not orthonormal.
std::vector<JumpChannel> eigenoperators(const Operator& coupling,
                                        const std::vector<DressedState>& eigensystem,
                                        double freq_tol);

// Emission and absorption channels of the cavity coupling a + a_dag, with bath rates.
std::vector<JumpChannel> microscopic_channels(const JCParams& params, const StateSpace& space,
                                              const BathSpec& bath, double freq_tol);

Superoperator microscopic_generator(const JCParams& params, const StateSpace& space,
                                    const BathSpec& bath, double freq_tol);
Superoperator microscopic_generator(const JCParams& params, const StateSpace& space,
                                    const BathSpec& bath);

Superoperator phenomenological_generator(const JCParams& params, const StateSpace& space,
                                         double gamma0, double nbar);

// Secular projection of the phenomenological dissipator in the JC eigenbasis.
Superoperator dressed_approx_generator(const JCParams& params, const StateSpace& space,
                                       double gamma0, double nbar, double freq_tol);
Superoperator dressed_approx_generator(const JCParams& params, const StateSpace& space,
                                       double gamma0, double nbar);

// Sector basis order for single_excitation_generator.
inline constexpr Eigen::Index kSectorGround = 0;
inline constexpr Eigen::Index kSectorMinus = 1;
inline constexpr Eigen::Index kSectorPlus = 2;

// T = 0 generator on span{|E_0>, |E_{1,->}, |E_{1,+}>}; gamma_a = gamma(w0 - rabi),
// gamma_b = gamma(w0 + rabi).
Superoperator single_excitation_generator(const JCParams& params, double gamma_a, double gamma_b);

} // namespace jcq
