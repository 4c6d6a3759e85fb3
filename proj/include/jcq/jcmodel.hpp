#pragma once

#include <vector>

#include "jcq/hilbert.hpp"

namespace jcq {

// Resonant JC parameters in hbar = 1 units.
struct JCParams {
    double omega0{1.0};
    double rabi{0.0};

    void validate() const;
};

// Which eigenstate of the truncated Hamiltonian a DressedState represents.
//   Ground:  |E_0> = |0,g>
//   Dressed: |E_{N,branch}> = (|N,g> + branch |N-1,e>)/sqrt(2), N >= 1
//   BareTop: |n_max, e>, whose dressed partner |n_max+1, g> is truncated away
struct DressedLabel {
    enum class Kind { Ground, Dressed, BareTop };
    Kind kind{Kind::Ground};
    int manifold{0};
    int branch{0};

    static DressedLabel ground() { return {Kind::Ground, 0, 0}; }
    static DressedLabel dressed(int n, int branch) { return {Kind::Dressed, n, branch}; }

    friend bool operator==(const DressedLabel&, const DressedLabel&) = default;
};

struct DressedState {
    DressedLabel label;
    double energy{0.0};
    StateVector coefficients;
};

// (omega0/2) sigma_z + omega0 a_dag a + rabi (a sigma_+ + a_dag sigma_-)
Operator hamiltonian(const JCParams& params, const StateSpace& space);

// omega0/2 sigma_z + omega0 a_dag a
Operator free_hamiltonian(const JCParams& params, const StateSpace& space);

// Analytic eigenstates: ground first, then (N, -), (N, +) for N = 1..n_max.
// Throws std::invalid_argument when n_max = 0 (no dressed manifolds).
std::vector<DressedState> dressed_states(const JCParams& params, const StateSpace& space);

// dressed_states() plus the bare top state; an orthonormal eigenbasis of the whole space.
std::vector<DressedState> complete_eigensystem(const JCParams& params, const StateSpace& space);

// Columns are the coefficient vectors of `states`, in order.
Operator eigenbasis_matrix(const std::vector<DressedState>& states);

// Position of `label` inside `states`; throws std::out_of_range if absent.
std::size_t find_state(const std::vector<DressedState>& states, const DressedLabel& label);

struct ValidityReport {
    bool valid{false};
    double ratio{0.0};
};

// Factor used to read "much smaller than" as a numeric threshold.
inline constexpr double kMuchSmallerFactor = 10.0;

// Secular condition gamma_max << 2 rabi: valid iff gamma_max <= 2 rabi / 10.
ValidityReport rwa_validity(const JCParams& params, double gamma_max);

// Dressed-state approximation condition gamma << rabi / (2 N^{3/2}).
ValidityReport dressed_approx_validity(const JCParams& params, double gamma, int manifold);

} // namespace jcq
