#include "jcq/jcmodel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace jcq {

void JCParams::validate() const
{
    if (!(omega0 > 0.0) || !std::isfinite(omega0)) {
        throw std::invalid_argument("omega0 must be positive and finite");
    }
    if (!(rabi >= 0.0) || !std::isfinite(rabi)) {
        throw std::invalid_argument("rabi coupling must be nonnegative and finite");
    }
}

Operator free_hamiltonian(const JCParams& params, const StateSpace& space)
{
    params.validate();
    const auto [a, a_dag] = ladder_operators(space);
    const auto atom = atomic_operators(space);
    return 0.5 * params.omega0 * atom.sigma_z + params.omega0 * (a_dag * a);
}

Operator hamiltonian(const JCParams& params, const StateSpace& space)
{
    const auto [a, a_dag] = ladder_operators(space);
    const auto atom = atomic_operators(space);
    return free_hamiltonian(params, space) +
           params.rabi * (a * atom.sigma_plus + a_dag * atom.sigma_minus);
}

std::vector<DressedState> dressed_states(const JCParams& params, const StateSpace& space)
{
    params.validate();
    if (space.n_max() < 1) {
        throw std::invalid_argument("no dressed manifolds: n_max must be at least 1");
    }
    std::vector<DressedState> out;
    out.reserve(static_cast<std::size_t>(2 * space.n_max() + 1));
    out.push_back({DressedLabel::ground(), -0.5 * params.omega0, space.basis_vector({0, Atom::g})});

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int n = 1; n <= space.n_max(); ++n) {
        const StateVector upper = space.basis_vector({n, Atom::g});
        const StateVector lower = space.basis_vector({n - 1, Atom::e});
        const double centre = (n - 0.5) * params.omega0;
        const double split = params.rabi * std::sqrt(static_cast<double>(n));
        for (int branch : {-1, +1}) {
            out.push_back({DressedLabel::dressed(n, branch), centre + branch * split,
                           inv_sqrt2 * (upper + static_cast<double>(branch) * lower)});
        }
    }
    return out;
}

std::vector<DressedState> complete_eigensystem(const JCParams& params, const StateSpace& space)
{
    auto states = dressed_states(params, space);
    const int top = space.n_max();
    states.push_back({{DressedLabel::Kind::BareTop, top + 1, 0},
                      (top + 0.5) * params.omega0,
                      space.basis_vector({top, Atom::e})});
    return states;
}

Operator eigenbasis_matrix(const std::vector<DressedState>& states)
{
    if (states.empty()) {
        return {};
    }
    const auto dim = states.front().coefficients.size();
    Operator u(dim, static_cast<Eigen::Index>(states.size()));
    for (std::size_t k = 0; k < states.size(); ++k) {
        u.col(static_cast<Eigen::Index>(k)) = states[k].coefficients;
    }
    return u;
}

std::size_t find_state(const std::vector<DressedState>& states, const DressedLabel& label)
{
    for (std::size_t k = 0; k < states.size(); ++k) {
        if (states[k].label == label) {
            return k;
        }
    }
    throw std::out_of_range("dressed label (N=" + std::to_string(label.manifold) +
                            ", branch=" + std::to_string(label.branch) + ") not in eigensystem");
}

ValidityReport rwa_validity(const JCParams& params, double gamma_max)
{
    params.validate();
    if (!(gamma_max >= 0.0)) {
        throw std::invalid_argument("gamma_max must be nonnegative");
    }
    if (params.rabi == 0.0) {
        return {false, std::numeric_limits<double>::infinity()};
    }
    const double ratio = gamma_max / (2.0 * params.rabi);
    return {ratio <= 1.0 / kMuchSmallerFactor, ratio};
}

ValidityReport dressed_approx_validity(const JCParams& params, double gamma, int manifold)
{
    params.validate();
    if (!(gamma >= 0.0) || manifold < 1) {
        throw std::invalid_argument("dressed-state validity needs gamma >= 0 and manifold >= 1");
    }
    if (params.rabi == 0.0) {
        return {false, std::numeric_limits<double>::infinity()};
    }
    const double scale = params.rabi / (2.0 * std::pow(static_cast<double>(manifold), 1.5));
    const double ratio = gamma / scale;
    return {ratio <= 1.0 / kMuchSmallerFactor, ratio};
}

} // namespace jcq
