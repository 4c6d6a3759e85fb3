#include "jcq/generators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Sparse>
#include <unsupported/Eigen/KroneckerProduct>

namespace jcq {

namespace {

struct Entry {
    Eigen::Index row;
    Eigen::Index col;
    Complex value;
};

std::vector<Entry> nonzeros(const Operator& x)
{
    std::vector<Entry> out;
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        for (Eigen::Index r = 0; r < x.rows(); ++r) {
            if (x(r, c) != Complex(0.0)) {
                out.push_back({r, c, x(r, c)});
            }
        }
    }
    return out;
}

// L += coeff * (X . ): row k + d j, col i + d j carries X(k, i).
void add_left_multiply(Eigen::MatrixXcd& l, Eigen::Index d, const Operator& x, Complex coeff)
{
    for (const auto& [k, i, v] : nonzeros(x)) {
        for (Eigen::Index j = 0; j < d; ++j) {
            l(k + d * j, i + d * j) += coeff * v;
        }
    }
}

// L += coeff * ( . X): row m + d n, col m + d p carries X(p, n).
void add_right_multiply(Eigen::MatrixXcd& l, Eigen::Index d, const Operator& x, Complex coeff)
{
    for (const auto& [p, n, v] : nonzeros(x)) {
        for (Eigen::Index m = 0; m < d; ++m) {
            l(m + d * n, m + d * p) += coeff * v;
        }
    }
}

void add_dissipator(Eigen::MatrixXcd& l, Eigen::Index d, const Operator& jump, double rate)
{
    if (rate == 0.0) {
        return;
    }
    const auto nz = nonzeros(jump);
    for (const auto& [k, i, a] : nz) {
        for (const auto& [m, j, b] : nz) {
            l(k + d * m, i + d * j) += rate * a * std::conj(b);
        }
    }
    const Operator k = jump.adjoint() * jump;
    add_left_multiply(l, d, k, -0.5 * rate);
    add_right_multiply(l, d, k, -0.5 * rate);
}

void check_square(const Operator& x, const char* what)
{
    if (x.rows() != x.cols()) {
        throw std::invalid_argument(std::string(what) + " must be square");
    }
}

Eigen::SparseMatrix<Complex> sparse_view(const Operator& x)
{
    Eigen::SparseMatrix<Complex> s = x.sparseView();
    s.makeCompressed();
    return s;
}

// vec(B Y B^dag) = (conj(B) (x) B) vec(Y)
Eigen::SparseMatrix<Complex> embedding(const Operator& basis)
{
    const auto b = sparse_view(basis);
    const Eigen::SparseMatrix<Complex> bc = b.conjugate();
    Eigen::SparseMatrix<Complex> t = Eigen::kroneckerProduct(bc, b);
    t.makeCompressed();
    return t;
}

} // namespace

Eigen::VectorXcd vectorize(const Operator& x)
{
    return Eigen::Map<const Eigen::VectorXcd>(x.data(), x.size());
}

Operator unvectorize(const Eigen::VectorXcd& v, Eigen::Index dim)
{
    if (v.size() != dim * dim) {
        throw std::invalid_argument("vector length does not match dim^2");
    }
    return Eigen::Map<const Operator>(v.data(), dim, dim);
}

Operator Superoperator::apply(const Operator& rho) const
{
    if (rho.rows() != dim || rho.cols() != dim) {
        throw std::invalid_argument("operator dimension does not match superoperator");
    }
    return unvectorize(matrix * vectorize(rho), dim);
}

double Superoperator::trace_preservation_defect() const
{
    const Eigen::VectorXcd one = vectorize(Operator::Identity(dim, dim));
    return (one.transpose() * matrix).cwiseAbs().maxCoeff();
}

double Superoperator::hermiticity_preservation_defect() const
{
    // L(E_ij)^dag must equal L(E_ji): entry (k + d l, i + d j) is conj of (l + d k, j + d i).
    double worst = 0.0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            for (Eigen::Index k = 0; k < dim; ++k) {
                for (Eigen::Index l = 0; l < dim; ++l) {
                    const Complex lhs = matrix(k + dim * l, i + dim * j);
                    const Complex rhs = std::conj(matrix(l + dim * k, j + dim * i));
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
            }
        }
    }
    return worst;
}

Superoperator lindblad_generator(const Operator& hamiltonian, std::span<const JumpChannel> channels)
{
    check_square(hamiltonian, "Hamiltonian");
    const Eigen::Index d = hamiltonian.rows();
    Superoperator out{d, Eigen::MatrixXcd::Zero(d * d, d * d)};
    const Complex minus_i(0.0, -1.0);
    add_left_multiply(out.matrix, d, hamiltonian, minus_i);
    add_right_multiply(out.matrix, d, hamiltonian, -minus_i);
    for (const auto& ch : channels) {
        if (!(ch.rate >= 0.0) || !std::isfinite(ch.rate)) {
            throw std::invalid_argument("jump channel rate must be nonnegative and finite");
        }
        if (ch.op.rows() != d || ch.op.cols() != d) {
            throw std::invalid_argument("jump operator dimension does not match Hamiltonian");
        }
        add_dissipator(out.matrix, d, ch.op, ch.rate);
    }
    return out;
}

Superoperator superoperator_in_basis(const Superoperator& l, const Operator& basis)
{
    if (basis.rows() != l.dim) {
        throw std::invalid_argument("basis rows do not match superoperator dimension");
    }
    const auto t = embedding(basis);
    const Eigen::SparseMatrix<Complex> t_adj = t.adjoint();
    Eigen::MatrixXcd right = l.matrix * t;
    return {basis.cols(), t_adj * right};
}

Superoperator superoperator_from_basis(const Superoperator& l, const Operator& basis)
{
    check_square(basis, "basis");
    if (basis.cols() != l.dim) {
        throw std::invalid_argument("basis columns do not match superoperator dimension");
    }
    const auto t = embedding(basis);
    const Eigen::SparseMatrix<Complex> t_adj = t.adjoint();
    Eigen::MatrixXcd right = l.matrix * t_adj;
    return {basis.rows(), t * right};
}

double default_freq_tol(const JCParams& params) { return 1e-9 * params.omega0; }

std::vector<JumpChannel> eigenoperators(const Operator& coupling,
                                        const std::vector<DressedState>& eigensystem,
                                        double freq_tol)
{
    check_square(coupling, "coupling operator");
    if (!(freq_tol > 0.0)) {
        throw std::invalid_argument("freq_tol must be positive");
    }
    if (eigensystem.empty()) {
        return {};
    }
    const Operator u = eigenbasis_matrix(eigensystem);
    if (u.rows() != coupling.rows()) {
        throw std::invalid_argument("eigensystem dimension does not match coupling operator");
    }
    const auto k = u.cols();
    const double ortho = (u.adjoint() * u - Operator::Identity(k, k)).cwiseAbs().maxCoeff();
    if (ortho > 1e-10) {
        throw std::invalid_argument("eigensystem is not orthonormal (defect " + std::to_string(ortho) + ")");
    }

    const Operator elements = u.adjoint() * coupling * u;
    const double scale = 1.0 + elements.cwiseAbs().maxCoeff();
    struct Transition {
        double omega;
        Eigen::Index to;
        Eigen::Index from;
    };
    std::vector<Transition> transitions;
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < k; ++i) {
            if (std::abs(elements(i, j)) > 1e-14 * scale) {
                const auto ei = eigensystem[static_cast<std::size_t>(i)].energy;
                const auto ej = eigensystem[static_cast<std::size_t>(j)].energy;
                transitions.push_back({ej - ei, i, j});
            }
        }
    }
    std::stable_sort(transitions.begin(), transitions.end(),
                     [](const Transition& a, const Transition& b) { return a.omega < b.omega; });

    std::vector<JumpChannel> channels;
    std::size_t begin = 0;
    while (begin < transitions.size()) {
        std::size_t end = begin + 1;
        while (end < transitions.size() &&
               transitions[end].omega - transitions[end - 1].omega <= freq_tol) {
            ++end;
        }
        JumpChannel ch{0.0, Operator::Zero(coupling.rows(), coupling.cols()), 0.0};
        double sum = 0.0;
        for (std::size_t t = begin; t < end; ++t) {
            const auto& tr = transitions[t];
            ch.op += elements(tr.to, tr.from) * u.col(tr.to) * u.col(tr.from).adjoint();
            sum += tr.omega;
        }
        ch.bohr_frequency = sum / static_cast<double>(end - begin);
        channels.push_back(std::move(ch));
        begin = end;
    }
    return channels;
}

std::vector<JumpChannel> microscopic_channels(const JCParams& params, const StateSpace& space,
                                              const BathSpec& bath, double freq_tol)
{
    params.validate();
    bath.validate();
    if (space.n_max() < 2) {
        throw std::invalid_argument("microscopic generator needs n_max >= 2");
    }
    const auto [a, a_dag] = ladder_operators(space);
    auto channels = eigenoperators(a + a_dag, complete_eigensystem(params, space), freq_tol);
    for (auto& ch : channels) {
        if (std::abs(ch.bohr_frequency) <= freq_tol) {
            throw std::invalid_argument("zero-frequency jump channel: no rate is defined at w = 0");
        }
        ch.rate = rate(ch.bohr_frequency, bath);
    }
    return channels;
}

Superoperator microscopic_generator(const JCParams& params, const StateSpace& space,
                                    const BathSpec& bath, double freq_tol)
{
    const auto channels = microscopic_channels(params, space, bath, freq_tol);
    return lindblad_generator(hamiltonian(params, space), channels);
}

Superoperator microscopic_generator(const JCParams& params, const StateSpace& space,
                                    const BathSpec& bath)
{
    return microscopic_generator(params, space, bath, default_freq_tol(params));
}

namespace {

std::vector<JumpChannel> phenomenological_channels(const StateSpace& space, double gamma0, double nbar)
{
    if (!(gamma0 >= 0.0) || !std::isfinite(gamma0)) {
        throw std::invalid_argument("gamma0 must be nonnegative and finite");
    }
    if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
        throw std::invalid_argument("nbar must be nonnegative and finite");
    }
    auto [a, a_dag] = ladder_operators(space);
    std::vector<JumpChannel> channels;
    channels.push_back({0.0, std::move(a), gamma0 * (nbar + 1.0)});
    channels.push_back({0.0, std::move(a_dag), gamma0 * nbar});
    return channels;
}

} // namespace

Superoperator phenomenological_generator(const JCParams& params, const StateSpace& space,
                                         double gamma0, double nbar)
{
    const auto channels = phenomenological_channels(space, gamma0, nbar);
    return lindblad_generator(hamiltonian(params, space), channels);
}

Superoperator dressed_approx_generator(const JCParams& params, const StateSpace& space,
                                       double gamma0, double nbar, double freq_tol)
{
    if (!(freq_tol > 0.0)) {
        throw std::invalid_argument("freq_tol must be positive");
    }
    const auto eig = complete_eigensystem(params, space);
    const Operator u = eigenbasis_matrix(eig);
    const auto d = space.dim();

    const Operator h = hamiltonian(params, space);
    const auto channels = phenomenological_channels(space, gamma0, nbar);
    Superoperator dissipator = lindblad_generator(h, channels);
    dissipator.matrix -= lindblad_generator(h, {}).matrix;

    Superoperator dressed = superoperator_in_basis(dissipator, u);
    // Element (k, l) of the dressed-basis matrix rotates at nu_k - nu_l in the interaction picture.
    Eigen::VectorXd nu(d * d);
    for (Eigen::Index j = 0; j < d; ++j) {
        for (Eigen::Index i = 0; i < d; ++i) {
            nu(i + d * j) = eig[static_cast<std::size_t>(i)].energy - eig[static_cast<std::size_t>(j)].energy;
        }
    }
    for (Eigen::Index c = 0; c < d * d; ++c) {
        for (Eigen::Index r = 0; r < d * d; ++r) {
            if (std::abs(nu(r) - nu(c)) > freq_tol) {
                dressed.matrix(r, c) = 0.0;
            }
        }
    }
    Superoperator out = superoperator_from_basis(dressed, u);
    out.matrix += lindblad_generator(h, {}).matrix;
    return out;
}

Superoperator dressed_approx_generator(const JCParams& params, const StateSpace& space,
                                       double gamma0, double nbar)
{
    return dressed_approx_generator(params, space, gamma0, nbar, default_freq_tol(params));
}

Superoperator single_excitation_generator(const JCParams& params, double gamma_a, double gamma_b)
{
    params.validate();
    if (!(gamma_a >= 0.0) || !(gamma_b >= 0.0)) {
        throw std::invalid_argument("single-excitation rates must be nonnegative");
    }
    const double w0 = params.omega0;
    const double r = params.rabi;
    Operator h = Operator::Zero(3, 3);
    h(kSectorGround, kSectorGround) = -0.5 * w0;
    h(kSectorMinus, kSectorMinus) = 0.5 * w0 - r;
    h(kSectorPlus, kSectorPlus) = 0.5 * w0 + r;

    Operator to_minus = Operator::Zero(3, 3);
    to_minus(kSectorGround, kSectorMinus) = 1.0;
    Operator to_plus = Operator::Zero(3, 3);
    to_plus(kSectorGround, kSectorPlus) = 1.0;

    const std::vector<JumpChannel> channels{
        {w0 - r, std::move(to_minus), 0.5 * gamma_a},
        {w0 + r, std::move(to_plus), 0.5 * gamma_b},
    };
    return lindblad_generator(h, channels);
}

} // namespace jcq
