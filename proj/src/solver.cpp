#include "jcq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "jcq/errors.hpp"

namespace jcq {

namespace {

// Union-find over eigenvalues closer than tol.
std::vector<std::vector<Eigen::Index>> cluster_eigenvalues(const Eigen::VectorXcd& values, double tol)
{
    const auto n = values.size();
    std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
    std::iota(parent.begin(), parent.end(), Eigen::Index{0});
    auto find = [&](Eigen::Index x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            auto& p = parent[static_cast<std::size_t>(x)];
            p = parent[static_cast<std::size_t>(p)];
            x = p;
        }
        return x;
    };
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            if (std::abs(values(i) - values(j)) < tol) {
                const auto a = find(i);
                const auto b = find(j);
                if (a != b) {
                    parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
                }
            }
        }
    }
    std::vector<std::vector<Eigen::Index>> clusters;
    std::vector<Eigen::Index> slot(static_cast<std::size_t>(n), -1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto root = find(i);
        auto& s = slot[static_cast<std::size_t>(root)];
        if (s < 0) {
            s = static_cast<Eigen::Index>(clusters.size());
            clusters.emplace_back();
        }
        clusters[static_cast<std::size_t>(s)].push_back(i);
    }
    return clusters;
}

std::string describe_cluster(const Eigen::VectorXcd& values, const std::vector<Eigen::Index>& members)
{
    std::ostringstream os;
    os.precision(12);
    os << "{";
    for (std::size_t k = 0; k < members.size(); ++k) {
        const auto v = values(members[k]);
        os << (k ? ", " : "") << v.real() << (v.imag() < 0 ? "-" : "+") << std::abs(v.imag()) << "i";
    }
    os << "}";
    return os.str();
}

double inverse_condition(const Eigen::MatrixXcd& m)
{
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    if (s.size() == 0 || s(0) == 0.0) {
        return 0.0;
    }
    return s(s.size() - 1) / s(0);
}

// Right/left null spaces of (L - mu) of dimension k from the smallest singular triplets.
bool cluster_null_spaces(const Eigen::MatrixXcd& l, Complex mu, Eigen::Index k, Eigen::MatrixXcd& right,
                         Eigen::MatrixXcd& left)
{
    const auto n = l.rows();
    Eigen::MatrixXcd shifted = l - mu * Eigen::MatrixXcd::Identity(n, n);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const double scale = std::max(1.0, s(0));
    // The k smallest must be negligible and the next one must not be.
    if (s(n - k) > 1e-8 * scale) {
        return false;
    }
    if (n > k && s(n - k - 1) < 1e-6 * scale) {
        return false;
    }
    right = svd.matrixV().rightCols(k);
    left = svd.matrixU().rightCols(k).adjoint();
    return true;
}

} // namespace

std::vector<Eigen::Index> spectral_order(const Eigen::VectorXcd& values, double tol)
{
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return values(a).real() > values(b).real(); });
    auto begin = idx.begin();
    while (begin != idx.end()) {
        auto end = begin + 1;
        while (end != idx.end() && values(*(end - 1)).real() - values(*end).real() <= tol) {
            ++end;
        }
        std::stable_sort(begin, end,
                         [&](Eigen::Index a, Eigen::Index b) { return values(a).imag() < values(b).imag(); });
        begin = end;
    }
    return idx;
}

Eigen::VectorXcd DampingBasis::coefficients(const Operator& rho) const
{
    return left_vectors * vectorize(rho);
}

Operator DampingBasis::reconstruct(const Eigen::VectorXcd& c, double t) const
{
    Eigen::VectorXcd weights(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        weights(k) = c(k) * std::exp(eigenvalues(k) * t);
    }
    return unvectorize(right_vectors * weights, dim);
}

double DampingBasis::biorthonormality_residual() const
{
    const auto n = right_vectors.cols();
    return (left_vectors * right_vectors - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

double DampingBasis::right_residual(const Superoperator& l) const
{
    return (l.matrix * right_vectors - right_vectors * eigenvalues.asDiagonal()).cwiseAbs().maxCoeff();
}

double DampingBasis::left_residual(const Superoperator& l) const
{
    double worst = 0.0;
    for (Eigen::Index k = 0; k < left_vectors.rows(); ++k) {
        const double norm = std::max(1.0, left_vectors.row(k).cwiseAbs().maxCoeff());
        const double r =
            (left_vectors.row(k) * l.matrix - eigenvalues(k) * left_vectors.row(k)).cwiseAbs().maxCoeff();
        worst = std::max(worst, r / norm);
    }
    return worst;
}

Eigen::VectorXcd liouvillian_spectrum(const Superoperator& l)
{
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(l.matrix, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("Liouvillian eigenvalue iteration did not converge");
    }
    const Eigen::VectorXcd raw = es.eigenvalues();
    const auto order = spectral_order(raw);
    Eigen::VectorXcd out(raw.size());
    for (std::size_t k = 0; k < order.size(); ++k) {
        out(static_cast<Eigen::Index>(k)) = raw(order[k]);
    }
    return out;
}

DampingBasis damping_basis(const Superoperator& l)
{
    const auto n = l.matrix.rows();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> right_es(l.matrix, true);
    const Eigen::MatrixXcd lt = l.matrix.transpose();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> left_es(lt, true);
    if (right_es.info() != Eigen::Success || left_es.info() != Eigen::Success) {
        throw NumericalError("Liouvillian eigenvalue iteration did not converge");
    }
    Eigen::VectorXcd values = right_es.eigenvalues();
    Eigen::MatrixXcd right = right_es.eigenvectors();
    const Eigen::VectorXcd left_values = left_es.eigenvalues();
    // Rows w with w L = lambda w.
    const Eigen::MatrixXcd left_raw = left_es.eigenvectors().transpose();
    Eigen::MatrixXcd left(n, n);

    std::vector<bool> used(static_cast<std::size_t>(n), false);
    for (const auto& members : cluster_eigenvalues(values, kClusterTol)) {
        const auto k = static_cast<Eigen::Index>(members.size());
        std::vector<Eigen::Index> partners;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (used[static_cast<std::size_t>(j)]) {
                continue;
            }
            for (auto m : members) {
                if (std::abs(left_values(j) - values(m)) < kClusterTol) {
                    partners.push_back(j);
                    used[static_cast<std::size_t>(j)] = true;
                    break;
                }
            }
        }
        if (static_cast<Eigen::Index>(partners.size()) != k) {
            throw NumericalError("left/right eigenvalue pairing failed for cluster " +
                                 describe_cluster(values, members));
        }
        Eigen::MatrixXcd vr(n, k);
        Eigen::MatrixXcd wl(k, n);
        for (Eigen::Index c = 0; c < k; ++c) {
            vr.col(c) = right.col(members[static_cast<std::size_t>(c)]);
            wl.row(c) = left_raw.row(partners[static_cast<std::size_t>(c)]);
        }
        Eigen::MatrixXcd overlap = wl * vr;
        if (inverse_condition(overlap) < 1e-6) {
            // Schur-derived eigenvectors of a (near-)degenerate cluster may be almost parallel;
            // recover the eigenspaces directly.
            Complex mu(0.0);
            for (auto m : members) {
                mu += values(m);
            }
            mu /= static_cast<double>(k);
            if (!cluster_null_spaces(l.matrix, mu, k, vr, wl)) {
                throw NumericalError("Liouvillian is defective or near-defective at eigenvalue cluster " +
                                     describe_cluster(values, members));
            }
            overlap = wl * vr;
            if (inverse_condition(overlap) < 1e-6) {
                throw NumericalError("Liouvillian is defective or near-defective at eigenvalue cluster " +
                                     describe_cluster(values, members));
            }
        }
        wl = overlap.partialPivLu().solve(wl);
        if (k > 1) {
            const Eigen::MatrixXcd reduced = wl * l.matrix * vr;
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> small(reduced, true);
            const Eigen::MatrixXcd s = small.eigenvectors();
            if (inverse_condition(s) < 1e-6) {
                throw NumericalError("Liouvillian is defective at eigenvalue cluster " +
                                     describe_cluster(values, members));
            }
            vr = vr * s;
            wl = s.partialPivLu().solve(wl);
            for (Eigen::Index c = 0; c < k; ++c) {
                values(members[static_cast<std::size_t>(c)]) = small.eigenvalues()(c);
            }
        }
        for (Eigen::Index c = 0; c < k; ++c) {
            right.col(members[static_cast<std::size_t>(c)]) = vr.col(c);
            left.row(members[static_cast<std::size_t>(c)]) = wl.row(c);
        }
    }

    // Normalize right eigenoperators, compensating on the left.
    const Eigen::Index d = l.dim;
    for (Eigen::Index m = 0; m < n; ++m) {
        Complex scale;
        Complex tr(0.0);
        for (Eigen::Index i = 0; i < d; ++i) {
            tr += right(i + d * i, m);
        }
        if (std::abs(values(m)) < 1e-10 && std::abs(tr) > 1e-8) {
            scale = tr;
        } else {
            Eigen::Index pivot = 0;
            const double peak = right.col(m).cwiseAbs().maxCoeff();
            while (std::abs(right(pivot, m)) < peak * (1.0 - 1e-9)) {
                ++pivot;
            }
            scale = right.col(m).norm() * right(pivot, m) / std::abs(right(pivot, m));
        }
        right.col(m) /= scale;
        left.row(m) *= scale;
    }

    DampingBasis out;
    out.dim = d;
    const auto order = spectral_order(values);
    out.right_vectors.resize(n, n);
    out.left_vectors.resize(n, n);
    out.eigenvalues.resize(n);
    out.modes.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.right_vectors.col(k) = right.col(src);
        out.left_vectors.row(k) = left.row(src);
        out.eigenvalues(k) = values(src);
        out.modes.push_back({values(src), unvectorize(right.col(src), d),
                             unvectorize(left.row(src).transpose(), d).transpose()});
    }

    const double bio = out.biorthonormality_residual();
    if (bio > 1e-10) {
        std::ostringstream os;
        os << "damping basis biorthonormality residual " << bio << " exceeds 1e-10 (near-defective Liouvillian)";
        throw NumericalError(os.str());
    }
    return out;
}

TimeSeries evolve_spectral(const DampingBasis& basis, const DensityMatrix& rho0, std::span<const double> times)
{
    if (rho0.dim() != basis.dim) {
        throw std::invalid_argument("initial state dimension does not match the generator");
    }
    const Eigen::VectorXcd c = basis.coefficients(rho0.matrix());
    TimeSeries out;
    out.times.assign(times.begin(), times.end());
    out.states.reserve(times.size());
    const auto tol = DensityTolerances::uniform(kTrajectoryTol);
    for (double t : times) {
        out.states.emplace_back(basis.reconstruct(c, t), tol);
    }
    return out;
}

TimeSeries evolve_spectral(const Superoperator& l, const DensityMatrix& rho0, std::span<const double> times)
{
    return evolve_spectral(damping_basis(l), rho0, times);
}

double max_ode_step(const Superoperator& l, double frequency_scale)
{
    double proxy = 0.0;
    for (Eigen::Index k = 0; k < l.matrix.rows(); ++k) {
        proxy = std::max(proxy, std::abs(l.matrix(k, k).real()));
    }
    const double scale = std::max(frequency_scale, proxy);
    return scale > 0.0 ? 0.01 / scale : std::numeric_limits<double>::infinity();
}

namespace {

void check_grid(std::span<const double> times)
{
    if (times.empty()) {
        throw std::invalid_argument("time grid is empty");
    }
    if (times.front() < 0.0) {
        throw std::invalid_argument("time grid must start at t >= 0");
    }
    for (std::size_t k = 1; k < times.size(); ++k) {
        if (!(times[k] > times[k - 1])) {
            throw std::invalid_argument("time grid must be strictly increasing");
        }
    }
}

} // namespace

TimeSeries evolve_ode(const Superoperator& l, const DensityMatrix& rho0, std::span<const double> times, double dt,
                      double frequency_scale)
{
    check_grid(times);
    if (rho0.dim() != l.dim) {
        throw std::invalid_argument("initial state dimension does not match the generator");
    }
    const double limit = max_ode_step(l, frequency_scale);
    if (!(dt > 0.0) || dt > limit * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "ODE step " << dt << " violates the stability bound " << limit;
        throw std::invalid_argument(os.str());
    }

    const auto& m = l.matrix;
    Eigen::VectorXcd y = vectorize(rho0.matrix());
    Eigen::VectorXcd k1, k2, k3, k4;
    auto step = [&](double h) {
        k1 = m * y;
        k2 = m * (y + 0.5 * h * k1);
        k3 = m * (y + 0.5 * h * k2);
        k4 = m * (y + h * k3);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    };

    TimeSeries out;
    out.times.assign(times.begin(), times.end());
    out.states.reserve(times.size());
    const auto tol = DensityTolerances::uniform(kTrajectoryTol);
    double t = 0.0;
    for (double target : times) {
        const double span = target - t;
        if (span > 0.0) {
            const auto steps = static_cast<long>(std::ceil(span / dt - 1e-9));
            const double h = span / static_cast<double>(std::max(1L, steps));
            for (long s = 0; s < std::max(1L, steps); ++s) {
                step(h);
            }
        }
        t = target;
        out.states.emplace_back(unvectorize(y, l.dim), tol);
    }
    return out;
}

TimeSeries evolve_ode(const Superoperator& l, const DensityMatrix& rho0, double t_max, double dt,
                      double frequency_scale)
{
    if (!(t_max > 0.0) || !(dt > 0.0)) {
        throw std::invalid_argument("t_max and dt must be positive");
    }
    const auto count = static_cast<long>(std::floor(t_max / dt + 1e-9));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count + 1));
    for (long k = 0; k <= count; ++k) {
        grid.push_back(static_cast<double>(k) * dt);
    }
    return evolve_ode(l, rho0, grid, dt, frequency_scale);
}

DensityMatrix steady_state(const Superoperator& l, double kernel_tol)
{
    const auto n = l.matrix.rows();
    const Eigen::MatrixXcd adj = l.matrix.adjoint();
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(adj);
    qr.setThreshold(kernel_tol);
    const auto rank = qr.rank();
    if (rank != n - 1) {
        throw NumericalError("steady state requires a one-dimensional kernel, found dimension " +
                             std::to_string(n - rank));
    }
    // null(L) is the orthogonal complement of range(L^dag) = span of the first `rank` columns of Q.
    const Eigen::VectorXcd v = qr.householderQ() * Eigen::VectorXcd::Unit(n, n - 1);
    Operator rho = unvectorize(v, l.dim);
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-12) {
        throw NumericalError("kernel element of the Liouvillian is traceless");
    }
    rho /= tr;
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return DensityMatrix(std::move(rho));
}

Operator gibbs_state(const Operator& hamiltonian, double temperature)
{
    if (!(temperature > 0.0)) {
        throw std::invalid_argument("Gibbs state needs a positive temperature");
    }
    Eigen::SelfAdjointEigenSolver<Operator> es(hamiltonian);
    const Eigen::VectorXd e = es.eigenvalues();
    const double e0 = e.minCoeff();
    Eigen::VectorXd w = ((e.array() - e0) * (-1.0 / temperature)).exp();
    w /= w.sum();
    return es.eigenvectors() * w.cast<Complex>().asDiagonal() * es.eigenvectors().adjoint();
}

double trace_distance(const Operator& a, const Operator& b)
{
    const Operator diff = a - b;
    const Operator herm = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<Operator> es(herm, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double gibbs_tail_mass(const Operator& hamiltonian, const StateSpace& space, double temperature)
{
    const Operator rho = gibbs_state(hamiltonian, temperature);
    double mass = 0.0;
    for (Atom s : {Atom::g, Atom::e}) {
        const auto i = space.index({space.n_max(), s});
        mass += rho(i, i).real();
    }
    return mass;
}

OscillationInfo dominant_oscillation(const DampingBasis& basis, const Operator& rho0, const Operator& observable,
                                     double freq_floor, double amp_floor)
{
    const Eigen::VectorXcd c = basis.coefficients(rho0);
    OscillationInfo best;
    for (std::size_t k = 0; k < basis.modes.size(); ++k) {
        const auto& mode = basis.modes[k];
        if (std::abs(mode.eigenvalue.imag()) <= freq_floor) {
            continue;
        }
        const double amp = std::abs(c(static_cast<Eigen::Index>(k)) * (observable * mode.right).trace());
        if (amp > best.amplitude) {
            best = {std::abs(mode.eigenvalue.imag()), amp, mode.eigenvalue};
        }
    }
    if (best.amplitude <= amp_floor) {
        return {};
    }
    return best;
}

} // namespace jcq
