#include "jcq/observables.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "jcq/errors.hpp"

namespace jcq {

namespace {

constexpr std::array<std::pair<Observable, std::string_view>, 10> kNames{{
    {Observable::pop_0g, "pop_0g"},
    {Observable::pop_1g, "pop_1g"},
    {Observable::pop_0e, "pop_0e"},
    {Observable::atomic_ground, "atomic_ground"},
    {Observable::atomic_excited, "atomic_excited"},
    {Observable::photon_number, "photon_number"},
    {Observable::excitation_number, "excitation_number"},
    {Observable::trace_defect, "trace_defect"},
    {Observable::herm_defect, "herm_defect"},
    {Observable::min_eigenvalue, "min_eigenvalue"},
}};

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double checked_real(Complex z)
{
    if (std::abs(z.imag()) > 1e-12) {
        throw NumericalError("population has imaginary part " + std::to_string(z.imag()));
    }
    return z.real();
}

double atomic_population(const DensityMatrix& rho, const StateSpace& space, Atom s)
{
    if (rho.dim() != space.dim()) {
        throw std::invalid_argument("density matrix dimension does not match the space");
    }
    Complex sum(0.0);
    for (int n = 0; n <= space.n_max(); ++n) {
        const auto i = space.index({n, s});
        sum += rho.matrix()(i, i);
    }
    return checked_real(sum);
}

} // namespace

std::string_view observable_name(Observable o)
{
    for (const auto& [value, name] : kNames) {
        if (value == o) {
            return name;
        }
    }
    return "unknown";
}

std::optional<Observable> parse_observable(std::string_view name)
{
    for (const auto& [value, n] : kNames) {
        if (n == name) {
            return value;
        }
    }
    return std::nullopt;
}

ObservableSet::ObservableSet(std::vector<Observable> items) : items_(std::move(items))
{
    if (items_.empty()) {
        throw ConfigError("observable set must not be empty");
    }
    for (std::size_t i = 0; i < items_.size(); ++i) {
        for (std::size_t j = i + 1; j < items_.size(); ++j) {
            if (items_[i] == items_[j]) {
                throw ConfigError("duplicate observable '" + std::string(observable_name(items_[i])) + "'");
            }
        }
    }
}

ObservableSet ObservableSet::parse(std::string_view list)
{
    std::vector<Observable> items;
    std::size_t pos = 0;
    while (pos <= list.size()) {
        const auto comma = list.find(',', pos);
        const auto token = trim(list.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos));
        if (token.empty()) {
            throw ConfigError("empty observable name in list '" + std::string(list) + "'");
        }
        const auto o = parse_observable(token);
        if (!o) {
            throw ConfigError("unknown observable '" + std::string(token) + "'");
        }
        items.push_back(*o);
        if (comma == std::string_view::npos) {
            break;
        }
        pos = comma + 1;
    }
    return ObservableSet(std::move(items));
}

std::string ObservableSet::to_string() const
{
    std::string out;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (i) {
            out += ',';
        }
        out += observable_name(items_[i]);
    }
    return out;
}

double population(const DensityMatrix& rho, const StateSpace& space, const BasisLabel& label)
{
    if (rho.dim() != space.dim()) {
        throw std::invalid_argument("density matrix dimension does not match the space");
    }
    const auto i = space.index(label);
    return checked_real(rho.matrix()(i, i));
}

double population(const DensityMatrix& rho, const DressedState& state)
{
    if (state.coefficients.size() != rho.dim()) {
        throw std::out_of_range("dressed state does not live in the density matrix space");
    }
    return checked_real(state.coefficients.dot(rho.matrix() * state.coefficients));
}

double atomic_ground_population(const DensityMatrix& rho, const StateSpace& space)
{
    return atomic_population(rho, space, Atom::g);
}

double atomic_excited_population(const DensityMatrix& rho, const StateSpace& space)
{
    return atomic_population(rho, space, Atom::e);
}

DensityDefects diagnostics(const DensityMatrix& rho) { return rho.defects(); }

std::optional<Operator> observable_operator(Observable o, const StateSpace& space)
{
    auto diag_of = [&](auto weight) {
        Operator op = space.zero();
        for (Eigen::Index i = 0; i < space.dim(); ++i) {
            op(i, i) = weight(space.label(i));
        }
        return op;
    };
    switch (o) {
    case Observable::pop_0g:
        return projector(space.basis_vector({0, Atom::g}));
    case Observable::pop_1g:
        if (space.n_max() < 1) {
            throw std::out_of_range("pop_1g needs n_max >= 1");
        }
        return projector(space.basis_vector({1, Atom::g}));
    case Observable::pop_0e:
        return projector(space.basis_vector({0, Atom::e}));
    case Observable::atomic_ground:
        return diag_of([](const BasisLabel& b) { return b.atom == Atom::g ? 1.0 : 0.0; });
    case Observable::atomic_excited:
        return diag_of([](const BasisLabel& b) { return b.atom == Atom::e ? 1.0 : 0.0; });
    case Observable::photon_number:
        return diag_of([](const BasisLabel& b) { return static_cast<double>(b.photons); });
    case Observable::excitation_number:
        return excitation_number(space);
    case Observable::trace_defect:
    case Observable::herm_defect:
    case Observable::min_eigenvalue:
        return std::nullopt;
    }
    return std::nullopt;
}

double evaluate(Observable o, const DensityMatrix& rho, const StateSpace& space)
{
    switch (o) {
    case Observable::pop_0g:
        return population(rho, space, {0, Atom::g});
    case Observable::pop_1g:
        return population(rho, space, {1, Atom::g});
    case Observable::pop_0e:
        return population(rho, space, {0, Atom::e});
    case Observable::atomic_ground:
        return atomic_ground_population(rho, space);
    case Observable::atomic_excited:
        return atomic_excited_population(rho, space);
    case Observable::trace_defect:
        return rho.defects().trace_defect;
    case Observable::herm_defect:
        return rho.defects().herm_defect;
    case Observable::min_eigenvalue:
        return rho.defects().min_eigenvalue;
    case Observable::photon_number:
    case Observable::excitation_number:
        return checked_real((*observable_operator(o, space) * rho.matrix()).trace());
    }
    throw std::logic_error("unhandled observable");
}

} // namespace jcq
