#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jcq/bath.hpp"
#include "jcq/jcmodel.hpp"
#include "jcq/observables.hpp"

namespace jcq {

enum class Model { micro, phen, dressed };
enum class SolverKind { spectral, ode };

std::string_view model_name(Model m);
Model parse_model(std::string_view s);  // throws ConfigError
std::string_view solver_name(SolverKind s);
SolverKind parse_solver(std::string_view s);  // throws ConfigError

// "ground", "fock:<n>,<g|e>" or "dressed:<N>,<+|->".
struct InitialState {
    enum class Kind { ground, fock, dressed };
    Kind kind{Kind::ground};
    BasisLabel fock{};
    int manifold{0};
    int branch{0};

    int excitations() const;
    std::string to_string() const;
    static InitialState parse(std::string_view text);  // throws ConfigError

    friend bool operator==(const InitialState&, const InitialState&) = default;
};

// Declarative experiment. Times on the output axis are tau = 2 rabi t; t is in 1/omega0 units.
struct Scenario {
    Model model{Model::micro};
    JCParams params{1.0, 0.1};
    BathSpec bath{0.0, FlatSpectrum{0.02}};
    InitialState initial{InitialState::Kind::fock, {0, Atom::e}, 0, 0};
    int n_max{3};
    double tau_max{100.0};
    int steps{2000};  // number of grid points, tau_k = k tau_max / (steps - 1)
    ObservableSet observables{{Observable::pop_0g, Observable::pop_1g, Observable::atomic_ground}};
    SolverKind solver{SolverKind::spectral};
    double dt{0.01};
    std::optional<double> freq_tol;

    // Throws ConfigError.
    void validate() const;

    std::vector<double> tau_grid() const;
    std::vector<double> time_grid() const;
    double frequency_tolerance() const;

    // Phenomenological loss rate gamma(omega0) = J(omega0) and occupation n(omega0, T).
    double phen_gamma0() const;
    double phen_nbar() const;
};

// Parses "key = value" lines with '#' comments. Missing keys keep their defaults.
// Throws ConfigError naming the offending line.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

// Canonical key order; parse(serialize(s)) reproduces s.
std::string serialize_scenario(const Scenario& s);

// 17 significant digits, locale independent.
std::string format_double(double v);

} // namespace jcq
