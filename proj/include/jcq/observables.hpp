#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jcq/hilbert.hpp"
#include "jcq/jcmodel.hpp"

namespace jcq {

enum class Observable {
    pop_0g,
    pop_1g,
    pop_0e,
    atomic_ground,
    atomic_excited,
    photon_number,
    excitation_number,
    trace_defect,
    herm_defect,
    min_eigenvalue,
};

std::string_view observable_name(Observable o);
std::optional<Observable> parse_observable(std::string_view name);

// Ordered, duplicate-free, nonempty selection of observables.
class ObservableSet {
public:
    explicit ObservableSet(std::vector<Observable> items);

    // Comma-separated names; throws ConfigError on unknown, duplicate or empty lists.
    static ObservableSet parse(std::string_view list);

    const std::vector<Observable>& items() const { return items_; }
    std::string to_string() const;

    friend bool operator==(const ObservableSet&, const ObservableSet&) = default;

private:
    std::vector<Observable> items_;
};

// <label|rho|label>. Throws std::out_of_range for labels outside the space.
double population(const DensityMatrix& rho, const StateSpace& space, const BasisLabel& label);
double population(const DensityMatrix& rho, const DressedState& state);

// sum_n <n,g|rho|n,g>
double atomic_ground_population(const DensityMatrix& rho, const StateSpace& space);
double atomic_excited_population(const DensityMatrix& rho, const StateSpace& space);

DensityDefects diagnostics(const DensityMatrix& rho);

// Linear observables as operators; nullopt for the diagnostic ones.
std::optional<Operator> observable_operator(Observable o, const StateSpace& space);

double evaluate(Observable o, const DensityMatrix& rho, const StateSpace& space);

} // namespace jcq
