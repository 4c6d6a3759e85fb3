#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jcq/scenario.hpp"
#include "jcq/solver.hpp"

namespace jcq {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

// Header row, comma separator, LF line ends, 17 significant digits.
std::string to_csv(const Table& table);

// Writes through a temporary sibling file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

Superoperator build_generator(const Scenario& s);
DensityMatrix initial_density(const Scenario& s);
TimeSeries run_trajectory(const Scenario& s, const Superoperator& l);

// Columns: tau, then one column per selected observable.
Table run_evolve(const Scenario& s);

struct CompareResult {
    Table table;
    std::vector<std::pair<std::string, double>> max_abs_diff;  // per observable
    OscillationInfo first;
    OscillationInfo second;
    std::string summary;
};

// Both scenarios must agree on everything except the model; throws ConfigError otherwise.
CompareResult run_compare(const Scenario& first, const Scenario& second);

// Liouvillian eigenvalues as (re, im) rows, sorted by re descending then im ascending.
Table run_spectrum(const Scenario& s);

struct SteadyReport {
    Table populations;  // columns n, s (0 = g, 1 = e), population
    double trace_distance_gibbs_jc{0.0};
    double trace_distance_gibbs_free{0.0};
    double tail_mass{0.0};
    std::string summary;
};

// Steady state of the scenario generator, compared with both Gibbs states when T > 0.
// Throws ConfigError when the Gibbs tail on the cutoff layer is not below 1e-10.
SteadyReport run_steady(const Scenario& s);

} // namespace jcq
