#pragma once

#include <optional>
#include <string>
#include <vector>

namespace jcq::acceptance {

struct Check {
    std::string what;
    double measured{0.0};
    std::string relation;  // "<", ">", ">=", "in"
    double bound{0.0};
    double bound_hi{0.0};  // upper end for "in"
    bool passed{false};
};

struct CriterionResult {
    int id{0};
    std::string title;
    std::vector<Check> checks;
    std::string error;  // set when the criterion threw

    bool passed() const;
};

struct Options {
    // Test hook: replace every tolerance of this criterion with NaN so it must fail.
    std::optional<int> corrupt_criterion;
};

std::vector<CriterionResult> run_all(const Options& options = {});

// One line per criterion: "[PASS] 3 title: what=measured < bound; ...".
std::string format_line(const CriterionResult& result);

// Least-squares fit of y(t) = 1 - A exp(-k t); returns max |y - fit| over the samples.
double single_exponential_residual(const std::vector<double>& t, const std::vector<double>& y);

} // namespace jcq::acceptance
