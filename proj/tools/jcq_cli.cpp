// jcq: command-line driver for Jaynes-Cummings open-system experiments.
//
//   jcq evolve   --config run.cfg --out run.csv
//   jcq compare  --config run.cfg --against phen --out cmp.csv
//   jcq steady   --config hot.cfg --out pops.csv
//   jcq spectrum --config run.cfg --out eig.csv
//   jcq verify
//
// Exit codes: 0 success, 1 configuration error, 2 numerical or verification failure.

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>

#include "jcq/acceptance.hpp"
#include "jcq/errors.hpp"
#include "jcq/experiments.hpp"

namespace {

struct Overrides {
    std::string config;
    std::string out;
    std::optional<std::string> model;
    std::optional<int> n_max;
    std::optional<double> tau_max;
    std::optional<int> steps;
    std::optional<std::string> solver;
    std::optional<double> dt;
};

void add_scenario_flags(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config, "Scenario file (key = value lines)");
    cmd->add_option("--out", o.out, "Output CSV path (stdout when omitted)");
    cmd->add_option("--model", o.model, "micro | phen | dressed");
    cmd->add_option("--nmax", o.n_max, "Photon-number cutoff");
    cmd->add_option("--tau-max", o.tau_max, "End of the tau = 2 rabi t axis");
    cmd->add_option("--steps", o.steps, "Number of grid points");
    cmd->add_option("--solver", o.solver, "spectral | ode");
    cmd->add_option("--dt", o.dt, "RK4 step for the ode solver");
}

jcq::Scenario load(const Overrides& o)
{
    jcq::Scenario s = o.config.empty() ? jcq::Scenario{} : jcq::load_scenario(o.config);
    if (o.model) s.model = jcq::parse_model(*o.model);
    if (o.n_max) s.n_max = *o.n_max;
    if (o.tau_max) s.tau_max = *o.tau_max;
    if (o.steps) s.steps = *o.steps;
    if (o.solver) s.solver = jcq::parse_solver(*o.solver);
    if (o.dt) s.dt = *o.dt;
    s.validate();
    return s;
}

void emit(const std::string& path, const std::string& content)
{
    if (path.empty()) {
        std::cout << content;
    } else {
        jcq::write_file_atomic(path, content);
    }
}

int verify(std::optional<int> corrupt)
{
    jcq::acceptance::Options options;
    options.corrupt_criterion = corrupt;
    const auto results = jcq::acceptance::run_all(options);
    const jcq::acceptance::CriterionResult* first_failure = nullptr;
    for (const auto& r : results) {
        std::cout << jcq::acceptance::format_line(r) << "\n";
        if (!r.passed() && !first_failure) {
            first_failure = &r;
        }
    }
    if (first_failure) {
        std::cerr << "verify: criterion " << first_failure->id << " (" << first_failure->title << ") failed\n";
        return 2;
    }
    std::cout << "verify: all " << results.size() << " criteria passed\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Jaynes-Cummings model with cavity losses"};
    app.require_subcommand(1);

    Overrides evolve_o, compare_o, steady_o, spectrum_o;
    std::string config_b;
    std::optional<std::string> against;
    std::optional<int> corrupt;

    auto* evolve_cmd = app.add_subcommand("evolve", "Time series of the selected observables");
    add_scenario_flags(evolve_cmd, evolve_o);
    auto* compare_cmd = app.add_subcommand("compare", "Run two models on the same scenario");
    add_scenario_flags(compare_cmd, compare_o);
    compare_cmd->add_option("--config-b", config_b, "Second scenario file");
    compare_cmd->add_option("--against", against, "Second model (micro | phen | dressed)");
    auto* steady_cmd = app.add_subcommand("steady", "Steady state and Gibbs comparison");
    add_scenario_flags(steady_cmd, steady_o);
    auto* spectrum_cmd = app.add_subcommand("spectrum", "Liouvillian eigenvalues");
    add_scenario_flags(spectrum_cmd, spectrum_o);
    auto* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite");
    verify_cmd->add_option("--corrupt-criterion", corrupt)->group("");  // test hook

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*evolve_cmd) {
            emit(evolve_o.out, jcq::to_csv(jcq::run_evolve(load(evolve_o))));
        } else if (*compare_cmd) {
            const jcq::Scenario first = load(compare_o);
            jcq::Scenario second;
            if (!config_b.empty()) {
                Overrides b = compare_o;
                b.config = config_b;
                b.model.reset();
                second = load(b);
                if (against) second.model = jcq::parse_model(*against);
            } else if (against) {
                second = first;
                second.model = jcq::parse_model(*against);
            } else {
                throw jcq::ConfigError("compare needs --against <model> or --config-b <path>");
            }
            const auto result = jcq::run_compare(first, second);
            emit(compare_o.out, jcq::to_csv(result.table));
            (compare_o.out.empty() ? std::cerr : std::cout) << result.summary;
        } else if (*steady_cmd) {
            const auto report = jcq::run_steady(load(steady_o));
            emit(steady_o.out, jcq::to_csv(report.populations));
            (steady_o.out.empty() ? std::cerr : std::cout) << report.summary;
        } else if (*spectrum_cmd) {
            emit(spectrum_o.out, jcq::to_csv(jcq::run_spectrum(load(spectrum_o))));
        } else if (*verify_cmd) {
            return verify(corrupt);
        }
    } catch (const jcq::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const jcq::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
