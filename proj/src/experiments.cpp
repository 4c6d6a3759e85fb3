#include "jcq/experiments.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "jcq/errors.hpp"

namespace jcq {

std::string to_csv(const Table& table)
{
    std::string out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        out += (c ? "," : "");
        out += table.header[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out += (c ? "," : "");
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw ConfigError("cannot open '" + tmp.string() + "' for writing");
        }
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) {
            throw ConfigError("failed writing '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw ConfigError("cannot move output into place at '" + path.string() + "'");
    }
}

Superoperator build_generator(const Scenario& s)
{
    s.validate();
    const StateSpace space(s.n_max);
    switch (s.model) {
    case Model::micro:
        return microscopic_generator(s.params, space, s.bath, s.frequency_tolerance());
    case Model::phen:
        return phenomenological_generator(s.params, space, s.phen_gamma0(), s.phen_nbar());
    case Model::dressed:
        return dressed_approx_generator(s.params, space, s.phen_gamma0(), s.phen_nbar(), s.frequency_tolerance());
    }
    throw std::logic_error("unhandled model");
}

DensityMatrix initial_density(const Scenario& s)
{
    const StateSpace space(s.n_max);
    switch (s.initial.kind) {
    case InitialState::Kind::ground:
        return DensityMatrix::pure(space.basis_vector({0, Atom::g}));
    case InitialState::Kind::fock:
        if (!space.contains(s.initial.fock)) {
            throw ConfigError("initial Fock state outside the truncated space");
        }
        return DensityMatrix::pure(space.basis_vector(s.initial.fock));
    case InitialState::Kind::dressed: {
        const auto states = dressed_states(s.params, space);
        const auto k = find_state(states, DressedLabel::dressed(s.initial.manifold, s.initial.branch));
        return DensityMatrix::pure(states[k].coefficients);
    }
    }
    throw std::logic_error("unhandled initial state");
}

TimeSeries run_trajectory(const Scenario& s, const Superoperator& l)
{
    const auto rho0 = initial_density(s);
    const auto times = s.time_grid();
    if (s.solver == SolverKind::spectral) {
        return evolve_spectral(l, rho0, times);
    }
    const double scale = std::max(s.params.omega0, 2.0 * s.params.rabi);
    try {
        return evolve_ode(l, rho0, times, s.dt, scale);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

namespace {

Table observable_table(const Scenario& s, const TimeSeries& ts)
{
    const StateSpace space(s.n_max);
    const auto taus = s.tau_grid();
    Table t;
    t.header.emplace_back("tau");
    for (auto o : s.observables.items()) {
        t.header.emplace_back(observable_name(o));
    }
    for (std::size_t k = 0; k < ts.states.size(); ++k) {
        std::vector<double> row{taus[k]};
        for (auto o : s.observables.items()) {
            row.push_back(evaluate(o, ts.states[k], space));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

struct OscillationPair {
    std::string observable;
    OscillationInfo first;
    OscillationInfo second;
};

// First linear observable in which both models oscillate; otherwise the first in which
// either does; otherwise empty.
OscillationPair oscillation_pair(const Scenario& a, const Superoperator& la, const Scenario& b,
                                 const Superoperator& lb)
{
    const StateSpace space(a.n_max);
    const auto basis_a = damping_basis(la);
    const auto basis_b = damping_basis(lb);
    const Operator rho_a = initial_density(a).matrix();
    const Operator rho_b = initial_density(b).matrix();
    std::optional<OscillationPair> fallback;
    for (auto o : a.observables.items()) {
        if (auto op = observable_operator(o, space)) {
            OscillationPair p{std::string(observable_name(o)), dominant_oscillation(basis_a, rho_a, *op),
                              dominant_oscillation(basis_b, rho_b, *op)};
            if (p.first.frequency > 0.0 && p.second.frequency > 0.0) {
                return p;
            }
            if (!fallback && (p.first.frequency > 0.0 || p.second.frequency > 0.0)) {
                fallback = p;
            }
        }
    }
    return fallback.value_or(OscillationPair{"none", {}, {}});
}

} // namespace

Table run_evolve(const Scenario& s)
{
    const auto l = build_generator(s);
    return observable_table(s, run_trajectory(s, l));
}

CompareResult run_compare(const Scenario& first, const Scenario& second)
{
    Scenario a_base = first;
    Scenario b_base = second;
    a_base.model = b_base.model = Model::micro;
    if (serialize_scenario(a_base) != serialize_scenario(b_base)) {
        throw ConfigError("compared scenarios must differ only in the model");
    }
    const auto la = build_generator(first);
    const auto lb = build_generator(second);
    const auto ta = observable_table(first, run_trajectory(first, la));
    const auto tb = observable_table(second, run_trajectory(second, lb));

    const std::string na(model_name(first.model));
    const std::string nb(model_name(second.model));
    const auto& obs = first.observables.items();
    CompareResult out;
    out.table.header.emplace_back("tau");
    for (auto o : obs) {
        const std::string name(observable_name(o));
        out.table.header.push_back(na + "." + name);
        out.table.header.push_back(nb + "." + name);
        out.table.header.push_back("diff." + name);
        out.max_abs_diff.emplace_back(name, 0.0);
    }
    for (std::size_t k = 0; k < ta.rows.size(); ++k) {
        std::vector<double> row{ta.rows[k][0]};
        for (std::size_t j = 0; j < obs.size(); ++j) {
            const double va = ta.rows[k][j + 1];
            const double vb = tb.rows[k][j + 1];
            row.insert(row.end(), {va, vb, va - vb});
            out.max_abs_diff[j].second = std::max(out.max_abs_diff[j].second, std::abs(va - vb));
        }
        out.table.rows.push_back(std::move(row));
    }

    const auto osc = oscillation_pair(first, la, second, lb);
    out.first = osc.first;
    out.second = osc.second;
    std::ostringstream os;
    for (const auto& [name, diff] : out.max_abs_diff) {
        os << "max_abs_diff." << name << " = " << format_double(diff) << "\n";
    }
    os << "oscillation_observable = " << osc.observable << "\n";
    os << "frequency." << na << " = " << format_double(out.first.frequency) << "\n";
    os << "frequency." << nb << " = " << format_double(out.second.frequency) << "\n";
    const double shift = out.first.frequency - out.second.frequency;
    os << "frequency_shift = " << format_double(shift) << "\n";
    const double rel = out.first.frequency > 0.0 ? shift / out.first.frequency : 0.0;
    os << "relative_shift = " << format_double(rel) << "\n";
    out.summary = os.str();
    return out;
}

Table run_spectrum(const Scenario& s)
{
    const auto values = liouvillian_spectrum(build_generator(s));
    Table t;
    t.header = {"re", "im"};
    for (Eigen::Index k = 0; k < values.size(); ++k) {
        t.rows.push_back({values(k).real(), values(k).imag()});
    }
    return t;
}

SteadyReport run_steady(const Scenario& s)
{
    s.validate();
    const StateSpace space(s.n_max);
    SteadyReport out;
    if (s.bath.temperature > 0.0) {
        out.tail_mass = gibbs_tail_mass(hamiltonian(s.params, space), space, s.bath.temperature);
        if (!(out.tail_mass < 1e-10)) {
            throw ConfigError("n_max = " + std::to_string(s.n_max) + " too small at this temperature: Gibbs weight " +
                              format_double(out.tail_mass) + " on the cutoff layer (need < 1e-10)");
        }
    }
    const auto rho = steady_state(build_generator(s));
    out.populations.header = {"n", "s", "population"};
    for (Eigen::Index i = 0; i < space.dim(); ++i) {
        const auto label = space.label(i);
        out.populations.rows.push_back(
            {static_cast<double>(label.photons), static_cast<double>(label.atom), population(rho, space, label)});
    }
    std::ostringstream os;
    os << "model = " << model_name(s.model) << "\n";
    os << "temperature = " << format_double(s.bath.temperature) << "\n";
    if (s.bath.temperature > 0.0) {
        out.trace_distance_gibbs_jc =
            trace_distance(rho.matrix(), gibbs_state(hamiltonian(s.params, space), s.bath.temperature));
        out.trace_distance_gibbs_free =
            trace_distance(rho.matrix(), gibbs_state(free_hamiltonian(s.params, space), s.bath.temperature));
        os << "tail_mass = " << format_double(out.tail_mass) << "\n";
        os << "trace_distance.gibbs_jc = " << format_double(out.trace_distance_gibbs_jc) << "\n";
        os << "trace_distance.gibbs_free = " << format_double(out.trace_distance_gibbs_free) << "\n";
    } else {
        const double ground = population(rho, space, {0, Atom::g});
        os << "ground_population = " << format_double(ground) << "\n";
    }
    out.summary = os.str();
    return out;
}

} // namespace jcq
