#include "jcq/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "jcq/errors.hpp"
#include "jcq/generators.hpp"

namespace jcq {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view text)
{
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ConfigError("key '" + std::string(key) + "': not a finite number: '" + std::string(text) + "'");
    }
    return v;
}

int parse_int(std::string_view key, std::string_view text)
{
    int v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("key '" + std::string(key) + "': not an integer: '" + std::string(text) + "'");
    }
    return v;
}

} // namespace

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    if (ec != std::errc()) {
        throw std::runtime_error("number formatting failed");
    }
    return std::string(buf, ptr);
}

std::string_view model_name(Model m)
{
    switch (m) {
    case Model::micro:
        return "micro";
    case Model::phen:
        return "phen";
    case Model::dressed:
        return "dressed";
    }
    return "unknown";
}

Model parse_model(std::string_view s)
{
    if (s == "micro") {
        return Model::micro;
    }
    if (s == "phen") {
        return Model::phen;
    }
    if (s == "dressed") {
        return Model::dressed;
    }
    throw ConfigError("unknown model '" + std::string(s) + "' (expected micro, phen or dressed)");
}

std::string_view solver_name(SolverKind s) { return s == SolverKind::spectral ? "spectral" : "ode"; }

SolverKind parse_solver(std::string_view s)
{
    if (s == "spectral") {
        return SolverKind::spectral;
    }
    if (s == "ode") {
        return SolverKind::ode;
    }
    throw ConfigError("unknown solver '" + std::string(s) + "' (expected spectral or ode)");
}

int InitialState::excitations() const
{
    switch (kind) {
    case Kind::ground:
        return 0;
    case Kind::fock:
        return fock.excitations();
    case Kind::dressed:
        return manifold;
    }
    return 0;
}

std::string InitialState::to_string() const
{
    switch (kind) {
    case Kind::ground:
        return "ground";
    case Kind::fock:
        return "fock:" + std::to_string(fock.photons) + "," + atom_symbol(fock.atom);
    case Kind::dressed:
        return "dressed:" + std::to_string(manifold) + "," + (branch > 0 ? "+" : "-");
    }
    return {};
}

InitialState InitialState::parse(std::string_view text)
{
    text = trim(text);
    if (text == "ground") {
        return {};
    }
    const auto colon = text.find(':');
    const auto comma = text.find(',');
    if (colon == std::string_view::npos || comma == std::string_view::npos || comma < colon) {
        throw ConfigError("initial state '" + std::string(text) + "' must be ground, fock:n,s or dressed:N,+/-");
    }
    const auto kind = text.substr(0, colon);
    const auto number = trim(text.substr(colon + 1, comma - colon - 1));
    const auto tag = trim(text.substr(comma + 1));
    const int n = parse_int("initial", number);
    if (n < 0) {
        throw ConfigError("initial state index must be nonnegative");
    }
    InitialState out;
    if (kind == "fock") {
        out.kind = Kind::fock;
        if (tag == "g") {
            out.fock = {n, Atom::g};
        } else if (tag == "e") {
            out.fock = {n, Atom::e};
        } else {
            throw ConfigError("fock atom label must be g or e, got '" + std::string(tag) + "'");
        }
    } else if (kind == "dressed") {
        out.kind = Kind::dressed;
        out.manifold = n;
        if (tag == "+") {
            out.branch = 1;
        } else if (tag == "-") {
            out.branch = -1;
        } else {
            throw ConfigError("dressed branch must be + or -, got '" + std::string(tag) + "'");
        }
        if (n < 1) {
            throw ConfigError("dressed manifolds start at N = 1");
        }
    } else {
        throw ConfigError("unknown initial state kind '" + std::string(kind) + "'");
    }
    return out;
}

void Scenario::validate() const
{
    try {
        params.validate();
        bath.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (!(params.rabi > 0.0)) {
        throw ConfigError("rabi must be positive: the time axis is tau = 2 rabi t");
    }
    if (n_max < initial.excitations() + 2) {
        throw ConfigError("n_max = " + std::to_string(n_max) + " too small for initial state " + initial.to_string() +
                          " (need n_max >= excitations + 2 = " + std::to_string(initial.excitations() + 2) + ")");
    }
    if (!(tau_max > 0.0)) {
        throw ConfigError("tau_max must be positive");
    }
    if (steps < 2) {
        throw ConfigError("time grid needs at least 2 points, got steps = " + std::to_string(steps));
    }
    if (solver == SolverKind::ode && !(dt > 0.0)) {
        throw ConfigError("ode solver needs dt > 0");
    }
    if (freq_tol && !(*freq_tol > 0.0)) {
        throw ConfigError("freq_tol must be positive");
    }
}

std::vector<double> Scenario::tau_grid() const
{
    std::vector<double> out(static_cast<std::size_t>(std::max(steps, 0)));
    for (int k = 0; k < steps; ++k) {
        out[static_cast<std::size_t>(k)] = tau_max * static_cast<double>(k) / static_cast<double>(steps - 1);
    }
    return out;
}

std::vector<double> Scenario::time_grid() const
{
    auto out = tau_grid();
    for (auto& t : out) {
        t /= 2.0 * params.rabi;
    }
    return out;
}

double Scenario::frequency_tolerance() const { return freq_tol ? *freq_tol : default_freq_tol(params); }

double Scenario::phen_gamma0() const { return spectral_density(params.omega0, bath.spectrum); }

double Scenario::phen_nbar() const { return occupation(params.omega0, bath.temperature); }

Scenario parse_scenario(std::string_view text)
{
    Scenario s;
    std::map<std::string, std::pair<std::string, int>> entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        ++line_no;
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty()) {
            throw ConfigError("line " + std::to_string(line_no) + ": empty key or value");
        }
        if (!entries.emplace(key, std::make_pair(value, line_no)).second) {
            throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
    }

    auto take = [&](const std::string& key) -> std::optional<std::string> {
        auto it = entries.find(key);
        if (it == entries.end()) {
            return std::nullopt;
        }
        auto v = it->second.first;
        entries.erase(it);
        return v;
    };
    auto take_double = [&](const std::string& key, double fallback) {
        const auto v = take(key);
        return v ? parse_double(key, *v) : fallback;
    };

    if (auto v = take("model")) {
        s.model = parse_model(*v);
    }
    s.params.omega0 = take_double("omega0", s.params.omega0);
    s.params.rabi = take_double("rabi", s.params.rabi);

    const std::string kind = take("bath.kind").value_or("flat");
    s.bath.temperature = take_double("bath.temperature", 0.0);
    if (kind == "flat") {
        s.bath.spectrum = FlatSpectrum{take_double("bath.gamma0", 0.02)};
    } else if (kind == "ohmic") {
        s.bath.spectrum = OhmicSpectrum{take_double("bath.alpha", 0.02), take_double("bath.cutoff", 1.0)};
    } else if (kind == "lorentzian") {
        s.bath.spectrum = LorentzianSpectrum{take_double("bath.gamma0", 0.02), take_double("bath.center", 1.0),
                                             take_double("bath.halfwidth", 0.5)};
    } else {
        throw ConfigError("unknown bath.kind '" + kind + "' (expected flat, ohmic or lorentzian)");
    }

    if (auto v = take("initial")) {
        s.initial = InitialState::parse(*v);
    }
    if (auto v = take("n_max")) {
        s.n_max = parse_int("n_max", *v);
    }
    s.tau_max = take_double("tau_max", s.tau_max);
    if (auto v = take("steps")) {
        s.steps = parse_int("steps", *v);
    }
    if (auto v = take("observables")) {
        s.observables = ObservableSet::parse(*v);
    }
    if (auto v = take("solver")) {
        s.solver = parse_solver(*v);
    }
    s.dt = take_double("dt", s.dt);
    if (auto v = take("freq_tol")) {
        s.freq_tol = parse_double("freq_tol", *v);
    }

    if (!entries.empty()) {
        const auto& [key, where] = *entries.begin();
        throw ConfigError("line " + std::to_string(where.second) + ": unknown or inapplicable key '" + key + "'");
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open config file '" + path.string() + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string serialize_scenario(const Scenario& s)
{
    std::ostringstream os;
    os << "model = " << model_name(s.model) << "\n";
    os << "omega0 = " << format_double(s.params.omega0) << "\n";
    os << "rabi = " << format_double(s.params.rabi) << "\n";
    os << "bath.kind = " << spectrum_name(s.bath.spectrum) << "\n";
    os << "bath.temperature = " << format_double(s.bath.temperature) << "\n";
    if (const auto* f = std::get_if<FlatSpectrum>(&s.bath.spectrum)) {
        os << "bath.gamma0 = " << format_double(f->gamma0) << "\n";
    } else if (const auto* o = std::get_if<OhmicSpectrum>(&s.bath.spectrum)) {
        os << "bath.alpha = " << format_double(o->alpha) << "\n";
        os << "bath.cutoff = " << format_double(o->cutoff) << "\n";
    } else if (const auto* l = std::get_if<LorentzianSpectrum>(&s.bath.spectrum)) {
        os << "bath.gamma0 = " << format_double(l->gamma0) << "\n";
        os << "bath.center = " << format_double(l->center) << "\n";
        os << "bath.halfwidth = " << format_double(l->halfwidth) << "\n";
    }
    os << "initial = " << s.initial.to_string() << "\n";
    os << "n_max = " << s.n_max << "\n";
    os << "tau_max = " << format_double(s.tau_max) << "\n";
    os << "steps = " << s.steps << "\n";
    os << "observables = " << s.observables.to_string() << "\n";
    os << "solver = " << solver_name(s.solver) << "\n";
    os << "dt = " << format_double(s.dt) << "\n";
    if (s.freq_tol) {
        os << "freq_tol = " << format_double(*s.freq_tol) << "\n";
    }
    return os.str();
}

} // namespace jcq
