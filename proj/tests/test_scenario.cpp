#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "jcq/analytic.hpp"
#include "jcq/errors.hpp"
#include "jcq/experiments.hpp"

using namespace jcq;

namespace {

std::size_t column(const Table& t, const std::string& name)
{
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        if (t.header[c] == name) return c;
    }
    throw std::out_of_range("no column " + name);
}

double summary_value(const std::string& summary, const std::string& key)
{
    std::istringstream in(summary);
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind(key + " = ", 0) == 0) return std::stod(line.substr(key.size() + 3));
    }
    throw std::out_of_range("no summary key " + key);
}

} // namespace

TEST_SUITE("scenario") {

TEST_CASE("parsing a complete config")
{
    const auto s = parse_scenario(R"(# Rabi scenario
model = phen
omega0 = 1
rabi = 0.2
bath.kind = lorentzian
bath.temperature = 0.1
bath.gamma0 = 0.03
bath.center = 1.0
bath.halfwidth = 0.4
initial = dressed:1,-
n_max = 5
tau_max = 50
steps = 11
observables = pop_0g,photon_number
solver = ode
dt = 0.005
freq_tol = 1e-8
)");
    CHECK(s.model == Model::phen);
    CHECK(s.params.rabi == 0.2);
    CHECK(std::holds_alternative<LorentzianSpectrum>(s.bath.spectrum));
    CHECK(s.initial.kind == InitialState::Kind::dressed);
    CHECK(s.initial.branch == -1);
    CHECK(s.solver == SolverKind::ode);
    CHECK(s.freq_tol.value() == 1e-8);
    CHECK(s.tau_grid().size() == 11);
    CHECK(s.tau_grid().back() == 50.0);
    CHECK(s.time_grid().back() == doctest::Approx(125.0));
}

TEST_CASE("config round trip is idempotent")
{
    const std::string text = R"(model = dressed
rabi = 0.15
bath.kind = ohmic
bath.alpha = 0.01
bath.cutoff = 2.5
initial = fock:1,g
observables = atomic_ground
)";
    const auto s = parse_scenario(text);
    const auto once = serialize_scenario(s);
    CHECK(serialize_scenario(parse_scenario(once)) == once);
    CHECK(serialize_scenario(Scenario{}) == serialize_scenario(parse_scenario(serialize_scenario(Scenario{}))));
    CHECK(parse_scenario(once).params.rabi == 0.15);
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS(parse_scenario("model = quantum\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("rabi = 0.1\nrabi = 0.2\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("colour = blue\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("bath.alpha = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("rabi 0.1\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("steps = 0\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse_scenario("steps = 1\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse_scenario("tau_max = 0\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse_scenario("initial = fock:2,e\nn_max = 3\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse_scenario("initial = dressed:0,+\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("rabi = nan\n"), ConfigError);
    CHECK_THROWS_AS(parse_scenario("observables = pop_0g,pop_0g\n"), ConfigError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/run.cfg"), ConfigError);
    try {
        parse_scenario("# ok\nrabi = 0.1\nwhat = 3\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("number formatting round-trips")
{
    for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0}) {
        CHECK(std::stod(format_double(v)) == v);
    }
    CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("evolve reproduces the microscopic Rabi decay")
{
    Scenario s;
    s.steps = 201;
    const auto t = run_evolve(s);
    REQUIRE(t.rows.size() == 201);
    CHECK(t.header.front() == "tau");
    const auto c = column(t, "pop_0g");
    for (const auto& row : t.rows) {
        const double time = row[0] / (2 * s.params.rabi);
        CHECK(std::abs(row[c] - (1.0 - std::exp(-0.01 * time))) < 1e-8);
    }

    s.model = Model::phen;
    s.solver = SolverKind::ode;
    s.dt = 0.01;
    const auto phen = run_evolve(s);
    for (const auto& row : phen.rows) {
        const double time = row[0] / (2 * s.params.rabi);
        CHECK(std::abs(row[c] - analytic::rabi_phen(time, 0.02, 0.1).p0g) < 1e-6);
    }
}

TEST_CASE("CSV output is deterministic")
{
    Scenario s;
    s.steps = 50;
    const auto a = to_csv(run_evolve(s));
    const auto b = to_csv(run_evolve(s));
    CHECK(a == b);
    CHECK(a.rfind("tau,pop_0g,pop_1g,atomic_ground\n", 0) == 0);
    CHECK(a.find('\r') == std::string::npos);

    const auto dir = std::filesystem::temp_directory_path() / "jcq_scenario_test";
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "out.csv", a);
    std::ifstream in(dir / "out.csv", std::ios::binary);
    const std::string back((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(back == a);
    std::filesystem::remove_all(dir);
}

TEST_CASE("compare: Rabi pair reports the frequency shift")
{
    Scenario micro;
    micro.steps = 400;
    Scenario phen = micro;
    phen.model = Model::phen;
    const auto r = run_compare(micro, phen);
    CHECK(r.table.header.size() == 1 + 3 * 3);
    const double g = 0.02, w = 0.1;
    CHECK(r.first.frequency == doctest::Approx(2 * w).epsilon(1e-10));
    CHECK(r.second.frequency == doctest::Approx(0.5 * std::sqrt(16 * w * w - g * g)).epsilon(1e-10));
    const double rel = summary_value(r.summary, "relative_shift");
    CHECK(rel == doctest::Approx((g / w) * (g / w) / 32).epsilon(0.02));
    CHECK(summary_value(r.summary, "max_abs_diff.pop_0g") > 0.01);
}

TEST_CASE("compare: Bell pair, microscopic monotone and phenomenological oscillating")
{
    Scenario micro;
    micro.initial = InitialState::parse("dressed:1,+");
    micro.observables = ObservableSet::parse("atomic_ground");
    Scenario phen = micro;
    phen.model = Model::phen;
    const auto r = run_compare(micro, phen);
    const auto cm = column(r.table, "micro.atomic_ground");
    const auto cp = column(r.table, "phen.atomic_ground");
    // Count sign changes of the discrete derivative (monotonicity) and of the second
    // difference (an oscillation riding on the decay).
    const auto sign_changes = [&](std::size_t c, int order) {
        std::vector<double> v;
        for (const auto& row : r.table.rows) v.push_back(row[c]);
        for (int o = 0; o < order; ++o) {
            for (std::size_t k = 0; k + 1 < v.size(); ++k) v[k] = v[k + 1] - v[k];
            v.pop_back();
        }
        int changes = 0;
        for (std::size_t k = 1; k < v.size(); ++k) changes += v[k] * v[k - 1] < 0.0;
        return changes;
    };
    CHECK(sign_changes(cm, 1) == 0);
    CHECK(sign_changes(cm, 2) == 0);
    CHECK(sign_changes(cp, 2) > 2);
    CHECK(r.first.frequency == 0.0);
    CHECK(r.second.frequency > 0.0);
}

TEST_CASE("compare: identical models and mismatched scenarios")
{
    Scenario s;
    s.steps = 100;
    const auto r = run_compare(s, s);
    for (const auto& [name, diff] : r.max_abs_diff) {
        CHECK(diff < 1e-14);
    }
    Scenario other = s;
    other.params.rabi = 0.2;
    CHECK_THROWS_AS(run_compare(s, other), ConfigError);
}

TEST_CASE("spectrum of the single-excitation microscopic scenario")
{
    Scenario s;
    s.n_max = 2;
    s.initial = InitialState::parse("ground");
    const auto t = run_spectrum(s);
    REQUIRE(t.rows.size() == 36);
    CHECK(t.header == std::vector<std::string>{"re", "im"});
    // Sorted by re descending.
    for (std::size_t k = 1; k < t.rows.size(); ++k) {
        CHECK(t.rows[k][0] <= t.rows[k - 1][0] + 1e-9);
    }
    const double g = 0.02, w = 0.1;
    const std::pair<double, double> expected[] = {
        {0.0, 0.0}, {-g / 2, 0.0}, {-g / 4, 1.0 - w}, {-g / 4, 1.0 + w}, {-g / 2, 2 * w}, {-g / 2, -2 * w}};
    for (auto [re, im] : expected) {
        bool found = false;
        for (const auto& row : t.rows) {
            found |= std::abs(row[0] - re) < 1e-10 && std::abs(row[1] - im) < 1e-10;
        }
        CHECK(found);
    }

    s.bath = BathSpec{0.0, FlatSpectrum{0.0}};
    for (const auto& row : run_spectrum(s).rows) {
        CHECK(std::abs(row[0]) < 1e-12);
    }

    s.bath = BathSpec{0.3, FlatSpectrum{0.02}};
    int zeros = 0;
    for (const auto& row : run_spectrum(s).rows) {
        zeros += std::hypot(row[0], row[1]) < 1e-10;
    }
    CHECK(zeros == 1);
}

TEST_CASE("steady report at finite temperature")
{
    Scenario s;
    s.n_max = 20;
    s.initial = InitialState::parse("ground");
    s.bath = BathSpec{0.25, FlatSpectrum{0.01}};
    const auto r = run_steady(s);
    CHECK(r.tail_mass < 1e-10);
    CHECK(r.trace_distance_gibbs_jc < 1e-6);
    CHECK(r.trace_distance_gibbs_free > 1e-3);
    double total = 0.0;
    for (const auto& row : r.populations.rows) total += row[2];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    s.n_max = 2;
    s.bath = BathSpec{2.0, FlatSpectrum{0.01}};
    CHECK_THROWS_AS(run_steady(s), ConfigError);
}

} // TEST_SUITE
