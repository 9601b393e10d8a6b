#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commonbath/errors.hpp"
#include "commonbath/grid.hpp"
#include "commonbath/oracle.hpp"

namespace commonbath::cli {

namespace {

using nlohmann::json;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

// Values as parsed from flags; NaN / 0 / empty mean "not given".
struct RunConfig {
    std::vector<double> n;
    std::vector<double> alpha;
    std::vector<double> delta;
    std::vector<double> theta;
    double tau_max{kUnset};
    int steps{0};
    std::string initial;
    double tolerance{kUnset};
    std::string output;
    std::string config;
    // oracle-compare only
    int modes{0};
    double omega_max{kUnset};
    int fock{0};
    std::string check;
    std::vector<oracle::Mode> bath;
    // list keys given explicitly, possibly as empty lists
    std::set<std::string> lists_given;
};

struct Bound {
    CLI::App* app{nullptr};
    std::map<std::string, CLI::Option*> opts;

    bool given(const std::string& key) const
    {
        auto it = opts.find(key);
        return it != opts.end() && it->second->count() > 0;
    }
};

void add_options(Bound& b, RunConfig& cfg, bool oracle_flags)
{
    CLI::App& a = *b.app;
    b.opts["n"] = a.add_option("--n", cfg.n, "bath exponent(s), n >= 1")->delimiter(',');
    b.opts["alpha"] = a.add_option("--alpha", cfg.alpha, "dimensionless coupling");
    b.opts["delta"] = a.add_option("--delta", cfg.delta, "qubit separation(s) w_c|d|/c_s")->delimiter(',');
    b.opts["theta"] = a.add_option("--theta", cfg.theta, "temperature(s) k_B T / w_c")->delimiter(',');
    b.opts["tau_max"] = a.add_option("--tau-max", cfg.tau_max, "last time point");
    b.opts["steps"] = a.add_option("--steps", cfg.steps, "number of time steps");
    b.opts["initial"] = a.add_option("--initial", cfg.initial, "initial state")
                            ->check(CLI::IsMember({"uu", "bell", "symmetric-updown"}));
    b.opts["tolerance"] = a.add_option("--tolerance", cfg.tolerance,
                                       oracle_flags ? "pass threshold on the entrywise deviation"
                                                    : "relative tolerance of the bath integrals");
    b.opts["output"] = a.add_option("--output", cfg.output, "CSV path (default stdout)");
    b.opts["config"] = a.add_option("--config", cfg.config, "JSON config; flags take precedence");
    if (oracle_flags) {
        b.opts["modes"] = a.add_option("--modes", cfg.modes, "discretized mode count");
        b.opts["omega_max"] = a.add_option("--omega-max", cfg.omega_max, "discretization cutoff");
        b.opts["fock"] = a.add_option("--fock", cfg.fock, "Fock cutoff per mode (default: automatic)");
        b.opts["check"] = a.add_option("--check", cfg.check, "comparison to run")
                              ->check(CLI::IsMember({"brute", "continuum", "both"}));
    }
}

std::vector<double> json_list(const json& v, const std::string& key)
{
    if (v.is_number()) {
        return {v.get<double>()};
    }
    if (v.is_array()) {
        std::vector<double> out;
        for (const auto& x : v) {
            if (!x.is_number()) {
                throw ValidationError("config key '" + key + "' must hold numbers");
            }
            out.push_back(x.get<double>());
        }
        return out;
    }
    throw ValidationError("config key '" + key + "' must be a number or a list of numbers");
}

template <class T>
T json_scalar(const json& v, const std::string& key)
{
    try {
        return v.get<T>();
    } catch (const json::exception&) {
        throw ValidationError("config key '" + key + "' has the wrong type");
    }
}

void merge_config(RunConfig& cfg, const Bound& b, bool oracle_flags)
{
    if (cfg.config.empty()) {
        return;
    }
    std::ifstream in(cfg.config);
    if (!in) {
        throw ValidationError("cannot read config file " + cfg.config);
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("config must be a JSON object");
    }
    for (const auto& [key, value] : doc.items()) {
        const bool oracle_key = key == "modes" || key == "omega_max" || key == "fock" || key == "check" ||
                                key == "bath";
        if (oracle_key && !oracle_flags) {
            throw ValidationError("config key '" + key + "' only applies to oracle-compare");
        }
        if (key == "bath") {
            if (!value.is_array()) {
                throw ValidationError("config key 'bath' must be a list of modes");
            }
            for (const auto& m : value) {
                if (!m.is_object() || !m.contains("omega") || !m.contains("g")) {
                    throw ValidationError("each bath mode needs 'omega' and 'g'");
                }
                oracle::Mode mode;
                mode.omega = json_scalar<double>(m.at("omega"), "bath.omega");
                mode.g = json_scalar<double>(m.at("g"), "bath.g");
                mode.phase = m.contains("phase") ? json_scalar<double>(m.at("phase"), "bath.phase") : 0.0;
                cfg.bath.push_back(mode);
            }
            continue;
        }
        if (key == "config") {
            throw ValidationError("config files cannot nest");
        }
        if (b.opts.find(key) == b.opts.end()) {
            throw ValidationError("unknown config key '" + key + "'");
        }
        if (b.given(key)) {
            continue;
        }
        if (key == "n" || key == "delta" || key == "theta") {
            cfg.lists_given.insert(key);
        }
        if (key == "n") {
            cfg.n = json_list(value, key);
        } else if (key == "alpha") {
            cfg.alpha = json_list(value, key);
        } else if (key == "delta") {
            cfg.delta = json_list(value, key);
        } else if (key == "theta") {
            cfg.theta = json_list(value, key);
        } else if (key == "tau_max") {
            cfg.tau_max = json_scalar<double>(value, key);
        } else if (key == "steps") {
            cfg.steps = json_scalar<int>(value, key);
        } else if (key == "initial") {
            cfg.initial = json_scalar<std::string>(value, key);
        } else if (key == "tolerance") {
            cfg.tolerance = json_scalar<double>(value, key);
        } else if (key == "output") {
            cfg.output = json_scalar<std::string>(value, key);
        } else if (key == "modes") {
            cfg.modes = json_scalar<int>(value, key);
        } else if (key == "omega_max") {
            cfg.omega_max = json_scalar<double>(value, key);
        } else if (key == "fock") {
            cfg.fock = json_scalar<int>(value, key);
        } else if (key == "check") {
            cfg.check = json_scalar<std::string>(value, key);
        }
    }
}

// ---- resolved parameters ------------------------------------------------

double single(const std::vector<double>& v, double fallback, const char* name)
{
    if (v.empty()) {
        return fallback;
    }
    if (v.size() != 1) {
        throw ValidationError(std::string("--") + name + " takes a single value for this subcommand");
    }
    return v.front();
}

std::vector<double> list_or(const RunConfig& cfg, const std::vector<double>& v, const char* key,
                            std::vector<double> fallback)
{
    if (v.empty() && cfg.lists_given.count(key) == 0) {
        return fallback;
    }
    if (v.empty()) {
        throw ValidationError(std::string("empty ") + key + " grid");
    }
    return v;
}

std::vector<double> default_deltas()
{
    std::vector<double> d;
    for (int k = 0; k <= 10; ++k) {
        d.push_back(k);
    }
    return d;
}

std::vector<double> default_thetas()
{
    std::vector<double> t;
    for (int m = 1; m <= 8; ++m) {
        t.push_back(m / 80.0);
    }
    return t;
}

std::vector<double> times(const RunConfig& cfg, double tau_max, int steps)
{
    return grid::uniform_times(std::isnan(cfg.tau_max) ? tau_max : cfg.tau_max, cfg.steps == 0 ? steps : cfg.steps);
}

DensityMatrix initial_state(const RunConfig& cfg)
{
    if (cfg.initial.empty() || cfg.initial == "uu") {
        return make_initial_state(InitialState::UpUp);
    }
    if (cfg.initial == "bell") {
        return make_initial_state(InitialState::Bell);
    }
    if (cfg.initial == "symmetric-updown") {
        return make_initial_state(InitialState::SymmetricUpDown);
    }
    throw ValidationError("unknown initial state '" + cfg.initial + "'");
}

SpectralModel model_of(const RunConfig& cfg)
{
    SpectralModel m{single(cfg.n, 1.0, "n"), single(cfg.alpha, 0.05, "alpha")};
    m.validate();
    return m;
}

EvolveOptions evolve_options(const RunConfig& cfg)
{
    EvolveOptions opts;
    if (!std::isnan(cfg.tolerance)) {
        if (!(cfg.tolerance > 0.0)) {
            throw ValidationError("--tolerance must be positive");
        }
        opts.integration.rel_tol = cfg.tolerance;
        opts.integration.abs_tol = std::min(opts.integration.abs_tol, 1e-2 * cfg.tolerance);
    }
    return opts;
}

// ---- CSV ----------------------------------------------------------------

class Csv {
public:
    explicit Csv(const std::string& header) { text_ = header + '\n'; }

    Csv& cell(double v)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (!first_) {
            text_ += ',';
        }
        text_ += buf;
        first_ = false;
        return *this;
    }

    void end_row()
    {
        text_ += '\n';
        first_ = true;
    }

    const std::string& text() const { return text_; }

private:
    std::string text_;
    bool first_{true};
};

void require_valid(const DensityMatrix& rho)
{
    const std::string why = rho.violation();
    if (!why.empty()) {
        throw NumericalError("emitted state is not a density matrix: " + why);
    }
}

// ---- subcommands --------------------------------------------------------

std::string cmd_interaction(const RunConfig& cfg)
{
    const auto ns = list_or(cfg, cfg.n, "n", {1, 2, 3, 4});
    const auto ds = list_or(cfg, cfg.delta, "delta", default_deltas());
    const double alpha = single(cfg.alpha, 0.05, "alpha");
    const auto h = grid::interaction_table(ns, alpha, ds);
    Csv csv("delta,n,h_int");
    for (std::size_t i = 0; i < ns.size(); ++i) {
        for (std::size_t j = 0; j < ds.size(); ++j) {
            csv.cell(ds[j]).cell(ns[i]).cell(h[i * ds.size() + j]);
            csv.end_row();
        }
    }
    return csv.text();
}

std::string cmd_concurrence(const RunConfig& cfg)
{
    Scenario scn;
    scn.model = model_of(cfg);
    scn.initial = initial_state(cfg);
    scn.time_grid = times(cfg, 60.0, 600);
    const auto ds = list_or(cfg, cfg.delta, "delta", default_deltas());
    const auto ts = list_or(cfg, cfg.theta, "theta", default_thetas());
    const EvolveOptions opts = evolve_options(cfg);
    Csv csv("tau,delta,theta,concurrence");
    for (double d : ds) {
        for (double th : ts) {
            scn.geom = Geometry{d};
            scn.theta = th;
            const auto c = grid::concurrence_series(scn, opts);
            for (std::size_t k = 0; k < c.size(); ++k) {
                csv.cell(scn.time_grid[k]).cell(d).cell(th).cell(c[k]);
                csv.end_row();
            }
        }
    }
    return csv.text();
}

std::string cmd_onset(const RunConfig& cfg)
{
    const SpectralModel model = model_of(cfg);
    const auto ds = list_or(cfg, cfg.delta, "delta", default_deltas());
    const auto rows = grid::onset_table(model, ds, times(cfg, 20.0, 400));
    Csv csv("tau,delta,f_correction,h_f,h_total");
    for (const auto& r : rows) {
        csv.cell(r.tau).cell(r.delta).cell(r.f_correction).cell(r.h_f).cell(r.h_total);
        csv.end_row();
    }
    return csv.text();
}

std::string populations_header()
{
    static const char* labels[] = {"uu", "ud", "du", "dd"};
    std::string h = "tau";
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            h += std::string(",re_") + labels[i] + "_" + labels[j];
            h += std::string(",im_") + labels[i] + "_" + labels[j];
        }
    }
    return h;
}

std::string cmd_populations(const RunConfig& cfg)
{
    Scenario scn;
    scn.model = model_of(cfg);
    scn.geom = Geometry{single(cfg.delta, 0.0, "delta")};
    scn.theta = single(cfg.theta, 0.05, "theta");
    scn.initial = initial_state(cfg);
    scn.time_grid = times(cfg, 60.0, 600);
    const auto states = grid::evolve_series(scn, evolve_options(cfg));
    Csv csv(populations_header());
    for (std::size_t k = 0; k < states.size(); ++k) {
        const DensityMatrix rho = basis_transform(states[k], Basis::Computational);
        require_valid(rho);
        csv.cell(scn.time_grid[k]);
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                csv.cell(rho(i, j).real()).cell(rho(i, j).imag());
            }
        }
        csv.end_row();
    }
    return csv.text();
}

double max_deviation(const DensityMatrix& a, const DensityMatrix& b)
{
    const Matrix4c x = basis_transform(a, Basis::Computational).entries();
    const Matrix4c y = basis_transform(b, Basis::Computational).entries();
    return (x - y).cwiseAbs().maxCoeff();
}

struct OracleOutcome {
    std::string csv;
    bool passed{true};
};

OracleOutcome cmd_oracle_compare(const RunConfig& cfg, std::ostream& err)
{
    const std::string check = cfg.check.empty() ? "brute" : cfg.check;
    if (check != "brute" && check != "continuum" && check != "both") {
        throw ValidationError("unknown check '" + check + "'");
    }
    const bool brute = check == "brute" || check == "both";
    const bool continuum = check == "continuum" || check == "both";
    // Defaults: 1e-6 for brute force vs discrete sums, 1e-4 for the continuum limit.
    const bool tol_given = !std::isnan(cfg.tolerance);
    if (tol_given && !(cfg.tolerance >= 0.0)) {
        throw ValidationError("--tolerance must be non-negative");
    }
    const double tol_brute = tol_given ? cfg.tolerance : 1e-6;
    const double tol_cont = tol_given ? cfg.tolerance : 1e-4;

    const SpectralModel model{single(cfg.n, 1.0, "n"), single(cfg.alpha, 0.05, "alpha")};
    const Geometry geom{single(cfg.delta, 0.0, "delta")};
    const double theta = single(cfg.theta, 0.05, "theta");

    oracle::DiscreteBathSpec bath;
    if (!cfg.bath.empty()) {
        if (continuum) {
            throw ValidationError("the continuum check needs a discretized bath, not an explicit mode list");
        }
        bath.modes = cfg.bath;
        bath.theta = theta;
        bath.fock_cutoff = 2;
        bath.fock_cutoff = cfg.fock > 0 ? cfg.fock : oracle::suggest_fock_cutoff(bath);
    } else {
        if (cfg.modes < 0) {
            throw ValidationError("--modes must be >= 1");
        }
        const int modes = cfg.modes > 0 ? cfg.modes : 1;
        const double omega_max = std::isnan(cfg.omega_max) ? 2.0 : cfg.omega_max;
        bath = oracle::discretize(model, geom, theta, modes, omega_max);
        if (cfg.fock > 0) {
            bath.fock_cutoff = cfg.fock;
        } else if (brute) {
            bath.fock_cutoff = oracle::suggest_fock_cutoff(bath);
        }
    }
    bath.validate();

    const DensityMatrix initial = initial_state(cfg);
    const std::vector<double> ts = times(cfg, 5.0, 50);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> dev_brute(ts.size(), nan);
    std::vector<double> dev_cont(ts.size(), nan);
    std::vector<DensityMatrix> exact(ts.size());
    for (std::size_t k = 0; k < ts.size(); ++k) {
        exact[k] = oracle::discrete_exact_evolve(initial, bath, ts[k]);
    }
    if (brute) {
        const auto bf = oracle::brute_force_series(initial, bath, ts);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            require_valid(bf[k]);
            dev_brute[k] = max_deviation(bf[k], exact[k]);
        }
    }
    if (continuum) {
        Scenario scn;
        scn.model = model;
        scn.geom = geom;
        scn.theta = theta;
        scn.initial = initial;
        scn.time_grid = ts;
        const auto cont = grid::evolve_series(scn);
        for (std::size_t k = 0; k < ts.size(); ++k) {
            dev_cont[k] = max_deviation(exact[k], cont[k]);
        }
    }

    OracleOutcome res;
    Csv csv("tau,dev_brute_exact,dev_exact_continuum");
    double worst_brute = 0.0;
    double worst_cont = 0.0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
        csv.cell(ts[k]).cell(dev_brute[k]).cell(dev_cont[k]);
        csv.end_row();
        if (brute) {
            worst_brute = std::max(worst_brute, dev_brute[k]);
        }
        if (continuum) {
            worst_cont = std::max(worst_cont, dev_cont[k]);
        }
    }
    res.csv = csv.text();
    res.passed = worst_brute <= tol_brute && worst_cont <= tol_cont;

    char line[256];
    std::snprintf(line, sizeof line, "oracle-compare: modes=%zu fock=%d", bath.modes.size(), bath.fock_cutoff);
    err << line;
    if (brute) {
        std::snprintf(line, sizeof line, " brute/exact=%.3e (tol %.1e)", worst_brute, tol_brute);
        err << line;
    }
    if (continuum) {
        std::snprintf(line, sizeof line, " exact/continuum=%.3e (tol %.1e)", worst_cont, tol_cont);
        err << line;
    }
    std::snprintf(line, sizeof line, " %s\n", res.passed ? "PASS" : "FAIL");
    err << line;
    return res;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out)
{
    if (cfg.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(cfg.output, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw ValidationError("cannot open output file " + cfg.output);
    }
    f << text;
    if (!f) {
        throw ValidationError("failed writing " + cfg.output);
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Two qubits in a common bosonic bath: exact dynamics as CSV", "commonbath"};
    app.require_subcommand(1);

    RunConfig cfg;
    const std::vector<std::pair<std::string, std::string>> subs = {
        {"interaction", "induced interaction versus separation"},
        {"concurrence", "concurrence versus time, separation and temperature"},
        {"onset", "onset correction F and H_F versus time"},
        {"populations", "density matrix entries versus time"},
        {"oracle-compare", "discrete-bath cross-checks"},
    };
    std::map<std::string, Bound> bound;
    for (const auto& [name, desc] : subs) {
        Bound b;
        b.app = app.add_subcommand(name, desc);
        add_options(b, cfg, name == "oracle-compare");
        bound[name] = b;
    }

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kValidation;
    }

    std::string which;
    for (const auto& [name, b] : bound) {
        if (b.app->parsed()) {
            which = name;
        }
    }

    try {
        merge_config(cfg, bound.at(which), which == "oracle-compare");
        if (which == "interaction") {
            emit(cfg, cmd_interaction(cfg), out);
        } else if (which == "concurrence") {
            emit(cfg, cmd_concurrence(cfg), out);
        } else if (which == "onset") {
            emit(cfg, cmd_onset(cfg), out);
        } else if (which == "populations") {
            emit(cfg, cmd_populations(cfg), out);
        } else {
            const OracleOutcome res = cmd_oracle_compare(cfg, err);
            emit(cfg, res.csv, out);
            return res.passed ? kSuccess : kOracleTolerance;
        }
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << '\n';
        return kNumerical;
    }
    return kSuccess;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) {
        args.emplace_back(argv[i]);
    }
    return run(args, out, err);
}

} // namespace commonbath::cli
