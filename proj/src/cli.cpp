#include "ridge/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ridge/approx.hpp"
#include "ridge/errors.hpp"
#include "ridge/greedy.hpp"
#include "ridge/penalty.hpp"
#include "ridge/risk.hpp"
#include "ridge/targets.hpp"

namespace ridge {

namespace {

using Defaults = std::vector<std::pair<std::string, std::string>>;

const std::map<std::string, Defaults>& key_tables() {
    static const std::map<std::string, Defaults> tables = {
        {"fit",
         {{"seed", "0"}, {"out", "-"}, {"data", ""}, {"d", "2"}, {"n", "200"}, {"target", "spectral"},
          {"omega", "1,1"}, {"amplitude", "1"}, {"phase", "0"}, {"terms", "3"}, {"noise", "zero"},
          {"noise_scale", "0"}, {"design", "uniform"}, {"activation", "ramp"}, {"Lambda", "2"}, {"m_max", "10"},
          {"strategy", "cover"}, {"cover_m", "2"}, {"restarts", "32"}, {"steps", "200"}, {"penalty", "zero"},
          {"lambda", "0"}}},
        {"approx-rate",
         {{"seed", "0"}, {"out", "-"}, {"d", "2"}, {"omega", "1,1"}, {"amplitude", "1"}, {"phase", "0"},
          {"m_list", "8,16,32,64,128,256"}, {"best_of", "32"}, {"eval_points", "100000"}}},
        {"cover-stats", {{"seed", "0"}, {"out", "-"}, {"d", "2"}, {"m", "2"}, {"Lambda", "2"}, {"cap", "1000000"}}},
        {"penalty-table",
         {{"seed", "0"}, {"out", "-"}, {"n_list", "256,1024,4096,16384,65536"}, {"d", "10"}, {"v_f", "1"},
          {"B", "1"}, {"B_n", "1"}, {"sigma2", "1"}, {"eta", "0"}, {"Lambda", "2"}, {"delta1", "1"},
          {"delta2", "1"}, {"T_n", "0"}, {"C", "1"}, {"regimes", "highdim,nonoise,moderate,mixed"}}},
        {"concentration-check",
         {{"seed", "0"}, {"out", "-"}, {"n", "200"}, {"d", "2"}, {"trials", "10000"}, {"gamma", "1"}, {"A", "1"},
          {"noise", "gaussian"}, {"noise_scale", "1"}, {"design", "uniform"}}},
        {"risk-curve",
         {{"seed", "0"}, {"out", "-"}, {"d", "8"}, {"n_list", "256,1024"}, {"trials", "5"}, {"terms", "3"},
          {"cover_m", "2"}, {"Lambda", "2"}, {"noise", "gaussian"}, {"noise_scale", "0.5"},
          {"design", "uniform"}, {"regime", "highdim"}, {"scale", "0.05"}, {"m_max", "16"},
          {"strategy", "cover"}, {"delta1", "1"}, {"delta2", "1"}}},
    };
    return tables;
}

const Defaults& table_for(const std::string& sub) {
    const auto& t = key_tables();
    auto it = t.find(sub);
    if (it == t.end()) throw ConfigError("subcommand", "unknown subcommand '" + sub + "'");
    return it->second;
}

bool known_key(const Defaults& table, const std::string& key) {
    return std::any_of(table.begin(), table.end(), [&](const auto& kv) { return kv.first == key; });
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T, class Parse>
T parse_key(const RunConfig& c, const std::string& key, Parse parse) {
    try {
        return parse(c.raw(key));
    } catch (const InputError& e) {
        throw ConfigError(key, e.what());
    }
}

} // namespace

// ---------------------------------------------------------------------------

const std::string& RunConfig::raw(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(key, "missing required key '" + key + "'");
    return it->second;
}

std::string RunConfig::get_string(const std::string& key) const { return raw(key); }

long long RunConfig::get_int(const std::string& key) const {
    const std::string& s = raw(key);
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "key '" + key + "': expected an integer, got '" + s + "'");
    }
}

double RunConfig::get_double(const std::string& key) const {
    const std::string& s = raw(key);
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ConfigError(key, "key '" + key + "': expected a number, got '" + s + "'");
    }
}

std::vector<long long> RunConfig::get_int_list(const std::string& key) const {
    std::vector<long long> out;
    for (const auto& item : split(raw(key), ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoll(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(key, "key '" + key + "': expected a list of integers, got '" + raw(key) + "'");
        }
    }
    if (out.empty()) throw ConfigError(key, "key '" + key + "': list is empty");
    return out;
}

std::vector<double> RunConfig::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split(raw(key), ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError(key, "key '" + key + "': expected a list of numbers, got '" + raw(key) + "'");
        }
    }
    if (out.empty()) throw ConfigError(key, "key '" + key + "': list is empty");
    return out;
}

void RunConfig::write_header(std::ostream& out) const {
    out << "# ridgepursuit " << subcommand << '\n';
    for (const auto& [k, v] : values_) out << "# " << k << '=' << v << '\n';
}

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& kv : key_tables()) v.push_back(kv.first);
        return v;
    }();
    return names;
}

RunConfig parse_config(const std::string& subcommand, const std::string& path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
    const Defaults& table = table_for(subcommand);
    RunConfig c;
    c.subcommand = subcommand;
    for (const auto& [k, v] : table) c.set(k, v);

    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("config", "cannot read config file '" + path + "'");
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') continue;
            const auto eq = t.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("config", path + ":" + std::to_string(lineno) + ": expected key=value");
            }
            const std::string key = trim(t.substr(0, eq));
            if (!known_key(table, key)) {
                throw ConfigError(key, "unknown key '" + key + "' for subcommand " + subcommand);
            }
            c.set(key, trim(t.substr(eq + 1)));
        }
    }
    for (const auto& [k, v] : overrides) {
        if (!known_key(table, k)) throw ConfigError(k, "unknown key '" + k + "' for subcommand " + subcommand);
        c.set(k, v);
    }
    return c;
}

// ---------------------------------------------------------------------------
// Subcommands

namespace {

constexpr const char* num_fmt = "%.17g";

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, num_fmt, x);
    return buf;
}

NoiseModel noise_from(const RunConfig& c) {
    const NoiseKind kind = parse_key<NoiseKind>(c, "noise", [](const std::string& s) { return parse_noise_kind(s); });
    const double scale = c.get_double("noise_scale");
    if (scale < 0.0) throw ConfigError("noise_scale", "key 'noise_scale' must be nonnegative");
    switch (kind) {
    case NoiseKind::zero: return NoiseModel::zero();
    case NoiseKind::gaussian: return NoiseModel::gaussian(scale);
    case NoiseKind::laplace: return NoiseModel::laplace(scale);
    }
    return NoiseModel::zero();
}

DesignLaw design_from(const RunConfig& c) {
    return parse_key<DesignLaw>(c, "design", [](const std::string& s) { return parse_design_law(s); });
}

Eigen::Index positive_index(const RunConfig& c, const std::string& key) {
    const long long v = c.get_int(key);
    if (v < 1) throw ConfigError(key, "key '" + key + "' must be >= 1");
    return static_cast<Eigen::Index>(v);
}

SpectralTarget spectral_from(const RunConfig& c, Eigen::Index d) {
    const auto omega = c.get_double_list("omega");
    if (static_cast<Eigen::Index>(omega.size()) != d) {
        throw ConfigError("omega", "key 'omega' must have d = " + std::to_string(d) + " entries");
    }
    SpectralAtom a;
    a.omega = Eigen::Map<const Vector>(omega.data(), d);
    a.amplitude = c.get_double("amplitude");
    a.phase = c.get_double("phase");
    if (!(a.amplitude > 0.0)) throw ConfigError("amplitude", "key 'amplitude' must be positive");
    return SpectralTarget({a});
}

int run_fit(const RunConfig& c, std::ostream& out, std::ostream& err) {
    GreedyConfig g;
    g.seed = static_cast<std::uint64_t>(c.get_int("seed"));
    g.Lambda = c.get_double("Lambda");
    if (!(g.Lambda > 0.0)) throw ConfigError("Lambda", "key 'Lambda' must be positive");
    g.activation = parse_key<Activation>(c, "activation", [](const std::string& s) { return parse_activation(s); });
    g.m_max = static_cast<int>(c.get_int("m_max"));
    if (g.m_max < 0) throw ConfigError("m_max", "key 'm_max' must be >= 0");
    g.strategy =
        parse_key<InnerStrategy>(c, "strategy", [](const std::string& s) { return parse_inner_strategy(s); });
    g.cover_m = static_cast<int>(positive_index(c, "cover_m"));
    g.restarts = static_cast<int>(positive_index(c, "restarts"));
    g.steps = static_cast<int>(c.get_int("steps"));
    const std::string pen = c.get_string("penalty");
    const double lambda = c.get_double("lambda");
    if (lambda < 0.0) throw ConfigError("lambda", "key 'lambda' must be nonnegative");
    if (pen == "zero") {
        g.w = PenaltyFn::zero();
    } else if (pen == "linear") {
        g.w = PenaltyFn::linear(lambda);
    } else if (pen == "power43") {
        g.w = PenaltyFn::power43(lambda);
    } else {
        throw ConfigError("penalty", "key 'penalty' must be zero, linear or power43");
    }

    Matrix X;
    Vector Y;
    const std::string data_path = c.get_string("data");
    if (!data_path.empty()) {
        std::ifstream in(data_path);
        if (!in) throw ConfigError("data", "cannot read data file '" + data_path + "'");
        read_dataset_csv(in, X, Y);
    } else {
        const Eigen::Index d = positive_index(c, "d");
        const Eigen::Index n = positive_index(c, "n");
        const std::string kind = c.get_string("target");
        TargetFn target;
        if (kind == "spectral") {
            target = as_target_fn(spectral_from(c, d));
        } else if (kind == "cover") {
            Rng rng = make_rng(g.seed, 0xc0);
            target = as_target_fn(random_cover_model(d, static_cast<int>(c.get_int("terms")), g.cover_m, g.Lambda, rng));
        } else {
            throw ConfigError("target", "key 'target' must be spectral or cover");
        }
        const Dataset data = gen_dataset(target, n, d, noise_from(c), g.seed, design_from(c));
        X = data.X;
        Y = data.Y;
    }

    const GreedyPath path = fit_lpgp(X, Y, g);
    c.write_header(out);
    write_path_csv(out, path);

    double prev_obj = mean_square(Y);
    double prev_v = 0.0;
    for (const auto& s : path.steps) {
        const double expect_v = (1.0 - s.alpha) * prev_v + s.beta;
        if (std::abs(s.v - expect_v) > 1e-12 * std::max(1.0, std::abs(expect_v))) {
            err << "property failure: v identity broken at m=" << s.m << '\n';
            return exit_property_failure;
        }
        if (s.objective > prev_obj * (1.0 + 1e-12) + 1e-15) {
            err << "property failure: objective increased at m=" << s.m << '\n';
            return exit_property_failure;
        }
        prev_obj = s.objective;
        prev_v = s.v;
    }
    return exit_ok;
}

int run_approx_rate(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Eigen::Index d = positive_index(c, "d");
    const SpectralTarget target = spectral_from(c, d);
    const auto ms = c.get_int_list("m_list");
    const int k = static_cast<int>(positive_index(c, "best_of"));
    const Eigen::Index N = positive_index(c, "eval_points");
    const std::uint64_t seed = static_cast<std::uint64_t>(c.get_int("seed"));
    for (long long m : ms) {
        if (m < 1) throw ConfigError("m_list", "key 'm_list' entries must be >= 1");
    }

    Rng eval_rng = make_rng(seed, 0xe7a1);
    const Matrix Xe = sample_design(N, d, DesignLaw::uniform, eval_rng);
    const Vector fe = target.evaluate(Xe);
    const double v2 = spectral_norm(target, 2.0);
    const double normalizer = ramp_sampling_plan(target).normalizer;

    c.write_header(out);
    out << "m,normalizer,mse,bound,pass\n";
    bool ok = true;
    for (long long m : ms) {
        const auto best = best_of(
            k, derive_seed(seed, static_cast<std::uint64_t>(m)),
            [&](Rng& rng) { return sample_ramp_model(target, static_cast<int>(m), rng); },
            [&](const RidgeModel& f) { return mean_square(f.evaluate(Xe) - fe); });
        const double bound = 16.0 * v2 * v2 / static_cast<double>(m);
        const bool pass = best.score <= bound;
        ok = ok && pass;
        out << m << ',' << num(normalizer) << ',' << num(best.score) << ',' << num(bound) << ','
            << (pass ? 1 : 0) << '\n';
    }
    if (!ok) err << "property failure: an approximation error exceeds 16 v2^2 / m\n";
    return ok ? exit_ok : exit_property_failure;
}

int run_cover_stats(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const int d = static_cast<int>(positive_index(c, "d"));
    const int m = static_cast<int>(positive_index(c, "m"));
    const double Lambda = c.get_double("Lambda");
    if (!(Lambda > 0.0)) throw ConfigError("Lambda", "key 'Lambda' must be positive");
    const long long cap = c.get_int("cap");
    if (cap < 1) throw ConfigError("cap", "key 'cap' must be >= 1");

    const SparseCover cover = enumerate_cover(d, m, Lambda, static_cast<std::uint64_t>(cap));
    const std::uint64_t expect = binomial(2ULL * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(m),
                                          static_cast<std::uint64_t>(m));
    const double log_count = std::log(static_cast<double>(cover.size()));
    // The count is C(M - 1 + m, m) with M = 2d + 1 symbols.
    const double log_bound = cover_count_log_bound(2.0 * d + 1.0, m);
    c.write_header(out);
    out << "d,m,count,binomial,distinct,log_count,log_bound\n";
    out << d << ',' << m << ',' << cover.size() << ',' << expect << ',' << cover.distinct_indices().size() << ','
        << num(log_count) << ',' << num(log_bound) << '\n';
    if (cover.size() != expect || log_count > log_bound * (1.0 + 1e-12)) {
        err << "property failure: cover count mismatch\n";
        return exit_property_failure;
    }
    return exit_ok;
}

int run_penalty_table(const RunConfig& c, std::ostream& out, std::ostream&) {
    PenaltyConfig p;
    p.B = c.get_double("B");
    p.B_n = c.get_double("B_n");
    p.sigma2 = c.get_double("sigma2");
    p.eta = c.get_double("eta");
    p.Lambda = c.get_double("Lambda");
    p.delta1 = c.get_double("delta1");
    p.delta2 = c.get_double("delta2");
    p.mixed_constant = c.get_double("C");
    try {
        p.validate();
    } catch (const InputError& e) {
        throw ConfigError("penalty", e.what());
    }
    std::vector<Regime> regimes;
    for (const auto& r : split(c.get_string("regimes"), ',')) {
        regimes.push_back(parse_key<Regime>(c, "regimes", [&](const std::string&) { return parse_regime(r); }));
    }
    if (regimes.empty()) throw ConfigError("regimes", "key 'regimes' is empty");
    const auto ns = c.get_int_list("n_list");
    const double d = static_cast<double>(positive_index(c, "d"));
    const double v_f = c.get_double("v_f");
    const double T_n = c.get_double("T_n");
    for (long long n : ns) {
        if (n < 1) throw ConfigError("n_list", "key 'n_list' entries must be >= 1");
    }

    c.write_header(out);
    out << "regime,n,d,v_f,pen_per_n,main_term,valid\n";
    for (Regime r : regimes) {
        p.regime = r;
        for (long long n : ns) {
            const PenaltyValue v = penalty_per_n(p, v_f, static_cast<double>(n), d, T_n);
            out << to_string(r) << ',' << n << ',' << num(d) << ',' << num(v_f) << ',' << num(v.total) << ','
                << num(v.main) << ',' << (v.valid ? 1 : 0) << '\n';
        }
    }
    return exit_ok;
}

int run_concentration(const RunConfig& c, std::ostream& out, std::ostream& err) {
    const Eigen::Index n = positive_index(c, "n");
    const Eigen::Index d = positive_index(c, "d");
    const int trials = static_cast<int>(positive_index(c, "trials"));
    const double gamma = c.get_double("gamma");
    const double A = c.get_double("A");
    if (!(gamma > 0.0)) throw ConfigError("gamma", "key 'gamma' must be positive");
    if (!(A > 0.0)) throw ConfigError("A", "key 'A' must be positive");
    const NoiseModel noise = noise_from(c);
    const DesignLaw law = design_from(c);
    const std::uint64_t seed = static_cast<std::uint64_t>(c.get_int("seed"));

    c.write_header(out);
    out << "check,spec,mean,se,pass\n";
    bool ok = true;
    std::uint64_t stream = 0;
    for (const auto& spec : shipped_class_specs(d)) {
        const McEstimate s = mc_symmetrization_check(spec, gamma, n, d, trials, law, derive_seed(seed, stream++));
        const McEstimate e = mc_noise_check(spec, A, n, d, trials, noise, law, derive_seed(seed, stream++));
        out << "symmetrization," << spec.name << ',' << num(s.mean) << ',' << num(s.se) << ',' << s.within() << '\n';
        out << "noise," << spec.name << ',' << num(e.mean) << ',' << num(e.se) << ',' << e.within() << '\n';
        ok = ok && s.within() && e.within();
    }
    if (!ok) err << "property failure: a concentration estimate exceeds 3 standard errors\n";
    return ok ? exit_ok : exit_property_failure;
}

int run_risk_curve(const RunConfig& c, std::ostream& out, std::ostream&) {
    RiskCurveConfig rc;
    rc.seed = static_cast<std::uint64_t>(c.get_int("seed"));
    rc.d = positive_index(c, "d");
    for (long long n : c.get_int_list("n_list")) {
        if (n < 1) throw ConfigError("n_list", "key 'n_list' entries must be >= 1");
        rc.n_grid.push_back(static_cast<Eigen::Index>(n));
    }
    rc.trials = static_cast<int>(positive_index(c, "trials"));
    rc.noise = noise_from(c);
    rc.design = design_from(c);
    rc.m_max = static_cast<int>(c.get_int("m_max"));
    if (rc.m_max < 0) throw ConfigError("m_max", "key 'm_max' must be >= 0");

    const int terms = static_cast<int>(c.get_int("terms"));
    if (terms < 0) throw ConfigError("terms", "key 'terms' must be >= 0");
    rc.greedy.cover_m = static_cast<int>(positive_index(c, "cover_m"));
    rc.greedy.Lambda = c.get_double("Lambda");
    if (!(rc.greedy.Lambda > 0.0)) throw ConfigError("Lambda", "key 'Lambda' must be positive");
    rc.greedy.strategy =
        parse_key<InnerStrategy>(c, "strategy", [](const std::string& s) { return parse_inner_strategy(s); });
    rc.greedy.c_report = false;

    Rng rng = make_rng(rc.seed, 0xf5);
    const RidgeModel fstar = random_cover_model(rc.d, terms, rc.greedy.cover_m, rc.greedy.Lambda, rng);
    rc.target = as_target_fn(fstar);
    rc.oracle_v = fstar.v();

    PenaltyConfig& p = rc.penalty;
    p.regime = parse_key<Regime>(c, "regime", [](const std::string& s) { return parse_regime(s); });
    p.scale = c.get_double("scale");
    p.delta1 = c.get_double("delta1");
    p.delta2 = c.get_double("delta2");
    p.Lambda = rc.greedy.Lambda;
    p.B = std::max(1e-12, fstar.sup_bound());
    p.sigma2 = rc.noise.variance();
    p.eta = rc.noise.bernstein_eta();
    switch (rc.noise.kind) {
    case NoiseKind::zero: rc.tail = TailClass::zero; break;
    case NoiseKind::gaussian:
        rc.tail = TailClass::sub_gaussian;
        p.nu = 4.0 * p.sigma2;
        break;
    case NoiseKind::laplace:
        rc.tail = TailClass::sub_exponential;
        p.nu = 2.0 * rc.noise.scale;
        break;
    }
    p.B_n = p.B;
    try {
        p.validate();
    } catch (const InputError& e) {
        throw ConfigError("penalty", e.what());
    }

    const auto rows = risk_curve(rc);
    c.write_header(out);
    write_risk_curve_csv(out, rows);
    return exit_ok;
}

} // namespace

int dispatch(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        const std::string& s = config.subcommand;
        if (s == "fit") return run_fit(config, out, err);
        if (s == "approx-rate") return run_approx_rate(config, out, err);
        if (s == "cover-stats") return run_cover_stats(config, out, err);
        if (s == "penalty-table") return run_penalty_table(config, out, err);
        if (s == "concentration-check") return run_concentration(config, out, err);
        if (s == "risk-curve") return run_risk_curve(config, out, err);
        err << "error: unknown subcommand '" << s << "'\n";
        return exit_config_error;
    } catch (const ConfigError& e) {
        err << "config error [" << e.key() << "]: " << e.what() << '\n';
        return exit_config_error;
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const SizeError& e) {
        err << "size error: " << e.what() << '\n';
        return exit_config_error;
    }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"ridgepursuit: l1-penalized greedy pursuit for ridge combinations"};
    app.require_subcommand(1, 1);

    struct SubState {
        std::string config_path;
        std::vector<std::string> assignments;
        std::map<std::string, std::string> flags;
    };
    std::map<std::string, SubState> state;
    for (const auto& name : subcommands()) {
        auto& st = state[name];
        CLI::App* sc = app.add_subcommand(name);
        sc->add_option("--config", st.config_path, "key=value config file");
        for (const auto& [key, def] : table_for(name)) {
            sc->add_option("--" + key, st.flags[key], "default: " + (def.empty() ? std::string("(none)") : def));
        }
        sc->add_option("assignments", st.assignments, "key=value overrides");
    }

    if (!args.empty() && !args[0].empty() && args[0][0] != '-' &&
        std::find(subcommands().begin(), subcommands().end(), args[0]) == subcommands().end()) {
        err << "error: unknown subcommand '" << args[0] << "'\n";
        return exit_config_error;
    }
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_config_error;
    }

    CLI::App* chosen = app.get_subcommands().front();
    const std::string name = chosen->get_name();
    SubState& st = state[name];

    std::vector<std::pair<std::string, std::string>> overrides;
    for (const auto& a : st.assignments) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) {
            err << "config error [" << a << "]: expected key=value, got '" << a << "'\n";
            return exit_config_error;
        }
        overrides.emplace_back(trim(a.substr(0, eq)), trim(a.substr(eq + 1)));
    }
    for (const auto& [key, def] : table_for(name)) {
        if (chosen->count("--" + key) > 0) overrides.emplace_back(key, st.flags[key]);
    }

    RunConfig config;
    try {
        config = parse_config(name, st.config_path, overrides);
    } catch (const ConfigError& e) {
        err << "config error [" << e.key() << "]: " << e.what() << '\n';
        return exit_config_error;
    }

    const std::string target = config.get_string("out");
    if (target.empty() || target == "-") return dispatch(config, out, err);
    std::ofstream file(target);
    if (!file) {
        err << "config error [out]: cannot write '" << target << "'\n";
        return exit_config_error;
    }
    return dispatch(config, file, err);
}

} // namespace ridge
