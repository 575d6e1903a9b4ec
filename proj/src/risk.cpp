#include "ridge/risk.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ridge/errors.hpp"
#include "ridge/parallel.hpp"

namespace ridge {

LossReport losses(const RidgeModel& model, const TargetFn& target, const Dataset& data, double B_n) {
    if (model.input_dim() != data.d()) throw InputError("losses: model and data dimensions differ");
    if (!data.has_test()) throw InputError("losses: dataset has no independent copy");
    LossReport r;
    const Vector f = model.evaluate(data.X);
    const Vector fs = target(data.X);
    const Vector ft = model.evaluate(data.X_test);
    const Vector fst = target(data.X_test);
    r.D_n = mean_square(f - fs);
    r.D_n_test = mean_square(ft - fst);
    r.P_n = mean_square(data.Y - f) - mean_square(data.Y - fs);
    r.P_n_test = mean_square(data.Y_test - ft) - mean_square(data.Y_test - fst);
    r.train_mse = mean_square(data.Y - f);
    r.test_mse = B_n > 0.0 ? mean_square(truncate(ft, B_n) - fst) : r.D_n_test;
    r.v_hat = model.v();
    r.m_hat = static_cast<int>(model.size());
    return r;
}

PenaltyFn greedy_penalty(const PenaltyConfig& c, double n, double d) {
    const double gamma = gamma_tau(c).gamma;
    const double L2 = c.Lambda * c.Lambda;
    switch (c.regime) {
    case Regime::highdim: {
        const double r = gamma * c.B_n * c.B_n * L2 * std::log(d + 1.0) / n;
        return PenaltyFn::linear(c.scale * 16.0 * std::pow(r, 0.25));
    }
    case Regime::nonoise: {
        const double r = gamma * L2 * std::log(d + 1.0) / n;
        return PenaltyFn::power43(c.scale * (16.0 * std::cbrt(r) + 4.0 * std::pow(r, 2.0 / 3.0)));
    }
    case Regime::moderate: {
        const double r = d * gamma * std::log(n / d + 1.0) / n;
        return PenaltyFn::linear(c.scale * 60.0 * c.Lambda * std::pow(r, moderate_main_exponent(d)));
    }
    case Regime::mixed: {
        const double q = L2 * gamma * std::log(d + 1.0) / n;
        const double a = c.scale * c.mixed_constant * std::cbrt(q);
        const double b = c.scale * c.mixed_constant * std::sqrt(std::sqrt(c.sigma2)) * std::pow(q, 0.25);
        // C[(v^4 q)^(1/3) + sqrt(sigma)(v^4 q)^(1/4)] = a v^(4/3) + b v
        return PenaltyFn::custom([a, b](double v) {
            const double u = std::max(0.0, v);
            return a * std::pow(u, 4.0 / 3.0) + b * u;
        });
    }
    }
    return PenaltyFn::zero();
}

RidgeModel random_cover_model(Eigen::Index d, int terms, int cover_m, double Lambda, Rng& rng) {
    if (d < 1 || terms < 0 || cover_m < 1) throw InputError("random_cover_model: bad sizes");
    RidgeModel f(d);
    std::vector<Vector> used;
    const auto symbols = static_cast<std::uint64_t>(2 * (d + 1) + 1);
    int guard = 0;
    while (static_cast<int>(f.size()) < terms) {
        if (++guard > 100000) throw InputError("random_cover_model: cover too small for the requested terms");
        Vector th = Vector::Zero(d + 1);
        for (int k = 0; k < cover_m; ++k) {
            const auto s = static_cast<Eigen::Index>(rng() % symbols);
            if (s == 2 * (d + 1)) continue;
            th[s / 2] += (s % 2 == 0 ? 1.0 : -1.0) * Lambda / cover_m;
        }
        // Units that vanish on the whole cube, or repeat, are redrawn.
        if (th.head(d).lpNorm<1>() <= 0.0 && th[d] <= 0.0) continue;
        if (th[d] + th.head(d).lpNorm<1>() <= 0.0) continue;
        if (std::any_of(used.begin(), used.end(), [&](const Vector& u) { return u == th; })) continue;
        used.push_back(th);
        RidgeUnit u;
        u.activation = Activation::ramp;
        u.theta = th;
        u.sign = uniform01(rng) < 0.5 ? 1 : -1;
        f.add_term(0.5 + uniform01(rng), std::move(u));
    }
    return f;
}

std::vector<int> geometric_grid(int m_max) {
    std::vector<int> g{0};
    for (int m = 1; m < m_max; m *= 2) g.push_back(m);
    if (m_max > 0) g.push_back(m_max);
    return g;
}

Selection fit_and_select(const Dataset& data, const GreedyConfig& greedy, const PenaltyConfig& penalty,
                         const std::vector<int>& m_grid) {
    if (m_grid.empty()) throw InputError("fit_and_select: empty model-size grid");
    penalty.validate();
    Selection s;
    s.m_grid = m_grid;
    std::sort(s.m_grid.begin(), s.m_grid.end());
    s.m_grid.erase(std::unique(s.m_grid.begin(), s.m_grid.end()), s.m_grid.end());
    if (s.m_grid.front() < 0) throw InputError("fit_and_select: model sizes must be >= 0");

    GreedyConfig cfg = greedy;
    cfg.m_max = s.m_grid.back();
    s.path = fit_lpgp(data.X, data.Y, cfg);
    s.B_n = penalty.B_n;
    s.T_n = tail_tn(data.Y, penalty.B_n);

    const double n = static_cast<double>(data.n());
    const double d = static_cast<double>(data.d());
    double best = std::numeric_limits<double>::infinity();
    for (int m : s.m_grid) {
        const double mse = m == 0 ? mean_square(data.Y) : s.path.steps[static_cast<std::size_t>(m - 1)].train_mse;
        const double v = m == 0 ? 0.0 : s.path.steps[static_cast<std::size_t>(m - 1)].v;
        const PenaltyValue p = penalty_per_n(penalty, v, n, d, s.T_n);
        const double obj = mse + p.total;
        s.objective.push_back(obj);
        if (obj < best) {
            best = obj;
            s.m_hat = m;
            s.v_hat = v;
            s.penalty = p;
        }
    }
    s.model = s.path.model(s.m_hat);
    return s;
}

Vector truncated_predict(const Selection& s, const Matrix& X) { return truncate_model_rows(s.model, X, s.B_n); }

// ---------------------------------------------------------------------------

double CountableClassSpec::kraft_sum() const {
    double s = 0.0;
    for (double l : L) s += std::exp(-l);
    return s;
}

void CountableClassSpec::validate() const {
    if (functions.empty()) throw InputError("class spec '" + name + "': no functions");
    if (functions.size() != L.size()) throw InputError("class spec '" + name + "': one complexity per function");
    for (double l : L) {
        if (!(l >= 0.0)) throw InputError("class spec '" + name + "': complexities must be nonnegative");
    }
    if (kraft_sum() > 1.0 + 1e-12) throw InputError("class spec '" + name + "': Kraft inequality fails");
    if (!(K >= 0.0)) throw InputError("class spec '" + name + "': K must be nonnegative");
}

std::vector<CountableClassSpec> shipped_class_specs(Eigen::Index d) {
    if (d < 1) throw InputError("shipped_class_specs: d must be >= 1");
    std::vector<CountableClassSpec> specs;
    auto coord = [](Eigen::Index j) { return TargetFn([j](const Matrix& X) { return Vector(X.col(j)); }); };

    specs.push_back({"zero", {[](const Matrix& X) { return Vector(Vector::Zero(X.rows())); }}, {0.0}, 0.0});
    specs.push_back({"singleton", {coord(0)}, {0.0}, 1.0});
    specs.push_back({"pair",
                     {coord(0), [](const Matrix& X) { return Vector(0.5 * (3.0 * X.col(0)).array().sin()); }},
                     {std::log(2.0), std::log(2.0)},
                     1.0});

    // Eight ramp units with unit-l1 direction and bias in [0, 1].
    CountableClassSpec ramps{"ramp8", {}, {}, 2.0};
    Rng rng = make_rng(0x5eed, static_cast<std::uint64_t>(d));
    for (int k = 0; k < 8; ++k) {
        RidgeUnit u;
        u.activation = Activation::ramp;
        u.theta = Vector::Zero(d + 1);
        for (Eigen::Index j = 0; j < d; ++j) u.theta[j] = 2.0 * uniform01(rng) - 1.0;
        u.theta.head(d) /= u.theta.head(d).lpNorm<1>();
        u.theta[d] = uniform01(rng);
        ramps.functions.push_back([u](const Matrix& X) { return eval_unit_rows(u, X); });
        ramps.L.push_back(std::log(8.0));
    }
    specs.push_back(std::move(ramps));
    return specs;
}

namespace {

McEstimate summarize(const std::vector<double>& vals) {
    McEstimate e;
    e.trials = static_cast<int>(vals.size());
    if (vals.empty()) return e;
    double s = 0.0;
    for (double v : vals) s += v;
    e.mean = s / static_cast<double>(vals.size());
    double ss = 0.0;
    for (double v : vals) ss += (v - e.mean) * (v - e.mean);
    if (vals.size() > 1) e.se = std::sqrt(ss / static_cast<double>(vals.size() - 1) / static_cast<double>(vals.size()));
    return e;
}

} // namespace

McEstimate mc_symmetrization_check(const CountableClassSpec& spec, double gamma, Eigen::Index n, Eigen::Index d,
                                   int trials, DesignLaw law, std::uint64_t seed) {
    spec.validate();
    if (!(gamma > 0.0)) throw InputError("mc_symmetrization_check: gamma must be positive");
    if (n < 1 || trials < 1) throw InputError("mc_symmetrization_check: n and trials must be >= 1");
    std::vector<double> vals(static_cast<std::size_t>(trials));
    const double nn = static_cast<double>(n);
    parallel_for(vals.size(), [&](std::size_t t) {
        Rng rng = make_rng(seed, t);
        const Matrix X = sample_design(n, d, law, rng);
        const Matrix Xp = sample_design(n, d, law, rng);
        double sup = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < spec.functions.size(); ++k) {
            const Vector g2 = spec.functions[k](X).array().square();
            const Vector g2p = spec.functions[k](Xp).array().square();
            const double s2 = mean_square(g2 - g2p);
            const double val = (g2p.sum() - g2.sum()) / nn - gamma / nn * spec.L[k] - s2 / (2.0 * gamma);
            sup = std::max(sup, val);
        }
        vals[t] = sup;
    });
    return summarize(vals);
}

McEstimate mc_noise_check(const CountableClassSpec& spec, double A, Eigen::Index n, Eigen::Index d, int trials,
                          const NoiseModel& noise, DesignLaw law, std::uint64_t seed) {
    spec.validate();
    if (!(A > 0.0)) throw InputError("mc_noise_check: A must be positive");
    if (n < 1 || trials < 1) throw InputError("mc_noise_check: n and trials must be >= 1");
    const double gamma = A * noise.variance() / 2.0 + spec.K * noise.bernstein_eta();
    const double nn = static_cast<double>(n);
    std::vector<double> vals(static_cast<std::size_t>(trials));
    parallel_for(vals.size(), [&](std::size_t t) {
        Rng rng = make_rng(seed, t);
        const Matrix X = sample_design(n, d, law, rng);
        Vector eps(n);
        for (Eigen::Index i = 0; i < n; ++i) eps[i] = noise.sample(rng);
        double sup = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < spec.functions.size(); ++k) {
            const Vector g = spec.functions[k](X);
            const double val = eps.dot(g) / nn - gamma / nn * spec.L[k] - g.squaredNorm() / (A * nn);
            sup = std::max(sup, val);
        }
        vals[t] = sup;
    });
    return summarize(vals);
}

// ---------------------------------------------------------------------------

std::vector<RiskCurveRow> risk_curve(const RiskCurveConfig& config) {
    if (!config.target) throw InputError("risk_curve: target is required");
    if (config.trials < 1) throw InputError("risk_curve: trials must be >= 1");
    std::vector<std::pair<Eigen::Index, int>> tasks;
    for (Eigen::Index n : config.n_grid) {
        if (n < 1) throw InputError("risk_curve: n must be >= 1");
        for (int t = 0; t < config.trials; ++t) tasks.emplace_back(n, t);
    }
    std::sort(tasks.begin(), tasks.end());
    std::vector<RiskCurveRow> rows(tasks.size());

    parallel_for(tasks.size(), [&](std::size_t k) {
        const auto [n, trial] = tasks[k];
        const std::uint64_t seed =
            derive_seed(config.seed, (static_cast<std::uint64_t>(n) << 20) + static_cast<std::uint64_t>(trial));
        const Dataset data = gen_dataset(config.target, n, config.d, config.noise, seed, config.design);

        PenaltyConfig pc = config.penalty;
        pc.B_n = std::max(pc.B, select_Bn(pc.B, pc.nu, static_cast<double>(n), config.tail));
        GreedyConfig gc = config.greedy;
        gc.w = greedy_penalty(pc, static_cast<double>(n), static_cast<double>(config.d));
        gc.seed = seed;
        const Selection s = fit_and_select(data, gc, pc, geometric_grid(config.m_max));

        RiskCurveRow& r = rows[k];
        r.n = n;
        r.d = config.d;
        r.trial = trial;
        r.regime = pc.regime;
        r.m_hat = s.m_hat;
        r.v_hat = s.v_hat;
        r.test_mse = mean_square(truncated_predict(s, data.X_test) - config.target(data.X_test));
        r.pen_per_n = s.penalty.total;
        r.tau = gamma_tau(pc).tau;
        r.resolvability_proxy =
            config.oracle_err +
            penalty_per_n(pc, config.oracle_v, static_cast<double>(n), static_cast<double>(config.d), s.T_n).total;
    });
    return rows;
}

void write_risk_curve_csv(std::ostream& out, const std::vector<RiskCurveRow>& rows) {
    out << "n,d,trial,regime,m_hat,v_hat,test_mse,pen_per_n,resolvability_proxy\n";
    char buf[512];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%lld,%lld,%d,%s,%d,%.17g,%.17g,%.17g,%.17g\n", static_cast<long long>(r.n),
                      static_cast<long long>(r.d), r.trial, std::string(to_string(r.regime)).c_str(), r.m_hat, r.v_hat,
                      r.test_mse, r.pen_per_n, r.resolvability_proxy);
        out << buf;
    }
}

} // namespace ridge
