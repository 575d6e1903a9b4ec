#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "ridge/errors.hpp"
#include "ridge/risk.hpp"

using namespace ridge;

namespace {

RidgeModel constant_unit_model(Eigen::Index d, double weight) {
    RidgeUnit u;
    u.theta = Vector::Zero(d + 1);
    u.theta(d) = 2.0;
    RidgeModel f(d);
    f.add_term(weight, u);
    return f;
}

PenaltyConfig small_penalty(Regime r, double B, double sigma2 = 0.0) {
    PenaltyConfig c;
    c.B = B;
    c.B_n = B;
    c.sigma2 = sigma2;
    c.regime = r;
    c.scale = 0.01;
    return c;
}

} // namespace

TEST_CASE("losses examples") {
    Rng rng = make_rng(1, 0);
    const RidgeModel fstar = random_cover_model(3, 3, 2, 2.0, rng);
    const TargetFn target = as_target_fn(fstar);

    const Dataset clean = gen_dataset(target, 100, 3, NoiseModel::zero(), 4);
    const LossReport same = losses(fstar, target, clean, 0.0);
    CHECK(same.D_n == 0.0);
    CHECK(same.D_n_test == 0.0);

    RidgeModel shifted = fstar;
    shifted.set_affine(1.0, Vector::Zero(3));
    const LossReport off = losses(shifted, target, clean, 0.0);
    CHECK(off.D_n == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(off.D_n_test == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(off.P_n == doctest::Approx(off.D_n).epsilon(1e-12));

    CHECK_THROWS_AS(losses(RidgeModel(2), target, clean, 0.0), InputError);
}

TEST_CASE("P_n identity with known noise") {
    Rng rng = make_rng(2, 0);
    const RidgeModel fstar = random_cover_model(4, 3, 2, 2.0, rng);
    const RidgeModel f = random_cover_model(4, 5, 2, 2.0, rng);
    for (NoiseModel noise : {NoiseModel::gaussian(0.7), NoiseModel::laplace(0.4)}) {
        const Dataset data = gen_dataset(as_target_fn(fstar), 150, 4, noise, 9);
        const LossReport r = losses(f, as_target_fn(fstar), data, 0.0);
        const Vector g = f.evaluate(data.X) - fstar.evaluate(data.X);
        const double identity = r.D_n - 2.0 * data.noise.dot(g) / 150.0;
        CHECK(std::abs(r.P_n - identity) <= 1e-10);
        const Vector gt = f.evaluate(data.X_test) - fstar.evaluate(data.X_test);
        CHECK(std::abs(r.P_n_test - (r.D_n_test - 2.0 * data.noise_test.dot(gt) / 150.0)) <= 1e-10);
    }
}

TEST_CASE("P'_n is unbiased for the population distance") {
    Rng rng = make_rng(3, 0);
    const RidgeModel fstar = random_cover_model(2, 2, 2, 2.0, rng);
    const RidgeModel f = random_cover_model(2, 3, 2, 2.0, rng);
    const TargetFn target = as_target_fn(fstar);
    std::vector<double> pp;
    for (int t = 0; t < 10000; ++t) {
        const Dataset data = gen_dataset(target, 20, 2, NoiseModel::gaussian(0.5), 1000 + static_cast<std::uint64_t>(t));
        pp.push_back(losses(f, target, data, 0.0).P_n_test);
    }
    const auto est = oracle::mean_se(pp);
    Rng erng = make_rng(4, 0);
    const Matrix E = sample_design(200000, 2, DesignLaw::uniform, erng);
    std::vector<double> sq(static_cast<std::size_t>(E.rows()));
    const Vector diff = f.evaluate(E) - fstar.evaluate(E);
    for (Eigen::Index i = 0; i < E.rows(); ++i) sq[static_cast<std::size_t>(i)] = diff(i) * diff(i);
    const auto pop = oracle::mean_se(sq);
    CHECK(std::abs(est.mean - pop.mean) <= 3.0 * std::hypot(est.se, pop.se));
}

TEST_CASE("random_cover_model and geometric_grid") {
    Rng rng = make_rng(5, 0);
    const SparseCover cover = enumerate_cover(5, 2, 2.0);
    const RidgeModel f = random_cover_model(4, 6, 2, 2.0, rng);
    CHECK(f.size() == 6);
    for (std::size_t a = 0; a < f.size(); ++a) {
        CHECK(cover.contains(f.terms()[a].unit.theta));
        CHECK(f.terms()[a].weight >= 0.5);
        CHECK(f.terms()[a].weight <= 1.5);
        for (std::size_t b = 0; b < a; ++b) CHECK(f.terms()[a].unit.theta != f.terms()[b].unit.theta);
    }
    CHECK(geometric_grid(16) == std::vector<int>{0, 1, 2, 4, 8, 16});
    CHECK(geometric_grid(10) == std::vector<int>{0, 1, 2, 4, 8, 10});
    CHECK(geometric_grid(1) == std::vector<int>{0, 1});
    CHECK(geometric_grid(0) == std::vector<int>{0});
}

TEST_CASE("greedy penalty is the v-dependent part of the per-sample penalty") {
    for (Regime r : {Regime::highdim, Regime::nonoise, Regime::moderate, Regime::mixed}) {
        PenaltyConfig c;
        c.B = 1.0;
        c.B_n = 2.0;
        c.sigma2 = 0.25;
        c.regime = r;
        c.scale = 0.3;
        const double n = 300.0, d = 6.0;
        const PenaltyFn w = greedy_penalty(c, n, d);
        CHECK(check_convex(w, 20.0));
        for (double v : {0.0, 0.5, 1.7, 6.0}) {
            const double diff = penalty_per_n(c, v, n, d, 0.0).total - penalty_per_n(c, 0.0, n, d, 0.0).total;
            CHECK(w(v) == doctest::Approx(diff).epsilon(1e-12));
        }
    }
}

TEST_CASE("fit_and_select on a noiseless single cover unit") {
    const RidgeModel fstar = constant_unit_model(3, 1.5);
    const Dataset data = gen_dataset(as_target_fn(fstar), 200, 3, NoiseModel::zero(), 6);
    for (Regime r : {Regime::highdim, Regime::nonoise, Regime::moderate, Regime::mixed}) {
        const PenaltyConfig pc = small_penalty(r, fstar.sup_bound());
        GreedyConfig gc;
        gc.w = greedy_penalty(pc, 200.0, 3.0);
        const Selection s = fit_and_select(data, gc, pc, geometric_grid(8));
        CHECK(s.m_hat == 1);
        const double test = mean_square(truncated_predict(s, data.X_test) - fstar.evaluate(data.X_test));
        CHECK(test <= s.path.steps[0].train_mse + 1e-8);
        for (double o : s.objective) CHECK(s.objective[static_cast<std::size_t>(std::find(s.m_grid.begin(), s.m_grid.end(), s.m_hat) - s.m_grid.begin())] <= o);
    }
}

TEST_CASE("fit_and_select with a pure-noise target and a heavy penalty") {
    const TargetFn zero = [](const Matrix& X) { return Vector(Vector::Zero(X.rows())); };
    const Dataset data = gen_dataset(zero, 150, 2, NoiseModel::gaussian(0.3), 7);
    PenaltyConfig pc = small_penalty(Regime::highdim, 0.0, 0.09);
    pc.B_n = 1.0;
    pc.scale = 100.0;
    GreedyConfig gc;
    gc.w = greedy_penalty(pc, 150.0, 2.0);
    const Selection s = fit_and_select(data, gc, pc, geometric_grid(8));
    CHECK(s.v_hat < 1e-12);
    CHECK(mean_square(truncated_predict(s, data.X_test)) <= 1e-24);

    const Selection only_zero = fit_and_select(data, gc, pc, {0});
    CHECK(only_zero.m_hat == 0);
    CHECK(only_zero.model.empty());
    CHECK_THROWS_AS(fit_and_select(data, gc, pc, {}), InputError);
}

TEST_CASE("selected size minimizes the objective on noisy data") {
    Rng rng = make_rng(8, 0);
    const RidgeModel fstar = random_cover_model(3, 3, 2, 2.0, rng);
    const Dataset data = gen_dataset(as_target_fn(fstar), 300, 3, NoiseModel::gaussian(0.4), 8);
    PenaltyConfig pc = small_penalty(Regime::highdim, fstar.sup_bound(), 0.16);
    pc.B_n = select_Bn(pc.B, 4.0 * 0.16, 300.0, TailClass::sub_gaussian);
    GreedyConfig gc;
    gc.w = greedy_penalty(pc, 300.0, 3.0);
    const Selection s = fit_and_select(data, gc, pc, geometric_grid(16));
    std::size_t at = 0;
    for (std::size_t k = 0; k < s.m_grid.size(); ++k)
        if (s.m_grid[k] == s.m_hat) at = k;
    for (std::size_t k = 0; k < s.objective.size(); ++k) {
        CHECK(s.objective[at] <= s.objective[k]);
        if (k < at) CHECK(s.objective[k] > s.objective[at]);
    }
    CHECK(truncated_predict(s, data.X_test).cwiseAbs().maxCoeff() <= s.B_n);
}

TEST_CASE("class specs and the Kraft inequality") {
    for (const auto& spec : shipped_class_specs(3)) {
        CHECK_NOTHROW(spec.validate());
        CHECK(spec.kraft_sum() <= 1.0 + 1e-12);
    }
    CountableClassSpec bad{"bad", {}, {}, 1.0};
    const TargetFn one = [](const Matrix& X) { return Vector(Vector::Ones(X.rows())); };
    bad.functions = {one, one};
    bad.L = {0.0, 0.0};
    CHECK_THROWS_AS(bad.validate(), InputError);
    CHECK_THROWS_AS(mc_symmetrization_check(bad, 1.0, 10, 1, 10, DesignLaw::uniform, 1), InputError);
}

TEST_CASE("concentration checks") {
    const auto specs = shipped_class_specs(2);
    const McEstimate z = mc_symmetrization_check(specs[0], 1.0, 50, 2, 200, DesignLaw::uniform, 1);
    CHECK(z.mean == 0.0);
    CHECK(z.se == 0.0);
    const McEstimate zn = mc_noise_check(specs[0], 1.0, 50, 2, 200, NoiseModel::gaussian(1.0), DesignLaw::uniform, 1);
    CHECK(zn.mean == 0.0);
    for (const auto& spec : specs) {
        for (DesignLaw law : {DesignLaw::uniform, DesignLaw::bernoulli}) {
            const McEstimate a = mc_symmetrization_check(spec, 1.0, 200, 2, 2000, law, 2);
            CHECK(a.within(3.0));
            CHECK(a.trials == 2000);
            for (NoiseModel noise : {NoiseModel::gaussian(0.5), NoiseModel::laplace(0.5)}) {
                const McEstimate b = mc_noise_check(spec, 2.0, 200, 2, 2000, noise, law, 3);
                CHECK(b.within(3.0));
            }
        }
    }
}

TEST_CASE("risk_curve determinism and shape") {
    Rng rng = make_rng(9, 0);
    const RidgeModel fstar = constant_unit_model(2, 1.0);
    RiskCurveConfig rc;
    rc.target = as_target_fn(fstar);
    rc.d = 2;
    rc.n_grid = {100};
    rc.trials = 1;
    rc.penalty = small_penalty(Regime::nonoise, fstar.sup_bound());
    rc.penalty.scale = 1e-6;
    rc.m_max = 4;
    rc.oracle_v = fstar.v();
    const auto one = risk_curve(rc);
    REQUIRE(one.size() == 1);
    CHECK(one[0].test_mse < 1e-9);
    CHECK(one[0].n == 100);

    rc.n_grid = {60, 120};
    rc.trials = 3;
    rc.noise = NoiseModel::gaussian(0.3);
    rc.tail = TailClass::sub_gaussian;
    rc.penalty.nu = 4.0 * 0.09;
    rc.penalty.sigma2 = 0.09;
    rc.penalty.regime = Regime::highdim;
    const auto a = risk_curve(rc);
    const auto b = risk_curve(rc);
    REQUIRE(a.size() == 6);
    std::ostringstream sa, sb;
    write_risk_curve_csv(sa, a);
    write_risk_curve_csv(sb, b);
    CHECK(sa.str() == sb.str());
    CHECK(sa.str().rfind("n,d,trial,regime,m_hat,v_hat,test_mse,pen_per_n,resolvability_proxy\n", 0) == 0);
    CHECK(a[0].n == 60);
    CHECK(a[5].n == 120);
    CHECK(a[5].trial == 2);
    for (const auto& r : a) CHECK(r.tau == 4.0);
}
