#include <doctest.h>

#include <numbers>

#include "oracles.hpp"
#include "ridge/errors.hpp"
#include "ridge/penalty.hpp"
#include "ridge/targets.hpp"

using namespace ridge;

namespace {

bool rel_close(double a, double b, double tol = 1e-12) {
    return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

// gamma such that gamma B_n^2 Lambda^2 log(d+1) / n = 1 with B_n = Lambda = 1, d = 1
double unit_ratio_gamma(double n) { return n / std::log(2.0); }

} // namespace

TEST_CASE("gamma_tau examples") {
    PenaltyConfig c;
    c.delta1 = c.delta2 = 1.0;
    c.B = c.B_n = 1.0;
    c.sigma2 = 1.0;
    c.eta = 0.0;
    const GammaTau g = gamma_tau(c);
    CHECK(rel_close(g.gamma, 6.25));
    CHECK(rel_close(g.tau, 4.0));

    c.sigma2 = 0.0;
    c.delta1 = 0.5;
    c.delta2 = 2.0;
    c.B = 0.7;
    c.B_n = 1.9;
    const double tau = 1.5 * 3.0;
    const double base = (1.0 + 0.25) * (1.0 + 4.0) * 2.6 * 2.6 / (2.0 * tau);
    CHECK(rel_close(gamma_tau(c).gamma, base));
    CHECK(rel_close(gamma_tau(c).tau, tau));

    PenaltyConfig d2 = c;
    d2.B *= 2.0;
    d2.B_n *= 2.0;
    CHECK(rel_close(gamma_tau(d2).gamma, 4.0 * gamma_tau(c).gamma));

    c.eta = 0.3;
    c.sigma2 = 0.4;
    CHECK(rel_close(gamma_tau(c).gamma, base + 2.0 * 1.5 * 0.4 + 2.0 * 2.6 * 0.3));
}

TEST_CASE("PenaltyConfig validation") {
    PenaltyConfig c;
    c.B = 2.0;
    c.B_n = 1.0;
    CHECK_THROWS_AS(c.validate(), InputError);
    c.B_n = 2.0;
    CHECK_NOTHROW(c.validate());
    c.delta1 = 0.0;
    CHECK_THROWS_AS(c.validate(), InputError);
    c.delta1 = 1.0;
    c.sigma2 = -1.0;
    CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("regime and tail names") {
    for (Regime r : {Regime::highdim, Regime::nonoise, Regime::moderate, Regime::mixed}) {
        CHECK(parse_regime(to_string(r)) == r);
    }
    CHECK(parse_regime("highdim-noise") == Regime::highdim);
    CHECK(parse_regime("no-noise") == Regime::nonoise);
    CHECK_THROWS_AS(parse_regime("bogus"), InputError);
    for (TailClass t : {TailClass::sub_exponential, TailClass::sub_gaussian, TailClass::zero}) {
        CHECK(parse_tail_class(to_string(t)) == t);
    }
}

TEST_CASE("select_Bn examples") {
    const double e = std::numbers::e;
    CHECK(rel_close(select_Bn(1.0, 1.0, e, TailClass::sub_exponential), 2.0 * std::numbers::sqrt2));
    CHECK(rel_close(select_Bn(1.0, 1.0, e, TailClass::sub_gaussian), 2.0 * std::numbers::sqrt2));
    CHECK(select_Bn(1.3, 5.0, 100.0, TailClass::zero) == 1.3);
}

TEST_CASE("truncate examples") {
    CHECK(truncate(2.0, 1.0) == 1.0);
    CHECK(truncate(-0.5, 1.0) == -0.5);
    CHECK(truncate(-3.0, 2.0) == -2.0);
    Vector v(3);
    v << 2.0, -0.5, -3.0;
    const Vector t = truncate(v, 1.0);
    CHECK(t(0) == 1.0);
    CHECK(t(1) == -0.5);
    CHECK(t(2) == -1.0);

    RidgeModel m(1);
    m.set_affine(3.0, Vector::Zero(1));
    CHECK(truncate_model_eval(m, Vector(Vector::Zero(1)), 1.5) == 1.5);
    Matrix X = Matrix::Zero(4, 1);
    CHECK((truncate_model_rows(m, X, 2.0).array() == 2.0).all());
}

TEST_CASE("tail_tn examples") {
    Vector y(2);
    y << 3.0, 0.0;
    CHECK(tail_tn(y, 2.0) == 10.0);
    y << -3.0, 3.0;
    CHECK(tail_tn(y, 2.0) == 20.0);
    y << 1.0, -2.0;
    CHECK(tail_tn(y, 2.0) == 0.0);
}

TEST_CASE("truncation inequalities hold exactly on random tuples") {
    Rng rng = make_rng(10, 0);
    int bad1 = 0, bad2 = 0, bad3 = 0;
    auto draw = [&]() { return 8.0 * uniform01(rng) - 4.0; };
    for (int k = 0; k < 100000; ++k) {
        const double Bn = 0.05 + 3.0 * uniform01(rng);
        const double y = draw(), f = draw(), ft = draw(), f1 = draw();
        const double tail = std::abs(y) > Bn ? 1.0 : 0.0;
        const double Tf = truncate(f, Bn), Tft = truncate(ft, Bn);
        const double slack = 1e-12 * (1.0 + y * y + f * f + ft * ft + f1 * f1);
        // (I)
        if ((y - Tf) * (y - Tf) > (y - f) * (y - f) + 2.0 * std::pow(std::abs(y) - Bn, 2) * tail + slack) ++bad1;
        // (II)
        if ((y - Tf) * (y - Tf) >
            (y - Tft) * (y - Tft) + 4.0 * Bn * std::abs(f - ft) + 4.0 * Bn * (std::abs(y) - Bn) * tail + slack)
            ++bad2;
        // (III)
        if ((Tft - Tf) * (Tft - Tf) > (f - f1) * (f - f1) + 4.0 * Bn * std::abs(f1 - ft) + slack) ++bad3;
    }
    CHECK(bad1 == 0);
    CHECK(bad2 == 0);
    CHECK(bad3 == 0);
}

TEST_CASE("truncation tail bound by Monte Carlo") {
    const double B = 1.0;
    const double n = 50.0;
    const int draws = 100000;
    SUBCASE("sub-exponential: Laplace with b = nu / 2") {
        const double nu = 0.5;
        const NoiseModel noise = NoiseModel::laplace(nu / 2.0);
        const double Bn = select_Bn(B, nu, n, TailClass::sub_exponential);
        Rng rng = make_rng(11, 0);
        std::vector<double> tail, mgf;
        for (int k = 0; k < draws; ++k) {
            const double e = noise.sample(rng);
            const double y = B + e;
            tail.push_back(std::abs(y) > Bn ? y * y - Bn * Bn : 0.0);
            mgf.push_back(std::exp(std::abs(e) / nu));
        }
        const auto t = oracle::mean_se(tail);
        CHECK(oracle::mean_se(mgf).mean == doctest::Approx(2.0).epsilon(0.02));
        CHECK(t.mean <= 4.0 * nu * nu / n * 2.0 + 3.0 * t.se);
    }
    SUBCASE("sub-Gaussian: Gaussian with nu = 4 sigma^2") {
        const double sigma = 0.4;
        const double nu = 4.0 * sigma * sigma;
        const NoiseModel noise = NoiseModel::gaussian(sigma);
        const double Bn = select_Bn(B, nu, n, TailClass::sub_gaussian);
        Rng rng = make_rng(12, 0);
        std::vector<double> tail, mgf;
        for (int k = 0; k < draws; ++k) {
            const double e = noise.sample(rng);
            const double y = B + e;
            tail.push_back(std::abs(y) > Bn ? y * y - Bn * Bn : 0.0);
            mgf.push_back(std::exp(e * e / nu));
        }
        const auto t = oracle::mean_se(tail);
        CHECK(oracle::mean_se(mgf).mean == doctest::Approx(std::numbers::sqrt2).epsilon(0.02));
        CHECK(t.mean <= 2.0 * nu / n * std::numbers::sqrt2 + 3.0 * t.se);
    }
}

TEST_CASE("pen_highdim examples") {
    const double n = 1000.0;
    const double g = unit_ratio_gamma(n);
    CHECK(rel_close(pen_highdim(1.0, n, 1.0, 1.0, g, 1.0, 0.0).total, 24.0));
    CHECK(rel_close(pen_highdim(1.0, n, 1.0, 1.0, g, 1.0, 0.0).main, 16.0));
    CHECK(rel_close(pen_highdim(0.0, n, 1.0, 1.0, g, 1.0, 50.0).total, 8.0 + 50.0 / n));
    const double m1 = pen_highdim(2.0, 100.0, 5.0, 2.0, 3.0, 1.5, 0.0).main;
    const double m16 = pen_highdim(2.0, 1600.0, 5.0, 2.0, 3.0, 1.5, 0.0).main;
    CHECK(rel_close(m16, m1 / 2.0));
}

TEST_CASE("pen_nonoise examples") {
    const double n = 1000.0;
    const double g = unit_ratio_gamma(n);
    CHECK(rel_close(pen_nonoise(1.0, n, 1.0, 1.0, g).total, 24.0));
    CHECK(rel_close(pen_nonoise(0.0, n, 1.0, 1.0, g).total, 4.0));
    CHECK(pen_nonoise(3.0, 1e300, 1.0, 1.0, 1.0).total < 1e-90);
}

TEST_CASE("pen_moderate examples") {
    CHECK(rel_close(moderate_main_exponent(1.0), 0.625));
    CHECK(std::abs(moderate_main_exponent(1e12) - 0.5) < 1e-11);
    // r = d gamma log(n/d + 1) / n = 1
    const double n = 100.0, d = 1.0;
    const double g = n / (d * std::log(n / d + 1.0));
    const PenaltyValue p = pen_moderate(1.0, n, d, 2.0, g, 0.0);
    CHECK_FALSE(p.valid);
    CHECK(rel_close(p.total, 60.0 * 2.0 + 0.25 + 1.0 + 1.0));

    // independent evaluation of the four displayed terms at a valid point
    const double n2 = 1e8, d2 = 2.0, L = 2.0, g2 = 1.5, T = 3.0;
    const double r = d2 * g2 * std::log(n2 / d2 + 1.0) / n2;
    const double e1 = 0.5 + 1.0 / 10.0, e3 = 0.5 + 3.0 / 10.0;
    const PenaltyValue q = pen_moderate(0.7, n2, d2, L, g2, T);
    CHECK(q.valid);
    CHECK(rel_close(q.main, 60.0 * 0.7 * L * std::pow(r, e1)));
    CHECK(rel_close(q.total, 60.0 * 0.7 * L * std::pow(r, e1) + std::pow(r, e1) / (L * L) + std::pow(r, e3) + r + T / n2));
    // d above n/(e-1) is outside the regime
    CHECK_FALSE(pen_moderate(0.7, 10.0, 8.0, L, 1e-6, 0.0).valid);
}

TEST_CASE("pen_mixed examples") {
    const double n = 500.0;
    const double g = unit_ratio_gamma(n);
    CHECK(rel_close(pen_mixed(1.0, n, 1.0, 1.0, g, 1.0, 1.0).total, 2.0));
    CHECK(rel_close(pen_mixed(1.0, n, 1.0, 1.0, g, 0.0, 1.0).total, 1.0));
    CHECK(pen_mixed(0.0, n, 1.0, 1.0, g, 1.0, 1.0).total == 0.0);
    CHECK(rel_close(pen_mixed(1.0, n, 1.0, 1.0, g, 1.0, 2.5).total, 5.0));
}

TEST_CASE("tuning_highdim examples") {
    const double n = 1000.0;
    const Tuning t = tuning_highdim(n, 1.0, 1.0, unit_ratio_gamma(n), 1.0, 1.0);
    CHECK(rel_close(t.eps, 1.0));
    CHECK(t.m0 == 1);
    const Tuning a = tuning_highdim(100.0, 4.0, 2.0, 3.0, 1.2, 5.0);
    const Tuning b = tuning_highdim(1600.0, 4.0, 2.0, 3.0, 1.2, 5.0);
    CHECK(rel_close(b.eps, a.eps / 2.0));
    CHECK(tuning_highdim(100.0, 4.0, 2.0, 3.0, 1.2, 0.0).m0 == 1);
    // m0 = ceil(sqrt(v^2 n eps^2 / (2 gamma Lambda^2 log(d+1))))
    const double L = 3.0 * 4.0 * std::log(5.0);
    CHECK(a.m0 == static_cast<long long>(std::ceil(std::sqrt(25.0 * 100.0 * a.eps * a.eps / (2.0 * L)))));
}

TEST_CASE("penalties are nondecreasing in v and continuous in n") {
    const double g = 2.0;
    for (double n : {64.0, 1000.0, 1e5}) {
        double prev[4] = {-1, -1, -1, -1};
        for (double v = 0.0; v <= 20.0; v += 0.25) {
            const double p[4] = {pen_highdim(v, n, 10.0, 2.0, g, 1.5, 0.0).total, pen_nonoise(v, n, 10.0, 2.0, g).total,
                                 pen_moderate(v, n, 2.0, 2.0, g, 0.0).total, pen_mixed(v, n, 10.0, 2.0, g, 0.5, 1.0).total};
            for (int k = 0; k < 4; ++k) {
                CHECK(p[k] >= prev[k]);
                prev[k] = p[k];
            }
        }
    }
    // small relative steps in n give small relative changes
    for (double n = 100.0; n < 1e6; n *= 1.7) {
        const double a = pen_highdim(1.0, n, 10.0, 2.0, g, 1.5, 0.0).total;
        const double b = pen_highdim(1.0, n * (1.0 + 1e-9), 10.0, 2.0, g, 1.5, 0.0).total;
        CHECK(std::abs(a - b) <= 1e-7 * a);
        const double c = pen_nonoise(1.0, n, 10.0, 2.0, g).total;
        const double e = pen_nonoise(1.0, n * (1.0 + 1e-9), 10.0, 2.0, g).total;
        CHECK(std::abs(c - e) <= 1e-7 * c);
    }
}

TEST_CASE("no-noise main term eventually beats the high-dimensional one") {
    // ratio < 1 throughout; the cube root decays faster than the fourth root
    const double g = 1.0, d = 10.0, L = 1.0, v = 1.0;
    bool crossed = false;
    bool stays = true;
    for (int k = 10; k <= 30; ++k) {
        const double n = std::ldexp(1.0, k);
        const bool better = pen_nonoise(v, n, d, L, g).main <= pen_highdim(v, n, d, L, g, 1.0, 0.0).main;
        if (crossed && !better) stays = false;
        crossed = crossed || better;
    }
    CHECK(crossed);
    CHECK(stays);
    CHECK(pen_nonoise(v, std::ldexp(1.0, 30), d, L, g).main <= pen_highdim(v, std::ldexp(1.0, 30), d, L, g, 1.0, 0.0).main);
}

TEST_CASE("penalty_per_n dispatches by regime and applies the scale") {
    PenaltyConfig c;
    c.B = 1.0;
    c.B_n = 2.0;
    c.sigma2 = 0.25;
    c.eta = 0.5;
    const double gamma = gamma_tau(c).gamma;
    const double n = 512.0, d = 8.0, v = 1.7, T = 4.0;
    c.regime = Regime::highdim;
    CHECK(rel_close(penalty_per_n(c, v, n, d, T).total, pen_highdim(v, n, d, c.Lambda, gamma, c.B_n, T).total));
    c.regime = Regime::nonoise;
    CHECK(rel_close(penalty_per_n(c, v, n, d, T).total, pen_nonoise(v, n, d, c.Lambda, gamma).total));
    c.regime = Regime::moderate;
    CHECK(rel_close(penalty_per_n(c, v, n, d, T).total, pen_moderate(v, n, d, c.Lambda, gamma, T).total));
    c.regime = Regime::mixed;
    CHECK(rel_close(penalty_per_n(c, v, n, d, T).total, pen_mixed(v, n, d, c.Lambda, gamma, 0.5, 1.0).total));
    c.scale = 0.1;
    CHECK(rel_close(penalty_per_n(c, v, n, d, T).total, 0.1 * pen_mixed(v, n, d, c.Lambda, gamma, 0.5, 1.0).total));
    CHECK(resolvability_factor_rough(4.0) == 5.0);
    CHECK(resolvability_factor_greedy(4.0) == 10.0);
}
