#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "ridge/dictionary.hpp"
#include "ridge/errors.hpp"

using namespace ridge;

namespace {

RidgeUnit unit(Activation a, std::vector<double> theta, int sign = 1) {
    RidgeUnit u;
    u.activation = a;
    u.theta = Eigen::Map<Vector>(theta.data(), static_cast<Eigen::Index>(theta.size()));
    u.sign = sign;
    return u;
}

Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index i = 0;
    for (double x : xs) v(i++) = x;
    return v;
}

} // namespace

TEST_CASE("eval_unit examples") {
    CHECK(eval_unit(unit(Activation::ramp, {1.0, 0.0}), vec({0.5})) == doctest::Approx(0.5));
    CHECK(eval_unit(unit(Activation::ramp, {1.0, 0.0}), vec({-0.5})) == 0.0);
    CHECK(eval_unit(unit(Activation::sine, {0.0, 0.0, 0.0}), vec({0.3, -0.9})) == 0.0);
    CHECK(eval_unit(unit(Activation::ramp, {1.0, 0.0}, -1), vec({0.5})) == doctest::Approx(-0.5));
    CHECK(eval_unit(unit(Activation::tanh_sigmoid, {0.5, 0.25}), vec({1.0})) == doctest::Approx(std::tanh(0.75)));
}

TEST_CASE("eval_unit rejects a dimension mismatch") {
    CHECK_THROWS_AS(eval_unit(unit(Activation::ramp, {1.0, 0.0}), vec({0.5, 0.5})), InputError);
    Matrix X(3, 2);
    X.setZero();
    CHECK_THROWS_AS(eval_unit_rows(unit(Activation::ramp, {1.0, 0.0}), X), InputError);
}

TEST_CASE("matrix evaluation agrees with pointwise evaluation") {
    Rng rng = make_rng(3, 0);
    Matrix X(20, 3);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = 2.0 * uniform01(rng) - 1.0;
    for (Activation a : {Activation::ramp, Activation::sine, Activation::tanh_sigmoid}) {
        const RidgeUnit u = unit(a, {0.4, -0.3, 0.2, 0.1}, -1);
        const Vector all = eval_unit_rows(u, X);
        for (Eigen::Index i = 0; i < X.rows(); ++i) CHECK(all(i) == eval_unit(u, X.row(i).transpose()));
    }
}

TEST_CASE("activations are 1-Lipschitz and bounded") {
    Rng rng = make_rng(11, 0);
    for (Activation a : {Activation::ramp, Activation::sine, Activation::tanh_sigmoid}) {
        bool ok = true;
        for (int k = 0; k < 100000; ++k) {
            const double u = 8.0 * uniform01(rng) - 4.0;
            const double w = 8.0 * uniform01(rng) - 4.0;
            if (std::abs(activate(a, u) - activate(a, w)) > std::abs(u - w)) ok = false;
        }
        CHECK(ok);
    }
    CHECK(activation_bound(Activation::sine) == 1.0);
    CHECK(activation_bound(Activation::tanh_sigmoid) == 1.0);
    CHECK(activation_bound(Activation::ramp) == 2.0);
    // a ramp with ||theta||_1 = 2 reaches 2 on the cube
    CHECK(eval_unit(unit(Activation::ramp, {1.0, 1.0}), vec({1.0})) == 2.0);
}

TEST_CASE("activation names round-trip") {
    for (Activation a : {Activation::ramp, Activation::sine, Activation::tanh_sigmoid}) {
        CHECK(parse_activation(to_string(a)) == a);
    }
    CHECK_THROWS_AS(parse_activation("step"), InputError);
}

TEST_CASE("enumerate_cover d=1 m=1") {
    const SparseCover c = enumerate_cover(1, 1, 2.0);
    REQUIRE(c.size() == 3);
    std::set<double> values;
    for (const auto& e : c.elements) values.insert(e.dense(1)(0));
    CHECK(values == std::set<double>{-2.0, 0.0, 2.0});
}

TEST_CASE("enumerate_cover matches brute-force multiset counts") {
    CHECK(enumerate_cover(2, 2, 1.0).size() == 15);
    CHECK(enumerate_cover(3, 2, 1.0).size() == 28);
    for (int d = 1; d <= 12; ++d) {
        for (int m = 1; m <= 6; ++m) {
            const std::uint64_t expect = oracle::pascal(static_cast<unsigned>(2 * d + m), static_cast<unsigned>(m));
            if (expect > 100000) continue;
            CHECK(oracle::count_multisets(static_cast<unsigned>(2 * d + 1), static_cast<unsigned>(m)) == expect);
            CHECK(enumerate_cover(d, m, 2.0).size() == expect);
        }
    }
}

TEST_CASE("cover vectors coincide with the brute-force vector multiset") {
    for (auto [d, m] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{3, 3}}) {
        const double radius = 1.5;
        std::vector<std::vector<double>> brute;
        oracle::all_cover_vectors(d, m, radius, brute);
        std::vector<std::vector<double>> ours;
        const SparseCover c = enumerate_cover(d, m, radius);
        for (const auto& e : c.elements) {
            const Vector v = e.dense(d);
            ours.emplace_back(v.data(), v.data() + v.size());
            CHECK(e.l1_norm() <= radius + 1e-12);
        }
        auto close_sort = [](std::vector<std::vector<double>>& xs) {
            for (auto& x : xs)
                for (auto& y : x) y = std::round(y * 1e9) / 1e9;
            std::sort(xs.begin(), xs.end());
        };
        close_sort(brute);
        close_sort(ours);
        CHECK(brute == ours);
    }
}

TEST_CASE("cover elements are lexicographically sorted") {
    const SparseCover c = enumerate_cover(3, 3, 2.0);
    for (std::size_t i = 1; i < c.size(); ++i) CHECK(compare_theta(c.elements[i - 1], c.elements[i]) <= 0);
    // {+e1, -e1} and {0, 0} share the zero vector, so distinct < size
    const SparseCover c2 = enumerate_cover(2, 2, 1.0);
    CHECK(c2.distinct_indices().size() == 13);
}

TEST_CASE("enumerate_cover refuses oversized requests") {
    CHECK_THROWS_AS(enumerate_cover(64, 5, 2.0), SizeError);
    CHECK_THROWS_AS(enumerate_cover(3, 3, 2.0, 10), SizeError);
    CHECK_THROWS_AS(enumerate_cover(0, 1, 2.0), InputError);
    CHECK_THROWS_AS(enumerate_cover(1, 0, 2.0), InputError);
    CHECK_THROWS_AS(enumerate_cover(1, 1, 0.0), InputError);
}

TEST_CASE("sparsify_theta deterministic cases") {
    Rng rng = make_rng(5, 0);
    const double L = 2.0;
    for (int k = 0; k < 50; ++k) {
        const auto draw = sparsify_theta(vec({L, 0.0, 0.0}), 4, L, rng);
        CHECK((draw.theta - vec({L, 0.0, 0.0})).norm() < 1e-12);
        const auto zero = sparsify_theta(vec({0.0, 0.0}), 3, L, rng);
        CHECK(zero.theta.norm() == 0.0);
    }
    CHECK_THROWS_AS(sparsify_theta(vec({1.5, 1.0}), 2, L, rng), InputError);
}

TEST_CASE("sparsify_theta two-outcome distribution") {
    Rng rng = make_rng(9, 0);
    const double L = 2.0;
    int first = 0;
    const int draws = 20000;
    for (int k = 0; k < draws; ++k) {
        const auto s = sparsify_theta(vec({L / 2, L / 2}), 1, L, rng);
        const bool e1 = std::abs(s.theta(0) - L) < 1e-12 && s.theta(1) == 0.0;
        const bool e2 = std::abs(s.theta(1) - L) < 1e-12 && s.theta(0) == 0.0;
        REQUIRE((e1 || e2));
        first += e1 ? 1 : 0;
    }
    const double p = static_cast<double>(first) / draws;
    CHECK(std::abs(p - 0.5) < 4.0 * std::sqrt(0.25 / draws));
}

TEST_CASE("sparsify_theta outputs lie in the cover") {
    const int d = 3;
    const int m = 3;
    const double L = 2.0;
    const SparseCover c = enumerate_cover(d, m, L);
    Rng rng = make_rng(21, 0);
    for (int k = 0; k < 300; ++k) {
        Vector theta(d);
        for (int j = 0; j < d; ++j) theta(j) = 2.0 * uniform01(rng) - 1.0;
        theta *= (L * uniform01(rng)) / theta.lpNorm<1>();
        const auto s = sparsify_theta(theta, m, L, rng);
        CHECK(c.contains(s.theta));
        CHECK(c.contains(s.element));
        CHECK((s.element.dense(d) - s.theta).norm() < 1e-12);
    }
}

TEST_CASE("sparsify distortion bound by Monte Carlo") {
    const int d = 20;
    const int n = 200;
    const int m = 4;
    const double L = 2.0;
    Rng rng = make_rng(33, 0);
    Matrix X(n, d);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = 2.0 * uniform01(rng) - 1.0;
    const double xinf2 = std::pow(X.cwiseAbs().maxCoeff(), 2);
    int failures = 0;
    for (int t = 0; t < 50; ++t) {
        Vector theta(d);
        for (int j = 0; j < d; ++j) theta(j) = 2.0 * uniform01(rng) - 1.0;
        theta *= (L * (0.2 + 0.8 * uniform01(rng))) / theta.lpNorm<1>();
        const Vector base = X * theta;
        std::vector<double> dist;
        for (int k = 0; k < 2000; ++k) {
            const auto s = sparsify_theta(theta, m, L, rng);
            dist.push_back((base - X * s.theta).squaredNorm() / n);
        }
        const auto ms = oracle::mean_se(dist);
        if (ms.mean > L * theta.lpNorm<1>() * xinf2 / m + 3.0 * ms.se) ++failures;
    }
    CHECK(failures == 0);
}

TEST_CASE("cover_count_library examples") {
    CHECK(cover_count_library(2, 1) == 2);
    CHECK(cover_count_library(3, 2) == 6);
    CHECK(oracle::count_compositions(3, 2) == 6);
    CHECK(cover_count_library(4, 3) == 20);
    CHECK(oracle::count_compositions(4, 3) == 20);
    CHECK(std::log(20.0) <= cover_count_log_bound(4.0, 3.0));
    CHECK(cover_count_log_bound(4.0, 3.0) == doctest::Approx(3.0 * std::log(std::exp(1.0) * (4.0 / 3.0 + 1.0))));
    for (unsigned M = 1; M <= 8; ++M) {
        for (unsigned m = 1; m <= 8; ++m) {
            const auto c = cover_count_library(M, m);
            CHECK(c == oracle::count_compositions(M, m));
            CHECK(std::log(static_cast<double>(c)) <= cover_count_log_bound(M, m) + 1e-12);
        }
    }
    CHECK_THROWS_AS(cover_count_library(0, 1), InputError);
}

TEST_CASE("binomial agrees with Pascal and reports overflow") {
    for (unsigned n = 0; n <= 60; ++n)
        for (unsigned k = 0; k <= n; ++k) CHECK(binomial(n, k) == oracle::pascal(n, k));
    CHECK_THROWS_AS(binomial(200, 100), SizeError);
    CHECK(log_binomial(10, 3) == doctest::Approx(std::log(120.0)));
}
