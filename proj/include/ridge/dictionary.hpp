#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ridge/rng.hpp"

namespace ridge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class Activation { ramp, sine, tanh_sigmoid };

std::string_view to_string(Activation kind);
Activation parse_activation(std::string_view name);

/// Scalar map phi. All kinds are 1-Lipschitz.
inline double activate(Activation kind, double u) {
    switch (kind) {
    case Activation::ramp: return u > 0.0 ? u : 0.0;
    case Activation::sine: return std::sin(u);
    case Activation::tanh_sigmoid: return std::tanh(u);
    }
    return 0.0;
}

/// Derivative of phi; for the ramp the subgradient 0 is used at u = 0.
inline double activation_slope(Activation kind, double u) {
    switch (kind) {
    case Activation::ramp: return u > 0.0 ? 1.0 : 0.0;
    case Activation::sine: return std::cos(u);
    case Activation::tanh_sigmoid: {
        const double t = std::tanh(u);
        return 1.0 - t * t;
    }
    }
    return 0.0;
}

/// Sup of |phi(theta . (x, 1))| over x in [-1,1]^d and ||theta||_1 <= radius.
/// Ramps are not normalized, so the bound is the radius itself (2 for the usual ramp library).
double activation_bound(Activation kind, double radius = 2.0);

/// One dictionary element h(x) = sign * phi(theta . (x, 1)).
/// theta has length d + 1; the last coordinate multiplies the constant input.
struct RidgeUnit {
    Activation activation = Activation::ramp;
    Vector theta;
    int sign = 1;

    Eigen::Index input_dim() const { return theta.size() - 1; }
};

double eval_unit(const RidgeUnit& unit, const Eigen::Ref<const Vector>& x);

/// Unit values at each row of X (n x d).
Vector eval_unit_rows(const RidgeUnit& unit, const Matrix& X);

/// theta . (x, 1) for every row of X.
Vector lifted_projection(const Matrix& X, const Eigen::Ref<const Vector>& theta);

// ---------------------------------------------------------------------------
// Sparse l1-ball cover

/// Multiplicity of +e_coord and -e_coord inside a cover multiset.
struct CoverAtom {
    int coord = 0;
    int plus = 0;
    int minus = 0;

    friend bool operator==(const CoverAtom&, const CoverAtom&) = default;
};

/// A multiset of m symbols from {+e_1, -e_1, ..., +e_d, -e_d, 0}; its vector is
/// (radius / m) * (sum of the symbols).
struct CoverElement {
    std::vector<CoverAtom> atoms; ///< sorted by coord, only coords with plus + minus > 0
    int zeros = 0;
    double scale = 0.0; ///< radius / m

    double coordinate(int j) const;
    Vector dense(Eigen::Index dim) const;
    double l1_norm() const;
    /// theta . row for any row expression indexable by coordinate.
    template <class Row>
    double dot(const Row& row) const {
        double s = 0.0;
        for (const auto& a : atoms) s += static_cast<double>(a.plus - a.minus) * row(a.coord);
        return scale * s;
    }

    friend bool operator==(const CoverElement&, const CoverElement&) = default;
};

/// Lexicographic comparison of the dense vectors; ties broken by the multiset itself.
int compare_theta(const CoverElement& a, const CoverElement& b);
int compare_theta(const CoverElement& a, const Eigen::Ref<const Vector>& theta);
bool cover_less(const CoverElement& a, const CoverElement& b);

struct SparseCover {
    int dim = 0;
    int m_grid = 0;
    double radius = 0.0;
    std::vector<CoverElement> elements; ///< every multiset once, lexicographic by vector

    std::size_t size() const { return elements.size(); }
    /// Indices of the first element of each run of equal vectors (multisets such as
    /// {+e_1, -e_1} and {0, 0} share the zero vector).
    std::vector<std::size_t> distinct_indices() const;
    bool contains(const Eigen::Ref<const Vector>& theta) const;
    bool contains(const CoverElement& element) const;
};

inline constexpr std::uint64_t default_cover_cap = 1'000'000;

/// All vectors (radius / m) * sum u_j, u_j in {+-e_1, ..., +-e_d, 0}.
/// Throws SizeError when C(2d + m, m) exceeds cap.
SparseCover enumerate_cover(int d, int m_grid, double radius, std::uint64_t cap = default_cover_cap);

struct SparsifyDraw {
    CoverElement element;
    Vector theta;
};

/// Random cover element with mean theta: m i.i.d. draws of radius * sgn(theta_j) e_j
/// with probability |theta_j| / radius, zero otherwise, averaged.
SparsifyDraw sparsify_theta(const Eigen::Ref<const Vector>& theta, int m_grid, double radius, Rng& rng);

// ---------------------------------------------------------------------------
// Counting

/// Exact C(n, k); throws SizeError when the value does not fit in 64 bits.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);
double log_binomial(double n, double k);

/// Number of equal-weight m-term combinations from a library of size M: C(M - 1 + m, m).
std::uint64_t cover_count_library(std::uint64_t library_size, std::uint64_t terms);
/// m log(e (M / m + 1)), an upper bound on log C(M - 1 + m, m).
double cover_count_log_bound(double library_size, double terms);

} // namespace ridge
