#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string_view>
#include <vector>

#include "ridge/model.hpp"

namespace ridge {

/// Convex nonnegative penalty w(v) on the l1 mass of the coefficients.
class PenaltyFn {
public:
    enum class Kind { zero, linear, power43, tabulated, custom };

    PenaltyFn() = default;
    static PenaltyFn zero();
    /// lambda v
    static PenaltyFn linear(double lambda);
    /// lambda v^(4/3)
    static PenaltyFn power43(double lambda);
    /// Piecewise-linear through (v_k, w_k), v_0 = 0, extended linearly past the last knot.
    /// Throws InputError when the samples are not convex or not nonnegative.
    static PenaltyFn tabulated(std::vector<double> v, std::vector<double> w);
    static PenaltyFn custom(std::function<double(double)> fn);

    double operator()(double v) const;
    Kind kind() const { return kind_; }
    double lambda() const { return lambda_; }
    bool is_linear() const { return kind_ == Kind::zero || kind_ == Kind::linear; }

private:
    Kind kind_ = Kind::zero;
    double lambda_ = 0.0;
    std::vector<double> knots_v_;
    std::vector<double> knots_w_;
    std::function<double(double)> fn_;
};

/// Midpoint convexity w((a+b)/2) <= (w(a)+w(b))/2 (with 1e-12 relative slack) on `triples`
/// random pairs in [0, v_max], plus nonnegativity.
bool check_convex(const PenaltyFn& w, double v_max, int triples = 1000, std::uint64_t seed = 0);

enum class InnerStrategy { cover_exhaustive, projected_gradient, frank_wolfe };

std::string_view to_string(InnerStrategy s);
InnerStrategy parse_inner_strategy(std::string_view name);

struct GreedyConfig {
    double Lambda = 2.0;
    Activation activation = Activation::ramp;
    int m_max = 10;
    PenaltyFn w;
    InnerStrategy strategy = InnerStrategy::cover_exhaustive;
    int cover_m = 2;          ///< sparsity of the cover grid used by the exhaustive search and diagnostics
    std::uint64_t cover_cap = 1'000'000;
    int restarts = 32;
    int steps = 200;
    std::uint64_t seed = 0;
    bool c_report = true;     ///< compute the cover-grid value for the c diagnostic
};

struct InnerResult {
    RidgeUnit unit;           ///< maximizer with its sign
    double value = 0.0;       ///< (1/n) sum R_i h(X_i), >= 0
    double cover_value = 0.0; ///< best value over the cover grid (0 when not computed)
    double c_ratio = 1.0;     ///< cover_value / value, 1 when value = 0
    std::size_t candidates = 0;
};

/// Maximizes (1/n) sum R_i s phi(theta . (X_i, 1)) over ||theta||_1 <= Lambda and s = +-1.
InnerResult inner_maximize(const Vector& R, const Matrix& X, const GreedyConfig& config, Rng& rng);

/// Same search reusing a prebuilt cover (lifted dimension d + 1).
InnerResult inner_maximize(const Vector& R, const Matrix& X, const GreedyConfig& config, Rng& rng,
                           const SparseCover* cover);

struct LineSearchResult {
    double alpha = 0.0;
    double beta = 0.0;
    double objective = 0.0;
};

/// Minimizes ||Y - (1-a) f - b h||_n^2 + w((1-a) v_prev + b) over a in [0,1], b >= 0, given
/// f and h tabulated on the design. Never worse than (0, 0).
LineSearchResult line_search(const Vector& f_prev, double v_prev, const Vector& h, const Vector& Y, const PenaltyFn& w);

LineSearchResult line_search(const RidgeModel& f_prev, const RidgeUnit& h_new, const Vector& Y, const Matrix& X,
                             const PenaltyFn& w);

struct GreedyStep {
    int m = 0;
    RidgeModel model;
    double v = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double inner_value = 0.0;
    double cover_value = 0.0;
    double c_ratio = 1.0;
    double train_mse = 0.0;
    double penalty = 0.0;
    double objective = 0.0;
};

struct GreedyPath {
    std::vector<GreedyStep> steps; ///< steps[k] holds f_{k+1}
    Eigen::Index input_dim = 0;

    /// f_m; f_0 is the zero model.
    RidgeModel model(int m) const;
    /// Largest measured c over the first m steps (at least 1).
    double max_c(int m) const;
};

GreedyPath fit_lpgp(const Matrix& X, const Vector& Y, const GreedyConfig& config);

void write_path_csv(std::ostream& out, const GreedyPath& path);

struct GreedyBound {
    double b_f = 0.0;
    double rhs = 0.0;         ///< ||f*-f||^2 + w(c v_f) + 4 b_f / m
    double refined_rhs = 0.0; ///< (||f*-f|| + 2(c+1) v_f/sqrt(m))^2 + w(c v_f)
};

/// b_f = c^2 v^2 + 2 v ||f*|| (c+1) - ||f||^2 with v = unit_norm_bound * v_f.
/// unit_norm_bound is a bound on ||h|| over the library (1 in the normalized setting; ramps reach 2).
GreedyBound greedy_bound_rhs(double v_f, double norm_fstar, double norm_f, double c, int m, double w_cvf,
                             double approx_err2, double unit_norm_bound = 1.0);

} // namespace ridge
