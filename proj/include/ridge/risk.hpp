#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ridge/greedy.hpp"
#include "ridge/penalty.hpp"
#include "ridge/targets.hpp"

namespace ridge {

struct LossReport {
    double D_n = 0.0;       ///< (1/n) sum (f - f*)^2 on the training design
    double D_n_test = 0.0;  ///< same on the independent copy
    double P_n = 0.0;       ///< (1/n) sum [(Y - f)^2 - (Y - f*)^2]
    double P_n_test = 0.0;
    double train_mse = 0.0; ///< (1/n) sum (Y - f)^2
    double test_mse = 0.0;  ///< (1/n) sum (T f - f*)^2 on the independent copy, T truncation at B_n
    int m_hat = 0;
    double v_hat = 0.0;
    double pen_per_n = 0.0;
    bool pen_valid = true;
};

/// Losses of model against target on data. Truncation at B_n (B_n <= 0 disables it).
LossReport losses(const RidgeModel& model, const TargetFn& target, const Dataset& data, double B_n);

/// The part of the per-sample penalty that depends on v, as a convex function for the greedy line
/// search (linear, v^(4/3), or their sum for the mixed regime).
PenaltyFn greedy_penalty(const PenaltyConfig& config, double n, double d);

/// Sum of `terms` ramp units on distinct nonzero cover elements (lifted dimension d + 1, sparsity
/// cover_m, radius Lambda), random signs, weights uniform in [0.5, 1.5]. The affine part is zero.
RidgeModel random_cover_model(Eigen::Index d, int terms, int cover_m, double Lambda, Rng& rng);

/// {0, 1, 2, 4, ..., m_max}, always ending with m_max.
std::vector<int> geometric_grid(int m_max);

struct Selection {
    RidgeModel model;                ///< f_{m_hat}, untruncated
    double B_n = 0.0;                ///< truncation level applied on evaluation
    int m_hat = 0;
    double v_hat = 0.0;
    double T_n = 0.0;
    PenaltyValue penalty;            ///< at m_hat
    std::vector<int> m_grid;
    std::vector<double> objective;   ///< train MSE + pen/n for each grid entry
    GreedyPath path;
};

/// Runs LPGP to max(m_grid) and picks the grid size minimizing train MSE + pen_n(f_m)/n,
/// smallest m on ties.
Selection fit_and_select(const Dataset& data, const GreedyConfig& greedy, const PenaltyConfig& penalty,
                         const std::vector<int>& m_grid);

Vector truncated_predict(const Selection& s, const Matrix& X);

// ---------------------------------------------------------------------------
// Concentration checks

struct CountableClassSpec {
    std::string name;
    std::vector<TargetFn> functions;
    std::vector<double> L;
    double K = 1.0; ///< sup |g| over the class

    /// Throws InputError unless sum exp(-L) <= 1 + 1e-12 and sizes agree.
    void validate() const;
    double kraft_sum() const;
};

/// The classes certified by the acceptance suite for input dimension d.
std::vector<CountableClassSpec> shipped_class_specs(Eigen::Index d);

struct McEstimate {
    double mean = 0.0;
    double se = 0.0;
    int trials = 0;

    bool within(double k_se = 3.0) const { return mean <= k_se * se; }
};

/// E sup_g { D'_n(g) - D_n(g) - (gamma/n) L(g) - s^2(g)/(2 gamma) } by Monte Carlo.
McEstimate mc_symmetrization_check(const CountableClassSpec& spec, double gamma, Eigen::Index n, Eigen::Index d,
                                   int trials, DesignLaw law, std::uint64_t seed);

/// E sup_g { (1/n) sum e_i g(X_i) - (gamma/n) L(g) - (1/(A n)) sum g^2(X_i) },
/// gamma = A sigma^2/2 + K eta.
McEstimate mc_noise_check(const CountableClassSpec& spec, double A, Eigen::Index n, Eigen::Index d, int trials,
                          const NoiseModel& noise, DesignLaw law, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Risk curves

struct RiskCurveConfig {
    TargetFn target;
    Eigen::Index d = 1;
    std::vector<Eigen::Index> n_grid;
    int trials = 1;
    NoiseModel noise;
    DesignLaw design = DesignLaw::uniform;
    TailClass tail = TailClass::zero;
    GreedyConfig greedy;
    PenaltyConfig penalty;  ///< B_n is recomputed per n from B, nu and tail
    int m_max = 16;
    double oracle_v = 0.0;  ///< variation of the oracle representation of f*
    double oracle_err = 0.0;///< ||f_oracle - f*||^2, 0 when f* is itself a finite model
    std::uint64_t seed = 0;
};

struct RiskCurveRow {
    Eigen::Index n = 0;
    Eigen::Index d = 0;
    int trial = 0;
    Regime regime = Regime::highdim;
    int m_hat = 0;
    double v_hat = 0.0;
    double test_mse = 0.0;
    double pen_per_n = 0.0;
    double resolvability_proxy = 0.0; ///< oracle_err + pen(f_oracle)/n
    double tau = 0.0;
};

/// Data for (n, trial) come from seed derive_seed(seed, n * 2^20 + trial).
std::vector<RiskCurveRow> risk_curve(const RiskCurveConfig& config);

void write_risk_curve_csv(std::ostream& out, const std::vector<RiskCurveRow>& rows);

} // namespace ridge
