#pragma once

#include <string_view>

#include "ridge/model.hpp"

namespace ridge {

enum class Regime { highdim, nonoise, moderate, mixed };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view name);

struct PenaltyConfig {
    double B = 1.0;       ///< sup-norm bound on f*
    double B_n = 1.0;     ///< truncation level, >= B
    double sigma2 = 0.0;  ///< noise variance bound
    double eta = 0.0;     ///< Bernstein parameter
    double nu = 0.0;      ///< tail scale used to pick B_n
    double Lambda = 2.0;  ///< l1 radius of internal parameters
    double delta1 = 1.0;
    double delta2 = 1.0;
    Regime regime = Regime::highdim;
    double mixed_constant = 1.0; ///< C in the mixed penalty
    /// Multiplier on every penalty. The theory constants are conservative enough that an unscaled
    /// penalty selects the zero model at moderate n, so experiments may shrink it.
    double scale = 1.0;

    /// Throws InputError when an invariant fails (B_n < B, nonpositive deltas, negative variances).
    void validate() const;
};

struct GammaTau {
    double gamma = 0.0;
    double tau = 0.0;
};

/// tau = (1+d1)(1+d2); gamma_n = (2 tau)^-1 (1+d1/2)(1+2/d1)(B+B_n)^2 + 2(1+1/d2) sigma^2 + 2(B+B_n) eta
GammaTau gamma_tau(const PenaltyConfig& config);

enum class TailClass { sub_exponential, sub_gaussian, zero };

std::string_view to_string(TailClass tail);
TailClass parse_tail_class(std::string_view name);

/// sub-exponential: sqrt2 (B + nu log n); sub-Gaussian: sqrt2 (B + sqrt(nu log n)); zero: B.
double select_Bn(double B, double nu, double n, TailClass tail);

/// min(B_n, |f|) sgn f
inline double truncate(double value, double B_n) {
    if (value > B_n) return B_n;
    if (value < -B_n) return -B_n;
    return value;
}

Vector truncate(const Vector& values, double B_n);
double truncate_model_eval(const RidgeModel& model, const Eigen::Ref<const Vector>& x, double B_n);
Vector truncate_model_rows(const RidgeModel& model, const Matrix& X, double B_n);

/// T_n = 2 sum (Y_i^2 - B_n^2) 1{|Y_i| > B_n}
double tail_tn(const Eigen::Ref<const Vector>& Y, double B_n);

/// Penalty divided by n. main is the leading v_f-dependent term; valid is false when the
/// regime's side conditions fail (only the moderate-dimension penalty has any).
struct PenaltyValue {
    double total = 0.0;
    double main = 0.0;
    bool valid = true;
};

/// 16 v (gamma B_n^2 Lambda^2 log(d+1)/n)^(1/4) + 8 (same)^(1/2) + T_n/n
PenaltyValue pen_highdim(double v_f, double n, double d, double Lambda, double gamma, double B_n, double T_n);

/// 16 v^(4/3) r^(1/3) + 4 (v^(4/3) + 1) r^(2/3), r = gamma Lambda^2 log(d+1)/n
PenaltyValue pen_nonoise(double v_f, double n, double d, double Lambda, double gamma);

/// r = d gamma log(n/d + 1)/n, e1 = 1/2 + 1/(2(d+3)), e3 = 1/2 + 3/(2(d+3)):
/// 60 v Lambda r^e1 + Lambda^-2 r^e1 + r^e3 + r + T_n/n.
/// Valid when eps1 = 3 Lambda r^(1/(2(d+3))) <= Lambda, 3 sqrt(d/n) eps1 <= Lambda and d <= n/(e-1).
PenaltyValue pen_moderate(double v_f, double n, double d, double Lambda, double gamma, double T_n);

/// Exponent of r on the leading moderate-dimension term.
inline double moderate_main_exponent(double d) { return 0.5 + 1.0 / (2.0 * (d + 3.0)); }

/// C [ q^(1/3) + sqrt(sigma) q^(1/4) ], q = v^4 Lambda^2 gamma log(d+1)/n
PenaltyValue pen_mixed(double v_f, double n, double d, double Lambda, double gamma, double sigma, double C);

struct Tuning {
    long long m0 = 1;
    double eps = 0.0;
};

/// eps2 = (gamma Lambda^2 log(d+1)/(n B_n^2))^(1/4); m0 = ceil((v^2 n eps2^2 / (2 gamma Lambda^2 log(d+1)))^(1/2)), at least 1.
Tuning tuning_highdim(double n, double d, double Lambda, double gamma, double B_n, double v);

/// Penalty per sample for a model with variation v_f under config.regime, times config.scale.
/// T_n enters the regimes that carry it.
PenaltyValue penalty_per_n(const PenaltyConfig& config, double v_f, double n, double d, double T_n);

/// Multipliers in front of the resolvability index: (tau + 1) for the rough bound and
/// 2 (tau + 1) for the bound on the greedy estimator.
inline double resolvability_factor_rough(double tau) { return tau + 1.0; }
inline double resolvability_factor_greedy(double tau) { return 2.0 * (tau + 1.0); }

} // namespace ridge
