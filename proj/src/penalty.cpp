#include "ridge/penalty.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "ridge/errors.hpp"

namespace ridge {

std::string_view to_string(Regime regime) {
    switch (regime) {
    case Regime::highdim: return "highdim";
    case Regime::nonoise: return "nonoise";
    case Regime::moderate: return "moderate";
    case Regime::mixed: return "mixed";
    }
    return "unknown";
}

Regime parse_regime(std::string_view name) {
    if (name == "highdim" || name == "highdim-noise") return Regime::highdim;
    if (name == "nonoise" || name == "no-noise") return Regime::nonoise;
    if (name == "moderate") return Regime::moderate;
    if (name == "mixed") return Regime::mixed;
    throw InputError("unknown penalty regime '" + std::string(name) + "'");
}

void PenaltyConfig::validate() const {
    if (!(B >= 0.0)) throw InputError("PenaltyConfig: B must be nonnegative");
    if (!(B_n >= B)) throw InputError("PenaltyConfig: B_n must be >= B");
    if (!(B_n > 0.0)) throw InputError("PenaltyConfig: B_n must be positive");
    if (!(sigma2 >= 0.0)) throw InputError("PenaltyConfig: sigma2 must be nonnegative");
    if (!(eta >= 0.0)) throw InputError("PenaltyConfig: eta must be nonnegative");
    if (!(nu >= 0.0)) throw InputError("PenaltyConfig: nu must be nonnegative");
    if (!(Lambda > 0.0)) throw InputError("PenaltyConfig: Lambda must be positive");
    if (!(delta1 > 0.0) || !(delta2 > 0.0)) throw InputError("PenaltyConfig: delta1 and delta2 must be positive");
    if (!(mixed_constant >= 0.0)) throw InputError("PenaltyConfig: mixed constant must be nonnegative");
    if (!(scale >= 0.0)) throw InputError("PenaltyConfig: scale must be nonnegative");
}

GammaTau gamma_tau(const PenaltyConfig& c) {
    c.validate();
    const double tau = (1.0 + c.delta1) * (1.0 + c.delta2);
    const double s = c.B + c.B_n;
    const double gamma = (1.0 + c.delta1 / 2.0) * (1.0 + 2.0 / c.delta1) * s * s / (2.0 * tau) +
                         2.0 * (1.0 + 1.0 / c.delta2) * c.sigma2 + 2.0 * s * c.eta;
    return {gamma, tau};
}

std::string_view to_string(TailClass tail) {
    switch (tail) {
    case TailClass::sub_exponential: return "sub-exponential";
    case TailClass::sub_gaussian: return "sub-gaussian";
    case TailClass::zero: return "zero";
    }
    return "unknown";
}

TailClass parse_tail_class(std::string_view name) {
    if (name == "sub-exponential" || name == "subexp") return TailClass::sub_exponential;
    if (name == "sub-gaussian" || name == "subgauss") return TailClass::sub_gaussian;
    if (name == "zero") return TailClass::zero;
    throw InputError("unknown tail class '" + std::string(name) + "'");
}

double select_Bn(double B, double nu, double n, TailClass tail) {
    if (!(n >= 1.0)) throw InputError("select_Bn: n must be >= 1");
    switch (tail) {
    case TailClass::sub_exponential: return std::numbers::sqrt2 * (B + nu * std::log(n));
    case TailClass::sub_gaussian: return std::numbers::sqrt2 * (B + std::sqrt(nu * std::log(n)));
    case TailClass::zero: return B;
    }
    return B;
}

Vector truncate(const Vector& values, double B_n) { return values.cwiseMax(-B_n).cwiseMin(B_n); }

double truncate_model_eval(const RidgeModel& model, const Eigen::Ref<const Vector>& x, double B_n) {
    return truncate(model(x), B_n);
}

Vector truncate_model_rows(const RidgeModel& model, const Matrix& X, double B_n) {
    return truncate(model.evaluate(X), B_n);
}

double tail_tn(const Eigen::Ref<const Vector>& Y, double B_n) {
    double t = 0.0;
    for (Eigen::Index i = 0; i < Y.size(); ++i) {
        if (std::abs(Y[i]) > B_n) t += Y[i] * Y[i] - B_n * B_n;
    }
    return 2.0 * t;
}

namespace {

void check_nd(double n, double d, const char* who) {
    if (!(n >= 1.0)) throw InputError(std::string(who) + ": n must be >= 1");
    if (!(d >= 1.0)) throw InputError(std::string(who) + ": d must be >= 1");
}

} // namespace

PenaltyValue pen_highdim(double v_f, double n, double d, double Lambda, double gamma, double B_n, double T_n) {
    check_nd(n, d, "pen_highdim");
    const double r = gamma * B_n * B_n * Lambda * Lambda * std::log(d + 1.0) / n;
    PenaltyValue p;
    p.main = 16.0 * v_f * std::pow(r, 0.25);
    p.total = p.main + 8.0 * std::sqrt(r) + T_n / n;
    return p;
}

PenaltyValue pen_nonoise(double v_f, double n, double d, double Lambda, double gamma) {
    check_nd(n, d, "pen_nonoise");
    const double r = gamma * Lambda * Lambda * std::log(d + 1.0) / n;
    const double v43 = std::pow(v_f, 4.0 / 3.0);
    PenaltyValue p;
    p.main = 16.0 * v43 * std::cbrt(r);
    p.total = p.main + 4.0 * (v43 + 1.0) * std::pow(r, 2.0 / 3.0);
    return p;
}

PenaltyValue pen_moderate(double v_f, double n, double d, double Lambda, double gamma, double T_n) {
    check_nd(n, d, "pen_moderate");
    const double r = d * gamma * std::log(n / d + 1.0) / n;
    const double e1 = moderate_main_exponent(d);
    const double e3 = 0.5 + 3.0 / (2.0 * (d + 3.0));
    const double re1 = std::pow(r, e1);
    PenaltyValue p;
    p.main = 60.0 * v_f * Lambda * re1;
    p.total = p.main + re1 / (Lambda * Lambda) + std::pow(r, e3) + r + T_n / n;
    const double eps1 = 3.0 * Lambda * std::pow(r, 1.0 / (2.0 * (d + 3.0)));
    const double eps2 = 3.0 * std::sqrt(d / n) * eps1;
    p.valid = eps1 <= Lambda && eps2 <= Lambda && d <= n / (std::numbers::e - 1.0);
    return p;
}

PenaltyValue pen_mixed(double v_f, double n, double d, double Lambda, double gamma, double sigma, double C) {
    check_nd(n, d, "pen_mixed");
    if (!(sigma >= 0.0)) throw InputError("pen_mixed: sigma must be nonnegative");
    const double q = std::pow(v_f, 4.0) * Lambda * Lambda * gamma * std::log(d + 1.0) / n;
    PenaltyValue p;
    p.main = C * std::cbrt(q);
    p.total = p.main + C * std::sqrt(sigma) * std::pow(q, 0.25);
    return p;
}

Tuning tuning_highdim(double n, double d, double Lambda, double gamma, double B_n, double v) {
    check_nd(n, d, "tuning_highdim");
    const double L = gamma * Lambda * Lambda * std::log(d + 1.0);
    Tuning t;
    t.eps = std::pow(L / (n * B_n * B_n), 0.25);
    const double m0 = std::ceil(std::sqrt(v * v * n * t.eps * t.eps / (2.0 * L)));
    t.m0 = std::max(1LL, static_cast<long long>(m0));
    return t;
}

PenaltyValue penalty_per_n(const PenaltyConfig& config, double v_f, double n, double d, double T_n) {
    const double gamma = gamma_tau(config).gamma;
    PenaltyValue p;
    switch (config.regime) {
    case Regime::highdim: p = pen_highdim(v_f, n, d, config.Lambda, gamma, config.B_n, T_n); break;
    case Regime::nonoise: p = pen_nonoise(v_f, n, d, config.Lambda, gamma); break;
    case Regime::moderate: p = pen_moderate(v_f, n, d, config.Lambda, gamma, T_n); break;
    case Regime::mixed:
        p = pen_mixed(v_f, n, d, config.Lambda, gamma, std::sqrt(config.sigma2), config.mixed_constant);
        break;
    }
    p.total *= config.scale;
    p.main *= config.scale;
    return p;
}

} // namespace ridge
