#include "ridge/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "ridge/errors.hpp"
#include "ridge/parallel.hpp"

namespace ridge {

// ---------------------------------------------------------------------------
// Penalty functions

PenaltyFn PenaltyFn::zero() { return PenaltyFn{}; }

PenaltyFn PenaltyFn::linear(double lambda) {
    if (!(lambda >= 0.0)) throw InputError("PenaltyFn: lambda must be nonnegative");
    PenaltyFn w;
    w.kind_ = Kind::linear;
    w.lambda_ = lambda;
    return w;
}

PenaltyFn PenaltyFn::power43(double lambda) {
    if (!(lambda >= 0.0)) throw InputError("PenaltyFn: lambda must be nonnegative");
    PenaltyFn w;
    w.kind_ = Kind::power43;
    w.lambda_ = lambda;
    return w;
}

PenaltyFn PenaltyFn::tabulated(std::vector<double> v, std::vector<double> w) {
    if (v.size() != w.size() || v.size() < 2) throw InputError("PenaltyFn: need at least two (v, w) samples");
    if (v.front() != 0.0) throw InputError("PenaltyFn: tabulated samples must start at v = 0");
    double prev_slope = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (!(w[k] >= 0.0)) throw InputError("PenaltyFn: tabulated values must be nonnegative");
        if (k == 0) continue;
        if (!(v[k] > v[k - 1])) throw InputError("PenaltyFn: tabulated v must be strictly increasing");
        const double slope = (w[k] - w[k - 1]) / (v[k] - v[k - 1]);
        if (slope < prev_slope - 1e-12 * std::max(1.0, std::abs(prev_slope))) {
            throw InputError("PenaltyFn: tabulated samples are not convex");
        }
        prev_slope = slope;
    }
    if (prev_slope < 0.0) throw InputError("PenaltyFn: extension past the last knot would turn negative");
    PenaltyFn out;
    out.kind_ = Kind::tabulated;
    out.knots_v_ = std::move(v);
    out.knots_w_ = std::move(w);
    return out;
}

PenaltyFn PenaltyFn::custom(std::function<double(double)> fn) {
    if (!fn) throw InputError("PenaltyFn: empty callable");
    PenaltyFn w;
    w.kind_ = Kind::custom;
    w.fn_ = std::move(fn);
    return w;
}

double PenaltyFn::operator()(double v) const {
    switch (kind_) {
    case Kind::zero: return 0.0;
    case Kind::linear: return lambda_ * v;
    case Kind::power43: return lambda_ * std::pow(std::max(0.0, v), 4.0 / 3.0);
    case Kind::tabulated: {
        const auto& xv = knots_v_;
        const auto& yv = knots_w_;
        std::size_t k = static_cast<std::size_t>(std::upper_bound(xv.begin(), xv.end(), v) - xv.begin());
        k = std::clamp<std::size_t>(k, 1, xv.size() - 1);
        const double t = (v - xv[k - 1]) / (xv[k] - xv[k - 1]);
        return yv[k - 1] + t * (yv[k] - yv[k - 1]);
    }
    case Kind::custom: return fn_(v);
    }
    return 0.0;
}

bool check_convex(const PenaltyFn& w, double v_max, int triples, std::uint64_t seed) {
    Rng rng = make_rng(seed, 0x77);
    for (int k = 0; k < triples; ++k) {
        const double a = v_max * uniform01(rng);
        const double b = v_max * uniform01(rng);
        const double wa = w(a);
        const double wb = w(b);
        const double mid = w(0.5 * (a + b));
        if (wa < 0.0 || wb < 0.0 || mid < 0.0) return false;
        const double avg = 0.5 * (wa + wb);
        if (mid > avg + 1e-12 * std::max(1.0, std::abs(avg))) return false;
    }
    return true;
}

std::string_view to_string(InnerStrategy s) {
    switch (s) {
    case InnerStrategy::cover_exhaustive: return "cover";
    case InnerStrategy::projected_gradient: return "pgd";
    case InnerStrategy::frank_wolfe: return "frank-wolfe";
    }
    return "unknown";
}

InnerStrategy parse_inner_strategy(std::string_view name) {
    if (name == "cover" || name == "cover-exhaustive") return InnerStrategy::cover_exhaustive;
    if (name == "pgd" || name == "projected-gradient") return InnerStrategy::projected_gradient;
    if (name == "frank-wolfe" || name == "fw") return InnerStrategy::frank_wolfe;
    throw InputError("unknown inner strategy '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Inner maximization

namespace {

Matrix lift(const Matrix& X) {
    Matrix Xt(X.rows(), X.cols() + 1);
    Xt.leftCols(X.cols()) = X;
    Xt.col(X.cols()).setOnes();
    return Xt;
}

// Euclidean projection onto the l1 ball of the given radius (sort-based).
void project_l1(Eigen::Ref<Vector> x, double radius) {
    if (x.lpNorm<1>() <= radius) return;
    std::vector<double> a(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) a[static_cast<std::size_t>(i)] = std::abs(x[i]);
    std::sort(a.begin(), a.end(), std::greater<>());
    double cum = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        cum += a[k];
        const double t = (cum - radius) / static_cast<double>(k + 1);
        if (a[k] > t) theta = t;
    }
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double m = std::max(0.0, std::abs(x[i]) - theta);
        x[i] = x[i] < 0.0 ? -m : m;
    }
}

struct Candidate {
    double value = 0.0; // signed correlation
    std::size_t index = std::numeric_limits<std::size_t>::max();
};

bool better(const Candidate& a, const Candidate& b) {
    const double fa = std::abs(a.value);
    const double fb = std::abs(b.value);
    if (fa != fb) return fa > fb;
    return a.index < b.index;
}

double correlation(const Vector& R, const Vector& u, Activation act) {
    double s = 0.0;
    switch (act) {
    case Activation::ramp:
        for (Eigen::Index i = 0; i < u.size(); ++i) s += u[i] > 0.0 ? R[i] * u[i] : 0.0;
        break;
    case Activation::sine: s = R.dot(u.array().sin().matrix()); break;
    case Activation::tanh_sigmoid: s = R.dot(u.array().tanh().matrix()); break;
    }
    return s / static_cast<double>(u.size());
}

// Best cover element by |correlation|, over distinct vectors only.
Candidate search_cover(const Vector& R, const Matrix& Xt, const SparseCover& cover, const std::vector<std::size_t>& ids,
                       Activation act) {
    const std::size_t chunks = std::min<std::size_t>(ids.size(), 64);
    std::vector<Candidate> best(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        Vector u(Xt.rows());
        const std::size_t lo = ids.size() * c / chunks;
        const std::size_t hi = ids.size() * (c + 1) / chunks;
        Candidate b;
        for (std::size_t k = lo; k < hi; ++k) {
            const auto& e = cover.elements[ids[k]];
            u.setZero();
            for (const auto& a : e.atoms) u += (e.scale * (a.plus - a.minus)) * Xt.col(a.coord);
            Candidate cand{correlation(R, u, act), ids[k]};
            if (better(cand, b)) b = cand;
        }
        best[c] = b;
    });
    Candidate out;
    for (const auto& b : best) {
        if (better(b, out)) out = b;
    }
    return out;
}

Vector random_cover_theta(Eigen::Index D, int m_grid, double radius, Rng& rng) {
    Vector th = Vector::Zero(D);
    const auto symbols = static_cast<std::uint64_t>(2 * D + 1);
    for (int k = 0; k < m_grid; ++k) {
        const auto s = static_cast<Eigen::Index>(rng() % symbols);
        if (s == 2 * D) continue;
        th[s / 2] += (s % 2 == 0 ? 1.0 : -1.0) * radius / m_grid;
    }
    return th;
}

// Batched ascent from several starting points; columns of Theta are the iterates.
struct Ascent {
    Vector theta;
    double value = 0.0;
};

Ascent batched_ascent(const Vector& R, const Matrix& Xt, Matrix Theta, const GreedyConfig& cfg, bool frank_wolfe) {
    const Eigen::Index n = Xt.rows();
    const Eigen::Index D = Xt.cols();
    const Eigen::Index K = Theta.cols();
    const double inv_n = 1.0 / static_cast<double>(n);
    double L = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) L += std::abs(R[i]) * Xt.row(i).squaredNorm();
    L *= inv_n;
    const double step = L > 0.0 ? 1.0 / L : 0.0;

    Ascent best;
    best.theta = Vector::Zero(D);
    Matrix U(n, K);
    Matrix S(n, K);
    for (int it = 0; it <= cfg.steps; ++it) {
        U.noalias() = Xt * Theta;
        for (Eigen::Index k = 0; k < K; ++k) {
            for (Eigen::Index i = 0; i < n; ++i) {
                const double u = U(i, k);
                U(i, k) = activate(cfg.activation, u);
                S(i, k) = R[i] * activation_slope(cfg.activation, u);
            }
        }
        const Eigen::RowVectorXd values = (R.transpose() * U) * inv_n;
        for (Eigen::Index k = 0; k < K; ++k) {
            if (std::abs(values[k]) > std::abs(best.value)) {
                best.value = values[k];
                best.theta = Theta.col(k);
            }
        }
        if (it == cfg.steps) break;
        const Matrix G = (Xt.transpose() * S) * inv_n;
        const double gamma = 2.0 / (it + 2.0);
        for (Eigen::Index k = 0; k < K; ++k) {
            const double s = values[k] >= 0.0 ? 1.0 : -1.0;
            if (frank_wolfe) {
                Eigen::Index j = 0;
                const double gj = (s * G.col(k)).maxCoeff(&j);
                const double gm = (-s * G.col(k)).maxCoeff();
                Vector vertex = Vector::Zero(D);
                if (gj >= gm) {
                    vertex[j] = cfg.Lambda;
                } else {
                    (-s * G.col(k)).maxCoeff(&j);
                    vertex[j] = -cfg.Lambda;
                }
                Theta.col(k) = (1.0 - gamma) * Theta.col(k) + gamma * vertex;
            } else {
                Theta.col(k) += step * s * G.col(k);
                project_l1(Theta.col(k), cfg.Lambda);
            }
        }
    }
    return best;
}

} // namespace

InnerResult inner_maximize(const Vector& R, const Matrix& X, const GreedyConfig& config, Rng& rng) {
    const SparseCover* none = nullptr;
    std::unique_ptr<SparseCover> cover;
    if (config.strategy == InnerStrategy::cover_exhaustive || config.c_report) {
        try {
            cover = std::make_unique<SparseCover>(enumerate_cover(static_cast<int>(X.cols() + 1), config.cover_m,
                                                                  config.Lambda, config.cover_cap));
        } catch (const SizeError&) {
            if (config.strategy == InnerStrategy::cover_exhaustive) throw;
        }
    }
    return inner_maximize(R, X, config, rng, cover ? cover.get() : none);
}

InnerResult inner_maximize(const Vector& R, const Matrix& X, const GreedyConfig& config, Rng& rng,
                           const SparseCover* cover) {
    if (R.size() != X.rows()) throw InputError("inner_maximize: residual and design lengths differ");
    if (!(config.Lambda > 0.0)) throw InputError("inner_maximize: Lambda must be positive");
    const Eigen::Index D = X.cols() + 1;
    if (cover && cover->dim != D) throw InputError("inner_maximize: cover has the wrong dimension");
    if (config.strategy == InnerStrategy::cover_exhaustive && !cover) {
        throw InputError("inner_maximize: exhaustive search needs an enumerable cover");
    }

    InnerResult out;
    out.unit.activation = config.activation;
    out.unit.theta = Vector::Zero(D);
    out.unit.sign = 1;
    if (R.size() == 0 || R.isZero(0.0)) return out;

    const Matrix Xt = lift(X);
    Candidate cov;
    if (cover) {
        const auto ids = cover->distinct_indices();
        cov = search_cover(R, Xt, *cover, ids, config.activation);
        out.cover_value = std::abs(cov.value);
        out.candidates += ids.size();
    }

    if (config.strategy == InnerStrategy::cover_exhaustive) {
        if (cov.value != 0.0) {
            out.unit.theta = cover->elements[cov.index].dense(D);
            out.unit.sign = cov.value > 0.0 ? 1 : -1;
            out.value = std::abs(cov.value);
        }
    } else {
        const int K = std::max(1, config.restarts);
        Matrix Theta(D, K);
        for (int k = 0; k < K; ++k) {
            if (k == 0 && cover && cov.value != 0.0) {
                Theta.col(0) = cover->elements[cov.index].dense(D);
            } else {
                Theta.col(k) = random_cover_theta(D, config.cover_m, config.Lambda, rng);
            }
        }
        const Ascent a = batched_ascent(R, Xt, std::move(Theta), config,
                                        config.strategy == InnerStrategy::frank_wolfe);
        out.candidates += static_cast<std::size_t>(K) * static_cast<std::size_t>(config.steps + 1);
        if (a.value != 0.0) {
            out.unit.theta = a.theta;
            out.unit.sign = a.value > 0.0 ? 1 : -1;
            out.value = std::abs(a.value);
        }
        if (!cover) out.cover_value = 0.0;
    }
    out.c_ratio = out.value > 0.0 && cover ? out.cover_value / out.value : 1.0;
    return out;
}

// ---------------------------------------------------------------------------
// Line search

namespace {

constexpr int golden_iters = 60;
const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;

template <class F>
double golden_min(F&& f, double lo, double hi) {
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c);
    double fd = f(d);
    for (int k = 0; k < golden_iters; ++k) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? c : d;
}

double direct_objective(const Vector& f, double v_prev, const Vector& h, const Vector& Y, const PenaltyFn& w,
                        double alpha, double beta) {
    return mean_square(Y - (1.0 - alpha) * f - beta * h) + w((1.0 - alpha) * v_prev + beta);
}

} // namespace

LineSearchResult line_search(const Vector& f, double v_prev, const Vector& h, const Vector& Y, const PenaltyFn& w) {
    if (f.size() != Y.size() || h.size() != Y.size()) throw InputError("line_search: vectors have different lengths");
    const double n = std::max<double>(1.0, static_cast<double>(Y.size()));
    const double YY = Y.squaredNorm() / n;
    const double Yf = Y.dot(f) / n;
    const double ff = f.squaredNorm() / n;
    const double Yh = Y.dot(h) / n;
    const double fh = f.dot(h) / n;
    const double hh = h.squaredNorm() / n;

    auto F = [&](double a, double b) {
        const double s = 1.0 - a;
        const double rr = YY - 2.0 * s * Yf + s * s * ff;
        const double rh = Yh - s * fh;
        return rr - 2.0 * b * rh + b * b * hh + w(s * v_prev + b);
    };
    auto best_beta = [&](double a) {
        if (!(hh > 0.0)) return 0.0;
        const double s = 1.0 - a;
        const double rh = Yh - s * fh;
        if (w.is_linear()) return std::max(0.0, (rh - 0.5 * w.lambda()) / hh);
        const double bmax = (std::abs(rh) / std::sqrt(hh) + std::sqrt(std::max(0.0, F(a, 0.0)))) / std::sqrt(hh);
        const double b = golden_min([&](double x) { return F(a, x); }, 0.0, bmax);
        return F(a, b) <= F(a, 0.0) ? b : 0.0;
    };
    auto profile = [&](double a) { return F(a, best_beta(a)); };

    LineSearchResult out;
    const bool no_prev = v_prev == 0.0 && f.isZero(0.0);
    double alpha = 1.0;
    if (!no_prev) {
        alpha = golden_min(profile, 0.0, 1.0);
        if (profile(0.0) <= profile(alpha)) alpha = 0.0;
        if (profile(1.0) < profile(alpha)) alpha = 1.0;
    }
    const double beta = best_beta(alpha);
    const double obj = direct_objective(f, v_prev, h, Y, w, alpha, beta);
    const double stay = direct_objective(f, v_prev, h, Y, w, 0.0, 0.0);
    // Gains at the rounding level of the quadratic form are not progress.
    if (obj < stay - 1e-12 * stay) {
        out = {alpha, beta, obj};
    } else {
        out = {no_prev ? 1.0 : 0.0, 0.0, stay};
    }
    return out;
}

LineSearchResult line_search(const RidgeModel& f_prev, const RidgeUnit& h_new, const Vector& Y, const Matrix& X,
                             const PenaltyFn& w) {
    return line_search(f_prev.evaluate(X), f_prev.v(), eval_unit_rows(h_new, X), Y, w);
}

// ---------------------------------------------------------------------------
// LPGP

RidgeModel GreedyPath::model(int m) const {
    if (m <= 0) return RidgeModel(std::max<Eigen::Index>(1, input_dim));
    if (m > static_cast<int>(steps.size())) throw InputError("GreedyPath: m exceeds the path length");
    return steps[static_cast<std::size_t>(m - 1)].model;
}

double GreedyPath::max_c(int m) const {
    double c = 1.0;
    for (int k = 0; k < m && k < static_cast<int>(steps.size()); ++k) c = std::max(c, steps[static_cast<std::size_t>(k)].c_ratio);
    return c;
}

GreedyPath fit_lpgp(const Matrix& X, const Vector& Y, const GreedyConfig& config) {
    if (X.rows() == 0) throw InputError("fit_lpgp: empty dataset");
    if (X.rows() != Y.size()) throw InputError("fit_lpgp: X and Y have different lengths");
    if (config.m_max < 0) throw InputError("fit_lpgp: m_max must be >= 0");
    if (config.cover_m < 1) throw InputError("fit_lpgp: cover sparsity must be >= 1");

    GreedyPath path;
    path.input_dim = X.cols();
    if (config.m_max == 0) return path;

    std::unique_ptr<SparseCover> cover;
    if (config.strategy == InnerStrategy::cover_exhaustive || config.c_report) {
        try {
            cover = std::make_unique<SparseCover>(enumerate_cover(static_cast<int>(X.cols() + 1), config.cover_m,
                                                                  config.Lambda, config.cover_cap));
        } catch (const SizeError&) {
            if (config.strategy == InnerStrategy::cover_exhaustive) throw;
        }
    }
    const bool deterministic = config.strategy == InnerStrategy::cover_exhaustive;

    RidgeModel model(X.cols());
    Vector fvals = Vector::Zero(X.rows());
    for (int m = 1; m <= config.m_max; ++m) {
        Rng rng = make_rng(config.seed, static_cast<std::uint64_t>(m));
        const Vector R = Y - fvals;
        const InnerResult inner = inner_maximize(R, X, config, rng, cover.get());
        const Vector hv = eval_unit_rows(inner.unit, X);
        const LineSearchResult ls = line_search(fvals, model.v(), hv, Y, config.w);

        const bool moved = ls.beta != 0.0 || (ls.alpha != 0.0 && !model.empty());
        if (ls.alpha == 1.0) {
            model.clear_terms();
        } else if (ls.alpha != 0.0) {
            model.scale_terms(1.0 - ls.alpha);
        }
        if (ls.beta > 0.0) model.add_term(ls.beta, inner.unit);
        if (moved) fvals = (1.0 - ls.alpha) * fvals + ls.beta * hv;

        GreedyStep step;
        step.m = m;
        step.model = model;
        step.v = model.v();
        step.alpha = ls.alpha;
        step.beta = ls.beta;
        step.inner_value = inner.value;
        step.cover_value = inner.cover_value;
        step.c_ratio = inner.c_ratio;
        step.train_mse = mean_square(Y - fvals);
        step.penalty = config.w(step.v);
        step.objective = step.train_mse + step.penalty;
        path.steps.push_back(std::move(step));

        // A deterministic search that made no progress returns the same unit forever.
        if (!moved && deterministic) {
            for (int k = m + 1; k <= config.m_max; ++k) {
                GreedyStep copy = path.steps.back();
                copy.m = k;
                path.steps.push_back(std::move(copy));
            }
            break;
        }
    }
    return path;
}

void write_path_csv(std::ostream& out, const GreedyPath& path) {
    out << "m,v_m,alpha,beta,inner_value,train_mse,penalty,objective\n";
    char buf[512];
    for (const auto& s : path.steps) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.m, s.v, s.alpha, s.beta,
                      s.inner_value, s.train_mse, s.penalty, s.objective);
        out << buf;
    }
}

GreedyBound greedy_bound_rhs(double v_f, double norm_fstar, double norm_f, double c, int m, double w_cvf,
                             double approx_err2, double unit_norm_bound) {
    if (m < 1) throw InputError("greedy_bound_rhs: m must be >= 1");
    if (!(c >= 1.0)) throw InputError("greedy_bound_rhs: c must be >= 1");
    const double v = unit_norm_bound * v_f;
    GreedyBound g;
    g.b_f = c * c * v * v + 2.0 * v * norm_fstar * (c + 1.0) - norm_f * norm_f;
    g.rhs = approx_err2 + w_cvf + 4.0 * g.b_f / m;
    const double root = std::sqrt(std::max(0.0, approx_err2)) + 2.0 * (c + 1.0) * v / std::sqrt(static_cast<double>(m));
    g.refined_rhs = root * root + w_cvf;
    return g;
}

} // namespace ridge
