#include "ridge/targets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "ridge/errors.hpp"

namespace ridge {

SpectralTarget::SpectralTarget(std::vector<SpectralAtom> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) throw InputError("SpectralTarget: at least one atom is required");
    dim_ = atoms_.front().omega.size();
    if (dim_ < 1) throw InputError("SpectralTarget: frequency vectors must be nonempty");
    for (const auto& a : atoms_) {
        if (a.omega.size() != dim_) throw InputError("SpectralTarget: atoms have mismatched dimensions");
        if (!(a.amplitude > 0.0)) throw InputError("SpectralTarget: amplitudes must be positive");
    }
}

double SpectralTarget::operator()(const Eigen::Ref<const Vector>& x) const {
    if (x.size() != dim_) throw InputError("SpectralTarget: point has the wrong dimension");
    double f = 0.0;
    for (const auto& a : atoms_) f += a.amplitude * std::cos(a.omega.dot(x) + a.phase);
    return f;
}

Vector SpectralTarget::evaluate(const Matrix& X) const {
    if (X.cols() != dim_) throw InputError("SpectralTarget: design has the wrong number of columns");
    Vector f = Vector::Zero(X.rows());
    for (const auto& a : atoms_) {
        Vector u = X * a.omega;
        f.array() += a.amplitude * (u.array() + a.phase).cos();
    }
    return f;
}

double SpectralTarget::value_at_zero() const {
    double f = 0.0;
    for (const auto& a : atoms_) f += a.amplitude * std::cos(a.phase);
    return f;
}

Vector SpectralTarget::gradient_at_zero() const {
    Vector g = Vector::Zero(dim_);
    for (const auto& a : atoms_) g -= a.amplitude * std::sin(a.phase) * a.omega;
    return g;
}

double SpectralTarget::sup_bound() const {
    double s = 0.0;
    for (const auto& a : atoms_) s += a.amplitude;
    return s;
}

double spectral_norm(const SpectralTarget& target, double s) {
    double v = 0.0;
    for (const auto& a : target.atoms()) v += a.amplitude * std::pow(a.omega.lpNorm<1>(), s);
    return v;
}

double eval_target(const SpectralTarget& target, const Eigen::Ref<const Vector>& x) { return target(x); }

// ---------------------------------------------------------------------------

double integrate_abs_cos(double c, double b) {
    if (c == 0.0) return std::abs(std::cos(b));
    constexpr double pi = std::numbers::pi;
    const double lo_phase = std::min(b, b + c);
    const double hi_phase = std::max(b, b + c);

    std::vector<double> cuts{0.0};
    // kinks where c t + b = pi/2 + k pi
    for (double k = std::ceil((lo_phase - pi / 2) / pi); pi / 2 + k * pi < hi_phase; k += 1.0) {
        const double u = pi / 2 + k * pi;
        if (u <= lo_phase) continue;
        cuts.push_back((u - b) / c);
    }
    cuts.push_back(1.0);
    std::sort(cuts.begin(), cuts.end());

    using Rule = boost::math::quadrature::gauss<double, 20>;
    auto f = [c, b](double t) { return std::abs(std::cos(c * t + b)); };
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] > cuts[i]) total += Rule::integrate(f, cuts[i], cuts[i + 1]);
    }
    return total;
}

RampSamplingPlan ramp_sampling_plan(const SpectralTarget& target) {
    RampSamplingPlan plan;
    for (std::size_t j = 0; j < target.atoms().size(); ++j) {
        const auto& a = target.atoms()[j];
        const double c = a.omega.lpNorm<1>();
        if (c == 0.0) continue;
        for (int z : {1, -1}) {
            const double mass = a.amplitude * c * c * integrate_abs_cos(z * c, a.phase);
            if (mass > 0.0) {
                plan.branches.push_back({j, z, mass});
                plan.normalizer += mass;
            }
        }
    }
    return plan;
}

RidgeModel spectral_affine_part(const SpectralTarget& target) {
    RidgeModel model(target.dim());
    model.set_affine(target.value_at_zero(), target.gradient_at_zero());
    return model;
}

RidgeUnit draw_ramp_unit(const SpectralTarget& target, const RampSamplingPlan& plan, Rng& rng) {
    if (plan.branches.empty()) throw InputError("draw_ramp_unit: target has no nonzero frequencies");
    std::vector<double> cumulative;
    cumulative.reserve(plan.branches.size());
    double acc = 0.0;
    for (const auto& br : plan.branches) cumulative.push_back(acc += br.mass);
    std::size_t pick = draw_categorical(cumulative, acc, rng);
    pick = std::min(pick, plan.branches.size() - 1);
    const auto& br = plan.branches[pick];
    const auto& atom = target.atoms()[br.atom];
    const double c = atom.omega.lpNorm<1>();
    const double zc = br.z * c;

    // t on [0, 1] with density proportional to |cos(z c t + b)|, by rejection from uniform.
    double t = 0.0;
    for (;;) {
        t = uniform01(rng);
        if (uniform01(rng) < std::abs(std::cos(zc * t + atom.phase))) break;
    }

    const Eigen::Index d = target.dim();
    RidgeUnit unit;
    unit.activation = Activation::ramp;
    unit.theta.resize(d + 1);
    unit.theta.head(d) = (br.z / c) * atom.omega;
    unit.theta[d] = -t;
    unit.sign = std::cos(zc * t + atom.phase) > 0.0 ? -1 : 1;
    return unit;
}

RidgeModel sample_ramp_model(const SpectralTarget& target, int m, Rng& rng) {
    if (m < 1) throw InputError("sample_ramp_model: m must be >= 1");
    RidgeModel model = spectral_affine_part(target);
    const RampSamplingPlan plan = ramp_sampling_plan(target);
    if (plan.branches.empty()) return model;
    const double w = plan.normalizer / m;
    for (int k = 0; k < m; ++k) model.add_term(w, draw_ramp_unit(target, plan, rng));
    return model;
}

// ---------------------------------------------------------------------------

std::string_view to_string(DesignLaw law) {
    return law == DesignLaw::uniform ? "uniform" : "bernoulli";
}

std::string_view to_string(NoiseKind kind) {
    switch (kind) {
    case NoiseKind::zero: return "zero";
    case NoiseKind::gaussian: return "gaussian";
    case NoiseKind::laplace: return "laplace";
    }
    return "unknown";
}

DesignLaw parse_design_law(std::string_view name) {
    if (name == "uniform") return DesignLaw::uniform;
    if (name == "bernoulli") return DesignLaw::bernoulli;
    throw InputError("unknown design law '" + std::string(name) + "'");
}

NoiseKind parse_noise_kind(std::string_view name) {
    if (name == "zero") return NoiseKind::zero;
    if (name == "gaussian") return NoiseKind::gaussian;
    if (name == "laplace") return NoiseKind::laplace;
    throw InputError("unknown noise regime '" + std::string(name) + "'");
}

NoiseModel NoiseModel::gaussian(double sigma) {
    if (!(sigma >= 0.0)) throw InputError("NoiseModel: sigma must be nonnegative");
    return {NoiseKind::gaussian, sigma};
}

NoiseModel NoiseModel::laplace(double scale) {
    if (!(scale >= 0.0)) throw InputError("NoiseModel: Laplace scale must be nonnegative");
    return {NoiseKind::laplace, scale};
}

double NoiseModel::variance() const {
    switch (kind) {
    case NoiseKind::zero: return 0.0;
    case NoiseKind::gaussian: return scale * scale;
    case NoiseKind::laplace: return 2.0 * scale * scale;
    }
    return 0.0;
}

double NoiseModel::bernstein_eta() const { return kind == NoiseKind::zero ? 0.0 : scale; }

double standard_normal(Rng& rng) {
    // Box-Muller on (0, 1] x [0, 1); portable across standard libraries.
    const double u1 = 1.0 - uniform01(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double NoiseModel::sample(Rng& rng) const {
    switch (kind) {
    case NoiseKind::zero: return 0.0;
    case NoiseKind::gaussian: return scale * standard_normal(rng);
    case NoiseKind::laplace: {
        const double u = uniform01(rng) - 0.5;
        const double mag = -scale * std::log1p(-2.0 * std::abs(u));
        return u < 0.0 ? -mag : mag;
    }
    }
    return 0.0;
}

Matrix sample_design(Eigen::Index n, Eigen::Index d, DesignLaw law, Rng& rng) {
    Matrix X(n, d);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            const double u = uniform01(rng);
            X(i, j) = law == DesignLaw::uniform ? 2.0 * u - 1.0 : (u < 0.5 ? -1.0 : 1.0);
        }
    }
    return X;
}

TargetFn as_target_fn(const SpectralTarget& target) {
    return [target](const Matrix& X) { return target.evaluate(X); };
}

TargetFn as_target_fn(const RidgeModel& model) {
    return [model](const Matrix& X) { return model.evaluate(X); };
}

namespace {

void fill_sample(const TargetFn& target, Eigen::Index n, Eigen::Index d, const NoiseModel& noise, DesignLaw law,
                 Rng& rng, Matrix& X, Vector& Y, Vector& eps) {
    X = sample_design(n, d, law, rng);
    eps.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) eps[i] = noise.sample(rng);
    Y = target(X);
    if (Y.size() != n) throw InputError("gen_dataset: target returned the wrong number of values");
    Y += eps;
}

} // namespace

Dataset gen_dataset(const TargetFn& target, Eigen::Index n, Eigen::Index d, NoiseModel noise, std::uint64_t seed,
                    DesignLaw design) {
    if (n <= 0) throw InputError("gen_dataset: n must be positive");
    if (d <= 0) throw InputError("gen_dataset: d must be positive");
    if (!(noise.scale >= 0.0)) throw InputError("gen_dataset: noise scale must be nonnegative");
    Dataset data;
    data.noise_model = noise;
    data.design = design;
    data.seed = seed;
    Rng train = make_rng(seed, 0);
    fill_sample(target, n, d, noise, design, train, data.X, data.Y, data.noise);
    Rng test = make_rng(seed, 1);
    fill_sample(target, n, d, noise, design, test, data.X_test, data.Y_test, data.noise_test);
    return data;
}

// ---------------------------------------------------------------------------

void write_dataset_csv(std::ostream& out, const Matrix& X, const Vector& Y) {
    if (X.rows() != Y.size()) throw InputError("write_dataset_csv: X and Y have different lengths");
    for (Eigen::Index j = 0; j < X.cols(); ++j) out << 'x' << (j + 1) << ',';
    out << "y\n";
    char buf[40];
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", X(i, j));
            out << buf << ',';
        }
        std::snprintf(buf, sizeof buf, "%.17g", Y[i]);
        out << buf << '\n';
    }
}

void read_dataset_csv(std::istream& in, Matrix& X, Vector& Y) {
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) header.push_back(cell);
        break;
    }
    if (header.size() < 2 || header.back() != "y") throw InputError("read_dataset_csv: expected header x1,...,xd,y");
    const auto d = static_cast<Eigen::Index>(header.size() - 1);
    for (Eigen::Index j = 0; j < d; ++j) {
        if (header[static_cast<std::size_t>(j)] != "x" + std::to_string(j + 1)) {
            throw InputError("read_dataset_csv: unexpected column '" + header[static_cast<std::size_t>(j)] + "'");
        }
    }
    std::vector<double> values;
    Eigen::Index rows = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string cell;
        Eigen::Index cols = 0;
        while (std::getline(ss, cell, ',')) {
            try {
                values.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw InputError("read_dataset_csv: bad number '" + cell + "' on data row " + std::to_string(rows + 1));
            }
            ++cols;
        }
        if (cols != d + 1) throw InputError("read_dataset_csv: row " + std::to_string(rows + 1) + " has wrong width");
        ++rows;
    }
    X.resize(rows, d);
    Y.resize(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) X(i, j) = values[static_cast<std::size_t>(i * (d + 1) + j)];
        Y[i] = values[static_cast<std::size_t>(i * (d + 1) + d)];
    }
}

} // namespace ridge
