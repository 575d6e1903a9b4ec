#include "ridge/model.hpp"

#include <string>

#include "ridge/errors.hpp"

namespace ridge {

RidgeModel::RidgeModel(Eigen::Index input_dim) : input_dim_(input_dim), slope_(Vector::Zero(input_dim)) {
    if (input_dim < 1) throw InputError("RidgeModel: input dimension must be >= 1");
}

void RidgeModel::check_dim(const RidgeUnit& unit) const {
    if (unit.theta.size() != input_dim_ + 1) {
        throw InputError("RidgeModel: unit has theta of length " + std::to_string(unit.theta.size()) +
                         ", expected " + std::to_string(input_dim_ + 1));
    }
}

void RidgeModel::add_term(double weight, RidgeUnit unit) {
    if (!(weight >= 0.0)) throw InputError("RidgeModel: coefficients must be nonnegative");
    check_dim(unit);
    if (unit.sign != 1 && unit.sign != -1) throw InputError("RidgeModel: unit sign must be +1 or -1");
    terms_.push_back(Term{weight, std::move(unit)});
    recompute_v();
}

void RidgeModel::scale_terms(double factor) {
    if (!(factor >= 0.0)) throw InputError("RidgeModel: scale factor must be nonnegative");
    for (auto& t : terms_) t.weight *= factor;
    recompute_v();
}

void RidgeModel::set_affine(double intercept, Vector slope) {
    if (slope.size() != input_dim_) throw InputError("RidgeModel: slope has the wrong dimension");
    intercept_ = intercept;
    slope_ = std::move(slope);
}

void RidgeModel::clear_terms() {
    terms_.clear();
    v_ = 0.0;
}

void RidgeModel::recompute_v() {
    double s = 0.0;
    for (const auto& t : terms_) s += t.weight;
    v_ = s;
}

double RidgeModel::operator()(const Eigen::Ref<const Vector>& x) const {
    if (x.size() != input_dim_) throw InputError("RidgeModel: point has the wrong dimension");
    double f = intercept_ + slope_.dot(x);
    for (const auto& t : terms_) f += t.weight * eval_unit(t.unit, x);
    return f;
}

void apply_activations(Matrix& U, const std::vector<Term>& terms) {
    for (Eigen::Index k = 0; k < U.cols(); ++k) {
        const auto& unit = terms[static_cast<std::size_t>(k)].unit;
        const double s = unit.sign;
        auto col = U.col(k);
        switch (unit.activation) {
        case Activation::ramp: col = s * col.cwiseMax(0.0); break;
        case Activation::sine: col = s * col.array().sin().matrix(); break;
        case Activation::tanh_sigmoid: col = s * col.array().tanh().matrix(); break;
        }
    }
}

Matrix RidgeModel::unit_features(const Matrix& X) const {
    if (X.cols() != input_dim_) throw InputError("RidgeModel: design has the wrong number of columns");
    const auto K = static_cast<Eigen::Index>(terms_.size());
    Matrix theta(input_dim_, K);
    Eigen::RowVectorXd bias(K);
    for (Eigen::Index k = 0; k < K; ++k) {
        const auto& th = terms_[static_cast<std::size_t>(k)].unit.theta;
        theta.col(k) = th.head(input_dim_);
        bias[k] = th[input_dim_];
    }
    Matrix U = X * theta;
    U.rowwise() += bias;
    apply_activations(U, terms_);
    return U;
}

Vector RidgeModel::weights() const {
    Vector w(static_cast<Eigen::Index>(terms_.size()));
    for (std::size_t k = 0; k < terms_.size(); ++k) w[static_cast<Eigen::Index>(k)] = terms_[k].weight;
    return w;
}

Vector RidgeModel::ridge_part(const Matrix& X) const {
    if (terms_.empty()) {
        if (X.cols() != input_dim_) throw InputError("RidgeModel: design has the wrong number of columns");
        return Vector::Zero(X.rows());
    }
    return unit_features(X) * weights();
}

Vector RidgeModel::evaluate(const Matrix& X) const {
    Vector f = ridge_part(X);
    f += X * slope_;
    f.array() += intercept_;
    return f;
}

double RidgeModel::sup_bound() const {
    double b = std::abs(intercept_) + slope_.lpNorm<1>();
    for (const auto& t : terms_) {
        const double radius = t.unit.theta.lpNorm<1>();
        b += t.weight * (t.unit.activation == Activation::ramp ? radius : std::min(1.0, radius));
    }
    return b;
}

} // namespace ridge
