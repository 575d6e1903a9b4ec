#pragma once

#include <vector>

#include "ridge/dictionary.hpp"

namespace ridge {

struct Term {
    double weight = 0.0; ///< beta_h >= 0
    RidgeUnit unit;
};

/// f(x) = sum_h beta_h h(x) + intercept + slope . x, with every beta_h >= 0.
/// v() is the l1 mass of the ridge coefficients; the affine part does not count toward it.
class RidgeModel {
public:
    RidgeModel() = default;
    explicit RidgeModel(Eigen::Index input_dim);

    Eigen::Index input_dim() const { return input_dim_; }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    double v() const { return v_; }
    double intercept() const { return intercept_; }
    const Vector& slope() const { return slope_; }

    void add_term(double weight, RidgeUnit unit);
    /// Multiplies every ridge coefficient by factor >= 0 (the affine part is untouched).
    void scale_terms(double factor);
    void set_affine(double intercept, Vector slope);
    void clear_terms();

    double operator()(const Eigen::Ref<const Vector>& x) const;
    Vector evaluate(const Matrix& X) const;
    /// Ridge part only (no affine contribution).
    Vector ridge_part(const Matrix& X) const;
    /// n x K matrix; column k holds unit k (with its sign, without its weight) on the rows of X.
    Matrix unit_features(const Matrix& X) const;
    Vector weights() const;

    /// Upper bound on sup |f| over [-1,1]^d.
    double sup_bound() const;

private:
    void recompute_v();
    void check_dim(const RidgeUnit& unit) const;

    Eigen::Index input_dim_ = 0;
    std::vector<Term> terms_;
    double intercept_ = 0.0;
    Vector slope_;
    double v_ = 0.0;
};

/// Activation applied column-wise: out(i, k) = signs[k] * phi_k(U(i, k)).
void apply_activations(Matrix& U, const std::vector<Term>& terms);

/// Empirical squared L2 norm (1/n) sum a_i^2.
inline double mean_square(const Eigen::Ref<const Vector>& a) {
    return a.size() == 0 ? 0.0 : a.squaredNorm() / static_cast<double>(a.size());
}

} // namespace ridge
