#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ridge/model.hpp"
#include "ridge/rng.hpp"

namespace ridge {

/// a * cos(omega . x + b)
struct SpectralAtom {
    Vector omega;
    double amplitude = 1.0;
    double phase = 0.0;
};

/// f*(x) = sum_j a_j cos(omega_j . x + b_j): a finite-atom Fourier representation.
class SpectralTarget {
public:
    SpectralTarget() = default;
    explicit SpectralTarget(std::vector<SpectralAtom> atoms);

    Eigen::Index dim() const { return dim_; }
    const std::vector<SpectralAtom>& atoms() const { return atoms_; }

    double operator()(const Eigen::Ref<const Vector>& x) const;
    Vector evaluate(const Matrix& X) const;
    double value_at_zero() const;
    /// -sum_j a_j sin(b_j) omega_j
    Vector gradient_at_zero() const;
    /// sum_j a_j, a bound on sup |f*|.
    double sup_bound() const;

private:
    Eigen::Index dim_ = 0;
    std::vector<SpectralAtom> atoms_;
};

/// v_{f,s} = sum_j a_j ||omega_j||_1^s
double spectral_norm(const SpectralTarget& target, double s);
double eval_target(const SpectralTarget& target, const Eigen::Ref<const Vector>& x);

// ---------------------------------------------------------------------------
// Ramp-network approximation of spectral targets

/// integral_0^1 |cos(c t + b)| dt by piecewise Gauss-Legendre between the kinks.
double integrate_abs_cos(double c, double b);

/// Per-atom pieces of the sampling density over (z, t, omega).
struct RampSamplingPlan {
    struct Branch {
        std::size_t atom = 0;
        int z = 1;          ///< +1 or -1
        double mass = 0.0;  ///< a ||omega||_1^2 integral_0^1 |cos(z ||omega||_1 t + b)| dt
    };
    std::vector<Branch> branches;
    double normalizer = 0.0; ///< v, the total mass; v <= 2 v_{f,2}
};

RampSamplingPlan ramp_sampling_plan(const SpectralTarget& target);

/// Model holding only the affine part x . grad f*(0) + f*(0).
RidgeModel spectral_affine_part(const SpectralTarget& target);

/// One unit z -> s(zt, omega) (z alpha . x - t)_+ drawn from the density.
RidgeUnit draw_ramp_unit(const SpectralTarget& target, const RampSamplingPlan& plan, Rng& rng);

/// (v/m) sum_k h_k + x . grad f*(0) + f*(0) with h_k i.i.d. from the ramp sampling density.
/// A target with v_{f,2} = 0 yields the affine part alone.
RidgeModel sample_ramp_model(const SpectralTarget& target, int m, Rng& rng);

// ---------------------------------------------------------------------------
// Noise, design, datasets

enum class DesignLaw { uniform, bernoulli };
enum class NoiseKind { zero, gaussian, laplace };

std::string_view to_string(DesignLaw law);
std::string_view to_string(NoiseKind kind);
DesignLaw parse_design_law(std::string_view name);
NoiseKind parse_noise_kind(std::string_view name);

/// Gaussian(sigma = scale) or Laplace(scale), or no noise.
struct NoiseModel {
    NoiseKind kind = NoiseKind::zero;
    double scale = 0.0;

    static NoiseModel zero() { return {}; }
    static NoiseModel gaussian(double sigma);
    static NoiseModel laplace(double scale);

    double variance() const;
    /// Parameter eta of the Bernstein moment condition E|e|^k <= k!/2 eta^(k-2) Var(e).
    /// Laplace(b): eta = b (equality for every k). Gaussian(sigma): eta = sigma.
    double bernstein_eta() const;
    double sample(Rng& rng) const;
};

double standard_normal(Rng& rng);

Matrix sample_design(Eigen::Index n, Eigen::Index d, DesignLaw law, Rng& rng);

struct Dataset {
    Matrix X;
    Vector Y;
    Matrix X_test; ///< independent copy of the design
    Vector Y_test;
    Vector noise;  ///< realized noise, known for synthetic data
    Vector noise_test;
    NoiseModel noise_model;
    DesignLaw design = DesignLaw::uniform;
    std::uint64_t seed = 0;

    Eigen::Index n() const { return X.rows(); }
    Eigen::Index d() const { return X.cols(); }
    bool has_test() const { return X_test.rows() > 0; }
};

using TargetFn = std::function<Vector(const Matrix&)>;

TargetFn as_target_fn(const SpectralTarget& target);
TargetFn as_target_fn(const RidgeModel& model);

/// Training design and noise come from stream (seed, 0); the held-out copy from (seed, 1).
Dataset gen_dataset(const TargetFn& target, Eigen::Index n, Eigen::Index d, NoiseModel noise,
                    std::uint64_t seed, DesignLaw design = DesignLaw::uniform);

// ---------------------------------------------------------------------------
// CSV: header x1,...,xd,y then one row per observation, 17 significant digits.

void write_dataset_csv(std::ostream& out, const Matrix& X, const Vector& Y);
/// Lines beginning with '#' are skipped.
void read_dataset_csv(std::istream& in, Matrix& X, Vector& Y);

} // namespace ridge
