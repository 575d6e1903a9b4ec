#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "ridge/model.hpp"
#include "ridge/parallel.hpp"

namespace ridge {

/// Equal-weight m-term sample: m i.i.d. draws of unit h with probability beta_h / v and of the
/// zero unit with probability 1 - v_f / v; result (v/m) sum h_k plus f's affine part.
/// Repeated draws of the same term are merged into one term.
RidgeModel maurey_sample(const RidgeModel& f, int m, double v, Rng& rng);

/// Units of a model grouped into cells around chosen centers.
struct UnitPartition {
    std::vector<int> cell;           ///< cell index of each term of the model
    std::vector<std::size_t> center; ///< term index acting as the net element of each cell
    double eps = 0.0;                ///< max empirical L2 distance from a term to its center

    int cells() const { return static_cast<int>(center.size()); }
};

/// Greedy farthest-point clustering of f's units into at most M1 cells, distances in empirical
/// L2 over the rows of X. The first center is term 0; ties go to the lower term index.
UnitPartition farthest_point_partition(const RidgeModel& f, const Matrix& X, int M1);

/// Proportional allocation: cell j with mass v_j gets N_j = ceil(v_j m0 / v) draws, each unit
/// of the cell picked with probability beta_h / v_j and weighted v_j / N_j.
/// Cells with v_j = 0 are skipped. At most m0 + M1 terms.
RidgeModel stratified_maurey(const RidgeModel& f, const UnitPartition& partition, int m0, double v, Rng& rng);

/// Per-cell sample sizes used by stratified_maurey.
std::vector<int> stratified_allocation(const RidgeModel& f, const UnitPartition& partition, int m0, double v);

struct QuantizeResult {
    RidgeModel model;
    std::vector<std::size_t> assignment; ///< net index chosen for each term
    double eps = 0.0;      ///< max empirical L2 distance from a term to its net element
    double shift_l1 = 0.0; ///< (1/n) sum |f_m - f~_m| over the rows of X
};

/// Replaces every unit by its nearest net element (empirical L2 over the rows of X; ties broken
/// by lexicographic theta, then sign). Weights are kept, so v is unchanged.
QuantizeResult quantize_to_net(const RidgeModel& f_m, const std::vector<RidgeUnit>& net, const Matrix& X);

/// Rows of X followed by rows of Xp.
Matrix stack_designs(const Matrix& X, const Matrix& Xp);

/// ||f_m - f0||_n^2 - ||f - f0||_n^2 on the rows of X.
double sampling_distortion(const RidgeModel& f, const RidgeModel& f_m, const Vector& f0_values, const Matrix& X);

template <class Candidate>
struct BestOf {
    Candidate best;
    double score = std::numeric_limits<double>::infinity();
    std::size_t index = 0;
};

inline constexpr int default_best_of = 32;

/// Draws k candidates make(rng_i) with rng_i = make_rng(seed, i) in parallel and keeps the one
/// minimizing score, ties to the lowest i.
template <class Make, class Score>
auto best_of(int k, std::uint64_t seed, Make make, Score score) {
    using Candidate = decltype(make(std::declval<Rng&>()));
    if (k < 1) k = 1;
    std::vector<std::optional<Candidate>> items(static_cast<std::size_t>(k));
    std::vector<double> scores(static_cast<std::size_t>(k));
    parallel_for(items.size(), [&](std::size_t i) {
        Rng rng = make_rng(seed, i);
        items[i] = make(rng);
        scores[i] = score(*items[i]);
    });
    std::size_t pick = 0;
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (scores[i] < scores[pick]) pick = i;
    }
    return BestOf<Candidate>{std::move(*items[pick]), scores[pick], pick};
}

} // namespace ridge
