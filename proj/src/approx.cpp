#include "ridge/approx.hpp"

#include <cmath>
#include <map>
#include <string>

#include "ridge/errors.hpp"

namespace ridge {

namespace {

void check_v(const RidgeModel& f, double v, const char* who) {
    if (!(v >= f.v() * (1.0 - 1e-12))) {
        throw InputError(std::string(who) + ": v = " + std::to_string(v) + " is below v_f = " + std::to_string(f.v()));
    }
}

RidgeModel affine_copy(const RidgeModel& f) {
    RidgeModel out(f.input_dim());
    out.set_affine(f.intercept(), f.slope());
    return out;
}

std::vector<double> cumulative_weights(const RidgeModel& f, const std::vector<std::size_t>& idx) {
    std::vector<double> c;
    c.reserve(idx.size());
    double acc = 0.0;
    for (std::size_t k : idx) c.push_back(acc += f.terms()[k].weight);
    return c;
}

// Lexicographic order on (theta, sign) for deterministic tie-breaks.
bool unit_less(const RidgeUnit& a, const RidgeUnit& b) {
    const Eigen::Index n = std::min(a.theta.size(), b.theta.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        if (a.theta[i] != b.theta[i]) return a.theta[i] < b.theta[i];
    }
    if (a.theta.size() != b.theta.size()) return a.theta.size() < b.theta.size();
    return a.sign < b.sign;
}

} // namespace

RidgeModel maurey_sample(const RidgeModel& f, int m, double v, Rng& rng) {
    if (m < 1) throw InputError("maurey_sample: m must be >= 1");
    check_v(f, v, "maurey_sample");
    RidgeModel out = affine_copy(f);
    if (f.empty() || v == 0.0) return out;

    std::vector<std::size_t> all(f.size());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    const auto cumulative = cumulative_weights(f, all);

    std::map<std::size_t, int> counts;
    for (int k = 0; k < m; ++k) {
        const std::size_t j = draw_categorical(cumulative, v, rng);
        if (j < f.size()) ++counts[j];
    }
    for (const auto& [j, c] : counts) out.add_term(v * c / m, f.terms()[j].unit);
    return out;
}

UnitPartition farthest_point_partition(const RidgeModel& f, const Matrix& X, int M1) {
    if (M1 < 1) throw InputError("farthest_point_partition: M1 must be >= 1");
    UnitPartition p;
    const std::size_t K = f.size();
    if (K == 0) return p;
    const Matrix U = f.unit_features(X);
    const double inv_n = X.rows() > 0 ? 1.0 / static_cast<double>(X.rows()) : 0.0;
    auto dist2 = [&](std::size_t a, std::size_t b) {
        return (U.col(static_cast<Eigen::Index>(a)) - U.col(static_cast<Eigen::Index>(b))).squaredNorm() * inv_n;
    };

    std::vector<double> nearest(K, std::numeric_limits<double>::infinity());
    p.cell.assign(K, 0);
    std::size_t next = 0;
    while (true) {
        const int c = p.cells();
        p.center.push_back(next);
        for (std::size_t k = 0; k < K; ++k) {
            const double d = dist2(k, next);
            if (d < nearest[k]) {
                nearest[k] = d;
                p.cell[k] = c;
            }
        }
        if (p.cells() >= M1) break;
        std::size_t far = 0;
        for (std::size_t k = 1; k < K; ++k) {
            if (nearest[k] > nearest[far]) far = k;
        }
        if (nearest[far] <= 0.0) break;
        next = far;
    }
    double worst = 0.0;
    for (double d : nearest) worst = std::max(worst, d);
    p.eps = std::sqrt(worst);
    return p;
}

std::vector<int> stratified_allocation(const RidgeModel& f, const UnitPartition& partition, int m0, double v) {
    if (m0 < 1) throw InputError("stratified_maurey: m0 must be >= 1");
    check_v(f, v, "stratified_maurey");
    if (partition.cell.size() != f.size()) throw InputError("stratified_maurey: partition does not cover every term");
    std::vector<double> mass(static_cast<std::size_t>(partition.cells()), 0.0);
    for (std::size_t k = 0; k < f.size(); ++k) {
        const int c = partition.cell[k];
        if (c < 0 || c >= partition.cells()) throw InputError("stratified_maurey: term assigned to an unknown cell");
        mass[static_cast<std::size_t>(c)] += f.terms()[k].weight;
    }
    std::vector<int> N(mass.size(), 0);
    if (v == 0.0) return N;
    for (std::size_t j = 0; j < mass.size(); ++j) {
        if (mass[j] > 0.0) N[j] = static_cast<int>(std::ceil(mass[j] * m0 / v));
    }
    return N;
}

RidgeModel stratified_maurey(const RidgeModel& f, const UnitPartition& partition, int m0, double v, Rng& rng) {
    const std::vector<int> N = stratified_allocation(f, partition, m0, v);
    RidgeModel out = affine_copy(f);
    for (std::size_t j = 0; j < N.size(); ++j) {
        if (N[j] == 0) continue;
        std::vector<std::size_t> members;
        for (std::size_t k = 0; k < f.size(); ++k) {
            if (partition.cell[k] == static_cast<int>(j)) members.push_back(k);
        }
        const auto cumulative = cumulative_weights(f, members);
        const double vj = cumulative.back();
        std::map<std::size_t, int> counts;
        for (int k = 0; k < N[j]; ++k) {
            std::size_t pick = draw_categorical(cumulative, vj, rng);
            pick = std::min(pick, members.size() - 1);
            ++counts[members[pick]];
        }
        for (const auto& [term, c] : counts) out.add_term(vj * c / N[j], f.terms()[term].unit);
    }
    return out;
}

QuantizeResult quantize_to_net(const RidgeModel& f_m, const std::vector<RidgeUnit>& net, const Matrix& X) {
    QuantizeResult r;
    r.model = affine_copy(f_m);
    if (f_m.empty()) return r;
    if (net.empty()) throw InputError("quantize_to_net: net is empty");

    RidgeModel net_model(f_m.input_dim());
    for (const auto& u : net) net_model.add_term(1.0, u);
    const Matrix Unet = net_model.unit_features(X);
    const Matrix U = f_m.unit_features(X);
    const double inv_n = X.rows() > 0 ? 1.0 / static_cast<double>(X.rows()) : 0.0;

    Vector shift = Vector::Zero(X.rows());
    double worst = 0.0;
    for (std::size_t k = 0; k < f_m.size(); ++k) {
        const auto col = U.col(static_cast<Eigen::Index>(k));
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < net.size(); ++j) {
            const double d = (col - Unet.col(static_cast<Eigen::Index>(j))).squaredNorm() * inv_n;
            if (d < best_d || (d == best_d && unit_less(net[j], net[best]))) {
                best = j;
                best_d = d;
            }
        }
        r.assignment.push_back(best);
        worst = std::max(worst, best_d);
        const double w = f_m.terms()[k].weight;
        r.model.add_term(w, net[best]);
        shift += w * (col - Unet.col(static_cast<Eigen::Index>(best)));
    }
    r.eps = std::sqrt(worst);
    r.shift_l1 = shift.cwiseAbs().sum() * inv_n;
    return r;
}

Matrix stack_designs(const Matrix& X, const Matrix& Xp) {
    if (X.cols() != Xp.cols()) throw InputError("stack_designs: column counts differ");
    Matrix S(X.rows() + Xp.rows(), X.cols());
    S.topRows(X.rows()) = X;
    S.bottomRows(Xp.rows()) = Xp;
    return S;
}

double sampling_distortion(const RidgeModel& f, const RidgeModel& f_m, const Vector& f0_values, const Matrix& X) {
    return mean_square(f_m.evaluate(X) - f0_values) - mean_square(f.evaluate(X) - f0_values);
}

} // namespace ridge
