#include "ridge/dictionary.hpp"

#include <algorithm>
#include <string>

#include "ridge/errors.hpp"

namespace ridge {

std::string_view to_string(Activation kind) {
    switch (kind) {
    case Activation::ramp: return "ramp";
    case Activation::sine: return "sine";
    case Activation::tanh_sigmoid: return "tanh";
    }
    return "unknown";
}

Activation parse_activation(std::string_view name) {
    if (name == "ramp") return Activation::ramp;
    if (name == "sine") return Activation::sine;
    if (name == "tanh" || name == "tanh-sigmoid") return Activation::tanh_sigmoid;
    throw InputError("unknown activation '" + std::string(name) + "'");
}

double activation_bound(Activation kind, double radius) {
    switch (kind) {
    case Activation::ramp: return radius;
    case Activation::sine:
    case Activation::tanh_sigmoid: return 1.0;
    }
    return 1.0;
}

double eval_unit(const RidgeUnit& unit, const Eigen::Ref<const Vector>& x) {
    if (x.size() + 1 != unit.theta.size()) {
        throw InputError("eval_unit: point has dimension " + std::to_string(x.size()) +
                         " but unit expects " + std::to_string(unit.theta.size() - 1));
    }
    const Eigen::Index d = x.size();
    const double u = unit.theta.head(d).dot(x) + unit.theta[d];
    return unit.sign * activate(unit.activation, u);
}

Vector lifted_projection(const Matrix& X, const Eigen::Ref<const Vector>& theta) {
    if (X.cols() + 1 != theta.size()) {
        throw InputError("design has " + std::to_string(X.cols()) + " columns but theta has length " +
                         std::to_string(theta.size()));
    }
    Vector u = X * theta.head(X.cols());
    u.array() += theta[X.cols()];
    return u;
}

Vector eval_unit_rows(const RidgeUnit& unit, const Matrix& X) {
    Vector u = lifted_projection(X, unit.theta);
    const double s = unit.sign;
    for (Eigen::Index i = 0; i < u.size(); ++i) u[i] = s * activate(unit.activation, u[i]);
    return u;
}

// ---------------------------------------------------------------------------

double CoverElement::coordinate(int j) const {
    for (const auto& a : atoms) {
        if (a.coord == j) return scale * static_cast<double>(a.plus - a.minus);
        if (a.coord > j) break;
    }
    return 0.0;
}

Vector CoverElement::dense(Eigen::Index dim) const {
    Vector v = Vector::Zero(dim);
    for (const auto& a : atoms) v[a.coord] = scale * static_cast<double>(a.plus - a.minus);
    return v;
}

double CoverElement::l1_norm() const {
    double s = 0.0;
    for (const auto& a : atoms) s += std::abs(scale * static_cast<double>(a.plus - a.minus));
    return s;
}

namespace {

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

int compare_multiset(const CoverElement& a, const CoverElement& b) {
    if (a.zeros != b.zeros) return a.zeros < b.zeros ? -1 : 1;
    const std::size_t n = std::min(a.atoms.size(), b.atoms.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& x = a.atoms[i];
        const auto& y = b.atoms[i];
        if (x.coord != y.coord) return x.coord < y.coord ? -1 : 1;
        if (x.plus != y.plus) return x.plus < y.plus ? -1 : 1;
        if (x.minus != y.minus) return x.minus < y.minus ? -1 : 1;
    }
    if (a.atoms.size() != b.atoms.size()) return a.atoms.size() < b.atoms.size() ? -1 : 1;
    return 0;
}

} // namespace

int compare_theta(const CoverElement& a, const CoverElement& b) {
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < a.atoms.size() || j < b.atoms.size()) {
        const int ca = i < a.atoms.size() ? a.atoms[i].coord : INT32_MAX;
        const int cb = j < b.atoms.size() ? b.atoms[j].coord : INT32_MAX;
        const int c = std::min(ca, cb);
        const double va = ca == c ? a.scale * (a.atoms[i].plus - a.atoms[i].minus) : 0.0;
        const double vb = cb == c ? b.scale * (b.atoms[j].plus - b.atoms[j].minus) : 0.0;
        if (va != vb) return sign_of(va - vb);
        if (ca == c) ++i;
        if (cb == c) ++j;
    }
    return 0;
}

int compare_theta(const CoverElement& a, const Eigen::Ref<const Vector>& theta) {
    std::size_t i = 0;
    for (Eigen::Index c = 0; c < theta.size(); ++c) {
        double va = 0.0;
        if (i < a.atoms.size() && a.atoms[i].coord == c) {
            va = a.scale * (a.atoms[i].plus - a.atoms[i].minus);
            ++i;
        }
        if (va != theta[c]) return sign_of(va - theta[c]);
    }
    return 0;
}

bool cover_less(const CoverElement& a, const CoverElement& b) {
    const int c = compare_theta(a, b);
    if (c != 0) return c < 0;
    return compare_multiset(a, b) < 0;
}

std::vector<std::size_t> SparseCover::distinct_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < elements.size(); ++i) {
        if (i == 0 || compare_theta(elements[i - 1], elements[i]) != 0) out.push_back(i);
    }
    return out;
}

bool SparseCover::contains(const Eigen::Ref<const Vector>& theta) const {
    if (theta.size() != dim) return false;
    auto it = std::lower_bound(elements.begin(), elements.end(), theta,
                               [](const CoverElement& e, const Eigen::Ref<const Vector>& t) {
                                   return compare_theta(e, t) < 0;
                               });
    return it != elements.end() && compare_theta(*it, theta) == 0;
}

bool SparseCover::contains(const CoverElement& element) const {
    return std::binary_search(elements.begin(), elements.end(), element, cover_less);
}

namespace {

struct Enumerator {
    int d;
    double scale;
    std::vector<CoverAtom> stack;
    std::vector<CoverElement>* out;

    void run(int coord, int remaining) {
        if (coord == d) {
            out->push_back(CoverElement{stack, remaining, scale});
            return;
        }
        for (int p = 0; p <= remaining; ++p) {
            for (int q = 0; p + q <= remaining; ++q) {
                const bool used = p + q > 0;
                if (used) stack.push_back(CoverAtom{coord, p, q});
                run(coord + 1, remaining - p - q);
                if (used) stack.pop_back();
            }
        }
    }
};

} // namespace

SparseCover enumerate_cover(int d, int m_grid, double radius, std::uint64_t cap) {
    if (d < 1) throw InputError("enumerate_cover: dimension must be >= 1");
    if (m_grid < 1) throw InputError("enumerate_cover: sparsity must be >= 1");
    if (!(radius > 0.0)) throw InputError("enumerate_cover: radius must be positive");

    std::uint64_t count = 0;
    try {
        count = binomial(2ULL * static_cast<std::uint64_t>(d) + static_cast<std::uint64_t>(m_grid),
                         static_cast<std::uint64_t>(m_grid));
    } catch (const SizeError&) {
        count = UINT64_MAX;
    }
    if (count > cap) {
        throw SizeError("enumerate_cover: C(2d+m, m) = " +
                        (count == UINT64_MAX ? std::string("overflow") : std::to_string(count)) +
                        " exceeds the cap of " + std::to_string(cap) +
                        "; use sparsify_theta to sample cover elements instead");
    }

    SparseCover cover;
    cover.dim = d;
    cover.m_grid = m_grid;
    cover.radius = radius;
    cover.elements.reserve(static_cast<std::size_t>(count));
    Enumerator e{d, radius / m_grid, {}, &cover.elements};
    e.run(0, m_grid);
    std::sort(cover.elements.begin(), cover.elements.end(), cover_less);
    return cover;
}

SparsifyDraw sparsify_theta(const Eigen::Ref<const Vector>& theta, int m_grid, double radius, Rng& rng) {
    if (m_grid < 1) throw InputError("sparsify_theta: sparsity must be >= 1");
    if (!(radius > 0.0)) throw InputError("sparsify_theta: radius must be positive");
    const double norm = theta.lpNorm<1>();
    if (norm > radius * (1.0 + 1e-12)) {
        throw InputError("sparsify_theta: ||theta||_1 = " + std::to_string(norm) + " exceeds radius " +
                         std::to_string(radius));
    }

    const Eigen::Index dim = theta.size();
    std::vector<double> cumulative(static_cast<std::size_t>(dim));
    double acc = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
        acc += std::abs(theta[j]) / radius;
        cumulative[static_cast<std::size_t>(j)] = acc;
    }
    const double total = std::max(1.0, acc);

    std::vector<int> plus(static_cast<std::size_t>(dim), 0);
    std::vector<int> minus(static_cast<std::size_t>(dim), 0);
    int zeros = 0;
    for (int k = 0; k < m_grid; ++k) {
        const std::size_t j = draw_categorical(cumulative, total, rng);
        if (j >= static_cast<std::size_t>(dim)) {
            ++zeros;
        } else if (theta[static_cast<Eigen::Index>(j)] > 0.0) {
            ++plus[j];
        } else {
            ++minus[j];
        }
    }

    SparsifyDraw draw;
    draw.element.zeros = zeros;
    draw.element.scale = radius / m_grid;
    for (Eigen::Index j = 0; j < dim; ++j) {
        const auto js = static_cast<std::size_t>(j);
        if (plus[js] + minus[js] > 0) draw.element.atoms.push_back(CoverAtom{static_cast<int>(j), plus[js], minus[js]});
    }
    draw.theta = draw.element.dense(dim);
    return draw;
}

// ---------------------------------------------------------------------------

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // r * (n - k + i) / i stays integral at every step.
        r = r * (n - k + i) / i;
        if (r > UINT64_MAX) throw SizeError("binomial coefficient overflows 64 bits");
    }
    return static_cast<std::uint64_t>(r);
}

double log_binomial(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

std::uint64_t cover_count_library(std::uint64_t library_size, std::uint64_t terms) {
    if (library_size < 1 || terms < 1) throw InputError("cover_count_library: M and m must be >= 1");
    return binomial(library_size - 1 + terms, terms);
}

double cover_count_log_bound(double library_size, double terms) {
    return terms * std::log(std::exp(1.0) * (library_size / terms + 1.0));
}

} // namespace ridge
