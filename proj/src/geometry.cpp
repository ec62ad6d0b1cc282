#include "sumrange/geometry.hpp"

#include <algorithm>
#include <numeric>

#include "sumrange/errors.hpp"
#include "sumrange/linalg.hpp"

namespace sumrange {

namespace {

// Modified Gram-Schmidt with a second orthogonalization pass.
Vec orthogonalize(const Vec& v, const std::vector<Vec>& basis) {
    Vec r = v;
    for (int pass = 0; pass < 2; ++pass)
        for (const Vec& b : basis) r -= b * r.dot(b);
    return r;
}

// Columns (p_i; 1): the affine system used for hull membership and
// dependence probing.
linalg::Mat affine_matrix(std::span<const Vec> points) {
    const int d = points[0].dim();
    linalg::Mat A(d + 1, static_cast<int>(points.size()));
    for (int c = 0; c < A.cols; ++c) {
        for (int r = 0; r < d; ++r) A.at(r, c) = points[c][r];
        A.at(d, c) = 1.0;
    }
    return A;
}

std::vector<double> affine_rhs(const Vec& x) {
    std::vector<double> b(x.dim() + 1, 0.0);
    for (int i = 0; i < x.dim(); ++i) b[i] = x[i];
    b[x.dim()] = 1.0;
    return b;
}

// Nearest point of conv(points) to the origin, Frank-Wolfe with exact
// line search.  Gives the separating functional of the Hahn-Banach step.
Vec min_norm_point(std::span<const Vec> points, int steps) {
    int best = 0;
    for (size_t i = 1; i < points.size(); ++i)
        if (points[i].norm_sq() < points[best].norm_sq()) best = static_cast<int>(i);
    Vec x = points[best];
    for (int k = 0; k < steps; ++k) {
        int s = 0;
        double sv = x.dot(points[0]);
        for (size_t i = 1; i < points.size(); ++i) {
            double v = x.dot(points[i]);
            if (v < sv) {
                sv = v;
                s = static_cast<int>(i);
            }
        }
        Vec dir = points[s] - x;
        double den = dir.norm_sq();
        if (den == 0.0) break;
        double gamma = std::clamp(-x.dot(dir) / den, 0.0, 1.0);
        if (gamma == 0.0) break;
        x += dir * gamma;
    }
    return x;
}

}  // namespace

Subspace Subspace::full(int ambient_dim) {
    Subspace s(ambient_dim);
    for (int i = 0; i < ambient_dim; ++i) s.basis_.push_back(Vec::unit(ambient_dim, i));
    return s;
}

Subspace Subspace::span_of(int ambient_dim, std::span<const Vec> vectors, double tol) {
    Subspace s(ambient_dim);
    for (const Vec& v : vectors) {
        Vec r = orthogonalize(v, s.basis_);
        if (r.norm() > std::max(tol, 1e-12)) s.basis_.push_back(r.normalized());
    }
    return s;
}

Vec Subspace::project(const Vec& v) const {
    Vec p(ambient_dim_);
    for (const Vec& b : basis_) p += b * v.dot(b);
    return p;
}

Vec Subspace::to_local(const Vec& v) const {
    Vec w(dim());
    for (int i = 0; i < dim(); ++i) w[i] = v.dot(basis_[i]);
    return w;
}

Vec Subspace::from_local(const Vec& w) const {
    Vec v(ambient_dim_);
    for (int i = 0; i < dim(); ++i) v += basis_[i] * w[i];
    return v;
}

Subspace Subspace::orthonormal_complement() const {
    Subspace out(ambient_dim_);
    std::vector<Vec> acc = basis_;
    for (int i = 0; i < ambient_dim_; ++i) {
        Vec r = orthogonalize(Vec::unit(ambient_dim_, i), acc);
        if (r.norm() > 1e-8) {
            Vec b = r.normalized();
            acc.push_back(b);
            out.basis_.push_back(b);
        }
    }
    return out;
}

Subspace orthonormal_complement(const Subspace& sub) { return sub.orthonormal_complement(); }

Vec project(const Vec& v, const Subspace& sub) { return sub.project(v); }

HullQuery zero_in_convex_hull(std::span<const Vec> points, double tol) {
    HullQuery out;
    if (points.empty()) return out;
    const int d = points[0].dim();
    const int n = static_cast<int>(points.size());
    const int max_k = std::min(n, d + 1);

    double scale = 0.0;
    for (const Vec& p : points) scale = std::max(scale, p.norm());
    const double resid_tol = 1e-9 * (1.0 + scale);

    std::vector<int> idx;
    // enumerate subsets of each size in lexicographic order
    for (int k = 1; k <= max_k && !out.witness; ++k) {
        idx.assign(k, 0);
        std::iota(idx.begin(), idx.end(), 0);
        while (true) {
            std::vector<Vec> sub;
            sub.reserve(k);
            for (int i : idx) sub.push_back(points[i]);
            auto probe = linalg::kernel_vector(affine_matrix(sub), tol);
            if (!probe.dependent) {
                auto ls = linalg::lstsq(affine_matrix(sub), affine_rhs(Vec(d)));
                bool positive = true;
                for (double t : ls.x) positive = positive && t >= tol;
                if (positive && ls.residual <= resid_tol) {
                    ConvexWitness w;
                    w.points = std::move(sub);
                    w.weights = ls.x;
                    double s = std::accumulate(w.weights.begin(), w.weights.end(), 0.0);
                    for (double& t : w.weights) t /= s;
                    out.witness = std::move(w);
                    break;
                }
            }
            // next combination
            int i = k - 1;
            while (i >= 0 && idx[i] == n - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    if (!out.witness) {
        Vec nearest = min_norm_point(points, 200);
        if (nearest.norm() > 0) out.separating_direction = nearest.normalized();
    }
    return out;
}

ConvexWitness caratheodory_reduce(const ConvexWitness& witness, double tol) {
    std::vector<Vec> pts = witness.points;
    std::vector<double> w = witness.weights;

    auto strip_and_renorm = [&] {
        std::vector<Vec> p2;
        std::vector<double> w2;
        for (size_t i = 0; i < pts.size(); ++i)
            if (w[i] > tol) {
                p2.push_back(pts[i]);
                w2.push_back(w[i]);
            }
        pts = std::move(p2);
        w = std::move(w2);
        double s = std::accumulate(w.begin(), w.end(), 0.0);
        for (double& t : w) t /= s;
    };

    strip_and_renorm();
    while (pts.size() > 1) {
        auto probe = linalg::kernel_vector(affine_matrix(pts), tol);
        if (probe.ambiguous(tol))
            throw DegenerateWitness("rank decision ambiguous at tolerance " +
                                    std::to_string(tol));
        if (!probe.dependent) break;  // affinely independent support reached
        const std::vector<double>& lam = probe.kernel;

        // ratio test in both directions; drop-set = weights hitting zero
        auto ratio = [&](int sign) {
            double alpha = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < w.size(); ++i) {
                double l = sign * lam[i];
                if (l > tol) alpha = std::min(alpha, w[i] / l);
            }
            int first_drop = -1;
            for (size_t i = 0; i < w.size(); ++i) {
                double l = sign * lam[i];
                if (l > tol && w[i] / l <= alpha * (1.0 + 1e-12)) {
                    first_drop = static_cast<int>(i);
                    break;
                }
            }
            return std::pair<double, int>(alpha, first_drop);
        };
        auto [ap, ip] = ratio(+1);
        auto [am, im] = ratio(-1);
        // keep earlier-listed points: take the direction whose first
        // dropped point has the larger index
        int sign = (ip >= im) ? +1 : -1;
        if (ip < 0) sign = -1;
        if (im < 0) sign = +1;
        double alpha = (sign > 0) ? ap : am;
        if (!std::isfinite(alpha))
            throw DegenerateWitness("no weight hits zero along the dependence");
        for (size_t i = 0; i < w.size(); ++i) w[i] -= alpha * sign * lam[i];
        strip_and_renorm();
    }
    ConvexWitness out{std::move(pts), std::move(w)};
    return out;
}

std::vector<double> barycentric_coordinates(std::span<const Vec> d0, const Vec& x,
                                            double tol) {
    auto ls = linalg::lstsq(affine_matrix(d0), affine_rhs(x));
    double scale = 1.0 + x.norm();
    if (ls.residual > 1e-7 * scale)
        throw OutsideHull("point not in the affine hull (residual " +
                          std::to_string(ls.residual) + ")");
    for (double& t : ls.x) {
        if (t < -tol) throw OutsideHull("negative barycentric weight " + std::to_string(t));
        if (t < 0) t = 0.0;
    }
    return ls.x;
}

double simplex_inradius(std::span<const Vec> d0) {
    const int n = static_cast<int>(d0.size());
    double best = std::numeric_limits<double>::infinity();
    for (int drop = 0; drop < n; ++drop) {
        std::vector<Vec> facet;
        for (int i = 0; i < n; ++i)
            if (i != drop) facet.push_back(d0[i]);
        double dist;
        if (facet.size() == 1) {
            dist = facet[0].norm();
        } else {
            // distance from 0 to the affine hull: min ||sum s_i q_i||,
            // sum s_i = 1, solved through the KKT system on the Gram matrix
            const int k = static_cast<int>(facet.size());
            linalg::Mat K(k + 1, k + 1);
            std::vector<double> rhs(k + 1, 0.0);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) K.at(i, j) = facet[i].dot(facet[j]);
            for (int i = 0; i < k; ++i) {
                K.at(i, k) = 1.0;
                K.at(k, i) = 1.0;
            }
            rhs[k] = 1.0;
            auto sol = linalg::solve(K, rhs, 1e-14);
            if (!sol) continue;  // degenerate facet, pre excludes this
            Vec pt(facet[0].dim());
            for (int i = 0; i < k; ++i) pt += facet[i] * (*sol)[i];
            dist = pt.norm();
        }
        best = std::min(best, dist);
    }
    return best;
}

}  // namespace sumrange
