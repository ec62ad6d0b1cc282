#pragma once

#include <optional>
#include <span>
#include <vector>

#include "sumrange/vec.hpp"

namespace sumrange {

/// Global tolerance for rank and positivity decisions in the geometry
/// kernel. Overridable per call where it matters.
inline constexpr double kGeomTol = 1e-9;

/// Linear subspace of R^d held as an orthonormal basis (possibly empty).
class Subspace {
  public:
    Subspace() = default;
    explicit Subspace(int ambient_dim) : ambient_dim_(ambient_dim) {}

    static Subspace empty(int ambient_dim) { return Subspace(ambient_dim); }
    static Subspace full(int ambient_dim);
    /// Orthonormalized span of arbitrary vectors (Gram-Schmidt, vectors with
    /// residual norm below tol are dropped).
    static Subspace span_of(int ambient_dim, std::span<const Vec> vectors,
                            double tol = kGeomTol);

    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return static_cast<int>(basis_.size()); }
    const std::vector<Vec>& basis() const { return basis_; }

    Vec project(const Vec& v) const;
    /// Coefficients of project(v) in the basis (a dim()-dimensional Vec).
    Vec to_local(const Vec& v) const;
    /// Lift local coefficients back to the ambient space.
    Vec from_local(const Vec& w) const;

    Subspace orthonormal_complement() const;
    bool contains(const Vec& v, double tol) const { return (v - project(v)).norm() <= tol; }

  private:
    int ambient_dim_ = 0;
    std::vector<Vec> basis_;
};

/// Convex combination witnessing 0 in conv(points): weights > 0 summing
/// to 1 with || sum w_i p_i || ~ 0.
struct ConvexWitness {
    std::vector<Vec> points;
    std::vector<double> weights;

    Vec combination() const {
        Vec s(points.empty() ? 0 : points[0].dim());
        for (size_t i = 0; i < points.size(); ++i) s += points[i] * weights[i];
        return s;
    }
};

struct HullQuery {
    std::optional<ConvexWitness> witness;
    /// Separating direction f with <f, p> > 0 for all points; set only
    /// when no witness exists.
    std::optional<Vec> separating_direction;
};

/// Orthonormal basis of the orthogonal complement, extending sub's basis
/// to a full orthonormal basis of R^d.
Subspace orthonormal_complement(const Subspace& sub);

/// Orthogonal projection of v onto sub.
Vec project(const Vec& v, const Subspace& sub);

/// Decides 0 in conv(points) by exact Caratheodory search: enumerate
/// affinely independent subsets of size <= d+1 in increasing size. On a
/// miss, the diagnostic separator is the normalized nearest point of the
/// hull to 0 (finite Frank-Wolfe iteration).
HullQuery zero_in_convex_hull(std::span<const Vec> points, double tol = kGeomTol);

/// Shrinks a witness to an affinely independent support with strictly
/// positive weights (so 0 sits in the relative interior of the hull).
/// Throws DegenerateWitness when a rank decision at tol is ambiguous.
ConvexWitness caratheodory_reduce(const ConvexWitness& witness, double tol = kGeomTol);

/// Barycentric coordinates of x over an affinely independent set: t >= 0,
/// sum t = 1, sum t_i d0_i = x. Throws OutsideHull if a weight < -tol.
std::vector<double> barycentric_coordinates(std::span<const Vec> d0, const Vec& x,
                                            double tol = kGeomTol);

/// Largest r such that the ball of radius r around 0 within span(d0) lies
/// in conv(d0); equals the min over facets of the distance from 0 to the
/// facet's affine hull.
double simplex_inradius(std::span<const Vec> d0);

}  // namespace sumrange
