#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "sumrange/geometry.hpp"
#include "sumrange/series.hpp"
#include "sumrange/vec.hpp"

namespace sumrange {

/// Everything the steering lemma needs: the minimal direction simplex D0,
/// the split X = X0 + X1, the ball radius delta and the constants
/// C_delta, C = C_delta / delta.
struct SteeringContext {
    std::vector<Vec> d0;                   // unit vectors, 0 interior to conv(d0) in X0
    std::vector<double> interior_weights;  // witness weights of 0 over d0
    Subspace x0, x1;
    double delta = 0.0;
    double c_delta = 0.0;  // closed-form bound |D0| (1 + delta)
    double big_c = 0.0;    // C = C_delta / delta
    double inradius = 0.0;
    double min_pairwise = 0.0;
    int ambient_dim = 0;

    /// Spherical disk S_z at the given chord radius.
    bool in_cone(int z_index, const Vec& x, double radius) const {
        double n = x.norm();
        if (n == 0.0) return false;
        return (x * (1.0 / n) - d0[z_index]).norm() < radius;
    }
    /// Cone radius of a steering call: min(delta, eps / (2 c)).
    double cone_radius(double c_total, double eps) const {
        if (c_total <= 0.0) return delta;
        return std::min(delta, eps / (2.0 * c_total));
    }
};

/// delta = 0.9 min(1/4, inradius, min pairwise distance / 2); throws
/// DegenerateContext when the inradius collapses below 1e-9.
SteeringContext build_steering_context(const ConvexWitness& d0_witness,
                                       double tol = kGeomTol);

using IndexPredicate = std::function<bool(std::uint64_t)>;

struct OmegaOptions {
    int initial_levels = 4;                        // blocks k = 0..3 per direction
    std::uint64_t block_scan_budget = 4'000'000;   // examined indices per block
    std::uint64_t block_member_cap = 4'000'000;    // memory guard per block
    int max_level = 40;
};

/// Lazily extended selection of steering material: per direction z and
/// level k a finite block of fresh indices pointing into the 2^-k
/// neighborhood of z with norm sum in (k, k+1). Indices claimed by blocks
/// are never reused; the running pr1 mass stays under the analytic bound.
class OmegaSelection {
  public:
    struct Block {
        int z_index;
        int k;
        double sum_norm;
        std::vector<std::uint64_t> members;
    };

    OmegaSelection(TermStream stream, const SteeringContext& ctx, OmegaOptions opts = {});

    const SteeringContext& context() const { return *ctx_; }
    const TermStream& stream() const { return stream_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    int levels_built(int z_index) const { return next_k_[z_index]; }

    /// Build the next block for direction z, skipping excluded indices.
    /// Throws BudgetExhausted when the scan or member budget dies.
    const Block& extend(int z_index, const IndexPredicate& excluded = nullptr);

    bool contains(std::uint64_t n) const {
        return n < used_.size() && used_[n];
    }
    /// Sorted materialized members pointing near direction z.
    const std::vector<std::uint64_t>& members_of(int z_index) const {
        return members_by_z_[z_index];
    }
    double pr1_mass() const { return pr1_mass_; }
    /// Sum over built blocks of (k+1) / 2^k, the Claim-2 style bound.
    double pr1_mass_bound() const { return pr1_bound_; }
    std::uint64_t total_members() const { return total_members_; }
    std::uint64_t scan_frontier(int z_index) const { return scan_hint_[z_index]; }

  private:
    TermStream stream_;
    const SteeringContext* ctx_;
    OmegaOptions opts_;
    std::vector<Block> blocks_;
    std::vector<int> next_k_;
    std::vector<std::uint64_t> scan_hint_;  // first index a new scan may claim
    std::vector<std::vector<std::uint64_t>> members_by_z_;
    std::vector<bool> used_;
    double pr1_mass_ = 0.0;
    double pr1_bound_ = 0.0;
    std::uint64_t total_members_ = 0;
};

struct ConeFill {
    std::vector<std::uint64_t> indices;
    Vec sum;
};

/// Greedy fill of cone z: add candidates in increasing index order while
/// the running norm stays acceptable, landing ||sum|| in (b - s, b].
/// Extends omega when the materialized cone runs dry.
ConeFill greedy_cone_fill(const SteeringContext& ctx, OmegaSelection& omega, int z_index,
                          double radius, double budget_norm, double slack,
                          const IndexPredicate& forbidden = nullptr);

struct SteerResult {
    std::vector<std::uint64_t> indices;  // sorted union of cone fills
    Vec sum;
    double pr0_error = 0.0;   // ||pr0(x - sum)||, asserted < eps
    double full_error = 0.0;  // ||x - sum||
    double pr1_residue = 0.0; // ||pr1(sum)||
    double c_paper = 0.0;     // max(||x||, eps) / delta
    double c_used = 0.0;      // mass of the lean conic decomposition
    std::vector<double> cone_budgets;  // beta_z, each <= c_paper t_z
    std::vector<double> cone_norms;    // ||s_z||
};

/// The steering lemma: picks E in Omega minus forbidden with
/// ||pr0(x - sum_E)|| < eps while every per-cone partial stays below its
/// budget, hence every subset of E below C max(||x||, eps).
SteerResult steer(const SteeringContext& ctx, OmegaSelection& omega, const Vec& x,
                  double eps, const IndexPredicate& forbidden = nullptr);

}  // namespace sumrange
