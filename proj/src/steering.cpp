#include "sumrange/steering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

#include "sumrange/errors.hpp"

namespace sumrange {

SteeringContext build_steering_context(const ConvexWitness& d0_witness, double tol) {
    SteeringContext ctx;
    ctx.d0 = d0_witness.points;
    ctx.interior_weights = d0_witness.weights;
    if (ctx.d0.empty()) throw DegenerateContext("empty direction set");
    ctx.ambient_dim = ctx.d0[0].dim();
    for (const Vec& z : ctx.d0)
        if (std::abs(z.norm() - 1.0) > 1e-9)
            throw DegenerateContext("direction not on the unit sphere: " + z.str());
    if (d0_witness.combination().norm() > 1e-8)
        throw DegenerateContext("weights do not witness 0 in conv(D0)");

    ctx.x0 = Subspace::span_of(ctx.ambient_dim, ctx.d0, tol);
    ctx.x1 = ctx.x0.orthonormal_complement();
    ctx.inradius = simplex_inradius(ctx.d0);
    if (!(ctx.inradius >= 1e-9))
        throw DegenerateContext("inradius " + std::to_string(ctx.inradius) +
                                " below 1e-9");
    ctx.min_pairwise = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < ctx.d0.size(); ++i)
        for (size_t j = i + 1; j < ctx.d0.size(); ++j)
            ctx.min_pairwise = std::min(ctx.min_pairwise, (ctx.d0[i] - ctx.d0[j]).norm());

    ctx.delta = 0.9 * std::min({0.25, ctx.inradius, ctx.min_pairwise / 2.0});
    ctx.c_delta = static_cast<double>(ctx.d0.size()) * (1.0 + ctx.delta);
    ctx.big_c = ctx.c_delta / ctx.delta;
    return ctx;
}

OmegaSelection::OmegaSelection(TermStream stream, const SteeringContext& ctx,
                               OmegaOptions opts)
    : stream_(std::move(stream)), ctx_(&ctx), opts_(opts) {
    const int m = static_cast<int>(ctx_->d0.size());
    next_k_.assign(m, 0);
    scan_hint_.assign(m, 1);
    members_by_z_.resize(m);
    for (int k = 0; k < opts_.initial_levels; ++k)
        for (int z = 0; z < m; ++z) extend(z);
}

const OmegaSelection::Block& OmegaSelection::extend(int z_index,
                                                    const IndexPredicate& excluded) {
    const int k = next_k_[z_index];
    if (k > opts_.max_level)
        throw BudgetExhausted("omega level cap " + std::to_string(opts_.max_level) +
                              " reached for direction " + std::to_string(z_index));
    const double radius = std::pow(0.5, k);  // the 2^-k neighborhood O_k
    const double lo = static_cast<double>(k), hi = lo + 1.0;

    Block block;
    block.z_index = z_index;
    block.k = k;
    block.sum_norm = 0.0;

    std::uint64_t scanned = 0;
    std::uint64_t n = 0;
    // scans restart at 1: shrinking neighborhoods may re-qualify indices
    // skipped by earlier blocks for overshoot
    while (block.sum_norm <= lo) {
        ++n;
        if (++scanned > opts_.block_scan_budget)
            throw BudgetExhausted("block scan budget exhausted at level " +
                                  std::to_string(k) + ", direction " +
                                  std::to_string(z_index) + " (sum so far " +
                                  std::to_string(block.sum_norm) + ")");
        if (contains(n)) continue;
        if (excluded && excluded(n)) continue;
        Vec x = stream_.at(n);
        if (!ctx_->in_cone(z_index, x, radius)) continue;
        double nx = x.norm();
        if (block.sum_norm + nx >= hi) continue;  // would overshoot (k, k+1)
        block.members.push_back(n);
        block.sum_norm += nx;
        if (block.members.size() > opts_.block_member_cap)
            throw BudgetExhausted("block member cap exceeded at level " +
                                  std::to_string(k));
    }
    scan_hint_[z_index] = std::max(scan_hint_[z_index], n);

    // commit
    for (std::uint64_t idx : block.members) {
        if (idx >= used_.size()) used_.resize(std::max<std::uint64_t>(idx + 1, 1024), false);
        used_[idx] = true;
        pr1_mass_ += ctx_->x1.project(stream_.at(idx)).norm();
    }
    auto& mine = members_by_z_[z_index];
    mine.insert(mine.end(), block.members.begin(), block.members.end());
    std::sort(mine.begin(), mine.end());
    total_members_ += block.members.size();
    pr1_bound_ += (static_cast<double>(k) + 1.0) * std::pow(0.5, k);
    next_k_[z_index] = k + 1;
    blocks_.push_back(std::move(block));
    return blocks_.back();
}

ConeFill greedy_cone_fill(const SteeringContext& ctx, OmegaSelection& omega, int z_index,
                          double radius, double budget_norm, double slack,
                          const IndexPredicate& forbidden) {
    ConeFill fill;
    fill.sum = Vec(ctx.ambient_dim);
    if (budget_norm <= 0.0) return fill;
    if (!(slack > 0.0)) throw BadParams("slack must be positive");

    double sum_norm = 0.0;
    std::unordered_set<std::uint64_t> picked;
    while (sum_norm <= budget_norm - slack) {
        bool progressed = false;
        const auto& members = omega.members_of(z_index);
        for (std::uint64_t n : members) {
            if (sum_norm > budget_norm - slack) break;
            if (picked.count(n)) continue;
            if (forbidden && forbidden(n)) continue;
            Vec x = omega.stream().at(n);
            if (!ctx.in_cone(z_index, x, radius)) continue;
            double nx = x.norm();
            if (sum_norm + nx > budget_norm) continue;  // too big for the remaining gap
            picked.insert(n);
            fill.indices.push_back(n);
            fill.sum += x;
            sum_norm = fill.sum.norm();
            progressed = true;
        }
        if (sum_norm > budget_norm - slack) break;
        try {
            omega.extend(z_index, forbidden);
        } catch (const BudgetExhausted& e) {
            throw PoolExhausted(std::string("cone fill starved: ") + e.what() +
                                " (filled " + std::to_string(sum_norm) + " of " +
                                std::to_string(budget_norm) + ")");
        }
        (void)progressed;
    }
    std::sort(fill.indices.begin(), fill.indices.end());
    return fill;
}

SteerResult steer(const SteeringContext& ctx, OmegaSelection& omega, const Vec& x,
                  double eps, const IndexPredicate& forbidden) {
    if (!(eps > 0.0)) throw BadParams("eps must be positive");
    const int m = static_cast<int>(ctx.d0.size());
    SteerResult res;
    res.sum = Vec(ctx.ambient_dim);
    res.cone_budgets.assign(m, 0.0);
    res.cone_norms.assign(m, 0.0);

    Vec x_in = ctx.x0.project(x);
    if ((x - x_in).norm() > 1e-9 * (1.0 + x.norm()))
        throw TargetOutsideX0("target has a component outside X0: " + x.str());

    const double eps_eff = std::min(eps, ctx.delta / 2.0);  // the proof's eps < delta
    res.c_paper = std::max(x_in.norm(), eps_eff) / ctx.delta;
    if (x_in.norm() <= 1e-15) {
        res.pr0_error = res.full_error = x_in.norm();
        return res;  // empty set: 0 within eps trivially
    }

    // beta: the minimal-mass conic representation x = sum beta_z z, found by
    // sliding the barycentric solution along the interior witness direction.
    // Each beta_z <= c t_z, so all the paper bounds hold a fortiori while
    // the fill consumes only gauge(x) worth of terms.
    auto t = barycentric_coordinates(ctx.d0, x_in * (1.0 / res.c_paper));
    double lambda = std::numeric_limits<double>::infinity();
    for (int z = 0; z < m; ++z)
        lambda = std::min(lambda, res.c_paper * t[z] / ctx.interior_weights[z]);
    double c_used = 0.0;
    for (int z = 0; z < m; ++z) {
        double beta = res.c_paper * t[z] - lambda * ctx.interior_weights[z];
        res.cone_budgets[z] = std::max(0.0, beta);
        c_used += res.cone_budgets[z];
    }
    res.c_used = c_used;

    const double radius = ctx.cone_radius(c_used, eps_eff);
    const double slack = eps_eff / (2.0 * static_cast<double>(m));
    for (int z = 0; z < m; ++z) {
        if (res.cone_budgets[z] <= slack) continue;  // empty fill already qualifies
        ConeFill fill =
            greedy_cone_fill(ctx, omega, z, radius, res.cone_budgets[z], slack, forbidden);
        res.cone_norms[z] = fill.sum.norm();
        res.sum += fill.sum;
        res.indices.insert(res.indices.end(), fill.indices.begin(), fill.indices.end());
    }
    std::sort(res.indices.begin(), res.indices.end());

    Vec err = x_in - res.sum;
    res.full_error = err.norm();
    res.pr0_error = ctx.x0.project(err).norm();
    res.pr1_residue = ctx.x1.project(res.sum).norm();
    if (res.pr0_error >= eps)
        throw Error("steering accuracy violated: pr0 error " +
                    std::to_string(res.pr0_error) + " >= eps " + std::to_string(eps));
    return res;
}

}  // namespace sumrange
