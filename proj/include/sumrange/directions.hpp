#pragma once

#include <cstdint>
#include <vector>

#include "sumrange/series.hpp"
#include "sumrange/vec.hpp"

namespace sumrange {

enum class VanishVerdict { Pass, Fail, Inconclusive };

struct VanishReport {
    VanishVerdict verdict = VanishVerdict::Inconclusive;
    double max_tail_norm = 0.0;  // max ||x_n|| over N/2 < n <= N
    double delta0 = 0.0;         // threshold behind a Fail verdict
    std::uint64_t heavy_count = 0;
    std::uint64_t budget = 0;
};

/// Pass when the tail half of the prefix stays below eps; Fail when a
/// non-vanishing subsequence is evidenced (tail max not decaying and at
/// least a tenth of the prefix above half of it); else Inconclusive.
VanishReport check_terms_vanish(const TermStream& stream, std::uint64_t n, double eps);

struct DirectionEntry {
    Vec direction;  // unit
    double mass;    // accumulated sum of ||x_n|| (infinite for certificates)
    double bucket_radius;
};

struct DirectionReport {
    enum class Source { Certificate, Estimated };
    std::vector<DirectionEntry> directions;
    VanishReport terms_vanish;
    Source source = Source::Estimated;
};

/// Deterministic rho-net of the unit sphere: antipodal pair in d=1,
/// uniform angular grid in d=2, recursive octahedron subdivision in d=3,
/// normalized primitive lattice directions for d > 3.
std::vector<Vec> sphere_net(int dim, double rho);

struct EstimatorParams {
    std::uint64_t budget = 100000;  // prefix length N
    double rho = 0.1;               // net resolution
    double mass_threshold = 10.0;   // bucket mass M certifying a report
    double vanish_eps = 1e-3;
};

/// Sphere-histogram estimator: buckets accumulate sum ||x_n|| over terms
/// whose direction falls in the bucket; heavy buckets merge into connected
/// components reported with their mass-weighted mean direction. Explicitly
/// heuristic; a certificate, when present, is returned verbatim.
DirectionReport estimate_divergence_directions(const TermStream& stream,
                                               const EstimatorParams& params = {});
DirectionReport estimate_divergence_directions(const TermStream& stream, std::uint64_t n,
                                               double rho, double mass_threshold);

}  // namespace sumrange
