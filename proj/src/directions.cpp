#include "sumrange/directions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "sumrange/errors.hpp"

namespace sumrange {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::vector<Vec> net_1d() { return {Vec{1.0}, Vec{-1.0}}; }

std::vector<Vec> net_2d(double rho) {
    int k = 0;
    double arc = kPi / 2.0;
    while (arc > rho) {
        arc /= 2.0;
        ++k;
    }
    int count = 4 << k;
    std::vector<Vec> net;
    net.reserve(count);
    for (int j = 0; j < count; ++j) {
        double th = 2.0 * kPi * j / count;
        net.push_back(Vec{std::cos(th), std::sin(th)});
    }
    return net;
}

// recursive octahedron subdivision; vertices deduplicated by quantized key
std::vector<Vec> net_3d(double rho) {
    int levels = 0;
    double arc = kPi / 2.0;
    while (arc > rho) {
        arc /= 2.0;
        ++levels;
    }
    std::map<std::array<long long, 3>, int> seen;
    std::vector<Vec> verts;
    auto add = [&](const Vec& v) {
        Vec u = v.normalized();
        std::array<long long, 3> key{};
        for (int i = 0; i < 3; ++i) key[i] = std::llround(u[i] * 1e9);
        auto [it, fresh] = seen.emplace(key, static_cast<int>(verts.size()));
        if (fresh) verts.push_back(u);
        return it->second;
    };
    struct Tri {
        int a, b, c;
    };
    std::vector<Tri> faces;
    int p[6];
    for (int axis = 0; axis < 3; ++axis) {
        p[2 * axis] = add(Vec::unit(3, axis));
        p[2 * axis + 1] = add(-Vec::unit(3, axis));
    }
    for (int sx = 0; sx < 2; ++sx)
        for (int sy = 0; sy < 2; ++sy)
            for (int sz = 0; sz < 2; ++sz) faces.push_back({p[sx], p[2 + sy], p[4 + sz]});
    for (int l = 0; l < levels; ++l) {
        std::vector<Tri> next;
        next.reserve(faces.size() * 4);
        for (const Tri& t : faces) {
            int ab = add(verts[t.a] + verts[t.b]);
            int bc = add(verts[t.b] + verts[t.c]);
            int ca = add(verts[t.c] + verts[t.a]);
            next.push_back({t.a, ab, ca});
            next.push_back({t.b, bc, ab});
            next.push_back({t.c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    return verts;
}

// lattice of normalized primitive integer vectors; coarse but deterministic
std::vector<Vec> net_lattice(int dim, double rho) {
    int L = std::max(1, static_cast<int>(std::ceil(1.5 / rho)));
    while (std::pow(2.0 * L + 1.0, dim) > 3e5 && L > 1) --L;
    std::vector<Vec> net;
    std::vector<int> g(dim, -L);
    while (true) {
        long long gc = 0;
        bool zero = true;
        for (int v : g) {
            gc = std::gcd(gc, static_cast<long long>(std::abs(v)));
            zero = zero && v == 0;
        }
        if (!zero && gc == 1) {
            Vec v(dim);
            for (int i = 0; i < dim; ++i) v[i] = g[i];
            net.push_back(v.normalized());
        }
        int i = dim - 1;
        while (i >= 0 && g[i] == L) g[i--] = -L;
        if (i < 0) break;
        ++g[i];
    }
    return net;
}

}  // namespace

std::vector<Vec> sphere_net(int dim, double rho) {
    if (!(rho > 0 && rho < 1)) throw BadParams("rho must be in (0,1)");
    if (dim == 1) return net_1d();
    if (dim == 2) return net_2d(rho);
    if (dim == 3) return net_3d(rho);
    return net_lattice(dim, rho);
}

VanishReport check_terms_vanish(const TermStream& stream, std::uint64_t n, double eps) {
    VanishReport rep;
    rep.budget = n;
    for (std::uint64_t i = n / 2 + 1; i <= n; ++i)
        rep.max_tail_norm = std::max(rep.max_tail_norm, stream.at(i).norm());
    if (rep.max_tail_norm < eps) {
        rep.verdict = VanishVerdict::Pass;
        return rep;
    }
    double prior_max = 0.0;
    for (std::uint64_t i = n / 4 + 1; i <= n / 2; ++i)
        prior_max = std::max(prior_max, stream.at(i).norm());
    if (rep.max_tail_norm >= 0.8 * prior_max) {
        rep.delta0 = rep.max_tail_norm / 2.0;
        for (std::uint64_t i = 1; i <= n; ++i)
            if (stream.at(i).norm() >= rep.delta0) ++rep.heavy_count;
        if (rep.heavy_count >= n / 10) {
            rep.verdict = VanishVerdict::Fail;
            return rep;
        }
    }
    rep.verdict = VanishVerdict::Inconclusive;
    return rep;
}

DirectionReport estimate_divergence_directions(const TermStream& stream,
                                               const EstimatorParams& params) {
    DirectionReport rep;
    rep.terms_vanish = check_terms_vanish(stream, params.budget, params.vanish_eps);

    if (stream.certificate()) {
        rep.source = DirectionReport::Source::Certificate;
        for (const Vec& z : stream.certificate()->divergence_directions)
            rep.directions.push_back(
                {z, std::numeric_limits<double>::infinity(), 0.0});
        return rep;
    }

    // buckets are the rho-balls of the net cover; a term feeds every
    // bucket it falls in, so bucket mass tracks the mass of a whole
    // neighborhood the way the divergence-direction definition reads
    const std::vector<Vec> net = sphere_net(stream.dim(), params.rho);
    const double r2 = params.rho * params.rho;
    std::vector<double> mass(net.size(), 0.0);
    for (std::uint64_t i = 1; i <= params.budget; ++i) {
        Vec x = stream.at(i);
        double nx = x.norm();
        if (nx == 0.0) continue;
        Vec dir = x * (1.0 / nx);
        for (size_t b = 0; b < net.size(); ++b)
            if ((dir - net[b]).norm_sq() <= r2) mass[b] += nx;
    }

    // heavy buckets merge into connected components (edges within 2 rho)
    std::vector<size_t> heavy;
    for (size_t b = 0; b < net.size(); ++b)
        if (mass[b] > params.mass_threshold) heavy.push_back(b);
    std::vector<int> comp(heavy.size(), -1);
    int n_comp = 0;
    for (size_t i = 0; i < heavy.size(); ++i) {
        if (comp[i] >= 0) continue;
        comp[i] = n_comp;
        std::vector<size_t> queue{i};
        while (!queue.empty()) {
            size_t cur = queue.back();
            queue.pop_back();
            for (size_t j = 0; j < heavy.size(); ++j)
                if (comp[j] < 0 &&
                    (net[heavy[cur]] - net[heavy[j]]).norm() <= 2.0 * params.rho) {
                    comp[j] = n_comp;
                    queue.push_back(j);
                }
        }
        ++n_comp;
    }
    for (int c = 0; c < n_comp; ++c) {
        Vec dir(stream.dim());
        double m = 0.0;  // max bucket mass: overlap-free lower bound
        for (size_t i = 0; i < heavy.size(); ++i)
            if (comp[i] == c) {
                dir += net[heavy[i]] * mass[heavy[i]];
                m = std::max(m, mass[heavy[i]]);
            }
        rep.directions.push_back({dir.normalized(), m, params.rho});
    }
    std::sort(rep.directions.begin(), rep.directions.end(),
              [](const DirectionEntry& a, const DirectionEntry& b) {
                  if (a.mass != b.mass) return a.mass > b.mass;
                  for (int i = 0; i < a.direction.dim(); ++i)
                      if (a.direction[i] != b.direction[i])
                          return a.direction[i] > b.direction[i];
                  return false;
              });
    return rep;
}

DirectionReport estimate_divergence_directions(const TermStream& stream, std::uint64_t n,
                                               double rho, double mass_threshold) {
    EstimatorParams p;
    p.budget = n;
    p.rho = rho;
    p.mass_threshold = mass_threshold;
    return estimate_divergence_directions(stream, p);
}

}  // namespace sumrange
