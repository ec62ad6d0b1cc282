#include "sumrange/scalar.hpp"

#include <cmath>

#include "sumrange/errors.hpp"
#include "sumrange/geometry.hpp"

namespace sumrange {

std::string to_string(ScalarVerdict v) {
    switch (v) {
        case ScalarVerdict::AbsolutelyConvergent: return "AbsolutelyConvergent";
        case ScalarVerdict::AnyRealAchievable: return "AnyRealAchievable";
        case ScalarVerdict::DivergesAllRearrangements: return "DivergesAllRearrangements";
        case ScalarVerdict::Inconclusive: return "Inconclusive";
    }
    return "?";
}

ScalarEvidence signed_part_sums(const ScalarSeries& s, std::uint64_t n) {
    ScalarEvidence ev;
    ev.budget = n;
    for (std::uint64_t i = 1; i <= n; ++i) {
        double a = s.at(i);
        if (a > 0)
            ev.pos_sum += a;
        else
            ev.neg_sum += a;
        if (i > n / 2) ev.max_tail = std::max(ev.max_tail, std::abs(a));
    }
    return ev;
}

ScalarClassification classify_scalar(const ScalarSeries& s, std::uint64_t n, double m,
                                     double vanish_eps) {
    ScalarClassification out;
    out.evidence = signed_part_sums(s, n);

    if (s.certificate()) {
        const auto& c = *s.certificate();
        out.verdict = c.kind;
        out.sign = c.sign;
        out.certified = true;
        if (c.kind == ScalarVerdict::AbsolutelyConvergent) {
            out.sum = c.exact_sum ? *c.exact_sum
                                  : out.evidence.pos_sum + out.evidence.neg_sum;
        }
        return out;
    }

    const double pos = out.evidence.pos_sum;
    const double nneg = -out.evidence.neg_sum;
    const bool vanished = out.evidence.max_tail < vanish_eps;

    // non-vanishing evidence: the tail max is not decaying and a tenth of
    // the prefix stays above half of it
    bool fail_vanish = false;
    if (!vanished) {
        double prior_max = 0.0;
        for (std::uint64_t i = n / 4 + 1; i <= n / 2; ++i)
            prior_max = std::max(prior_max, std::abs(s.at(i)));
        if (out.evidence.max_tail >= 0.8 * prior_max) {
            double delta0 = out.evidence.max_tail / 2.0;
            std::uint64_t heavy = 0;
            for (std::uint64_t i = 1; i <= n; ++i)
                if (std::abs(s.at(i)) >= delta0) ++heavy;
            fail_vanish = heavy >= n / 10;
        }
    }

    if (fail_vanish) {
        out.verdict = ScalarVerdict::DivergesAllRearrangements;
        out.sign = pos >= nneg ? +1 : -1;
    } else if (pos > m && nneg > m) {
        out.verdict = vanished ? ScalarVerdict::AnyRealAchievable
                               : ScalarVerdict::Inconclusive;
    } else if (pos > m && nneg <= m) {
        out.verdict = ScalarVerdict::DivergesAllRearrangements;
        out.sign = +1;
    } else if (nneg > m && pos <= m) {
        out.verdict = ScalarVerdict::DivergesAllRearrangements;
        out.sign = -1;
    } else {
        out.verdict = ScalarVerdict::Inconclusive;
    }
    return out;
}

ScalarSeries functional_series(const TermStream& stream, const Vec& f) {
    TermStream src = stream;
    Vec fn = f;
    ScalarSeries out([src, fn](std::uint64_t n) { return fn.dot(src.at(n)); },
                     "<" + f.str() + ", " + stream.description() + ">");
    if (!stream.certificate()) return out;
    const auto& cert = *stream.certificate();

    // f inside span(Gamma) makes the scalar series absolutely convergent
    Subspace gamma = Subspace::span_of(stream.dim(), cert.gamma_basis);
    if ((f - gamma.project(f)).norm() <= 1e-9 * std::max(1.0, f.norm()))
        return out.with_certificate({ScalarVerdict::AbsolutelyConvergent, +1, std::nullopt});

    bool has_pos = false, has_neg = false;
    for (const Vec& z : cert.divergence_directions) {
        double v = f.dot(z);
        if (v > 1e-9) has_pos = true;
        if (v < -1e-9) has_neg = true;
    }
    if (has_pos && has_neg)
        return out.with_certificate({ScalarVerdict::AnyRealAchievable, +1, std::nullopt});
    if (has_pos)
        return out.with_certificate(
            {ScalarVerdict::DivergesAllRearrangements, +1, std::nullopt});
    if (has_neg)
        return out.with_certificate(
            {ScalarVerdict::DivergesAllRearrangements, -1, std::nullopt});
    // f neither annihilated nor touching D: certificate gives no verdict
    return out;
}

ScalarSeries scalar_builtin(const std::string& name) {
    if (name == "harmonic") {
        ScalarSeries s([](std::uint64_t n) { return 1.0 / static_cast<double>(n); },
                       "harmonic");
        return s.with_certificate({ScalarVerdict::DivergesAllRearrangements, +1, {}});
    }
    if (name == "alternating_harmonic") {
        ScalarSeries s(
            [](std::uint64_t n) {
                double v = 1.0 / static_cast<double>(n);
                return n % 2 == 0 ? -v : v;
            },
            "alternating_harmonic");
        return s.with_certificate({ScalarVerdict::AnyRealAchievable, +1, {}});
    }
    if (name == "alternating_geometric") {
        ScalarSeries s(
            [](std::uint64_t n) {
                double v = std::pow(0.5, static_cast<double>(n));
                return n % 2 == 0 ? v : -v;
            },
            "alternating_geometric");
        return s.with_certificate({ScalarVerdict::AbsolutelyConvergent, +1, -1.0 / 3.0});
    }
    if (name == "geometric") {
        ScalarSeries s([](std::uint64_t n) { return std::pow(0.5, static_cast<double>(n)); },
                       "geometric");
        return s.with_certificate({ScalarVerdict::AbsolutelyConvergent, +1, 1.0});
    }
    throw UnknownFamily("unknown scalar family '" + name + "'");
}

ScalarRearrangement::ScalarRearrangement(ScalarSeries series, double target,
                                         ScalarRearrangeOptions opts)
    : series_(std::move(series)), target_(target), opts_(opts) {}

std::uint64_t ScalarRearrangement::advance_side(bool positive) {
    std::uint64_t& cur = positive ? pos_cursor_ : neg_cursor_;
    const std::uint64_t other = positive ? neg_cursor_ : pos_cursor_;
    std::uint64_t scanned = 0;
    while (scanned < opts_.scan_budget) {
        double a = series_.at(cur);
        bool mine = positive ? a >= 0 : a < 0;
        if (mine) return cur++;
        ++cur;
        ++scanned;
    }
    // side looks exhausted: append remaining indices in increasing order
    (void)other;
    append_mode_ = true;
    return 0;
}

ScalarRearrangement::Step ScalarRearrangement::next() {
    std::uint64_t index = 0;
    if (!append_mode_) {
        bool positive = partial_ <= target_;  // tie emits from the positive side
        index = advance_side(positive);
    }
    if (append_mode_) {
        while (index == 0) {
            if (pos_cursor_ <= neg_cursor_) {
                std::uint64_t n = pos_cursor_++;
                if (series_.at(n) >= 0) index = n;
            } else {
                std::uint64_t n = neg_cursor_++;
                if (series_.at(n) < 0) index = n;
            }
        }
    }
    double term = series_.at(index);
    double before = partial_ - target_;
    partial_ += term;
    double after = partial_ - target_;
    if ((before <= 0) != (after <= 0)) {
        ++crossings_;
        if (std::abs(after) > std::abs(term) + 1e-12) ++crossing_violations_;
    }
    ++steps_;
    return {steps_, index, term, partial_};
}

ScalarRearrangement riemann_rearrange(const ScalarSeries& s, double target,
                                      ScalarRearrangeOptions opts) {
    auto cls = classify_scalar(s, opts.classify_budget, opts.classify_threshold);
    switch (cls.verdict) {
        case ScalarVerdict::AnyRealAchievable:
            break;
        case ScalarVerdict::AbsolutelyConvergent: {
            double sum = cls.sum.value_or(cls.evidence.pos_sum + cls.evidence.neg_sum);
            if (std::abs(sum - target) > opts.sum_match_tol)
                throw NotRearrangeable("absolutely convergent series sums to " +
                                       std::to_string(sum) + ", not " +
                                       std::to_string(target));
            break;
        }
        case ScalarVerdict::DivergesAllRearrangements:
            throw NotRearrangeable("series diverges under every rearrangement (sign " +
                                   std::string(cls.sign > 0 ? "+" : "-") + ")");
        case ScalarVerdict::Inconclusive:
            throw NotRearrangeable("classification inconclusive at budget " +
                                   std::to_string(opts.classify_budget));
    }
    return ScalarRearrangement(s, target, opts);
}

}  // namespace sumrange
