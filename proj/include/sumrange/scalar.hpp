#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "sumrange/series.hpp"
#include "sumrange/vec.hpp"

namespace sumrange {

enum class ScalarVerdict {
    AbsolutelyConvergent,
    AnyRealAchievable,
    DivergesAllRearrangements,
    Inconclusive,
};

std::string to_string(ScalarVerdict v);

/// Analytic knowledge about a scalar series; attached to built-in scalar
/// families and derived from vector-stream certificates.
struct ScalarCertificate {
    ScalarVerdict kind = ScalarVerdict::Inconclusive;
    int sign = +1;                    // for DivergesAllRearrangements
    std::optional<double> exact_sum;  // when absolutely convergent and known
};

class ScalarSeries {
  public:
    ScalarSeries() = default;
    ScalarSeries(std::function<double(std::uint64_t)> at, std::string description)
        : at_(std::move(at)), description_(std::move(description)) {}

    double at(std::uint64_t n) const { return at_(n); }
    const std::string& description() const { return description_; }
    const std::optional<ScalarCertificate>& certificate() const { return certificate_; }
    ScalarSeries with_certificate(ScalarCertificate c) const {
        ScalarSeries out = *this;
        out.certificate_ = c;
        return out;
    }

  private:
    std::function<double(std::uint64_t)> at_;
    std::string description_;
    std::optional<ScalarCertificate> certificate_;
};

/// Prefix statistics backing every verdict.
struct ScalarEvidence {
    double pos_sum = 0.0;   // sum of max(0, a_n), n <= N
    double neg_sum = 0.0;   // sum of min(0, a_n), n <= N
    double max_tail = 0.0;  // max |a_n| over N/2 < n <= N
    std::uint64_t budget = 0;
};

struct ScalarClassification {
    ScalarVerdict verdict = ScalarVerdict::Inconclusive;
    int sign = +1;
    std::optional<double> sum;  // for AbsolutelyConvergent
    ScalarEvidence evidence;
    bool certified = false;
};

ScalarEvidence signed_part_sums(const ScalarSeries& s, std::uint64_t n);

/// Classifies from a length-N prefix with divergence threshold M. Exact
/// (certified) verdicts when the series carries a certificate; otherwise
/// honest empirical rules with an Inconclusive arm.
ScalarClassification classify_scalar(const ScalarSeries& s, std::uint64_t n, double m,
                                     double vanish_eps = 1e-3);

/// Scalar series of a functional over a vector stream, with the scalar
/// certificate derived from the stream's certificate when sound.
ScalarSeries functional_series(const TermStream& stream, const Vec& f);

/// Built-in scalar families: harmonic, alternating_harmonic ((-1)^(n+1)/n),
/// alternating_geometric ((-1)^n 2^-n), geometric (2^-n).
ScalarSeries scalar_builtin(const std::string& name);

struct ScalarRearrangeOptions {
    std::uint64_t scan_budget = 2'000'000;  // per-request side scan before append mode
    std::uint64_t classify_budget = 100'000;
    double classify_threshold = 10.0;
    double sum_match_tol = 1e-6;  // absolutely convergent target tolerance
};

/// Greedy crossing rearrangement of a scalar series steering partial sums
/// to the target. Single-consumer stateful stream over a bijection of N.
class ScalarRearrangement {
  public:
    struct Step {
        std::uint64_t step;   // 1-based emission count
        std::uint64_t index;  // original term index
        double term;
        double partial;
    };

    ScalarRearrangement(ScalarSeries series, double target, ScalarRearrangeOptions opts);

    Step next();
    double target() const { return target_; }
    std::uint64_t steps() const { return steps_; }
    double partial() const { return partial_; }
    /// Everything below this index has been emitted.
    std::uint64_t smallest_unemitted() const { return std::min(pos_cursor_, neg_cursor_); }
    std::uint64_t crossings() const { return crossings_; }
    /// Count of crossing steps violating |partial - t| <= |term|; stays 0.
    std::uint64_t crossing_bound_violations() const { return crossing_violations_; }
    bool append_mode() const { return append_mode_; }

  private:
    std::uint64_t advance_side(bool positive);

    ScalarSeries series_;
    double target_ = 0.0;
    ScalarRearrangeOptions opts_;
    std::uint64_t pos_cursor_ = 1, neg_cursor_ = 1;
    double partial_ = 0.0;
    std::uint64_t steps_ = 0;
    std::uint64_t crossings_ = 0;
    std::uint64_t crossing_violations_ = 0;
    bool append_mode_ = false;
    int last_side_ = 0;
};

/// Checks the rearrangement precondition and constructs the stream.
/// Throws NotRearrangeable when the classification forbids the target.
ScalarRearrangement riemann_rearrange(const ScalarSeries& s, double target,
                                      ScalarRearrangeOptions opts = {});

}  // namespace sumrange
