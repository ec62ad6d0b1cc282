#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sumrange/vec.hpp"

namespace sumrange {

/// Analytic knowledge attached to a stream: the set D of divergence
/// directions and a basis of Gamma = {y : sum |<y, x_n>| < inf}.
/// Certificates are trusted; divergence is not decidable from finite data.
struct StructureCertificate {
    std::vector<Vec> divergence_directions;
    std::vector<Vec> gamma_basis;
    bool absolutely_convergent = false;
    bool operator==(const StructureCertificate&) const = default;
};

/// Lazily evaluated infinite sequence of nonzero terms x_n, n >= 1.
/// Evaluation is pure and deterministic; instances are safe to share.
class TermStream {
  public:
    TermStream() = default;
    TermStream(int dim, std::function<Vec(std::uint64_t)> term_at, std::string description)
        : dim_(dim), term_at_(std::move(term_at)), description_(std::move(description)) {}

    int dim() const { return dim_; }
    Vec at(std::uint64_t n) const { return term_at_(n); }
    const std::string& description() const { return description_; }

    const std::optional<StructureCertificate>& certificate() const { return certificate_; }
    TermStream with_certificate(StructureCertificate cert) const;
    TermStream without_certificate() const;

    /// Index in the user's original numbering (differs from n only for
    /// custom tables with stripped zero entries).
    std::uint64_t original_index(std::uint64_t n) const {
        return index_map_ ? index_map_(n) : n;
    }
    TermStream with_index_map(std::function<std::uint64_t(std::uint64_t)> m) const;

  private:
    int dim_ = 0;
    std::function<Vec(std::uint64_t)> term_at_;
    std::string description_;
    std::optional<StructureCertificate> certificate_;
    std::function<std::uint64_t(std::uint64_t)> index_map_;
};

/// Ordered key-value parameters; keys may repeat (table entries).
using FamilyParams = std::vector<std::pair<std::string, std::string>>;

/// The five built-in families:
///   alternating_harmonic_dir(u[,dim])   x_n = ((-1)^n / n) u
///   positive_harmonic_dir(u[,dim])      x_n = (1/n) u
///   geometric(r)                        x_n = (r_1^n, ..., r_d^n), |r_i| < 1
///   interleaved_sum(a.*, b.*)           termwise interleave of two families
///   custom_table(entry*, tail_ratio)    finite table, geometric tail
/// Families with analytic structure carry an exact certificate.
TermStream builtin_family(const std::string& name, const FamilyParams& params);

/// builtin_family plus composed presets used by the CLI:
///   alt_harmonic, positive_harmonic (1-D), alt_harmonic_geometric
TermStream make_family(const std::string& name, const FamilyParams& params);

/// x_n = ((-1)^n / n, ratio^n) with certificate D = {+-e1}, Gamma = span{e2}.
TermStream make_alt_harmonic_geometric(double ratio = 0.5);

std::vector<Vec> prefix(const TermStream& stream, std::uint64_t n);

// --- combinators (certificates transformed where sound) ---
TermStream interleave(const TermStream& a, const TermStream& b);
TermStream direct_sum(const TermStream& a, const TermStream& b);
/// Apply an orthogonal map given by its columns.
TermStream apply_linear(const TermStream& s, const std::vector<Vec>& columns);
TermStream scale_stream(const TermStream& s, double lambda);
/// Replace a single term (certificate preserved; new term must be nonzero).
TermStream replace_term(const TermStream& s, std::uint64_t index, const Vec& value);

// --- series spec files ---
struct SeriesSpec {
    std::string family;
    FamilyParams params;
    std::optional<StructureCertificate> certificate;
    bool operator==(const SeriesSpec&) const = default;
};

/// Plain-text key-value format, one `key = value` per line, `#` comments.
/// Scalar values are decimal or rational `p/q`; vectors are comma lists.
SeriesSpec load_spec(const std::string& text);
std::string serialize_spec(const SeriesSpec& spec);
TermStream to_stream(const SeriesSpec& spec);

double parse_scalar(const std::string& text);
Vec parse_vector(const std::string& text);
std::string format_scalar(double v);

}  // namespace sumrange
