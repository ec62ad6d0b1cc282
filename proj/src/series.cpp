#include "sumrange/series.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "sumrange/errors.hpp"
#include "sumrange/geometry.hpp"

namespace sumrange {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::optional<std::string> find_param(const FamilyParams& params, const std::string& key) {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    return std::nullopt;
}

std::vector<std::string> find_all(const FamilyParams& params, const std::string& key) {
    std::vector<std::string> out;
    for (const auto& [k, v] : params)
        if (k == key) out.push_back(v);
    return out;
}

std::vector<Vec> gamma_complement_of(const Vec& u) {
    return Subspace::span_of(u.dim(), std::vector<Vec>{u}).orthonormal_complement().basis();
}

Vec required_vector(const FamilyParams& params, const std::string& key) {
    auto v = find_param(params, key);
    if (!v) throw BadParams("missing parameter '" + key + "'");
    return parse_vector(*v);
}

}  // namespace

TermStream TermStream::with_certificate(StructureCertificate cert) const {
    for (const Vec& d : cert.divergence_directions)
        if (std::abs(d.norm() - 1.0) > 1e-12)
            throw BadParams("certificate direction not unit: " + d.str());
    if (cert.absolutely_convergent && !cert.divergence_directions.empty())
        throw BadParams("absolutely convergent certificate must have empty D");
    TermStream out = *this;
    out.certificate_ = std::move(cert);
    return out;
}

TermStream TermStream::without_certificate() const {
    TermStream out = *this;
    out.certificate_.reset();
    return out;
}

TermStream TermStream::with_index_map(std::function<std::uint64_t(std::uint64_t)> m) const {
    TermStream out = *this;
    out.index_map_ = std::move(m);
    return out;
}

double parse_scalar(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw BadParams("empty scalar");
    try {
        size_t slash = s.find('/');
        if (slash != std::string::npos) {
            std::string ps = trim(s.substr(0, slash)), qs = trim(s.substr(slash + 1));
            size_t used = 0;
            double p = std::stod(ps, &used);
            if (used != ps.size()) throw BadParams("bad rational: " + s);
            double q = std::stod(qs, &used);
            if (used != qs.size()) throw BadParams("bad rational: " + s);
            if (q == 0.0) throw BadParams("zero denominator: " + s);
            return p / q;
        }
        size_t used = 0;
        double v = std::stod(s, &used);
        if (used != s.size()) throw BadParams("trailing characters in scalar: " + s);
        return v;
    } catch (const std::invalid_argument&) {
        throw BadParams("not a number: " + s);
    } catch (const std::out_of_range&) {
        throw BadParams("number out of range: " + s);
    }
}

Vec parse_vector(const std::string& text) {
    std::vector<double> xs;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) xs.push_back(parse_scalar(part));
    if (xs.empty() || static_cast<int>(xs.size()) > Vec::kMaxDim)
        throw BadParams("vector must have 1.." + std::to_string(Vec::kMaxDim) +
                        " coordinates: " + text);
    Vec v(static_cast<int>(xs.size()));
    for (size_t i = 0; i < xs.size(); ++i) v[static_cast<int>(i)] = xs[i];
    if (!v.finite()) throw BadParams("non-finite vector: " + text);
    return v;
}

std::string format_scalar(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string format_vector(const Vec& v) {
    std::string s;
    for (int i = 0; i < v.dim(); ++i) {
        if (i) s += ",";
        s += format_scalar(v[i]);
    }
    return s;
}

TermStream make_harmonic_dir(const FamilyParams& params, bool alternating) {
    Vec u = required_vector(params, "u");
    if (u.norm() < 1e-12) throw BadParams("direction u must be nonzero");
    int dim = u.dim();
    if (auto d = find_param(params, "dim")) {
        int want = static_cast<int>(parse_scalar(*d));
        if (want < u.dim() || want > Vec::kMaxDim) throw BadParams("bad dim");
        Vec lifted(want);
        for (int i = 0; i < u.dim(); ++i) lifted[i] = u[i];
        u = lifted;
        dim = want;
    }
    u = u.normalized();
    std::string name = alternating ? "alternating_harmonic_dir" : "positive_harmonic_dir";
    TermStream s(
        dim,
        [u, alternating](std::uint64_t n) {
            double c = 1.0 / static_cast<double>(n);
            if (alternating && n % 2 == 1) c = -c;
            return u * c;
        },
        name + "(u=" + u.str() + ")");
    StructureCertificate cert;
    cert.divergence_directions = alternating ? std::vector<Vec>{u, -u} : std::vector<Vec>{u};
    cert.gamma_basis = gamma_complement_of(u);
    cert.absolutely_convergent = false;
    return s.with_certificate(std::move(cert));
}

TermStream make_geometric(const FamilyParams& params) {
    Vec r = required_vector(params, "r");
    bool all_zero = true;
    for (int i = 0; i < r.dim(); ++i) {
        if (std::abs(r[i]) >= 1.0)
            throw BadParams("geometric ratio |r_i| must be < 1, got " + format_scalar(r[i]));
        all_zero = all_zero && r[i] == 0.0;
    }
    if (all_zero) throw ZeroTermRejected("geometric with all-zero ratios emits zero terms");
    int d = r.dim();
    TermStream s(
        d,
        [r, d](std::uint64_t n) {
            Vec x(d);
            for (int i = 0; i < d; ++i)
                x[i] = r[i] == 0.0 ? 0.0 : std::pow(r[i], static_cast<double>(n));
            return x;
        },
        "geometric(r=" + r.str() + ")");
    StructureCertificate cert;
    cert.absolutely_convergent = true;
    for (int i = 0; i < d; ++i) cert.gamma_basis.push_back(Vec::unit(d, i));
    return s.with_certificate(std::move(cert));
}

TermStream make_custom_table(const FamilyParams& params) {
    std::vector<Vec> entries;
    for (const std::string& e : find_all(params, "entry")) entries.push_back(parse_vector(e));
    if (entries.empty()) throw BadParams("custom_table needs at least one entry");
    const int d = entries[0].dim();
    for (const Vec& e : entries)
        if (e.dim() != d) throw BadParams("table entries of mixed dimension");
    double q = 0.5;
    if (auto t = find_param(params, "tail_ratio")) q = parse_scalar(*t);
    if (!(q > 0.0 && q < 1.0)) throw BadParams("tail_ratio must be in (0,1)");

    // zero entries are stripped; the original numbering stays reachable
    // through the index map so permutations report user indices
    std::vector<Vec> kept;
    std::vector<std::uint64_t> kept_original;
    for (size_t i = 0; i < entries.size(); ++i)
        if (entries[i].norm() > 0.0) {
            kept.push_back(entries[i]);
            kept_original.push_back(i + 1);
        }
    if (kept.empty()) throw ZeroTermRejected("custom_table with only zero entries");
    const std::uint64_t n_kept = kept.size();
    const std::uint64_t n_orig = entries.size();
    Vec last = kept.back();

    TermStream s(
        d,
        [kept, last, q, n_kept](std::uint64_t n) {
            if (n <= n_kept) return kept[n - 1];
            return last * std::pow(q, static_cast<double>(n - n_kept));
        },
        "custom_table(" + std::to_string(n_kept) + " entries, tail_ratio=" +
            format_scalar(q) + ")");
    s = s.with_index_map([kept_original, n_kept, n_orig](std::uint64_t n) {
        if (n <= n_kept) return kept_original[n - 1];
        return n_orig + (n - n_kept);
    });
    // finite table + geometric tail is absolutely convergent
    StructureCertificate cert;
    cert.absolutely_convergent = true;
    for (int i = 0; i < d; ++i) cert.gamma_basis.push_back(Vec::unit(d, i));
    return s.with_certificate(std::move(cert));
}

FamilyParams sub_params(const FamilyParams& params, const std::string& prefix) {
    FamilyParams out;
    for (const auto& [k, v] : params)
        if (k.size() > prefix.size() && k.compare(0, prefix.size(), prefix) == 0 &&
            k.substr(prefix.size()) != "family")
            out.emplace_back(k.substr(prefix.size()), v);
    return out;
}

TermStream make_interleaved_sum(const FamilyParams& params) {
    auto fa = find_param(params, "a.family");
    auto fb = find_param(params, "b.family");
    if (!fa || !fb)
        throw BadParams("interleaved_sum needs a.family and b.family parameter groups");
    TermStream a = builtin_family(*fa, sub_params(params, "a."));
    TermStream b = builtin_family(*fb, sub_params(params, "b."));
    return interleave(a, b);
}

}  // namespace

TermStream builtin_family(const std::string& name, const FamilyParams& params) {
    if (name == "alternating_harmonic_dir") return make_harmonic_dir(params, true);
    if (name == "positive_harmonic_dir") return make_harmonic_dir(params, false);
    if (name == "geometric") return make_geometric(params);
    if (name == "custom_table") return make_custom_table(params);
    if (name == "interleaved_sum") return make_interleaved_sum(params);
    throw UnknownFamily("unknown family '" + name + "'");
}

TermStream make_alt_harmonic_geometric(double ratio) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw BadParams("ratio must be in (0,1)");
    TermStream s(
        2,
        [ratio](std::uint64_t n) {
            double a = 1.0 / static_cast<double>(n);
            if (n % 2 == 1) a = -a;
            return Vec{a, std::pow(ratio, static_cast<double>(n))};
        },
        "alt_harmonic_geometric(ratio=" + format_scalar(ratio) + ")");
    StructureCertificate cert;
    cert.divergence_directions = {Vec{1, 0}, Vec{-1, 0}};
    cert.gamma_basis = {Vec{0, 1}};
    return s.with_certificate(std::move(cert));
}

TermStream make_family(const std::string& name, const FamilyParams& params) {
    if (name == "alt_harmonic_geometric") {
        double ratio = 0.5;
        if (auto r = [&]() -> std::optional<std::string> {
                for (const auto& [k, v] : params)
                    if (k == "ratio") return v;
                return std::nullopt;
            }())
            ratio = parse_scalar(*r);
        return make_alt_harmonic_geometric(ratio);
    }
    if (name == "alt_harmonic")
        return builtin_family("alternating_harmonic_dir", {{"u", "1"}});
    if (name == "positive_harmonic")
        return builtin_family("positive_harmonic_dir", {{"u", "1"}});
    return builtin_family(name, params);
}

std::vector<Vec> prefix(const TermStream& stream, std::uint64_t n) {
    std::vector<Vec> out;
    out.reserve(n);
    for (std::uint64_t i = 1; i <= n; ++i) out.push_back(stream.at(i));
    return out;
}

TermStream interleave(const TermStream& a, const TermStream& b) {
    if (a.dim() != b.dim()) throw BadParams("interleave of mixed dimensions");
    TermStream sa = a, sb = b;
    TermStream out(
        a.dim(),
        [sa, sb](std::uint64_t n) { return (n % 2 == 1) ? sa.at((n + 1) / 2) : sb.at(n / 2); },
        "interleave(" + a.description() + ", " + b.description() + ")");
    if (a.certificate() && b.certificate()) {
        const auto& ca = *a.certificate();
        const auto& cb = *b.certificate();
        StructureCertificate cert;
        cert.absolutely_convergent = ca.absolutely_convergent && cb.absolutely_convergent;
        cert.divergence_directions = ca.divergence_directions;
        for (const Vec& d : cb.divergence_directions) {
            bool dup = false;
            for (const Vec& e : cert.divergence_directions) dup = dup || e.approx_eq(d, 1e-9);
            if (!dup) cert.divergence_directions.push_back(d);
        }
        // Gamma of the interleave is the intersection; computed through
        // complements: Ga ^ Gb = (Ga' + Gb')'
        std::vector<Vec> comp_union;
        auto add_comp = [&](const std::vector<Vec>& basis) {
            auto comp = Subspace::span_of(a.dim(), basis).orthonormal_complement().basis();
            comp_union.insert(comp_union.end(), comp.begin(), comp.end());
        };
        add_comp(ca.gamma_basis);
        add_comp(cb.gamma_basis);
        cert.gamma_basis =
            Subspace::span_of(a.dim(), comp_union).orthonormal_complement().basis();
        out = out.with_certificate(std::move(cert));
    }
    return out;
}

TermStream direct_sum(const TermStream& a, const TermStream& b) {
    const int d = a.dim() + b.dim();
    if (d > Vec::kMaxDim) throw BadParams("direct_sum exceeds max dimension");
    TermStream sa = a, sb = b;
    int da = a.dim();
    TermStream out(
        d,
        [sa, sb, da, d](std::uint64_t n) {
            Vec xa = sa.at(n), xb = sb.at(n);
            Vec x(d);
            for (int i = 0; i < da; ++i) x[i] = xa[i];
            for (int i = 0; i < xb.dim(); ++i) x[da + i] = xb[i];
            return x;
        },
        "direct_sum(" + a.description() + ", " + b.description() + ")");
    if (a.certificate() && b.certificate() && a.certificate()->absolutely_convergent &&
        b.certificate()->absolutely_convergent) {
        StructureCertificate cert;
        cert.absolutely_convergent = true;
        for (int i = 0; i < d; ++i) cert.gamma_basis.push_back(Vec::unit(d, i));
        out = out.with_certificate(std::move(cert));
    }
    return out;
}

TermStream apply_linear(const TermStream& s, const std::vector<Vec>& columns) {
    const int d = s.dim();
    if (static_cast<int>(columns.size()) != d) throw BadParams("column count != dim");
    auto apply = [columns, d](const Vec& v) {
        Vec out(columns[0].dim());
        for (int i = 0; i < d; ++i) out += columns[i] * v[i];
        return out;
    };
    TermStream src = s;
    TermStream out(
        columns[0].dim(), [src, apply](std::uint64_t n) { return apply(src.at(n)); },
        "linear(" + s.description() + ")");
    if (s.certificate()) {
        StructureCertificate cert;
        cert.absolutely_convergent = s.certificate()->absolutely_convergent;
        for (const Vec& z : s.certificate()->divergence_directions)
            cert.divergence_directions.push_back(apply(z).normalized());
        for (const Vec& y : s.certificate()->gamma_basis)
            cert.gamma_basis.push_back(apply(y));
        out = out.with_certificate(std::move(cert));
    }
    return out;
}

TermStream scale_stream(const TermStream& s, double lambda) {
    if (!(lambda > 0)) throw BadParams("scale factor must be positive");
    TermStream src = s;
    TermStream out(
        s.dim(), [src, lambda](std::uint64_t n) { return src.at(n) * lambda; },
        "scale(" + format_scalar(lambda) + ", " + s.description() + ")");
    if (s.certificate()) out = out.with_certificate(*s.certificate());
    return out;
}

TermStream replace_term(const TermStream& s, std::uint64_t index, const Vec& value) {
    if (value.norm() == 0.0) throw ZeroTermRejected("replacement term must be nonzero");
    TermStream src = s;
    TermStream out(
        s.dim(),
        [src, index, value](std::uint64_t n) { return n == index ? value : src.at(n); },
        s.description() + " [term " + std::to_string(index) + " replaced]");
    if (s.certificate()) out = out.with_certificate(*s.certificate());
    return out;
}

SeriesSpec load_spec(const std::string& text) {
    SeriesSpec spec;
    std::vector<Vec> cert_dirs, cert_gamma;
    std::optional<bool> cert_abs;
    bool has_cert = false;

    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        std::string line = raw;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ParseError("empty key", line_no);
        if (value.empty()) throw ParseError("empty value for '" + key + "'", line_no);
        try {
            if (key == "family") {
                spec.family = value;
            } else if (key == "certificate.absolutely_convergent") {
                if (value != "true" && value != "false")
                    throw BadParams("expected true/false");
                cert_abs = (value == "true");
                has_cert = true;
            } else if (key == "certificate.direction") {
                cert_dirs.push_back(parse_vector(value));
                has_cert = true;
            } else if (key == "certificate.gamma") {
                cert_gamma.push_back(parse_vector(value));
                has_cert = true;
            } else {
                spec.params.emplace_back(key, value);
            }
        } catch (const BadParams& e) {
            throw ParseError(std::string(e.what()) + " (key '" + key + "')", line_no);
        }
    }
    if (spec.family.empty()) throw ParseError("missing 'family' key", line_no);
    if (has_cert) {
        StructureCertificate cert;
        cert.divergence_directions = std::move(cert_dirs);
        cert.gamma_basis = std::move(cert_gamma);
        cert.absolutely_convergent = cert_abs.value_or(false);
        spec.certificate = std::move(cert);
    }
    return spec;
}

std::string serialize_spec(const SeriesSpec& spec) {
    std::string out = "family = " + spec.family + "\n";
    FamilyParams params = spec.params;
    std::stable_sort(params.begin(), params.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [k, v] : params) {
        std::string canon = v;
        try {
            canon = format_vector(parse_vector(v));
        } catch (const BadParams&) {
            // non-numeric values (nested family names) stay verbatim
        }
        out += k + " = " + canon + "\n";
    }
    if (spec.certificate) {
        const auto& c = *spec.certificate;
        out += std::string("certificate.absolutely_convergent = ") +
               (c.absolutely_convergent ? "true" : "false") + "\n";
        for (const Vec& d : c.divergence_directions)
            out += "certificate.direction = " + format_vector(d) + "\n";
        for (const Vec& g : c.gamma_basis)
            out += "certificate.gamma = " + format_vector(g) + "\n";
    }
    return out;
}

TermStream to_stream(const SeriesSpec& spec) {
    TermStream s = make_family(spec.family, spec.params);
    if (spec.certificate) s = s.with_certificate(*spec.certificate);
    return s;
}

}  // namespace sumrange
