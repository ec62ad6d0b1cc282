#include <doctest.h>

#include <cmath>

#include "sumrange/errors.hpp"
#include "sumrange/series.hpp"

using namespace sumrange;

TEST_CASE("scalar and vector literal parsing") {
    CHECK(parse_scalar("0.5") == 0.5);
    CHECK(parse_scalar("1/3") == doctest::Approx(1.0 / 3).epsilon(1e-15));
    CHECK(parse_scalar(" -2/4 ") == -0.5);
    CHECK_THROWS_AS((void)parse_scalar("abc"), BadParams);
    CHECK_THROWS_AS((void)parse_scalar("1/0"), BadParams);
    CHECK(parse_vector("1, 0")[0] == 1.0);
    CHECK(parse_vector("1/2,1/3").dim() == 2);
}

TEST_CASE("alternating_harmonic_dir terms and certificate") {
    TermStream s = builtin_family("alternating_harmonic_dir", {{"u", "1,0"}});
    auto p = prefix(s, 3);
    CHECK(p[0].approx_eq({-1, 0}, 1e-15));
    CHECK(p[1].approx_eq({0.5, 0}, 1e-15));
    CHECK(p[2].approx_eq({-1.0 / 3, 0}, 1e-15));
    REQUIRE(s.certificate().has_value());
    const auto& c = *s.certificate();
    CHECK(c.divergence_directions.size() == 2);
    CHECK(c.divergence_directions[0].approx_eq({1, 0}, 1e-12));
    CHECK(c.divergence_directions[1].approx_eq({-1, 0}, 1e-12));
    REQUIRE(c.gamma_basis.size() == 1);
    CHECK(c.gamma_basis[0].approx_eq({0, 1}, 1e-12));
    // declared gamma really annihilates: prefix mass is identically zero
    double mass = 0;
    for (std::uint64_t n = 1; n <= 100000; ++n) mass += std::abs(c.gamma_basis[0].dot(s.at(n)));
    CHECK(mass == 0.0);
}

TEST_CASE("geometric terms, certificate and sums") {
    TermStream s = builtin_family("geometric", {{"r", "1/2,1/3"}});
    auto p = prefix(s, 2);
    CHECK(p[0].approx_eq({0.5, 1.0 / 3}, 1e-15));
    CHECK(p[1].approx_eq({0.25, 1.0 / 9}, 1e-15));
    REQUIRE(s.certificate().has_value());
    CHECK(s.certificate()->absolutely_convergent);
    CHECK(s.certificate()->divergence_directions.empty());
    // documented prefix bound for the declared gamma: sum |r_i|^n <= 1
    for (const Vec& y : s.certificate()->gamma_basis) {
        double mass = 0;
        for (std::uint64_t n = 1; n <= 100000; ++n) mass += std::abs(y.dot(s.at(n)));
        CHECK(mass < 1.0 + 1e-12);
    }
    CHECK_THROWS_AS((void)builtin_family("geometric", {{"r", "1.5"}}), BadParams);
    CHECK_THROWS_AS((void)builtin_family("geometric", {{"r", "0,0"}}), ZeroTermRejected);
}

TEST_CASE("prefix basics") {
    TermStream s = builtin_family("geometric", {{"r", "1/2,1/3"}});
    CHECK(prefix(s, 0).empty());
}

TEST_CASE("interleaved_sum preserves directional structure") {
    TermStream s = builtin_family(
        "interleaved_sum",
        {{"a.family", "alternating_harmonic_dir"}, {"a.u", "1,0"},
         {"b.family", "geometric"}, {"b.r", "1/2,1/3"}});
    CHECK(s.at(1).approx_eq({-1, 0}, 1e-15));
    CHECK(s.at(2).approx_eq({0.5, 1.0 / 3}, 1e-15));
    CHECK(s.at(3).approx_eq({0.5, 0}, 1e-15));
    REQUIRE(s.certificate().has_value());
    const auto& c = *s.certificate();
    CHECK_FALSE(c.absolutely_convergent);
    REQUIRE(c.divergence_directions.size() == 2);
    REQUIRE(c.gamma_basis.size() == 1);
    CHECK(c.gamma_basis[0].approx_eq({0, 1}, 1e-12));
}

TEST_CASE("alt_harmonic_geometric preset") {
    TermStream s = make_alt_harmonic_geometric();
    CHECK(s.dim() == 2);
    CHECK(s.at(1).approx_eq({-1, 0.5}, 1e-15));
    CHECK(s.at(2).approx_eq({0.5, 0.25}, 1e-15));
    REQUIRE(s.certificate().has_value());
    // gamma basis e2 has prefix mass sum 2^-n < 1
    double mass = 0;
    for (std::uint64_t n = 1; n <= 200; ++n)
        mass += std::abs(s.certificate()->gamma_basis[0].dot(s.at(n)));
    CHECK(mass < 1.0 + 1e-12);
}

TEST_CASE("determinism: prefixes are bit-identical") {
    TermStream s = make_alt_harmonic_geometric();
    auto a = prefix(s, 10000);
    auto b = prefix(s, 10000);
    for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("custom_table strips zeros and keeps the original numbering") {
    TermStream s = builtin_family(
        "custom_table",
        {{"entry", "1,0"}, {"entry", "0,0"}, {"entry", "0,2"}, {"tail_ratio", "1/2"}});
    CHECK(s.at(1).approx_eq({1, 0}, 1e-15));
    CHECK(s.at(2).approx_eq({0, 2}, 1e-15));
    CHECK(s.at(3).approx_eq({0, 1}, 1e-15));  // tail: last entry halved
    CHECK(s.original_index(1) == 1);
    CHECK(s.original_index(2) == 3);
    CHECK(s.original_index(3) == 4);
    for (std::uint64_t n = 1; n < 50; ++n) CHECK(s.at(n).norm() > 0);
    CHECK_THROWS_AS(
        (void)builtin_family("custom_table", {{"entry", "0,0"}, {"entry", "0,0"}}),
        ZeroTermRejected);
}

TEST_CASE("unknown family and spec errors") {
    CHECK_THROWS_AS((void)builtin_family("nope", {}), UnknownFamily);
    CHECK_THROWS_AS((void)load_spec("family = geometric\nr 0.5\n"), ParseError);
    CHECK_THROWS_AS((void)load_spec("r = 0.5\n"), ParseError);
}

TEST_CASE("spec files round-trip through the canonical form") {
    std::string text =
        "# demo\n"
        "family = geometric\n"
        "r = 1/2, 0.3333   # ratios\n";
    SeriesSpec spec = load_spec(text);
    CHECK(spec.family == "geometric");
    TermStream s = to_stream(spec);
    CHECK(s.at(1)[0] == 0.5);

    std::string canon = serialize_spec(spec);
    SeriesSpec again = load_spec(canon);
    CHECK(load_spec(serialize_spec(again)) == again);
}

TEST_CASE("spec certificate block is attached verbatim") {
    std::string text =
        "family = alt_harmonic_geometric\n"
        "certificate.absolutely_convergent = false\n"
        "certificate.direction = 1,0\n"
        "certificate.direction = -1,0\n"
        "certificate.gamma = 0,1\n";
    SeriesSpec spec = load_spec(text);
    REQUIRE(spec.certificate.has_value());
    TermStream s = to_stream(spec);
    REQUIRE(s.certificate().has_value());
    CHECK(s.certificate()->divergence_directions.size() == 2);
    CHECK(s.certificate()->gamma_basis.size() == 1);
}

TEST_CASE("combinators: scale and linear keep certificates sound") {
    TermStream s = make_alt_harmonic_geometric();
    TermStream s3 = scale_stream(s, 3.0);
    CHECK(s3.at(4).approx_eq(s.at(4) * 3.0, 1e-15));
    CHECK(s3.certificate()->divergence_directions == s.certificate()->divergence_directions);

    // rotation by 45 degrees
    double c = std::sqrt(0.5);
    std::vector<Vec> q = {{c, c}, {-c, c}};
    TermStream sr = apply_linear(s, q);
    CHECK(sr.at(2).approx_eq({0.5 * c - 0.25 * c, 0.5 * c + 0.25 * c}, 1e-15));
    CHECK(sr.certificate()->divergence_directions[0].approx_eq({c, c}, 1e-12));

    TermStream sv = replace_term(s, 1, Vec{5, 5});
    CHECK(sv.at(1).approx_eq({5, 5}, 1e-15));
    CHECK(sv.at(2) == s.at(2));
    CHECK_THROWS_AS((void)replace_term(s, 1, Vec(2)), ZeroTermRejected);
}
