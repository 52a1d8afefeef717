#include <doctest.h>

#include <cmath>

#include "matchkit/lyapunov.hpp"
#include "support.hpp"

using namespace matchkit;
using namespace fixtures;

TEST_CASE("ratio bound values") {
    CHECK(lyapunov_ratio_bound(5) ==
          doctest::Approx(std::pow(372.0 / 224.0, 0.25)).epsilon(1e-12));
    for (int q = 5; q <= 12; ++q) CHECK(lyapunov_ratio_bound(q) > 1.0);
}

TEST_CASE("shape validation") {
    CHECK_THROWS_AS(lyapunov_coefficients(complete_3uniform(4), Measure::uniform(4)),
                    unsupported_kind_error);
    // two overlapping removed triples are rejected
    auto bad = complete_3uniform(6, {{"1", "2", "3"}, {"3", "4", "5"}});
    CHECK_THROWS_AS(lyapunov_coefficients(bad, Measure::uniform(6)),
                    unsupported_kind_error);
    // a graph is rejected
    CHECK_THROWS_AS(lyapunov_coefficients(three_partite_graph(), Measure::uniform(4)),
                    unsupported_kind_error);
}

TEST_CASE("incomplete order-5 structure under the uniform measure") {
    auto h = complete_3uniform(5, {{"1", "2", "3"}});
    auto t = lyapunov_coefficients(h, Measure::uniform(5));

    CHECK(t.removed.size() == 1);
    CHECK(t.lambda_i.size() == 2); // nodes 4, 5
    CHECK(t.nu_i.size() == 3);     // nodes 1, 2, 3
    for (const auto& [k, v] : t.lambda_i) CHECK(v.first < 0);
    for (const auto& [k, v] : t.nu_i) CHECK(v.first < 0);

    CHECK(t.n2);
    CHECK(t.n3_strict);
    CHECK(t.in_s);
    CHECK(t.in_s1);
    CHECK(t.ratio == doctest::Approx(1.0));

    // pairwise coefficients are negative whenever n2 holds
    for (const auto& [k, v] : t.lambda_ij) CHECK(v < 0);
    for (const auto& [k, v] : t.nu_ij) CHECK(v < 0);
    // removed-edge coefficients: major negative, minor positive
    for (const auto& [k, v] : t.alpha_major) CHECK(v < 0);
    for (const auto& [k, v] : t.alpha_minor) CHECK(v > 0);
}

TEST_CASE("pairwise closed form") {
    auto h = complete_3uniform(5, {{"1", "2", "3"}});
    auto mu = Measure::probability({0.18, 0.22, 0.2, 0.21, 0.19});
    auto t = lyapunov_coefficients(h, mu);
    // lambda_45 = 2(mu4 - (mu1+mu2+mu3))
    CHECK(t.lambda_ij.at("4,5") ==
          doctest::Approx(2 * (0.21 - (0.18 + 0.22 + 0.2))));
    // nu_12 = 2(mu1 - (mu4+mu5)) for the removed edge {1,2,3}
    CHECK(t.nu_ij.at("1,2") == doctest::Approx(2 * (0.18 - (0.21 + 0.19))));
    CHECK(t.alpha_major.at("1,2,3:1") == doctest::Approx(2 * (0.18 - 0.4)));
    CHECK(t.alpha_minor.at("1,2,3:3") == doctest::Approx(2 * 0.2));
}

TEST_CASE("complete structures produce symmetric drifts") {
    auto h = complete_3uniform(5);
    auto t = lyapunov_coefficients(h, Measure::uniform(5));
    CHECK(t.nu_i.empty());
    REQUIRE(t.lambda_i.size() == 5);
    double first = t.lambda_i.begin()->second.first;
    for (const auto& [k, v] : t.lambda_i)
        CHECK(v.first == doctest::Approx(first).epsilon(1e-12));
    // frozen from an independent evaluation of the per-term expansion at
    // the uniform point (unordered-pair index conventions)
    CHECK(first == doctest::Approx(-0.7808).epsilon(1e-12));
}

TEST_CASE("exact drift matches a Monte-Carlo probe") {
    auto h = complete_3uniform(5, {{"1", "2", "3"}});
    auto mu = Measure::uniform(5);
    // frozen slopes: node 1 sits in a removed edge, node 4 does not
    auto nu1 = embedded_drift_affine(h, mu, h.index_of("1"));
    auto la4 = embedded_drift_affine(h, mu, h.index_of("4"));
    CHECK(nu1.first == doctest::Approx(-0.4736).epsilon(1e-12));
    CHECK(la4.first == doctest::Approx(-0.7808).epsilon(1e-12));

    for (const std::string node : {"1", "4"}) {
        int idx = h.index_of(node);
        auto [slope, intercept] = embedded_drift_affine(h, mu, idx);
        int level = 20;
        double exact = slope * level + intercept;
        double mc = embedded_drift_mc(h, mu, idx, level, 500'000, 991);
        CHECK(std::fabs(mc - exact) < 0.2); // ~2.5 s.e.
        CHECK(mc < 0); // sign agreement at a high level
    }
}

TEST_CASE("a lopsided measure leaves the sufficient region") {
    auto h = complete_3uniform(5, {{"1", "2", "3"}});
    // ratio 1.6 exceeds f(5) ~ 1.135
    auto mu = Measure::probability({0.16, 0.16, 0.16, 0.26, 0.26});
    auto t = lyapunov_coefficients(h, mu);
    CHECK(t.ratio > t.ratio_bound);
    CHECK_FALSE(t.in_s1);
}
