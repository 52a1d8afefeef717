#include <doctest.h>

// Fast-running versions of the condition-inclusion properties; the
// acceptance binary runs the same checks at full scale.

#include "matchkit/conditions.hpp"
#include "matchkit/oracle.hpp"
#include "matchkit/product_form.hpp"
#include "support.hpp"

using namespace matchkit;
using namespace fixtures;

TEST_CASE("ncond of the maximal subgraph is contained in ncond") {
    for (int n = 2; n <= 4; ++n) {
        auto family = all_connected_multigraphs(n);
        auto grid = grid_measures(n, 10);
        auto outcome = exhaustive_condition_check(family, [&](const MatchingStructure& g)
                                                              -> std::optional<std::string> {
            if (g.v1().empty()) return std::nullopt;
            auto check = maximal_subgraph(g);
            for (const auto& m : grid) {
                if (in_ncond(check, m).holds && !in_ncond(g, m).holds)
                    return "inclusion violated on " + std::to_string(n) + " nodes";
            }
            return std::nullopt;
        });
        CHECK(outcome.passed);
    }
}

TEST_CASE("half-split extension preserves ncond exactly") {
    // Scope: at least one node without a self-loop.  When every node is
    // looped, the copies of the whole node set form an independent set of
    // the blow-up whose constraint the half split meets with equality, so
    // the extended measure sits exactly on the Ncond boundary.
    for (int n = 2; n <= 4; ++n) {
        auto family = all_connected_multigraphs(n);
        auto grid = grid_measures(n, 10);
        auto outcome = exhaustive_condition_check(family, [&](const MatchingStructure& g)
                                                              -> std::optional<std::string> {
            if (g.v1().empty()) return std::nullopt;
            auto blow = minimal_blowup(g);
            for (const auto& m : grid) {
                auto half = extend_measure_half(g, m);
                auto hat = in_ncond(blow, half);
                if (g.v2().empty()) {
                    if (!hat.boundary) return "finite model not on the boundary";
                    continue;
                }
                if (in_ncond(g, m).holds != hat.holds)
                    return "half-split equivalence violated";
            }
            return std::nullopt;
        });
        CHECK(outcome.passed);
    }
}

TEST_CASE("ncond is empty exactly for bipartite graphs") {
    for (int n = 2; n <= 4; ++n) {
        auto family = all_connected_multigraphs(n);
        auto grid = grid_measures(n, 20);
        auto outcome = exhaustive_condition_check(family, [&](const MatchingStructure& g)
                                                              -> std::optional<std::string> {
            bool bip = is_bipartite_graph(g);
            auto found = find_ncond_measure(g);
            if (bip && found) return "found a measure on a bipartite graph";
            if (!bip && !found) return "no measure exhibited on a non-bipartite structure";
            if (found && !in_ncond(g, *found).holds) return "exhibited measure fails";
            if (bip) {
                for (const auto& m : grid)
                    if (in_ncond(g, m).holds) return "grid point inside ncond on bipartite";
            }
            return std::nullopt;
        });
        CHECK(outcome.passed);
    }
}

TEST_CASE("n1 is included in n1+ and n1++") {
    auto family = all_connected_3uniform(4);
    auto more = all_connected_3uniform(5);
    family.insert(family.end(), more.begin(), more.end());
    CounterRng rng(2718, 1);
    for (int t = 0; t < 30; ++t) family.push_back(random_hypergraph(rng, 6));

    auto outcome = exhaustive_condition_check(family, [&](const MatchingStructure& h)
                                                          -> std::optional<std::string> {
        for (const auto& m : grid_measures(h.order(), 10)) {
            if (in_n1_family(h, m, N1Variant::n1).holds) {
                if (!in_n1_family(h, m, N1Variant::n1_plus).holds)
                    return "n1 not inside n1+";
                if (!in_n1_family(h, m, N1Variant::n1_plus_plus).holds)
                    return "n1 not inside n1++";
            }
        }
        return std::nullopt;
    });
    CHECK(outcome.passed);
    CHECK(outcome.instances > 100);
}

TEST_CASE("the two comparison regions are not nested") {
    // stable for the pairwise model, unstable for the triplet model
    auto a = Measure::probability({0.25, 0.35, 0.2, 0.2});
    CHECK(three_partite_in_ncond(a));
    CHECK(a.max_weight() >= 1.0 / 3);

    // and the other way around
    auto b = Measure::probability({0.3, 0.2, 0.2, 0.3});
    CHECK_FALSE(three_partite_in_ncond(b));
    CHECK(b.max_weight() < 1.0 / 3);
}

TEST_CASE("intersection of the two stability regions") {
    auto h = complete_3uniform(4);
    for (const auto& m : grid_measures(4, 20)) {
        bool two = three_partite_in_ncond(m);
        bool three = in_n3(h, m, true).holds;
        bool intersect_formula = true;
        for (int i = 0; i < 4; ++i)
            if (m(i) >= 1.0 / 3 - kConditionTol) intersect_formula = false;
        if (m(0) + m(3) >= 0.5 - kConditionTol) intersect_formula = false;
        CHECK((two && three) == intersect_formula);
    }
}
