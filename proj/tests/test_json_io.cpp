#include <doctest.h>

#include "matchkit/json_io.hpp"
#include "support.hpp"

using namespace matchkit;
using namespace fixtures;

TEST_CASE("structure round trip") {
    auto j = json::parse(R"({"nodes":["1","2","3"],
                             "edges":[["1","2"],["2","3"],["3"]]})");
    auto s = structure_from_json(j);
    CHECK(s.order() == 3);
    CHECK(s.kind() == StructureKind::multigraph);

    auto back = structure_to_json(s);
    auto s2 = structure_from_json(back);
    CHECK(s2.order() == s.order());
    CHECK(s2.edge_count() == s.edge_count());
    CHECK(back.at("kind") == "multigraph");
}

TEST_CASE("parser rejects malformed structures") {
    CHECK_THROWS_AS(
        structure_from_json(json::parse(R"({"nodes":["1"],"edges":[["1","2"]]})")),
        input_error);
    CHECK_THROWS_AS(
        structure_from_json(json::parse(
            R"({"nodes":["1","2"],"edges":[["1","2"],["2","1"]]})")),
        input_error);
    CHECK_THROWS_AS(structure_from_json(json::parse(R"({"nodes":["1","2"]})")),
                    input_error);
}

TEST_CASE("measure round trip: nested and flat forms") {
    auto s = string_with_loop3();
    auto nested = json::parse(
        R"({"mode":"probability","weights":{"1":0.2,"2":0.45,"3":0.35}})");
    auto m1 = measure_from_json(nested, s);
    CHECK(m1(1) == 0.45);

    auto flat = json::parse(R"({"mode":"intensity","1":1.0,"2":2.0,"3":0.5})");
    auto m2 = measure_from_json(flat, s);
    CHECK(m2.mode() == MeasureMode::intensity);
    CHECK(m2(2) == 0.5);

    auto back = measure_to_json(m1, s);
    auto m3 = measure_from_json(back, s);
    for (int i = 0; i < 3; ++i) CHECK(m3(i) == m1(i));

    CHECK_THROWS_AS(
        measure_from_json(json::parse(R"({"weights":{"1":0.5,"2":0.5}})"), s),
        input_error);
}

TEST_CASE("policy round trip") {
    auto s = pendant_with_loop("2");

    auto mw = json::parse(
        R"({"type":"max_weight","beta":1.5,
            "rewards":{"1,2":0.0,"2,3":1.0,"2,4":2.0,"3,4":0.5,"2":0.25}})");
    auto p = policy_from_json(mw, s);
    CHECK(p.variant == PolicyVariant::max_weight);
    CHECK(p.beta == 1.5);
    auto back = policy_to_json(p, s);
    auto p2 = policy_from_json(back, s);
    CHECK(p2.rewards == p.rewards);

    auto prio = json::parse(R"({"type":"priority","orders":{"2":[3,1,2,0]}})");
    auto pp = policy_from_json(prio, s);
    CHECK(pp.priority_orders.at("2") == std::vector<int>{3, 1, 2, 0});

    auto v2 = json::parse(R"({"type":"v2_favorable","inner":{"type":"match_longest"}})");
    auto pv = policy_from_json(v2, s);
    REQUIRE(pv.inner != nullptr);
    CHECK(pv.inner->variant == PolicyVariant::match_longest);
    auto back2 = policy_to_json(pv, s);
    CHECK(policy_from_json(back2, s).inner->variant == PolicyVariant::match_longest);

    CHECK_THROWS_AS(policy_from_json(json::parse(R"({"type":"uh"})"), s), input_error);
}

TEST_CASE("condition report serialization") {
    auto g = three_partite_graph();
    auto r = in_ncond(g, Measure::probability({0.30, 0.20, 0.20, 0.30}));
    auto j = condition_report_to_json(r, g);
    CHECK(j.at("holds") == false);
    CHECK(j.at("witness")[0] == json::array({"1", "4"}));
    // round-trip through text stays parseable
    auto reparsed = json::parse(j.dump());
    CHECK(reparsed.at("margin").get<double>() == r.margin);
}

TEST_CASE("digest is stable") {
    CHECK(digest_hex("matchkit") == digest_hex("matchkit"));
    CHECK(digest_hex("a") != digest_hex("b"));
    CHECK(digest_hex("x").size() == 16);
}
