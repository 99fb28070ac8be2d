#include <algorithm>
#include <map>
#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "wirelab/recycle.hpp"

using namespace wirelab;

TEST_CASE("the cnot chain recycles qubit 2 onto wire 0") {
    Circuit c = testutil::example2_circuit();
    ReachMatrix m = analyze(c);
    RecyclePlan plan = plan_recycling(m, c);

    const bool has_2_to_0 = std::any_of(plan.pairs.begin(), plan.pairs.end(), [](const RecyclePair& p) {
        return p.init_wire == "2" && p.target_wire == "0";
    });
    CHECK(has_2_to_0);
    CHECK(plan.predicted_wire_count == 4 - plan.pairs.size());

    SUBCASE("applying just that pair rewrites the references lazily") {
        RecyclePlan one;
        one.pairs = {{"2", "0"}};
        Circuit rec = c;
        apply_recycling(rec, one);
        CHECK(rec.ops.size() == c.ops.size());
        CHECK(rec.wire_count() == 3);

        const std::string text = serialize_circuit(flush(rec));
        CHECK(text ==
              "init 0 0\n"
              "init 1 0\n"
              "init 3 0\n"
              "cnot 0 1\n"
              "measure 0 Z\n"
              "init 0 0\n"
              "cnot 1 0\n"
              "cnot 0 3\n"
              "measure 0 Z\n"
              "measure 1 Z\n"
              "measure 3 Z\n");
        // cnot 1 2 became cnot 1 0, cnot 2 3 became cnot 0 3, meas 2 became meas 0
        CHECK(text.find("cnot 1 0") != std::string::npos);
        CHECK(text.find("cnot 0 3") != std::string::npos);
        CHECK(text.find(" 2") == std::string::npos);

        auto report = validate_recycled(c, m, one, rec);
        CHECK(report.pass);
    }
}

TEST_CASE("nothing recyclable means an empty plan and an untouched circuit") {
    // every init reaches every output through the cnot pair
    Circuit c = parse_circuit("init a 0\ninit b 0\ncnot a b\ncnot b a\nmeasure a Z\nmeasure b Z\n");
    ReachMatrix m = analyze(c);
    RecyclePlan plan = plan_recycling(m, c);
    CHECK(plan.pairs.empty());
    CHECK(plan.predicted_wire_count == 2);

    const std::string before = serialize_circuit(c);
    apply_recycling(c, plan);
    CHECK(serialize_circuit(c) == before);
}

TEST_CASE("adder recycling removes exactly plan-size wires and validates") {
    Circuit add4 = generate_adder(4);
    decompose_toffoli(add4);
    to_icm(add4);
    Circuit icm = flush(add4);

    ReachMatrix m = analyze(icm);
    RecyclePlan plan = plan_recycling(m, icm);
    CHECK(!plan.pairs.empty());

    Circuit rec = icm;
    apply_recycling(rec, plan);
    CHECK(rec.wire_count() == icm.wire_count() - plan.pairs.size());
    CHECK(rec.wire_count() == plan.predicted_wire_count);
    CHECK(rec.ops.size() == icm.ops.size());

    auto report = validate_recycled(icm, m, plan, rec);
    CHECK(report.pass);
    if (!report.pass) {
        for (const auto& v : report.violations) MESSAGE(v);
    }
}

TEST_CASE("validation flags a pair that contradicts the matrix") {
    Circuit c = testutil::example2_circuit();
    ReachMatrix m = analyze(c);
    RecyclePlan bad;
    bad.pairs = {{"0", "3"}};  // init 0 reaches output 3
    auto report = validate_recycled(c, m, bad, c);
    CHECK_FALSE(report.pass);
    REQUIRE(!report.violations.empty());
    CHECK(report.violations[0].find("(c)") != std::string::npos);
}

TEST_CASE("apply rejects plans that do not fit the circuit") {
    Circuit c = testutil::example2_circuit();
    SUBCASE("unknown wire") {
        RecyclePlan plan;
        plan.pairs = {{"nope", "0"}};
        CHECK_THROWS_AS(apply_recycling(c, plan), RecycleError);
    }
    SUBCASE("cycle through two mutual joins") {
        RecyclePlan plan;
        plan.pairs = {{"3", "0"}, {"0", "3"}};
        CHECK_THROWS_AS(apply_recycling(c, plan), RecycleError);
    }
    SUBCASE("headless wires cannot be recycled away") {
        Circuit h = parse_circuit("h a\nmeasure a Z\ninit b 0\nmeasure b Z\n");
        RecyclePlan plan;
        plan.pairs = {{"a", "b"}};
        CHECK_THROWS_AS(apply_recycling(h, plan), RecycleError);
    }
}

TEST_CASE("planning is deterministic") {
    Circuit add = generate_adder(3);
    decompose_toffoli(add);
    to_icm(add);
    Circuit icm = flush(add);
    ReachMatrix m = analyze(icm);
    RecyclePlan a = plan_recycling(m, icm);
    RecyclePlan b = plan_recycling(m, icm);
    REQUIRE(a.pairs.size() == b.pairs.size());
    for (std::size_t i = 0; i < a.pairs.size(); ++i) {
        CHECK(a.pairs[i].init_wire == b.pairs[i].init_wire);
        CHECK(a.pairs[i].target_wire == b.pairs[i].target_wire);
    }
}

TEST_CASE("plans export as csv pairs") {
    RecyclePlan plan;
    plan.pairs = {{"w3", "q0"}, {"w5", "q1"}};
    CHECK(plan.to_csv() == "init_wire,target_wire\nw3,q0\nw5,q1\n");
}

TEST_CASE("random plan applications keep every guarantee") {
    std::mt19937 rng(53);
    int applied = 0;
    for (int i = 0; i < 500; ++i) {
        Circuit c = parse_circuit(testutil::random_circuit_text(rng, 24, 96));
        decompose_toffoli(c);
        to_icm(c);
        Circuit icm = flush(c);
        ReachMatrix m = analyze(icm);
        RecyclePlan plan = plan_recycling(m, icm);
        Circuit rec = icm;
        apply_recycling(rec, plan);
        applied += static_cast<int>(plan.pairs.size());

        // wire arithmetic and op multiset preservation
        REQUIRE(rec.wire_count() == icm.wire_count() - plan.pairs.size());
        REQUIRE(rec.ops.size() == icm.ops.size());
        std::map<GateId, std::size_t> seen;
        for (const Operation& op : rec.ops) ++seen[op.id];
        for (const Operation& op : icm.ops) {
            REQUIRE(seen[op.id] == 1);
        }

        // full validation: patterns, per-qubit order, matrix safety
        auto report = validate_recycled(icm, m, plan, rec);
        if (!report.pass) {
            for (const auto& v : report.violations) MESSAGE(v);
        }
        REQUIRE(report.pass);

        // safety invariant spelled out: applied pairs have a zero matrix bit
        for (const RecyclePair& p : plan.pairs) {
            REQUIRE_FALSE(m.reaches(p.init_wire, p.target_wire));
        }
    }
    CHECK(applied > 100);  // the harness actually exercises recycling
}
