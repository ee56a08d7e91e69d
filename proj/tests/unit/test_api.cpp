#include <doctest.h>

#include <cmath>

#include "bnet/api.hpp"
#include "bnet/curriculum.hpp"
#include "bnet/model_io.hpp"
#include "fixtures.hpp"

using namespace bnet;
using namespace bnet::api;

namespace {

Handler two_node_handler() { return Handler(load_model(testing::kTwoNodeDocument)); }

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::usage_error;
}

}  // namespace

TEST_CASE("render: fixed decimals, insertion order, compact") {
    ordered_json doc = ordered_json::object();
    doc["z"] = 0.8709677419354839;
    doc["a"] = 1;
    doc["neg"] = -1e-9;
    doc["s"] = "x\"y";
    doc["arr"] = ordered_json::array({0.5, true, nullptr});
    CHECK(render(doc) == R"({"z":0.870968,"a":1,"neg":0.000000,"s":"x\"y","arr":[0.500000,true,null]})");
    CHECK(render(doc, 2) == R"({"z":0.87,"a":1,"neg":0.00,"s":"x\"y","arr":[0.50,true,null]})");
    CHECK(render(ordered_json(0.1), 17) == "0.10000000000000001");
    CHECK(render(ordered_json(std::nan("")), 6) == "null");
    CHECK(code_of([&] { render(doc, 18); }) == ErrorCode::usage_error);
}

TEST_CASE("error codes map to exit codes and HTTP statuses") {
    CHECK(exit_code(ErrorCode::usage_error) == 1);
    CHECK(exit_code(ErrorCode::parse_error) == 2);
    CHECK(exit_code(ErrorCode::schema_error) == 2);
    CHECK(exit_code(ErrorCode::validation_error) == 2);
    CHECK(exit_code(ErrorCode::unknown_symbol) == 2);
    CHECK(exit_code(ErrorCode::impossible_evidence) == 3);
    CHECK(exit_code(ErrorCode::degenerate_baseline) == 3);
    CHECK(exit_code(ErrorCode::size_limit) == 4);
    CHECK(http_status(ErrorCode::degenerate_baseline) == 422);
    CHECK(http_status(ErrorCode::impossible_evidence) == 422);
    CHECK(http_status(ErrorCode::size_limit) == 413);
    CHECK(http_status(ErrorCode::unknown_symbol) == 400);

    Error err(ErrorCode::unknown_symbol, "unknown state 'bogus' of 'X'", "X=bogus");
    CHECK(render(error_body(err)) ==
          R"({"error":{"code":"unknown_symbol","message":"unknown state 'bogus' of 'X'","locus":"X=bogus"}})");
}

TEST_CASE("text parsers") {
    auto e = parse_evidence("X=t,Y=f");
    CHECK(e.size() == 2);
    CHECK(*e.find("Y") == "f");
    CHECK(parse_evidence("").empty());
    CHECK(code_of([] { parse_evidence("X"); }) == ErrorCode::usage_error);
    CHECK(code_of([] { parse_evidence("X=t,X=f"); }) == ErrorCode::usage_error);
    CHECK(code_of([] { parse_evidence("=t"); }) == ErrorCode::usage_error);

    auto t = parse_target("RecL=approved");
    CHECK(t.variable == "RecL");
    CHECK(t.state == "approved");

    CHECK(parse_names("G,RecL") == std::vector<std::string>{"G", "RecL"});
    CHECK(code_of([] { parse_names("G,,RecL"); }) == ErrorCode::usage_error);

    auto s = parse_scenarios("NumC=few;NumC=many,A=high;");
    REQUIRE(s.size() == 3);
    CHECK(s[1].size() == 2);
    CHECK(s[2].empty());

    CHECK(code_of([] { parse_request("{"); }) == ErrorCode::parse_error);
}

TEST_CASE("Handler endpoints on the two-node model") {
    auto h = two_node_handler();
    CHECK(render(h.infer(json::parse(R"({"evidence":{"Y":"t"},"query":"X"})"))) ==
          R"({"X":{"t":0.870968,"f":0.129032}})");
    CHECK(render(h.likelihood(json::parse(R"({"evidence":{"Y":"t"}})"))) == R"({"likelihood":0.620000})");
    CHECK(render(h.joint(json::parse(R"({"assignment":{"Y":"f","X":"t"}})"))) == R"({"probability":0.060000})");
    CHECK(render(h.map(json::parse(R"({"evidence":{"Y":"t"},"vars":["X"]})"))) ==
          R"({"mode":"map","assignment":{"X":"t"},"probability":0.870968})");
    CHECK(render(h.map(json::parse(R"({"evidence":{"Y":"t"},"vars":"X","mode":"ml"})"))) ==
          R"({"mode":"ml","assignment":{"X":"t"},"probability":0.870968})");
    CHECK(render(h.impact(json::parse(R"({"target":"Y=t"})"))) ==
          R"([{"influencer":"X","level":-1.875843,"achieving_state":"f","magnitude":1.875843,"mutual_information":0.268853}])");
    CHECK(render(h.impact(json::parse(R"({"target":{"variable":"Y","state":"t"},"evidence":{}})"))) ==
          render(h.impact(json::parse(R"({"target":"Y=t"})"))));
}

TEST_CASE("Handler request validation") {
    auto h = two_node_handler();
    CHECK(code_of([&] { h.infer(json::parse(R"({"query":"X","extra":1})")); }) == ErrorCode::schema_error);
    CHECK(code_of([&] { h.infer(json::parse(R"({"evidence":{}})")); }) == ErrorCode::schema_error);
    CHECK(code_of([&] { h.infer(json::parse(R"({"evidence":{"Y":1},"query":"X"})")); }) == ErrorCode::schema_error);
    CHECK(code_of([&] { h.infer(json::parse(R"({"evidence":{"X":"bogus"},"query":"Y"})")); }) ==
          ErrorCode::unknown_symbol);
    CHECK(code_of([&] { h.map(json::parse(R"({"vars":["X"],"mode":"best"})")); }) == ErrorCode::usage_error);
    CHECK(code_of([&] { h.joint(json::parse(R"({"assignment":{"X":"t"}})")); }) == ErrorCode::usage_error);
    CHECK(code_of([&] { h.impact(json::parse(R"({"target":"Y=t","evidence":{"Y":"t"}})")); }) ==
          ErrorCode::degenerate_baseline);
    CHECK(code_of([&] { h.dispatch("nope", json::object()); }) == ErrorCode::usage_error);
}

TEST_CASE("Handler plan and whatif on the bundled model") {
    Handler h(curriculum::build_default_model());
    auto plan = h.plan(json::parse(R"({"profile":{"Pub":"yes","AG":"A"}})"));
    CHECK(plan["profile"].dump() == R"({"AG":"A","Pub":"yes"})");
    CHECK(plan["outcomes"].size() == 3);
    CHECK(plan["outcomes"].contains("Satisfaction"));

    auto direct = curriculum::evaluate_plan(h.network(), curriculum::StudentProfile(Evidence{{"Pub", "yes"}, {"AG", "A"}}));
    CHECK(plan["success_score"].get<double>() == direct.success_score);

    auto weighted = h.plan(json::parse(R"({"profile":{},"weights":{"grade":1}})"));
    CHECK(weighted["success_score"].get<double>() == weighted["outcomes"]["G"]["A"].get<double>());
    CHECK(code_of([&] { h.plan(json::parse(R"({"profile":{"G":"A"}})")); }) == ErrorCode::usage_error);
    CHECK(code_of([&] { h.plan(json::parse(R"({"profile":{},"weights":{"grade":0.5}})")); }) ==
          ErrorCode::usage_error);

    auto whatif = h.whatif(json::parse(R"({"profile":{"AG":"B"},"scenarios":[{"NumC":"many"},{"NumC":"few"}]})"));
    REQUIRE(whatif.size() == 2);
    CHECK(whatif[0]["scenario"]["NumC"] == "few");
    CHECK(whatif[0]["report"]["profile"].dump() == R"({"AG":"B","NumC":"few"})");
    CHECK(code_of([&] { h.whatif(json::parse(R"({"profile":{},"scenarios":[{"S":"active"}]})")); }) ==
          ErrorCode::usage_error);
}

TEST_CASE("validation_report_json") {
    NetworkDefinition def;
    def.structure.variables = {testing::binary_var("X")};
    def.cpts = {{"X", {}, {{0.5, 0.4}}}};
    auto doc = validation_report_json(validate_network(def));
    CHECK(render(doc) ==
          R"({"valid":false,"violations":[{"kind":"row_sum","locus":"X[0]","message":")" +
              validate_network(def).violations[0].message + R"(","residual":0.100000}]})");
    CHECK(render(validation_report_json(ValidationReport{})) == R"({"valid":true,"violations":[]})");
}
