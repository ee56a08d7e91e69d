#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "bnet/curriculum.hpp"
#include "bnet/model_io.hpp"
#include "fixtures.hpp"
#include "random_nets.hpp"

using namespace bnet;

namespace {

ErrorCode code_of(std::string_view doc) {
    try {
        load_model(doc);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::usage_error;
}

}  // namespace

TEST_CASE("bundled model file loads as the 9-variable curriculum network") {
    auto net = load_model_file(std::filesystem::path(BNET_SOURCE_DIR) / "models" / "curriculum.default.json");
    CHECK(net.size() == 9);
    CHECK(net.cpt(net.index_of("AG")).rows[0] == std::vector<double>{0.41, 0.30, 0.29});
    CHECK(net == curriculum::default_model());
    CHECK(net.description().find("llustrative") != std::string::npos);
}

TEST_CASE("minimal one-variable document") {
    auto net = load_model(R"({"name":"m","variables":[{"name":"X","states":["a","b"]}],
        "cpts":[{"child":"X","parents":[],"rows":[[0.5,0.5]]}]})");
    CHECK(net.size() == 1);
    CHECK(net.name() == "m");
    CHECK(net.structure().edges.empty());
}

TEST_CASE("undeclared parent is a schema error naming the parent") {
    try {
        load_model(R"({"name":"m","variables":[{"name":"X","states":["a","b"]}],
            "cpts":[{"child":"X","parents":["Ghost"],"rows":[[0.5,0.5],[0.5,0.5]]}]})");
        FAIL("expected schema_error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::schema_error);
        CHECK(e.locus() == "Ghost");
        CHECK(std::string(e.what()).find("Ghost") != std::string::npos);
    }
}

TEST_CASE("document errors map to parse, schema and validation codes") {
    CHECK(code_of("{\"name\": ") == ErrorCode::parse_error);
    CHECK(code_of("[]") == ErrorCode::schema_error);
    CHECK(code_of(R"({"name":"m","variables":[],"cpts":[],"extra":1})") == ErrorCode::schema_error);
    CHECK(code_of(R"({"name":"m","variables":[{"name":"X","states":["a","b"]}]})") == ErrorCode::schema_error);
    CHECK(code_of(R"({"name":"m","variables":[{"name":"X","states":["a","b"]}],
        "cpts":[{"child":"X","parents":[],"rows":[["0.5",0.5]]}]})") == ErrorCode::schema_error);
    CHECK(code_of(R"({"name":"m","variables":[{"name":"X","states":["a","b"]}],
        "cpts":[{"child":"Y","parents":[],"rows":[[0.5,0.5]]}]})") == ErrorCode::schema_error);
    CHECK(code_of(R"({"name":"m","variables":[{"name":"X","states":["a","b"]}],
        "cpts":[{"child":"X","parents":[],"rows":[[0.5,0.4]]}]})") == ErrorCode::validation_error);
    CHECK(code_of(R"({"name":"m","variables":[{"name":"X","states":["a","b"]}],
        "cpts":[{"child":"X","parents":[]}]})") == ErrorCode::schema_error);
}

TEST_CASE("parse_error carries a byte offset locus") {
    try {
        load_model("{\"name\": \"m\",,}");
        FAIL("expected parse_error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parse_error);
        CHECK_FALSE(e.locus().empty());
    }
}

TEST_CASE("structure documents may omit rows") {
    auto s = load_structure(R"({"name":"s","variables":[{"name":"X","states":["t","f"]},
        {"name":"Y","states":["t","f"]}],"cpts":[{"child":"Y","parents":["X"]}]})");
    CHECK(s.variables.size() == 2);
    REQUIRE(s.edges.size() == 1);
    CHECK(s.edges[0] == Edge{"X", "Y"});
    CHECK(s.parents_of("Y") == std::vector<std::string>{"X"});
}

TEST_CASE("save_model/load_model round-trip compares equal") {
    SUBCASE("two-node") {
        auto net = testing::two_node();
        auto text = save_model(net);
        CHECK(load_model(text) == net);
        CHECK(save_model(load_model(text)) == text);
    }
    SUBCASE("bundled model reproduces its file byte for byte") {
        CHECK(save_model(curriculum::default_model()) == curriculum::default_model_document());
    }
    SUBCASE("property: random networks") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 100; ++trial) {
            auto net = testing::random_network(rng);
            auto loaded = load_model(save_model(net));
            CHECK(loaded == net);
            for (std::size_t i = 0; i < net.size(); ++i)
                CHECK(loaded.cpt(i).rows == net.cpt(i).rows);
        }
    }
}

TEST_CASE("read_text_file reports unreadable paths as usage errors") {
    try {
        read_text_file("/nonexistent/model.json");
        FAIL("expected usage_error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::usage_error);
    }
}
