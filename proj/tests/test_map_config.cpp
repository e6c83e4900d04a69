#include "doctest.h"
#include "torusfactor/common.hpp"
#include "torusfactor/map_config.hpp"

using namespace torusfactor;

TEST_CASE("circle definitions") {
    CHECK(parse_circle(R"({"kind":"rigid","alpha":0.25})").eval(0.1) == doctest::Approx(0.35));
    CircleLift d = parse_circle(R"({"kind":"denjoy","alpha":"golden","order":10})");
    CHECK(d.kind() == CircleKind::DenjoyTruncated);
    CHECK(d.gaps().order == 10);
    CHECK(parse_circle(R"({"kind":"piecewise","knots":[[0.1,0.2],[0.6,0.9]]})").eval(0.1) == doctest::Approx(0.2));
    CHECK_THROWS_AS(parse_circle(R"({"kind":"denjoy","alpha":"pi"})"), DomainError);
    CHECK_THROWS_AS(parse_circle(R"({"kind":"spiral"})"), DomainError);
}

TEST_CASE("torus definitions") {
    MapDefinition r = parse_map(R"({"kind":"rigid","alpha":0.1,"beta":0.2})");
    REQUIRE(r.rotation_target);
    CHECK(r.rotation_target->y == doctest::Approx(0.2));
    CHECK(parse_map(R"({"kind":"dehn","k":2})").map.k() == 2);
    MapDefinition s = parse_map(R"({"kind":"suspension","g1":{"kind":"rigid","alpha":0.5},"g2":{"kind":"rigid","alpha":0.25}})");
    CHECK(s.rotation_target->y == doctest::Approx(0.125));
    MapDefinition c = parse_map(R"({"kind":"composed","defs":{"t":{"kind":"dehn","k":1}},
        "chain":["t",{"kind":"disk-push","center0":[0.5,0.5],"center1":[0.51,0.5],"radius":0.05},"t"]})");
    CHECK(c.map.k() == 2);
    CHECK(parse_map(R"({"kind":"gallery","id":"3.2"})").map.kind() == TorusKind::Composed);
    CHECK(parse_map(R"({"kind":"dehn","k":2})").canonical == R"({"k":2,"kind":"dehn"})");
}

TEST_CASE("malformed definitions are rejected") {
    CHECK_THROWS_AS(parse_map("{"), DomainError);
    CHECK_THROWS_AS(parse_map(R"({"kind":"rigid","alpha":0.1})"), DomainError);
    CHECK_THROWS_AS(parse_map(R"({"kind":"rigid","alpha":"x","beta":0})"), DomainError);
    CHECK_THROWS_AS(parse_map(R"({"kind":"composed","chain":["nope"]})"), DomainError);
    CHECK_THROWS_AS(parse_map(R"({"kind":"composed","chain":[]})"), DomainError);
    CHECK_THROWS_AS(parse_map(R"({"kind":"gallery","id":"9"})"), DomainError);
    CHECK_THROWS_AS(parse_map(R"([1,2])"), DomainError);
}
