#include <doctest.h>

#include "fixtures.hpp"
#include "sarkisov/io.hpp"

using namespace sarkisov;
using namespace fixtures;

TEST_CASE("fan round trip is bit-exact") {
    Fan p2 = p2_fan();
    Json j = fan_to_json(p2);
    CHECK(fan_from_json(j) == p2);
    CHECK(j.at("lattice_dim") == 2);
    CHECK(j.at("rays").size() == 3);

    Fan pt = point_fan();
    CHECK(fan_from_json(fan_to_json(pt)) == pt);
}

TEST_CASE("rationals serialize in lowest terms") {
    CHECK(rat_to_json(Rat(2, 4)) == Json("1/2"));
    CHECK(rat_to_json(Rat(-6, 3)) == Json("-2"));
    CHECK(rat_to_json(Rat::infinity()) == Json("inf"));
    CHECK(rat_from_json(Json("7/3")) == Rat(7, 3));
    CHECK(rat_from_json(Json(5)) == Rat(5));
    CHECK_THROWS_AS(rat_from_json(Json("2/0")), EngineError);
}

TEST_CASE("system round trip") {
    Fan p2 = p2_fan();
    MonomialLinearSystem h = cremona_sextic_system(p2);
    h.scale = Rat(1, 3);
    Json j = system_to_json(h);
    MonomialLinearSystem back = system_from_json(j);
    CHECK(back.points == h.points);
    CHECK(back.reference == h.reference);
    CHECK(back.scale == h.scale);
}

TEST_CASE("job parsing validates structure") {
    Json j;
    j["name"] = "cremona";
    Json map;
    map["matrix"] = Json::array({Json::array({-1, 0}), Json::array({0, -1})});
    Json mfs;
    mfs["total"] = fan_to_json(p2_fan());
    mfs["base"] = fan_to_json(point_fan());
    mfs["projection"] = Json::array();
    map["source"] = mfs;
    map["target"] = mfs;
    j["map"] = map;
    Json pol;
    pol["m"] = 1;
    pol["base_divisor"] = Json::array();
    j["polarization"] = pol;

    Job job = job_from_json(j);
    CHECK(job.name == "cremona");
    CHECK(job.map.matrix.at(0, 0) == -1);
    CHECK(job.h_target.points.size() == 10);

    SUBCASE("missing polarization and system is rejected") {
        j.erase("polarization");
        CHECK_THROWS_AS(job_from_json(j), EngineError);
    }
    SUBCASE("malformed rationals are rejected") {
        Json bad = j;
        bad["system"] = {{"points", Json::array({Json::array({0, 0})})},
                         {"reference", Json::array({"2/0", "0", "0"})},
                         {"scale", "1"}};
        bad.erase("polarization");
        CHECK_THROWS_AS(job_from_json(bad), EngineError);
    }
    SUBCASE("missing projection is rejected") {
        Json bad = j;
        bad["map"]["source"].erase("projection");
        CHECK_THROWS_AS(job_from_json(bad), EngineError);
    }
}

TEST_CASE("degree serialization shape") {
    SarkisovDegree d{Rat(2), Rat(1, 3), Rat(3)};
    Json j = degree_to_json(d);
    CHECK(j.at("mu") == "2");
    CHECK(j.at("c") == "1/3");
    CHECK(j.at("e") == 3);
    SarkisovDegree bpf{Rat(2), Rat::infinity(), Rat(0)};
    CHECK(degree_to_json(bpf).at("c") == "inf");
}

TEST_CASE("sequence serialization is deterministic") {
    ToricBirationalMap tau = cremona_map();
    MonomialLinearSystem h = o3m_system(p2_fan(), 1);
    UntwistingSequence seq = factorize_checked(tau, h, Policy{});
    Json a = sequence_to_json(seq);
    Json b = sequence_to_json(factorize_checked(tau, h, Policy{}));
    CHECK(a.dump() == b.dump());
    CHECK(a.at("links").size() == 4);
    CHECK(a.at("terminated") == true);
}
