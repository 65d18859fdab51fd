#include "doctest.h"

#include <sstream>

#include "reflectsim/error.hpp"
#include "reflectsim/report_io.hpp"

using namespace reflectsim;

TEST_SUITE("report_io") {

TEST_CASE("shortest round-trip doubles") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("model and sampler JSON round trip") {
    for (const LevyModel& m : {LevyModel{Brownian{-0.5, 2.0}}, LevyModel{StrictlyStable{1.5, -0.2, 3.0}},
                               LevyModel{Drift{-1.5}}}) {
        CHECK(model_to_json(model_from_json(model_to_json(m))) == model_to_json(m));
    }
    const auto stable2 = model_from_json(Json::parse(R"({"kind":"stable","alpha":2.0,"scale":2.0})"));
    CHECK(std::get<Brownian>(stable2).sigma2 == 8.0);
    CHECK_THROWS_AS(model_from_json(Json::parse(R"({"kind":"gamma"})")), ParameterError);
    CHECK_THROWS_AS(model_from_json(Json::parse(R"({"kind":"brownian","sigma2":-1})")), ParameterError);

    for (const VSamplerSpec& s : {VSamplerSpec{BesselBrownian{20}}, VSamplerSpec{StableNested{1.2, 0.5, 2.0, 7, 9}},
                                  VSamplerSpec{Monotone{Drift{-1.0}}}}) {
        CHECK(sampler_to_json(sampler_from_json(sampler_to_json(s))) == sampler_to_json(s));
    }
}

TEST_CASE("config parsing and hashing") {
    const auto j = Json::parse(R"({
        "model": {"kind": "brownian", "mu": -0.5, "sigma2": 2.0},
        "x0": 0.3, "n": 100, "n_fine": 10000, "replications": 20000, "seed": 1
    })");
    const auto c = config_from_json(j);
    CHECK(c.n_fine == 10000);
    CHECK(c.x0 == 0.3);
    auto d = c;
    d.workers = 8;
    CHECK(config_hash(c) == config_hash(d));
    d.seed = 2;
    CHECK(config_hash(c) != config_hash(d));
    CHECK(config_from_json(config_to_json(c)).n == 100);
    CHECK_THROWS_AS(config_from_json(Json::parse(R"({"n": 3, "n_fine": 10})")), ParameterError);
}

TEST_CASE("outcomes CSV") {
    std::istringstream in("replication,n,y,rho_L,rho_U,N,L,U,extra\n"
                          "4,100,0.25,41,92,2,0.4,0.7,x\n"
                          "5,100,0.5,0,0,0,0,0,y\n");
    const auto rows = read_outcomes_csv(in);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].replication == 4);
    CHECK(rows[0].outcome.rho_upper == 92);
    CHECK(rows[0].outcome.y == 0.25);
    CHECK(rows[0].outcome.switches == 2);
    CHECK(rows[1].outcome.n == 100);

    std::istringstream missing("n,y,rho_L\n1,0.5,0\n");
    CHECK_THROWS_AS(read_outcomes_csv(missing), ParameterError);
    std::istringstream garbled("n,y,rho_L,rho_U\n1,abc,0,0\n");
    CHECK_THROWS_AS(read_outcomes_csv(garbled), ParameterError);
}

TEST_CASE("records CSV feeds back into the reader") {
    ExperimentConfig c;
    c.n = 10;
    c.n_fine = 100;
    c.replications = 20;
    c.v_reference_draws = 50;
    const auto report = run_error_experiment(c);
    std::stringstream csv;
    write_records_csv(csv, report.records);
    const auto rows = read_outcomes_csv(csv);
    REQUIRE(rows.size() == 20);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].outcome.y == report.records[i].coarse.y);
        CHECK(rows[i].outcome.rho_lower == report.records[i].coarse.rho_lower);
        CHECK(rows[i].outcome.lower == report.records[i].coarse.lower);
    }
    const auto j = report_to_json(report);
    CHECK(j.at("provenance").at("seed") == 1);
    CHECK(j.at("config").at("n_fine") == 100);
}

}
