#include "doctest.h"

#include <cmath>
#include <sstream>
#include <vector>

#include "reflectsim/error.hpp"
#include "reflectsim/experiments.hpp"
#include "reflectsim/moments.hpp"
#include "reflectsim/report_io.hpp"

using namespace reflectsim;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.model = Brownian{-0.5, 2.0};
    c.x0 = 0.3;
    c.n = 20;
    c.n_fine = 400;
    c.replications = 300;
    c.v_reference_draws = 500;
    c.seed = 12;
    return c;
}

std::string records_csv(const ExperimentReport& r) {
    std::ostringstream out;
    write_records_csv(out, r.records);
    return out.str();
}

}  // namespace

TEST_SUITE("experiments") {

TEST_CASE("config validation") {
    auto c = small_config();
    c.n_fine = 410;
    CHECK_THROWS_AS(validate(c), ParameterError);
    c = small_config();
    c.replications = 0;
    CHECK_THROWS_AS(validate(c), ParameterError);
    c = small_config();
    c.x0 = 1.2;
    CHECK_THROWS_AS(validate(c), ParameterError);
    c = small_config();
    c.model = StrictlyStable{0.8, 0.0, 1.0};
    CHECK_THROWS_AS(validate(c), ParameterError);
    c.mean_shift_reference = false;
    CHECK_NOTHROW(validate(c));
}

TEST_CASE("coarse and fine terminal sums agree and delta is recomputable") {
    const auto report = run_error_experiment(small_config());
    CHECK(report.records.size() == 300);
    CHECK(report.aggregates.max_terminal_sum_mismatch <= 1e-12);
    for (const auto& r : report.records) {
        CHECK(std::abs(r.delta - (r.y_reference - r.coarse.y)) <= 1e-12);
        CHECK(r.coarse.n == 20);
        CHECK(r.fine.n == 400);
    }
    CHECK(report.provenance.seed == 12);
    CHECK(report.provenance.config_hash.size() == 16);
}

TEST_CASE("constant path gives zero error") {
    const auto c = small_config();
    for (std::size_t i = 0; i < 5; ++i) {
        const auto r = simulate_replication(c, i, [](std::span<double> out) {
            for (double& v : out) v = 0.0;
        });
        CHECK(r.delta == 0.0);
        CHECK(r.coarse.switches == 0);
        CHECK(r.fine.switches == 0);
        CHECK(r.rectified == r.coarse.y);
    }
}

TEST_CASE("worker count does not change results") {
    auto c = small_config();
    c.workers = 1;
    const auto one = run_error_experiment(c);
    c.workers = 3;
    const auto three = run_error_experiment(c);
    CHECK(records_csv(one) == records_csv(three));
    CHECK(report_to_json(one).at("aggregates") == report_to_json(three).at("aggregates"));
    CHECK(one.provenance.config_hash == three.provenance.config_hash);
}

TEST_CASE("single replication matches the batch run") {
    const auto c = small_config();
    const auto report = run_error_experiment(c);
    const auto r = simulate_replication(c, 17);
    CHECK(r.coarse.y == report.records[17].coarse.y);
    CHECK(r.rectified == report.records[17].rectified);
}

TEST_CASE("last-barrier disagreement shrinks with n") {
    std::vector<double> disagreement;
    for (std::size_t n : {50, 100, 400, 1000}) {
        auto c = small_config();
        c.n = n;
        c.n_fine = 2000;
        c.replications = 4000;
        c.v_reference_draws = 100;
        c.seed = 77;
        disagreement.push_back(run_error_experiment(c).aggregates.frac_last_barrier_disagreement);
    }
    for (std::size_t i = 1; i < disagreement.size(); ++i) CHECK(disagreement[i] < disagreement[i - 1]);
}

TEST_CASE("regulator classes carry k E V targets") {
    const auto report = run_error_experiment(small_config());
    const double ev = expected_v(2.0, 0.0);
    for (const auto& rc : report.aggregates.regulator_classes) {
        const double k = static_cast<double>(rc.switches);
        CHECK(rc.expected_lower == doctest::Approx((rc.lower_last ? k : k - 1) * ev));
        CHECK(rc.expected_upper == doctest::Approx((rc.lower_last ? k - 1 : k) * ev));
        CHECK(rc.count_agreeing <= rc.count);
    }
}

TEST_CASE("V study") {
    VStudyConfig c;
    c.cells = {{2.0, 0.0}, {1.5, 0.0}, {0.6, 1.0}};
    c.replications = 20000;
    c.fine_subdivisions = 10;
    c.coarse_steps = 10;
    c.density_points = 128;
    const auto report = run_v_study(c);
    REQUIRE(report.cells.size() == 3);

    const auto& gauss = report.cells[0];
    CHECK(std::holds_alternative<BesselBrownian>(gauss.sampler));
    CHECK(std::abs(gauss.summary.mean - 0.58258) < 3.0 * gauss.summary.standard_error + 0.002);
    CHECK(gauss.density.points.size() == 128);

    const auto& stable = report.cells[1];
    REQUIRE(stable.expected_nested_gap);
    CHECK(std::abs(stable.summary.mean - *stable.expected_nested_gap) < 4.0 * stable.summary.standard_error);
    CHECK(*stable.expected_vn < *stable.expected_v);

    const auto& monotone = report.cells[2];
    CHECK(std::holds_alternative<Monotone>(monotone.sampler));
    CHECK_FALSE(monotone.expected_v);
}

}

TEST_SUITE("experiments_slow") {

TEST_CASE("error sign census") {
    ExperimentConfig c;
    c.model = Brownian{-0.5, 2.0};
    c.x0 = 0.3;
    c.n = 1000;
    c.n_fine = 100000;
    c.replications = 5000;
    c.v_reference_draws = 1000;
    c.seed = 2024;
    const auto agg = run_error_experiment(c).aggregates;
    CHECK(agg.sign_census.eligible > 2000);
    CHECK(agg.sign_census.fraction >= 0.95);
}

}
