// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 7        run only the listed criteria
//
// Exit status is non-zero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "reflectsim/experiments.hpp"
#include "reflectsim/moments.hpp"
#include "reflectsim/random.hpp"
#include "reflectsim/reflection.hpp"
#include "reflectsim/rectify.hpp"
#include "reflectsim/report_io.hpp"
#include "reflectsim/stats.hpp"
#include "reflectsim/vlimit.hpp"

using namespace reflectsim;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* format, auto... args) {
    char buffer[512];
    std::snprintf(buffer, sizeof(buffer), format, args...);
    return buffer;
}

// Brownian{-1/2, 2}, x0 = 0.3, n = 100, n_fine = 10000, R = 20000.
ExperimentConfig section4_config(std::size_t workers = 1) {
    ExperimentConfig c;
    c.model = Brownian{-0.5, 2.0};
    c.x0 = 0.3;
    c.n = 100;
    c.n_fine = 10000;
    c.replications = 20000;
    c.v_reference_draws = 20000;
    c.seed = 20240601;
    c.workers = workers;
    return c;
}

Verdict barrier_split() {
    const auto report = run_error_experiment(section4_config());
    const double p = report.aggregates.frac_fine_lower_last;
    return {p >= 0.57 && p <= 0.63,
            fmt("P(rho_L > rho_U) at n_fine = 10000 is %.4f (target [0.57, 0.63]); coarse n = 100 gives %.4f",
                p, report.aggregates.frac_coarse_lower_last)};
}

Verdict shift_constant() {
    const LevyModel model = Brownian{-0.5, 2.0};
    const double shift = scaling_a(model, 1.0 / 50000) * expected_v(2.0, 0.0);
    const double via_rectify = mean_shift_constant(model, 50000);
    return {std::abs(shift - 0.003684) <= 1e-4 && shift == via_rectify,
            fmt("a_{1/50000} E V = %.7f (target 0.003684 +- 1e-4)", shift)};
}

Verdict brownian_ev() {
    const auto v = draw_v_samples(BesselBrownian{150}, 100000, 3, StreamPurpose::VReference);
    const auto m = mc_summary(v);
    return {std::abs(m.mean - 0.58258) <= 0.01,
            fmt("mean of 1e5 Bessel draws (K = 150) = %.5f, se %.5f (target 0.58258 +- 0.01)", m.mean,
                m.standard_error)};
}

Verdict rectification_improves() {
    const auto a = run_error_experiment(section4_config()).aggregates;
    return {a.ks_rectified_vs_reference < a.ks_raw_vs_reference && a.ks_rectified_vs_reference <= 0.03,
            fmt("KS(raw, reference) = %.4f, KS(rectified, reference) = %.4f (need rectified < raw and <= 0.03)",
                a.ks_raw_vs_reference, a.ks_rectified_vs_reference)};
}

Verdict conditional_law() {
    auto c = section4_config();
    c.n_fine = 50000;
    const auto a = run_error_experiment(c).aggregates;
    const auto& law = a.lower_last_adjusted;
    const double mean = law.summary ? law.summary->mean : 0.0;
    return {law.ks_vs_v <= 0.05,
            fmt("KS(Delta/a | coarse and fine L last, V draws) = %.4f over %zu errors (target <= 0.05); "
                "error mean %.4f vs E V %.4f",
                law.ks_vs_v, law.count, mean, a.v_reference.mean)};
}

Verdict regulator_accumulation() {
    ExperimentConfig c = section4_config();
    c.n = 1000;
    c.n_fine = 100000;
    c.replications = 20000;
    c.v_reference_draws = 1000;
    const auto a = run_error_experiment(c).aggregates;
    bool pass = true;
    std::string detail;
    for (const auto& rc : a.regulator_classes) {
        if (!rc.lower_last || rc.switches < 1 || rc.switches > 3) continue;
        const double ratio = rc.mean_lower_error / rc.expected_lower;
        pass = pass && rc.count > 0 && std::abs(ratio - 1.0) <= 0.10;
        detail += fmt("k=%zu: mean %.4f / %.4f = %.3f (n=%zu, se %.4f; fine-agreeing %.3f) ", rc.switches,
                      rc.mean_lower_error, rc.expected_lower, ratio, rc.count, rc.se_lower_error,
                      rc.mean_lower_error_agreeing / rc.expected_lower);
    }
    detail += fmt("[sign census %.4f of %zu]", a.sign_census.fraction, a.sign_census.eligible);
    return {pass, detail};
}

Verdict spitzer_mean() {
    const std::size_t reps = 1000000;
    const auto v = draw_v_samples(StableNested{1.5, 0.0, 1.0, 100, 100}, reps, 7, StreamPurpose::VStudy);
    const auto m = mc_summary(v);
    const double ev = expected_v(1.5, 0.0);
    const double evn = expected_vn(1.5, 0.0, 100);
    const double adjusted = m.mean + (ev - evn);
    const double ratio = adjusted / 0.830;
    return {std::abs(ratio - 1.0) <= 0.05,
            fmt("MC mean %.5f (se %.5f) + gap (E V - E V_100) %.5f = %.5f, ratio to 0.830 = %.4f (target "
                "within 5%%); E V_100 = %.5f, exact nested mean %.5f",
                m.mean, m.standard_error, ev - evn, adjusted, ratio, evn,
                expected_nested_gap(1.5, 0.0, 100, 100))};
}

Verdict symmetry() {
    const std::size_t reps = 50000;
    const auto plus = draw_v_samples(StableNested{1.2, 0.5, 1.0, 100, 100}, reps, 8, StreamPurpose::VStudy);
    const auto minus = draw_v_samples(StableNested{1.2, -0.5, 1.0, 100, 100}, reps, 8, StreamPurpose::VStudy,
                                      1, reps);
    const double ks = ks_two_sample(plus, minus);

    bool equivariant = true;
    for (double c : {2.0, 3.0, 0.7}) {
        for (std::uint64_t i = 0; i < 20; ++i) {
            DeviateStream a({8, i, StreamPurpose::Test});
            DeviateStream b({8, i, StreamPurpose::Test});
            const double base = sample_v_stable(1.2, 0.5, 1.0, 100, 100, a);
            equivariant = equivariant && sample_v_stable(1.2, 0.5, c, 100, 100, b) == c * base;
        }
    }
    return {ks < 0.0103 && equivariant,
            fmt("KS(beta = +0.5, beta = -0.5) = %.5f (target < 0.0103); scale equivariance bit-exact: %s", ks,
                equivariant ? "yes" : "no")};
}

Verdict skorokhod_suite() {
    std::size_t violations = 0;
    double worst_identity = 0.0;
    for (std::uint64_t t = 0; t < 10000; ++t) {
        DeviateStream s({9, t, StreamPurpose::Test});
        const std::size_t n = 1 + static_cast<std::size_t>(s.uniform() * 200);
        const double spread = 0.01 + 0.5 * s.uniform();
        const double x0 = s.uniform();
        std::vector<double> xi(n);
        for (double& v : xi) v = spread * s.normal();
        const auto o = reflect_two_sided(x0, SkeletonPath(xi), {.keep_path = true});
        const auto& p = *o.path;

        double sum = 0.0;
        for (double v : xi) sum += v;
        const double identity = std::abs(o.y - (x0 + sum + o.lower - o.upper));
        worst_identity = std::max(worst_identity, identity);
        violations += identity > 1e-12;
        for (std::size_t i = 1; i <= n; ++i) {
            const double dl = p.lower[i] - p.lower[i - 1];
            const double du = p.upper[i] - p.upper[i - 1];
            violations += dl < 0.0 || du < 0.0;
            violations += dl > 0.0 && (p.y[i] != 0.0 || du != 0.0);
            violations += du > 0.0 && (p.y[i] != 1.0 || dl != 0.0);
        }

        std::vector<double> flipped(xi);
        for (double& v : flipped) v = -v;
        const auto m = reflect_two_sided(1.0 - x0, SkeletonPath(flipped));
        violations += m.rho_lower != o.rho_upper || m.rho_upper != o.rho_lower || m.switches != o.switches;
        violations += o.s_event != detect_s_event(p.y);
        violations += std::abs(m.y - (1.0 - o.y)) > 1e-12;
        violations += std::abs(m.lower - o.upper) > 1e-12 || std::abs(m.upper - o.lower) > 1e-12;
    }
    return {violations == 0, fmt("10^4 instances: %zu violations, worst identity residual %.2e", violations,
                                 worst_identity)};
}

Verdict determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "reflectsim_acceptance_determinism";
    fs::create_directories(dir);
    std::vector<std::string> contents;
    for (std::size_t workers : {1, 8}) {
        const auto report = run_error_experiment(section4_config(workers));
        const fs::path file = dir / ("records_w" + std::to_string(workers) + ".csv");
        {
            std::ofstream out(file, std::ios::binary);
            write_records_csv(out, report.records);
        }
        std::ifstream in(file, std::ios::binary);
        std::ostringstream bytes;
        bytes << in.rdbuf();
        contents.push_back(bytes.str());
    }
    fs::remove_all(dir);
    return {contents[0] == contents[1] && !contents[0].empty(),
            fmt("records.csv with workers = 1 and 8: %zu vs %zu bytes, identical: %s", contents[0].size(),
                contents[1].size(), contents[0] == contents[1] ? "yes" : "no")};
}

}  // namespace

int main(int argc, char** argv) {
    const std::map<int, std::function<Verdict()>> criteria{
        {1, barrier_split},        {2, shift_constant},         {3, brownian_ev}, {4, rectification_improves},
        {5, conditional_law},      {6, regulator_accumulation}, {7, spitzer_mean}, {8, symmetry},
        {9, skorokhod_suite},      {10, determinism},
    };
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty()) {
        for (const auto& [id, _] : criteria) selected.push_back(id);
    }

    int failures = 0;
    for (int id : selected) {
        const auto it = criteria.find(id);
        if (it == criteria.end()) {
            std::printf("criterion %d: unknown\n", id);
            ++failures;
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = it->second();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %d: %s  %s  (%.1f s)\n", id, v.pass ? "PASS" : "FAIL", v.detail.c_str(), seconds);
        std::fflush(stdout);
        failures += !v.pass;
    }
    return failures == 0 ? 0 : 1;
}
