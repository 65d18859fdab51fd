#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "reflectsim/error.hpp"
#include "reflectsim/experiments.hpp"
#include "reflectsim/moments.hpp"
#include "reflectsim/models.hpp"
#include "reflectsim/rectify.hpp"
#include "reflectsim/report_io.hpp"
#include "reflectsim/stats.hpp"

namespace fs = std::filesystem;
using namespace reflectsim;

namespace {

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open '" + path + "'");
    return Json::parse(in, nullptr, true, true);
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw ParameterError("cannot write '" + path.string() + "'");
    return out;
}

// Model given on the command line instead of a config file.
struct ModelArgs {
    std::string kind = "brownian";
    double mu = 0.0;
    double sigma2 = 1.0;
    double alpha = 1.5;
    double beta = 0.0;
    double scale = 1.0;
    double slope = 1.0;

    void add_to(CLI::App* app) {
        app->add_option("--model", kind, "brownian, stable or drift")
            ->check(CLI::IsMember({"brownian", "stable", "drift"}));
        app->add_option("--mu", mu, "Brownian drift");
        app->add_option("--sigma2", sigma2, "Brownian variance per unit time");
        app->add_option("--alpha", alpha, "stable index");
        app->add_option("--beta", beta, "stable skewness");
        app->add_option("--scale", scale, "stable scale");
        app->add_option("--slope", slope, "drift slope");
    }

    LevyModel model() const {
        LevyModel m;
        if (kind == "brownian") {
            m = Brownian{mu, sigma2};
        } else if (kind == "stable") {
            m = stable_or_brownian(alpha, beta, scale);
        } else {
            m = Drift{slope};
        }
        validate(m);
        return m;
    }
};

// Sampler selection shared by v-sample and v-density.
struct SamplerArgs {
    double alpha = 2.0;
    double beta = 0.0;
    double scale = 1.0;
    std::size_t m = 100;
    std::size_t n = 100;
    std::size_t locations = 150;
    std::string kind = "auto";
    std::size_t reps = 10000;
    std::uint64_t seed = 1;
    std::size_t workers = 1;

    void add_to(CLI::App* app) {
        app->add_option("--alpha", alpha, "stable index in (0, 2]");
        app->add_option("--beta", beta, "skewness in [-1, 1]");
        app->add_option("--scale", scale, "scale of the zoomed-in process");
        app->add_option("--m", m, "fine subdivisions per unit step (nested sampler)");
        app->add_option("--n", n, "coarse steps (nested sampler)");
        app->add_option("--K", locations, "Bessel locations per side");
        app->add_option("--sampler", kind, "auto, bessel, stable or monotone")
            ->check(CLI::IsMember({"auto", "bessel", "stable", "monotone"}));
        app->add_option("--reps", reps, "number of draws");
        app->add_option("--seed", seed, "random seed");
        app->add_option("--workers", workers, "worker threads");
    }

    // Returns the sampler and the factor still to be applied to its draws.
    std::pair<VSamplerSpec, double> sampler() const {
        VStudyConfig study;
        study.fine_subdivisions = m;
        study.coarse_steps = n;
        study.bessel_locations = locations;
        VSamplerSpec spec;
        if (kind == "auto") {
            spec = study_sampler(study, {alpha, beta});
        } else if (kind == "bessel") {
            spec = BesselBrownian{locations};
        } else if (kind == "stable") {
            spec = StableNested{alpha, beta, 1.0, m, n};
        } else {
            spec = Monotone{stable_or_brownian(alpha, beta, 1.0)};
        }
        if (auto* nested = std::get_if<StableNested>(&spec)) {
            nested->scale = scale;
            validate(spec);
            return {spec, 1.0};
        }
        validate(spec);
        return {spec, scale};
    }

    std::vector<double> draw() const {
        const auto [spec, factor] = sampler();
        auto v = draw_v_samples(spec, reps, seed, StreamPurpose::VStudy, workers);
        if (factor != 1.0) {
            for (double& x : v) x *= factor;
        }
        return v;
    }
};

std::vector<double> read_samples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open '" + path + "'");
    std::vector<double> v;
    std::string line;
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        const std::string field = line.substr(0, comma);
        char* end = nullptr;
        const double x = std::strtod(field.c_str(), &end);
        if (end == field.c_str()) continue;  // header or blank line
        v.push_back(x);
    }
    return v;
}

std::vector<std::uint64_t> default_sweep() {
    std::vector<std::uint64_t> ns;
    for (std::uint64_t n = 1; n <= 1000000; n *= 10) ns.push_back(n);
    return ns;
}

int run_simulate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 std::optional<std::size_t> workers, const std::string& out_dir) {
    ExperimentConfig config = config_from_json(read_json_file(config_path));
    if (seed) config.seed = *seed;
    if (workers) config.workers = *workers;
    validate(config);
    const ExperimentReport report = run_error_experiment(config);
    fs::create_directories(out_dir);
    {
        auto out = open_output(fs::path(out_dir) / "records.csv");
        write_records_csv(out, report.records);
    }
    {
        auto out = open_output(fs::path(out_dir) / "report.json");
        out << report_to_json(report).dump(2) << '\n';
    }
    const auto& a = report.aggregates;
    std::printf("replications %zu\n", report.records.size());
    std::printf("fraction_fine_lower_last %s\n", format_double(a.frac_fine_lower_last).c_str());
    std::printf("ks_raw_vs_reference %s\n", format_double(a.ks_raw_vs_reference).c_str());
    std::printf("ks_rectified_vs_reference %s\n", format_double(a.ks_rectified_vs_reference).c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reflected Levy path simulation and discretization-error rectification"};
    app.set_version_flag("--version", code_version());
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "coupled coarse/fine error experiment");
    std::string sim_config;
    std::string sim_out;
    std::optional<std::uint64_t> sim_seed;
    std::optional<std::size_t> sim_workers;
    simulate->add_option("--config", sim_config, "JSON experiment config")->required();
    simulate->add_option("--seed", sim_seed, "override the config seed");
    simulate->add_option("--workers", sim_workers, "override the worker count");
    simulate->add_option("--out", sim_out, "output directory")->required();

    // rectify
    auto* rectify = app.add_subcommand("rectify", "rectify terminal values read from CSV");
    std::string rect_in;
    std::string rect_out;
    std::string rect_config;
    std::optional<std::size_t> rect_n;
    std::uint64_t rect_seed = 1;
    std::uint64_t rect_first = 0;
    bool rect_clamp = false;
    bool rect_skip = false;
    ModelArgs rect_model;
    rectify->add_option("--in", rect_in, "CSV with columns n, y, rho_L, rho_U")->required();
    rectify->add_option("--out", rect_out, "output CSV (stdout if omitted)");
    rectify->add_option("--config", rect_config, "take model, sampler, policy and seed from a config");
    rectify->add_option("--n", rect_n, "coarse resolution (defaults to the n column)");
    rectify->add_option("--seed", rect_seed, "random seed");
    rectify->add_option("--first-index", rect_first, "stream index of the first row");
    rectify->add_flag("--clamp", rect_clamp, "clamp results to [0, 1]");
    rectify->add_flag("--skip-boundary", rect_skip, "leave values on a barrier untouched");
    rect_model.add_to(rectify);

    // v-sample
    auto* vsample = app.add_subcommand("v-sample", "draw V samples, one per line");
    SamplerArgs vs_args;
    std::string vs_out;
    vs_args.add_to(vsample);
    vsample->add_option("--out", vs_out, "output file (stdout if omitted)");

    // v-density
    auto* vdensity = app.add_subcommand("v-density", "Gaussian KDE of V samples as CSV (v, density)");
    SamplerArgs vd_args;
    std::string vd_in;
    std::string vd_out;
    std::optional<double> vd_bandwidth;
    std::size_t vd_points = 512;
    double vd_trim_low = 0.01;
    double vd_trim_high = 0.99;
    vd_args.add_to(vdensity);
    vdensity->add_option("--in", vd_in, "read samples (one per line) instead of drawing them");
    vdensity->add_option("--out", vd_out, "output CSV (stdout if omitted)");
    vdensity->add_option("--bandwidth", vd_bandwidth, "kernel bandwidth (Silverman if omitted)");
    vdensity->add_option("--points", vd_points, "grid points");
    vdensity->add_option("--trim-low", vd_trim_low, "grid starts at this sample quantile");
    vdensity->add_option("--trim-high", vd_trim_high, "grid ends at this sample quantile");

    // moments
    auto* moments = app.add_subcommand("moments", "closed-form moments of V as JSON");
    double mo_alpha = 2.0;
    double mo_beta = 0.0;
    std::optional<std::uint64_t> mo_n;
    std::optional<std::uint64_t> mo_m;
    std::optional<double> mo_sigma2;
    double mo_scale = 1.0;
    std::optional<std::uint64_t> mo_resolution;
    moments->add_option("--alpha", mo_alpha, "stable index in (1, 2]");
    moments->add_option("--beta", mo_beta, "skewness in [-1, 1]");
    moments->add_option("--n", mo_n, "coarse steps for E V_n");
    moments->add_option("--m", mo_m, "fine subdivisions for the nested-grid mean");
    moments->add_option("--sigma2", mo_sigma2, "Brownian variance (alpha = 2) for the shift");
    moments->add_option("--scale", mo_scale, "stable scale for the shift");
    moments->add_option("--resolution", mo_resolution, "grid size n' for a_{1/n'} and the shift");

    // convergence
    auto* convergence = app.add_subcommand("convergence", "E V_n sweep, or a reference-resolution sweep");
    double cv_alpha = 2.0;
    double cv_beta = 0.0;
    std::vector<std::uint64_t> cv_ns;
    std::optional<std::uint64_t> cv_m;
    std::string cv_config;
    std::vector<std::size_t> cv_fine;
    convergence->add_option("--alpha", cv_alpha, "stable index in (1, 2]");
    convergence->add_option("--beta", cv_beta, "skewness in [-1, 1]");
    convergence->add_option("--ns", cv_ns, "values of n (default 1, 10, ..., 1e6)")->delimiter(',');
    convergence->add_option("--m", cv_m, "also report the nested-grid mean with this m");
    convergence->add_option("--config", cv_config, "experiment config for a reference sweep");
    convergence->add_option("--fine", cv_fine, "reference resolutions to sweep")->delimiter(',');

    // v-study
    auto* vstudy = app.add_subcommand("v-study", "V densities and moment table over (alpha, beta) cells");
    std::string st_config;
    std::string st_out;
    vstudy->add_option("--config", st_config, "JSON study config")->required();
    vstudy->add_option("--out", st_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*simulate) {
            return run_simulate(sim_config, sim_seed, sim_workers, sim_out);
        }

        if (*rectify) {
            std::ifstream in(rect_in);
            if (!in) throw ParameterError("cannot open '" + rect_in + "'");
            const auto rows = read_outcomes_csv(in);
            require(!rows.empty(), "no outcomes to rectify");
            LevyModel model = rect_model.model();
            std::optional<VSamplerSpec> sampler;
            RectifyPolicy policy{rect_clamp, rect_skip};
            if (!rect_config.empty()) {
                const auto config = config_from_json(read_json_file(rect_config));
                model = config.model;
                sampler = effective_sampler(config);
                policy.clamp_to_unit = policy.clamp_to_unit || config.policy.clamp_to_unit;
                policy.skip_boundary_samples =
                    policy.skip_boundary_samples || config.policy.skip_boundary_samples;
                if (rectify->count("--seed") == 0) rect_seed = config.seed;
                if (!rect_n) rect_n = config.n;
            }
            const std::size_t n = rect_n.value_or(rows.front().outcome.n);
            std::vector<ReflectionOutcome> outcomes;
            outcomes.reserve(rows.size());
            for (const auto& row : rows) outcomes.push_back(row.outcome);
            const auto result = rectify_samples(outcomes, model, n,
                                                sampler.value_or(default_sampler(model)), policy,
                                                rect_seed, rect_first);
            std::ofstream file;
            if (!rect_out.empty()) file = open_output(rect_out);
            std::ostream& out = rect_out.empty() ? std::cout : file;
            out << "replication,y,rectified\n";
            for (std::size_t i = 0; i < rows.size(); ++i) {
                out << rows[i].replication << ',' << format_double(rows[i].outcome.y) << ','
                    << format_double(result.values[i]) << '\n';
            }
            std::fprintf(stderr, "adjusted %zu boundary_skipped %zu out_of_range %zu\n",
                         result.adjusted, result.boundary_skipped, result.out_of_range);
            return 0;
        }

        if (*vsample) {
            const auto v = vs_args.draw();
            std::ofstream file;
            if (!vs_out.empty()) file = open_output(vs_out);
            std::ostream& out = vs_out.empty() ? std::cout : file;
            for (double x : v) out << format_double(x) << '\n';
            return 0;
        }

        if (*vdensity) {
            const auto v = vd_in.empty() ? vd_args.draw() : read_samples(vd_in);
            require(v.size() >= 2, "need at least two samples");
            require(vd_trim_low >= 0.0 && vd_trim_low < vd_trim_high && vd_trim_high <= 1.0,
                    "trim quantiles must satisfy 0 <= low < high <= 1");
            const double lo = quantile(v, std::max(vd_trim_low, 1.0 / static_cast<double>(v.size())));
            const double hi = quantile(v, vd_trim_high);
            const auto density = kde_gaussian(v, vd_bandwidth, linear_grid(lo, hi, vd_points));
            std::ofstream file;
            if (!vd_out.empty()) file = open_output(vd_out);
            write_density_csv(vd_out.empty() ? std::cout : file, density);
            return 0;
        }

        if (*moments) {
            const auto inputs = stable_moment_inputs(mo_alpha, mo_beta);
            Json j = {{"alpha", mo_alpha},
                      {"beta", mo_beta},
                      {"rho", inputs.rho},
                      {"expected_positive_part", expected_positive_part(mo_alpha, mo_beta)},
                      {"expected_v", expected_v(mo_alpha, mo_beta)}};
            if (mo_n) {
                const double vn = expected_vn(mo_alpha, mo_beta, *mo_n);
                j["n"] = *mo_n;
                j["expected_vn"] = vn;
                j["gap"] = expected_v(mo_alpha, mo_beta) - vn;
                if (mo_m) {
                    j["m"] = *mo_m;
                    j["expected_nested_gap"] = expected_nested_gap(mo_alpha, mo_beta, *mo_m, *mo_n);
                }
            }
            if (mo_resolution) {
                LevyModel model = mo_sigma2 ? LevyModel{Brownian{0.0, *mo_sigma2}}
                                            : stable_or_brownian(mo_alpha, mo_beta, mo_scale);
                require(!mo_sigma2 || mo_alpha == 2.0, "--sigma2 applies only at alpha = 2");
                validate(model);
                const double a = scaling_a(model, 1.0 / static_cast<double>(*mo_resolution));
                j["resolution"] = *mo_resolution;
                j["scaling_a"] = a;
                j["shift"] = a * expected_v(mo_alpha, mo_beta);
            }
            std::cout << j.dump(2) << '\n';
            return 0;
        }

        if (*convergence) {
            if (!cv_config.empty()) {
                require(!cv_fine.empty(), "--config needs --fine with reference resolutions");
                const auto base = config_from_json(read_json_file(cv_config));
                std::cout << "n_fine,fraction_fine_lower_last,ks_raw_vs_reference,"
                             "ks_rectified_vs_reference,ks_lower_last_adjusted,reference_mean\n";
                for (std::size_t n_fine : cv_fine) {
                    auto config = base;
                    config.n_fine = n_fine;
                    validate(config);
                    const auto report = run_error_experiment(config);
                    const auto& a = report.aggregates;
                    double mean = 0.0;
                    for (const auto& r : report.records) mean += r.y_reference;
                    mean /= static_cast<double>(report.records.size());
                    std::cout << n_fine << ',' << format_double(a.frac_fine_lower_last) << ','
                              << format_double(a.ks_raw_vs_reference) << ','
                              << format_double(a.ks_rectified_vs_reference) << ','
                              << format_double(a.lower_last_adjusted.ks_vs_v) << ','
                              << format_double(mean) << '\n';
                }
                return 0;
            }
            if (cv_ns.empty()) cv_ns = default_sweep();
            const double ev = expected_v(cv_alpha, cv_beta);
            std::cout << "n,expected_vn,expected_v,gap,relative_gap";
            if (cv_m) std::cout << ",expected_nested_gap";
            std::cout << '\n';
            for (std::uint64_t n : cv_ns) {
                const double vn = expected_vn(cv_alpha, cv_beta, n);
                std::cout << n << ',' << format_double(vn) << ',' << format_double(ev) << ','
                          << format_double(ev - vn) << ',' << format_double((ev - vn) / ev);
                if (cv_m) {
                    std::cout << ',' << format_double(expected_nested_gap(cv_alpha, cv_beta, *cv_m, n));
                }
                std::cout << '\n';
            }
            return 0;
        }

        if (*vstudy) {
            const auto config = v_study_config_from_json(read_json_file(st_config));
            const auto report = run_v_study(config);
            fs::create_directories(st_out);
            for (std::size_t i = 0; i < report.cells.size(); ++i) {
                auto out = open_output(fs::path(st_out) / ("density_" + std::to_string(i) + ".csv"));
                write_density_csv(out, report.cells[i].density);
            }
            auto out = open_output(fs::path(st_out) / "study.json");
            out << v_study_to_json(report).dump(2) << '\n';
            return 0;
        }
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const Json::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
