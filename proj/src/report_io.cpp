#include "reflectsim/report_io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>
#include <unordered_map>

#include "reflectsim/error.hpp"

#ifndef REFLECTSIM_VERSION
#define REFLECTSIM_VERSION "unknown"
#endif

namespace reflectsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    for (;;) {
        const auto comma = line.find(',');
        fields.push_back(trim(line.substr(0, comma)));
        if (comma == std::string_view::npos) return fields;
        line.remove_prefix(comma + 1);
    }
}

template <class T>
T parse_number(std::string_view field, const char* column) {
    T value{};
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || end != field.data() + field.size()) {
        throw ParameterError(std::string("cannot parse column '") + column + "' value '" +
                             std::string(field) + "'");
    }
    return value;
}

Json summary_to_json(const McSummary& s) {
    return {{"mean", s.mean},   {"sd", s.sd},   {"standard_error", s.standard_error},
            {"count", s.count}, {"q01", s.q01}, {"q50", s.q50},
            {"q99", s.q99}};
}

Json law_to_json(const ConditionalLaw& law) {
    Json j = {{"count", law.count}, {"ks_vs_v", law.ks_vs_v}, {"ks_critical_1pct", law.ks_critical}};
    if (law.summary) j["summary"] = summary_to_json(*law.summary);
    return j;
}

}  // namespace

std::string code_version() { return REFLECTSIM_VERSION; }

std::string format_double(double x) {
    char buffer[32];
    const auto [end, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
    return std::string(buffer, end);
}

Json model_to_json(const LevyModel& model) {
    return std::visit(overloaded{
                          [](const Brownian& m) -> Json {
                              return {{"kind", "brownian"}, {"mu", m.mu}, {"sigma2", m.sigma2}};
                          },
                          [](const StrictlyStable& m) -> Json {
                              return {{"kind", "stable"}, {"alpha", m.alpha}, {"beta", m.beta},
                                      {"scale", m.scale}};
                          },
                          [](const Drift& m) -> Json { return {{"kind", "drift"}, {"slope", m.slope}}; },
                      },
                      model);
}

LevyModel model_from_json(const Json& j) {
    const auto kind = j.at("kind").get<std::string>();
    LevyModel model;
    if (kind == "brownian") {
        model = Brownian{j.value("mu", 0.0), j.value("sigma2", 1.0)};
    } else if (kind == "stable") {
        model = stable_or_brownian(j.at("alpha").get<double>(), j.value("beta", 0.0),
                                   j.value("scale", 1.0));
    } else if (kind == "drift") {
        model = Drift{j.at("slope").get<double>()};
    } else {
        throw ParameterError("unknown model kind '" + kind + "'");
    }
    validate(model);
    return model;
}

Json sampler_to_json(const VSamplerSpec& spec) {
    return std::visit(overloaded{
                          [](const BesselBrownian& s) -> Json {
                              return {{"kind", "bessel"}, {"locations_per_side", s.locations_per_side}};
                          },
                          [](const StableNested& s) -> Json {
                              return {{"kind", "stable_nested"}, {"alpha", s.alpha}, {"beta", s.beta},
                                      {"scale", s.scale},        {"m", s.fine_subdivisions},
                                      {"n", s.coarse_steps}};
                          },
                          [](const Monotone& s) -> Json {
                              return {{"kind", "monotone"}, {"model", model_to_json(s.model_hat)}};
                          },
                      },
                      spec);
}

VSamplerSpec sampler_from_json(const Json& j) {
    const auto kind = j.at("kind").get<std::string>();
    VSamplerSpec spec;
    if (kind == "bessel") {
        spec = BesselBrownian{j.value<std::size_t>("locations_per_side", 150)};
    } else if (kind == "stable_nested") {
        spec = StableNested{j.at("alpha").get<double>(), j.value("beta", 0.0), j.value("scale", 1.0),
                            j.value<std::size_t>("m", 100), j.value<std::size_t>("n", 100)};
    } else if (kind == "monotone") {
        spec = Monotone{model_from_json(j.at("model"))};
    } else {
        throw ParameterError("unknown sampler kind '" + kind + "'");
    }
    validate(spec);
    return spec;
}

ExperimentConfig config_from_json(const Json& j) {
    ExperimentConfig c;
    if (j.contains("model")) c.model = model_from_json(j.at("model"));
    c.x0 = j.value("x0", c.x0);
    c.n = j.value("n", c.n);
    c.n_fine = j.value("n_fine", c.n_fine);
    c.replications = j.value("replications", c.replications);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    if (j.contains("v_sampler") && !j.at("v_sampler").is_null()) {
        c.v_sampler = sampler_from_json(j.at("v_sampler"));
    }
    if (j.contains("policy")) {
        const auto& p = j.at("policy");
        c.policy.clamp_to_unit = p.value("clamp_to_unit", false);
        c.policy.skip_boundary_samples = p.value("skip_boundary_samples", false);
    }
    c.mean_shift_reference = j.value("mean_shift_reference", c.mean_shift_reference);
    c.v_reference_draws = j.value("v_reference_draws", c.v_reference_draws);
    c.boundary_band = j.value("boundary_band", c.boundary_band);
    c.max_switch_class = j.value("max_switch_class", c.max_switch_class);
    validate(c);
    return c;
}

Json config_to_json(const ExperimentConfig& c) {
    Json j = {
        {"model", model_to_json(c.model)},
        {"x0", c.x0},
        {"n", c.n},
        {"n_fine", c.n_fine},
        {"replications", c.replications},
        {"seed", c.seed},
        {"workers", c.workers},
        {"v_sampler", sampler_to_json(effective_sampler(c))},
        {"policy",
         {{"clamp_to_unit", c.policy.clamp_to_unit},
          {"skip_boundary_samples", c.policy.skip_boundary_samples}}},
        {"mean_shift_reference", c.mean_shift_reference},
        {"v_reference_draws", c.v_reference_draws},
        {"boundary_band", c.boundary_band},
        {"max_switch_class", c.max_switch_class},
    };
    return j;
}

std::string config_hash(const ExperimentConfig& config) {
    Json j = config_to_json(config);
    j.erase("workers");
    const std::string canonical = j.dump();
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char ch : canonical) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof(buffer), "%016llx", static_cast<unsigned long long>(h));
    return buffer;
}

Json report_to_json(const ExperimentReport& report) {
    const auto& a = report.aggregates;
    Json classes = Json::array();
    for (const auto& rc : a.regulator_classes) {
        classes.push_back({{"switches", rc.switches},
                           {"last_barrier", rc.lower_last ? "lower" : "upper"},
                           {"count", rc.count},
                           {"mean_lower_error", rc.mean_lower_error},
                           {"mean_upper_error", rc.mean_upper_error},
                           {"se_lower_error", rc.se_lower_error},
                           {"se_upper_error", rc.se_upper_error},
                           {"expected_lower", rc.expected_lower},
                           {"expected_upper", rc.expected_upper},
                           {"count_fine_agreeing", rc.count_agreeing},
                           {"mean_lower_error_fine_agreeing", rc.mean_lower_error_agreeing},
                           {"mean_upper_error_fine_agreeing", rc.mean_upper_error_agreeing}});
    }
    Json agg = {
        {"scaling_a", a.scaling},
        {"shift_constant", a.shift_constant},
        {"expected_v", a.expected_v ? Json(*a.expected_v) : Json(nullptr)},
        {"fraction_coarse_lower_last", a.frac_coarse_lower_last},
        {"fraction_coarse_upper_last", a.frac_coarse_upper_last},
        {"fraction_fine_lower_last", a.frac_fine_lower_last},
        {"fraction_fine_upper_last", a.frac_fine_upper_last},
        {"fraction_last_barrier_disagreement", a.frac_last_barrier_disagreement},
        {"error_given_lower_last", law_to_json(a.lower_last)},
        {"error_given_upper_last", law_to_json(a.upper_last)},
        {"error_given_lower_last_adjusted", law_to_json(a.lower_last_adjusted)},
        {"error_given_upper_last_adjusted", law_to_json(a.upper_last_adjusted)},
        {"v_reference", summary_to_json(a.v_reference)},
        {"ks_raw_vs_reference", a.ks_raw_vs_reference},
        {"ks_rectified_vs_reference", a.ks_rectified_vs_reference},
        {"rectified_adjusted", a.rectified_adjusted},
        {"rectified_boundary_skipped", a.rectified_boundary_skipped},
        {"rectified_out_of_range_fraction", a.rectified_out_of_range_fraction},
        {"regulator_classes", classes},
        {"sign_census",
         {{"eligible", a.sign_census.eligible},
          {"matching", a.sign_census.matching},
          {"fraction", a.sign_census.fraction}}},
        {"max_terminal_sum_mismatch", a.max_terminal_sum_mismatch},
    };
    return {
        {"config", config_to_json(report.config)},
        {"provenance",
         {{"seed", report.provenance.seed},
          {"config_hash", report.provenance.config_hash},
          {"code_version", report.provenance.code_version}}},
        {"aggregates", agg},
    };
}

void write_records_csv(std::ostream& out, std::span<const ReplicationRecord> records) {
    out << "replication,n,y,rho_L,rho_U,N,s_event,L,U,x_sum,"
           "n_fine,y_fine,rho_L_fine,rho_U_fine,N_fine,s_event_fine,L_fine,U_fine,x_sum_fine,"
           "y_reference,L_reference,U_reference,delta,rectified\n";
    const auto outcome = [&out](const ReflectionOutcome& o, double x_sum) {
        out << o.n << ',' << format_double(o.y) << ',' << o.rho_lower << ',' << o.rho_upper << ','
            << o.switches << ',' << (o.s_event ? 1 : 0) << ',' << format_double(o.lower) << ','
            << format_double(o.upper) << ',' << format_double(x_sum);
    };
    for (const auto& r : records) {
        out << r.replication << ',';
        outcome(r.coarse, r.x_sum);
        out << ',';
        outcome(r.fine, r.x_sum_fine);
        out << ',' << format_double(r.y_reference) << ',' << format_double(r.lower_reference) << ','
            << format_double(r.upper_reference) << ',' << format_double(r.delta) << ','
            << format_double(r.rectified) << '\n';
    }
}

std::vector<OutcomeRow> read_outcomes_csv(std::istream& in) {
    std::string line;
    require(static_cast<bool>(std::getline(in, line)), "outcomes CSV is empty");
    std::unordered_map<std::string, std::size_t> column;
    const auto header = split(line);
    for (std::size_t i = 0; i < header.size(); ++i) column.emplace(std::string(header[i]), i);
    for (const char* name : {"n", "y", "rho_L", "rho_U"}) {
        if (!column.contains(name)) {
            throw ParameterError(std::string("outcomes CSV lacks column '") + name + "'");
        }
    }
    const auto optional_column = [&column, &header](const char* name) {
        const auto it = column.find(name);
        return it == column.end() ? header.size() : it->second;
    };
    const std::size_t c_rep = optional_column("replication");
    const std::size_t c_switches = optional_column("N");
    const std::size_t c_lower = optional_column("L");
    const std::size_t c_upper = optional_column("U");

    std::vector<OutcomeRow> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        const auto f = split(line);
        require(f.size() >= header.size(), "outcomes CSV row has too few fields");
        OutcomeRow row;
        row.replication = c_rep < f.size() ? parse_number<std::size_t>(f[c_rep], "replication")
                                           : rows.size();
        auto& o = row.outcome;
        o.n = parse_number<std::size_t>(f[column.at("n")], "n");
        o.y = parse_number<double>(f[column.at("y")], "y");
        o.rho_lower = parse_number<std::size_t>(f[column.at("rho_L")], "rho_L");
        o.rho_upper = parse_number<std::size_t>(f[column.at("rho_U")], "rho_U");
        if (c_switches < f.size()) o.switches = parse_number<std::size_t>(f[c_switches], "N");
        if (c_lower < f.size()) o.lower = parse_number<double>(f[c_lower], "L");
        if (c_upper < f.size()) o.upper = parse_number<double>(f[c_upper], "U");
        rows.push_back(row);
    }
    return rows;
}

void write_density_csv(std::ostream& out, const DensityGrid& density) {
    out << "v,density\n";
    for (std::size_t i = 0; i < density.points.size(); ++i) {
        out << format_double(density.points[i]) << ',' << format_double(density.values[i]) << '\n';
    }
}

VStudyConfig v_study_config_from_json(const Json& j) {
    VStudyConfig c;
    for (const auto& cell : j.at("cells")) {
        if (cell.is_array()) {
            c.cells.push_back({cell.at(0).get<double>(), cell.at(1).get<double>()});
        } else {
            c.cells.push_back({cell.at("alpha").get<double>(), cell.value("beta", 0.0)});
        }
    }
    require(!c.cells.empty(), "a V study needs at least one cell");
    c.replications = j.value("replications", c.replications);
    c.fine_subdivisions = j.value("m", c.fine_subdivisions);
    c.coarse_steps = j.value("n", c.coarse_steps);
    c.bessel_locations = j.value("locations_per_side", c.bessel_locations);
    c.seed = j.value("seed", c.seed);
    c.workers = j.value("workers", c.workers);
    c.density_points = j.value("density_points", c.density_points);
    c.trim_low = j.value("trim_low", c.trim_low);
    c.trim_high = j.value("trim_high", c.trim_high);
    return c;
}

Json v_study_to_json(const VStudyReport& report) {
    Json cells = Json::array();
    for (const auto& r : report.cells) {
        Json j = {{"alpha", r.cell.alpha},
                  {"beta", r.cell.beta},
                  {"sampler", sampler_to_json(r.sampler)},
                  {"summary", summary_to_json(r.summary)}};
        const auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
        j["expected_v"] = opt(r.expected_v);
        j["expected_vn"] = opt(r.expected_vn);
        j["expected_nested_gap"] = opt(r.expected_nested_gap);
        cells.push_back(std::move(j));
    }
    return {{"replications", report.config.replications},
            {"m", report.config.fine_subdivisions},
            {"n", report.config.coarse_steps},
            {"seed", report.config.seed},
            {"code_version", code_version()},
            {"cells", cells}};
}

}  // namespace reflectsim
