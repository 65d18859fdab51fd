#include "reflectsim/vlimit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "reflectsim/error.hpp"

namespace reflectsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

struct Point3 {
    std::array<double, 3> x{};

    void advance(double sd, DeviateStream& stream) {
        for (double& c : x) {
            c += sd * stream.normal();
        }
    }
    double norm2() const { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2]; }
};

}  // namespace

void validate(const VSamplerSpec& spec) {
    std::visit(overloaded{
                   [](const BesselBrownian& s) {
                       require(s.locations_per_side >= 1, "Bessel sampler needs K >= 1");
                   },
                   [](const StableNested& s) {
                       validate(LevyModel{StrictlyStable{s.alpha, s.beta, s.scale}});
                       require(s.fine_subdivisions >= 1 && s.coarse_steps >= 1,
                               "nested grid sizes must be positive");
                   },
                   [](const Monotone& s) {
                       validate(s.model_hat);
                       require(is_monotone(s.model_hat), "monotone sampler needs a monotone model");
                   },
               },
               spec);
}

VSamplerSpec default_sampler(const LevyModel& model) {
    validate(model);
    return std::visit(overloaded{
                          [](const Brownian&) -> VSamplerSpec { return BesselBrownian{}; },
                          [&](const StrictlyStable& m) -> VSamplerSpec {
                              if (is_monotone(model)) {
                                  return Monotone{StrictlyStable{m.alpha, m.beta, 1.0}};
                              }
                              return StableNested{m.alpha, m.beta, 1.0, 100, 100};
                          },
                          [](const Drift& m) -> VSamplerSpec {
                              return Monotone{Drift{m.slope > 0.0 ? 1.0 : -1.0}};
                          },
                      },
                      model);
}

double sample_v_brownian(std::size_t locations_per_side, DeviateStream& stream) {
    require(locations_per_side >= 1, "Bessel sampler needs K >= 1");
    const double upsilon = stream.uniform();
    // Forward copy at upsilon + i, backward copy at (i + 1) - upsilon; the two
    // are drawn interleaved so that a smaller K reuses a prefix of the stream.
    Point3 forward;
    Point3 backward;
    double min_norm2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < locations_per_side; ++i) {
        forward.advance(i == 0 ? std::sqrt(upsilon) : 1.0, stream);
        backward.advance(i == 0 ? std::sqrt(1.0 - upsilon) : 1.0, stream);
        min_norm2 = std::min({min_norm2, forward.norm2(), backward.norm2()});
    }
    return std::sqrt(min_norm2);
}

double sample_v_stable(double alpha, double beta, double scale, std::size_t fine_subdivisions,
                       std::size_t coarse_steps, DeviateStream& stream) {
    validate(LevyModel{StrictlyStable{alpha, beta, scale}});
    require(fine_subdivisions >= 1 && coarse_steps >= 1, "nested grid sizes must be positive");

    const std::size_t total = fine_subdivisions * coarse_steps;
    thread_local std::vector<double> u;
    thread_local std::vector<double> w;
    thread_local std::vector<double> x;
    u.resize(total);
    w.resize(total);
    x.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        u[i] = stream.uniform();
        w[i] = stream.uniform();
    }
    exponentials_from_uniforms(w, w);
    stable_variates(alpha, beta, u, w, x);

    // Unit-scale walk on the fine grid 1/m over [0, n]; both maxima include X_0 = 0.
    const double step = std::pow(1.0 / static_cast<double>(fine_subdivisions), 1.0 / alpha);
    double level = 0.0;
    double fine_max = 0.0;
    double coarse_max = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
        level += step * x[i];
        fine_max = std::max(fine_max, level);
        if ((i + 1) % fine_subdivisions == 0) {
            coarse_max = std::max(coarse_max, level);
        }
    }
    return scale * (fine_max - coarse_max);
}

double monotone_v_from_deviates(const LevyModel& model_hat, double upsilon, double u, double w) {
    validate(model_hat);
    require(is_monotone(model_hat), "monotone sampler needs a monotone model");
    require(upsilon > 0.0 && upsilon < 1.0, "upsilon must lie in (0, 1)");
    return std::visit(overloaded{
                          [](const Brownian&) -> double { return 0.0; },
                          [&](const StrictlyStable& m) {
                              return std::abs(m.scale *
                                              sample_stable_increment(m.alpha, m.beta, upsilon, u, w));
                          },
                          [&](const Drift& m) { return std::abs(m.slope) * upsilon; },
                      },
                      model_hat);
}

double sample_v_monotone(const LevyModel& model_hat, DeviateStream& stream) {
    const double upsilon = stream.uniform();
    const double u = stream.uniform();
    const double w = stream.exponential();
    return monotone_v_from_deviates(model_hat, upsilon, u, w);
}

double sample_v(const VSamplerSpec& spec, DeviateStream& stream) {
    return std::visit(overloaded{
                          [&](const BesselBrownian& s) {
                              return sample_v_brownian(s.locations_per_side, stream);
                          },
                          [&](const StableNested& s) {
                              return sample_v_stable(s.alpha, s.beta, s.scale, s.fine_subdivisions,
                                                     s.coarse_steps, stream);
                          },
                          [&](const Monotone& s) { return sample_v_monotone(s.model_hat, stream); },
                      },
                      spec);
}

}  // namespace reflectsim
