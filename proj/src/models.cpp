#include "reflectsim/models.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "reflectsim/error.hpp"

namespace reflectsim {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};

void validate_stable(double alpha, double beta) {
    require(alpha > 0.0 && alpha < 2.0, "stable alpha must lie in (0, 2)");
    require(beta >= -1.0 && beta <= 1.0, "stable beta must lie in [-1, 1]");
    require(alpha != 1.0 || beta == 0.0, "alpha = 1 is strictly stable only for beta = 0");
}

}  // namespace

void validate(const LevyModel& model) {
    std::visit(overloaded{
                   [](const Brownian& m) {
                       require(std::isfinite(m.mu), "Brownian drift must be finite");
                       require(m.sigma2 > 0.0 && std::isfinite(m.sigma2),
                               "Brownian sigma2 must be positive");
                   },
                   [](const StrictlyStable& m) {
                       validate_stable(m.alpha, m.beta);
                       require(m.scale > 0.0 && std::isfinite(m.scale),
                               "stable scale must be positive");
                   },
                   [](const Drift& m) {
                       require(m.slope != 0.0 && std::isfinite(m.slope),
                               "drift slope must be finite and non-zero");
                   },
               },
               model);
}

LevyModel stable_or_brownian(double alpha, double beta, double scale) {
    require(scale > 0.0, "stable scale must be positive");
    if (alpha == 2.0) {
        // exp(-c^2 theta^2) is the Gaussian law with variance 2 c^2.
        return Brownian{0.0, 2.0 * scale * scale};
    }
    LevyModel model = StrictlyStable{alpha, beta, scale};
    validate(model);
    return model;
}

double index_alpha(const LevyModel& model) {
    return std::visit(overloaded{
                          [](const Brownian&) { return 2.0; },
                          [](const StrictlyStable& m) { return m.alpha; },
                          [](const Drift&) { return 1.0; },
                      },
                      model);
}

bool is_monotone(const LevyModel& model) {
    const auto flags = classify_regularity(model);
    return flags.regular_up != flags.regular_down;
}

double sample_brownian_increment(double mu, double sigma2, double dt, double z) {
    require(dt > 0.0, "time step must be positive");
    require(sigma2 > 0.0, "sigma2 must be positive");
    return mu * dt + std::sqrt(sigma2 * dt) * z;
}

double sample_stable_increment(double alpha, double beta, double dt, double u, double w) {
    validate_stable(alpha, beta);
    require(u > 0.0 && u < 1.0, "uniform deviate must lie in (0, 1)");
    require(w > 0.0, "exponential deviate must be positive");
    require(dt > 0.0, "time step must be positive");

    const double v = std::numbers::pi * (u - 0.5);
    double unit = 0.0;
    if (alpha == 1.0) {
        unit = std::tan(v);
    } else {
        const double t = beta * std::tan(std::numbers::pi * alpha / 2.0);
        const double shift = std::atan(t) / alpha;
        const double amplitude = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
        const double a = alpha * (v + shift);
        unit = amplitude * std::sin(a) / std::pow(std::cos(v), 1.0 / alpha) *
               std::pow(std::cos(v - a) / w, (1.0 - alpha) / alpha);
    }
    return std::pow(dt, 1.0 / alpha) * unit;
}

void sample_increments(const LevyModel& model, double dt, DeviateStream& stream,
                       std::span<double> out) {
    require(dt > 0.0, "time step must be positive");
    std::visit(overloaded{
                   [&](const Brownian& m) {
                       const double drift = m.mu * dt;
                       const double sd = std::sqrt(m.sigma2 * dt);
                       for (double& x : out) {
                           x = drift + sd * stream.normal();
                       }
                   },
                   [&](const StrictlyStable& m) {
                       thread_local std::vector<double> u;
                       thread_local std::vector<double> w;
                       u.resize(out.size());
                       w.resize(out.size());
                       for (std::size_t i = 0; i < out.size(); ++i) {
                           u[i] = stream.uniform();
                           w[i] = stream.uniform();
                       }
                       exponentials_from_uniforms(w, w);
                       stable_variates(m.alpha, m.beta, u, w, out);
                       const double step = m.scale * std::pow(dt, 1.0 / m.alpha);
                       for (double& x : out) {
                           x *= step;
                       }
                   },
                   [&](const Drift& m) {
                       for (double& x : out) {
                           x = m.slope * dt;
                       }
                   },
               },
               model);
}

double scaling_a(const LevyModel& model, double eps) {
    require(eps > 0.0, "eps must be positive");
    validate(model);
    return std::visit(overloaded{
                          [&](const Brownian& m) { return std::sqrt(m.sigma2) * std::sqrt(eps); },
                          [&](const StrictlyStable& m) {
                              return m.scale * std::pow(eps, 1.0 / m.alpha);
                          },
                          [&](const Drift& m) { return std::abs(m.slope) * eps; },
                      },
                      model);
}

RegularityFlags classify_regularity(const LevyModel& model) {
    return std::visit(overloaded{
                          [](const Brownian&) { return RegularityFlags{true, true}; },
                          [](const StrictlyStable& m) {
                              // Only the one-sided alpha < 1 laws are subordinators.
                              if (m.alpha < 1.0 && m.beta == 1.0) return RegularityFlags{true, false};
                              if (m.alpha < 1.0 && m.beta == -1.0) return RegularityFlags{false, true};
                              return RegularityFlags{true, true};
                          },
                          [](const Drift& m) {
                              return m.slope > 0.0 ? RegularityFlags{true, false}
                                                   : RegularityFlags{false, true};
                          },
                      },
                      model);
}

}  // namespace reflectsim
