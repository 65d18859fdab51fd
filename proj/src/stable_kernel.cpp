// Batched Chambers-Mallows-Stuck transform. This translation unit may be
// compiled with -ffast-math so that the loop below vectorizes against the
// vector math library; keep it free of anything that relies on inf/NaN.

#include <cmath>
#include <numbers>

#include "reflectsim/error.hpp"
#include "reflectsim/models.hpp"

namespace reflectsim {

void stable_variates(double alpha, double beta, std::span<const double> u,
                     std::span<const double> w, std::span<double> out) {
    require(alpha > 0.0 && alpha < 2.0, "stable alpha must lie in (0, 2)");
    require(beta >= -1.0 && beta <= 1.0, "stable beta must lie in [-1, 1]");
    require(alpha != 1.0 || beta == 0.0, "alpha = 1 is strictly stable only for beta = 0");
    require(u.size() == out.size() && w.size() == out.size(), "deviate spans must match output");

    const std::size_t count = out.size();
    const double* up = u.data();
    const double* wp = w.data();
    double* op = out.data();
    constexpr double pi = std::numbers::pi;

    if (alpha == 1.0) {
        for (std::size_t i = 0; i < count; ++i) {
            const double v = pi * (up[i] - 0.5);
            op[i] = std::sin(v) / std::cos(v);
        }
        return;
    }

    const double t = beta * std::tan(pi * alpha / 2.0);
    const double shift = std::atan(t) / alpha;
    const double amplitude = std::pow(1.0 + t * t, 1.0 / (2.0 * alpha));
    const double inv_alpha = 1.0 / alpha;
    const double power = (1.0 - alpha) / alpha;

    for (std::size_t i = 0; i < count; ++i) {
        const double v = pi * (up[i] - 0.5);
        const double a = alpha * (v + shift);
        const double log_tail = -inv_alpha * std::log(std::cos(v)) +
                                power * (std::log(std::cos(v - a)) - std::log(wp[i]));
        op[i] = amplitude * std::sin(a) * std::exp(log_tail);
    }
}

void exponentials_from_uniforms(std::span<const double> u, std::span<double> out) {
    require(u.size() == out.size(), "deviate spans must match output");
    const std::size_t count = out.size();
    const double* up = u.data();
    double* op = out.data();
    for (std::size_t i = 0; i < count; ++i) {
        op[i] = -std::log(up[i]);
    }
}

}  // namespace reflectsim
