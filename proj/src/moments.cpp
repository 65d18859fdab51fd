#include "reflectsim/moments.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "reflectsim/error.hpp"

namespace reflectsim {

namespace {

constexpr double pi = std::numbers::pi;

void require_moment_alpha(double alpha) {
    require(alpha > 1.0 && alpha <= 2.0, "moments need alpha in (1, 2]; E V is infinite otherwise");
}

// sum_{k=1}^{n} k^(1/alpha - 1), smallest terms first, Neumaier-compensated.
double power_partial_sum(double alpha, std::uint64_t n) {
    const double exponent = 1.0 / alpha - 1.0;
    double sum = 0.0;
    double carry = 0.0;
    for (std::uint64_t k = n; k >= 1; --k) {
        const double term = std::pow(static_cast<double>(k), exponent);
        const double next = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            carry += (sum - next) + term;
        } else {
            carry += (term - next) + sum;
        }
        sum = next;
    }
    return sum + carry;
}

}  // namespace

StableMomentInputs stable_moment_inputs(double alpha, double beta) {
    require_moment_alpha(alpha);
    require(beta >= -1.0 && beta <= 1.0, "beta must lie in [-1, 1]");
    StableMomentInputs in{alpha, beta, 0.5};
    if (alpha < 2.0 && beta != 0.0) {
        in.rho = 0.5 + std::atan(beta * std::tan(pi * (alpha - 2.0) / 2.0)) / (pi * alpha);
    }
    return in;
}

double gamma_function(double x) {
    static constexpr std::array<double, 9> coefficients = {
        0.99999999999980993,     676.5203681218851,      -1259.1392167224028,
        771.32342877765313,      -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,    9.9843695780195716e-6,  1.5056327351493116e-7,
    };
    constexpr double g = 7.0;

    require(std::isfinite(x), "gamma argument must be finite");
    require(x > 0.0 || x != std::floor(x), "gamma has poles at non-positive integers");
    if (x < 0.5) {
        return pi / (std::sin(pi * x) * gamma_function(1.0 - x));
    }
    const double z = x - 1.0;
    double series = coefficients[0];
    for (std::size_t i = 1; i < coefficients.size(); ++i) {
        series += coefficients[i] / (z + static_cast<double>(i));
    }
    const double t = z + g + 0.5;
    return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * series;
}

double dirichlet_eta(double s) {
    require(s > 0.0 && s < 1.0, "eta is evaluated on (0, 1) only");
    // Error bound ~ (3 + sqrt 8)^-terms; 40 terms is far below double precision.
    constexpr int terms = 40;
    std::array<double, terms + 1> d{};
    double term = 1.0 / terms;
    double partial = term;
    d[0] = terms * partial;
    for (int i = 0; i < terms; ++i) {
        term *= 4.0 * (terms + i) * (terms - i) / ((2.0 * i + 1.0) * (2.0 * i + 2.0));
        partial += term;
        d[i + 1] = terms * partial;
    }
    double sum = 0.0;
    for (int k = 0; k < terms; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        sum += sign * (d[k] - d[terms]) / std::pow(k + 1.0, s);
    }
    return -sum / d[terms];
}

double riemann_zeta_unit_interval(double s) {
    require(s > 0.0 && s < 1.0, "zeta is evaluated on (0, 1) only");
    return dirichlet_eta(s) / (1.0 - std::pow(2.0, 1.0 - s));
}

double expected_positive_part(double alpha, double beta) {
    const auto in = stable_moment_inputs(alpha, beta);
    if (alpha == 2.0) {
        return 1.0 / std::sqrt(2.0 * pi);
    }
    const double numerator = std::sin(pi * in.rho) * gamma_function(1.0 - 1.0 / alpha);
    const double denominator =
        pi * std::pow(std::abs(std::cos(pi * alpha * (in.rho - 0.5))), 1.0 / alpha);
    return numerator / denominator;
}

double expected_v(double alpha, double beta) {
    require_moment_alpha(alpha);
    return -riemann_zeta_unit_interval((alpha - 1.0) / alpha) * expected_positive_part(alpha, beta);
}

double expected_vn(double alpha, double beta, std::uint64_t n) {
    require_moment_alpha(alpha);
    require(n >= 1, "n must be positive");
    const double continuous = alpha * std::pow(static_cast<double>(n), 1.0 / alpha);
    return (continuous - power_partial_sum(alpha, n)) * expected_positive_part(alpha, beta);
}

double expected_nested_gap(double alpha, double beta, std::uint64_t m, std::uint64_t n) {
    require_moment_alpha(alpha);
    require(m >= 1 && n >= 1, "grid sizes must be positive");
    const double fine = std::pow(static_cast<double>(m), -1.0 / alpha) * power_partial_sum(alpha, m * n);
    return (fine - power_partial_sum(alpha, n)) * expected_positive_part(alpha, beta);
}

}  // namespace reflectsim
