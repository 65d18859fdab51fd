#include "reflectsim/reflection.hpp"

#include <algorithm>
#include <utility>

#include "reflectsim/error.hpp"

namespace reflectsim {

SkeletonPath::SkeletonPath(std::vector<double> increments) : increments_(std::move(increments)) {}

double SkeletonPath::terminal() const {
    double sum = 0.0;
    for (double x : increments_) {
        sum += x;
    }
    return sum;
}

void SEventTracker::observe(double previous, double current) {
    ++step_;
    if (pending_since_ != 0) {
        if (current == 1.0) {
            pending_since_ = 0;
        } else if (current == 0.0) {
            violated_ = true;
            pending_since_ = 0;
        }
    }
    if (previous == 0.0 && current == 1.0) {
        pending_since_ = step_;
    }
}

bool SEventTracker::holds() const {
    if (violated_) return false;
    // A jump still unresolved at the horizon counts only if it was not the last step.
    return pending_since_ == 0 || pending_since_ == step_;
}

Reflector::Reflector(double x0, ReflectionOptions options)
    : options_(options), x0_(x0), y_(x0) {
    require(x0 >= 0.0 && x0 <= 1.0, "initial position must lie in [0, 1]");
    if (options_.keep_path) {
        path_.y.push_back(x0);
        path_.lower.push_back(0.0);
        path_.upper.push_back(0.0);
    }
}

void Reflector::add(double& total, double& carry, double amount) const {
    if (!options_.compensated) {
        total += amount;
        return;
    }
    const double corrected = amount - carry;
    const double next = total + corrected;
    carry = (next - total) - corrected;
    total = next;
}

void Reflector::step(double increment) {
    ++step_;
    const double previous = y_;
    const double proposal = y_ + increment;
    if (proposal < 0.0) {
        add(lower_, lower_carry_, -proposal);
        y_ = 0.0;
        rho_lower_ = step_;
        if (active_ != Barrier::Lower) {
            ++switches_;
            active_ = Barrier::Lower;
        }
    } else if (proposal > 1.0) {
        add(upper_, upper_carry_, proposal - 1.0);
        y_ = 1.0;
        rho_upper_ = step_;
        if (active_ != Barrier::Upper) {
            ++switches_;
            active_ = Barrier::Upper;
        }
    } else {
        y_ = proposal;
    }
    s_event_.observe(previous, y_);
    if (options_.keep_path) {
        path_.y.push_back(y_);
        path_.lower.push_back(lower_);
        path_.upper.push_back(upper_);
    }
}

ReflectionOutcome Reflector::finish() && {
    ReflectionOutcome out;
    out.x0 = x0_;
    out.n = step_;
    out.y = y_;
    out.lower = lower_;
    out.upper = upper_;
    out.rho_lower = rho_lower_;
    out.rho_upper = rho_upper_;
    out.switches = switches_;
    out.s_event = s_event_.holds();
    if (options_.keep_path) {
        out.path = std::move(path_);
    }
    return out;
}

ReflectionOutcome reflect_two_sided(double x0, const SkeletonPath& path,
                                    ReflectionOptions options) {
    Reflector reflector(x0, options);
    for (double xi : path.increments()) {
        reflector.step(xi);
    }
    return std::move(reflector).finish();
}

bool detect_s_event(std::span<const double> y) {
    SEventTracker tracker;
    for (std::size_t i = 1; i < y.size(); ++i) {
        tracker.observe(y[i - 1], y[i]);
    }
    return tracker.holds();
}

std::vector<double> reflect_one_sided(const SkeletonPath& path) {
    std::vector<double> out;
    out.reserve(path.resolution() + 1);
    double level = 0.0;
    double running_min = 0.0;
    out.push_back(0.0);
    for (double xi : path.increments()) {
        level += xi;
        running_min = std::min(running_min, level);
        out.push_back(level - running_min);
    }
    return out;
}

SkeletonPath coarsen(const SkeletonPath& path, std::size_t factor) {
    require(factor >= 1, "coarsening factor must be positive");
    require(path.resolution() % factor == 0, "coarsening factor must divide the resolution");
    const auto fine = path.increments();
    std::vector<double> coarse(fine.size() / factor, 0.0);
    for (std::size_t i = 0; i < coarse.size(); ++i) {
        double block = 0.0;
        for (std::size_t j = 0; j < factor; ++j) {
            block += fine[i * factor + j];
        }
        coarse[i] = block;
    }
    return SkeletonPath(std::move(coarse));
}

}  // namespace reflectsim
