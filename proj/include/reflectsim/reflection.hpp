#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace reflectsim {

/// Increments X_{i/n} - X_{(i-1)/n}, i = 1..n, of a process on [0, 1].
class SkeletonPath {
public:
    SkeletonPath() = default;
    explicit SkeletonPath(std::vector<double> increments);

    std::size_t resolution() const { return increments_.size(); }
    std::span<const double> increments() const { return increments_; }

    /// Terminal value X_1, summed left to right.
    double terminal() const;

private:
    std::vector<double> increments_;
};

struct ReflectionOptions {
    bool keep_path = false;  ///< retain the full y, L, U sequences
    bool compensated = false;  ///< Kahan-compensated regulator sums
};

/// Full trajectories of the reflected walk, each of length n + 1.
struct ReflectionPath {
    std::vector<double> y;
    std::vector<double> lower;
    std::vector<double> upper;
};

struct ReflectionOutcome {
    double x0 = 0.0;
    std::size_t n = 0;
    double y = 0.0;      ///< terminal position Y_n
    double lower = 0.0;  ///< terminal lower regulator L_n
    double upper = 0.0;  ///< terminal upper regulator U_n
    std::size_t rho_lower = 0;  ///< last step at which L increased (0 if never)
    std::size_t rho_upper = 0;  ///< last step at which U increased (0 if never)
    std::size_t switches = 0;   ///< alternating regulator-increase count N
    bool s_event = true;
    std::optional<ReflectionPath> path;

    bool lower_last() const { return rho_lower > rho_upper; }
    bool upper_last() const { return rho_upper > rho_lower; }
};

/// Online recognizer for the S-event: no step i in [1, n-1] jumps from 0 to 1
/// and is followed by a return to 0 (or the horizon) before touching 1 again.
class SEventTracker {
public:
    /// Feed y_{i-1} and y_i for consecutive steps i = 1, 2, ...
    void observe(double previous, double current);
    /// Evaluates the predicate once the last step n has been observed.
    bool holds() const;

private:
    std::size_t step_ = 0;
    std::size_t pending_since_ = 0;  ///< step of an unresolved 0 -> 1 jump, 0 if none
    bool violated_ = false;
};

/// Incremental two-sided reflection on [0, 1]; one call to step() per increment.
class Reflector {
public:
    explicit Reflector(double x0, ReflectionOptions options = {});

    void step(double increment);

    std::size_t steps() const { return step_; }
    double position() const { return y_; }

    ReflectionOutcome finish() &&;

private:
    enum class Barrier { None, Lower, Upper };

    void add(double& total, double& carry, double amount) const;

    ReflectionOptions options_;
    double x0_;
    double y_;
    double lower_ = 0.0;
    double upper_ = 0.0;
    double lower_carry_ = 0.0;
    double upper_carry_ = 0.0;
    std::size_t step_ = 0;
    std::size_t rho_lower_ = 0;
    std::size_t rho_upper_ = 0;
    std::size_t switches_ = 0;
    Barrier active_ = Barrier::None;
    SEventTracker s_event_;
    ReflectionPath path_;
};

ReflectionOutcome reflect_two_sided(double x0, const SkeletonPath& path,
                                    ReflectionOptions options = {});

bool detect_s_event(std::span<const double> y);

/// X_i - min_{j <= i} X_j for i = 0..n, with X_0 = 0.
std::vector<double> reflect_one_sided(const SkeletonPath& path);

/// Block sums of `factor` consecutive increments, left to right.
SkeletonPath coarsen(const SkeletonPath& path, std::size_t factor);

}  // namespace reflectsim
