#pragma once

#include <cstdint>
#include <random>

namespace reflectsim {

/// What a substream is used for. Distinct purposes never share deviates, so
/// toggling one consumer (e.g. rectification) leaves the others untouched.
enum class StreamPurpose : std::uint32_t {
    Path = 1,
    Rectify = 2,
    VReference = 3,
    VStudy = 4,
    Test = 99,
};

struct StreamKey {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    StreamPurpose purpose = StreamPurpose::Path;
};

/// Deviate stream keyed by (seed, index, purpose).
///
/// Each key seeds an independent mt19937_64 through std::seed_seq, so the
/// deviates a replication sees depend only on its key and never on the
/// order in which replications are scheduled.
class DeviateStream {
public:
    using result_type = std::uint64_t;

    explicit DeviateStream(const StreamKey& key);

    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }
    result_type operator()() { return engine_(); }

    /// Uniform on the open interval (0, 1); never returns 0 or 1.
    double uniform() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return normal_(engine_); }

    /// Standard exponential, strictly positive.
    double exponential();

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

}  // namespace reflectsim
