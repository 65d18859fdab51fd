#include "reflectsim/random.hpp"

#include <cmath>

namespace reflectsim {

namespace {

std::mt19937_64 seeded_engine(const StreamKey& key) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    std::seed_seq seq{lo(key.seed), hi(key.seed), lo(key.index), hi(key.index),
                      static_cast<std::uint32_t>(key.purpose)};
    return std::mt19937_64(seq);
}

}  // namespace

DeviateStream::DeviateStream(const StreamKey& key) : engine_(seeded_engine(key)) {}

double DeviateStream::exponential() { return -std::log(uniform()); }

}  // namespace reflectsim
