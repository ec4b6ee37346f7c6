#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hoseeg {

using Rng = std::mt19937_64;

/// Independent generator derived from a root seed and a stream name, so that
/// e.g. fold assignment and bootstrap draws never share a sequence.
Rng substream(std::uint64_t root_seed, std::string_view name, std::uint64_t index = 0);

}  // namespace hoseeg
