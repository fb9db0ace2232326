#pragma once

#include <cstdint>
#include <initializer_list>

namespace sra {

// Seed streams. Every randomized operation draws from a child seed derived
// from a root seed plus a path of stream tags, so results never depend on the
// order in which work is scheduled.
enum class SeedStream : std::uint64_t {
  Channel = 1,
  PilotNoise = 2,
  UserDraw = 3,
};

std::uint64_t splitmix64(std::uint64_t x);

/// Child seed for `root` along `path`. Deterministic and platform independent.
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> path);

inline std::uint64_t derive_seed(std::uint64_t root, SeedStream stream) {
  return derive_seed(root, {static_cast<std::uint64_t>(stream)});
}

}  // namespace sra
