#pragma once

#include <cstdint>

#include "mclearn/errors.hpp"

namespace mclearn {

// Counter-based splittable generator: output t of stream `key` is
// mix64(key + t*PHI) with the splitmix64 finalizer. Not cryptographic; chosen
// so that every trial can derive its own stream from (seed, index...) and
// results are bit-identical across platforms, run orders, and worker counts.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : key_(seed) {}

  // Independent child stream; split(a) and split(b) collide only if mix64
  // collides, never because of how much either stream has been consumed.
  Rng split(std::uint64_t stream) const {
    return Rng(mix64(key_ ^ mix64(stream + 0xD1B54A32D192ED03ull)));
  }

  std::uint64_t next() { return mix64(key_ + (++ctr_) * 0x9E3779B97F4A7C15ull); }

  // Uniform in [0,1) with 53 random bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [0,n) without modulo bias.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw argument_error("Rng::below: n must be positive");
    const std::uint64_t rem = (UINT64_MAX % n + 1) % n;  // 2^64 mod n
    std::uint64_t r = next();
    while (rem != 0 && r > UINT64_MAX - rem) r = next();
    return r % n;
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t ctr_ = 0;
};

}  // namespace mclearn
