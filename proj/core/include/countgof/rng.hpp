// Copyright 2026 The countgof Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>
#include <limits>

namespace countgof {

/// Mixes a parent seed with a path of indices into an independent child seed
/// (SplitMix64 finalizer applied per path element).
std::uint64_t derive_seed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> path);

/// Philox4x32-10 counter-based generator. The 64-bit key is the seed; the
/// upper half of the 128-bit counter holds the stream id, so distinct
/// (seed, stream) pairs never share a counter block.
class Philox4x32 {
 public:
  using result_type = std::uint64_t;

  explicit Philox4x32(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  /// Raw block function, exposed for known-answer tests.
  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::uint64_t block_index_ = 0;
  std::uint64_t stream_;
  std::array<std::uint32_t, 4> buffer_{};
  int next_ = 4;
};

/// Random variate source used by every simulator in the library. All
/// samplers are implemented here so draws depend only on the generator
/// stream, never on standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(seed, stream) {}

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  /// Uniform integer on [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);
  double normal();
  double exponential();
  /// Gamma(shape, 1).
  double gamma(double shape);
  /// Inversion below mean 10, PTRS transformed rejection above.
  std::int64_t poisson(double mean);
  /// Gamma-Poisson mixture with mean `mean` and variance mean (1 + mean / r).
  std::int64_t neg_binomial(double mean, double r);

 private:
  Philox4x32 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace countgof
