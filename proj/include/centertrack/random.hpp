// Copyright 2026 The CenterTrack Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file
/// \brief Portable seeded random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The std:: distributions are implementation-defined, so every
/// derived variate is computed here with a documented formula:
///
///  - uniform():   (next() >> 11) * 2^-53, in [0, 1)
///  - below(n):    rejection sampling on next() against the largest multiple of n
///  - normal():    Box-Muller, u1 = 1 - uniform(), u2 = uniform(),
///                 z = sqrt(-2 ln u1) * cos(2 pi u2); the sine branch is discarded
///  - poisson(m):  Knuth multiplication of uniforms while the product exceeds e^-m
///
/// These formulas are part of the file-format contract: changing one changes
/// every simulated artifact.
#ifndef CENTERTRACK_RANDOM_HPP_
#define CENTERTRACK_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace centertrack {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }
  bool bernoulli(double p) { return uniform() < p; }
  std::uint64_t poisson(double mean);

  /// k distinct indices of [0, n), drawn by a partial Fisher-Yates shuffle.
  std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace centertrack

#endif  // CENTERTRACK_RANDOM_HPP_
