// Copyright 2026 The gridsim Authors
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

#ifndef GRIDSIM_RNG_HPP_
#define GRIDSIM_RNG_HPP_

#include <cstdint>

namespace gridsim {

// Counter-based generator: draw i of stream s under seed k is a pure
// function of (k, s, i), so results never depend on thread scheduling.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Seed for an independent child (e.g. one trajectory of an ensemble).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    return mix(mix(seed ^ 0x5851f42d4c957f2dULL) + index);
  }

  std::uint64_t next_u64() {
    return mix(mix(seed_ + mix(stream_ + 0x632be59bd9b4e019ULL)) ^ counter_++);
  }

  // Uniform in [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace gridsim

#endif  // GRIDSIM_RNG_HPP_
