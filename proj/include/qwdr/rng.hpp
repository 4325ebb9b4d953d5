// Copyright 2026 The QWDR Authors
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

#ifndef QWDR_RNG_HPP_
#define QWDR_RNG_HPP_

#include <cstdint>
#include <limits>

namespace qwdr {

// Stream namespaces so that equal seeds in different processes never alias.
enum class StreamDomain : std::uint64_t {
  kChannel = 1,
  kArrivals = 2,
  kCapacitySamples = 3,
  kTest = 99,
};

// Counter-addressed generator: (seed, domain, stream, index) fixes the whole
// sequence, so any stream can be replayed from any index without touching the
// others. SplitMix64 output function over a hashed starting state.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  StreamRng(std::uint64_t seed, StreamDomain domain, std::uint64_t stream, std::uint64_t index)
      : state_(mix(mix(mix(seed ^ 0x243f6a8885a308d3ULL) ^
                       (static_cast<std::uint64_t>(domain) << 48) ^ stream) ^
                   (index * 0x9e3779b97f4a7c15ULL + 0x13198a2e03707344ULL))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace qwdr

#endif  // QWDR_RNG_HPP_
