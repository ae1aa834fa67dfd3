// Copyright 2026 The dsrm Authors. All Rights Reserved.
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

// Seedable, splittable random streams.
//
// A scenario carries one 64-bit seed. Every consumer draws from its own
// substream, seeded by
//
//   derive_seed(seed, stream, index) =
//       splitmix64(splitmix64(seed) ^ splitmix64((stream << 32) | index))
//
// so that adding draws to one purpose never shifts another purpose's numbers.
// `index` separates instances of the same purpose (agent id, retry count).

#ifndef DSRM_RNG_HPP_
#define DSRM_RNG_HPP_

#include <cstdint>
#include <random>

namespace dsrm {

using Rng = std::mt19937_64;

enum class Stream : std::uint32_t {
  kGraph = 1,
  kLowRank = 2,
  kSparse = 4,
  kNoise = 5,
  kMask = 6,
  kInit = 7,
  kDesign = 8,
  kScratch = 9,
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, Stream stream, std::uint32_t index = 0) {
  const std::uint64_t tag = (static_cast<std::uint64_t>(stream) << 32) | index;
  return splitmix64(splitmix64(seed) ^ splitmix64(tag));
}

inline Rng make_rng(std::uint64_t seed, Stream stream, std::uint32_t index = 0) {
  return Rng(derive_seed(seed, stream, index));
}

}  // namespace dsrm

#endif  // DSRM_RNG_HPP_
