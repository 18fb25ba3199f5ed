// Copyright 2026 The Webground Authors
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

#ifndef WEBGROUND_RANDOM_H_
#define WEBGROUND_RANDOM_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>

namespace webground {

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// FNV-1a over the bytes of `s`, finalized with mix64 and keyed by `seed`.
std::uint64_t hash_string(std::string_view s, std::uint64_t seed);

// Combines a seed with a sequence of string keys. Keys are length-prefixed so
// ("ab","c") and ("a","bc") differ.
std::uint64_t hash_keys(std::uint64_t seed, std::initializer_list<std::string_view> keys);

// Seeded generator with bounded helpers that do not depend on the standard
// library's distribution implementations, so streams are identical across
// toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). n must be > 0.
  std::size_t uniform_index(std::size_t n);

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01();

  bool bernoulli(double p) { return uniform01() < p; }

  // Index drawn proportionally to `weights`. All-zero weights return 0.
  std::size_t weighted_index(std::span<const double> weights);

  template <typename It>
  void shuffle(It first, It last) {
    const auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
      const std::size_t j = uniform_index(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Rng whose stream depends only on the seed and keys, never on call order.
Rng derive_rng(std::uint64_t seed, std::initializer_list<std::string_view> keys);

}  // namespace webground

#endif  // WEBGROUND_RANDOM_H_
