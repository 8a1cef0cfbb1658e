// Copyright 2026 The argpat Authors
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

#ifndef ARGPAT_RNG_H_
#define ARGPAT_RNG_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace argpat {

// Seeded generator whose output stream is identical on every platform.
//
// std::mt19937_64 is fully specified by the standard, but the std::*
// distributions are not, so all derived draws are implemented here.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Mixes a base seed with a stream index (splitmix64 finalizer). Used to
  // give independent, reproducible streams to replicates and documents.
  static uint64_t Derive(uint64_t seed, uint64_t stream);

  uint64_t Next() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double Uniform();

  // Uniform on [0, n). n must be > 0.
  uint64_t UniformInt(uint64_t n);

  bool Bernoulli(double p) { return Uniform() < p; }

  // Standard normal via Box-Muller.
  double Normal();

  // Draws an index with probability proportional to weights[i].
  size_t Categorical(std::span<const double> weights);

  template <typename T>
  void Shuffle(std::span<T> values) {
    for (size_t i = values.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(UniformInt(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace argpat

#endif  // ARGPAT_RNG_H_
