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

#ifndef ARGPAT_PARALLEL_H_
#define ARGPAT_PARALLEL_H_

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace argpat {

// Splits [0, n) into `workers` contiguous chunks and runs
// fn(chunk_index, begin, end) on each. Chunk boundaries depend only on n and
// workers, so per-chunk results merged in chunk order are deterministic.
template <typename Fn>
void ParallelChunks(size_t n, int workers, Fn&& fn) {
  const size_t chunks =
      std::max<size_t>(1, std::min<size_t>(static_cast<size_t>(
                                               std::max(workers, 1)),
                                           n));
  if (chunks == 1) {
    fn(size_t{0}, size_t{0}, n);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(chunks);
  for (size_t c = 0; c < chunks; ++c) {
    const size_t begin = n * c / chunks;
    const size_t end = n * (c + 1) / chunks;
    threads.emplace_back([&fn, c, begin, end] { fn(c, begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace argpat

#endif  // ARGPAT_PARALLEL_H_
