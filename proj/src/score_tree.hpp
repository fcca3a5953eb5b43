// Copyright 2026 The EigenGreedy Authors.
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

#pragma once

// Fixed-shape pairwise reduction of squared white entries. Leaf i holds w_i^2
// when component i is in the subset and 0 otherwise; since x + 0 == x exactly,
// toggling one leaf and re-reducing its root path gives the same bits as a
// fresh reduction of the modified subset.

#include <bit>
#include <cstddef>
#include <span>
#include <vector>

namespace eigengreedy::detail {

inline std::size_t TreeWidth(std::size_t dim) { return std::bit_ceil(dim == 0 ? 1 : dim); }

// `nodes` has 2*width slots; leaves occupy [width, 2*width).
inline void BuildTree(std::span<double> nodes, std::size_t width) {
  for (std::size_t k = width - 1; k >= 1; --k) nodes[k] = nodes[2 * k] + nodes[2 * k + 1];
}

// Root value if leaf `leaf` held `value` instead.
inline double RootWithLeaf(std::span<const double> nodes, std::size_t width, std::size_t leaf,
                           double value) {
  std::size_t k = width + leaf;
  double acc = value;
  while (k > 1) {
    acc = (k & 1U) ? nodes[k - 1] + acc : acc + nodes[k + 1];
    k >>= 1;
  }
  return acc;
}

inline void SetLeaf(std::span<double> nodes, std::size_t width, std::size_t leaf, double value) {
  std::size_t k = width + leaf;
  nodes[k] = value;
  for (k >>= 1; k >= 1; k >>= 1) nodes[k] = nodes[2 * k] + nodes[2 * k + 1];
}

inline double RootOf(std::span<const double> nodes) { return nodes.size() > 1 ? nodes[1] : 0.0; }

}  // namespace eigengreedy::detail
