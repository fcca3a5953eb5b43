#!/usr/bin/env python3
# Copyright 2026 The EigenGreedy Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Reference shrinkage intensities for the Ledoit-Wolf unit tests.

Regenerates the frozen table in tests/oracles/ledoit_wolf_frozen.hpp. The data
generator mirrors tests/oracles/portable_normal.hpp bit for bit (splitmix64 ->
open-interval uniform -> Box-Muller cosine branch).
"""

import math

import numpy as np

MASK = (1 << 64) - 1

# (seed, n, d)
CASES = [
    (1, 50, 20), (2, 20, 50), (3, 100, 5), (4, 10, 10), (5, 200, 30),
    (6, 30, 3), (7, 15, 40), (8, 60, 60), (9, 5, 8), (10, 80, 12),
]


class SplitMix:
    def __init__(self, seed):
        self.s = seed & MASK

    def next(self):
        self.s = (self.s + 0x9E3779B97F4A7C15) & MASK
        z = self.s
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
        return z ^ (z >> 31)

    def uniform(self):
        return ((self.next() >> 11) + 0.5) * (1.0 / 9007199254740992.0)

    def normal(self):
        u1 = self.uniform()
        u2 = self.uniform()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def dataset(seed, n, d):
    g = SplitMix(seed)
    x = np.empty((n, d))
    for i in range(n):
        for j in range(d):
            x[i, j] = g.normal() * (1.0 + (j % 3)) + 0.25 * j
    return x


def shrinkage(x):
    n, d = x.shape
    xc = x - x.mean(axis=0)
    s = xc.T @ xc / n
    m = np.trace(s) / d
    target = m * np.eye(d)
    dist2 = np.sum((s - target) ** 2) / d
    acc = 0.0
    for k in range(n):
        outer = np.outer(xc[k], xc[k])
        acc += np.sum((outer - s) ** 2) / d
    bbar2 = acc / (n * n)
    b2 = min(bbar2, dist2)
    return 0.0 if dist2 == 0.0 else b2 / dist2


def main():
    from sklearn.covariance import ledoit_wolf_shrinkage

    for seed, n, d in CASES:
        x = dataset(seed, n, d)
        delta = shrinkage(x)
        ref = ledoit_wolf_shrinkage(x, assume_centered=False)
        assert abs(delta - ref) < 1e-12, (seed, delta, ref)
        print(f"    {{{seed}, {n}, {d}, {float(delta)!r}}},")


if __name__ == "__main__":
    main()
