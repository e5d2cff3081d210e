#!/usr/bin/env python3
# Copyright 2026 The exforce Authors
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
"""Brute-force Expected Force by enumerating two-step transmission sequences.

For a root v, every sequence of two transmissions is listed: v infects x,
then either v or x infects some y outside {v, x}. Each sequence is one
cluster entry (so a star {v, x, y} appears twice, once per order). The
out-degree of the infected set is counted edge by edge. The printed values
are frozen into tests/test_expected_force.cpp and tests/acceptance.cpp.
"""

import itertools
import math
from fractions import Fraction


def adjacency(edges):
    adj = {}
    for u, v in edges:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def out_degree(adj, members):
    return sum(1 for a in members for b in adj[a] if b not in members)


def clusters(adj, root):
    found = []
    for x in adj[root]:
        for src in (root, x):
            for y in adj[src]:
                if y in (root, x):
                    continue
                found.append(out_degree(adj, {root, x, y}))
    return found


def expected_force(adj, root):
    degrees = clusters(adj, root)
    total = sum(degrees)
    if total == 0:
        return 0.0, degrees
    h = 0.0
    for d in degrees:
        if d:
            p = d / total
            h -= p * math.log(p)
    return h, degrees


GRAPHS = {
    "star_s3": [(0, 1), (0, 2), (0, 3)],
    "path_p4": [(0, 1), (1, 2), (2, 3)],
    "triangle_k3": [(0, 1), (1, 2), (0, 2)],
    "paw": [(0, 1), (1, 2), (0, 2), (2, 3)],
    "k4": list(itertools.combinations(range(4), 2)),
}


def main():
    for name, edges in GRAPHS.items():
        adj = adjacency(edges)
        for v in sorted(adj):
            ef, degrees = expected_force(adj, v)
            hist = {d: degrees.count(d) for d in sorted(set(degrees))}
            print(f"{name} node {v}: ef={ef!r} clusters={len(degrees)} hist={hist}")
    # Entropy kernel example: histogram {1: 2, 2: 1}.
    total = 1 * 2 + 2 * 1
    h = -(2 * (1 / total) * math.log(1 / total) + (2 / total) * math.log(2 / total))
    print(f"entropy {{1:2, 2:1}} = {h!r}")
    print(f"ln 6 = {math.log(6)!r}, ln 3 = {math.log(3)!r}, ln 2 = {math.log(2)!r}")
    # Pearson example [1,2,3,4] vs [1,3,2,4], exact.
    x, y = [1, 2, 3, 4], [1, 3, 2, 4]
    mx, my = Fraction(sum(x), 4), Fraction(sum(y), 4)
    sxy = sum((a - mx) * (b - my) for a, b in zip(x, y))
    sxx = sum((a - mx) ** 2 for a in x)
    syy = sum((b - my) ** 2 for b in y)
    print(f"pearson r^2 = {sxy * sxy / (sxx * syy)} (r = {float(sxy) / math.sqrt(sxx * syy)!r})")


if __name__ == "__main__":
    main()
