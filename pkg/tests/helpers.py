"""Shared test utilities, including independent oracles.

The max-flow oracle here is a naive Edmonds-Karp sharing no code with the
package's flow kernel, so value agreement between the two is meaningful.
"""

from __future__ import annotations

from collections import deque

import numpy as np

from quboprep.model import Qubo


def edmonds_karp(num_nodes: int, arcs, source: int, sink: int) -> int:
    """Max-flow value by BFS augmenting paths; arcs = (u, v, cap) triples."""
    cap = {}
    adj: dict[int, set[int]] = {}
    for u, v, c in arcs:
        cap[(u, v)] = cap.get((u, v), 0) + int(c)
        cap.setdefault((v, u), cap.get((v, u), 0))
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    total = 0
    while True:
        parent = {source: None}
        queue = deque([source])
        while queue and sink not in parent:
            u = queue.popleft()
            for v in adj.get(u, ()):
                if v not in parent and cap.get((u, v), 0) > 0:
                    parent[v] = u
                    queue.append(v)
        if sink not in parent:
            return total
        path = []
        v = sink
        while parent[v] is not None:
            path.append((parent[v], v))
            v = parent[v]
        bottleneck = min(cap[(u, w)] for u, w in path)
        for u, w in path:
            cap[(u, w)] -= bottleneck
            cap[(w, u)] += bottleneck
        total += bottleneck


def enumerate_energies(q: Qubo):
    """All (assignment, energy) pairs by direct evaluation (n small)."""
    n = q.num_vars
    for code in range(1 << n):
        values = tuple((code >> i) & 1 for i in range(n))
        yield values, q.energy(values)


def exact_min(q: Qubo):
    best = None
    argmins = []
    for values, energy in enumerate_energies(q):
        if best is None or energy < best:
            best, argmins = energy, [values]
        elif energy == best:
            argmins.append(values)
    return best, argmins


def random_qubo(rng: np.random.Generator, n: int, coeff_range=(-4, 4), density=0.5) -> Qubo:
    lin = {i: int(rng.integers(coeff_range[0], coeff_range[1] + 1)) for i in range(n)}
    quad = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                quad[(i, j)] = int(rng.integers(coeff_range[0], coeff_range[1] + 1))
    return Qubo.from_terms(n, lin, quad)
