"""Independent exact solvers used as ground truth.

Nothing here touches the posiform/network pipeline: QUBO minimization is
plain enumeration over assignment chunks, Maximum Clique is a bitset
branch-and-bound with a greedy-coloring bound, Maximum Cut is enumeration.
Size guards are hard errors; a silently degraded oracle would invalidate
every acceptance run built on it.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import SizeGuardError
from .model import Coeff, Qubo
from .graphs import Graph

logger = logging.getLogger(__name__)

BRUTE_FORCE_MAX_VARS = 25
MAX_CUT_MAX_VARS = 25
_CHUNK_BITS = 18


def _scaled_int_arrays(q: Qubo):
    """Linear/quadratic coefficient arrays times the denominator lcm."""
    denom = 1
    for a in q.linear.values():
        if isinstance(a, Fraction):
            denom = math.lcm(denom, a.denominator)
    for a in q.quadratic.values():
        if isinstance(a, Fraction):
            denom = math.lcm(denom, a.denominator)
    if isinstance(q.offset, Fraction):
        denom = math.lcm(denom, q.offset.denominator)
    lin = np.zeros(q.num_vars, dtype=np.int64)
    for i, a in q.linear.items():
        lin[i] = int(a * denom)
    if q.quadratic:
        pairs = np.array(sorted(q.quadratic), dtype=np.int64)
        quad = np.array([int(q.quadratic[tuple(p)] * denom) for p in pairs.tolist()], dtype=np.int64)
    else:
        pairs = np.empty((0, 2), dtype=np.int64)
        quad = np.empty(0, dtype=np.int64)
    return denom, lin, pairs, quad, int(q.offset * denom)


def brute_force_qubo(
    q: Qubo, enumerate_all: bool = False
) -> tuple[Coeff, list[tuple[int, ...]]]:
    """Exact minimum by full enumeration (num_vars <= 25, hard guard).

    Returns (min energy, minimizers); the minimizer list is complete when
    ``enumerate_all``, otherwise holds a single argmin.
    """
    n = q.num_vars
    if n > BRUTE_FORCE_MAX_VARS:
        raise SizeGuardError(f"brute_force_qubo limited to {BRUTE_FORCE_MAX_VARS} variables, got {n}")
    if n == 0:
        return q.offset, [()]
    denom, lin, pairs, quad, off = _scaled_int_arrays(q)
    best = None
    argmins: list[int] = []
    var_idx = np.arange(n, dtype=np.int64)
    for start in range(0, 1 << n, 1 << _CHUNK_BITS):
        stop = min(start + (1 << _CHUNK_BITS), 1 << n)
        codes = np.arange(start, stop, dtype=np.int64)
        bits = ((codes[:, None] >> var_idx[None, :]) & 1).astype(np.int64)
        energy = bits @ lin + off
        if len(quad):
            energy += (bits[:, pairs[:, 0]] & bits[:, pairs[:, 1]]) @ quad
        chunk_min = int(energy.min())
        if best is None or chunk_min < best:
            best = chunk_min
            argmins = []
        if chunk_min == best:
            hits = codes[energy == best]
            if enumerate_all:
                argmins.extend(int(h) for h in hits)
            elif not argmins:
                argmins = [int(hits[0])]
    assert best is not None
    minimum = Fraction(best, denom)
    minimum = int(minimum) if minimum.denominator == 1 else minimum
    assignments = [tuple((code >> i) & 1 for i in range(n)) for code in argmins]
    return minimum, assignments


def _greedy_clique(g: Graph) -> int:
    """Bitmask of a greedily grown clique (initial lower bound)."""
    best = 0
    order = sorted(range(g.n), key=lambda v: -g.degree(v))
    adj = g.adjacency_bits
    for seed in order[: min(g.n, 8)]:
        mask = 1 << seed
        cand = adj[seed]
        while cand:
            v = (cand & -cand).bit_length() - 1
            mask |= 1 << v
            cand &= adj[v]
        if mask.bit_count() > best.bit_count():
            best = mask
    return best


def _color_order(vertices: list[int], adj) -> tuple[list[int], list[int]]:
    """Greedy coloring; returns vertices ordered by color with bounds."""
    classes: list[int] = []  # bitmask per color class
    color_of: dict[int, int] = {}
    for v in vertices:
        placed = False
        for ci, cmask in enumerate(classes):
            if not (adj[v] & cmask):
                classes[ci] = cmask | (1 << v)
                color_of[v] = ci
                placed = True
                break
        if not placed:
            color_of[v] = len(classes)
            classes.append(1 << v)
    ordered = sorted(vertices, key=lambda v: color_of[v])
    bounds = [color_of[v] + 1 for v in ordered]
    return ordered, bounds


def exact_max_clique(g: Graph) -> tuple[int, ...]:
    """A maximum clique via branch-and-bound with a greedy-coloring bound."""
    if g.n == 0:
        return ()
    adj = g.adjacency_bits
    best_mask = _greedy_clique(g)
    best_size = best_mask.bit_count()
    nodes_visited = 0

    def expand(cand_mask: int, current_mask: int, size: int) -> None:
        nonlocal best_mask, best_size, nodes_visited
        nodes_visited += 1
        if nodes_visited % 500000 == 0:
            logger.info("clique search: %d nodes, best=%d", nodes_visited, best_size)
        vertices = []
        m = cand_mask
        while m:
            v = (m & -m).bit_length() - 1
            vertices.append(v)
            m &= m - 1
        ordered, bounds = _color_order(vertices, adj)
        for k in range(len(ordered) - 1, -1, -1):
            if size + bounds[k] <= best_size:
                return
            v = ordered[k]
            new_mask = current_mask | (1 << v)
            new_cand = cand_mask & adj[v]
            if new_cand:
                expand(new_cand, new_mask, size + 1)
            elif size + 1 > best_size:
                best_mask, best_size = new_mask, size + 1
            cand_mask &= ~(1 << v)

    expand((1 << g.n) - 1, 0, 0)
    result = tuple(v for v in range(g.n) if best_mask >> v & 1)
    if not g.is_clique(result):
        raise AssertionError("branch-and-bound produced a non-clique")
    return result


def exact_max_cut(g: Graph) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], int]:
    """Exhaustive Maximum Cut (n <= 25, hard guard)."""
    if g.n > MAX_CUT_MAX_VARS:
        raise SizeGuardError(f"exact_max_cut limited to {MAX_CUT_MAX_VARS} vertices, got {g.n}")
    if g.n == 0:
        return ((), ()), 0
    if g.n == 1:
        return (((0,), ())), 0
    ends = np.array(g.edges, dtype=np.int64).reshape(-1, 2)
    best_cut = -1
    best_code = 0
    # Vertex 0 pinned to side 0; complements give the same cut.
    half = 1 << (g.n - 1)
    for start in range(0, half, 1 << _CHUNK_BITS):
        stop = min(start + (1 << _CHUNK_BITS), half)
        codes = np.arange(start, stop, dtype=np.int64) << 1
        if len(ends):
            sides_u = (codes[:, None] >> ends[None, :, 0]) & 1
            sides_v = (codes[:, None] >> ends[None, :, 1]) & 1
            cuts = (sides_u != sides_v).sum(axis=1)
        else:
            cuts = np.zeros(len(codes), dtype=np.int64)
        k = int(cuts.argmax())
        if int(cuts[k]) > best_cut:
            best_cut = int(cuts[k])
            best_code = int(codes[k])
    side1 = tuple(v for v in range(g.n) if best_code >> v & 1)
    side0 = tuple(v for v in range(g.n) if not best_code >> v & 1)
    return (side0, side1), best_cut


@dataclass(frozen=True)
class PersistencyReport:
    """Outcome of checking persistency claims against all minimizers."""

    ok: bool
    num_minimizers: int
    strong_violations: tuple[str, ...] = ()
    weak_satisfied: bool = True
    detail: str = ""


def verify_persistency(q: Qubo, result) -> PersistencyReport:
    """Enumerate all minimizers of ``q`` and check a persistency claim.

    ``result`` may be a PersistencyResult (strong/weak maps) or a
    ProbeOutcome (fixed map plus relations).  Strong claims must hold in
    every minimizer; the weak/probe assignment must hold simultaneously in
    at least one.
    """
    if q.num_vars > BRUTE_FORCE_MAX_VARS:
        raise SizeGuardError(f"verification limited to {BRUTE_FORCE_MAX_VARS} variables")
    _, minimizers = brute_force_qubo(q, enumerate_all=True)

    strong = getattr(result, "strong", {})
    violations = []
    for var, val in sorted(strong.items()):
        bad = [m for m in minimizers if m[var] != val]
        if bad:
            violations.append(
                f"strong x{var}={val} violated by {len(bad)}/{len(minimizers)} minimizers"
            )

    if hasattr(result, "relations"):  # ProbeOutcome
        fixed = result.fixed

        def agrees(m) -> bool:
            if any(m[var] != val for var, val in fixed.items()):
                return False
            return all(
                m[j] == (1 - m[i] if comp else m[i])
                for j, i, comp in result.relations
            )

    else:
        weak = result.weak

        def agrees(m) -> bool:
            return all(m[var] == val for var, val in weak.items())

    weak_ok = any(agrees(m) for m in minimizers)
    ok = not violations and weak_ok
    detail = "" if ok else "; ".join(violations) or "no minimizer matches the weak/probe assignment"
    return PersistencyReport(
        ok=ok,
        num_minimizers=len(minimizers),
        strong_violations=tuple(violations),
        weak_satisfied=weak_ok,
        detail=detail,
    )
