"""Implication network of a posiform, exact max flow, and the roof dual.

Nodes: 0 is the source (the constant-1 literal), 1 the sink (its
complement); literal with code c sits at node c + 2.  The complement of any
node n is n ^ 1.  Each posiform term a·u·v contributes arcs (u → v̄) and
(v → ū) of capacity a/2; a linear term a·u contributes (source → ū) and
(u → sink).  Capacities are stored as exact integers after multiplying by
``scale`` = 2 × (lcm of coefficient denominators): an arc's stored capacity
is its energy capacity times ``scale``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from .model import Coeff, Qubo
from .posiform import Posiform, to_posiform

SOURCE = 0
SINK = 1

_INT32_MAX = 2**31 - 1


def complement_node(node: int) -> int:
    return node ^ 1


def literal_node(var: int, complemented: bool = False) -> int:
    return 2 * var + int(complemented) + 2


@dataclass(frozen=True)
class ImplicationNetwork:
    """Merged, canonically ordered arc arrays over 2N+2 nodes."""

    num_vars: int
    scale: int
    tails: np.ndarray
    heads: np.ndarray
    caps: np.ndarray

    @property
    def num_nodes(self) -> int:
        return 2 * self.num_vars + 2

    @property
    def num_arcs(self) -> int:
        return len(self.caps)

    @cached_property
    def _arc_keys(self) -> np.ndarray:
        # Sorted because arcs come out of a canonical CSR.
        return self.tails.astype(np.int64) * self.num_nodes + self.heads

    @cached_property
    def skew_index(self) -> np.ndarray | None:
        """Index of each arc's complement-reversed partner, or None.

        Partner of (u → v) is (v̄ → ū); the network is skew-symmetric when
        every arc has a partner of equal capacity.
        """
        if self.num_arcs == 0:
            return np.empty(0, dtype=np.int64)
        keys = self._arc_keys
        skew_keys = (self.heads ^ 1).astype(np.int64) * self.num_nodes + (self.tails ^ 1)
        idx = np.searchsorted(keys, skew_keys)
        idx = np.clip(idx, 0, len(keys) - 1)
        ok = (keys[idx] == skew_keys) & (self.caps[idx] == self.caps)
        return idx if bool(ok.all()) else None

    @property
    def is_skew_symmetric(self) -> bool:
        return self.skew_index is not None

    def arc_dict(self) -> dict[tuple[int, int], int]:
        return {
            (int(u), int(v)): int(c)
            for u, v, c in zip(self.tails, self.heads, self.caps)
        }

    def capacity_fraction(self, u: int, v: int) -> Fraction:
        """Capacity of arc (u, v) in energy units."""
        return Fraction(self.arc_dict().get((u, v), 0), self.scale)

    def to_edge_list_text(self) -> str:
        """Debug export: one ``<from> <to> <capacity>`` line per arc."""
        lines = [
            f"{int(u)} {int(v)} {int(c)}"
            for u, v, c in zip(self.tails, self.heads, self.caps)
        ]
        return "\n".join(lines)

    @classmethod
    def from_arcs(cls, num_vars: int, arcs, scale: int = 2) -> "ImplicationNetwork":
        """Build directly from (tail, head, capacity) triples (test helper).

        Parallel arcs merge by capacity addition; no skew closure is added.
        """
        num_nodes = 2 * num_vars + 2
        if not arcs:
            empty = np.empty(0, dtype=np.int64)
            return cls(num_vars, scale, empty, empty, empty)
        tails = np.array([a[0] for a in arcs], dtype=np.int64)
        heads = np.array([a[1] for a in arcs], dtype=np.int64)
        caps = np.array([a[2] for a in arcs], dtype=np.int64)
        return cls(num_vars, scale, *_merge_arcs(tails, heads, caps, num_nodes))


def _merge_arcs(tails, heads, caps, num_nodes):
    m = csr_matrix((caps, (tails, heads)), shape=(num_nodes, num_nodes))
    m.sum_duplicates()
    out_tails = np.repeat(np.arange(num_nodes, dtype=np.int64), np.diff(m.indptr))
    return out_tails, m.indices.astype(np.int64), m.data.astype(np.int64)


def _denominator_lcm(p: Posiform) -> int:
    lcm = 1
    for a in p.linear.values():
        if isinstance(a, Fraction):
            lcm = math.lcm(lcm, a.denominator)
    for a in p.quadratic.values():
        if isinstance(a, Fraction):
            lcm = math.lcm(lcm, a.denominator)
    return lcm


def build_network(p: Posiform) -> ImplicationNetwork:
    """Implication network of ``p``; skew-symmetric by construction."""
    denom = _denominator_lcm(p)
    scale = 2 * denom
    num_nodes = 2 * p.num_vars + 2
    chunks_t, chunks_h, chunks_c = [], [], []
    if p.quadratic:
        keys = np.array(list(p.quadratic.keys()), dtype=np.int64)
        vals = np.fromiter(
            (int(a * denom) for a in p.quadratic.values()),
            dtype=np.int64,
            count=len(p.quadratic),
        )
        nu = keys[:, 0] + 2
        nv = keys[:, 1] + 2
        chunks_t += [nu, nv]
        chunks_h += [nv ^ 1, nu ^ 1]
        chunks_c += [vals, vals]
    if p.linear:
        codes = np.fromiter(p.linear.keys(), dtype=np.int64, count=len(p.linear))
        vals = np.fromiter(
            (int(a * denom) for a in p.linear.values()),
            dtype=np.int64,
            count=len(p.linear),
        )
        nl = codes + 2
        chunks_t += [np.full(len(nl), SOURCE, dtype=np.int64), nl]
        chunks_h += [nl ^ 1, np.full(len(nl), SINK, dtype=np.int64)]
        chunks_c += [vals, vals]
    if not chunks_t:
        empty = np.empty(0, dtype=np.int64)
        return ImplicationNetwork(p.num_vars, scale, empty, empty, empty)
    tails = np.concatenate(chunks_t)
    heads = np.concatenate(chunks_h)
    caps = np.concatenate(chunks_c)
    return ImplicationNetwork(p.num_vars, scale, *_merge_arcs(tails, heads, caps, num_nodes))


@dataclass(frozen=True)
class FlowResult:
    """An exact maximum flow together with its symmetrized residual.

    ``flow2`` holds, per arc, twice the symmetrized net flow (net convention:
    flow in the reverse direction is negative), so residual capacities stay
    integral: residual2 = 2·cap − flow2 on forward arcs, and flow2 on reverse
    arcs.  ``flow_value`` is in scaled units (divide by ``network.scale`` for
    energy units).
    """

    network: ImplicationNetwork
    flow_value: int
    flow2: np.ndarray
    symmetric: bool

    @property
    def source(self) -> int:
        return SOURCE

    @property
    def sink(self) -> int:
        return SINK

    @cached_property
    def residual2(self) -> np.ndarray:
        return 2 * self.network.caps - self.flow2

    def flow_fractions(self) -> dict[tuple[int, int], Fraction]:
        """Net symmetrized flow per arc, in energy units."""
        net = self.network
        return {
            (int(u), int(v)): Fraction(int(f2), 2 * net.scale)
            for u, v, f2 in zip(net.tails, net.heads, self.flow2)
        }

    def residual_caps(self) -> dict[tuple[int, int], Fraction]:
        """Residual capacities (energy units) for all residual arcs."""
        net = self.network
        out: dict[tuple[int, int], Fraction] = {}
        arc_set = set(zip(net.tails.tolist(), net.heads.tolist()))
        for u, v, c, f2 in zip(net.tails, net.heads, net.caps, self.flow2):
            out[(int(u), int(v))] = Fraction(int(2 * c - f2), 2 * net.scale)
            if (int(v), int(u)) not in arc_set and f2 > 0:
                out[(int(v), int(u))] = Fraction(int(f2), 2 * net.scale)
        return out

    def residual_adjacency(self) -> csr_matrix:
        """Boolean CSR over nodes: an entry per positive-residual arc."""
        net = self.network
        n = net.num_nodes
        fwd = self.residual2 > 0
        rev = self.flow2 > 0
        tails = np.concatenate([net.tails[fwd], net.heads[rev]])
        heads = np.concatenate([net.heads[fwd], net.tails[rev]])
        data = np.ones(len(tails), dtype=np.int8)
        m = csr_matrix((data, (tails, heads)), shape=(n, n))
        m.sum_duplicates()
        return m


def _net_flow_per_arc(net: ImplicationNetwork, flow_csr) -> np.ndarray:
    """Align scipy's flow matrix entries with the network's arc order."""
    n = net.num_nodes
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(flow_csr.indptr))
    keys = rows * n + flow_csr.indices
    want = net._arc_keys
    idx = np.searchsorted(keys, want)
    if len(keys) == 0 or (keys[np.clip(idx, 0, len(keys) - 1)] != want).any():
        raise AssertionError("flow matrix is missing arc entries")
    return flow_csr.data[idx].astype(np.int64)


def _dinic(num_nodes: int, tails, heads, caps, source: int, sink: int):
    """Plain Dinic on Python ints (exact for arbitrarily large capacities)."""
    head_of: list[int] = []
    rem: list[int] = []
    nxt: list[list[int]] = [[] for _ in range(num_nodes)]
    for u, v, c in zip(tails.tolist(), heads.tolist(), caps.tolist()):
        nxt[u].append(len(head_of))
        head_of.append(v)
        rem.append(int(c))
        nxt[v].append(len(head_of))
        head_of.append(u)
        rem.append(0)
    total = 0
    while True:
        level = [-1] * num_nodes
        level[source] = 0
        queue = [source]
        for u in queue:
            for aid in nxt[u]:
                if rem[aid] > 0 and level[head_of[aid]] < 0:
                    level[head_of[aid]] = level[u] + 1
                    queue.append(head_of[aid])
        if level[sink] < 0:
            break
        it = [0] * num_nodes
        # Iterative blocking-flow DFS.
        while True:
            path: list[int] = []
            u = source
            while u != sink:
                advanced = False
                while it[u] < len(nxt[u]):
                    aid = nxt[u][it[u]]
                    if rem[aid] > 0 and level[head_of[aid]] == level[u] + 1:
                        path.append(aid)
                        u = head_of[aid]
                        advanced = True
                        break
                    it[u] += 1
                if not advanced:
                    if not path:
                        u = None
                        break
                    level[u] = -1
                    aid = path.pop()
                    u = tails_of(aid, head_of)
            if u is None:
                break
            bottleneck = min(rem[aid] for aid in path)
            for aid in path:
                rem[aid] -= bottleneck
                rem[aid ^ 1] += bottleneck
            total += bottleneck
    flows = np.array(
        [int(c) - rem[2 * k] for k, c in enumerate(caps.tolist())], dtype=object
    )
    return total, flows


def tails_of(aid: int, head_of: list[int]) -> int:
    return head_of[aid ^ 1]


def _cancel_antiparallel(net: ImplicationNetwork, flows: np.ndarray) -> np.ndarray:
    """Convert per-arc flows to the net convention (f(u,v) = -f(v,u))."""
    keys = net._arc_keys
    rev_keys = net.heads.astype(np.int64) * net.num_nodes + net.tails
    idx = np.searchsorted(keys, rev_keys)
    idx = np.clip(idx, 0, max(len(keys) - 1, 0))
    has_rev = keys[idx] == rev_keys
    out = flows.copy()
    for k in np.nonzero(has_rev)[0].tolist():
        r = int(idx[k])
        if r > k:
            net_f = out[k] - out[r]
            out[k] = net_f
            out[r] = -net_f
    return out


def max_flow(net: ImplicationNetwork, backend: str = "auto") -> FlowResult:
    """Exact maximum source→sink flow; symmetrized when the network is
    skew-symmetric (flow on (u→v) equals flow on (v̄→ū))."""
    if backend not in ("auto", "scipy", "dinic"):
        raise ValueError(f"unknown backend {backend!r}")
    if net.num_arcs == 0:
        return FlowResult(net, 0, np.empty(0, dtype=np.int64), True)
    use_scipy = backend == "scipy"
    if backend == "auto":
        source_total = int(net.caps[net.tails == SOURCE].sum())
        use_scipy = int(net.caps.max()) <= _INT32_MAX and source_total <= _INT32_MAX
    if use_scipy:
        graph = csr_matrix(
            (net.caps.astype(np.int32), (net.tails, net.heads)),
            shape=(net.num_nodes, net.num_nodes),
        )
        res = maximum_flow(graph, SOURCE, SINK)
        value = int(res.flow_value)
        flows = _net_flow_per_arc(net, res.flow)
    else:
        value, raw = _dinic(net.num_nodes, net.tails, net.heads, net.caps, SOURCE, SINK)
        flows = _cancel_antiparallel(net, raw)
    skew = net.skew_index
    if skew is not None and len(skew):
        flow2 = flows + flows[skew]
        symmetric = True
    else:
        flow2 = 2 * flows
        symmetric = skew is not None
    flow2 = np.asarray(flow2, dtype=object if flow2.dtype == object else np.int64)
    return FlowResult(net, value, flow2, symmetric)


def roof_dual(q: Qubo, backend: str = "auto") -> Coeff:
    """Max-flow lower bound on min_x q(x); exact when q is submodular."""
    p = to_posiform(q)
    net = build_network(p)
    result = max_flow(net, backend=backend)
    bound = p.constant + Fraction(result.flow_value, net.scale)
    return int(bound) if bound.denominator == 1 else bound
