"""Vectorized branch analysis for probing on integer-coefficient problems.

Probing runs two persistency analyses per variable; going through dict-based
fix/posiform/network construction costs several O(terms) Python passes each.
This mirror keeps the problem as flat int64 arrays and fuses variable fixing,
the posiform rewrite and arc construction into numpy operations, feeding the
same max-flow and label-extraction code as the dict path.  The branch
problem keeps the full index space (the probed variable just loses its
terms), so returned labels are in the problem's own indices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .model import Qubo
from .network import SINK, SOURCE, ImplicationNetwork, _merge_arcs, max_flow
from .persistency import extract_labels


@dataclass(frozen=True)
class IntArrays:
    """Flat int64 view of a Qubo with all-integer coefficients."""

    num_vars: int
    lin: np.ndarray
    qi: np.ndarray
    qj: np.ndarray
    qv: np.ndarray
    offset: int

    @classmethod
    def from_qubo(cls, q: Qubo) -> "IntArrays | None":
        """None when any coefficient is non-integer."""
        if isinstance(q.offset, Fraction):
            return None
        if any(isinstance(a, Fraction) for a in q.linear.values()):
            return None
        if any(isinstance(a, Fraction) for a in q.quadratic.values()):
            return None
        lin = np.zeros(q.num_vars, dtype=np.int64)
        for i, a in q.linear.items():
            lin[i] = a
        m = len(q.quadratic)
        if m:
            keys = np.array(list(q.quadratic.keys()), dtype=np.int64)
            qi, qj = keys[:, 0], keys[:, 1]
            qv = np.fromiter(q.quadratic.values(), dtype=np.int64, count=m)
        else:
            qi = qj = qv = np.empty(0, dtype=np.int64)
        return cls(q.num_vars, lin, qi, qj, qv, int(q.offset))

    def energy(self, values: np.ndarray) -> int:
        """Exact energy of a 0/1 vector (int64 arithmetic)."""
        e = self.offset + int(values @ self.lin)
        if len(self.qv):
            e += int((values[self.qi] * values[self.qj]) @ self.qv)
        return e


def analyze_branch(
    arr: IntArrays, u: int, b: int, backend: str = "auto"
) -> tuple[dict[int, int], dict[int, int], Fraction]:
    """Persistency labels and bound of the subproblem with x_u := b.

    Returns (strong, weak, bound); labels use the parent index space and
    exclude u; the bound includes the fold-out delta of fixing u, so it
    lower-bounds the parent problem restricted to x_u = b.
    """
    lin = arr.lin.copy()
    touches = (arr.qi == u) | (arr.qj == u)
    delta = int(lin[u]) if b else 0
    if b and touches.any():
        other = np.where(arr.qi[touches] == u, arr.qj[touches], arr.qi[touches])
        np.add.at(lin, other, arr.qv[touches])
    lin[u] = 0
    keep = ~touches
    qi, qj, qv = arr.qi[keep], arr.qj[keep], arr.qv[keep]

    # Posiform rewrite: negative a·x_i·x_j becomes a on x_i plus (-a)·x_i·x̄_j.
    neg = qv < 0
    if neg.any():
        np.add.at(lin, qi[neg], qv[neg])
    cu = 2 * qi
    cv = 2 * qj + neg
    vals = np.abs(qv)

    lpos = lin > 0
    lneg = lin < 0
    constant = arr.offset + delta + int(lin[lneg].sum())
    lcodes = np.concatenate([2 * np.nonzero(lpos)[0], 2 * np.nonzero(lneg)[0] + 1])
    lvals = np.concatenate([lin[lpos], -lin[lneg]])

    num_nodes = 2 * arr.num_vars + 2
    nl = lcodes + 2
    tails = np.concatenate([cu + 2, cv + 2, np.full(len(nl), SOURCE, dtype=np.int64), nl])
    heads = np.concatenate([(cv + 2) ^ 1, (cu + 2) ^ 1, nl ^ 1, np.full(len(nl), SINK, dtype=np.int64)])
    caps = np.concatenate([vals, vals, lvals, lvals])

    if len(caps) == 0:
        weak = {v: 0 for v in range(arr.num_vars) if v != u}
        return {}, weak, Fraction(constant)

    net = ImplicationNetwork(arr.num_vars, 2, *_merge_arcs(tails, heads, caps, num_nodes))
    flow = max_flow(net, backend=backend)
    bound = Fraction(constant) + Fraction(flow.flow_value, 2)
    strong, weak = extract_labels(flow, arr.num_vars)
    strong.pop(u, None)
    weak.pop(u, None)
    return strong, weak, bound
