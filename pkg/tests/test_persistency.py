"""Soundness tests for strong/weak persistency extraction."""

import numpy as np
import pytest

from quboprep.model import Qubo, fix_variables
from quboprep.persistency import PersistencyResult, analyze, reduce

from helpers import exact_min, random_qubo


def test_unique_optimum_is_strong():
    res = analyze(Qubo.from_terms(1, {0: -2}))
    assert res.strong == {0: 1}
    assert res.weak == {0: 1}
    assert res.bound == -2


def test_isolated_variable_reported_weak_zero():
    res = analyze(Qubo.from_terms(2, {0: -1}))
    assert res.strong == {0: 1}
    assert res.weak == {0: 1, 1: 0}


def test_strong_subset_of_weak_enforced():
    with pytest.raises(ValueError):
        PersistencyResult(2, strong={0: 1}, weak={0: 0})


def test_path_center_vertex_is_strong():
    # P3's center sits in both maximum cliques.
    from quboprep.graphs import Graph
    from quboprep.problems import clique_qubo

    p3 = Graph.from_edges(3, [(0, 1), (1, 2)])
    res = analyze(clique_qubo(p3))
    assert res.strong == {1: 1}
    assert len(res.weak) == 3


@pytest.mark.parametrize("seed", range(40))
def test_soundness_on_random_instances(seed):
    rng = np.random.default_rng(1000 + seed)
    q = random_qubo(rng, int(rng.integers(2, 11)))
    res = analyze(q)
    minimum, minimizers = exact_min(q)
    assert res.bound <= minimum
    for var, val in res.strong.items():
        assert all(m[var] == val for m in minimizers), "strong label violated"
    assert any(
        all(m[var] == val for var, val in res.weak.items()) for m in minimizers
    ), "no minimizer realizes the weak assignment"


@pytest.mark.parametrize("seed", range(12))
def test_autarky_property(seed):
    rng = np.random.default_rng(2000 + seed)
    q = random_qubo(rng, 9)
    res = analyze(q)
    for _ in range(200):
        x = [int(b) for b in rng.integers(0, 2, q.num_vars)]
        overwritten = list(x)
        for var, val in res.weak.items():
            overwritten[var] = val
        assert q.energy(overwritten) <= q.energy(x)


def test_monotone_reporting():
    for seed in range(20):
        q = random_qubo(np.random.default_rng(3000 + seed), 8)
        res = analyze(q)
        assert res.strong_pct <= res.weak_pct


def test_percentages():
    res = analyze(Qubo.from_terms(4, {0: -2}))
    assert res.strong_pct == 25.0
    assert res.weak_pct == 100.0  # isolated variables get weak zeros
    assert analyze(Qubo.from_terms(0)).weak_pct == 100.0


class TestReduce:
    def test_empty_result_is_identity(self):
        q = random_qubo(np.random.default_rng(0), 5)
        red = reduce(q, PersistencyResult(5), mode="weak")
        assert red.reduced == q

    def test_mode_validation(self):
        q = Qubo.from_terms(2)
        with pytest.raises(ValueError):
            reduce(q, PersistencyResult(2), mode="both")
        with pytest.raises(ValueError):
            reduce(q, PersistencyResult(3), mode="weak")

    @pytest.mark.parametrize("seed", range(15))
    def test_weak_reduction_preserves_minimum(self, seed):
        rng = np.random.default_rng(4000 + seed)
        q = random_qubo(rng, int(rng.integers(3, 13)))
        res = analyze(q)
        red = reduce(q, res, mode="weak")
        assert exact_min(red.reduced)[0] + red.delta == exact_min(q)[0]

    def test_strong_reduction_keeps_all_optima(self):
        rng = np.random.default_rng(77)
        q = random_qubo(rng, 8)
        res = analyze(q)
        red = reduce(q, res, mode="strong")
        _, full_mins = exact_min(q)
        _, sub_mins = exact_min(red.reduced)
        lifted = {red.lift(m) for m in sub_mins}
        assert lifted == set(full_mins)

    def test_hamming_weak_reduction_lifts_to_a_maximum_clique(self):
        from quboprep.graphs import gen_hamming
        from quboprep.problems import clique_qubo, decode_clique

        g = gen_hamming(6, 2)
        q = clique_qubo(g)
        res = analyze(q)
        assert res.weak_pct == 100.0
        red = reduce(q, res, mode="weak")
        assert red.reduced.num_vars == 0
        support, valid = decode_clique(g, red.lift(()))
        assert valid
        assert len(support) == 32  # even-weight codewords form the maximum clique


def test_serialization_rows():
    q = Qubo.from_terms(3, {0: -2, 1: 3})
    res = analyze(q)
    text = res.to_csv_text()
    assert text.startswith("var,value,class")
    assert "0,1,strong" in text
    assert "strong_pct,weak_pct,bound" in text
