import random

import pytest

from foltab.documents import format_tableau, parse_tableau, tableau_equal
from foltab.hyperconv import (
    OMEGA,
    hyper_convert,
    measure_string,
    node_measure,
)
from foltab.syntax import Clause, Literal
from foltab.tableaux import (
    ResourceLimitError,
    atomic_cut_clauses,
    is_hyper,
    is_leaf_closed,
    is_regular,
    match_clause,
    prove,
    tableau_clauses,
)
from helpers import random_ground_clauses, tt_satisfiable

LEFT = """tableau
  ~q
    ~p
      p -> 2
    q -> 1
"""

MIDDLE = """tableau
  ~p
    p -> 1
  q
    ~q -> 1
"""

GOLDEN = """tableau
  p
    ~p -> 1
    q
      ~q -> 2
"""


def test_conversion_runs_two_rounds_to_golden_tree():
    tab = parse_tableau(LEFT)
    out, trace = hyper_convert(tab)
    assert trace.total_rounds == 2
    assert format_tableau(out) == GOLDEN
    assert is_hyper(out)
    assert is_regular(out)
    assert is_leaf_closed(out)


def test_conversion_measures_decrease():
    tab = parse_tableau(LEFT)
    _, trace = hyper_convert(tab)
    measures = [r.measure for r in trace.rounds]
    assert measures == [(0, OMEGA, 2), (0, OMEGA, 1)]
    assert measure_string(measures[0]) == "0 w 2"


def test_node_measure_on_figures():
    left = parse_tableau(LEFT)
    assert node_measure(left.root, left.root) == (0, OMEGA, 2)
    middle = parse_tableau(MIDDLE)
    assert node_measure(middle.root, middle.root) == (0, OMEGA, 1)
    leaf = left.root.children[0].children[1]  # the q leaf
    assert node_measure(left.root, leaf)[-2:] == (OMEGA, 0)


def test_already_hyper_unchanged():
    tab = parse_tableau(GOLDEN)
    out, trace = hyper_convert(tab)
    assert trace.total_rounds == 0
    assert format_tableau(out) == GOLDEN


def test_conversion_idempotent():
    tab = parse_tableau(LEFT)
    once, _ = hyper_convert(tab)
    twice, trace = hyper_convert(once)
    assert trace.total_rounds == 0
    assert tableau_equal(once, twice)


def test_resource_limit():
    tab = parse_tableau(LEFT)
    with pytest.raises(ResourceLimitError):
        hyper_convert(tab, max_nodes=3)


def test_random_refutation_corpus():
    rng = random.Random(271)
    converted = 0
    for _ in range(160):
        clauses = random_ground_clauses(rng, max_atoms=5, max_clauses=7)
        if tt_satisfiable(clauses):
            continue
        res = prove(clauses, max_depth=12)
        assert res.proved
        out, trace = hyper_convert(res.tableau)
        converted += 1
        assert is_hyper(out)
        assert is_regular(out)
        assert is_leaf_closed(out)
        # output clauses are instances of the refuted clause set
        for inst in tableau_clauses(out):
            assert any(match_clause(inst, c) is not None for c in clauses)
        # a regular leaf-closed hyper tableau has no atomic cuts
        assert atomic_cut_clauses(out) == []
        # measures strictly decrease
        ms = [r.measure for r in trace.rounds]
        assert all(m2 < m1 for m1, m2 in zip(ms, ms[1:]))
    assert converted >= 30
