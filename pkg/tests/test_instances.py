"""Corpus construction, frozen verdicts, and cap discipline."""

import pytest

from dglift.config import EngineConfig
from dglift.errors import CapExceeded
from dglift.homotopy import HomSpace
from dglift.instances import battery_pairs, build_corpus
from dglift.liftcheck import naive_lift_battery
from dglift.scalars import DEFAULT_PRIME, PrimeField, RATIONALS


def test_corpus_builds_under_both_backends():
    for field in (RATIONALS, PrimeField(DEFAULT_PRIME)):
        corpus = build_corpus(EngineConfig(field=field, max_degree=8))
        assert set(corpus) == {"exterior", "koszul", "tate", "tate2", "prefix", "mixed"}
        assert len(battery_pairs(corpus)) >= 8


def test_prefix_instance_verdicts():
    corpus = build_corpus(EngineConfig(field=RATIONALS, max_degree=8))
    inst = corpus["prefix"]
    r_in = naive_lift_battery(inst.modules["M_in"], inst.diag, name="M_in")
    r_out = naive_lift_battery(inst.modules["M_out"], inst.diag, name="M_out")
    # the A-valued differential entry lifts, the outside entry does not
    assert r_in.verdicts["i"] is True and r_in.verdicts["ii"] is True
    assert r_out.verdicts["i"] is False and r_out.verdicts["ii"] is False
    assert r_in.lemma_free_equivalence and r_out.lemma_free_equivalence


def test_tate_module_liftable_without_summand_status():
    # liftable over the trivial-extension-like setting, but (ix) cannot be
    # decided without the verified vanishing hypotheses
    corpus = build_corpus(EngineConfig(field=RATIONALS, max_degree=8))
    inst = corpus["koszul"]
    r = naive_lift_battery(inst.modules["K"], inst.diag, name="K")
    assert r.verdicts["i"] is True
    assert r.verdicts["ix"] is None
    assert not r.ar1.holds


def test_cap_exceeded_is_loud():
    corpus = build_corpus(EngineConfig(field=RATIONALS, max_degree=3))
    inst = corpus["exterior"]
    M = inst.modules["three_step"]  # top generator degree 4 > cap 3
    with pytest.raises(CapExceeded):
        HomSpace(M, M, 0).dim_K
