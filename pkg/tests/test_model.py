import math

import pytest
from hypothesis import given, strategies as st

from tacap.model import (
    ENV, INPUTS, MOTOR, OUTPUTS, PERSISTENT, CaType, CellAssembly, Checkpoint, Corpus, Declaration,
    Edge, EdgeKind, InvariantError, ScamParams, UnknownPrefix, ca_type_from_id, duration, fatigue_k,
    lifecycle_bounds,
)

import reference
from strategies import scam_params


def make_ca(ca_id="CA", seq=1, **params):
    base = dict(potn=10, thresh=2, igmax=7, igfat=6, p50=-1.0, igtig=0.0, igtex=0.4, d50=0.5)
    base.update(params)
    return CellAssembly(seq, ca_id, ca_type_from_id(ca_id), "test", ScamParams(**base))


@pytest.mark.parametrize("ca_id, expected", [
    ("CKEC", CaType.COGNITIVE), ("KKW", CaType.KINAESTHETIC), ("VKEG", CaType.VISUAL),
    ("TRHKH", CaType.TOUCH), ("MRAB", CaType.MOTOR),
])
def test_type_from_prefix(ca_id, expected):
    assert ca_type_from_id(ca_id) is expected


def test_unknown_prefix():
    with pytest.raises(UnknownPrefix):
        ca_type_from_id("XABC")
    with pytest.raises(InvariantError):
        ca_type_from_id("")


def test_perceptual_and_prefixes():
    assert {t for t in CaType if t.perceptual} == {CaType.VISUAL, CaType.TOUCH, CaType.KINAESTHETIC}
    assert [t.prefix for t in CaType] == ["C", "V", "T", "K", "M"]


def test_cell_assembly_id_rules():
    with pytest.raises(InvariantError):
        make_ca("Ckec")
    with pytest.raises(InvariantError):
        CellAssembly(1, "VKEG", CaType.COGNITIVE, "", make_ca().params)
    with pytest.raises(InvariantError):
        make_ca("C1")
    with pytest.raises(InvariantError):
        make_ca("CA", seq=0)


def test_edge_endpoint_rules():
    d = (Declaration("CA", INPUTS, 0, 0, 0),)
    Edge(ENV, "CA", EdgeKind.ENV_IN, d, "door")
    Edge("CA", MOTOR, EdgeKind.MOTOR_OUT, d)
    with pytest.raises(InvariantError):
        Edge("CA", "CA", EdgeKind.EXCITE, d)
    with pytest.raises(InvariantError):
        Edge(ENV, "CA", EdgeKind.EXCITE, d)
    with pytest.raises(InvariantError):
        Edge("CA", MOTOR, EdgeKind.INHIBIT, d)
    with pytest.raises(InvariantError):
        Edge("CA", "CB", EdgeKind.MOTOR_OUT, d)
    with pytest.raises(InvariantError):
        Edge("CA", "CB", EdgeKind.EXCITE, ())
    with pytest.raises(InvariantError):
        Declaration("CA", "SIDEWAYS", 0, 0, 0)
    with pytest.raises(InvariantError):
        Declaration("CA", INPUTS, 0, 0, 4)


def test_checkpoint_tolerance_nonnegative():
    with pytest.raises(InvariantError):
        Checkpoint("x", "CA", 1.0, -0.1)


def test_corpus_invariants():
    a, b = make_ca("CA", 1), make_ca("CB", 2)
    Corpus((a, b))
    with pytest.raises(InvariantError):
        Corpus((a, make_ca("CA", 2)))
    with pytest.raises(InvariantError):
        Corpus((b, a))
    with pytest.raises(InvariantError):
        Corpus((a,), end_time=0.1)
    assert Corpus((a,)).end_time == 0.5
    assert Corpus(()).end_time == 0.0


def test_duration_examples(coffee):
    assert duration(coffee["CKEC"]) == pytest.approx(0.4)
    assert duration(coffee["CRHH"]) is PERSISTENT
    assert duration(make_ca(igtig=1.0, igtex=1.0, d50=1.2)) == 0.0


def test_fatigue_examples(coffee):
    assert fatigue_k(coffee["VAHWA"]) == 4
    assert fatigue_k(coffee["CRHH"]) == 0


def test_lifecycle_bounds_examples(coffee):
    b = lifecycle_bounds(coffee["CKEC"])
    assert tuple(b) == pytest.approx((-2.0, 0.0, 0.4, 0.6))
    assert lifecycle_bounds(coffee["MMLHTS"]).prime_start == 8.7
    persistent = lifecycle_bounds(coffee["CRHH"])
    assert persistent.extinguish is None and persistent.decay_end is None
    assert persistent.prime_start == pytest.approx(3.6)


def _midpoints_hold(ca):
    b = lifecycle_bounds(ca)
    p = ca.params
    ok = math.isclose((b.prime_start + b.ignite) / 2, p.p50, rel_tol=1e-9, abs_tol=1e-9)
    if b.decay_end is not None:
        ok = ok and math.isclose((b.extinguish + b.decay_end) / 2, p.d50, rel_tol=1e-9, abs_tol=1e-9)
    return ok


def test_midpoint_property_on_bundled(coffee):
    assert all(_midpoints_hold(ca) for ca in coffee.cas)


@given(scam_params())
def test_midpoint_property_random(params):
    assert _midpoints_hold(CellAssembly(1, "CX", CaType.COGNITIVE, "", params))


def test_bundled_matches_parameter_table(coffee):
    rows = reference.param_rows()
    assert [ca.id for ca in coffee.cas] == list(rows)
    for ca in coffee.cas:
        seq, values, acronym = rows[ca.id]
        assert ca.seq == seq
        assert ca.params.as_tuple() == values, ca.id
        assert ca.acronym_expansion == acronym


def test_bundled_census(coffee):
    assert len(coffee.cas) == 64
    counts = {t.value: sum(ca.ca_type is t for ca in coffee.cas) for t in CaType}
    assert counts == reference.TYPE_CENSUS
    assert all(ca_type_from_id(ca.id) is ca.ca_type for ca in coffee.cas)


def test_bundled_orderings(coffee):
    for ca in coffee.cas:
        p = ca.params
        assert 0 < p.thresh <= p.igfat <= p.igmax <= p.potn, ca.id
        times = [t for t in (p.p50, p.igtig, p.igtex, p.d50) if t is not None]
        assert times == sorted(times), ca.id
        assert (p.igtex is None) == (p.d50 is None)
        assert fatigue_k(ca) >= 0
    assert coffee.end_time == 9.0


def test_bundled_persistent_set(coffee):
    persistent = [ca.id for ca in coffee.cas if ca.params.persistent]
    # the parameter rows carry twelve "-" extinction entries; the shorter
    # closing list of still-ignited CAs is a subset of them
    assert len(persistent) == 12
    assert set(reference.STILL_IGNITED_AT_END) <= set(persistent)
    assert set(persistent) - set(reference.STILL_IGNITED_AT_END) == {"VLHTS", "VTS"}


def test_corpus_lookup(coffee):
    assert "CKEC" in coffee and "VHWA" not in coffee
    assert coffee.get("VHWA") is None
    with pytest.raises(KeyError):
        coffee["VHWA"]
    assert coffee.acknowledged_missing() == {"VHWA"}


def test_edges_are_canonically_ordered():
    a, b = make_ca("CA", 1), make_ca("CB", 2)
    e1 = Edge("CA", "CB", EdgeKind.EXCITE, (Declaration("CB", INPUTS, 0, 0, 0), Declaration("CA", OUTPUTS, 0, 0, 0)))
    e2 = Edge("CB", "CA", EdgeKind.EXCITE, (Declaration("CA", INPUTS, 0, 0, 0),))
    c1 = Corpus((a, b), (e1, e2))
    c2 = Corpus((a, b), (e2, e1))
    assert c1 == c2
    assert c1.edges[0].source == "CB"  # declared first, in CA's INPUTS
    assert c1.edges[1].declarations[0].ca_id == "CA"
