import dataclasses
import math

import pytest
from hypothesis import given, settings, strategies as st

from tacap.model import (
    INPUTS, OUTPUTS, CellAssembly, Checkpoint, Corpus, Declaration, Edge, EdgeKind, ScamParams,
    ca_type_from_id,
)
from tacap.validate import (
    RULES, ConfigError, ValidatorConfig, check_causal_overlap, check_checkpoints, check_io_closure,
    check_param_order, check_time_order, check_timeline_monotone, parse_config, validate,
)


def ca(ca_id, seq=1, **params):
    base = dict(potn=10, thresh=2, igmax=7, igfat=6, p50=-1.0, igtig=0.0, igtex=0.4, d50=0.5)
    base.update(params)
    return CellAssembly(seq, ca_id, ca_type_from_id(ca_id), "x", ScamParams(**base))


def excite(src, dst, sides=(OUTPUTS, INPUTS)):
    decls = []
    if OUTPUTS in sides:
        decls.append(Declaration(src, OUTPUTS, 0, 0, 0))
    if INPUTS in sides:
        decls.append(Declaration(dst, INPUTS, 0, 0, 0))
    return Edge(src, dst, EdgeKind.EXCITE, tuple(decls))


def codes(findings):
    return [(f.rule, f.severity, f.code) for f in findings]


# ---------------------------------------------------------------- bundled corpus

def test_bundled_default(coffee):
    report = validate(coffee)
    assert report.counts["Error"] == 0
    assert not report.has_errors
    dangling = [f.locus for f in report.findings if f.code == "DANGLING"]
    assert sorted(dangling) == ["CHWA->VHWA", "VHWA->CHWA"]
    assert all(f.severity == "Warning" for f in report.findings)
    for rule in ("R1", "R2", "R5", "R6"):
        assert report.by_rule(rule) == []


def test_bundled_itemized_findings(coffee):
    report = validate(coffee)
    one_sided = {f.locus for f in report.findings if f.code == "ONE_SIDED"}
    assert one_sided == {"VLH->MLHTKL", "CFK->CMC"}
    assert {f.locus for f in report.by_rule("R4")} == {
        "TRHKH->CRHA", "CLHRKL->KLHTKL", "CLHRKL->MLHTKL", "VLH->MLHTKL", "MRKLLH->KLHTKL", "CFK->CMC"}


def test_unacknowledged_dangling_is_error(coffee):
    meta = {k: v for k, v in coffee.metadata.items() if k != "acknowledged_missing"}
    report = validate(dataclasses.replace(coffee, metadata=meta))
    assert report.counts["Error"] == 2
    assert {f.code for f in report.findings if f.severity == "Error"} == {"DANGLING"}


def test_empty_corpus():
    report = validate(Corpus(()))
    assert report.findings == []
    assert report.to_tsv() == ""


def test_igfat_above_igmax_gives_one_error():
    report = validate(Corpus((ca("CA", igfat=8),)))
    assert codes(report.findings) == [("R1", "Error", "PARAM_ORDER")]


# ---------------------------------------------------------------- R1, R2

def test_param_order_equalities_legal(coffee):
    assert check_param_order(coffee["TRHKH"]) == []


def test_param_order_violations():
    assert codes(check_param_order(ca("CA", thresh=3, igfat=2))) == [("R1", "Error", "PARAM_ORDER")]
    assert ("R1", "Error", "NONPOSITIVE") in codes(check_param_order(ca("CA", potn=0)))


def test_time_order(coffee):
    assert check_time_order(coffee["MLHTKL"]) == []
    assert codes(check_time_order(ca("CA", igtig=2.0, igtex=1.5, d50=3.0))) == [("R2", "Error", "TIME_ORDER")]
    assert codes(check_time_order(ca("CA", igtex=None, d50=4.0))) == [("R2", "Error", "PERSISTENCE_MISMATCH")]


# ---------------------------------------------------------------- R3

def test_io_closure_examples(coffee):
    mirrored = Corpus(coffee.cas, tuple(e for e in coffee.edges if (e.source, e.target) == ("CKEC", "VKEG")))
    assert check_io_closure(mirrored) == []
    one_sided = Corpus((ca("CA", 1), ca("CB", 2)), (excite("CA", "CB", sides=(OUTPUTS,)),))
    assert codes(check_io_closure(one_sided)) == [("R3", "Warning", "ONE_SIDED")]
    dangling = Corpus((ca("CHWA"),), (excite("CHWA", "VHWA"),))
    assert codes(check_io_closure(dangling)) == [("R3", "Error", "DANGLING")]


# ---------------------------------------------------------------- R4

def test_causal_overlap_examples(coffee):
    c = Corpus((coffee["CKEC"], coffee["CAHWA"]), (excite("CKEC", "CAHWA"),))
    assert check_causal_overlap(c, 0.3) == []
    late = Corpus((ca("CA", 1), ca("CB", 2, p50=4.0, igtig=5.0, igtex=6.0, d50=7.0)), (excite("CA", "CB"),))
    # CA decays by 0.6 s; CB starts priming at 3.0 s
    assert codes(check_causal_overlap(late, 0.3)) == [("R4", "Warning", "NO_CAUSAL_OVERLAP")]
    assert check_causal_overlap(late, math.inf) == []
    assert check_causal_overlap(coffee, math.inf) == []


# ---------------------------------------------------------------- R5

def test_checkpoints(coffee):
    assert check_checkpoints(coffee) == []
    miss = dataclasses.replace(coffee, checkpoints=(Checkpoint("x", "MRHH", 5.0, 0.1),))
    assert codes(check_checkpoints(miss)) == [("R5", "Error", "CHECKPOINT_MISS")]
    unknown = dataclasses.replace(coffee, checkpoints=(Checkpoint("x", "MZZZ", 5.0, 0.1),))
    assert codes(check_checkpoints(unknown)) == [("R5", "Error", "UNKNOWN_CA")]


# ---------------------------------------------------------------- R6

def test_timeline_monotone(coffee):
    assert check_timeline_monotone(coffee) == []
    assert check_timeline_monotone(Corpus((ca("CA"),))) == []
    a, b = coffee["CKHWA"], coffee["CKH"]
    swapped = Corpus((dataclasses.replace(b, seq=1), dataclasses.replace(a, seq=2)))
    assert codes(check_timeline_monotone(swapped)) == [("R6", "Warning", "NON_MONOTONE")]


def test_timeline_ties_legal():
    assert check_timeline_monotone(Corpus((ca("CA", 1), ca("CB", 2)))) == []


# ---------------------------------------------------------------- config and report

def test_parse_config():
    config = parse_config("R4 = off\nr6 = error\nr4.tolerance_s = 0.5\n")
    assert config.levels == {"R4": "off", "R6": "error"}
    assert config.r4_tolerance == 0.5
    assert parse_config("[rules]\nR1 = warning\n").levels == {"R1": "warning"}
    assert parse_config("").r4_tolerance == 0.3


@pytest.mark.parametrize("text", ["R9 = off", "R1 = loud", "r4.tolerance_s = soon", "r4.tolerance_s = -1",
                                  "R1 = off\nR1 = error"])
def test_parse_config_rejects(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def test_severity_override(coffee):
    report = validate(coffee, parse_config("R3 = error"))
    assert report.counts["Error"] == len(report.by_rule("R3")) == 4
    assert report.has_errors


def test_tolerance_from_config(coffee):
    assert validate(coffee, parse_config("r4.tolerance_s = inf")).by_rule("R4") == []


def broken_corpus():
    cas = (ca("CA", 1, igfat=9), ca("CB", 2, igtig=-2.0, p50=-3.0), ca("MC", 3, igtex=None, d50=4.0))
    edges = (excite("CA", "CB", sides=(OUTPUTS,)), excite("CB", "VZZ"),
             excite("MC", "CA"))
    return Corpus(cas, edges, (Checkpoint("x", "CB", 9.0, 0.1), Checkpoint("y", "CQ", 1.0, 0.1)),
                  end_time=10.0)


def test_broken_corpus_hits_every_rule():
    report = validate(broken_corpus())
    assert {f.rule for f in report.findings} == set(RULES)


@settings(max_examples=60, deadline=None)
@given(st.sets(st.sampled_from(RULES)), st.booleans())
def test_rule_independence(disabled, use_bundled):
    from tacap.data import load_bundled
    corpus = load_bundled() if use_bundled else broken_corpus()
    full = validate(corpus).findings
    config = ValidatorConfig(levels={r: "off" for r in disabled})
    assert validate(corpus, config).findings == [f for f in full if f.rule not in disabled]


def test_deterministic_and_sorted(coffee):
    seq = {c.id: c.seq for c in coffee.cas}
    first, second = validate(coffee), validate(coffee)
    assert first.to_tsv() == second.to_tsv()
    # an edge finding sorts under its first defined endpoint
    keys = [(next((seq[p] for p in f.locus.replace("-|", "->").split("->") if p in seq), math.inf),
             f.rule) for f in first.findings]
    assert keys == sorted(keys)


def test_tsv_shape(coffee):
    for line in validate(coffee).to_tsv().splitlines():
        severity, rule, locus, message = line.split("\t")
        assert severity in ("Error", "Warning", "Info") and rule in RULES and locus and message


def test_text_summary(coffee):
    assert validate(coffee).to_text().rstrip().endswith("0 error(s), 10 warning(s), 0 info")
