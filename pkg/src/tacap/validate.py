"""Lint rules over a corpus.

Rule ids and codes are stable; tests and downstream scripts key on them.

    R1  neuron-level ordering and positivity
    R2  time ordering and persistence consistency
    R3  every relationship declared at both ends and pointing at a real CA
    R4  an exciter is active around the time its target is priming
    R5  recorded ignition times agree with externally timed checkpoints
    R6  ignition times never go backwards down the CA list
"""
from __future__ import annotations

import configparser
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .model import INPUTS, OUTPUTS, CellAssembly, Corpus, EdgeKind, lifecycle_bounds

ERROR = "Error"
WARNING = "Warning"
INFO = "Info"

RULES = ("R1", "R2", "R3", "R4", "R5", "R6")
DEFAULT_R4_TOLERANCE = 0.3
_EPS = 1e-9


@dataclass(frozen=True)
class Finding:
    rule: str
    severity: str
    locus: str
    code: str
    message: str


@dataclass
class ValidatorConfig:
    """Per-rule switches: ``None`` keeps each finding's own severity,
    ``"off"`` drops the rule, ``"warning"``/``"error"`` force a severity."""
    levels: dict = field(default_factory=dict)
    r4_tolerance: float = DEFAULT_R4_TOLERANCE

    def level(self, rule: str) -> Optional[str]:
        return self.levels.get(rule)

    def enabled(self, rule: str) -> bool:
        return self.level(rule) != "off"


class ConfigError(ValueError):
    pass


def parse_config(text: str) -> ValidatorConfig:
    """Read ``key = value`` lines, with or without an ini section header."""
    parser = configparser.ConfigParser(interpolation=None)
    body = text if text.lstrip().startswith("[") else "[validate]\n" + text
    try:
        parser.read_string(body)
    except configparser.Error as exc:
        raise ConfigError(f"unreadable config: {exc}") from None
    config = ValidatorConfig()
    for section in parser.sections():
        for key, value in parser.items(section):
            key, value = key.strip().lower(), value.strip().lower()
            if key == "r4.tolerance_s":
                try:
                    config.r4_tolerance = float(value)
                except ValueError:
                    raise ConfigError(f"r4.tolerance_s must be a number, got {value!r}") from None
                if not config.r4_tolerance >= 0:
                    raise ConfigError("r4.tolerance_s must be >= 0")
                continue
            rule = key.upper()
            if rule not in RULES:
                raise ConfigError(f"unknown rule {key!r}")
            if value not in ("off", "warning", "error"):
                raise ConfigError(f"{rule}: expected off, warning or error, got {value!r}")
            config.levels[rule] = value
    return config


@dataclass
class LintReport:
    findings: list[Finding]

    @property
    def counts(self) -> dict:
        c = Counter(f.severity for f in self.findings)
        return {sev: c.get(sev, 0) for sev in (ERROR, WARNING, INFO)}

    @property
    def has_errors(self) -> bool:
        return any(f.severity == ERROR for f in self.findings)

    def by_rule(self, rule: str) -> list[Finding]:
        return [f for f in self.findings if f.rule == rule]

    def to_tsv(self) -> str:
        return "".join(f"{f.severity}\t{f.rule}\t{f.locus}\t{f.code}: {_one_line(f.message)}\n"
                       for f in self.findings)

    def to_text(self) -> str:
        lines = [f"{f.severity:<7} {f.rule} {f.locus}: {f.code}: {_one_line(f.message)}"
                 for f in self.findings]
        c = self.counts
        lines.append(f"{c[ERROR]} error(s), {c[WARNING]} warning(s), {c[INFO]} info")
        return "\n".join(lines) + "\n"


def _one_line(text: str) -> str:
    return " ".join(text.split())


# ---------------------------------------------------------------- rules

def check_param_order(ca: CellAssembly) -> list[Finding]:
    p = ca.params
    out = []
    nonpositive = [name for name in ("potn", "thresh", "igmax", "igfat") if not getattr(p, name) > 0]
    if nonpositive:
        out.append(Finding("R1", ERROR, ca.id, "NONPOSITIVE",
                           "kiloneuron values must be > 0: " + ", ".join(nonpositive)))
    if not (p.thresh <= p.igfat <= p.igmax <= p.potn):
        out.append(Finding("R1", ERROR, ca.id, "PARAM_ORDER",
                           f"need thresh <= igfat <= igmax <= potn, got "
                           f"{p.thresh} / {p.igfat} / {p.igmax} / {p.potn}"))
    return out


def check_time_order(ca: CellAssembly) -> list[Finding]:
    p = ca.params
    out = []
    if (p.igtex is None) != (p.d50 is None):
        out.append(Finding("R2", ERROR, ca.id, "PERSISTENCE_MISMATCH",
                           "igtex and d50 must both be present or both absent"))
    names = [n for n in ("p50", "igtig", "igtex", "d50") if getattr(p, n) is not None]
    for a, b in zip(names, names[1:]):
        if getattr(p, a) > getattr(p, b):
            out.append(Finding("R2", ERROR, ca.id, "TIME_ORDER",
                               f"{a} {getattr(p, a)} is later than {b} {getattr(p, b)}"))
    return out


def _edge_locus(edge) -> str:
    arrow = "-|" if edge.kind is EdgeKind.INHIBIT else "->"
    return f"{edge.source}{arrow}{edge.target}"


def check_io_closure(corpus: Corpus) -> list[Finding]:
    acknowledged = corpus.acknowledged_missing()
    out = []
    for edge in corpus.edges:
        if not edge.modeled:
            continue
        missing = [end for end in (edge.source, edge.target) if end not in corpus]
        if missing:
            known = all(m in acknowledged for m in missing)
            note = " (listed as acknowledged_missing)" if known else ""
            out.append(Finding("R3", WARNING if known else ERROR, _edge_locus(edge), "DANGLING",
                               f"{', '.join(missing)} is not defined in the corpus{note}"))
            continue
        at_source = any(d.ca_id == edge.source and d.side == OUTPUTS for d in edge.declarations)
        at_target = any(d.ca_id == edge.target and d.side == INPUTS for d in edge.declarations)
        if not (at_source and at_target):
            where = f"{edge.source} OUTPUTS" if at_source else f"{edge.target} INPUTS"
            lacking = f"{edge.target} INPUTS" if at_source else f"{edge.source} OUTPUTS"
            out.append(Finding("R3", WARNING, _edge_locus(edge), "ONE_SIDED",
                               f"declared in {where} but not in {lacking}"))
    return out


def active_window(ca: CellAssembly, end_time: float) -> tuple[float, float]:
    """From ignition until decay has finished (or the horizon for persistent CAs)."""
    b = lifecycle_bounds(ca)
    return b.ignite, end_time if b.decay_end is None else b.decay_end


def check_causal_overlap(corpus: Corpus, tol: float = DEFAULT_R4_TOLERANCE) -> list[Finding]:
    out = []
    for edge in corpus.edges:
        if edge.kind is not EdgeKind.EXCITE:
            continue
        src, dst = corpus.get(edge.source), corpus.get(edge.target)
        if src is None or dst is None:
            continue
        a0, a1 = active_window(src, corpus.end_time)
        b = lifecycle_bounds(dst)
        b0, b1 = b.prime_start - tol, b.ignite + tol
        if a1 < b0 - _EPS or a0 > b1 + _EPS:
            out.append(Finding("R4", WARNING, _edge_locus(edge), "NO_CAUSAL_OVERLAP",
                               f"{src.id} active {a0:g}..{a1:g} s misses {dst.id} priming "
                               f"{b.prime_start:g}..{b.ignite:g} s (tolerance {tol:g} s)"))
    return out


def check_checkpoints(corpus: Corpus) -> list[Finding]:
    out = []
    for cp in corpus.checkpoints:
        ca = corpus.get(cp.ca_id)
        if ca is None:
            out.append(Finding("R5", ERROR, cp.ca_id, "UNKNOWN_CA",
                               f"checkpoint {cp.name} names an undefined CA"))
            continue
        gap = abs(ca.params.igtig - cp.expected_time)
        if gap > cp.tolerance + _EPS:
            out.append(Finding("R5", ERROR, ca.id, "CHECKPOINT_MISS",
                               f"checkpoint {cp.name}: ignition at {ca.params.igtig:g} s, expected "
                               f"{cp.expected_time:g} +/- {cp.tolerance:g} s"))
    return out


def check_timeline_monotone(corpus: Corpus) -> list[Finding]:
    out = []
    for prev, ca in zip(corpus.cas, corpus.cas[1:]):
        if ca.params.igtig < prev.params.igtig:
            out.append(Finding("R6", WARNING, ca.id, "NON_MONOTONE",
                               f"ignites at {ca.params.igtig:g} s, before {prev.id} "
                               f"({prev.params.igtig:g} s) listed above it"))
    return out


def validate(corpus: Corpus, config: Optional[ValidatorConfig] = None) -> LintReport:
    config = config or ValidatorConfig()
    raw: list[Finding] = []
    if config.enabled("R1"):
        for ca in corpus.cas:
            raw.extend(check_param_order(ca))
    if config.enabled("R2"):
        for ca in corpus.cas:
            raw.extend(check_time_order(ca))
    if config.enabled("R3"):
        raw.extend(check_io_closure(corpus))
    if config.enabled("R4"):
        raw.extend(check_causal_overlap(corpus, config.r4_tolerance))
    if config.enabled("R5"):
        raw.extend(check_checkpoints(corpus))
    if config.enabled("R6"):
        raw.extend(check_timeline_monotone(corpus))

    findings = []
    for f in raw:
        level = config.level(f.rule)
        if level in ("warning", "error"):
            f = Finding(f.rule, level.capitalize(), f.locus, f.code, f.message)
        findings.append(f)

    seq_of = {ca.id: ca.seq for ca in corpus.cas}

    def locus_seq(f: Finding) -> float:
        for part in f.locus.replace("-|", "->").split("->"):
            if part in seq_of:
                return seq_of[part]
        return math.inf

    findings.sort(key=lambda f: (locus_seq(f), f.rule, f.locus, f.code, f.message))
    return LintReport(findings)
