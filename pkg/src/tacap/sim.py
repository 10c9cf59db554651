"""Lifecycle trajectories and a discrete-time simulator.

A CA primes from zero up to ``thresh``, jumps to ``igmax`` on ignition,
fatigues linearly down to ``igfat`` by extinction and then decays back to
zero.  The priming and decay ramps are either linear or power curves; either
way the curve passes through half its height at ``p50`` and ``d50``, which
fixes where a ramp has to start (or end) for a given exponent.

When a ramp has zero width (``p50 == igtig`` or ``d50 == igtex``) the value at
that single instant is the half level, so the half-level property holds for
every CA.

Scripted mode replays each CA's recorded times.  Causal mode lets priming
advance only while something upstream is driving the CA, and reports how far
the resulting ignition times land from the recorded ones.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .model import CellAssembly, Corpus, Edge, EdgeKind, ENV, Declaration, INPUTS
from .validate import WARNING, Finding

_EPS = 1e-9


class QpidState(enum.Enum):
    QUIESCENT = "Quiescent"
    PRIMING = "Priming"
    IGNITED = "Ignited"
    DECAYING = "Decaying"


class EventKind(enum.Enum):
    PRIME_START = "PRIME_START"
    IGNITE = "IGNITE"
    EXTINGUISH = "EXTINGUISH"
    DECAY_END = "DECAY_END"


@dataclass(frozen=True)
class ShapeConfig:
    ramp: str = "linear"  # "linear" or "power"
    exponent: float = 1.0
    dt: float = 0.05
    end_time_override: Optional[float] = None

    def __post_init__(self):
        if self.ramp not in ("linear", "power"):
            raise ValueError(f"ramp must be linear or power, got {self.ramp!r}")
        if self.ramp == "linear" and self.exponent != 1.0:
            raise ValueError("a linear ramp has exponent 1")
        if not (math.isfinite(self.exponent) and self.exponent > 0):
            raise ValueError("exponent must be finite and positive")
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError("dt must be finite and positive")

    @classmethod
    def parse(cls, text: str, dt: float = 0.05, end_time_override: Optional[float] = None) -> "ShapeConfig":
        """``linear`` or ``power:<exponent>``."""
        if text == "linear":
            return cls("linear", 1.0, dt, end_time_override)
        kind, _, exp = text.partition(":")
        if kind != "power" or not exp:
            raise ValueError(f"shape must be 'linear' or 'power:<exponent>', got {text!r}")
        return cls("power", float(exp), dt, end_time_override)

    @property
    def label(self) -> str:
        return "linear" if self.ramp == "linear" else f"power:{self.exponent:g}"


LINEAR = ShapeConfig()


def ramp_length(half_gap: float, exponent: float) -> float:
    """Length of a ramp whose half-height point sits ``half_gap`` from its top."""
    if half_gap <= 0:
        return 0.0
    return half_gap / (1 - 2 ** (-1 / exponent))


@dataclass(frozen=True)
class ShapedBounds:
    prime_start: float
    ignite: float
    extinguish: Optional[float]
    decay_end: Optional[float]
    prime_len: float
    decay_len: float
    horizon: float


def shaped_bounds(ca: CellAssembly, shape: ShapeConfig = LINEAR,
                  end_time: Optional[float] = None) -> ShapedBounds:
    p = ca.params
    k = shape.exponent
    horizon = shape.end_time_override if shape.end_time_override is not None else end_time
    if horizon is None:
        horizon = max(p.finite_times())
    prime_len = ramp_length(p.igtig - p.p50, k)
    if p.igtex is None or p.d50 is None:
        return ShapedBounds(p.igtig - prime_len, p.igtig, None, None, prime_len, 0.0, horizon)
    decay_len = ramp_length(p.d50 - p.igtex, k)
    return ShapedBounds(p.igtig - prime_len, p.igtig, p.igtex, p.igtex + decay_len,
                        prime_len, decay_len, horizon)


def _ignited_level(ca: CellAssembly, t: float, start: float, stop: float) -> float:
    p = ca.params
    if stop <= start:
        return p.igmax if t <= start else p.igfat
    frac = min(max((t - start) / (stop - start), 0.0), 1.0)
    return p.igmax + (p.igfat - p.igmax) * frac


def trajectory_at(ca: CellAssembly, t: float, shape: ShapeConfig = LINEAR,
                  end_time: Optional[float] = None) -> float:
    """Kiloneurons firing at time ``t``."""
    p = ca.params
    b = shaped_bounds(ca, shape, end_time)
    k = shape.exponent
    if b.prime_len == 0 and t == p.p50:
        return p.thresh / 2
    if b.extinguish is not None and b.decay_len == 0 and t == p.d50:
        return p.igfat / 2
    if t < b.prime_start:
        return 0.0
    if t < b.ignite:
        return p.thresh * ((t - b.prime_start) / b.prime_len) ** k
    if b.extinguish is None:
        return _ignited_level(ca, t, b.ignite, b.horizon)
    if t <= b.extinguish:
        return _ignited_level(ca, t, b.ignite, b.extinguish)
    if t <= b.decay_end and b.decay_len > 0:
        return p.igfat * ((b.decay_end - t) / b.decay_len) ** k
    return 0.0


def state_at(ca: CellAssembly, t: float, shape: ShapeConfig = LINEAR,
             end_time: Optional[float] = None) -> QpidState:
    b = shaped_bounds(ca, shape, end_time)
    if t < b.prime_start:
        return QpidState.QUIESCENT
    if t < b.ignite:
        return QpidState.PRIMING
    if b.extinguish is None or t <= b.extinguish:
        return QpidState.IGNITED
    if t <= b.decay_end:
        return QpidState.DECAYING
    return QpidState.QUIESCENT


@dataclass(frozen=True)
class Sample:
    t: float
    n: float
    state: QpidState


@dataclass(frozen=True)
class Event:
    t: float
    kind: EventKind


@dataclass
class Trace:
    ca_id: str
    samples: list[Sample] = field(default_factory=list)
    events: list[Event] = field(default_factory=list)

    @property
    def times(self) -> list[float]:
        return [s.t for s in self.samples]

    def sample_at(self, t: float) -> Sample:
        for s in self.samples:
            if abs(s.t - t) <= _EPS:
                return s
        raise KeyError(f"{self.ca_id}: no sample at t={t}")


def time_grid(start: float, stop: float, dt: float) -> list[float]:
    """Points start, start+dt, ... with both ends always present."""
    if stop < start:
        raise ValueError("grid stop precedes start")
    steps = math.floor((stop - start) / dt + _EPS)
    grid = [round(start + i * dt, 9) for i in range(steps + 1)]
    if grid[-1] < stop - _EPS:
        grid.append(round(stop, 9))
    return grid


def horizon_of(corpus: Corpus, shape: ShapeConfig) -> float:
    return shape.end_time_override if shape.end_time_override is not None else corpus.end_time


def corpus_grid(corpus: Corpus, shape: ShapeConfig) -> list[float]:
    end = horizon_of(corpus, shape)
    starts = [shaped_bounds(ca, shape, end).prime_start for ca in corpus.cas]
    start = min(starts, default=0.0)
    return time_grid(min(start, end), end, shape.dt)


def simulate(corpus: Corpus, shape: ShapeConfig = LINEAR) -> list[Trace]:
    """Scripted mode: every CA follows its recorded timeline."""
    end = horizon_of(corpus, shape)
    grid = corpus_grid(corpus, shape)
    traces = []
    for ca in corpus.cas:
        b = shaped_bounds(ca, shape, end)
        samples = [Sample(t, trajectory_at(ca, t, shape, end), state_at(ca, t, shape, end)) for t in grid]
        events = [Event(b.prime_start, EventKind.PRIME_START), Event(b.ignite, EventKind.IGNITE)]
        if b.extinguish is not None:
            events += [Event(b.extinguish, EventKind.EXTINGUISH), Event(b.decay_end, EventKind.DECAY_END)]
        events = [e for e in events if e.t <= end + _EPS]
        traces.append(Trace(ca.id, samples, events))
    return traces


# ---------------------------------------------------------------- causal mode

@dataclass(frozen=True)
class CausalConfig:
    max_residual: float = 0.3
    # when an inhibitory source silences its target: as it extinguishes, or as it ignites
    inhibit_at: str = "extinction"

    def __post_init__(self):
        if self.inhibit_at not in ("extinction", "ignition"):
            raise ValueError("inhibit_at must be 'extinction' or 'ignition'")


@dataclass(frozen=True)
class Residual:
    ca_id: str
    predicted: Optional[float]
    recorded: float

    @property
    def residual(self) -> Optional[float]:
        return None if self.predicted is None else self.predicted - self.recorded


@dataclass
class CausalResult:
    traces: list[Trace]
    residuals: list[Residual]
    findings: list[Finding]

    def residual_of(self, ca_id: str) -> Residual:
        return next(r for r in self.residuals if r.ca_id == ca_id)


@dataclass
class _Runner:
    ca: CellAssembly
    bounds: ShapedBounds
    exponent: float
    state: QpidState = QpidState.QUIESCENT
    driven_for: float = 0.0  # seconds of drive since the recorded start of priming
    ignite: Optional[float] = None
    extinguish: Optional[float] = None
    extinguish_level: float = 0.0
    decay_end: Optional[float] = None
    natural_end: Optional[float] = None

    @property
    def needed(self) -> float:
        return self.bounds.ignite - self.bounds.prime_start

    def level(self, t: float) -> float:
        p, k = self.ca.params, self.exponent
        if self.state is QpidState.PRIMING:
            if self.needed <= 0:
                return 0.0
            return p.thresh * min(self.driven_for / self.needed, 1.0) ** k
        if self.state is QpidState.IGNITED:
            stop = self.natural_end if self.natural_end is not None else self.bounds.horizon
            if self.natural_end is None and stop <= self.ignite:
                return p.igmax
            return _ignited_level(self.ca, t, self.ignite, stop)
        if self.state is QpidState.DECAYING:
            span = self.bounds.decay_len
            if span <= 0:
                return 0.0
            return self.extinguish_level * max((self.decay_end - t) / span, 0.0) ** k
        return 0.0


def simulate_causal(corpus: Corpus, shape: ShapeConfig = LINEAR,
                    config: Optional[CausalConfig] = None) -> CausalResult:
    """Event-driven replay where priming needs an active upstream CA.

    Each step reads only the previous step's states, so the update order of
    CAs within a step does not matter.
    """
    config = config or CausalConfig()
    end = horizon_of(corpus, shape)
    grid = corpus_grid(corpus, shape)
    runners = {ca.id: _Runner(ca, shaped_bounds(ca, shape, end), shape.exponent) for ca in corpus.cas}
    exciters: dict[str, list[str]] = {ca.id: [] for ca in corpus.cas}
    env_driven: set[str] = set()
    inhibits: dict[str, list[str]] = {ca.id: [] for ca in corpus.cas}
    for edge in corpus.edges:
        if edge.target not in runners:
            continue
        if edge.kind is EdgeKind.ENV_IN:
            env_driven.add(edge.target)
        elif edge.source in runners:
            if edge.kind is EdgeKind.EXCITE:
                exciters[edge.target].append(edge.source)
            elif edge.kind is EdgeKind.INHIBIT:
                inhibits[edge.source].append(edge.target)

    traces = {ca.id: Trace(ca.id) for ca in corpus.cas}
    active = (QpidState.IGNITED, QpidState.DECAYING)
    prev_t = None
    for t in grid:
        before = {cid: r.state for cid, r in runners.items()}
        ignited_now, extinct_now = [], []
        for cid, r in runners.items():
            b = r.bounds
            if r.ignite is None:
                driven = cid in env_driven or any(before[s] in active for s in exciters[cid])
                if driven and t >= b.prime_start - _EPS:
                    lo = b.prime_start if prev_t is None else max(prev_t, b.prime_start)
                    r.driven_for += max(0.0, t - lo)
                    if r.state is QpidState.QUIESCENT:
                        r.state = QpidState.PRIMING
                        traces[cid].events.append(Event(lo, EventKind.PRIME_START))
                    if r.driven_for >= r.needed - _EPS:
                        r.ignite = t
                        r.state = QpidState.IGNITED
                        if b.extinguish is not None:
                            r.natural_end = t + (b.extinguish - b.ignite)
                        traces[cid].events.append(Event(t, EventKind.IGNITE))
                        ignited_now.append(cid)
            elif r.state is QpidState.IGNITED and r.natural_end is not None and t >= r.natural_end - _EPS:
                _extinguish(r, r.natural_end, traces[cid])
                extinct_now.append(cid)
            if r.state is QpidState.DECAYING and t >= r.decay_end - _EPS:
                r.state = QpidState.QUIESCENT
                traces[cid].events.append(Event(r.decay_end, EventKind.DECAY_END))

        triggers = ignited_now if config.inhibit_at == "ignition" else extinct_now
        for src in triggers:
            when = runners[src].ignite if config.inhibit_at == "ignition" else runners[src].extinguish
            for target in inhibits[src]:
                r = runners[target]
                if r.state is QpidState.IGNITED:
                    _extinguish(r, when, traces[target])

        for cid, r in runners.items():
            traces[cid].samples.append(Sample(t, r.level(t), r.state))
        prev_t = t

    residuals, findings = [], []
    for ca in corpus.cas:
        r = runners[ca.id]
        res = Residual(ca.id, r.ignite, ca.params.igtig)
        residuals.append(res)
        if r.ignite is None:
            findings.append(Finding("CAUSAL", WARNING, ca.id, "UNREACHABLE",
                                    f"never reaches threshold before {end:g} s"))
        elif abs(res.residual) > config.max_residual + _EPS:
            findings.append(Finding("CAUSAL", WARNING, ca.id, "RESIDUAL",
                                    f"predicted ignition {r.ignite:g} s vs recorded "
                                    f"{ca.params.igtig:g} s (residual {res.residual:+.3f} s)"))
    for tr in traces.values():
        tr.events.sort(key=lambda e: e.t)
    return CausalResult([traces[ca.id] for ca in corpus.cas], residuals, findings)


def _extinguish(r: _Runner, when: float, trace: Trace):
    r.extinguish_level = r.level(when)
    r.state = QpidState.DECAYING
    r.extinguish = when
    r.decay_end = when + r.bounds.decay_len
    trace.events.append(Event(when, EventKind.EXTINGUISH))
    if r.bounds.decay_len <= 0:
        r.state = QpidState.QUIESCENT
        trace.events.append(Event(r.decay_end, EventKind.DECAY_END))


def with_environment_drive(corpus: Corpus) -> Corpus:
    """Same CAs, but every CA's only input is an always-on outside stimulus."""
    edges = tuple(Edge(ENV, ca.id, EdgeKind.ENV_IN, (Declaration(ca.id, INPUTS, 0, 0, 0),), "always on")
                  for ca in corpus.cas)
    return Corpus(corpus.cas, edges, corpus.checkpoints, corpus.end_time, corpus.metadata)


# ---------------------------------------------------------------- output

def format_time(t: float) -> str:
    text = f"{round(t, 9):.9f}".rstrip("0").rstrip(".")
    return "0" if text in ("-0", "") else text


def traces_csv(traces: Sequence[Trace]) -> str:
    if not traces:
        return "t\n"
    lines = ["t," + ",".join(tr.ca_id for tr in traces)]
    for i, t in enumerate(traces[0].times):
        lines.append(format_time(t) + "," + ",".join(f"{tr.samples[i].n:.3f}" for tr in traces))
    return "\n".join(lines) + "\n"


def events_csv(traces: Sequence[Trace], corpus: Corpus) -> str:
    seq = {ca.id: ca.seq for ca in corpus.cas}
    rows = [(e.t, seq.get(tr.ca_id, 0), tr.ca_id, e.kind.value) for tr in traces for e in tr.events]
    rows.sort(key=lambda r: (round(r[0], 9), r[1]))
    return "t,ca,event\n" + "".join(f"{format_time(t)},{cid},{kind}\n" for t, _, cid, kind in rows)


def residuals_csv(residuals: Sequence[Residual]) -> str:
    out = ["ca,predicted_igtig,recorded_igtig,residual"]
    for r in residuals:
        pred = "" if r.predicted is None else format_time(r.predicted)
        res = "" if r.residual is None else format_time(r.residual)
        out.append(f"{r.ca_id},{pred},{format_time(r.recorded)},{res}")
    return "\n".join(out) + "\n"


def ignited_at(traces: Sequence[Trace], t: float) -> list[str]:
    return [tr.ca_id for tr in traces if tr.sample_at(t).state is QpidState.IGNITED]
