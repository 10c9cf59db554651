"""Derived statistics over the analysis subset of a corpus.

The subset drops touch and kinaesthetic CAs and every persistent CA, since
those have no extinction or decay to average.  Group means feed the timing
profile, the between-group ratio tables and the fatigue table.

Tables that are computed from other tables (timing profile, ratios, fatigue)
default to working from the one-decimal means, the same numbers a reader sees
in the means table.  Pass ``basis="raw"`` to use unrounded means instead.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Sequence

from .model import PARAM_NAMES, CaType, CellAssembly, Corpus, EdgeKind, duration

ALL = "All"
GROUPS = (ALL, "Cognitive", "Visual", "Motor")
_GROUP_TYPES = {"Cognitive": CaType.COGNITIVE, "Visual": CaType.VISUAL, "Motor": CaType.MOTOR}
NEURON_PARAMS = ("potn", "thresh", "igmax", "igfat")
PARAM_LABELS = {"potn": "PotN", "thresh": "Thresh", "igmax": "IgMax", "igfat": "IgFat",
                "p50": "P50%", "igtig": "IgTIg", "igtex": "IgTEx", "d50": "D50%"}
# ratio rows as (numerator, denominator)
RATIO_PAIRS = (("Visual", ALL), ("Visual", "Cognitive"), ("Visual", "Motor"),
               ("Cognitive", ALL), ("Cognitive", "Motor"), ("Motor", ALL))
IO_TYPES = (CaType.VISUAL, CaType.COGNITIVE, CaType.MOTOR)
BASES = ("rounded", "raw")


class EmptyGroup(ValueError):
    pass


def round_half_up(x: float, places: int = 1) -> float:
    """Round to ``places`` decimals, halves away from zero.

    The float is first trimmed to 9 decimals so that 0.15 stored as
    0.1499999... still rounds to 0.2.
    """
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(round(x, 9))).quantize(q, rounding=ROUND_HALF_UP))


def fmt1(x: float, places: int = 1) -> str:
    value = round_half_up(x, places)
    if value == 0:
        value = 0.0  # no "-0.0"
    return f"{value:.{places}f}"


def analysis_subset(corpus: Corpus) -> list[CellAssembly]:
    return [ca for ca in corpus.cas
            if ca.ca_type not in (CaType.TOUCH, CaType.KINAESTHETIC) and not ca.params.persistent]


def group_members(subset: Sequence[CellAssembly], group: str) -> list[CellAssembly]:
    if group == ALL:
        return list(subset)
    return [ca for ca in subset if ca.ca_type is _GROUP_TYPES[group]]


@dataclass(frozen=True)
class TypeMeans:
    group: str
    n: int
    potn: float
    thresh: float
    igmax: float
    igfat: float
    p50: float
    igtig: float
    igtex: float
    d50: float

    def values(self) -> tuple:
        return tuple(getattr(self, name) for name in PARAM_NAMES)

    def rounded(self, places: int = 1) -> "TypeMeans":
        return TypeMeans(self.group, self.n, *(round_half_up(v, places) for v in self.values()))


def _means(group: str, members: Sequence[CellAssembly]) -> TypeMeans:
    if not members:
        raise EmptyGroup(f"group {group} has no members")
    sums = []
    for name in PARAM_NAMES:
        vals = [getattr(ca.params, name) for ca in members]
        if any(v is None for v in vals):
            raise ValueError(f"group {group}: persistent CA in subset ({name} missing)")
        sums.append(math.fsum(vals) / len(vals))
    return TypeMeans(group, len(members), *sums)


def type_means(subset: Sequence[CellAssembly], groups: Iterable[str] = GROUPS) -> list[TypeMeans]:
    return [_means(g, group_members(subset, g)) for g in groups]


@dataclass(frozen=True)
class NormalizedTimes:
    t0: float
    t1: float
    t2: float
    t3: float

    def values(self) -> tuple:
        return (self.t0, self.t1, self.t2, self.t3)


def normalized_times(means: TypeMeans) -> NormalizedTimes:
    """Lifecycle times measured from the start of priming."""
    t1 = (means.igtig - means.p50) * 2
    t2 = (means.igtex - means.igtig) + t1
    t3 = (means.d50 - means.igtex) * 2 + t2
    return NormalizedTimes(0.0, t1, t2, t3)


def _basis_means(subset, basis: str) -> dict[str, TypeMeans]:
    if basis not in BASES:
        raise ValueError(f"basis must be one of {BASES}")
    means = {m.group: m for m in type_means(subset)}
    if basis == "rounded":
        means = {g: m.rounded() for g, m in means.items()}
    return means


def timing_profile(subset, basis: str = "rounded") -> dict[str, NormalizedTimes]:
    return {g: normalized_times(m) for g, m in _basis_means(subset, basis).items()}


def ratio_matrix(subset, param: str, basis: str = "rounded") -> dict[tuple[str, str], float]:
    """Percentage difference (mean_A / mean_B - 1) * 100 for every ordered group pair."""
    if param not in NEURON_PARAMS:
        raise ValueError(f"ratio tables exist only for {NEURON_PARAMS}")
    means = _basis_means(subset, basis)
    return {(a, b): (getattr(means[a], param) / getattr(means[b], param) - 1) * 100
            for a in GROUPS for b in GROUPS}


@dataclass(frozen=True)
class FatigueRow:
    group: str
    fatigue: float
    igmax: float
    percent: float


def fatigue_summary(subset, basis: str = "rounded") -> list[FatigueRow]:
    """Mean fatigue (igmax - igfat), mean igmax and their ratio as a percentage.

    On the rounded basis the mean fatigue is the difference of the displayed
    igmax and igfat means, so the printed numbers are consistent with each other.
    """
    rows = []
    for g in GROUPS:
        members = group_members(subset, g)
        raw = _means(g, members)
        if basis == "rounded":
            igmax = round_half_up(raw.igmax)
            fatigue = round_half_up(igmax - round_half_up(raw.igfat))
        elif basis == "raw":
            igmax = raw.igmax
            fatigue = math.fsum(ca.params.igmax - ca.params.igfat for ca in members) / len(members)
        else:
            raise ValueError(f"basis must be one of {BASES}")
        rows.append(FatigueRow(g, fatigue, igmax, fatigue / igmax * 100))
    return rows


@dataclass(frozen=True)
class Histogram:
    bin_width: float
    counts: dict  # group -> list of counts, bin k covers [k*w, (k+1)*w)

    def bins(self) -> list[tuple[float, float]]:
        n = max((len(v) for v in self.counts.values()), default=0)
        return [(k * self.bin_width, (k + 1) * self.bin_width) for k in range(n)]


def duration_histogram(subset, bin_width: float = 0.5) -> Histogram:
    if not bin_width > 0:
        raise ValueError("bin_width must be positive")
    indices: dict[str, list[int]] = {g: [] for g in GROUPS}
    for g in GROUPS:
        for ca in group_members(subset, g):
            d = duration(ca)
            # trim float noise so 1.0 - 0.5 lands in [0.5, 1.0)
            indices[g].append(max(0, math.floor(round(d / bin_width, 9))))
    n = max((max(v) + 1 for v in indices.values() if v), default=0)
    counts = {g: [idx.count(k) for k in range(n)] for g, idx in indices.items()}
    return Histogram(bin_width, counts)


def io_matrix(corpus: Corpus) -> dict[tuple[CaType, CaType], int]:
    """Excitatory links between visual, cognitive and motor CAs, keyed (source, target)."""
    pairs = set()
    for edge in corpus.edges:
        if edge.kind is not EdgeKind.EXCITE:
            continue
        src, dst = corpus.get(edge.source), corpus.get(edge.target)
        if src is None or dst is None:
            continue
        if src.ca_type in IO_TYPES and dst.ca_type in IO_TYPES:
            pairs.add((src.id, dst.id, src.ca_type, dst.ca_type))
    matrix = {(a, b): 0 for a in IO_TYPES for b in IO_TYPES}
    for _, _, a, b in pairs:
        matrix[(a, b)] += 1
    return matrix


# ---------------------------------------------------------------- tables

@dataclass(frozen=True)
class Table:
    name: str
    title: str
    header: tuple
    rows: tuple  # tuples of cells; floats are formatted on output

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.header)
        for row in self.rows:
            w.writerow([repr(c) if isinstance(c, float) else c for c in row])
        return buf.getvalue()

    def display_rows(self) -> list[list[str]]:
        return [[fmt1(c) if isinstance(c, float) else str(c) for c in row] for row in self.rows]

    def to_text(self) -> str:
        rows = [list(map(str, self.header))] + self.display_rows()
        widths = [max(len(r[i]) for r in rows) for i in range(len(self.header))]
        lines = [self.title]
        for k, r in enumerate(rows):
            cells = [r[0].ljust(widths[0])] + [c.rjust(widths[i]) for i, c in enumerate(r) if i]
            lines.append("  ".join(cells).rstrip())
            if k == 0:
                lines.append("  ".join("-" * w for w in widths))
        return "\n".join(lines) + "\n"

    def to_markdown(self) -> str:
        head = "| " + " | ".join(map(str, self.header)) + " |"
        rule = "|" + "|".join("---" if i == 0 else "---:" for i in range(len(self.header))) + "|"
        body = ["| " + " | ".join(r) + " |" for r in self.display_rows()]
        return "\n".join([head, rule] + body) + "\n"


TABLE_NAMES = ("3", "4", "5a", "5b", "5c", "6", "7", "hist")


def build_table(corpus: Corpus, name: str, basis: str = "rounded") -> Table:
    subset = analysis_subset(corpus)
    if name == "3":
        header = ("Group", "N") + tuple(PARAM_LABELS[p] for p in PARAM_NAMES)
        rows = tuple((m.group, m.n) + m.values() for m in type_means(subset))
        return Table(name, "Mean SCAM parameters by CA type", header, rows)
    if name == "4":
        profile = timing_profile(subset, basis)
        rows = tuple((g,) + profile[g].values() for g in GROUPS)
        return Table(name, "Lifecycle times from start of priming (s)", ("Group", "t0", "t1", "t2", "t3"), rows)
    if name in ("5a", "5b", "5c"):
        param = {"5a": "potn", "5b": "thresh", "5c": "igmax"}[name]
        matrix = ratio_matrix(subset, param, basis)
        rows = tuple((f"{a}/{b}", matrix[(a, b)]) for a, b in RATIO_PAIRS)
        return Table(name, f"Difference in group means for {PARAM_LABELS[param]} (%)",
                     ("Ratio", "Percent"), rows)
    if name == "6":
        rows = tuple((r.group, r.fatigue, r.igmax, r.percent) for r in fatigue_summary(subset, basis))
        return Table(name, "Fatigue (K) and fatigue as a percentage of IgMax",
                     ("Group", "Fatigue", "IgMax", "Fatigue%"), rows)
    if name == "7":
        matrix = io_matrix(corpus)
        rows = tuple((f"from {a.value}",) + tuple(matrix[(a, b)] for b in IO_TYPES) for a in IO_TYPES)
        rows += (("total", sum(matrix.values()), "", ""),)
        return Table(name, "Excitatory links between CA types (rows: source, columns: target)",
                     ("Source",) + tuple(f"to {b.value}" for b in IO_TYPES), rows)
    if name == "hist":
        hist = duration_histogram(subset)
        rows = tuple((f"[{lo:g}, {hi:g})",) + tuple(hist.counts[g][k] for g in GROUPS)
                     for k, (lo, hi) in enumerate(hist.bins()))
        return Table(name, "Ignition duration histogram (counts per 0.5 s bin)",
                     ("Bin (s)",) + GROUPS, rows)
    raise ValueError(f"unknown table {name!r}; choose from {', '.join(TABLE_NAMES)}")


def markdown_report(corpus: Corpus, basis: str = "rounded") -> str:
    title = corpus.metadata.get("title", "Corpus")
    subset = analysis_subset(corpus)
    persistent = [ca.id for ca in corpus.cas if ca.params.persistent]
    parts = [f"# {title}\n",
             f"{len(corpus.cas)} cell assemblies, {len(corpus.edges)} relationships, "
             f"horizon {corpus.end_time:g} s.\n",
             f"Analysis subset: {len(subset)} CAs (touch, kinaesthetic and the "
             f"{len(persistent)} still-ignited CAs removed: {', '.join(persistent) or 'none'}).\n"]
    if basis == "rounded":
        parts.append("Timing, ratio and fatigue tables are computed from the one-decimal means.\n")
    for name in TABLE_NAMES:
        table = build_table(corpus, name, basis)
        parts.append(f"## {table.title}\n")
        parts.append(table.to_markdown())
    return "\n".join(parts)
