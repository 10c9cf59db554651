"""Domain types for cell-assembly corpora.

Neuron counts are kiloneurons, times are seconds. Nothing here enforces the
parameter orderings (thresh <= igfat <= igmax <= potn and so on); a corpus can
hold a broken cell assembly so the validator has something to report on.
Only structural facts (identifier syntax, type prefix, edge endpoints) are
checked at construction.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Optional

ENV = "@env"
MOTOR = "@motor"
PSEUDO_NODES = (ENV, MOTOR)

_ID_RE = re.compile(r"[A-Z]+")


class InvariantError(ValueError):
    """A value violates a structural invariant of the domain model."""


class UnknownPrefix(InvariantError):
    pass


class CaType(enum.Enum):
    COGNITIVE = "Cognitive"
    VISUAL = "Visual"
    TOUCH = "Touch"
    KINAESTHETIC = "Kinaesthetic"
    MOTOR = "Motor"

    @property
    def prefix(self) -> str:
        return self.value[0]

    @property
    def perceptual(self) -> bool:
        return self in (CaType.VISUAL, CaType.TOUCH, CaType.KINAESTHETIC)

    @classmethod
    def from_name(cls, name: str) -> "CaType":
        for member in cls:
            if member.value.lower() == name.lower():
                return member
        raise ValueError(f"unknown cell assembly type {name!r}")


_BY_PREFIX = {t.prefix: t for t in CaType}


def ca_type_from_id(ca_id: str) -> CaType:
    if not ca_id:
        raise InvariantError("empty identifier")
    try:
        return _BY_PREFIX[ca_id[0]]
    except KeyError:
        raise UnknownPrefix(f"{ca_id!r}: no cell assembly type has prefix {ca_id[0]!r}") from None


def valid_id(ca_id: str) -> bool:
    return bool(_ID_RE.fullmatch(ca_id))


PARAM_NAMES = ("potn", "thresh", "igmax", "igfat", "p50", "igtig", "igtex", "d50")
NEURON_PARAMS = PARAM_NAMES[:4]
TIME_PARAMS = PARAM_NAMES[4:]


@dataclass(frozen=True)
class ScamParams:
    potn: float
    thresh: float
    igmax: float
    igfat: float
    p50: float
    igtig: float
    igtex: Optional[float] = None
    d50: Optional[float] = None

    @property
    def persistent(self) -> bool:
        """Still ignited at the end of the analysis (no extinction recorded)."""
        return self.igtex is None

    def as_tuple(self) -> tuple:
        return tuple(getattr(self, name) for name in PARAM_NAMES)

    def finite_times(self) -> list[float]:
        return [t for t in (self.p50, self.igtig, self.igtex, self.d50) if t is not None]


@dataclass(frozen=True)
class CellAssembly:
    seq: int
    id: str
    ca_type: CaType
    acronym_expansion: str
    params: ScamParams
    notes: Optional[str] = None

    def __post_init__(self):
        if not valid_id(self.id):
            raise InvariantError(f"identifier {self.id!r} must be uppercase A-Z")
        if self.seq < 1:
            raise InvariantError(f"{self.id}: seq must be positive, got {self.seq}")
        if self.id[0] != self.ca_type.prefix:
            raise InvariantError(
                f"{self.id}: first letter does not match type {self.ca_type.value}")


class EdgeKind(enum.Enum):
    EXCITE = "Excite"
    INHIBIT = "Inhibit"
    ENV_IN = "EnvIn"
    MOTOR_OUT = "MotorOut"


INPUTS = "INPUTS"
OUTPUTS = "OUTPUTS"


@dataclass(frozen=True, order=True)
class Declaration:
    """Where an edge was written down: one term in one CA's I/O list.

    ``group`` counts full stops before the term, ``order`` is the term's
    position in the whole list and ``sep_level`` the separator in front of it
    (0 parallel, 1 comma, 2 semicolon, 3 colon).
    """
    ca_id: str
    side: str
    order: int
    group: int
    sep_level: int

    def __post_init__(self):
        if self.side not in (INPUTS, OUTPUTS):
            raise InvariantError(f"bad declaration side {self.side!r}")
        if not 0 <= self.sep_level <= 3:
            raise InvariantError(f"separator level {self.sep_level} outside 0-3")


@dataclass(frozen=True)
class Edge:
    source: str
    target: str
    kind: EdgeKind
    declarations: tuple[Declaration, ...]
    label: str = ""  # stimulus text for environment inputs

    def __post_init__(self):
        if self.source == self.target:
            raise InvariantError(f"self edge on {self.source}")
        if (self.kind is EdgeKind.ENV_IN) != (self.source == ENV):
            raise InvariantError(f"{self.source}->{self.target}: EnvIn iff source is {ENV}")
        if (self.kind is EdgeKind.MOTOR_OUT) != (self.target == MOTOR):
            raise InvariantError(f"{self.source}->{self.target}: MotorOut iff target is {MOTOR}")
        if self.target == ENV or self.source == MOTOR:
            raise InvariantError(f"{self.source}->{self.target}: pseudo-node on wrong end")
        if not self.declarations:
            raise InvariantError(f"{self.source}->{self.target}: edge without a declaration")

    @property
    def key(self) -> tuple:
        return (self.source, self.target, self.kind, self.label)

    @property
    def sep_level(self) -> int:
        return self.declarations[0].sep_level

    @property
    def order(self) -> int:
        return self.declarations[0].order

    @property
    def declared_at(self) -> tuple[tuple[str, str], ...]:
        return tuple((d.ca_id, d.side) for d in self.declarations)

    def declared_on(self, side: str) -> bool:
        return any(d.side == side for d in self.declarations)

    @property
    def modeled(self) -> bool:
        """Both ends are (meant to be) cell assemblies rather than pseudo-nodes."""
        return self.source not in PSEUDO_NODES and self.target not in PSEUDO_NODES


@dataclass(frozen=True)
class Checkpoint:
    name: str
    ca_id: str
    expected_time: float
    tolerance: float

    def __post_init__(self):
        if self.tolerance < 0:
            raise InvariantError(f"checkpoint {self.name}: negative tolerance")


@dataclass(frozen=True)
class Corpus:
    cas: tuple[CellAssembly, ...]
    edges: tuple[Edge, ...] = ()
    checkpoints: tuple[Checkpoint, ...] = ()
    end_time: Optional[float] = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        cas = tuple(self.cas)
        ids = [ca.id for ca in cas]
        if len(set(ids)) != len(ids):
            raise InvariantError("duplicate cell assembly ids")
        seqs = [ca.seq for ca in cas]
        if any(a >= b for a, b in zip(seqs, seqs[1:])):
            raise InvariantError("seq values must be unique and ascending")
        latest = max((t for ca in cas for t in ca.params.finite_times()), default=0.0)
        end_time = latest if self.end_time is None else float(self.end_time)
        if end_time < latest:
            raise InvariantError(f"end_time {end_time} precedes last recorded time {latest}")
        object.__setattr__(self, "cas", cas)
        object.__setattr__(self, "end_time", end_time)
        object.__setattr__(self, "checkpoints", tuple(self.checkpoints))
        object.__setattr__(self, "metadata", dict(self.metadata))
        position = {ca_id: i for i, ca_id in enumerate(ids)}
        object.__setattr__(self, "edges", _canonical_edges(self.edges, position))

    def __hash__(self):
        return hash((self.cas, self.edges, self.checkpoints, self.end_time))

    def get(self, ca_id: str) -> Optional[CellAssembly]:
        return self._index().get(ca_id)

    def __getitem__(self, ca_id: str) -> CellAssembly:
        ca = self.get(ca_id)
        if ca is None:
            raise KeyError(ca_id)
        return ca

    def __contains__(self, ca_id: str) -> bool:
        return ca_id in self._index()

    def _index(self) -> dict:
        index = self.__dict__.get("_idx")
        if index is None:
            index = {ca.id: ca for ca in self.cas}
            object.__setattr__(self, "_idx", index)
        return index

    def __eq__(self, other):
        if not isinstance(other, Corpus):
            return NotImplemented
        return (self.cas == other.cas and self.edges == other.edges
                and self.checkpoints == other.checkpoints
                and self.end_time == other.end_time and self.metadata == other.metadata)

    def acknowledged_missing(self) -> set[str]:
        """Ids the corpus declares as referenced but deliberately undefined."""
        raw = self.metadata.get("acknowledged_missing", "")
        return {part.strip() for part in raw.split(",") if part.strip()}


def _canonical_edges(edges, position) -> tuple[Edge, ...]:
    # Edges and their declarations follow document order, so a corpus built by
    # hand compares equal to the same corpus after a serialize/parse cycle.
    side_rank = {INPUTS: 0, OUTPUTS: 1}

    def decl_key(d: Declaration):
        return (position.get(d.ca_id, len(position)), d.ca_id, side_rank[d.side], d.order)

    out = []
    for edge in edges:
        decls = tuple(sorted(edge.declarations, key=decl_key))
        if decls != edge.declarations:
            edge = Edge(edge.source, edge.target, edge.kind, decls, edge.label)
        out.append(edge)
    out.sort(key=lambda e: decl_key(e.declarations[0]))
    return tuple(out)


class _Persistent:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "PERSISTENT"

    def __reduce__(self):
        return (_Persistent, ())


PERSISTENT = _Persistent()


def duration(ca: CellAssembly):
    """Ignition duration in seconds, or ``PERSISTENT`` if never extinguished."""
    p = ca.params
    if p.igtex is None:
        return PERSISTENT
    return p.igtex - p.igtig


def fatigue_k(ca: CellAssembly) -> float:
    return ca.params.igmax - ca.params.igfat


@dataclass(frozen=True)
class LifecycleBounds:
    prime_start: float
    ignite: float
    extinguish: Optional[float]
    decay_end: Optional[float]

    def __iter__(self):
        return iter((self.prime_start, self.ignite, self.extinguish, self.decay_end))


def lifecycle_bounds(ca: CellAssembly) -> LifecycleBounds:
    """Start of priming and end of decay under linear ramps.

    A linear ramp through half its height at P50% started twice as far back,
    likewise for the decay after extinction.
    """
    p = ca.params
    prime_start = p.igtig - 2 * (p.igtig - p.p50)
    decay_end = None
    if p.igtex is not None and p.d50 is not None:
        decay_end = p.igtex + 2 * (p.d50 - p.igtex)
    return LifecycleBounds(prime_start, p.igtig, p.igtex, decay_end)
