"""Reader and writer for the block-per-CA corpus text format and the flat SCAM CSV.

A document looks like::

    #meta title = Making coffee
    #meta end_time = 9.0

    [CA 01 CKEC Cognitive "COG Kitchen Entrance Check"]
    SCAM: potn=10 thresh=2 igmax=7 igfat=6 p50=-1.0 igtig=0.0 igtex=0.4 d50=0.5
    INPUTS: @env(at kitchen entrance). VKEG.
    OUTPUTS: VKEG, CMC, CAHWA.

    #checkpoint kettle_grip MRHH 4.1 0.05

Separators inside an I/O list rank how far apart in time the neighbouring
terms happen: ``&`` parallel (0), ``,`` (1), ``;`` (2), ``:`` (3).  A full
stop closes a group.  ``~ID`` is an inhibitory link, ``@env(text)`` an outside
stimulus and ``@motor`` behaviour leaving the modelled system.

Blocks may also carry a ``NOTES:`` line, and either I/O line may be left out
when the CA has nothing on that side.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from dataclasses import dataclass
from typing import Optional

from .model import (
    ENV, INPUTS, MOTOR, OUTPUTS, PARAM_NAMES, CaType, CellAssembly, Checkpoint, Corpus,
    Declaration, Edge, EdgeKind, InvariantError, ScamParams, UnknownPrefix,
    ca_type_from_id, valid_id,
)

ERROR = "Error"
WARNING = "Warning"

SCAM_CSV_HEADER = "seq,id,potn,thresh,igmax,igfat,p50,igtig,igtex,d50,acronym"

SEPARATORS = {"&": 0, ",": 1, ";": 2, ":": 3}
_SEP_TEXT = {0: " & ", 1: ", ", 2: "; ", 3: ": "}
OPTIONAL_PARAMS = ("igtex", "d50")


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    severity: str
    code: str
    message: str

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity} {self.code}: {self.message}"


class ParseError(ValueError):
    """Raised when a document has at least one Error diagnostic.

    ``diagnostics`` holds every entry found, warnings included.
    """

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        errors = [d for d in self.diagnostics if d.severity == ERROR]
        head = "; ".join(str(d) for d in errors[:3])
        more = f" (+{len(errors) - 3} more)" if len(errors) > 3 else ""
        super().__init__(f"{len(errors)} error(s): {head}{more}")

    @property
    def errors(self) -> list[Diagnostic]:
        return [d for d in self.diagnostics if d.severity == ERROR]


@dataclass(frozen=True)
class IoTerm:
    term: str  # CA id, "@env" or "@motor"
    kind: EdgeKind
    sep_level: int
    group: int = 0
    label: str = ""
    column: int = 1


class _Sink:
    """Collects diagnostics with a line/column offset applied."""

    def __init__(self):
        self.items: list[Diagnostic] = []

    def error(self, line, col, code, msg):
        self.items.append(Diagnostic(line, col, ERROR, code, msg))

    def warn(self, line, col, code, msg):
        self.items.append(Diagnostic(line, col, WARNING, code, msg))

    @property
    def failed(self) -> bool:
        return any(d.severity == ERROR for d in self.items)


# ---------------------------------------------------------------- I/O lists

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<sep>[&,;:.])
  | (?P<env>@env\((?P<label>[^()\n]*)\))
  | (?P<motor>@motor\b)
  | (?P<inhibit>~)
  | (?P<word>[A-Za-z0-9_]+)
""", re.VERBOSE)


def _lex_io(text: str, sink: _Sink, line: int, col0: int):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            ch = text[pos]
            code = "UNKNOWN_SIGIL" if ch in "@~!$%^*+=?/\\|#" else "BAD_CHARACTER"
            sink.error(line, col0 + pos, code, f"unexpected {ch!r} in I/O list")
            return None
        kind = m.lastgroup if m.lastgroup != "label" else "env"
        if kind != "ws":
            tokens.append((kind, m, col0 + pos))
        pos = m.end()
    return tokens


def _scan_io(text: str, sink: _Sink, line: int = 1, col0: int = 1) -> list[IoTerm]:
    tokens = _lex_io(text, sink, line, col0)
    if tokens is None:
        return []
    if not tokens:
        sink.error(line, col0, "EMPTY_LIST", "I/O list has no terms")
        return []
    terms: list[IoTerm] = []
    group = 0
    pending_sep: Optional[int] = None  # None: start of a group
    expect_term = True
    i = 0
    while i < len(tokens):
        kind, m, col = tokens[i]
        if kind == "sep":
            ch = m.group()
            if expect_term:
                sink.error(line, col, "INVALID_SEPARATOR", f"separator {ch!r} with no term before it")
                return []
            if ch == ".":
                group += 1
                pending_sep = None
            else:
                pending_sep = SEPARATORS[ch]
            expect_term = True
            i += 1
            continue
        if not expect_term:
            sink.error(line, col, "MISSING_SEPARATOR", "two terms with no separator between them")
            return []
        sep = 0 if pending_sep is None else pending_sep
        if kind == "inhibit":
            if i + 1 >= len(tokens) or tokens[i + 1][0] != "word" or tokens[i + 1][2] != col + 1:
                sink.error(line, col, "UNKNOWN_SIGIL", "'~' must be followed directly by a CA id")
                return []
            i += 1
            _, m, _ = tokens[i]
            if not valid_id(m.group()):
                sink.error(line, col + 1, "ILLEGAL_ID", f"{m.group()!r} is not an uppercase A-Z id")
                return []
            terms.append(IoTerm(m.group(), EdgeKind.INHIBIT, sep, group, "", col))
        elif kind == "env":
            label = m.group("label").strip()
            if not label:
                sink.error(line, col, "EMPTY_ENV", "@env() needs a stimulus description")
                return []
            terms.append(IoTerm(ENV, EdgeKind.ENV_IN, sep, group, label, col))
        elif kind == "motor":
            terms.append(IoTerm(MOTOR, EdgeKind.MOTOR_OUT, sep, group, "", col))
        else:
            word = m.group()
            if not valid_id(word):
                sink.error(line, col, "ILLEGAL_ID", f"{word!r} is not an uppercase A-Z id")
                return []
            terms.append(IoTerm(word, EdgeKind.EXCITE, sep, group, "", col))
        expect_term = False
        pending_sep = -1  # a term was seen; next one needs a separator
        i += 1
    if expect_term and pending_sep is not None:
        _, m, col = tokens[-1]
        sink.error(line, col, "TRAILING_SEPARATOR", f"list ends with {m.group()!r}; only '.' may end a list")
        return []
    return terms


def parse_io_list(text: str) -> list[IoTerm]:
    """Split one INPUTS or OUTPUTS clause into terms.

    Raises ParseError for an empty clause, a dangling separator, or a token
    that is not a term.
    """
    sink = _Sink()
    terms = _scan_io(text, sink)
    if sink.failed:
        raise ParseError(sink.items)
    return terms


# ---------------------------------------------------------------- numbers

def _format_number(x: float, integral_ok: bool) -> str:
    text = repr(float(x))
    if integral_ok and text.endswith(".0"):
        text = text[:-2]
    return text


def format_param(name: str, value: Optional[float]) -> str:
    if value is None:
        return "-"
    return _format_number(value, integral_ok=name in ("potn", "thresh", "igmax", "igfat"))


def _to_number(text: str) -> Optional[float]:
    try:
        value = float(text)
    except ValueError:
        return None
    if not math.isfinite(value):
        return None
    return value


# ---------------------------------------------------------------- corpus text

_HEADER_RE = re.compile(r'\[CA\s+(\S+)\s+(\S+)\s+(\S+)(?:\s+(".*"))?\s*\]\s*$')
_META_RE = re.compile(r"#meta\s+([A-Za-z_][A-Za-z0-9_.]*)\s*=(.*)$")
_DIRECTIVE_RE = re.compile(r"#([A-Za-z]\w*)")


@dataclass
class _Block:
    line: int
    seq: int
    ca_id: str
    ca_type: Optional[CaType]
    name: str
    scam: Optional[dict] = None
    inputs: Optional[list] = None
    outputs: Optional[list] = None
    notes: Optional[str] = None
    io_lines: tuple = (0, 0)


def _parse_scam(body: str, sink: _Sink, line: int, col0: int) -> Optional[dict]:
    values: dict = {}
    ok = True
    for m in re.finditer(r"\S+", body):
        col = col0 + m.start()
        token = m.group()
        key, eq, raw = token.partition("=")
        if not eq or not key:
            sink.error(line, col, "MALFORMED_SCAM", f"expected key=value, got {token!r}")
            ok = False
            continue
        if key not in PARAM_NAMES:
            sink.error(line, col, "UNKNOWN_KEY", f"unknown SCAM parameter {key!r}")
            ok = False
            continue
        if key in values:
            sink.error(line, col, "DUPLICATE_KEY", f"{key} given twice")
            ok = False
            continue
        if raw == "-" and key in OPTIONAL_PARAMS:
            values[key] = None
            continue
        number = _to_number(raw)
        if number is None:
            sink.error(line, col + len(key) + 1, "NON_NUMERIC", f"{key}={raw!r} is not a number")
            ok = False
            continue
        values[key] = number
    missing = [k for k in PARAM_NAMES if k not in values]
    if missing and ok:
        sink.error(line, col0, "MISSING_KEY", "missing SCAM parameter(s): " + ", ".join(missing))
        ok = False
    return values if ok else None


def _parse_header(text: str, sink: _Sink, line: int) -> Optional[_Block]:
    m = _HEADER_RE.match(text)
    if m is None:
        sink.error(line, 1, "MALFORMED_HEADER", 'expected [CA <seq> <ID> <Type> "<name>"]')
        return None
    seq_text, ca_id, type_name, quoted = m.groups()
    ok = True
    if not seq_text.isdigit() or int(seq_text) < 1:
        sink.error(line, m.start(1) + 1, "BAD_SEQ", f"seq {seq_text!r} must be a positive integer")
        ok = False
    if not valid_id(ca_id):
        sink.error(line, m.start(2) + 1, "ILLEGAL_ID", f"{ca_id!r} is not an uppercase A-Z id")
        ok = False
    try:
        ca_type = CaType.from_name(type_name)
    except ValueError:
        sink.error(line, m.start(3) + 1, "UNKNOWN_TYPE", f"unknown type {type_name!r}")
        ca_type = None
        ok = False
    if ok and ca_id[0] != ca_type.prefix:
        sink.error(line, m.start(2) + 1, "TYPE_PREFIX_MISMATCH",
                   f"{ca_id} does not start with {ca_type.prefix} for type {ca_type.value}")
        ok = False
    name = ""
    if quoted is not None:
        try:
            name = json.loads(quoted)
        except ValueError:
            sink.error(line, m.start(4) + 1, "MALFORMED_HEADER", "acronym expansion is not a valid quoted string")
            ok = False
        else:
            if not isinstance(name, str):
                sink.error(line, m.start(4) + 1, "MALFORMED_HEADER", "acronym expansion must be a string")
                ok = False
    if ok and not name:
        sink.warn(line, 1, "MISSING_ACRONYM", f"{ca_id} has no acronym expansion")
    if not ok:
        return None
    return _Block(line, int(seq_text), ca_id, ca_type, name)


class _EdgeBuilder:
    """Turns per-CA term lists into merged edges."""

    def __init__(self, sink: _Sink):
        self.sink = sink
        self.edges: dict[tuple, list] = {}

    def add(self, ca_id: str, side: str, terms: list[IoTerm], line: int):
        for order, t in enumerate(terms):
            if side == INPUTS:
                if t.kind is EdgeKind.MOTOR_OUT:
                    self.sink.error(line, t.column, "PSEUDO_SIDE", "@motor can only appear in OUTPUTS")
                    continue
                source, target = t.term, ca_id
            else:
                if t.kind is EdgeKind.ENV_IN:
                    self.sink.error(line, t.column, "PSEUDO_SIDE", "@env can only appear in INPUTS")
                    continue
                source, target = ca_id, t.term
            if source == target:
                self.sink.error(line, t.column, "SELF_EDGE", f"{ca_id} lists itself")
                continue
            key = (source, target, t.kind, t.label)
            decl = Declaration(ca_id, side, order, t.group, t.sep_level)
            self.edges.setdefault(key, []).append(decl)

    def build(self) -> list[Edge]:
        return [Edge(s, t, k, tuple(decls), label) for (s, t, k, label), decls in self.edges.items()]


def _split_lines(text):
    return text.split("\n")


def _decode(text, sink: _Sink) -> Optional[str]:
    if isinstance(text, (bytes, bytearray)):
        try:
            return bytes(text).decode("utf-8")
        except UnicodeDecodeError as exc:
            prefix = bytes(text[:exc.start])
            line = prefix.count(b"\n") + 1
            col = exc.start - (prefix.rfind(b"\n") + 1) + 1
            sink.error(line, col, "ENCODING", "document is not valid UTF-8")
            return None
    return text


def parse_corpus(text, diagnostics: Optional[list] = None) -> Corpus:
    """Parse a corpus document.

    Returns the Corpus, or raises ParseError carrying every diagnostic found.
    Warnings for a successful parse are appended to ``diagnostics`` if given.
    """
    sink = _Sink()
    corpus = _parse_corpus(text, sink)
    if sink.failed or corpus is None:
        raise ParseError(sink.items)
    if diagnostics is not None:
        diagnostics.extend(sink.items)
    return corpus


def _parse_corpus(text, sink: _Sink) -> Optional[Corpus]:
    text = _decode(text, sink)
    if text is None:
        return None
    metadata: dict = {}
    end_time = None
    end_time_line = 0
    blocks: list[_Block] = []
    checkpoints: list[tuple[int, Checkpoint]] = []
    current: Optional[_Block] = None
    seen_ids: dict[str, int] = {}

    for lineno, raw in enumerate(_split_lines(text), start=1):
        line = raw.rstrip("\r")
        stripped = line.strip()
        indent = len(line) - len(line.lstrip())
        if not stripped:
            continue
        if stripped.startswith("#"):
            directive = _DIRECTIVE_RE.match(stripped)
            if directive is None:
                continue  # plain comment
            name = directive.group(1)
            if name == "meta":
                m = _META_RE.match(stripped)
                if m is None:
                    sink.error(lineno, indent + 1, "MALFORMED_META", "expected #meta key = value")
                    continue
                key, value = m.group(1), m.group(2).strip()
                if key == "end_time":
                    end_time = _to_number(value)
                    end_time_line = lineno
                    if end_time is None:
                        sink.error(lineno, indent + 1, "NON_NUMERIC", f"end_time {value!r} is not a number")
                elif key in metadata:
                    sink.error(lineno, indent + 1, "DUPLICATE_META", f"#meta {key} given twice")
                else:
                    metadata[key] = value
            elif name == "checkpoint":
                cp = _parse_checkpoint(stripped, sink, lineno, indent)
                if cp is not None:
                    checkpoints.append((lineno, cp))
            else:
                sink.warn(lineno, indent + 1, "UNKNOWN_DIRECTIVE", f"ignored directive #{name}")
            continue
        if stripped.startswith("[CA"):
            current = _parse_header(stripped, sink, lineno)
            if current is not None:
                if current.ca_id in seen_ids:
                    sink.error(lineno, indent + 1, "DUPLICATE_ID",
                               f"{current.ca_id} already defined on line {seen_ids[current.ca_id]}")
                else:
                    seen_ids[current.ca_id] = lineno
                if blocks and current.seq <= blocks[-1].seq:
                    sink.error(lineno, indent + 1, "SEQ_ORDER",
                               f"seq {current.seq} does not follow {blocks[-1].seq}")
                blocks.append(current)
            else:
                # keep consuming the block's lines without reporting them as orphans
                current = _Block(lineno, 0, "", None, "")
            continue
        keyword, colon, body = stripped.partition(":")
        if not colon or keyword not in ("SCAM", "INPUTS", "OUTPUTS", "NOTES"):
            sink.error(lineno, indent + 1, "SYNTAX", f"unrecognised line {stripped[:40]!r}")
            continue
        if current is None:
            sink.error(lineno, indent + 1, "ORPHAN_LINE", f"{keyword} line outside a [CA ...] block")
            continue
        body_col = indent + len(keyword) + 2 + (len(body) - len(body.lstrip()))
        body = body.strip()
        if keyword == "SCAM":
            if current.scam is not None:
                sink.error(lineno, indent + 1, "DUPLICATE_LINE", "second SCAM line in block")
                continue
            current.scam = _parse_scam(body, sink, lineno, body_col) or {}
        elif keyword == "NOTES":
            if current.notes is not None:
                sink.error(lineno, indent + 1, "DUPLICATE_LINE", "second NOTES line in block")
                continue
            current.notes = body
        else:
            attr = "inputs" if keyword == "INPUTS" else "outputs"
            if getattr(current, attr) is not None:
                sink.error(lineno, indent + 1, "DUPLICATE_LINE", f"second {keyword} line in block")
                continue
            setattr(current, attr, (lineno, _scan_io(body, sink, lineno, body_col)))

    builder = _EdgeBuilder(sink)
    cas = []
    for block in blocks:
        if block.scam is None:
            sink.error(block.line, 1, "MISSING_SCAM", f"{block.ca_id} has no SCAM line")
            continue
        if not block.scam:
            continue
        for side, entry in ((INPUTS, block.inputs), (OUTPUTS, block.outputs)):
            if entry is not None:
                builder.add(block.ca_id, side, entry[1], entry[0])
        try:
            cas.append(CellAssembly(block.seq, block.ca_id, block.ca_type, block.name,
                                    ScamParams(**block.scam), block.notes))
        except InvariantError as exc:
            sink.error(block.line, 1, "INVARIANT", str(exc))

    if end_time is not None and not sink.failed:
        latest = max((t for ca in cas for t in ca.params.finite_times()), default=end_time)
        if end_time < latest:
            sink.error(end_time_line, 1, "END_TIME", f"end_time {end_time} precedes recorded time {latest}")

    if sink.failed:
        return None
    try:
        return Corpus(tuple(cas), tuple(builder.build()), tuple(cp for _, cp in checkpoints),
                      end_time, metadata)
    except InvariantError as exc:
        sink.error(1, 1, "INVARIANT", str(exc))
        return None


def _parse_checkpoint(text: str, sink: _Sink, line: int, indent: int) -> Optional[Checkpoint]:
    parts = text.split()
    if len(parts) != 5:
        sink.error(line, indent + 1, "MALFORMED_CHECKPOINT", "expected #checkpoint <name> <ID> <time> <tolerance>")
        return None
    _, name, ca_id, t_text, tol_text = parts
    if not valid_id(ca_id):
        sink.error(line, indent + 1, "ILLEGAL_ID", f"{ca_id!r} is not an uppercase A-Z id")
        return None
    t, tol = _to_number(t_text), _to_number(tol_text)
    if t is None or tol is None:
        sink.error(line, indent + 1, "NON_NUMERIC", "checkpoint time and tolerance must be numbers")
        return None
    if tol < 0:
        sink.error(line, indent + 1, "BAD_TOLERANCE", "checkpoint tolerance must be >= 0")
        return None
    return Checkpoint(name, ca_id, t, tol)


# ---------------------------------------------------------------- serialize

def _term_text(edge: Edge, ca_id: str, side: str) -> str:
    if edge.kind is EdgeKind.ENV_IN:
        return f"@env({edge.label})"
    if edge.kind is EdgeKind.MOTOR_OUT:
        return "@motor"
    other = edge.source if side == INPUTS else edge.target
    return "~" + other if edge.kind is EdgeKind.INHIBIT else other


def format_io_list(entries: list[tuple[Declaration, str]]) -> str:
    """Join (declaration, term text) pairs back into clause text."""
    entries = sorted(entries, key=lambda e: e[0].order)
    out = []
    prev = None
    for i, (decl, text) in enumerate(entries):
        if decl.order != i:
            raise ValueError(f"{decl.ca_id} {decl.side}: term orders are not 0..n-1")
        if prev is None:
            if decl.group != 0 or decl.sep_level != 0:
                raise ValueError(f"{decl.ca_id} {decl.side}: first term must open group 0 at level 0")
        elif decl.group == prev.group + 1:
            if decl.sep_level != 0:
                raise ValueError(f"{decl.ca_id} {decl.side}: first term of a group must have level 0")
            out.append(". ")
        elif decl.group == prev.group:
            out.append(_SEP_TEXT[decl.sep_level])
        else:
            raise ValueError(f"{decl.ca_id} {decl.side}: group numbers must rise by one")
        out.append(text)
        prev = decl
    return "".join(out) + "."


def serialize_corpus(corpus: Corpus) -> str:
    lines = [f"#meta end_time = {_format_number(corpus.end_time, False)}"]
    for key in sorted(corpus.metadata):
        if key != "end_time":
            lines.append(f"#meta {key} = {corpus.metadata[key]}")

    per_side: dict[tuple[str, str], list] = {}
    for edge in corpus.edges:
        for decl in edge.declarations:
            per_side.setdefault((decl.ca_id, decl.side), []).append(
                (decl, _term_text(edge, decl.ca_id, decl.side)))

    for ca in corpus.cas:
        lines.append("")
        lines.append(f"[CA {ca.seq:02d} {ca.id} {ca.ca_type.value} "
                     f"{json.dumps(ca.acronym_expansion, ensure_ascii=False)}]")
        params = " ".join(f"{name}={format_param(name, getattr(ca.params, name))}" for name in PARAM_NAMES)
        lines.append(f"SCAM: {params}")
        for side in (INPUTS, OUTPUTS):
            entries = per_side.get((ca.id, side))
            if entries:
                lines.append(f"{side}: {format_io_list(entries)}")
        if ca.notes is not None:
            lines.append(f"NOTES: {ca.notes}")

    if corpus.checkpoints:
        lines.append("")
    for cp in corpus.checkpoints:
        lines.append(f"#checkpoint {cp.name} {cp.ca_id} {_format_number(cp.expected_time, False)} "
                     f"{_format_number(cp.tolerance, False)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- SCAM CSV

def import_scam_csv(text, diagnostics: Optional[list] = None) -> Corpus:
    """Read a SCAM table (no edges). Raises ParseError on any Error."""
    sink = _Sink()
    corpus = _import_csv(text, sink)
    if sink.failed or corpus is None:
        raise ParseError(sink.items)
    if diagnostics is not None:
        diagnostics.extend(sink.items)
    return corpus


def _import_csv(text, sink: _Sink) -> Optional[Corpus]:
    text = _decode(text, sink)
    if text is None:
        return None
    try:
        rows = list(csv.reader(io.StringIO(text, newline="")))
    except csv.Error as exc:
        sink.error(1, 1, "MALFORMED_CSV", str(exc))
        return None
    if not rows or ",".join(rows[0]) != SCAM_CSV_HEADER:
        sink.error(1, 1, "BAD_HEADER", f"first row must be exactly {SCAM_CSV_HEADER}")
        return None
    cas = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or row == [""]:
            continue
        if len(row) != 11:
            sink.error(lineno, 1, "COLUMN_COUNT_MISMATCH", f"expected 11 columns, got {len(row)}")
            continue
        seq_text, ca_id, *nums, acronym = row
        seq_text, ca_id = seq_text.strip(), ca_id.strip()
        if not seq_text.isdigit() or int(seq_text) < 1:
            sink.error(lineno, 1, "BAD_SEQ", f"seq {seq_text!r} must be a positive integer")
            continue
        if not valid_id(ca_id):
            sink.error(lineno, 1, "ILLEGAL_ID", f"{ca_id!r} is not an uppercase A-Z id")
            continue
        try:
            ca_type = ca_type_from_id(ca_id)
        except UnknownPrefix as exc:
            sink.error(lineno, 1, "UNKNOWN_PREFIX", str(exc))
            continue
        values = {}
        bad = False
        for name, raw in zip(PARAM_NAMES, nums):
            raw = raw.strip()
            if name in OPTIONAL_PARAMS and raw in ("", "-"):
                values[name] = None
                continue
            number = _to_number(raw)
            if number is None:
                sink.error(lineno, 1, "NON_NUMERIC", f"{ca_id} {name}={raw!r} is not a number")
                bad = True
            values[name] = number
        if bad:
            continue
        if (values["igtex"] is None) != (values["d50"] is None):
            sink.error(lineno, 1, "PERSISTENCE_MISMATCH",
                       f"{ca_id}: igtex and d50 must both be given or both be '-'")
            continue
        acronym = acronym.strip()
        if not acronym:
            sink.warn(lineno, 1, "MISSING_ACRONYM", f"{ca_id} has no acronym expansion")
        if any(c.id == ca_id for c in cas):
            sink.error(lineno, 1, "DUPLICATE_ID", f"{ca_id} appears twice")
            continue
        if cas and int(seq_text) <= cas[-1].seq:
            sink.error(lineno, 1, "SEQ_ORDER", f"seq {seq_text} does not follow {cas[-1].seq}")
            continue
        cas.append(CellAssembly(int(seq_text), ca_id, ca_type, acronym, ScamParams(**values)))
    if sink.failed:
        return None
    try:
        return Corpus(tuple(cas))
    except InvariantError as exc:
        sink.error(1, 1, "INVARIANT", str(exc))
        return None


def export_scam_csv(corpus: Corpus) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SCAM_CSV_HEADER.split(","))
    for ca in corpus.cas:
        if "\x00" in ca.acronym_expansion:
            raise ValueError(f"{ca.id}: acronym contains a NUL character, which CSV cannot hold")
        writer.writerow([f"{ca.seq:02d}", ca.id]
                        + [format_param(name, getattr(ca.params, name)) for name in PARAM_NAMES]
                        + [ca.acronym_expansion])
    return buf.getvalue()
