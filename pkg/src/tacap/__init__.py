"""Toolkit for cell-assembly task-analysis corpora: parse, lint, tabulate, simulate, draw."""
from .data import load_bundled
from .dsl import ParseError, import_scam_csv, parse_corpus, parse_io_list, serialize_corpus
from .model import (
    CaType, CellAssembly, Checkpoint, Corpus, Edge, EdgeKind, ScamParams,
    ca_type_from_id, duration, fatigue_k, lifecycle_bounds, PERSISTENT,
)
from .validate import validate

__version__ = "0.1.0"
