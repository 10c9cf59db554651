"""The bundled coffee-making corpus."""
from importlib import resources

CORPUS_FILE = "coffee.tacap"
CSV_FILE = "coffee_scam.csv"


def bundled_text() -> str:
    return resources.files(__name__).joinpath(CORPUS_FILE).read_text(encoding="utf-8")


def bundled_csv_text() -> str:
    return resources.files(__name__).joinpath(CSV_FILE).read_text(encoding="utf-8")


def load_bundled():
    from ..dsl import parse_corpus
    return parse_corpus(bundled_text())
