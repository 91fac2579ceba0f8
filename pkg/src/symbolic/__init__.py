from pathlib import Path
from typing import List

from .expressions import (
    ONE,
    Atom,
    Expression,
    HomApp,
    Inverse,
    Letter,
    Product,
    atom,
    hom_app,
    inverse,
    normalize,
    product,
    to_text,
    word_of,
)
from .parser import ExpressionParser, parse
from .rewriting import (
    Direction,
    Hypothesis,
    ProofResult,
    ProofStatus,
    ProofStep,
    RewriteSystem,
    balance_word,
    prove_equal,
    replay,
)
from .instantiate import (
    MODELS,
    Instantiation,
    diagonal_projection,
    instantiate,
    matrix_model,
    soundness_check,
    triangular_model,
)
from .scripts import Script, ScriptReport, VariantReport, load_script, parse_script, verify_script

CORPUS_DIR = Path(__file__).parent / "corpus"


def corpus_scripts() -> List[Path]:
    """The shipped identity scripts, in a stable order."""
    return sorted(CORPUS_DIR.glob("*.nc"))


__all__ = [
    'ONE', 'Atom', 'Expression', 'HomApp', 'Inverse', 'Letter', 'Product', 'atom', 'hom_app', 'inverse',
    'normalize', 'product', 'to_text', 'word_of', 'ExpressionParser', 'parse', 'Direction', 'Hypothesis',
    'ProofResult', 'ProofStatus', 'ProofStep', 'RewriteSystem', 'balance_word', 'prove_equal', 'replay',
    'MODELS', 'Instantiation', 'diagonal_projection', 'instantiate', 'matrix_model', 'soundness_check',
    'triangular_model', 'Script', 'ScriptReport',
    'VariantReport', 'load_script', 'parse_script', 'verify_script', 'CORPUS_DIR', 'corpus_scripts',
]
