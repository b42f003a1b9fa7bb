"""exmon: exact expectation computations over finite state spaces.

The exact core (effect algebras, distributions, expectations, program
semantics) works entirely in arbitrary-precision rationals; the operator
module works in double precision at dimensions 2 to 4 with explicit
tolerances.
"""

__version__ = "0.1.0"

from .rational import Rational, as_rational, as_unit, format_rational, parse_rational
from .report import AxiomCheck, LawFailure, LawReport

__all__ = [
    "__version__",
    "Rational",
    "as_rational",
    "as_unit",
    "format_rational",
    "parse_rational",
    "AxiomCheck",
    "LawFailure",
    "LawReport",
]
