"""Exact-arithmetic verification kit for degenerating quantum toroidal algebras to affine Yangians.

Modules, bottom up: ``scalar`` (Q(sqrt2, sqrt3) and truncated hbar-series),
``cartan`` and ``weyl`` (root data), ``toroidal`` (the classical toroidal Lie
algebra and its enveloping algebra), ``qtor`` (the quantum toroidal algebra),
``yangian`` (the affine Yangian), ``degeneration`` (the map Pi and filtration
orders) and ``cli``.
"""

from .cartan import CartanDatum, Root, build_cartan, parse_type
from .report import AT_CAP, FAIL, INCONCLUSIVE, PASS, Report
from .scalar import DEFAULT_TRUNC, FieldElem, HSeries

__version__ = "0.1.0"

__all__ = [
    "CartanDatum",
    "Root",
    "build_cartan",
    "parse_type",
    "Report",
    "PASS",
    "FAIL",
    "AT_CAP",
    "INCONCLUSIVE",
    "FieldElem",
    "HSeries",
    "DEFAULT_TRUNC",
]
