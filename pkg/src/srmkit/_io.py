"""JSON helpers shared by the file formats.

Complex numbers travel as ``[re, im]`` pairs and matrices as lists of
columns, so ``matrix[:, g]`` is ``doc[g]``.
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .errors import ValidationError

SIG_DIGITS = 12


def round_sig(x: float, digits: int = SIG_DIGITS) -> float:
    """Round to ``digits`` significant digits (correctly rounded, half-even)."""
    x = float(x)
    if not np.isfinite(x):
        return x
    y = float(format(x, f".{digits}g"))
    return 0.0 if y == 0 else y


def fmt(x: float, digits: int = SIG_DIGITS) -> str:
    return format(round_sig(x, digits), f".{digits}g")


def complex_to_pair(z: complex, digits: int | None = SIG_DIGITS) -> list[float]:
    z = complex(z)
    if digits is None:
        return [z.real, z.imag]
    return [round_sig(z.real, digits), round_sig(z.imag, digits)]


def pair_to_complex(pair: Any, where: str) -> complex:
    if isinstance(pair, (int, float)) and not isinstance(pair, bool):
        return complex(pair)
    if (
        not isinstance(pair, (list, tuple))
        or len(pair) != 2
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in pair)
    ):
        raise ValidationError(f"{where}: expected a [re, im] pair, got {pair!r}")
    z = complex(float(pair[0]), float(pair[1]))
    if not np.isfinite(z.real) or not np.isfinite(z.imag):
        raise ValidationError(f"{where}: non-finite entry")
    return z


def columns_to_matrix(cols: Any, rows: int | None, where: str) -> np.ndarray:
    """Parse a list of columns of [re, im] pairs into an ``rows x len(cols)`` array."""
    if not isinstance(cols, list) or not cols:
        raise ValidationError(f"{where}: expected a nonempty list of columns")
    parsed = []
    for g, col in enumerate(cols):
        if not isinstance(col, list):
            raise ValidationError(f"{where}[{g}]: expected a list of entries")
        if rows is not None and len(col) != rows:
            raise ValidationError(
                f"{where}[{g}]: column has length {len(col)}, expected {rows}"
            )
        parsed.append([pair_to_complex(v, f"{where}[{g}][{k}]") for k, v in enumerate(col)])
    lengths = {len(c) for c in parsed}
    if len(lengths) != 1:
        raise ValidationError(f"{where}: columns have differing lengths {sorted(lengths)}")
    return np.array(parsed, dtype=complex).T.copy()


def matrix_to_columns(a: np.ndarray, digits: int | None = SIG_DIGITS) -> list:
    a = np.asarray(a)
    return [[complex_to_pair(z, digits) for z in a[:, g]] for g in range(a.shape[1])]


def square_matrix_from_doc(doc: Any, where: str) -> np.ndarray:
    """Square complex matrices (generators) use the same column layout."""
    mat = columns_to_matrix(doc, None, where)
    if mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"{where}: matrix is {mat.shape[0]}x{mat.shape[1]}, not square")
    return mat


def parse_document(document: Any, what: str) -> dict:
    if isinstance(document, (bytes, bytearray)):
        document = document.decode("utf-8")
    if isinstance(document, str):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{what}: invalid JSON ({exc})") from None
    if not isinstance(document, dict):
        raise ValidationError(f"{what}: top level must be a JSON object")
    return document


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True)
