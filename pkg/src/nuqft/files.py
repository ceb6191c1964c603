"""Plain-text inputs.

Angle files hold one decimal per line in ``[0, N)``. Vector files hold one
``re,im`` pair per line. Blank lines and ``#`` comments are ignored in both.
"""

import numpy as np

from .engine import NonuniformAngleSet
from .errors import InputFormatError
from .transform import n_qubits_for


def _lines(path):
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read().splitlines()
    except OSError as exc:
        raise InputFormatError(f"cannot read file: {exc.strerror or exc}", path=path) from exc
    for number, line in enumerate(raw, start=1):
        text = line.split("#", 1)[0].strip()
        if text:
            yield number, text


def _number(text, number, path):
    try:
        value = float(text)
    except ValueError:
        raise InputFormatError(f"not a number: {text!r}", line=number, path=path) from None
    if not np.isfinite(value):
        raise InputFormatError(f"non-finite value {text!r}", line=number, path=path)
    return value


def load_angles(path, N):
    """Read an angle file into a ``NonuniformAngleSet`` for length ``N``."""
    n_qubits_for(N)
    angles = []
    for number, text in _lines(path):
        phi = _number(text, number, path)
        if not 0.0 <= phi < N:
            raise InputFormatError(f"angle {phi!r} outside [0, {N})", line=number, path=path)
        angles.append(phi)
    if not angles:
        raise InputFormatError("no angles", path=path)
    return NonuniformAngleSet(N, np.array(angles))


def load_vector(path):
    """Read ``re,im`` lines into a complex vector."""
    values = []
    for number, text in _lines(path):
        parts = text.split(",")
        if len(parts) != 2:
            raise InputFormatError(f"expected 're,im', got {text!r}", line=number, path=path)
        re, im = (_number(p.strip(), number, path) for p in parts)
        values.append(complex(re, im))
    if not values:
        raise InputFormatError("no vector entries", path=path)
    return np.array(values, dtype=complex)
