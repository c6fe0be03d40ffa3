"""Reading and writing dense matrices.

Two formats are supported:

``mm``
    Matrix Market array format, ``%%MatrixMarket matrix array complex general``
    (or ``real general``), a dimension line ``m n`` and then ``m*n`` entries in
    column-major order, one per line; complex entries are two reals.
``csv``
    One matrix row per line, comma separated.  Entries use the literals
    ``a``, ``bi``, ``a+bi`` and ``a-bi`` (``j`` is accepted for ``i``, spaces
    are ignored).

Numbers are written with 17 significant digits so a write/read round trip
reproduces every double exactly.
"""

import os
import re

import numpy as np

from .errors import IoError, ParseError
from .numkernel import as_matrix

FORMATS = ("mm", "csv")

_NUM = r"(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_REAL = re.compile(rf"[+-]?{_NUM}")
_IMAG = re.compile(rf"(?P<sign>[+-]?)(?P<mag>{_NUM})?[ij]")
_CPLX = re.compile(rf"(?P<re>[+-]?{_NUM})(?P<sign>[+-])(?P<mag>{_NUM})?[ij]")

_HEADER = re.compile(r"%%MatrixMarket\s+matrix\s+array\s+(real|complex)\s+general\s*$", re.IGNORECASE)


def guess_format(path):
    ext = os.path.splitext(str(path))[1].lower()
    return "csv" if ext in (".csv", ".txt") else "mm"


def _fmt(x):
    return format(float(x), ".17g")


# --------------------------------------------------------------------------
# Matrix Market
# --------------------------------------------------------------------------

def format_mm(m):
    m = as_matrix(m)
    # a negative zero imaginary part still needs the complex form to survive
    is_real = not np.any(np.signbit(m.imag) | (m.imag != 0))
    lines = [f"%%MatrixMarket matrix array {'real' if is_real else 'complex'} general",
             f"{m.shape[0]} {m.shape[1]}"]
    for z in m.flatten(order="F"):
        lines.append(_fmt(z.real) if is_real else f"{_fmt(z.real)} {_fmt(z.imag)}")
    return "\n".join(lines) + "\n"


def _parse_float(token, path, line, column):
    if not _REAL.fullmatch(token):
        raise ParseError(f"invalid number {token!r}", path, line, column)
    return float(token)


def _tokens(text):
    return [(mt.group(), mt.start() + 1) for mt in re.finditer(r"\S+", text)]


def parse_mm(text, path=None):
    lines = text.splitlines()
    if not lines or not _HEADER.match(lines[0].strip()):
        raise ParseError("expected header '%%MatrixMarket matrix array {real|complex} general'", path, 1)
    is_complex = _HEADER.match(lines[0].strip()).group(1).lower() == "complex"
    per_entry = 2 if is_complex else 1
    idx = 1
    while idx < len(lines) and (lines[idx].startswith("%") or not lines[idx].strip()):
        idx += 1
    if idx >= len(lines):
        raise ParseError("missing dimension line", path, idx + 1)
    dims = _tokens(lines[idx])
    if len(dims) != 2 or not all(re.fullmatch(r"\d+", t) for t, _ in dims) or min(int(t) for t, _ in dims) < 1:
        raise ParseError(f"malformed dimension line {lines[idx].strip()!r}; expected two positive integers",
                         path, idx + 1)
    rows, cols = (int(t) for t, _ in dims)
    values = []
    for lineno in range(idx + 2, len(lines) + 1):
        raw = lines[lineno - 1]
        if not raw.strip() or raw.startswith("%"):
            continue
        toks = _tokens(raw)
        if len(toks) != per_entry:
            raise ParseError(f"expected {per_entry} number(s) per entry, got {len(toks)}", path, lineno)
        parts = [_parse_float(t, path, lineno, col) for t, col in toks]
        values.append(complex(parts[0], parts[1]) if is_complex else complex(parts[0], 0.0))
        if len(values) > rows * cols:
            raise ParseError(f"more than {rows * cols} entries", path, lineno)
    if len(values) != rows * cols:
        raise ParseError(f"expected {rows * cols} entries, found {len(values)}", path, len(lines))
    return np.array(values, dtype=np.complex128).reshape((rows, cols), order="F")


# --------------------------------------------------------------------------
# CSV
# --------------------------------------------------------------------------

def parse_complex(literal):
    """Parse one complex literal; returns None when the grammar does not match.

    >>> parse_complex("1-2i")
    (1-2j)
    """
    s = re.sub(r"\s+", "", literal)
    if _REAL.fullmatch(s):
        return complex(float(s), 0.0)
    mt = _IMAG.fullmatch(s)
    if mt:
        mag = float(mt.group("mag")) if mt.group("mag") else 1.0
        return complex(0.0, -mag if mt.group("sign") == "-" else mag)
    mt = _CPLX.fullmatch(s)
    if mt:
        mag = float(mt.group("mag")) if mt.group("mag") else 1.0
        return complex(float(mt.group("re")), -mag if mt.group("sign") == "-" else mag)
    return None


def format_csv(m):
    m = as_matrix(m)
    out = []
    for row in m:
        cells = []
        for z in row:
            if z.imag == 0 and not np.signbit(z.imag):
                cells.append(_fmt(z.real))
            else:
                im = _fmt(z.imag)
                cells.append(f"{_fmt(z.real)}{'' if im.startswith('-') else '+'}{im}i")
        out.append(",".join(cells))
    return "\n".join(out) + "\n"


def parse_csv(text, path=None):
    rows = []
    width = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        cells = raw.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise ParseError(f"row has {len(cells)} entries, expected {width}", path, lineno)
        row = []
        col = 1
        for cell in cells:
            z = parse_complex(cell)
            if z is None:
                raise ParseError(f"invalid complex literal {cell.strip()!r}", path, lineno, col)
            row.append(z)
            col += len(cell) + 1
        rows.append(row)
    if not rows:
        raise ParseError("empty matrix", path, 1)
    return np.array(rows, dtype=np.complex128)


# --------------------------------------------------------------------------
# files
# --------------------------------------------------------------------------

def parse_matrix(text, fmt="mm", path=None):
    if fmt == "mm":
        return parse_mm(text, path)
    if fmt == "csv":
        return parse_csv(text, path)
    raise ValueError(f"unknown format {fmt!r}")


def format_matrix(m, fmt="mm"):
    if fmt == "mm":
        return format_mm(m)
    if fmt == "csv":
        return format_csv(m)
    raise ValueError(f"unknown format {fmt!r}")


def read_matrix(path, fmt=None):
    """Read a matrix file; the format defaults to a guess from the extension."""
    fmt = fmt or guess_format(path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return parse_matrix(text, fmt, str(path))


def write_matrix(m, path, fmt=None):
    fmt = fmt or guess_format(path)
    text = format_matrix(m, fmt)
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc
