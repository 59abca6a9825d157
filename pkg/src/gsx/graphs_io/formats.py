"""Text formats for graphs, signals, decompositions and matrices.

Floats are written with ``repr`` (shortest string that round-trips a double),
so every text format here is lossless. Complex numbers in JSON are
``[re, im]`` pairs; in CSV they occupy two adjacent columns.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import ParseError
from ..gft import FOURIER, VERTEX, GraphSignal
from ..spectral_core import EigenDecomposition, Graph

MM_BANNER = "%%MatrixMarket matrix coordinate real general"


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_float(tok: str, line: int, col: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"not a number: {tok!r}", line, col) from None
    if not np.isfinite(v):
        raise ParseError(f"non-finite value {tok!r}", line, col)
    return v


def _parse_int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"not an integer: {tok!r}", line, col) from None


# -- Matrix Market -----------------------------------------------------------

def write_matrix_market(path, g: Graph) -> None:
    a = g.adjacency
    rows, cols = np.nonzero(a)
    lines = [MM_BANNER, f"{a.shape[0]} {a.shape[1]} {rows.size}"]
    lines += [f"{i + 1} {j + 1} {_fmt(a[i, j])}" for i, j in zip(rows, cols)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_matrix_market(path) -> Graph:
    """Read a ``coordinate real`` Matrix Market file (general or symmetric)."""
    text = Path(path).read_text(encoding="utf-8").splitlines()
    if not text:
        raise ParseError("empty file", 1, 1)
    banner = text[0].split()
    if len(banner) != 5 or banner[0].lower() != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket banner", 1, 1)
    obj, fmt, field, sym = (t.lower() for t in banner[1:])
    if obj != "matrix" or fmt != "coordinate":
        raise ParseError(f"unsupported layout {obj} {fmt}", 1, 2)
    if field not in ("real", "integer"):
        raise ParseError(f"unsupported field {field}", 1, 4)
    if sym not in ("general", "symmetric"):
        raise ParseError(f"unsupported symmetry {sym}", 1, 5)

    size = None
    entries = 0
    a = None
    for lineno, raw in enumerate(text[1:], start=2):
        stripped = raw.strip()
        if not stripped or stripped.startswith("%"):
            continue
        toks = stripped.split()
        if size is None:
            if len(toks) != 3:
                raise ParseError("size line needs 'rows cols nnz'", lineno, 1)
            m, n, nnz = (_parse_int(t, lineno, c) for c, t in enumerate(toks, 1))
            if m != n or m < 1:
                raise ParseError(f"adjacency must be square, got {m}x{n}", lineno, 1)
            size = (n, nnz)
            a = np.zeros((n, n))
            continue
        if len(toks) != 3:
            raise ParseError("entry line needs 'row col value'", lineno, len(toks) + 1)
        i = _parse_int(toks[0], lineno, 1)
        j = _parse_int(toks[1], lineno, 2)
        v = _parse_float(toks[2], lineno, 3)
        n = size[0]
        if not 1 <= i <= n:
            raise ParseError(f"row index {i} out of range", lineno, 1)
        if not 1 <= j <= n:
            raise ParseError(f"column index {j} out of range", lineno, 2)
        a[i - 1, j - 1] = v
        if sym == "symmetric":
            a[j - 1, i - 1] = v
        entries += 1
    if size is None:
        raise ParseError("missing size line", len(text) + 1, 1)
    if entries != size[1]:
        raise ParseError(f"expected {size[1]} entries, found {entries}", len(text), 1)
    return Graph(a)


# -- dense CSV ---------------------------------------------------------------

def write_dense_csv(path, g: Graph, header: bool = True) -> None:
    a = g.adjacency
    lines = [str(a.shape[0])] if header else []
    lines += [",".join(_fmt(v) for v in row) for row in a]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_dense_csv(path) -> Graph:
    """Dense adjacency, one row per line; an optional first line holds just ``n``."""
    lines = [(no, ln.strip()) for no, ln in
             enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1)]
    lines = [(no, ln) for no, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty file", 1, 1)
    declared = None
    first_no, first = lines[0]
    if "," not in first:
        declared = _parse_int(first, first_no, 1)
        lines = lines[1:]
    rows = []
    for no, ln in lines:
        rows.append([_parse_float(t.strip(), no, c) for c, t in enumerate(ln.split(","), 1)])
    n = len(rows)
    if n == 0:
        raise ParseError("no matrix rows", first_no + 1, 1)
    if declared is not None and declared != n:
        raise ParseError(f"header says n={declared} but found {n} rows", first_no, 1)
    for (no, _), row in zip(lines, rows):
        if len(row) != n:
            raise ParseError(f"row has {len(row)} entries, expected {n}", no, min(len(row), n) + 1)
    return Graph(np.asarray(rows))


def read_graph(path) -> Graph:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        head = fh.readline()
    if head.lower().startswith("%%matrixmarket"):
        return read_matrix_market(path)
    return read_dense_csv(path)


# -- signals -----------------------------------------------------------------

def write_signal_csv(path, x: GraphSignal) -> None:
    lines = [f"# domain={x.domain}", "re,im"]
    lines += [f"{_fmt(v.real)},{_fmt(v.imag)}" for v in x.values]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_signal_csv(path) -> GraphSignal:
    domain = VERTEX
    values = []
    for no, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        ln = raw.strip()
        if not ln:
            continue
        if ln.startswith("#"):
            body = ln[1:].strip()
            if body.startswith("domain="):
                domain = body.split("=", 1)[1].strip()
                if domain not in (VERTEX, FOURIER):
                    raise ParseError(f"unknown domain {domain!r}", no, 2)
            continue
        toks = [t.strip() for t in ln.split(",")]
        if toks == ["re", "im"]:
            continue
        if len(toks) not in (1, 2):
            raise ParseError("signal rows need 're,im' (or a single real column)", no, 3)
        re = _parse_float(toks[0], no, 1)
        im = _parse_float(toks[1], no, 2) if len(toks) == 2 else 0.0
        values.append(complex(re, im))
    if not values:
        raise ParseError("no signal values", 1, 1)
    return GraphSignal(np.asarray(values), domain)


def write_coordinates_csv(path, coords: np.ndarray) -> None:
    lines = ["x,y"] + [f"{_fmt(x)},{_fmt(y)}" for x, y in np.asarray(coords)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


# -- complex matrices and JSON ----------------------------------------------

def complex_to_json(z) -> list:
    z = np.asarray(z, dtype=complex)
    if z.ndim == 0:
        return [float(z.real), float(z.imag)]
    return [complex_to_json(v) for v in z]


def complex_from_json(obj) -> np.ndarray:
    arr = np.asarray(obj, dtype=float)
    return arr[..., 0] + 1j * arr[..., 1]


def write_complex_matrix_csv(path, m: np.ndarray) -> None:
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    header = ",".join(f"re_{j},im_{j}" for j in range(m.shape[1]))
    lines = [header] + [
        ",".join(f"{_fmt(v.real)},{_fmt(v.imag)}" for v in row) for row in m
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_complex_matrix_csv(path) -> np.ndarray:
    rows = []
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for no, ln in enumerate(lines[1:], 2):
        if not ln.strip():
            continue
        toks = ln.split(",")
        if len(toks) % 2:
            raise ParseError("odd number of columns in complex matrix row", no, len(toks))
        vals = [_parse_float(t, no, c) for c, t in enumerate(toks, 1)]
        rows.append([complex(vals[i], vals[i + 1]) for i in range(0, len(vals), 2)])
    return np.asarray(rows)


def decomposition_to_json(d: EigenDecomposition) -> dict:
    return {
        "n": d.n,
        "eigenvalues": complex_to_json(d.eigenvalues),
        "v": complex_to_json(d.v),
        "v_inv": complex_to_json(d.v_inv),
        "ordering": [int(i) for i in d.ordering],
        "unitary_v": d.unitary_v,
        "adjacency": [[float(v) for v in row] for row in d.adjacency],
    }


def decomposition_from_json(obj) -> EigenDecomposition:
    def ro(a):
        a = np.array(a)
        a.setflags(write=False)
        return a

    return EigenDecomposition(
        v=ro(complex_from_json(obj["v"])),
        eigenvalues=ro(complex_from_json(obj["eigenvalues"])),
        v_inv=ro(complex_from_json(obj["v_inv"])),
        ordering=ro(np.asarray(obj["ordering"], dtype=int)),
        unitary_v=bool(obj["unitary_v"]),
        adjacency=ro(np.asarray(obj["adjacency"], dtype=float)),
    )


def write_json(path, obj) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def write_correlation(path, corr) -> None:
    """CSV of the matrix plus a ``.json`` sidecar with its flags."""
    path = Path(path)
    write_complex_matrix_csv(path, corr.r)
    write_json(path.with_suffix(".json"), corr.flags())
