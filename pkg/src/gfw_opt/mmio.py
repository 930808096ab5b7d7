"""Matrix Market coordinate-format reader for symmetric (graph) matrices."""

from __future__ import annotations

import warnings

import numpy as np
import scipy.sparse as sp

from .errors import IndexOutOfRange, ParseError

SPARSE_DENSITY = 0.05

_FIELDS = {"real", "integer", "pattern", "double"}
_SYMMETRIES = {"general", "symmetric"}


def load_matrix_market(path, dense=None):
    """Read a square coordinate Matrix Market file into a symmetric matrix.

    Duplicate entries are summed. ``general`` matrices are symmetrized as
    ``(M + M')/2`` (with a warning if that changed anything). With
    ``dense=None`` the result is a CSR matrix when at most 5% of the entries
    are nonzero and a dense array otherwise.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ParseError("empty file", line=1)
    header = lines[0].split()
    if len(header) < 5 or header[0].lower() != "%%matrixmarket":
        raise ParseError("missing %%MatrixMarket banner", line=1)
    obj, fmt, field, symmetry = (h.lower() for h in header[1:5])
    if obj != "matrix" or fmt != "coordinate":
        raise ParseError(f"unsupported format '{obj} {fmt}', expected 'matrix coordinate'", line=1)
    if field not in _FIELDS:
        raise ParseError(f"unsupported field '{field}'", line=1)
    if symmetry not in _SYMMETRIES:
        raise ParseError(f"unsupported symmetry '{symmetry}'", line=1)

    lineno = 1
    size = None
    rows, cols, vals = [], [], []
    for raw in lines[1:]:
        lineno += 1
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        parts = text.split()
        if size is None:
            try:
                size = tuple(int(p) for p in parts)
            except ValueError:
                raise ParseError(f"bad size line '{text}'", line=lineno) from None
            if len(size) != 3 or min(size) < 0:
                raise ParseError(f"bad size line '{text}'", line=lineno)
            if size[0] != size[1]:
                raise ParseError(f"matrix must be square, got {size[0]}x{size[1]}", line=lineno)
            continue
        want = 2 if field == "pattern" else 3
        if len(parts) != want:
            raise ParseError(f"expected {want} fields, got {len(parts)}", line=lineno)
        try:
            i, j = int(parts[0]), int(parts[1])
            v = 1.0 if field == "pattern" else float(parts[2])
        except ValueError:
            raise ParseError(f"cannot parse entry '{text}'", line=lineno) from None
        if not (1 <= i <= size[0] and 1 <= j <= size[1]):
            raise IndexOutOfRange(f"entry ({i}, {j}) outside {size[0]}x{size[1]}", line=lineno)
        rows.append(i - 1)
        cols.append(j - 1)
        vals.append(v)
    if size is None:
        raise ParseError("missing size line", line=lineno)
    if len(vals) != size[2]:
        raise ParseError(f"declared {size[2]} entries, found {len(vals)}", line=lineno)

    n = size[0]
    r = np.asarray(rows, dtype=np.int64)
    c = np.asarray(cols, dtype=np.int64)
    v = np.asarray(vals, dtype=float)
    M = sp.coo_matrix((v, (r, c)), shape=(n, n)).tocsr()
    M.sum_duplicates()
    if symmetry == "symmetric":
        off = r != c
        if np.any(r[off] < c[off]) and np.any(r[off] > c[off]):
            raise ParseError("symmetric file stores both triangles")
        upper = sp.coo_matrix((v[off], (c[off], r[off])), shape=(n, n)).tocsr()
        A = (M + upper).tocsr()
    else:
        A = ((M + M.T) * 0.5).tocsr()
        if (A != M).nnz:
            warnings.warn("general matrix symmetrized as (M + M')/2", stacklevel=2)
    A.sum_duplicates()
    A.eliminate_zeros()
    if dense is None:
        dense = n == 0 or A.nnz > SPARSE_DENSITY * n * n
    return A.toarray() if dense else A
