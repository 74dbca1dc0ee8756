"""Text serialization for tensors and matrices.

.t3 format: first line is `t3 p1 p2 p3`; the next p1 lines each hold
p2*p3 space-separated floats, the k-th line being row k of the mode-0
matricization (column order (j, k) -> j*p3 + k). Floats are written with
17 significant digits so values round-trip exactly.

.mat format: first line is `mat rows cols`; the next `rows` lines each hold
`cols` floats, row-major.
"""

from __future__ import annotations

import numpy as np

from .validation import ContractViolationError, as_matrix, as_tensor3

__all__ = ["write_t3", "read_t3", "write_mat", "read_mat"]

_BYTE_LUT = {0.0: b"0", 1.0: b"1"}


def _write_rows(fh, rows: np.ndarray) -> None:
    # Fast path for 0/1 payloads (adjacency dumps): byte lookup instead of
    # printf formatting, ~100x faster on large binary tensors.
    if rows.size and np.all((rows == 0.0) | (rows == 1.0)):
        lut = np.array([ord("0"), ord("1")], dtype=np.uint8)
        ncol = rows.shape[1]
        buf = np.empty((ncol, 2), dtype=np.uint8)
        buf[:, 1] = ord(" ")
        for row in rows:
            buf[:, 0] = lut[row.astype(np.intp)]
            fh.write(buf.tobytes()[:-1].decode("ascii"))
            fh.write("\n")
        return
    for row in rows:
        fh.write(" ".join("%.17g" % v for v in row))
        fh.write("\n")


def _read_header(fh, tag: str, n_fields: int, path) -> list[int]:
    line = fh.readline().split()
    if len(line) != n_fields + 1 or line[0] != tag:
        raise ContractViolationError(f"{path}: malformed {tag} header: {line}")
    try:
        dims = [int(v) for v in line[1:]]
    except ValueError as exc:
        raise ContractViolationError(f"{path}: non-integer header field") from exc
    if any(d < 1 for d in dims):
        raise ContractViolationError(f"{path}: non-positive dimension in header")
    return dims


def write_t3(path, X) -> None:
    X = as_tensor3(X, "X")
    p1, p2, p3 = X.shape
    with open(path, "w") as fh:
        fh.write(f"t3 {p1} {p2} {p3}\n")
        _write_rows(fh, X.reshape(p1, p2 * p3))


def read_t3(path) -> np.ndarray:
    with open(path) as fh:
        p1, p2, p3 = _read_header(fh, "t3", 3, path)
        data = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    if data.shape != (p1, p2 * p3):
        raise ContractViolationError(
            f"{path}: payload shape {data.shape} does not match header "
            f"({p1}, {p2}*{p3})"
        )
    return np.ascontiguousarray(data.reshape(p1, p2, p3))


def write_mat(path, A) -> None:
    A = as_matrix(A, "A")
    with open(path, "w") as fh:
        fh.write(f"mat {A.shape[0]} {A.shape[1]}\n")
        _write_rows(fh, A)


def read_mat(path) -> np.ndarray:
    with open(path) as fh:
        rows, cols = _read_header(fh, "mat", 2, path)
        data = np.loadtxt(fh, dtype=np.float64, ndmin=2)
    if data.shape != (rows, cols):
        raise ContractViolationError(
            f"{path}: payload shape {data.shape} does not match header "
            f"({rows}, {cols})"
        )
    return np.ascontiguousarray(data)
