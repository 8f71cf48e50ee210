"""Edge-cost instances for the optimising crossover and benchmarks.

An instance is an n x n matrix of non-negative finite costs with a zero
diagonal; it need not be symmetric.  Instance files use the format::

    n
    COORDS          (or MATRIX)
    x y             (n lines; or n rows of n costs)

City ids are 1-based and implied by row order.  Lines starting with '#'
are ignored.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Permutation, RngLike, make_rng
from .errors import ParseError, SizeMismatchError


@dataclass(frozen=True)
class TspInstance:
    matrix: np.ndarray
    coords: np.ndarray | None = None

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValueError("cost matrix must be square")
        n = matrix.shape[0]
        if n < 2:
            raise ValueError("instance needs at least 2 cities")
        if not np.all(np.isfinite(matrix)):
            raise ValueError("costs must be finite")
        if np.any(matrix < 0):
            raise ValueError("costs must be non-negative")
        if np.any(np.diagonal(matrix) != 0):
            raise ValueError("the diagonal must be zero")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        if self.coords is not None:
            coords = np.array(self.coords, dtype=float)
            if coords.shape != (n, 2):
                raise ValueError("coords must be n x 2")
            coords.setflags(write=False)
            object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def delta(self, i: int, j: int) -> float:
        return float(self.matrix[i, j])


def euclidean_matrix(coords: np.ndarray) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def random_euclidean_instance(
    n: int, width: float = 1.0, height: float = 1.0, rng: RngLike = None
) -> TspInstance:
    """Cities uniform in a width x height rectangle, Euclidean costs."""
    if n < 2:
        raise ValueError("instance needs at least 2 cities")
    if width <= 0 or height <= 0:
        raise ValueError("rectangle dimensions must be positive")
    gen, _ = make_rng(rng)
    coords = np.column_stack(
        [gen.uniform(0.0, width, size=n), gen.uniform(0.0, height, size=n)]
    )
    return TspInstance(euclidean_matrix(coords), coords)


def tour_cost(p: Permutation, inst: TspInstance) -> float:
    """Total edge cost of a tour, including the wraparound edge."""
    if p.n != inst.n:
        raise SizeMismatchError(f"tour size {p.n} vs instance size {inst.n}")
    path = np.fromiter(p.elems, dtype=np.intp, count=p.n)
    return float(inst.matrix[path, np.roll(path, -1)].sum())


def _data_lines(text: str):
    for line_no, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            yield line_no, stripped


def parse_instance(text: str, source: str = "<instance>") -> TspInstance:
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError(source, 1, "empty instance file")
    line_no, head = lines[0]
    try:
        n = int(head)
    except ValueError:
        raise ParseError(source, line_no, f"expected city count, got {head!r}") from None
    if n < 2:
        raise ParseError(source, line_no, "instance needs at least 2 cities")
    if len(lines) < 2:
        raise ParseError(source, line_no, "missing COORDS or MATRIX section")
    line_no, kind = lines[1]
    body = lines[2:]
    if len(body) != n:
        where = body[-1][0] if body else line_no
        _raise_count(source, where, n, len(body))
    if kind.upper() == "COORDS":
        coords = []
        for row_no, row in body:
            parts = row.split()
            if len(parts) != 2:
                raise ParseError(source, row_no, f"expected 'x y', got {row!r}")
            try:
                coords.append((float(parts[0]), float(parts[1])))
            except ValueError:
                raise ParseError(source, row_no, f"bad coordinate in {row!r}") from None
        pts = np.array(coords, dtype=float)
        return TspInstance(euclidean_matrix(pts), pts)
    if kind.upper() == "MATRIX":
        rows = []
        for row_no, row in body:
            parts = row.split()
            if len(parts) != n:
                raise ParseError(source, row_no, f"expected {n} costs, got {len(parts)}")
            try:
                rows.append([float(v) for v in parts])
            except ValueError:
                raise ParseError(source, row_no, f"bad cost in {row!r}") from None
        return TspInstance(np.array(rows, dtype=float))
    raise ParseError(source, line_no, f"expected COORDS or MATRIX, got {kind!r}")


def _raise_count(source: str, line_no: int, expected: int, got: int):
    raise ParseError(source, line_no, f"expected {expected} data lines, got {got}")


def load_instance(path) -> TspInstance:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read(), source=str(path))


def write_instance(inst: TspInstance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{inst.n}\n")
        if inst.coords is not None:
            fh.write("COORDS\n")
            for x, y in inst.coords:
                fh.write(f"{float(x)!r} {float(y)!r}\n")
        else:
            fh.write("MATRIX\n")
            for row in inst.matrix:
                fh.write(" ".join(repr(float(v)) for v in row) + "\n")
