"""Exact integer matrix arithmetic.

Everything here runs on arbitrary-precision Python integers: Smith
reduction, lattice indices and determinants mod p never round.  Matrices
are immutable row-major tuples, so values can be shared freely between
threads and used as dict keys.

The text format used by the CLI and the test fixtures writes rows
separated by ``;`` and entries by ``,`` (whitespace is ignored), e.g.
``1,1;2,1`` for a 2x2 matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import isqrt
from typing import Iterable, Mapping

from .errors import (
    DimensionMismatch,
    MatrixFormatError,
    NotPrime,
    RankDeficient,
)

__all__ = [
    "IntMatrix",
    "Factored",
    "smith_invariants",
    "lattice_index",
    "det_mod_p",
    "parse_matrix",
    "format_matrix",
    "is_prime",
    "factorize",
]


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division (desk-scale inputs)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer as {prime: exponent}."""
    if n < 1:
        raise ValueError(f"cannot factorize non-positive integer {n}")
    out: dict[int, int] = {}
    for p in (2, 3):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 5
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class IntMatrix:
    """Immutable integer matrix, entries stored row-major."""

    rows: int
    cols: int
    entries: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise DimensionMismatch(f"negative shape {self.rows}x{self.cols}")
        entries = tuple(int(v) for v in self.entries)
        if len(entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(entries)}"
            )
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> IntMatrix:
        rows = [list(r) for r in rows]
        n = len(rows)
        m = len(rows[0]) if rows else 0
        if any(len(r) != m for r in rows):
            raise DimensionMismatch("ragged rows")
        return cls(n, m, tuple(v for r in rows for v in r))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def diagonal(cls, values: Iterable[int]) -> IntMatrix:
        vals = list(values)
        n = len(vals)
        return cls(n, n, tuple(vals[i] if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def block_diagonal(cls, parts: Iterable[IntMatrix]) -> IntMatrix:
        parts = list(parts)
        if any(p.rows != p.cols for p in parts):
            raise DimensionMismatch("block-diagonal assembly needs square blocks")
        n = sum(p.rows for p in parts)
        grid = [[0] * n for _ in range(n)]
        off = 0
        for p in parts:
            for i in range(p.rows):
                for j in range(p.cols):
                    grid[off + i][off + j] = p[i, j]
            off += p.rows
        return cls.from_rows(grid)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"({i}, {j}) out of range for {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise DimensionMismatch("hstack needs equal row counts")
        entries = []
        for i in range(self.rows):
            entries.extend(self.row(i))
            entries.extend(other.row(i))
        return IntMatrix(self.rows, self.cols + other.cols, tuple(entries))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionMismatch(
                f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}"
            )
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other[k, j] for k in range(self.cols)))
        return IntMatrix(self.rows, other.cols, tuple(out))

    def map_entries(self, fn) -> IntMatrix:
        return IntMatrix(self.rows, self.cols, tuple(fn(v) for v in self.entries))

    def __str__(self) -> str:
        return format_matrix(self)


def parse_matrix(text: str) -> IntMatrix:
    """Parse the ``;``/``,`` matrix text format; empty text is the 0x0 matrix."""
    stripped = "".join(text.split())
    if not stripped:
        return IntMatrix(0, 0, ())
    rows = []
    for part in stripped.split(";"):
        cells = part.split(",")
        try:
            rows.append([int(c) for c in cells])
        except ValueError as exc:
            raise MatrixFormatError(f"bad matrix entry in {part!r}") from exc
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise MatrixFormatError("rows have differing lengths")
    return IntMatrix.from_rows(rows)


def format_matrix(m: IntMatrix) -> str:
    return ";".join(",".join(str(v) for v in m.row(i)) for i in range(m.rows))


class Factored:
    """A positive integer kept in factored form {prime: exponent}.

    The empty factorization is 1.  Values multiply by merging exponents,
    so spectrum entries like 2**40 never pass through fixed-width
    arithmetic until rendered.
    """

    __slots__ = ("_pairs",)

    def __init__(self, factorization: Mapping[int, int] | None = None):
        pairs = []
        for p, k in sorted((factorization or {}).items()):
            p = int(p)
            k = int(k)
            if k == 0:
                continue
            if not is_prime(p):
                raise NotPrime(f"{p} is not prime")
            if k < 0:
                raise ValueError(f"negative exponent {k} for prime {p}")
            pairs.append((p, k))
        self._pairs: tuple[tuple[int, int], ...] = tuple(pairs)

    @classmethod
    def one(cls) -> Factored:
        return cls()

    @classmethod
    def prime_power(cls, p: int, k: int) -> Factored:
        return cls({p: k})

    @classmethod
    def from_int(cls, n: int) -> Factored:
        return cls(factorize(n))

    @property
    def factorization(self) -> dict[int, int]:
        return dict(self._pairs)

    def nu(self, p: int) -> int:
        """p-adic valuation: the exponent of p, 0 when p does not occur."""
        for q, k in self._pairs:
            if q == p:
                return k
        return 0

    def to_int(self) -> int:
        n = 1
        for p, k in self._pairs:
            n *= p**k
        return n

    def __int__(self) -> int:
        return self.to_int()

    def __mul__(self, other: Factored) -> Factored:
        merged = self.factorization
        for p, k in other._pairs:
            merged[p] = merged.get(p, 0) + k
        return Factored(merged)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Factored) and self._pairs == other._pairs

    def __hash__(self) -> int:
        return hash(self._pairs)

    def __str__(self) -> str:
        if not self._pairs:
            return "1"
        return "*".join(f"{p}^{k}" if k > 1 else str(p) for p, k in self._pairs)

    def __repr__(self) -> str:
        return f"Factored({dict(self._pairs)!r})"


def smith_invariants(m: IntMatrix) -> list[int]:
    """Diagonal of the Smith normal form: non-negative, each dividing the
    next, zeros last; the list has min(rows, cols) entries.

    Pivots are chosen by smallest non-zero absolute value, ties broken by
    lowest row then lowest column index, so runs are reproducible.
    """
    rows, cols = m.rows, m.cols
    size = min(rows, cols)
    a = m.to_rows()
    invariants: list[int] = []

    for k in range(size):
        pivot = _find_pivot(a, k, rows, cols)
        if pivot is None:
            break
        pi, pj = pivot
        if pi != k:
            a[k], a[pi] = a[pi], a[k]
        if pj != k:
            for r in a:
                r[k], r[pj] = r[pj], r[k]
        while True:
            if a[k][k] < 0:
                a[k] = [-v for v in a[k]]
            # clear below, then to the right of the pivot
            dirty = False
            for i in range(k + 1, rows):
                if a[i][k]:
                    q = a[i][k] // a[k][k]
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], a[k])]
                    if a[i][k]:
                        dirty = True
            for j in range(k + 1, cols):
                if a[k][j]:
                    q = a[k][j] // a[k][k]
                    if q:
                        for i in range(rows):
                            a[i][j] -= q * a[i][k]
                    if a[k][j]:
                        dirty = True
            if dirty:
                pi, pj = _find_pivot(a, k, rows, cols)  # type: ignore[misc]
                if pi != k:
                    a[k], a[pi] = a[pi], a[k]
                if pj != k:
                    for r in a:
                        r[k], r[pj] = r[pj], r[k]
                continue
            # pivot must divide the remaining submatrix for the chain property
            offender = None
            for i in range(k + 1, rows):
                for j in range(k + 1, cols):
                    if a[i][j] % a[k][k]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            a[k] = [x + y for x, y in zip(a[k], a[offender])]
        invariants.append(a[k][k])

    invariants.extend(0 for _ in range(size - len(invariants)))
    return invariants


def _find_pivot(a: list[list[int]], k: int, rows: int, cols: int) -> tuple[int, int] | None:
    best = None
    best_abs = None
    for i in range(k, rows):
        row = a[i]
        for j in range(k, cols):
            v = row[j]
            if v and (best_abs is None or abs(v) < best_abs):
                best = (i, j)
                best_abs = abs(v)
    return best


def lattice_index(generators: IntMatrix) -> int:
    """Index in Z^n of the lattice spanned by the columns of an n x m
    matrix (m >= n); equals the product of the Smith invariant factors.

    Raises RankDeficient when the columns do not span a finite-index
    sublattice.
    """
    n = generators.rows
    if generators.cols < n:
        raise RankDeficient(
            f"{generators.cols} columns cannot span a rank-{n} lattice"
        )
    if n == 0:
        return 1
    invariants = smith_invariants(generators)
    index = 1
    for s in invariants[:n]:
        if s == 0:
            raise RankDeficient("columns span a lattice of deficient rank")
        index *= s
    return index


def det_mod_p(m: IntMatrix, p: int) -> int:
    """Determinant of a square matrix reduced into [0, p) for prime p."""
    if m.rows != m.cols:
        raise DimensionMismatch(f"determinant needs a square matrix, got {m.rows}x{m.cols}")
    n = m.rows
    a = [[v % p for v in m.row(i)] for i in range(n)]
    det = 1
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k]), None)
        if pivot_row is None:
            return 0
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            det = -det
        pivot = a[k][k]
        det = det * pivot % p
        inv = pow(pivot, -1, p)
        for i in range(k + 1, n):
            if a[i][k]:
                factor = a[i][k] * inv % p
                a[i] = [(x - factor * y) % p for x, y in zip(a[i], a[k])]
    return det % p
