"""Vectorized exhaustive sweeps over canonical endomorphism matrices.

The verification suites walk every canonical endomorphism of a cell
(p, e).  Doing that one EndoMatrix at a time is far too slow for the
larger cells (about 10^6 endomorphisms each), so this module decodes
parameter vectors in numpy chunks and evaluates, per chunk:

* invertibility mod p (batched Leibniz determinants),
* fixed-point counts of every unit multiple, via the identity
  index = gcd of the maximal minors of [M - I | diag(p^{e_i})],
  which is the product of the Smith invariant factors,
* validity, invertibility and mod-p column structure of the matrices
  conjugated by diag(p^{d_i}) for the depth vector d(e).

All arithmetic stays in int64; ``batchable`` guards the entry bounds so
no intermediate can overflow.  A deterministic sample of endomorphisms
from every cell is re-checked through the plain per-object APIs
(fixed_point_count, product_number, restrict, column_structure_check,
brute_fixed_points, twisted_class_count), so the batched results stay
anchored to the reference implementations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .core import IntMatrix
from .decomposition import abc_decompose, column_structure_check, restrict
from .endo import EndoMatrix, PGroupType, fixed_point_count, is_automorphism
from .errors import BudgetExceeded
from .spectra import product_number

_MAX_N = 5  # Leibniz determinants: n! terms
_INT64_SAFE = 2**62


def batchable(g: PGroupType) -> bool:
    """True when every intermediate of the batched pipeline fits int64."""
    n = g.n
    if n == 0:
        return True
    if n > _MAX_N:
        return False
    largest = g.p ** g.e[-1]
    # minors of [M - I | D]: up to n! products of n entries < p * largest
    return math.factorial(n) * (g.p * largest) ** n < _INT64_SAFE


@dataclass(frozen=True)
class CellReport:
    """Aggregates of one full sweep over the automorphisms of a cell."""

    group: PGroupType
    endo_count: int
    auto_count: int
    r_exponents: frozenset[int]
    pi_exponents: frozenset[int]
    pi_min: int
    pi_max: int
    structure_violations: int
    samples_checked: int
    samples_ok: bool


@dataclass(frozen=True)
class TripleReport:
    """Elementwise agreement of the three fixed-point counting routes
    (brute iteration, image counting, lattice index) over every
    canonical endomorphism of a cell."""

    group: PGroupType
    endo_count: int
    mismatches: int
    samples_checked: int
    samples_ok: bool


@lru_cache(maxsize=None)
def _perm_data(n: int) -> tuple[np.ndarray, np.ndarray]:
    perms = list(permutations(range(n)))
    signs = []
    for perm in perms:
        inv = sum(
            1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j]
        )
        signs.append(-1 if inv % 2 else 1)
    return np.array(perms, dtype=np.int64), np.array(signs, dtype=np.int64)


def _batch_det(mats: np.ndarray) -> np.ndarray:
    """Exact determinants of a (B, n, n) int64 stack (caller bounds entries)."""
    n = mats.shape[1]
    if n == 0:
        return np.ones(mats.shape[0], dtype=np.int64)
    perms, signs = _perm_data(n)
    rows = np.arange(n, dtype=np.int64)[None, :]
    gathered = mats[:, rows, perms]  # (B, n!, n)
    return (gathered.prod(axis=2) * signs).sum(axis=1)


@lru_cache(maxsize=None)
def _column_subsets(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(combinations(range(2 * n), n))


def _decode(indices: np.ndarray, strides: np.ndarray, counts: np.ndarray, n: int) -> np.ndarray:
    """Map endomorphism indices to (B, n, n) canonical matrices."""
    n2 = len(counts)
    weights = np.ones(n2, dtype=np.int64)
    for k in range(n2 - 2, -1, -1):
        weights[k] = weights[k + 1] * counts[k + 1]
    params = (indices[:, None] // weights[None, :]) % counts[None, :]
    return (params * strides[None, :]).reshape(-1, n, n)


def _valuations(values: np.ndarray, p: int) -> np.ndarray:
    vals = values.copy()
    exps = np.zeros_like(vals)
    while True:
        mask = vals % p == 0
        if not mask.any():
            break
        vals[mask] //= p
        exps[mask] += 1
    if not (vals == 1).all():
        raise AssertionError("lattice index is not a power of p")
    return exps


def _fix_exponents(mats: np.ndarray, g: PGroupType, multiplier: int) -> np.ndarray:
    """Exponent of |Fix(mul_multiplier . phi)| for a stack of matrices."""
    n = g.n
    batch = mats.shape[0]
    moduli = np.array(g.moduli, dtype=np.int64)
    work = (multiplier * mats) % moduli[None, :, None]
    work = work - np.eye(n, dtype=np.int64)[None]
    diag = np.diag(moduli)
    block = np.concatenate(
        [work, np.broadcast_to(diag, (batch, n, n))], axis=2
    )
    acc = np.zeros(batch, dtype=np.int64)
    for cols in _column_subsets(n):
        det = _batch_det(block[:, :, cols])
        np.gcd(acc, np.abs(det), out=acc)
    return _valuations(acc, g.p)


def _structure_ok(mats: np.ndarray, g: PGroupType) -> np.ndarray:
    """Per matrix: conjugate by diag(p^{d_i}), then check that the result
    is a valid invertible matrix on the subgroup type e - d and that every
    b/c-block start column is zero mod p off the diagonal and a unit on it."""
    n = g.n
    p = g.p
    dec = abc_decompose(g)
    depths = np.array(dec.d, dtype=np.int64)
    p_d = np.array([p**int(v) for v in dec.d], dtype=np.int64)
    sub_e = np.array(g.e, dtype=np.int64) - depths
    conjugated = mats * p_d[None, None, :]
    conjugated //= p_d[None, :, None]

    ok = np.ones(mats.shape[0], dtype=bool)
    for i in range(n):
        for j in range(i):
            gap = int(sub_e[i] - sub_e[j])
            if gap > 0:
                ok &= conjugated[:, i, j] % p**gap == 0
    ok &= _batch_det(conjugated % p) % p != 0
    for blk in dec.blocks:
        if blk.kind == "a":
            continue
        j = blk.start
        col = conjugated[:, :, j] % p
        diag_entry = col[:, j].copy()
        col[:, j] = 0
        ok &= (diag_entry != 0) & ~col.any(axis=1)
    return ok


def _sample_indices(total: int, quota: int) -> np.ndarray:
    if total <= quota:
        return np.arange(total, dtype=np.int64)
    return np.unique(np.linspace(0, total - 1, quota).astype(np.int64))


def _to_endo(g: PGroupType, mat: np.ndarray) -> EndoMatrix:
    n = g.n
    entries = tuple(int(v) for v in mat.reshape(-1))
    return EndoMatrix(g, IntMatrix(n, n, entries))


def _cell_arrays(g: PGroupType) -> tuple[np.ndarray, np.ndarray]:
    n, p, e = g.n, g.p, g.e
    strides = np.array(
        [p ** max(0, e[i] - e[j]) for i in range(n) for j in range(n)],
        dtype=np.int64,
    )
    counts = np.array(
        [p ** min(e[i], e[j]) for i in range(n) for j in range(n)],
        dtype=np.int64,
    )
    return strides, counts


def _trivial_cell_report(g: PGroupType) -> CellReport:
    return CellReport(
        group=g,
        endo_count=1,
        auto_count=1,
        r_exponents=frozenset({0}),
        pi_exponents=frozenset({0}),
        pi_min=0,
        pi_max=0,
        structure_violations=0,
        samples_checked=1,
        samples_ok=True,
    )


@lru_cache(maxsize=256)
def sweep_cell(
    g: PGroupType,
    budget,
    check_structure: bool = True,
    sample_quota: int = 48,
) -> CellReport:
    """Sweep every automorphism of the cell; see the module docstring."""
    from .oracle import endomorphism_count

    total = endomorphism_count(g)
    if total > budget.max_endos:
        raise BudgetExceeded(
            f"{total} endomorphisms of {g} exceed the cap {budget.max_endos}"
        )
    if not batchable(g):
        raise ValueError(f"cell {g} is not batchable; use the direct path")
    if g.n == 0:
        return _trivial_cell_report(g)

    n, p = g.n, g.p
    strides, counts = _cell_arrays(g)
    sample_at = set(int(v) for v in _sample_indices(total, sample_quota))

    auto_count = 0
    r_exps: set[int] = set()
    pi_exps: set[int] = set()
    pi_min: int | None = None
    pi_max: int | None = None
    violations = 0
    samples_checked = 0
    samples_ok = True
    dec = abc_decompose(g)

    chunk = max(1, min(1 << 13, (1 << 22) // max(1, math.factorial(n) * n)))
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        mats = _decode(idx, strides, counts, n)
        amask = _batch_det(mats % p) % p != 0
        autos = mats[amask]
        auto_count += int(amask.sum())

        r_exp = pi_exp = struct_ok = None
        if autos.shape[0]:
            r_exp = _fix_exponents(autos, g, 1)
            pi_exp = r_exp.copy()
            for mult in range(2, p):
                pi_exp += _fix_exponents(autos, g, mult)
            r_exps.update(int(v) for v in np.unique(r_exp))
            pi_exps.update(int(v) for v in np.unique(pi_exp))
            lo, hi = int(pi_exp.min()), int(pi_exp.max())
            pi_min = lo if pi_min is None else min(pi_min, lo)
            pi_max = hi if pi_max is None else max(pi_max, hi)
            if check_structure:
                struct_ok = _structure_ok(autos, g)
                violations += int((~struct_ok).sum())

        for gidx in sorted(sample_at):
            if not (start <= gidx < stop):
                continue
            pos = gidx - start
            em = _to_endo(g, mats[pos])
            samples_checked += 1
            if bool(amask[pos]) != is_automorphism(em):
                samples_ok = False
                continue
            if not amask[pos]:
                continue
            row = int(amask[:pos].sum())
            if fixed_point_count(em).nu(p) != int(r_exp[row]):
                samples_ok = False
            if product_number(em).nu(p) != int(pi_exp[row]):
                samples_ok = False
            if check_structure:
                reference = _reference_structure_ok(em, dec)
                if reference != bool(struct_ok[row]):
                    samples_ok = False

    if pi_min is None or pi_max is None:
        raise AssertionError("every cell contains at least the identity")
    return CellReport(
        group=g,
        endo_count=total,
        auto_count=auto_count,
        r_exponents=frozenset(r_exps),
        pi_exponents=frozenset(pi_exps),
        pi_min=pi_min,
        pi_max=pi_max,
        structure_violations=violations,
        samples_checked=samples_checked,
        samples_ok=samples_ok,
    )


def _reference_structure_ok(em: EndoMatrix, dec) -> bool:
    restricted = restrict(em, dec.d)
    if not is_automorphism(restricted):
        return False
    return all(r.ok for r in column_structure_check(em))


@lru_cache(maxsize=64)
def triple_check(g: PGroupType, budget, sample_quota: int = 24) -> TripleReport:
    """Compare the three fixed-point counting routes over every canonical
    endomorphism of the cell at the element level."""
    from .oracle import brute_fixed_points, endomorphism_count, twisted_class_count

    total = endomorphism_count(g)
    if total > budget.max_endos:
        raise BudgetExceeded(
            f"{total} endomorphisms of {g} exceed the cap {budget.max_endos}"
        )
    order = g.order
    if order > budget.max_group_order:
        raise BudgetExceeded(
            f"group order {order} exceeds the cap {budget.max_group_order}"
        )
    if not batchable(g):
        raise ValueError(f"cell {g} is not batchable; use the direct path")
    if g.n == 0:
        return TripleReport(g, 1, 0, 1, True)

    n, p = g.n, g.p
    strides, counts = _cell_arrays(g)
    moduli = np.array(g.moduli, dtype=np.int64)
    # dot products are bounded by n * p^{2 e_n}; pick representations in
    # which every intermediate stays exact
    largest = p ** g.e[-1]
    prod_bound = n * largest * largest
    if prod_bound < 2**24:
        mat_dtype: type | None = np.float32
    elif prod_bound < 2**53:
        mat_dtype = np.float64
    else:
        mat_dtype = None  # exact but slow int64 matmul
    int_dtype = np.int32 if prod_bound < 2**31 else np.int64

    # element table: column k holds the coordinates of element k
    weights = np.ones(n, dtype=np.int64)
    for k in range(n - 2, -1, -1):
        weights[k] = weights[k + 1] * moduli[k + 1]
    cols = np.arange(order, dtype=np.int64)
    table = (cols[None, :] // weights[:, None]) % moduli[:, None]
    table_m = table.astype(mat_dtype) if mat_dtype is not None else table
    table_i = table.astype(int_dtype)
    moduli_i = moduli.astype(int_dtype)
    weights_i = weights.astype(int_dtype)
    low_bits = (moduli - 1).astype(int_dtype)

    sample_at = set(int(v) for v in _sample_indices(total, sample_quota))
    mismatches = 0
    samples_checked = 0
    samples_ok = True

    chunk = max(1, min(1 << 13, (1 << 23) // max(1, order * n)))
    for start in range(0, total, chunk):
        stop = min(start + chunk, total)
        idx = np.arange(start, stop, dtype=np.int64)
        mats = _decode(idx, strides, counts, n)

        # difference element x - phi(x), encoded in mixed radix; an
        # element is fixed exactly when its code is zero
        if mat_dtype is not None:
            diff = np.matmul(mats.astype(mat_dtype), table_m).astype(int_dtype)
        else:
            diff = np.matmul(mats, table)
        np.subtract(table_i[None], diff, out=diff)
        if p == 2:
            # moduli are powers of two: low bits give the residue
            diff &= low_bits[None, :, None]
        else:
            np.mod(diff, moduli_i[None, :, None], out=diff)
        codes = np.einsum("bnq,n->bq", diff, weights_i)
        brute = (codes == 0).sum(axis=1)

        span = codes.shape[0] * order
        offset = np.arange(codes.shape[0], dtype=np.int64)[:, None] * order
        seen = np.zeros(span, dtype=bool)
        seen[(codes + offset).reshape(-1)] = True
        image_sizes = seen.reshape(codes.shape[0], order).sum(axis=1)
        if (order % image_sizes).any():
            raise AssertionError("image size must divide the group order")
        twisted = order // image_sizes

        lattice = p ** _fix_exponents(mats, g, 1)

        mismatches += int((brute != twisted).sum())
        mismatches += int((brute != lattice).sum())

        for gidx in sorted(sample_at):
            if not (start <= gidx < stop):
                continue
            pos = gidx - start
            em = _to_endo(g, mats[pos])
            samples_checked += 1
            reference = brute_fixed_points(em, budget)
            if reference != int(brute[pos]):
                samples_ok = False
            if twisted_class_count(em, budget) != int(twisted[pos]):
                samples_ok = False
            if fixed_point_count(em).to_int() != int(lattice[pos]):
                samples_ok = False

    return TripleReport(g, total, mismatches, samples_checked, samples_ok)
