"""Brute-force ground truth for spectra and fixed-point counts.

Endomorphisms are enumerated through their canonical parameterization:
entry (i, j) ranges over p^{max(0, e_i - e_j)} * t with
t in [0, p^{min(e_i, e_j)}), one representative per endomorphism, in
lexicographic order of the row-major parameter vector.  Fixed points
und twisted classes are counted at the element level, independently of
the lattice-index shortcut they validate.

Caps on enumeration sizes live in ``EnumBudget``; sweeps over whole
families of groups are driven by the ``iter_types`` helpers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .core import Factored, IntMatrix
from .endo import (
    EndoMatrix,
    PGroupType,
    apply,
    elements,
    is_automorphism,
    reidemeister_number,
)
from .errors import BudgetExceeded
from .spectra import Spectrum, product_number

__all__ = [
    "EnumBudget",
    "DEFAULT_BUDGET",
    "endomorphism_count",
    "enumerate_endomorphisms",
    "enumerate_automorphisms",
    "brute_fixed_points",
    "twisted_class_count",
    "oracle_spectrum",
    "iter_partitions",
    "iter_types",
]


@dataclass(frozen=True)
class EnumBudget:
    """Caps for exhaustive enumeration."""

    max_endos: int = 2**20
    max_group_order: int = 2**14

    def __post_init__(self) -> None:
        if self.max_endos < 1 or self.max_group_order < 1:
            raise ValueError("budget caps must be positive")


DEFAULT_BUDGET = EnumBudget()


def endomorphism_count(g: PGroupType) -> int:
    """Number of endomorphisms: product over (i, j) of p^{min(e_i, e_j)}."""
    total = 0
    for ei in g.e:
        for ej in g.e:
            total += min(ei, ej)
    return g.p**total


def _check_endo_budget(g: PGroupType, budget: EnumBudget) -> int:
    count = endomorphism_count(g)
    if count > budget.max_endos:
        raise BudgetExceeded(
            f"{count} endomorphisms of {g} exceed the cap {budget.max_endos}"
        )
    return count


def enumerate_endomorphisms(
    g: PGroupType, budget: EnumBudget = DEFAULT_BUDGET
) -> Iterator[EndoMatrix]:
    """Yield one canonical matrix per endomorphism, lexicographically."""
    _check_endo_budget(g, budget)
    n = g.n
    if n == 0:
        yield EndoMatrix(g, IntMatrix(0, 0, ()))
        return
    p, e = g.p, g.e
    strides = [p ** max(0, e[i] - e[j]) for i in range(n) for j in range(n)]
    counts = [p ** min(e[i], e[j]) for i in range(n) for j in range(n)]
    params = [0] * (n * n)
    while True:
        entries = tuple(s * t for s, t in zip(strides, params))
        yield EndoMatrix(g, IntMatrix(n, n, entries))
        k = n * n - 1
        while k >= 0:
            params[k] += 1
            if params[k] < counts[k]:
                break
            params[k] = 0
            k -= 1
        if k < 0:
            return


def enumerate_automorphisms(
    g: PGroupType, budget: EnumBudget = DEFAULT_BUDGET
) -> Iterator[EndoMatrix]:
    """The subsequence of enumerate_endomorphisms invertible mod p."""
    for em in enumerate_endomorphisms(g, budget):
        if is_automorphism(em):
            yield em


def _check_order_budget(g: PGroupType, budget: EnumBudget) -> int:
    order = g.order
    if order > budget.max_group_order:
        raise BudgetExceeded(
            f"group order {order} exceeds the cap {budget.max_group_order}"
        )
    return order


def brute_fixed_points(em: EndoMatrix, budget: EnumBudget = DEFAULT_BUDGET) -> int:
    """Count fixed points by applying the map to every group element."""
    _check_order_budget(em.group, budget)
    return sum(1 for x in elements(em.group) if apply(em, x) == x)


def twisted_class_count(em: EndoMatrix, budget: EnumBudget = DEFAULT_BUDGET) -> int:
    """Count twisted conjugacy classes as |P| / |im(Id - phi)|, with the
    image collected by applying x -> x - phi(x) to every element."""
    order = _check_order_budget(em.group, budget)
    g = em.group
    moduli = g.moduli
    image = set()
    for x in elements(g):
        fx = apply(em, x)
        image.add(
            tuple((a - b) % m for a, b, m in zip(x.coords, fx.coords, moduli))
        )
    if order % len(image):
        raise AssertionError("image size must divide the group order")
    return order // len(image)


def oracle_spectrum(
    g: PGroupType, use_pi: bool = False, budget: EnumBudget = DEFAULT_BUDGET
) -> Spectrum:
    """Exact set of twisted class counts (or product numbers) over every
    automorphism, computed by exhaustive enumeration."""
    from . import _sweep

    _check_endo_budget(g, budget)
    if _sweep.batchable(g):
        report = _sweep.sweep_cell(g, budget)
        exps = report.pi_exponents if use_pi else report.r_exponents
        return Spectrum(Factored.prime_power(g.p, v) for v in exps)
    return _oracle_spectrum_direct(g, use_pi, budget)


def _oracle_spectrum_direct(
    g: PGroupType, use_pi: bool, budget: EnumBudget
) -> Spectrum:
    values = set()
    for em in enumerate_automorphisms(g, budget):
        values.add(product_number(em) if use_pi else reidemeister_number(em))
    return Spectrum(values)


def iter_partitions(total: int, smallest: int = 1) -> Iterator[tuple[int, ...]]:
    """Nondecreasing tuples of integers >= smallest summing to total."""
    if total == 0:
        yield ()
        return
    for first in range(smallest, total + 1):
        for rest in iter_partitions(total - first, first):
            yield (first,) + rest


def iter_types(
    p: int,
    max_endos: int | None = None,
    max_order: int | None = None,
) -> Iterator[PGroupType]:
    """All types (including the trivial one) whose endomorphism count
    and/or group order stay within the given caps, in lexicographic
    order of the exponent vector."""
    if max_endos is None and max_order is None:
        raise ValueError("need at least one of max_endos / max_order")

    def fits(e: tuple[int, ...]) -> bool:
        g = PGroupType(p, e)
        if max_order is not None and g.order > max_order:
            return False
        if max_endos is not None and endomorphism_count(g) > max_endos:
            return False
        return True

    def grow(e: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        yield e
        nxt = e[-1] if e else 1
        while True:
            cand = e + (nxt,)
            if not fits(cand):
                return
            yield from grow(cand)
            nxt += 1

    yield from (PGroupType(p, e) for e in grow(()))
