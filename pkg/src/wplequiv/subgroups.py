"""Finite subgroups of L(p) of cyclic and Klein shape."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

from .string_group import GroupElement, GroupError, WeightSeq, delta, format_element, format_linear


class InfiniteSubgroup(GroupError):
    pass


TRIVIAL = "trivial"
CYCLIC = "cyclic"
KLEIN = "klein"
OTHER = "other"


@dataclass(frozen=True)
class FiniteSubgroup:
    parent: WeightSeq
    kind: str
    indices: tuple[int, ...]  # 1-based; (i, j) for cyclic, (i, j, k) for Klein
    n: int  # cyclic order; 2 for Klein; 1 for trivial
    elements: tuple[GroupElement, ...] = field(compare=False)
    element_set: frozenset = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: GroupElement) -> bool:
        return x in self.element_set

    def same_as(self, other: FiniteSubgroup) -> bool:
        return self.parent == other.parent and self.element_set == other.element_set

    def label(self) -> str:
        """Group-class label such as 'C2' or 'C2xC2'."""
        if self.kind == KLEIN:
            return "C2xC2"
        if self.kind in (TRIVIAL, CYCLIC):
            return f"C{self.order}"
        return f"order{self.order}"

    def generators(self) -> list[GroupElement]:
        if self.kind == CYCLIC:
            return [cyclic_generator(self.parent, *self.indices, self.n)]
        if self.kind == KLEIN:
            i, j, k = self.indices
            return [cyclic_generator(self.parent, i, j, 2), cyclic_generator(self.parent, i, k, 2)]
        if self.kind == TRIVIAL:
            return []
        return [e for e in self.elements if not e.is_zero()]

    def describe(self) -> str:
        """Generator presentation such as 'x1-2x3' or 'x1-x2,x1-x3'."""
        gens = self.generators()
        return ",".join(format_generator(g) for g in gens) if gens else "0"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "indices": list(self.indices),
            "order": self.order,
            "generators": self.describe(),
            "elements": [e.to_json() for e in self.elements],
        }


def format_generator(g: GroupElement) -> str:
    """Write a degree-zero element with the c-part absorbed, e.g. x1-2x3 instead of x1+2x3-c."""
    if g.is_zero():
        return "0"
    # a torsion element of shift -1 is sum(l_i x_i) - c; rewrite l_i x_i - c as -(p_i - l_i) x_i
    # on the last nonzero index.
    res = list(g.residues)
    if g.shift == -1:
        nz = [i for i, r in enumerate(res) if r]
        last = nz[-1]
        coeffs = res[:]
        coeffs[last] = res[last] - g.parent.weights[last]
        parts = [(c, f"x{i + 1}") for i, c in enumerate(coeffs) if c]
        return format_linear(parts)
    return format_element(g)


def _closure(p: WeightSeq, gens: Sequence[GroupElement]) -> tuple[GroupElement, ...]:
    zero = p.zero()
    seen = {zero: None}
    order = [zero]
    frontier = [zero]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = a + g
                if b not in seen:
                    seen[b] = None
                    order.append(b)
                    nxt.append(b)
        frontier = nxt
    return tuple(sorted(order, key=lambda e: (not e.is_zero(), e.sort_key())))


def cyclic_generator(p: WeightSeq, i: int, j: int, n: int) -> GroupElement:
    coeffs = [0] * p.t
    coeffs[i - 1] += p[i - 1] // n
    coeffs[j - 1] -= p[j - 1] // n
    return p.element(coeffs)


def _make(p: WeightSeq, kind: str, indices: tuple[int, ...], n: int, elements) -> FiniteSubgroup:
    return FiniteSubgroup(p, kind, indices, n, tuple(elements), frozenset(elements))


def trivial_subgroup(p: WeightSeq) -> FiniteSubgroup:
    return _make(p, TRIVIAL, (), 1, (p.zero(),))


def cyclic_subgroup(p: WeightSeq, i: int, j: int, n: int) -> FiniteSubgroup:
    if not (1 <= i < j <= p.t):
        raise GroupError(f"cyclic subgroup needs 1 <= i < j <= t, got ({i},{j})")
    if n < 2 or p[i - 1] % n or p[j - 1] % n:
        raise GroupError(f"n={n} must be >= 2 and divide p_{i}={p[i - 1]} and p_{j}={p[j - 1]}")
    return _make(p, CYCLIC, (i, j), n, _closure(p, [cyclic_generator(p, i, j, n)]))


def klein_subgroup(p: WeightSeq, i: int, j: int, k: int) -> FiniteSubgroup:
    if not (1 <= i < j < k <= p.t):
        raise GroupError(f"Klein subgroup needs 1 <= i < j < k <= t, got ({i},{j},{k})")
    if any(p[m - 1] % 2 for m in (i, j, k)):
        raise GroupError("Klein subgroup needs three even weights")
    gens = [cyclic_generator(p, i, j, 2), cyclic_generator(p, i, k, 2)]
    return _make(p, KLEIN, (i, j, k), 2, _closure(p, gens))


def _divisors_from_2(g: int) -> list[int]:
    return [n for n in range(2, g + 1) if g % n == 0]


def enumerate_kernel_candidates(p: WeightSeq) -> list[FiniteSubgroup]:
    """Trivial subgroup, then cyclic ones by (i, j, n), then Klein ones by (i, j, k)."""
    out = [trivial_subgroup(p)]
    for i, j in combinations(range(1, p.t + 1), 2):
        for n in _divisors_from_2(math.gcd(p[i - 1], p[j - 1])):
            out.append(cyclic_subgroup(p, i, j, n))
    evens = [i for i in range(1, p.t + 1) if p[i - 1] % 2 == 0]
    for i, j, k in combinations(evens, 3):
        out.append(klein_subgroup(p, i, j, k))
    return out


def recognize(p: WeightSeq, elements: Iterable[GroupElement]) -> FiniteSubgroup:
    """Tag an explicit finite subgroup by comparing element sets with the known shapes."""
    elems = tuple(sorted(set(elements), key=lambda e: (not e.is_zero(), e.sort_key())))
    eset = frozenset(elems)
    if len(elems) == 1:
        return trivial_subgroup(p)
    order = len(elems)
    for i, j in combinations(range(1, p.t + 1), 2):
        g = math.gcd(p[i - 1], p[j - 1])
        if g % order == 0 and cyclic_generator(p, i, j, order) in eset:
            cand = cyclic_subgroup(p, i, j, order)
            if cand.element_set == eset:
                return cand
    if order == 4:
        evens = [i for i in range(1, p.t + 1) if p[i - 1] % 2 == 0]
        for i, j, k in combinations(evens, 3):
            cand = klein_subgroup(p, i, j, k)
            if cand.element_set == eset:
                return cand
    return _make(p, OTHER, (), 0, elems)


def subgroup_generated(p: WeightSeq, gens: Sequence[GroupElement]) -> FiniteSubgroup:
    for g in gens:
        if g.parent != p:
            raise GroupError("generator does not belong to the given group")
        if delta(g) != 0:
            raise InfiniteSubgroup(f"generator {g} has nonzero degree, closure is infinite")
    return recognize(p, _closure(p, list(gens)))


def subgroup_from_spec(p: WeightSeq, kind: str, indices: Sequence[int]) -> FiniteSubgroup:
    """Build a subgroup from 'cyclic' (i, j, n), 'klein' (i, j, k) or 'trivial' ()."""
    if kind == CYCLIC:
        if len(indices) != 3:
            raise GroupError("cyclic kernel needs i,j,n")
        return cyclic_subgroup(p, *indices)
    if kind == KLEIN:
        if len(indices) != 3:
            raise GroupError("Klein kernel needs i,j,k")
        return klein_subgroup(p, *indices)
    if kind == TRIVIAL:
        return trivial_subgroup(p)
    raise GroupError(f"unknown subgroup kind {kind!r}")


def _smallest_prime_power(n: int) -> int:
    f = 2
    while n % f:
        f += 1
    q = 1
    while n % f == 0:
        n //= f
        q *= f
    return q


def product_split(h: FiniteSubgroup) -> Optional[tuple[FiniteSubgroup, FiniteSubgroup]]:
    p = h.parent
    if h.kind == CYCLIC:
        n1 = _smallest_prime_power(h.n)
        n2 = h.n // n1
        if n2 == 1:
            return None
        i, j = h.indices
        return cyclic_subgroup(p, i, j, n1), cyclic_subgroup(p, i, j, n2)
    if h.kind == KLEIN:
        i, j, k = h.indices
        return cyclic_subgroup(p, i, j, 2), cyclic_subgroup(p, i, k, 2)
    return None
