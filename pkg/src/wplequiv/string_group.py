"""Arithmetic in the string group L(p).

L(p) is generated by x_1..x_t subject to p_1 x_1 = ... = p_t x_t = c.  Every
element has a unique normal form sum(l_i x_i) + l c with 0 <= l_i < p_i.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass
from functools import lru_cache, reduce
from itertools import product
from typing import Iterable, Sequence

TORSION_CAP = int(os.environ.get("WPL_TORSION_CAP", 10**6))


class GroupError(ValueError):
    pass


class GroupTypeClass(str, enum.Enum):
    DOMESTIC = "domestic"
    TUBULAR = "tubular"
    WILD = "wild"


def _lcm(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


@dataclass(frozen=True)
class WeightSeq:
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        w = tuple(int(v) for v in self.weights)
        if any(v < 1 for v in w):
            raise GroupError(f"weights must be positive integers: {w}")
        object.__setattr__(self, "weights", w)

    @classmethod
    def of(cls, *weights: int) -> WeightSeq:
        return cls(tuple(weights))

    @property
    def t(self) -> int:
        return len(self.weights)

    @property
    def lcm(self) -> int:
        return _lcm(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)

    def __getitem__(self, i: int) -> int:
        return self.weights[i]

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.weights)) + ")"

    def canonicalize(self) -> tuple[WeightSeq, tuple[int, ...]]:
        """Strip weight-1 entries; the map sends new positions to old ones."""
        keep = tuple(i for i, w in enumerate(self.weights) if w > 1)
        return WeightSeq(tuple(self.weights[i] for i in keep)), keep

    def stripped(self) -> WeightSeq:
        return self.canonicalize()[0]

    def type_key(self) -> tuple[int, ...]:
        """Multiset of weights >= 2, sorted descending."""
        return tuple(sorted((w for w in self.weights if w > 1), reverse=True))

    def same_type(self, other: WeightSeq) -> bool:
        return self.type_key() == other.type_key()

    # element constructors
    def element(self, coeffs: Sequence[int], shift: int = 0) -> GroupElement:
        return element_from_raw(self, coeffs, shift)

    def zero(self) -> GroupElement:
        return GroupElement(self, (0,) * self.t, 0)

    def c(self) -> GroupElement:
        return GroupElement(self, (0,) * self.t, 1)

    def x(self, i: int) -> GroupElement:
        """The generator x_i (1-based)."""
        if not 1 <= i <= self.t:
            raise GroupError(f"generator index {i} out of range for t={self.t}")
        coeffs = [0] * self.t
        coeffs[i - 1] = 1
        return element_from_raw(self, coeffs, 0)

    def omega(self) -> GroupElement:
        return dualizing_omega(self)


@dataclass(frozen=True)
class GroupElement:
    parent: WeightSeq
    residues: tuple[int, ...]
    shift: int

    def __post_init__(self) -> None:
        if len(self.residues) != self.parent.t:
            raise GroupError("residue vector length does not match weights")
        for r, p in zip(self.residues, self.parent.weights):
            if not 0 <= r < p:
                raise GroupError("residues are not in normal form")

    def _check(self, other: GroupElement) -> None:
        if not isinstance(other, GroupElement):
            raise TypeError(f"expected GroupElement, got {type(other).__name__}")
        if other.parent != self.parent:
            raise GroupError(f"parent mismatch: {self.parent} vs {other.parent}")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return element_from_raw(
            self.parent,
            [a + b for a, b in zip(self.residues, other.residues)],
            self.shift + other.shift,
        )

    def __neg__(self) -> GroupElement:
        return element_from_raw(self.parent, [-a for a in self.residues], -self.shift)

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __mul__(self, k: int) -> GroupElement:
        if not isinstance(k, int):
            return NotImplemented
        return element_from_raw(self.parent, [k * a for a in self.residues], k * self.shift)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.shift == 0 and not any(self.residues)

    @property
    def delta(self) -> int:
        return delta(self)

    @property
    def mult(self) -> int:
        return mult(self)

    @property
    def mu(self) -> int:
        return mu(self)

    def sort_key(self) -> tuple:
        return (self.shift, self.residues)

    def to_json(self) -> dict:
        return {"residues": list(self.residues), "shift": self.shift}

    def __str__(self) -> str:
        return format_element(self)


def element_from_raw(p: WeightSeq, coeffs: Sequence[int], shift: int = 0) -> GroupElement:
    if len(coeffs) != p.t:
        raise GroupError(f"expected {p.t} coefficients, got {len(coeffs)}")
    residues = []
    total = int(shift)
    for m, w in zip(coeffs, p.weights):
        q, r = divmod(int(m), w)
        residues.append(r)
        total += q
    return GroupElement(p, tuple(residues), total)


def add(x: GroupElement, y: GroupElement) -> GroupElement:
    return x + y


def neg(x: GroupElement) -> GroupElement:
    return -x


def scalar_mul(k: int, x: GroupElement) -> GroupElement:
    return k * x


def canonical_c(p: WeightSeq) -> GroupElement:
    return p.c()


def dualizing_omega(p: WeightSeq) -> GroupElement:
    return element_from_raw(p, [-1] * p.t, p.t - 2)


def delta(x: GroupElement) -> int:
    p = x.parent.lcm
    return sum(r * (p // w) for r, w in zip(x.residues, x.parent.weights)) + x.shift * p


def mult(x: GroupElement) -> int:
    return max(x.shift + 1, 0)


def mu(x: GroupElement) -> int:
    return sum(1 for r in x.residues if r)


def project_component(x: GroupElement, i: int) -> int:
    if not 1 <= i <= x.parent.t:
        raise GroupError(f"index {i} out of range for t={x.parent.t}")
    return x.residues[i - 1]


def classify_type(p: WeightSeq) -> GroupTypeClass:
    d = delta(dualizing_omega(p))
    if d < 0:
        return GroupTypeClass.DOMESTIC
    if d == 0:
        return GroupTypeClass.TUBULAR
    return GroupTypeClass.WILD


def torsion_size(p: WeightSeq) -> int:
    return math.prod(p.weights) // p.lcm


def residue_vectors(p: WeightSeq) -> Iterable[tuple[int, ...]]:
    return product(*(range(w) for w in p.weights))


@lru_cache(maxsize=256)
def _torsion(p: WeightSeq) -> tuple[GroupElement, ...]:
    if math.prod(p.weights) > TORSION_CAP:
        raise GroupError(f"torsion scan over {math.prod(p.weights)} residue vectors exceeds cap {TORSION_CAP}")
    lcm = p.lcm
    steps = [lcm // w for w in p.weights]
    out = []
    for res in residue_vectors(p):
        s = sum(r * k for r, k in zip(res, steps))
        if s % lcm == 0:
            out.append(GroupElement(p, res, -(s // lcm)))
    return tuple(out)


def torsion_subgroup(p: WeightSeq) -> list[GroupElement]:
    """All elements of degree zero; the zero element comes first."""
    return list(_torsion(p))


def format_element(x: GroupElement, gen: str = "x", cgen: str = "c") -> str:
    """Render as e.g. 'x1+2x3-c'; zero renders as '0'."""
    parts: list[tuple[int, str]] = []
    for i, r in enumerate(x.residues, start=1):
        if r:
            parts.append((r, f"{gen}{i}"))
    if x.shift:
        parts.append((x.shift, cgen))
    return format_linear(parts)


def format_linear(parts: Sequence[tuple[int, str]]) -> str:
    if not parts:
        return "0"
    out = ""
    for k, name in parts:
        sign = "-" if k < 0 else "+"
        mag = abs(k)
        term = name if mag == 1 else f"{mag}{name}"
        if not out:
            out = term if sign == "+" else "-" + term
        else:
            out += sign + term
    return out
