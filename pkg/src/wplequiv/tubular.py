"""Parameters of tubular weight types: the six-element orbits Gamma(lambda), the map f and edge conditions."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from itertools import combinations, permutations
from typing import Optional

from .algebra import coeff_is_zero, principal_root, to_numeric
from .field import FieldElem, omega
from .homs import derive_codomain
from .string_group import GroupElement, GroupError, GroupTypeClass, WeightSeq, classify_type
from .subgroups import CYCLIC, KLEIN, TRIVIAL, FiniteSubgroup, cyclic_subgroup, klein_subgroup


class DegenerateParameter(ValueError):
    pass


class TubularError(ValueError):
    pass


def _num(x) -> bool:
    return not isinstance(x, (FieldElem, int, Fraction))


def _lift(x):
    return FieldElem.coerce(x) if isinstance(x, (int, Fraction)) else x


def same_value(a, b) -> bool:
    if _num(a) or _num(b):
        return coeff_is_zero(to_numeric(a) - to_numeric(b))
    return coeff_is_zero(_lift(a) - _lift(b))


def _check(lam) -> None:
    if same_value(lam, 0) or same_value(lam, 1):
        raise DegenerateParameter(f"parameter {lam} must differ from 0 and 1")


def value_key(x) -> tuple[float, float]:
    """Principal embedding as (real, imaginary), rounded for stable ordering."""
    v = to_numeric(x)
    return (round(float(v.real), 12) + 0.0, round(float(v.imag), 12) + 0.0)


def gamma_values(lam) -> tuple:
    lam = _lift(lam)
    _check(lam)
    one = 1
    return (lam, one / lam, one - lam, one / (one - lam), lam / (lam - one), (lam - one) / lam)


@dataclass(frozen=True, eq=False)
class ParamOrbit:
    value: object
    members: tuple  # the six values, in the order lambda, 1/lambda, 1-lambda, ...

    @cached_property
    def _signature(self) -> list:
        return sorted(value_key(m) for m in self.members)

    def _near(self, other: ParamOrbit) -> bool:
        # numeric prefilter only; equality is decided exactly by multiset_equal
        for a, b in zip(self._signature, other._signature):
            if abs(a[0] - b[0]) + abs(a[1] - b[1]) > 1e-6 * (1 + abs(a[0]) + abs(a[1])):
                return False
        return True

    @property
    def representative(self):
        """Member that is smallest in the principal embedding (real part, then imaginary part)."""
        return min(self.members, key=value_key)

    def sorted_members(self) -> list:
        return sorted(self.members, key=value_key)

    def contains(self, x) -> bool:
        return any(same_value(m, x) for m in self.members)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ParamOrbit):
            return NotImplemented
        return self._near(other) and multiset_equal(self.members, other.members)

    __hash__ = None  # type: ignore[assignment]

    def literals(self) -> list[str]:
        return [format_value(m) for m in self.sorted_members()]


def format_value(x) -> str:
    if isinstance(x, FieldElem):
        return x.to_literal()
    if isinstance(x, (int, Fraction)):
        return FieldElem.coerce(x).to_literal()
    v = to_numeric(x)
    re, im = float(v.real), float(v.imag)
    return f"{re:.12g}" if abs(im) < 1e-12 else f"{re:.12g}{im:+.12g}*sqrt(-1)"


def multiset_equal(a, b) -> bool:
    rest = list(b)
    if len(rest) != len(a):
        return False
    for x in a:
        for k, y in enumerate(rest):
            if same_value(x, y):
                del rest[k]
                break
        else:
            return False
    return True


def gamma(lam) -> ParamOrbit:
    return ParamOrbit(_lift(lam), gamma_values(lam))


def gamma_eq(lam, mu) -> bool:
    return multiset_equal(gamma_values(lam), gamma_values(mu))


def g_eval(x):
    x = _lift(x)
    if same_value(x, 1):
        raise DegenerateParameter("g has a pole at 1")
    return (x + 1) / (x - 1)


def f_eval(x):
    g = g_eval(x)
    return g * g


def f_sqrt_orbit(lam) -> ParamOrbit:
    """Gamma(f(s)) for a square root s of lam; either root gives the same orbit."""
    _check(_lift(lam))
    return gamma(f_eval(principal_root(_lift(lam), 2)))


def j_invariant(lam):
    lam = _lift(lam)
    _check(lam)
    return 256 * (lam * lam - lam + 1) ** 3 / (lam * lam * (lam - 1) ** 2)


def distinct_members(orbit: ParamOrbit) -> list:
    out: list = []
    for m in orbit.sorted_members():
        if not any(same_value(m, o) for o in out):
            out.append(m)
    return out


def cyclic_targets(lam) -> list[ParamOrbit]:
    """The distinct orbits Gamma(f(sqrt(lam'))) over lam' in Gamma(lam)."""
    out: list[ParamOrbit] = []
    for m in distinct_members(gamma(lam)):
        o = f_sqrt_orbit(m)
        if not any(o == e for e in out):
            out.append(o)
    return out


# --- edge table -----------------------------------------------------------------------

W2222 = (2, 2, 2, 2)
W442 = (4, 4, 2)
W333 = (3, 3, 3)
W632 = (6, 3, 2)

@dataclass(frozen=True)
class TubularRow:
    source: tuple[int, ...]
    target: tuple[int, ...]
    kernel: tuple[str, tuple[int, ...]]
    # "f-sqrt" (some lam' in Gamma(lam)), "lambda", "-1", "omega", or None when no parameters
    condition: Optional[str]

    def subgroup(self) -> FiniteSubgroup:
        p = WeightSeq(self.source)
        kind, idx = self.kernel
        return cyclic_subgroup(p, *idx) if kind == "cyclic" else klein_subgroup(p, *idx)


def _rows() -> list[TubularRow]:
    rows = []
    for i, j in combinations(range(1, 5), 2):
        rows.append(TubularRow(W2222, W2222, ("cyclic", (i, j, 2)), "f-sqrt"))
    for ijk in combinations(range(1, 5), 3):
        rows.append(TubularRow(W2222, W2222, ("klein", ijk), "lambda"))
    rows.append(TubularRow(W442, W442, ("cyclic", (1, 3, 2)), None))
    rows.append(TubularRow(W442, W442, ("cyclic", (2, 3, 2)), None))
    rows.append(TubularRow(W442, W2222, ("cyclic", (1, 2, 4)), "-1"))
    rows.append(TubularRow(W442, W2222, ("cyclic", (1, 2, 2)), "-1"))
    rows.append(TubularRow(W442, W2222, ("klein", (1, 2, 3)), "-1"))
    for i, j in combinations(range(1, 4), 2):
        rows.append(TubularRow(W333, W333, ("cyclic", (i, j, 3)), None))
    rows.append(TubularRow(W632, W333, ("cyclic", (1, 3, 2)), None))
    rows.append(TubularRow(W632, W2222, ("cyclic", (1, 2, 3)), "omega"))
    return rows


TUBULAR_TABLE: tuple[TubularRow, ...] = tuple(_rows())

# identity rows: trivial kernel keeps the type; on (2,2,2,2) the orbit is preserved
_TRIVIAL_CONDITION = {W2222: "lambda", W442: None, W333: None, W632: None}


def _transport(H: FiniteSubgroup, perm: tuple[int, ...], target: WeightSeq) -> frozenset:
    # canonical slot k takes the residue of original index perm[k]
    return frozenset(GroupElement(target, tuple(e.residues[k] for k in perm), e.shift) for e in H.elements)


def _canonical_orders(p: WeightSeq) -> list[tuple[WeightSeq, tuple[int, ...]]]:
    key = p.type_key()
    if key not in _TRIVIAL_CONDITION or p.t != len(key):
        raise TubularError(f"{p} is not a tubular type in stripped form")
    canon = WeightSeq(key)
    out = []
    for perm in set(permutations(range(p.t))):
        if tuple(p[k] for k in perm) == key:
            out.append((canon, perm))
    return sorted(out, key=lambda c: c[1])


def match_rows(p: WeightSeq, H: FiniteSubgroup) -> list[TubularRow]:
    """Table rows whose source and kernel agree with (p, H) after reordering p into table order."""
    if H.parent != p:
        raise TubularError("subgroup does not belong to the source weight sequence")
    found: list[TubularRow] = []
    for canon, perm in _canonical_orders(p):
        moved = _transport(H, perm, canon)
        if len(moved) == 1:
            row = TubularRow(canon.weights, canon.weights, ("trivial", ()), _TRIVIAL_CONDITION[canon.weights])
            if row not in found:
                found.append(row)
            continue
        for row in TUBULAR_TABLE:
            if row.source == canon.weights and row.subgroup().element_set == moved and row not in found:
                found.append(row)
    return found


def _require_tubular(p: WeightSeq) -> None:
    if classify_type(p) != GroupTypeClass.TUBULAR:
        raise TubularError(f"{p} is not of tubular type")


def _condition_holds(cond: Optional[str], lam, mu) -> bool:
    if cond is None:
        return True
    if cond == "lambda":
        return gamma_eq(mu, lam)
    if cond == "-1":
        return gamma_eq(mu, -1)
    if cond == "omega":
        return gamma_eq(mu, omega())
    if cond == "f-sqrt":
        target = gamma(mu)
        return any(target == o for o in cyclic_targets(lam))
    raise TubularError(f"unknown condition {cond!r}")


def tubular_edge_check(p: WeightSeq, lam, H: FiniteSubgroup, q: WeightSeq, mu) -> bool:
    """Whether (coh X(p; lam))^H is equivalent to coh X(q; mu) according to the tubular table."""
    _require_tubular(p)
    _require_tubular(q)
    for w, v, name in ((p, lam, "source"), (q, mu, "target")):
        has = w.type_key() == W2222
        if has and v is None:
            raise TubularError(f"{name} of type (2,2,2,2) needs a parameter")
        if not has and v is not None:
            raise TubularError(f"{name} of type {w} takes no parameter")
        if v is not None:
            _check(_lift(v))
    rows = [r for r in match_rows(p, H) if r.target == q.type_key()]
    return any(_condition_holds(r.condition, lam, mu) for r in rows)


def edge_target_orbits(
    p: WeightSeq, lam, H: FiniteSubgroup, cache: Optional[dict] = None
) -> list[tuple[tuple[int, ...], Optional[list[ParamOrbit]]]]:
    """Target types reachable through H and, for (2,2,2,2) targets, the admissible parameter orbits.

    `cache` may be shared between calls with the same (p, lam).
    """
    cache = {} if cache is None else cache
    out = []
    for row in match_rows(p, H):
        if row.target != W2222:
            out.append((row.target, None))
        elif row.condition == "lambda":
            out.append((row.target, [gamma(lam)]))
        elif row.condition == "-1":
            out.append((row.target, [gamma(-1)]))
        elif row.condition == "omega":
            out.append((row.target, [gamma(omega())]))
        else:
            if "f-sqrt" not in cache:
                cache["f-sqrt"] = cyclic_targets(lam)
            out.append((row.target, cache["f-sqrt"]))
    return out


def kernel_codomain_type(p: WeightSeq, H: FiniteSubgroup) -> tuple[int, ...]:
    """Type of the codomain of the canonical admissible homomorphism with kernel H."""
    if H.kind not in (TRIVIAL, CYCLIC, KLEIN):
        raise GroupError("kernel must be trivial, cyclic or Klein")
    return derive_codomain(p, H).type_key()

