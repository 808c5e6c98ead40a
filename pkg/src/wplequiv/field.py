"""Exact arithmetic in towers of quadratic extensions of the rationals.

An element of a tower (R_1, ..., R_k) is stored recursively: a rational at
level 0, and a pair (a, b) meaning a + b*sqrt(R_k) at level k, where a, b and
R_k live at level k-1.  Every radicand is a non-square at its own level.
Each sqrt(R_m) is embedded in C as the principal square root of the embedded
radicand; that embedding drives branch selection and the floating oracle.
"""

from __future__ import annotations

import ast
import os
from fractions import Fraction
from functools import lru_cache
from math import isqrt
from typing import Union

from mpmath.ctx_mp import MPContext


class FieldError(ValueError):
    pass


class TowerDepthExceeded(FieldError):
    pass


class LiteralSyntaxError(FieldError):
    pass


DEFAULT_DEPTH = 4
DEFAULT_PREC = 128
ZERO_TOL_EXP = -40

Raw = Union[Fraction, tuple]
Tower = tuple


def depth_cap() -> int:
    value = os.environ.get("WPL_TOWER_DEPTH")
    if value is None or value == "":
        return DEFAULT_DEPTH
    try:
        cap = int(value)
    except ValueError:
        raise FieldError(f"WPL_TOWER_DEPTH must be an integer, got {value!r}") from None
    if cap < 0:
        raise FieldError("WPL_TOWER_DEPTH must be non-negative")
    return cap


# --- raw arithmetic -------------------------------------------------------------------

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _zero(k: int) -> Raw:
    z: Raw = _ZERO
    for _ in range(k):
        z = (z, z)
    return z


def _const(q: Fraction, k: int) -> Raw:
    out: Raw = Fraction(q)
    z: Raw = _ZERO
    for _ in range(k):
        out = (out, z)
        z = (z, z)
    return out


def _is_zero(x: Raw) -> bool:
    if isinstance(x, Fraction):
        return x == 0
    return _is_zero(x[0]) and _is_zero(x[1])


def _add(x: Raw, y: Raw) -> Raw:
    if isinstance(x, Fraction):
        return x + y
    return (_add(x[0], y[0]), _add(x[1], y[1]))


def _neg(x: Raw) -> Raw:
    if isinstance(x, Fraction):
        return -x
    return (_neg(x[0]), _neg(x[1]))


def _sub(x: Raw, y: Raw) -> Raw:
    return _add(x, _neg(y))


def _scale(x: Raw, q: Fraction) -> Raw:
    if isinstance(x, Fraction):
        return x * q
    return (_scale(x[0], q), _scale(x[1], q))


def _mul(x: Raw, y: Raw, tower: Tower, k: int) -> Raw:
    if k == 0:
        return x * y
    a, b = x
    c, d = y
    r = tower[k - 1]
    ac = _mul(a, c, tower, k - 1)
    bd = _mul(b, d, tower, k - 1)
    ad = _mul(a, d, tower, k - 1)
    bc = _mul(b, c, tower, k - 1)
    return (_add(ac, _mul(bd, r, tower, k - 1)), _add(ad, bc))


def _inv(x: Raw, tower: Tower, k: int) -> Raw:
    if k == 0:
        if x == 0:
            raise ZeroDivisionError("division by zero in the exact field")
        return 1 / x
    a, b = x
    if _is_zero(b):
        return (_inv(a, tower, k - 1), b)
    r = tower[k - 1]
    norm = _sub(_mul(a, a, tower, k - 1), _mul(_mul(b, b, tower, k - 1), r, tower, k - 1))
    ni = _inv(norm, tower, k - 1)
    return (_mul(a, ni, tower, k - 1), _neg(_mul(b, ni, tower, k - 1)))


def _lift(x: Raw, k_from: int, k_to: int) -> Raw:
    for k in range(k_from, k_to):
        x = (x, _zero(k))
    return x


def _rational_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _squarefree_split(q: Fraction) -> tuple[Fraction, int]:
    """q = c^2 * m with c > 0 rational and m an integer free of small square factors."""
    n = q.numerator * q.denominator
    sign = -1 if n < 0 else 1
    n = abs(n)
    c = 1
    f = 2
    while f * f <= n and f < 10**4:
        while n % (f * f) == 0:
            n //= f * f
            c *= f
        f += 1
    r = isqrt(n)
    if r * r == n:
        c, n = c * r, 1
    return Fraction(c, q.denominator), sign * n


def _sqrt_in(x: Raw, tower: Tower, k: int) -> Raw | None:
    """Some square root of x inside the tower, or None when x is not a square there."""
    if k == 0:
        return _rational_sqrt(x)
    a, b = x
    r = tower[k - 1]
    z = _zero(k - 1)
    if _is_zero(b):
        s = _sqrt_in(a, tower, k - 1)
        if s is not None:
            return (s, z)
        s = _sqrt_in(_mul(a, _inv(r, tower, k - 1), tower, k - 1), tower, k - 1)
        if s is not None:
            return (z, s)
        return None
    norm = _sub(_mul(a, a, tower, k - 1), _mul(_mul(b, b, tower, k - 1), r, tower, k - 1))
    sn = _sqrt_in(norm, tower, k - 1)
    if sn is None:
        return None
    half = Fraction(1, 2)
    for cand in (_scale(_add(a, sn), half), _scale(_sub(a, sn), half)):
        if _is_zero(cand):
            continue
        xr = _sqrt_in(cand, tower, k - 1)
        if xr is None:
            continue
        y = _mul(_scale(b, half), _inv(xr, tower, k - 1), tower, k - 1)
        return (xr, y)
    return None


def _trim(tower: Tower, raw: Raw) -> tuple[Tower, Raw]:
    while tower and _is_zero(raw[1]):
        raw = raw[0]
        tower = tower[:-1]
    return tower, raw


# --- floating embedding ---------------------------------------------------------------


@lru_cache(maxsize=8)
def _context(prec: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = prec
    return ctx


def _embed_raw(x: Raw, gens: tuple, ctx: MPContext, k: int):
    if k == 0:
        return ctx.mpf(x.numerator) / x.denominator
    return _embed_raw(x[0], gens, ctx, k - 1) + _embed_raw(x[1], gens, ctx, k - 1) * gens[k - 1]


@lru_cache(maxsize=1024)
def _generator_values(tower: Tower, prec: int) -> tuple:
    ctx = _context(prec)
    vals: list = []
    for m, r in enumerate(tower):
        v = ctx.mpc(_embed_raw(r, tuple(vals), ctx, m))
        vals.append(ctx.sqrt(v))
    return tuple(vals)


def _embed(tower: Tower, x: Raw, prec: int):
    ctx = _context(prec)
    return ctx.mpc(_embed_raw(x, _generator_values(tower, prec), ctx, len(tower)))


def _principal_sign(tower: Tower, x: Raw) -> int:
    """+1 if the embedding of x has positive real part (ties: positive imaginary part)."""
    ctx = _context(DEFAULT_PREC)
    v = _embed(tower, x, DEFAULT_PREC)
    tol = ctx.mpf(2) ** ZERO_TOL_EXP
    if abs(v.real) > tol:
        return 1 if v.real > 0 else -1
    return 1 if v.imag > 0 else -1


# --- tower merging --------------------------------------------------------------------


def _subst(x: Raw, images: list, target: Tower, k_src: int) -> Raw:
    """Evaluate a raw element of a source tower given images of its generators in target."""
    kt = len(target)
    if k_src == 0:
        return _const(x, kt)
    a = _subst(x[0], images, target, k_src - 1)
    b = _subst(x[1], images, target, k_src - 1)
    return _add(a, _mul(b, images[k_src - 1], target, kt))


@lru_cache(maxsize=4096)
def _merge(tx: Tower, ty: Tower) -> tuple[Tower, tuple]:
    """Extend tx to contain ty; returns the merged tower and images of ty's generators."""
    target = tx
    images: list = []
    gens_y = _generator_values(ty, DEFAULT_PREC)
    for m, r in enumerate(ty):
        r_img = _subst(r, images, target, m)
        root = _sqrt_in(r_img, target, len(target))
        if root is not None:
            v = _embed(target, root, DEFAULT_PREC)
            if abs(v - gens_y[m]) > abs(v + gens_y[m]):
                root = _neg(root)
            images.append(root)
            continue
        if len(target) + 1 > depth_cap():
            raise TowerDepthExceeded(f"tower depth cap {depth_cap()} exceeded while merging")
        k = len(target)
        target = target + (r_img,)
        images = [_lift(im, k, k + 1) for im in images]
        images.append((_zero(k), _const(_ONE, k)))
    return target, tuple(images)


def _unify(x: FieldElem, y: FieldElem) -> tuple[Tower, Raw, Raw]:
    tx, ty = x.tower, y.tower
    kx, ky = len(tx), len(ty)
    if tx == ty:
        return tx, x.raw, y.raw
    if kx < ky and ty[:kx] == tx:
        return ty, _lift(x.raw, kx, ky), y.raw
    if ky < kx and tx[:ky] == ty:
        return tx, x.raw, _lift(y.raw, ky, kx)
    target, images = _merge(tx, ty)
    kt = len(target)
    return target, _lift(x.raw, kx, kt), _subst(y.raw, list(images), target, ky)


# --- public element type --------------------------------------------------------------


class FieldElem:
    __slots__ = ("tower", "raw")

    def __init__(self, tower: Tower, raw: Raw):
        tower, raw = _trim(tuple(tower), raw)
        self.tower = tower
        self.raw = raw

    @classmethod
    def rational(cls, num: int | Fraction, den: int = 1) -> FieldElem:
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        return cls((), Fraction(num) / den)

    @staticmethod
    def coerce(v) -> FieldElem:
        if isinstance(v, FieldElem):
            return v
        if isinstance(v, (int, Fraction)):
            return FieldElem((), Fraction(v))
        raise TypeError(f"cannot convert {type(v).__name__} to an exact field element")

    @property
    def depth(self) -> int:
        return len(self.tower)

    def is_zero(self) -> bool:
        return _is_zero(self.raw)

    def is_rational(self) -> bool:
        return not self.tower

    def to_fraction(self) -> Fraction:
        if self.tower:
            raise FieldError("element is not rational")
        return self.raw

    def _binary(self, other):
        try:
            other = FieldElem.coerce(other)
        except TypeError:
            return None
        return _unify(self, other)

    def __add__(self, other):
        u = self._binary(other)
        if u is None:
            return NotImplemented
        t, a, b = u
        return FieldElem(t, _add(a, b))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.tower, _neg(self.raw))

    def __pos__(self):
        return self

    def __sub__(self, other):
        u = self._binary(other)
        if u is None:
            return NotImplemented
        t, a, b = u
        return FieldElem(t, _sub(a, b))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        u = self._binary(other)
        if u is None:
            return NotImplemented
        t, a, b = u
        return FieldElem(t, _mul(a, b, t, len(t)))

    __rmul__ = __mul__

    def inverse(self) -> FieldElem:
        return FieldElem(self.tower, _inv(self.raw, self.tower, len(self.tower)))

    def __truediv__(self, other):
        try:
            other = FieldElem.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return FieldElem.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = FieldElem.rational(1)
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        try:
            other = FieldElem.coerce(other)
        except TypeError:
            return NotImplemented
        t, a, b = _unify(self, other)
        return _is_zero(_sub(a, b))

    def __ne__(self, other) -> bool:
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = None  # equal values may live in different towers

    def sqrt(self) -> FieldElem:
        return sqrt(self)

    def approx(self, prec: int = DEFAULT_PREC):
        return approx(self, prec)

    def sort_key(self) -> tuple[float, float]:
        v = self.approx()
        return (round(float(v.real), 12) + 0.0, round(float(v.imag), 12) + 0.0)

    def to_literal(self) -> str:
        return to_literal(self)

    def __repr__(self) -> str:
        return f"FieldElem({self.to_literal()!r})"

    def __str__(self) -> str:
        return self.to_literal()


def from_rational(num: int | Fraction, den: int = 1) -> FieldElem:
    return FieldElem.rational(num, den)


def sqrt(e: FieldElem | int | Fraction) -> FieldElem:
    """Square root on the principal branch, adjoining a radicand only when needed."""
    e = FieldElem.coerce(e)
    if e.is_zero():
        return e
    tower, k = e.tower, e.depth
    root = _sqrt_in(e.raw, tower, k)
    if root is None:
        if k + 1 > depth_cap():
            raise TowerDepthExceeded(f"adjoining sqrt({e.to_literal()}) exceeds tower depth cap {depth_cap()}")
        if k == 0:
            coeff, m = _squarefree_split(e.raw)
            return FieldElem((Fraction(m),), (_ZERO, coeff))
        return FieldElem(tower + (e.raw,), (_zero(k), _const(_ONE, k)))
    if _principal_sign(tower, root) < 0:
        root = _neg(root)
    return FieldElem(tower, root)


def approx(e: FieldElem, prec: int = DEFAULT_PREC):
    if prec < 64:
        raise FieldError("precision must be at least 64 bits")
    return _embed(e.tower, e.raw, prec)


def numeric_context(prec: int = DEFAULT_PREC) -> MPContext:
    return _context(prec)


def numeric_zero(v, prec: int = DEFAULT_PREC) -> bool:
    ctx = _context(prec)
    return abs(v) < ctx.mpf(2) ** ZERO_TOL_EXP


# --- literals -------------------------------------------------------------------------


def _fraction_literal(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _terms(tower: Tower, x: Raw, k: int) -> list[tuple[Fraction, list[str]]]:
    if k == 0:
        return [(x, [])] if x != 0 else []
    gen = "sqrt(" + _raw_literal(tower[: k - 1], tower[k - 1]) + ")"
    out = _terms(tower, x[0], k - 1)
    out += [(c, g + [gen]) for c, g in _terms(tower, x[1], k - 1)]
    return out


def _raw_literal(tower: Tower, x: Raw) -> str:
    tower, x = _trim(tower, x)
    terms = _terms(tower, x, len(tower))
    if not terms:
        return "0"
    pieces = []
    for idx, (c, gens) in enumerate(terms):
        neg = c < 0
        mag = -c if neg else c
        if gens:
            body = "*".join(gens) if mag == 1 else _fraction_literal(mag) + "*" + "*".join(gens)
        else:
            body = _fraction_literal(mag)
        if idx == 0:
            pieces.append("-" + body if neg else body)
        else:
            pieces.append(("-" if neg else "+") + body)
    return "".join(pieces)


def to_literal(e: FieldElem) -> str:
    return _raw_literal(e.tower, e.raw)


_ALLOWED_FUNCS = {"sqrt"}


def _eval_node(node):
    if isinstance(node, ast.Expression):
        return _eval_node(node.body)
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return FieldElem.rational(node.value)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            exp = node.right
            sign = 1
            if isinstance(exp, ast.UnaryOp) and isinstance(exp.op, ast.USub):
                sign, exp = -1, exp.operand
            if not (isinstance(exp, ast.Constant) and isinstance(exp.value, int)):
                raise LiteralSyntaxError("exponents must be integer constants")
            return _eval_node(node.left) ** (sign * exp.value)
        a, b = _eval_node(node.left), _eval_node(node.right)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if b.is_zero():
                raise LiteralSyntaxError("division by zero in literal")
            return a / b
    if (
        isinstance(node, ast.Call)
        and isinstance(node.func, ast.Name)
        and node.func.id in _ALLOWED_FUNCS
        and len(node.args) == 1
        and not node.keywords
    ):
        return sqrt(_eval_node(node.args[0]))
    raise LiteralSyntaxError(f"unsupported syntax in literal: {ast.dump(node)[:60]}")


def parse_literal(text: str) -> FieldElem:
    """Parse e.g. '1/2', 'sqrt(-1)', '(1+sqrt(-3))/2'."""
    src = text.strip().replace("^", "**")
    if not src:
        raise LiteralSyntaxError("empty literal")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise LiteralSyntaxError(f"cannot parse literal {text!r}: {exc.msg}") from None
    return _eval_node(tree)




def imaginary_unit() -> FieldElem:
    return sqrt(-1)


def omega() -> FieldElem:
    """The primitive sixth root of unity (1+sqrt(-3))/2."""
    return (1 + sqrt(-3)) / 2
