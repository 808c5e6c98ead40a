"""The graded coordinate algebra S(p; lambda) and compatible algebra maps.

S(p; lambda) = k[X_1..X_t] / (X_i^{p_i} - X_2^{p_2} + lambda_i X_1^{p_1}, i >= 3), graded by
L(p) with deg X_i = x_i.  Weight sequences shorter than 2 are padded with 1's,
so the algebra always has at least the two generators z_1, z_2.

Coefficients are exact FieldElem values; when an n-th root with n > 2 is
needed the whole computation switches to mpmath complex numbers and zero tests
use the tolerance 2^-40 at 128 bits.
"""

from __future__ import annotations

import ast
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .field import FieldElem, LiteralSyntaxError, TowerDepthExceeded, numeric_context, numeric_zero, sqrt
from .homs import StringHom, canonical_hom, eval_hom, kernel
from .string_group import GroupElement, GroupError, WeightSeq, element_from_raw, mult, residue_vectors
from .subgroups import CYCLIC, KLEIN, TRIVIAL, FiniteSubgroup


class AlgebraError(ValueError):
    pass


class UnsupportedCase(AlgebraError):
    pass


Exponents = tuple


def _is_numeric(c) -> bool:
    return not isinstance(c, (FieldElem, int, Fraction))


def coeff_is_zero(c) -> bool:
    if isinstance(c, FieldElem):
        return c.is_zero()
    if isinstance(c, (int, Fraction)):
        return c == 0
    return numeric_zero(c)


def to_numeric(c):
    ctx = numeric_context()
    if isinstance(c, FieldElem):
        return c.approx()
    if isinstance(c, (int, Fraction)):
        return ctx.mpc(ctx.mpf(Fraction(c).numerator) / Fraction(c).denominator)
    return ctx.mpc(c)


def padded(p: WeightSeq) -> WeightSeq:
    return WeightSeq(p.weights + (1,) * max(0, 2 - p.t))


def pad_element(x: GroupElement) -> GroupElement:
    target = padded(x.parent)
    return GroupElement(target, x.residues + (0,) * (target.t - x.parent.t), x.shift)


@dataclass(frozen=True)
class ParamSeq:
    """Parameters lambda_3..lambda_t of a weight sequence (lambda_1 = inf, lambda_2 = 0)."""

    parent: WeightSeq
    values: tuple = ()

    def __post_init__(self) -> None:
        need = max(0, self.parent.t - 2)
        if len(self.values) != need:
            raise AlgebraError(f"{self.parent} needs {need} parameters, got {len(self.values)}")
        vals = tuple(FieldElem.coerce(v) if isinstance(v, (int, Fraction)) else v for v in self.values)
        object.__setattr__(self, "values", vals)
        if vals and not coeff_is_zero(vals[0] - 1):
            raise AlgebraError("parameters must be normalized with lambda_3 = 1")
        for v in vals:
            if coeff_is_zero(v):
                raise AlgebraError("parameters must be nonzero")
        for a in range(len(vals)):
            for b in range(a + 1, len(vals)):
                if coeff_is_zero(vals[a] - vals[b]):
                    raise AlgebraError("parameters must be pairwise distinct")

    @classmethod
    def normalized(cls, p: WeightSeq, rest: Sequence = ()) -> ParamSeq:
        """lambda_3 = 1 followed by lambda_4..lambda_t."""
        if p.t < 3:
            if rest:
                raise AlgebraError("weight sequences with t <= 2 carry no parameters")
            return cls(p, ())
        return cls(p, (FieldElem.rational(1),) + tuple(rest))

    @property
    def numeric(self) -> bool:
        return any(_is_numeric(v) for v in self.values)

    def is_normalized(self) -> bool:
        return not self.values or coeff_is_zero(self.values[0] - 1)

    def lam(self, i: int):
        """lambda_i for i >= 3 (1-based)."""
        return self.values[i - 3]

    def as_numeric(self) -> ParamSeq:
        return ParamSeq(self.parent, tuple(to_numeric(v) for v in self.values))


@dataclass(frozen=True)
class CoordinateAlgebra:
    weights: WeightSeq
    params: ParamSeq
    floating: bool = False

    def __post_init__(self) -> None:
        if self.params.parent != self.weights:
            raise AlgebraError("parameter sequence belongs to a different weight sequence")

    @property
    def grading(self) -> WeightSeq:
        return padded(self.weights)

    @property
    def ngens(self) -> int:
        return self.grading.t

    @property
    def numeric(self) -> bool:
        return self.floating or self.params.numeric

    def degree(self, e: Exponents) -> GroupElement:
        return element_from_raw(self.grading, list(e), 0)

    def gen(self, i: int) -> GradedPoly:
        e = [0] * self.ngens
        e[i - 1] = 1
        return GradedPoly(self, {tuple(e): self.one()})

    def one(self):
        return to_numeric(1) if self.numeric else FieldElem.rational(1)

    def coeff(self, c):
        if self.numeric:
            return to_numeric(c)
        return FieldElem.coerce(c) if isinstance(c, (int, Fraction)) else c

    def const(self, c) -> GradedPoly:
        if coeff_is_zero(c):
            return GradedPoly(self, {})
        return GradedPoly(self, {(0,) * self.ngens: self.coeff(c)})

    def zero(self) -> GradedPoly:
        return GradedPoly(self, {})

    def monomial(self, e: Exponents, c=None) -> GradedPoly:
        return GradedPoly(self, {tuple(e): self.one() if c is None else self.coeff(c)})

    def as_numeric(self) -> CoordinateAlgebra:
        return CoordinateAlgebra(self.weights, self.params.as_numeric(), True)


def _acc(terms: dict, e: Exponents, c) -> None:
    if e in terms:
        v = terms[e] + c
        if coeff_is_zero(v):
            del terms[e]
        else:
            terms[e] = v
    elif not coeff_is_zero(c):
        terms[e] = c


class GradedPoly:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: CoordinateAlgebra, terms: dict):
        self.alg = alg
        self.terms = {e: c for e, c in terms.items() if not coeff_is_zero(c)}

    def _wrap(self, other) -> GradedPoly:
        if isinstance(other, GradedPoly):
            if other.alg.weights != self.alg.weights:
                raise AlgebraError("polynomials belong to different algebras")
            return other
        return self.alg.const(other)

    def __add__(self, other):
        other = self._wrap(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            _acc(terms, e, c)
        return GradedPoly(self.alg, terms)

    __radd__ = __add__

    def __neg__(self):
        return GradedPoly(self.alg, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._wrap(other))

    def __rsub__(self, other):
        return self._wrap(other) - self

    def __mul__(self, other):
        other = self._wrap(other)
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                _acc(terms, tuple(a + b for a, b in zip(e1, e2)), c1 * c2)
        return GradedPoly(self.alg, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        result = self.alg.const(self.alg.one())
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {self.alg.degree(e) for e in self.terms}

    def homogeneous_degree(self) -> Optional[GroupElement]:
        degs = self.degrees()
        if len(degs) != 1:
            return None
        return degs.pop()

    def reduce(self) -> GradedPoly:
        return reduce_poly(self)

    def coefficient(self, e: Exponents):
        return self.terms.get(tuple(e))

    def to_string(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"GradedPoly({self.to_string()!r})"


def format_poly(f: GradedPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e in sorted(f.terms, reverse=True):
        c = f.terms[e]
        mono = "*".join(
            (f"z{i + 1}" if k == 1 else f"z{i + 1}^{k}") for i, k in enumerate(e) if k
        )
        cs = c.to_literal() if isinstance(c, FieldElem) else str(c)
        if not mono:
            parts.append(f"({cs})")
        elif cs == "1":
            parts.append(mono)
        else:
            parts.append(f"({cs})*{mono}")
    return "+".join(parts)


# --- reduction and bases --------------------------------------------------------------


def reduce_poly(f: GradedPoly) -> GradedPoly:
    """Rewrite z_i^{q_i} -> z_2^{q_2} - mu_i z_1^{q_1} (i >= 3) until exponents are below q_i."""
    alg = f.alg
    q = alg.grading.weights
    s = alg.weights.t
    out: dict = {}
    work = list(f.terms.items())
    while work:
        e, c = work.pop()
        hit = next((i for i in range(2, s) if e[i] >= q[i]), None)
        if hit is None:
            _acc(out, e, c)
            continue
        base = list(e)
        base[hit] -= q[hit]
        e2 = list(base)
        e2[1] += q[1]
        e1 = list(base)
        e1[0] += q[0]
        work.append((tuple(e2), c))
        work.append((tuple(e1), -(alg.params.values[hit - 2] * c)))
    return GradedPoly(alg, out)


def graded_dim(p: WeightSeq, x: GroupElement) -> int:
    if x.parent != p:
        raise GroupError("element does not belong to the given weight sequence")
    return mult(x)


def monomial_basis(p: WeightSeq, x: GroupElement) -> list[Exponents]:
    """Basis monomials x1^{a p1 + l1} x2^{b p2 + l2} prod x_i^{l_i}, a + b = l."""
    if x.parent != p:
        raise GroupError("element does not belong to the given weight sequence")
    y = pad_element(x)
    w = y.parent.weights
    l = y.shift
    out = []
    for a in range(l, -1, -1):
        b = l - a
        e = list(y.residues)
        e[0] += a * w[0]
        e[1] += b * w[1]
        out.append(tuple(e))
    return out


# --- compatible homomorphisms ---------------------------------------------------------


@dataclass(frozen=True)
class CompatibleHom:
    pi: StringHom
    source: CoordinateAlgebra
    target: CoordinateAlgebra
    images: tuple = field(default=())

    def __post_init__(self) -> None:
        if self.source.weights != self.pi.domain or self.target.weights != self.pi.codomain:
            raise AlgebraError("algebras do not match the group homomorphism")
        if len(self.images) != self.source.ngens:
            raise AlgebraError(f"need {self.source.ngens} generator images")
        for im in self.images:
            if im.alg.weights != self.target.weights:
                raise AlgebraError("image polynomial lives in the wrong algebra")

    @property
    def numeric(self) -> bool:
        return self.source.numeric or self.target.numeric or any(
            _is_numeric(c) for im in self.images for c in im.terms.values()
        )

    def apply_monomial(self, e: Exponents) -> GradedPoly:
        out = self.target.const(self.target.one())
        for im, k in zip(self.images, e):
            if k:
                out = out * im**k
        return reduce_poly(out)

    def generator_degree(self, i: int) -> GroupElement:
        """Target degree required for the image of generator i (1-based)."""
        p = self.pi.domain
        x = p.x(i) if i <= p.t else p.c()
        return pad_element(eval_hom(self.pi, x))

    def as_numeric(self) -> CompatibleHom:
        src = self.source.as_numeric()
        tgt = self.target.as_numeric()
        ims = tuple(GradedPoly(tgt, {e: to_numeric(c) for e, c in im.terms.items()}) for im in self.images)
        return CompatibleHom(self.pi, src, tgt, ims)


def check_compatible(ch: CompatibleHom) -> bool:
    for i, im in enumerate(ch.images, start=1):
        if im.is_zero():
            continue
        if im.homogeneous_degree() != ch.generator_degree(i):
            return False
    return True


def check_relations(ch: CompatibleHom, domain_params: Optional[ParamSeq] = None) -> bool:
    ch = _numeric_if_needed(ch)
    params = domain_params if domain_params is not None else ch.source.params
    p = ch.source.grading.weights
    phi = ch.images
    for i in range(3, ch.source.weights.t + 1):
        lam = params.lam(i)
        rel = phi[i - 1] ** p[i - 1] - phi[1] ** p[1] + phi[0] ** p[0] * lam
        if not reduce_poly(rel).is_zero():
            return False
    return True


def _rank(rows: list[list]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        pivot = None
        best = None
        for r in range(rank, len(rows)):
            c = rows[r][col]
            if coeff_is_zero(c):
                continue
            if not _is_numeric(c):
                pivot = r
                break
            if best is None or abs(c) > best:
                best, pivot = abs(c), r
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(len(rows)):
            if r != rank and not coeff_is_zero(rows[r][col]):
                factor = rows[r][col] / pv
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def preimage(pi: StringHom, z: GroupElement) -> list[GroupElement]:
    """All x in the domain with pi(x) = z (the image of c must have nonzero degree)."""
    p = pi.domain
    dc = pi.c_image.delta
    if dc == 0:
        raise GroupError("image of c has degree zero")
    out = []
    for res in residue_vectors(p):
        x0 = GroupElement(p, tuple(res), 0)
        e0 = eval_hom(pi, x0)
        num = z.delta - e0.delta
        if num % dc:
            continue
        x = GroupElement(p, tuple(res), num // dc)
        if eval_hom(pi, x) == z:
            out.append(x)
    return out


def check_surjective_small_degree(ch: CompatibleHom) -> bool:
    """Images of the slice over d (cyclic or trivial kernel) or 2d (Klein) must span S_d resp. S_2d."""
    ch = _numeric_if_needed(ch)
    ker = kernel(ch.pi)
    if ker.kind in (TRIVIAL, CYCLIC):
        k = 1
    elif ker.kind == KLEIN:
        k = 2
    else:
        raise AlgebraError(f"kernel of kind {ker.kind!r} is not cyclic or Klein")
    q = ch.pi.codomain
    target_deg = k * q.c()
    basis = monomial_basis(q, target_deg)
    index = {e: n for n, e in enumerate(basis)}
    rows = []
    zero = to_numeric(0) if ch.numeric else FieldElem.rational(0)
    for x in preimage(ch.pi, target_deg):
        for mono in monomial_basis(ch.pi.domain, x):
            img = ch.apply_monomial(mono)
            row = [zero] * len(basis)
            for e, c in img.terms.items():
                if e not in index:
                    return False
                row[index[e]] = c
            rows.append(row)
    return _rank(rows) == len(basis)


# --- parsing polynomials --------------------------------------------------------------


def parse_poly(text: str, alg: CoordinateAlgebra, names: Optional[dict] = None) -> GradedPoly:
    """Parse e.g. '-nu*z1^2+z2^2' with z-variables, sqrt(...) and named constants."""
    names = dict(names or {})
    src = text.strip().replace("^", "**")
    try:
        tree = ast.parse(src, mode="eval")
    except SyntaxError as exc:
        raise LiteralSyntaxError(f"cannot parse polynomial {text!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return FieldElem.rational(node.value)
        if isinstance(node, ast.Name):
            if node.id.startswith("z") and node.id[1:].isdigit():
                i = int(node.id[1:])
                if not 1 <= i <= alg.ngens:
                    raise LiteralSyntaxError(f"variable {node.id} out of range")
                return alg.gen(i)
            if node.id in names:
                return names[node.id]
            raise LiteralSyntaxError(f"unknown name {node.id!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp):
            a = ev(node.left)
            if isinstance(node.op, ast.Pow):
                if not (isinstance(node.right, ast.Constant) and isinstance(node.right.value, int)):
                    raise LiteralSyntaxError("exponents must be integer constants")
                return a ** node.right.value
            b = ev(node.right)
            if isinstance(node.op, ast.Add):
                return a + b
            if isinstance(node.op, ast.Sub):
                return a - b
            if isinstance(node.op, ast.Mult):
                if isinstance(a, FieldElem) and isinstance(b, GradedPoly):
                    return b * a
                return a * b
            if isinstance(node.op, ast.Div):
                if isinstance(b, GradedPoly):
                    raise LiteralSyntaxError("cannot divide by a polynomial")
                return a * (1 / b) if isinstance(a, GradedPoly) else a / b
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and node.func.id == "sqrt" and len(node.args) == 1:
            v = ev(node.args[0])
            if isinstance(v, GradedPoly):
                raise LiteralSyntaxError("sqrt of a polynomial")
            return sqrt(v)
        raise LiteralSyntaxError(f"unsupported syntax in polynomial {text!r}")

    out = ev(tree)
    return out if isinstance(out, GradedPoly) else alg.const(out)


# --- constructions --------------------------------------------------------------------


def nth_roots(value, n: int) -> list:
    """All n-th roots, principal first; exact for n <= 2 when the tower allows, numeric otherwise."""
    if n == 1:
        return [value]
    if n == 2 and not _is_numeric(value):
        try:
            r = sqrt(value)
            return [r, -r]
        except TowerDepthExceeded:
            pass
    ctx = numeric_context()
    v = to_numeric(value)
    r = ctx.root(v, n)
    return [r * ctx.expjpi(ctx.mpf(2 * k) / n) for k in range(n)]


def principal_root(value, n: int):
    return nth_roots(value, n)[0]


def _numeric_if_needed(ch: CompatibleHom) -> CompatibleHom:
    return ch.as_numeric() if ch.numeric else ch


def _exact(v) -> bool:
    return not _is_numeric(v)


def _coerce_params(values: Sequence) -> tuple:
    if all(_exact(v) for v in values):
        return tuple(values)
    return tuple(to_numeric(v) for v in values)


def _poly(alg: CoordinateAlgebra, spec: dict) -> GradedPoly:
    """spec maps 1-based generator tuples (with repetition) to coefficients."""
    out = alg.zero()
    for gens, c in spec.items():
        e = [0] * alg.ngens
        for g in gens:
            e[g - 1] += 1
        out = out + alg.monomial(tuple(e), c)
    return out


def _build(pi: StringHom, lam: ParamSeq, mu_values: Sequence, images: Sequence[dict]) -> tuple[ParamSeq, CompatibleHom]:
    coeffs = [c for spec in images for c in spec.values()]
    numeric = lam.numeric or not all(_exact(v) for v in list(mu_values) + coeffs)
    if numeric:
        lam = lam.as_numeric()
        mu_values = [to_numeric(v) for v in mu_values]
        images = [{k: to_numeric(c) for k, c in spec.items()} for spec in images]
    mu = ParamSeq(pi.codomain, tuple(mu_values))
    src = CoordinateAlgebra(pi.domain, lam, numeric)
    tgt = CoordinateAlgebra(pi.codomain, mu, numeric)
    ims = tuple(_poly(tgt, spec) for spec in images)
    return mu, CompatibleHom(pi, src, tgt, ims)


def construct_cyclic_phi(p: WeightSeq, lam: ParamSeq, H: FiniteSubgroup) -> tuple[WeightSeq, ParamSeq, CompatibleHom]:
    """An algebra map S(p; lam) -> S(q; mu) compatible with the canonical hom with kernel H."""
    if H.kind != CYCLIC:
        raise AlgebraError("construct_cyclic_phi needs a cyclic subgroup")
    if lam.parent != p or H.parent != p:
        raise AlgebraError("parameters or subgroup belong to another weight sequence")
    n = H.n
    i, j = H.indices
    pi = canonical_hom(p, H)
    q = pi.codomain
    one = FieldElem.rational(1)
    if p.t <= 2:
        # padded codomain: z1 carries the first remaining weight, z2 has degree d
        if p[0] > n and p[1] > n:
            imgs = [{(1,): one}, {(2,): one}]
        elif p[0] > n:
            imgs = [{(1,): one}, {(2,): one}]
        elif p[1] > n:
            imgs = [{(2,): one}, {(1,): one}]
        else:
            imgs = [{(1,): one, (2,): one}, {(1,): one, (2,): -one}]
        mu, ch = _build(pi, lam, (), imgs)
        return q, mu, ch
    if (i, j) == (1, 2) and p[0] > n and p[1] > n:
        if q.t != 2 + n * (p.t - 2):
            raise UnsupportedCase("weight-one entries among x_3..x_t are not supported")
        mu_values: list = []
        for k in range(3, p.t + 1):
            roots = nth_roots(lam.lam(k), n)
            if k == 3:
                # lambda_3 = 1 and the principal root is 1
                roots[0] = one if _exact(roots[0]) else to_numeric(1)
            mu_values += roots
        imgs: list[dict] = [{(1,): one}, {(2,): one}]
        for k in range(3, p.t + 1):
            first = 3 + (k - 3) * n
            imgs.append({tuple(range(first, first + n)): one})
        mu, ch = _build(pi, lam, mu_values, imgs)
        return q, mu, ch
    if p.weights == (2, 2, 2, 2) and (i, j, n) == (1, 2, 2):
        mu, ch = example_phi(lam.lam(4))
        return ch.pi.codomain, mu, ch
    raise UnsupportedCase(f"no construction implemented for kernel {H.describe()} on {p}")


def example_hom() -> StringHom:
    """x1, x2 -> d, x3 -> z1+z2, x4 -> z3+z4 on L(2,2,2,2)."""
    p = WeightSeq((2, 2, 2, 2))
    d = p.c()
    return StringHom.from_images(p, p, [d, d, p.element([1, 1, 0, 0]), p.element([0, 0, 1, 1])])


def example_phi(lam, nu_scale=2) -> tuple[ParamSeq, CompatibleHom]:
    """phi_12 with nu = (sqrt(lam)+1)/(sqrt(lam)-1) and mu = nu^2."""
    lam = FieldElem.coerce(lam) if isinstance(lam, (int, Fraction)) else lam
    s = principal_root(lam, 2)
    nu = (s + 1) / (s - 1)
    mu = nu * nu
    pi = example_hom()
    p = pi.domain
    imgs = [
        {(1, 1): -nu, (2, 2): 1},
        {(1, 1): nu, (2, 2): 1},
        {(1, 2): nu_scale * principal_root(nu, 2)},
        {(3, 4): principal_root(1 - lam, 2)},
    ]
    return _build(pi, ParamSeq.normalized(p, [lam]), [1, mu], imgs)


GAMMA_ROWS = ("lambda", "1/lambda", "1-lambda", "1/(1-lambda)", "lambda/(lambda-1)", "(lambda-1)/lambda")

# permutation of generators and coefficient recipes, one per row
_GAMMA_PERMS = {
    "lambda": (1, 2, 3, 4),
    "1/lambda": (2, 1, 3, 4),
    "1-lambda": (4, 2, 3, 1),
    "1/(1-lambda)": (2, 3, 1, 4),
    "lambda/(lambda-1)": (3, 2, 1, 4),
    "(lambda-1)/lambda": (2, 4, 3, 1),
}


def _gamma_coeffs(row: str, lam) -> tuple:
    r = lambda v: principal_root(v, 2)  # noqa: E731
    one = FieldElem.rational(1) if _exact(lam) else to_numeric(1)
    return {
        "lambda": (one, one, one, one),
        "1/lambda": (one, one, r(-one), r(-lam)),
        "1-lambda": (one, r(lam), r(lam - 1), r(lam * (1 - lam))),
        "1/(1-lambda)": (one, one, r(-one), r(1 - lam)),
        "lambda/(lambda-1)": (one, one, one, r(1 - lam)),
        "(lambda-1)/lambda": (one, r(lam), r(lam - 1), r(1 - lam)),
    }[row]


def gamma_value(row: str, lam):
    one = 1
    return {
        "lambda": lam,
        "1/lambda": one / lam,
        "1-lambda": one - lam,
        "1/(1-lambda)": one / (one - lam),
        "lambda/(lambda-1)": lam / (lam - one),
        "(lambda-1)/lambda": (lam - one) / lam,
    }[row]


def gamma_phi(lam, row: str) -> tuple[ParamSeq, CompatibleHom]:
    """Automorphism-type map S(2,2,2,2; lam) -> S(2,2,2,2; mu) for mu in the six-element orbit."""
    if row not in _GAMMA_PERMS:
        raise AlgebraError(f"unknown orbit row {row!r}")
    lam = FieldElem.coerce(lam) if isinstance(lam, (int, Fraction)) else lam
    p = WeightSeq((2, 2, 2, 2))
    perm = _GAMMA_PERMS[row]
    pi = StringHom.from_images(p, p, [p.x(k) for k in perm])
    coeffs = _gamma_coeffs(row, lam)
    imgs = [{(k,): c} for k, c in zip(perm, coeffs)]
    return _build(pi, ParamSeq.normalized(p, [lam]), [1, gamma_value(row, lam)], imgs)


def transposition_hom(p: WeightSeq, i: int, j: int) -> StringHom:
    w = list(p.weights)
    w[i - 1], w[j - 1] = w[j - 1], w[i - 1]
    q = WeightSeq(tuple(w))
    target = {i: j, j: i}
    return StringHom.from_images(p, q, [q.x(target.get(k, k)) for k in range(1, p.t + 1)])


def permute_parameters(p: WeightSeq, lam: ParamSeq, i: int, j: int) -> tuple[ParamSeq, CompatibleHom]:
    """Parameters and algebra map compatible with the transposition (i, j)."""
    if p.t < 3:
        raise AlgebraError("transpositions need t >= 3")
    if not 1 <= i < j <= p.t:
        raise AlgebraError(f"need 1 <= i < j <= t, got ({i},{j})")
    if lam.parent != p:
        raise AlgebraError("parameters belong to another weight sequence")
    pi = transposition_hom(p, i, j)
    q = pi.codomain
    t = p.t
    L = {k: lam.lam(k) for k in range(3, t + 1)}
    one = 1
    # mu_tilde over indices 3..t, target generator and coefficient per domain generator
    mt: dict = {}
    gen = {k: k for k in range(1, t + 1)}
    coef: dict = {k: one for k in range(1, t + 1)}
    S = {i, j} & {1, 2}
    if not S:
        mt = dict(L)
        mt[i], mt[j] = L[j], L[i]
        gen[i], gen[j] = j, i
    elif S == {1, 2}:
        mt = {k: one / L[k] for k in L}
        gen[1], gen[2] = 2, 1
        for k in L:
            coef[k] = principal_root(-L[k], p[k - 1])
    elif S == {2}:
        a = j
        mt = {k: L[k] - L[a] for k in L if k != a}
        mt[a] = -L[a]
        gen[2], gen[a] = a, 2
    else:
        a = j
        mt = {k: L[k] * L[a] / (L[k] - L[a]) for k in L if k != a}
        mt[a] = L[a]
        gen[1], gen[a] = a, 1
        coef[1] = 1 / principal_root(L[a], p[0])
        coef[a] = principal_root(L[a], p[a - 1])
        for k in L:
            if k != a:
                coef[k] = principal_root((L[a] - L[k]) / L[a], p[k - 1])
    # renormalize: z1 -> mu_tilde_3^(-1/q1) z1
    scale = 1 / principal_root(mt[3], q[0])
    mu_values = [mt[k] / mt[3] for k in range(3, t + 1)]
    mu_values[0] = 1
    imgs = []
    for k in range(1, t + 1):
        c = coef[k] * scale if gen[k] == 1 else coef[k]
        imgs.append({(gen[k],): c})
    mu, ch = _build(pi, lam, mu_values, imgs)
    return mu, ch
