"""Homomorphisms between string groups and the admissibility machinery.

A homomorphism L(p) -> L(q) is stored as the normal forms of the images of
x_1..x_t (the rows of its matrix) together with the image of c.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .string_group import (
    GroupElement,
    GroupError,
    WeightSeq,
    classify_type,
    delta,
    dualizing_omega,
    element_from_raw,
    format_element,
    mu,
    mult,
    residue_vectors,
    torsion_subgroup,
)
from .subgroups import (
    CYCLIC,
    KLEIN,
    TRIVIAL,
    FiniteSubgroup,
    enumerate_kernel_candidates,
    product_split,
    recognize,
)


class InfiniteKernel(GroupError):
    pass


class NoSplit(GroupError):
    pass


class NotWellDefined(GroupError):
    pass


@dataclass(frozen=True)
class StringHom:
    domain: WeightSeq
    codomain: WeightSeq
    rows: tuple[GroupElement, ...]
    c_image: GroupElement

    @classmethod
    def from_images(
        cls,
        domain: WeightSeq,
        codomain: WeightSeq,
        images: Sequence[GroupElement],
        c_image: Optional[GroupElement] = None,
    ) -> StringHom:
        images = tuple(images)
        if len(images) != domain.t:
            raise GroupError(f"need {domain.t} generator images, got {len(images)}")
        for im in images:
            if im.parent != codomain:
                raise GroupError("image does not lie in the codomain")
        if domain.t:
            cs = {w * im for w, im in zip(domain.weights, images)}
            if len(cs) != 1:
                raise NotWellDefined("p_i * image(x_i) differ; the assignment is not a homomorphism")
            implied = cs.pop()
            if c_image is not None and c_image != implied:
                raise NotWellDefined("given image of c disagrees with p_i * image(x_i)")
            c_image = implied
        elif c_image is None:
            raise GroupError("a homomorphism out of L() needs the image of c")
        return cls(domain, codomain, images, c_image)

    @classmethod
    def from_matrix(
        cls, domain: WeightSeq, codomain: WeightSeq, matrix: Sequence[Sequence[int]], c_shift: Optional[int] = None
    ) -> StringHom:
        """Rows are [a_i1, ..., a_is, a_i,s+1]; entries are re-normalized."""
        images = []
        for row in matrix:
            if len(row) != codomain.t + 1:
                raise GroupError(f"matrix rows need {codomain.t + 1} entries")
            images.append(element_from_raw(codomain, row[:-1], row[-1]))
        c_image = None if c_shift is None else codomain.element([0] * codomain.t, c_shift)
        return cls.from_images(domain, codomain, images, c_image)

    @classmethod
    def identity(cls, p: WeightSeq) -> StringHom:
        return cls.from_images(p, p, [p.x(i) for i in range(1, p.t + 1)], p.c())

    @property
    def matrix(self) -> list[list[int]]:
        return [list(r.residues) + [r.shift] for r in self.rows]

    def __call__(self, x: GroupElement) -> GroupElement:
        return eval_hom(self, x)

    def to_json(self) -> dict:
        return {
            "domain": list(self.domain.weights),
            "codomain": list(self.codomain.weights),
            "matrix": self.matrix,
            "c_image": self.c_image.to_json(),
        }

    def describe_images(self) -> list[str]:
        return [format_image(r) for r in self.rows]


def format_image(z: GroupElement) -> str:
    return format_element(z, gen="z", cgen="d")


def eval_hom(h: StringHom, x: GroupElement) -> GroupElement:
    if x.parent != h.domain:
        raise GroupError(f"element of {x.parent} fed to a homomorphism out of {h.domain}")
    q = h.codomain
    coeffs = [0] * q.t
    shift = x.shift * h.c_image.shift
    for k, r in enumerate(h.c_image.residues):
        coeffs[k] += x.shift * r
    for l, row in zip(x.residues, h.rows):
        if l:
            for k, r in enumerate(row.residues):
                coeffs[k] += l * r
            shift += l * row.shift
    return element_from_raw(q, coeffs, shift)


def kernel(h: StringHom) -> FiniteSubgroup:
    if delta(h.c_image) == 0:
        raise InfiniteKernel("the image of c has degree zero, so the kernel is infinite")
    zero = h.codomain.zero()
    return recognize(h.domain, [y for y in torsion_subgroup(h.domain) if eval_hom(h, y) == zero])


def is_effective(h: StringHom) -> bool:
    for j, qj in enumerate(h.codomain.weights):
        g = qj
        for row in h.rows:
            g = math.gcd(g, row.residues[j])
        if g != 1:
            return False
    return True


def window_bounds(h: StringHom, kernel_order: int) -> tuple[int, int]:
    b = sum(h.domain.weights) + kernel_order + 2
    return -b, b + 2 * h.codomain.lcm


def is_admissible_window(h: StringHom) -> bool:
    """Check the multiplicity condition on a finite window of shifts.

    On a coset x0 + Zc both sides are eventually quasi-linear in the shift with
    a period dividing lcm(q), so agreement on the window forces agreement on the
    whole group.
    """
    try:
        ker = kernel(h)
    except InfiniteKernel:
        return False
    if not is_effective(h):
        return False
    p, q = h.domain, h.codomain
    lo, hi = window_bounds(h, ker.order)
    ls = np.arange(lo, hi + 1, dtype=np.int64)

    x0 = np.array(list(residue_vectors(p)), dtype=np.int64).reshape(-1, p.t)
    pw = np.array(p.weights, dtype=np.int64)

    # left side: sum over kernel elements h of mult(x0 + h + l c)
    lhs = np.zeros((x0.shape[0], ls.size), dtype=np.int64)
    for e in ker.elements:
        raw = x0 + np.array(e.residues, dtype=np.int64)
        s = (raw // pw).sum(axis=1) + e.shift if p.t else np.full(x0.shape[0], e.shift)
        lhs += np.maximum(s[:, None] + ls[None, :] + 1, 0)

    # right side: mult(pi(x0) + l pi(c))
    qw = np.array(q.weights, dtype=np.int64)
    if p.t:
        rres = np.array([r.residues for r in h.rows], dtype=np.int64).reshape(p.t, q.t)
        rsh = np.array([r.shift for r in h.rows], dtype=np.int64)
        img = x0 @ rres
        base = x0 @ rsh
    else:
        img = np.zeros((1, q.t), dtype=np.int64)
        base = np.zeros(1, dtype=np.int64)
    cres = np.array(h.c_image.residues, dtype=np.int64)
    shift = base[:, None] + ls[None, :] * h.c_image.shift
    for k in range(q.t):
        shift = shift + (img[:, k][:, None] + ls[None, :] * cres[k]) // qw[k]
    rhs = np.maximum(shift + 1, 0)
    return bool(np.array_equal(lhs, rhs))


# --- codomain derivation and canonical homomorphisms ---------------------------------


@dataclass(frozen=True)
class CodomainLayout:
    """Raw codomain (1-entries kept) with the domain index owning each slot."""

    raw: WeightSeq
    owner: tuple[int, ...]  # 1-based domain index per raw slot

    def slots(self, i: int) -> list[int]:
        return [k for k, o in enumerate(self.owner) if o == i]


def derive_layout(p: WeightSeq, H: FiniteSubgroup) -> CodomainLayout:
    weights: list[int] = []
    owner: list[int] = []
    if H.kind == TRIVIAL:
        weights, owner = list(p.weights), list(range(1, p.t + 1))
    elif H.kind == CYCLIC:
        n = H.n
        for i in range(1, p.t + 1):
            if i in H.indices:
                block = [p[i - 1] // n]
            else:
                block = [p[i - 1]] * n
            weights += block
            owner += [i] * len(block)
    elif H.kind == KLEIN:
        for i in range(1, p.t + 1):
            if i in H.indices:
                block = [p[i - 1] // 2] * 2
            else:
                block = [p[i - 1]] * 4
            weights += block
            owner += [i] * len(block)
    else:
        raise GroupError(f"no codomain for a subgroup of kind {H.kind!r}")
    return CodomainLayout(WeightSeq(tuple(weights)), tuple(owner))


def derive_codomain(p: WeightSeq, H: FiniteSubgroup) -> WeightSeq:
    return derive_layout(p, H).raw.stripped()


def strip_element(x: GroupElement, target: WeightSeq, keep: Sequence[int]) -> GroupElement:
    # residues at weight-1 slots are always zero in normal form
    return GroupElement(target, tuple(x.residues[k] for k in keep), x.shift)


def canonical_hom_raw(p: WeightSeq, H: FiniteSubgroup) -> StringHom:
    layout = derive_layout(p, H)
    raw = layout.raw
    images = []
    for i in range(1, p.t + 1):
        slots = layout.slots(i)
        if H.kind == CYCLIC and i in H.indices:
            slots = slots[:1]
        coeffs = [0] * raw.t
        for k in slots:
            coeffs[k] = 1
        images.append(raw.element(coeffs))
    c_image = raw.element([0] * raw.t, H.order) if p.t == 0 else None
    return StringHom.from_images(p, raw, images, c_image)


def strip_codomain(h: StringHom) -> StringHom:
    target, keep = h.codomain.canonicalize()
    return StringHom(
        h.domain,
        target,
        tuple(strip_element(r, target, keep) for r in h.rows),
        strip_element(h.c_image, target, keep),
    )


def strip_domain(h: StringHom) -> StringHom:
    target, keep = h.domain.canonicalize()
    return StringHom(target, h.codomain, tuple(h.rows[k] for k in keep), h.c_image)


def canonical_hom(p: WeightSeq, H: FiniteSubgroup) -> StringHom:
    return strip_codomain(canonical_hom_raw(p, H))


# --- structural comparison ------------------------------------------------------------


def column_signature(h: StringHom) -> tuple:
    """Invariant of h under weight-preserving permutations of codomain generators."""
    cols = Counter()
    for k, w in enumerate(h.codomain.weights):
        if w > 1:
            cols[(w, tuple(r.residues[k] for r in h.rows))] += 1
    shifts = tuple(r.shift for r in h.rows)
    return (h.domain.weights, tuple(sorted(cols.items())), shifts, h.c_image.shift)


def equal_up_to_codomain_permutation(a: StringHom, b: StringHom) -> bool:
    return column_signature(a) == column_signature(b)


def is_admissible_structural(h: StringHom) -> bool:
    try:
        ker = kernel(h)
    except InfiniteKernel:
        return False
    if ker.kind not in (TRIVIAL, CYCLIC, KLEIN):
        return False
    if h.codomain.type_key() != derive_codomain(h.domain, ker).type_key():
        return False
    return equal_up_to_codomain_permutation(h, canonical_hom(h.domain, ker))


# --- composition and decomposition ----------------------------------------------------


def compose(h2: StringHom, h1: StringHom) -> StringHom:
    if h1.codomain != h2.domain:
        raise GroupError(f"cannot compose: {h1.codomain} is not {h2.domain}")
    return StringHom(
        h1.domain,
        h2.codomain,
        tuple(eval_hom(h2, r) for r in h1.rows),
        eval_hom(h2, h1.c_image),
    )


def kernel_orders_multiply(h2: StringHom, h1: StringHom) -> bool:
    return kernel(compose(h2, h1)).order == kernel(h2).order * kernel(h1).order


def image_subgroup(h: StringHom, H: FiniteSubgroup) -> FiniteSubgroup:
    return recognize(h.codomain, [eval_hom(h, e) for e in H.elements])


@dataclass(frozen=True)
class Decomposition:
    middle: WeightSeq
    first: StringHom
    second: StringHom


def decompose(p: WeightSeq, H: FiniteSubgroup) -> Decomposition:
    split = product_split(H)
    if split is None:
        raise NoSplit(f"subgroup {H.describe()} is not a product of two nontrivial coprime factors")
    h1_sub, _ = split
    first = canonical_hom(p, h1_sub)
    r = first.codomain
    second_kernel = image_subgroup(first, H)
    if second_kernel.kind not in (CYCLIC, KLEIN):
        raise GroupError("image of the subgroup has unexpected shape")
    second = canonical_hom(r, second_kernel)
    return Decomposition(r, first, second)


# --- enumeration ----------------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibleRecord:
    kernel: FiniteSubgroup
    codomain: WeightSeq
    hom: StringHom

    def to_json(self) -> dict:
        return {
            "kernel": self.kernel.describe(),
            "kernel_kind": self.kernel.kind,
            "kernel_indices": list(self.kernel.indices),
            "kernel_order": self.kernel.order,
            "codomain": list(self.codomain.weights),
            "images": self.hom.describe_images(),
            "matrix": self.hom.matrix,
        }


def enumerate_admissible(p: WeightSeq) -> list[AdmissibleRecord]:
    out = []
    for H in enumerate_kernel_candidates(p):
        out.append(AdmissibleRecord(H, derive_codomain(p, H), canonical_hom(p, H)))
    return out


def image_of_omega(h: StringHom) -> GroupElement:
    return eval_hom(h, dualizing_omega(h.domain))


# --- invariant checks -----------------------------------------------------------------


def record_violations(rec: AdmissibleRecord) -> list[str]:
    """Return the list of violated structural facts for an admissible record."""
    h, H = rec.hom, rec.kernel
    p, q = h.domain, h.codomain
    bad = []
    if h.c_image != H.order * q.c():
        bad.append("image of c is not |kernel| * d")
    if image_of_omega(h) != dualizing_omega(q):
        bad.append("image of omega is not the dualizing element of the codomain")
    if classify_type(p) != classify_type(q):
        bad.append("type not preserved")
    for e in H.elements:
        if not e.is_zero() and (e.shift != -1 or mu(e) != 2):
            bad.append(f"kernel element {e} does not have shift -1 and two nonzero residues")
    # s counts the codomain generators of weight >= 2
    if H.kind == CYCLIC:
        b = sum(1 for i in H.indices if p[i - 1] > H.n)
        if q.t != H.n * (p.t - 2) + b:
            bad.append("codomain size differs from n(t-2)+b")
        for i, r in enumerate(h.rows, start=1):
            want = (0 if p[i - 1] == H.n else 1) if i in H.indices else H.n
            if mu(r) != want:
                bad.append(f"image of x{i} has {mu(r)} nonzero residues, expected {want}")
    elif H.kind == KLEIN:
        b = sum(1 for i in H.indices if p[i - 1] > 2)
        if q.t != 4 * (p.t - 3) + 2 * b:
            bad.append("codomain size differs from 4(t-3)+2b")
        for i, r in enumerate(h.rows, start=1):
            want = (0 if p[i - 1] == 2 else 2) if i in H.indices else 4
            if mu(r) != want:
                bad.append(f"image of x{i} has {mu(r)} nonzero residues, expected {want}")
    for k in range(q.t):
        col = [r.residues[k] for r in h.rows]
        if sorted(col) != [0] * (len(col) - 1) + [1]:
            bad.append(f"column {k + 1} does not have exactly one nonzero entry equal to 1")
    for r in h.rows:
        if (r.shift != 0) != (not any(r.residues)):
            bad.append("shift entry nonzero does not match zero row")
        if r.shift not in (0, 1, 2):
            bad.append("shift entry outside {0,1,2}")
    if mult(q.c()) != 2:
        bad.append("mult(d) != 2")
    return bad
