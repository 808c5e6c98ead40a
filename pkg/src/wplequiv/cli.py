"""Command-line interface; every command prints one JSON document (or DOT text)."""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .algebra import (
    AlgebraError,
    CompatibleHom,
    CoordinateAlgebra,
    ParamSeq,
    check_compatible,
    check_relations,
    check_surjective_small_degree,
    parse_poly,
)
from .field import FieldElem, FieldError, parse_literal
from .graph import DEFAULT_PARAM_DEPTH, DEFAULT_WILD_DEPTH, build_graph, to_dot, to_json
from .homs import (
    StringHom,
    canonical_hom,
    compose,
    decompose,
    derive_codomain,
    enumerate_admissible,
    is_admissible_structural,
    is_admissible_window,
    kernel,
    kernel_orders_multiply,
)
from .string_group import (
    GroupError,
    WeightSeq,
    classify_type,
    delta,
    dualizing_omega,
    element_from_raw,
    torsion_subgroup,
)
from .subgroups import (
    FiniteSubgroup,
    enumerate_kernel_candidates,
    subgroup_from_spec,
    subgroup_generated,
)
from .tubular import DegenerateParameter, TubularError, gamma, tubular_edge_check

SCHEMA = "wpl-equiv/1"

DOMAIN_ERRORS = (GroupError, AlgebraError, FieldError, DegenerateParameter, TubularError)


class UsageError(Exception):
    pass


@dataclass
class CommandResult:
    status: str
    payload: object = None
    diagnostics: list[str] = field(default_factory=list)
    exit_code: int = 0
    text: Optional[str] = None  # raw output for non-JSON formats

    def render(self) -> str:
        if self.status != "ok":
            return ""
        if self.text is not None:
            return self.text
        doc = {"schema": SCHEMA, "result": self.payload}
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message)


# --- argument syntax ------------------------------------------------------------------


def parse_weights(text: str) -> WeightSeq:
    text = text.strip()
    if text in ("", "()"):
        return WeightSeq(())
    try:
        return WeightSeq(tuple(int(v) for v in text.strip("()").split(",")))
    except (ValueError, GroupError):
        raise UsageError(f"bad weight sequence {text!r}; expected e.g. 2,3,4") from None


def parse_ints(text: str) -> list[int]:
    try:
        return [int(v) for v in text.split(",")] if text.strip() else []
    except ValueError:
        raise UsageError(f"bad integer list {text!r}") from None


_TERM = re.compile(r"([+-]?)(\d*)(x(\d+)|c)")


def parse_linear(p: WeightSeq, text: str):
    """Parse a combination such as 'x1-2x3' or '2x1-c' into an element of L(p)."""
    s = text.replace(" ", "")
    if not s:
        raise UsageError("empty generator")
    coeffs = [0] * p.t
    shift = 0
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse generator {text!r}")
        if pos > 0 and not m.group(1):
            raise UsageError(f"missing sign in generator {text!r}")
        k = int(m.group(2)) if m.group(2) else 1
        if m.group(1) == "-":
            k = -k
        if m.group(3) == "c":
            shift += k
        else:
            i = int(m.group(4))
            if not 1 <= i <= p.t:
                raise GroupError(f"generator x{i} out of range for {p}")
            coeffs[i - 1] += k
        pos = m.end()
    return element_from_raw(p, coeffs, shift)


def parse_kernel(p: WeightSeq, text: str) -> FiniteSubgroup:
    """'cyclic:i,j,n', 'klein:i,j,k', 'trivial' or generators like 'x1-2x3' / 'x1-x2,x1-x3'."""
    text = text.strip()
    if text in ("trivial", "0"):
        return subgroup_from_spec(p, "trivial", ())
    if ":" in text:
        kind, _, rest = text.partition(":")
        if kind not in ("cyclic", "klein"):
            raise UsageError(f"unknown kernel kind {kind!r}")
        idx = parse_ints(rest)
        if len(idx) != 3:
            raise UsageError(f"{kind} kernel needs three integers, e.g. {kind}:1,2,2")
        return subgroup_from_spec(p, kind, idx)
    return subgroup_generated(p, [parse_linear(p, g) for g in text.split(",")])


def load_json(text: str):
    """Inline JSON, or the name of a file holding JSON."""
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            text = fh.read()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON: {exc.msg}") from None


def hom_from_json(doc) -> StringHom:
    try:
        dom = WeightSeq(tuple(doc["domain"]))
        cod = WeightSeq(tuple(doc["codomain"]))
        matrix = [list(map(int, row)) for row in doc["matrix"]]
        c_shift = doc.get("c_shift")
        c_image = doc.get("c_image")
        if c_image is not None and c_shift is None:
            if any(c_image.get("residues", [])):
                raise UsageError("c_image must be a multiple of the canonical element")
            c_shift = c_image["shift"]
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise UsageError(f"homomorphism JSON needs domain, codomain and matrix ({exc})") from None
    return StringHom.from_matrix(dom, cod, matrix, c_shift)


def parse_param_list(text: Optional[str]) -> list[FieldElem]:
    if text is None or not text.strip():
        return []
    return [parse_literal(v) for v in text.split(",")]


def parse_typed(text: str) -> tuple[WeightSeq, Optional[FieldElem]]:
    """'2,2,2,2;-1' or '4,4,2'."""
    w, sep, lam = text.partition(";")
    return parse_weights(w), (parse_literal(lam) if sep else None)


# --- commands -------------------------------------------------------------------------


def _element_json(x) -> dict:
    return {**x.to_json(), "text": str(x), "delta": delta(x), "mult": x.mult, "mu": x.mu}


def cmd_normal_form(a) -> object:
    p = parse_weights(a.p)
    coeffs = parse_ints(a.coeffs)
    if len(coeffs) != p.t:
        raise UsageError(f"--coeffs needs {p.t} entries")
    return _element_json(element_from_raw(p, coeffs, a.shift))


def cmd_torsion(a) -> object:
    p = parse_weights(a.p)
    els = torsion_subgroup(p)
    return {"weights": list(p.weights), "order": len(els), "elements": [_element_json(e) for e in els]}


def cmd_classify(a) -> object:
    p = parse_weights(a.p)
    return {"weights": list(p.weights), "type": classify_type(p).value, "delta_omega": delta(dualizing_omega(p))}


def cmd_subgroups(a) -> object:
    p = parse_weights(a.p)
    return {"weights": list(p.weights), "subgroups": [h.to_json() for h in enumerate_kernel_candidates(p)]}


def _record(H: FiniteSubgroup, h: StringHom) -> dict:
    return {
        "kernel": H.describe(),
        "kernel_kind": H.kind,
        "kernel_order": H.order,
        "codomain": list(h.codomain.weights),
        "images": h.describe_images(),
        "hom": h.to_json(),
    }


def cmd_derive(a) -> object:
    p = parse_weights(a.p)
    H = parse_kernel(p, a.kernel)
    return _record(H, canonical_hom(p, H))


def cmd_check_admissible(a) -> object:
    h = hom_from_json(load_json(a.hom))
    structural = is_admissible_structural(h)
    window = is_admissible_window(h)
    out = {"structural": structural, "window": window, "agree": structural == window}
    try:
        out["kernel"] = kernel(h).describe()
    except GroupError as exc:
        out["kernel"] = None
        out["kernel_error"] = type(exc).__name__
    return out


def cmd_enumerate(a) -> object:
    p = parse_weights(a.p)
    recs = enumerate_admissible(p)
    return {
        "weights": list(p.weights),
        "records": [{**r.to_json(), "codomain_multiset": sorted(r.codomain.weights)} for r in recs],
        "nontrivial": sum(1 for r in recs if r.kernel.order > 1),
    }


def cmd_compose(a) -> object:
    h1 = hom_from_json(load_json(a.hom1))
    h2 = hom_from_json(load_json(a.hom2))
    h = compose(h2, h1)
    return {
        "composite": h.to_json(),
        "images": h.describe_images(),
        "admissible": is_admissible_structural(h),
        "kernel_orders_multiply": kernel_orders_multiply(h2, h1),
    }


def cmd_decompose(a) -> object:
    p = parse_weights(a.p)
    H = parse_kernel(p, a.kernel)
    d = decompose(p, H)
    return {
        "middle": list(d.middle.weights),
        "first": {"kernel": kernel(d.first).describe(), "images": d.first.describe_images(), "hom": d.first.to_json()},
        "second": {"kernel": kernel(d.second).describe(), "images": d.second.describe_images(), "hom": d.second.to_json()},
        "composite_images": compose(d.second, d.first).describe_images(),
    }


def cmd_check_phi(a) -> object:
    doc = load_json(a.phi)
    if not isinstance(doc, dict) or "hom" not in doc or "images" not in doc:
        raise UsageError("phi JSON needs 'hom' and 'images'")
    pi = hom_from_json(doc["hom"])
    lam = ParamSeq.normalized(pi.domain, parse_param_list(a.lam))
    mu_src = doc.get("mu", [])
    mu = ParamSeq.normalized(pi.codomain, [parse_literal(str(v)) for v in mu_src])
    src = CoordinateAlgebra(pi.domain, lam)
    tgt = CoordinateAlgebra(pi.codomain, mu)
    if len(doc["images"]) != src.ngens:
        raise UsageError(f"phi needs {src.ngens} images")
    ims = tuple(parse_poly(str(s), tgt) for s in doc["images"])
    ch = CompatibleHom(pi, src, tgt, ims)
    compatible = check_compatible(ch)
    out = {"compatible": compatible, "relations": None, "surjective_small_degree": None}
    if compatible:
        out["relations"] = check_relations(ch)
        out["surjective_small_degree"] = check_surjective_small_degree(ch)
    out["mode"] = "numeric" if ch.numeric else "exact"
    return out


def cmd_tubular_gamma(a) -> object:
    o = gamma(parse_literal(a.lam))
    return {"lambda": o.value.to_literal(), "orbit": o.literals(), "representative": o.literals()[0]}


def cmd_tubular_edge(a) -> object:
    p, lam = parse_typed(a.src)
    q, mu = parse_typed(a.dst)
    H = parse_kernel(p, a.kernel)
    return {
        "source": a.src,
        "target": a.dst,
        "kernel": H.describe(),
        "codomain_type": list(derive_codomain(p, H).type_key()),
        "edge": tubular_edge_check(p, lam, H, q, mu),
    }


def read_seeds(path: str) -> list[tuple[WeightSeq, Optional[FieldElem]]]:
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read seeds file: {exc.strerror}") from None
    seeds = []
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            seeds.append(parse_typed(line))
    return seeds


def cmd_graph(a):
    g = build_graph(read_seeds(a.seeds), param_depth=a.param_depth, wild_depth=a.wild_depth)
    if a.format == "dot":
        return CommandResult("ok", text=to_dot(g))
    return to_json(g)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="wplequiv", description="Admissible homomorphisms and equivariant relations of weighted projective lines.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_p(name: str, fn, help_: str):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("-p", required=True, help="weight sequence, e.g. 2,3,4")
        sp.set_defaults(fn=fn)
        return sp

    sp = with_p("normal-form", cmd_normal_form, "normal form of sum(l_i x_i) + l c")
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--shift", type=int, default=0)
    with_p("torsion", cmd_torsion, "torsion subgroup")
    with_p("classify", cmd_classify, "domestic / tubular / wild")
    with_p("subgroups", cmd_subgroups, "trivial, cyclic and Klein kernel candidates")
    sp = with_p("derive", cmd_derive, "codomain and canonical homomorphism for a kernel")
    sp.add_argument("--kernel", required=True)
    sp = sub.add_parser("check-admissible", help="run both admissibility checkers")
    sp.add_argument("--hom", required=True)
    sp.set_defaults(fn=cmd_check_admissible)
    with_p("enumerate", cmd_enumerate, "all admissible homomorphisms up to codomain permutation")
    sp = sub.add_parser("compose", help="compose hom2 after hom1")
    sp.add_argument("--hom1", required=True)
    sp.add_argument("--hom2", required=True)
    sp.set_defaults(fn=cmd_compose)
    sp = with_p("decompose", cmd_decompose, "split an admissible homomorphism in two")
    sp.add_argument("--kernel", required=True)
    sp = sub.add_parser("check-phi", help="verify an algebra map against its group homomorphism")
    sp.add_argument("--phi", required=True)
    sp.add_argument("--lambda", dest="lam", default=None, help="domain parameters lambda_4,...,lambda_t")
    sp.set_defaults(fn=cmd_check_phi)

    tub = sub.add_parser("tubular", help="tubular parameter tools")
    tsub = tub.add_subparsers(dest="tubular_command", required=True, parser_class=_Parser)
    sp = tsub.add_parser("gamma", help="the six-element orbit of lambda")
    sp.add_argument("--lambda", dest="lam", required=True)
    sp.set_defaults(fn=cmd_tubular_gamma)
    sp = tsub.add_parser("edge", help="check a row of the tubular relation table")
    sp.add_argument("--src", required=True)
    sp.add_argument("--kernel", required=True)
    sp.add_argument("--dst", required=True)
    sp.set_defaults(fn=cmd_tubular_edge)

    sp = sub.add_parser("graph", help="closure of seed types under equivariant relations")
    sp.add_argument("--seeds", required=True, help="file with one type per line, e.g. 4,4,2 or 2,2,2,2;-1")
    sp.add_argument("--format", choices=("dot", "json"), default="json")
    sp.add_argument("--param-depth", type=int, default=DEFAULT_PARAM_DEPTH)
    sp.add_argument("--wild-depth", type=int, default=DEFAULT_WILD_DEPTH)
    sp.set_defaults(fn=cmd_graph)
    return ap


def run(argv: Sequence[str]) -> CommandResult:
    try:
        args = build_parser().parse_args(list(argv))
        out = args.fn(args)
    except UsageError as exc:
        return CommandResult("error", diagnostics=[f"usage: {exc}"], exit_code=2)
    except DOMAIN_ERRORS as exc:
        return CommandResult("error", diagnostics=[f"{type(exc).__name__}: {exc}"], exit_code=1)
    except ZeroDivisionError as exc:
        return CommandResult("error", diagnostics=[f"ZeroDivisionError: {exc}"], exit_code=1)
    if isinstance(out, CommandResult):
        return out
    return CommandResult("ok", out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    res = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(res.render())
    for d in res.diagnostics:
        sys.stderr.write(d + "\n")
    return res.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
