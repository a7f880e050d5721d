"""Command-line front end.

Subcommands: ``decompose``, ``enumerate``, ``verify`` and ``inspect``.  Exit
status is 0 on success, 1 on a validation or usage error and 2 when a
verification finds a nonzero residual.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from fractions import Fraction
from typing import Sequence

from . import branching as br
from . import charoracle as co
from . import weylcomb as wc
from .errors import LevelOneError
from .linalg import fmt_fraction
from .rootdata import (
    AffineDatum,
    InvolutionSpec,
    LieType,
    affine_table,
    build_affine_datum,
    build_lprime,
    classify_roots,
    order_two_involutions,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_FAILED = 2


class UsageError(Exception):
    """Raised instead of argparse's own exit so that usage errors exit with 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


# ---------------------------------------------------------------------------
# Argument parsing


def parse_charges(text: str | None) -> list[int] | None:
    """``"q"``, ``"a..b"`` or ``"a:b"`` (inclusive) to a list of charges."""
    if text is None:
        return None
    match = re.fullmatch(r"\s*(-?\d+)\s*(?:(?:\.\.|:)\s*(-?\d+)\s*)?", text)
    if not match:
        raise UsageError(f"cannot parse charge {text!r}")
    lo = int(match.group(1))
    hi = lo if match.group(2) is None else int(match.group(2))
    if lo > hi:
        raise UsageError(f"empty charge range {text!r}")
    return list(range(lo, hi + 1))


def parse_depth(text: str) -> Fraction:
    try:
        depth = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse depth {text!r}") from exc
    if depth < 0:
        raise UsageError("depth must be non-negative")
    return depth


def build_datum(args: argparse.Namespace) -> AffineDatum:
    """Validate ``--algebra``, ``--sigma``/``--node`` and ``--k`` into a datum."""
    t = LieType.parse(args.algebra)
    if args.sigma is not None and args.node is not None:
        raise UsageError("give either --sigma or --node, not both")
    k = args.k
    if t.is_complex:
        k = 2 if k is None else k
        if args.sigma is None and args.node is None:
            return build_affine_datum(t, InvolutionSpec.at_node(t.rank + 1, 0, k))
    if k is None:
        raise UsageError("--k is required")
    if args.sigma is not None:
        sigma = InvolutionSpec.parse(args.sigma, k)
    elif args.node is not None:
        nodes = affine_table(t, k).rank + 1
        sigma = InvolutionSpec.at_node(nodes, args.node, k)
    else:
        raise UsageError("one of --sigma or --node is required")
    return build_affine_datum(t, sigma)


# ---------------------------------------------------------------------------
# Formatting


def format_coeffs(coeffs: Sequence[Sequence[int]]) -> str:
    """``a0*L0 + a1*L1 ...`` per ideal, joined by ``⊗``."""
    return " ⊗ ".join(" + ".join(f"{a}*L{t}" for t, a in enumerate(row)) for row in coeffs)


def label_text(label: br.Label) -> str:
    parts = [label.kind]
    if label.word:
        parts.append(label.word)
    if label.weights:
        parts.append("{" + ", ".join("(" + ",".join(fmt_fraction(x) for x in v) + ")" for v in label.weights) + "}")
    if label.k_index is not None:
        parts.append(f"k_I={label.k_index}")
    return " ".join(parts)


def component_json(c: br.Component, ideals: Sequence[str], mod_delta: bool) -> dict:
    out: dict = {
        "ideal": list(ideals),
        "coeffs": [list(row) for row in c.ideal_coeffs],
        "delta": "0" if mod_delta else fmt_fraction(c.delta_coeff),
        "mult": c.multiplicity,
        "label": c.label.to_json(),
        "hwv": c.hwv_monomial or "",
    }
    if c.center is not None:
        out["center"] = fmt_fraction(c.center)
    return out


def decomposition_json(dec: br.Decomposition, mod_delta: bool, charge: int | None = None) -> dict:
    out: dict = {
        "module": dec.module_id,
        "multiplier": dec.global_multiplier,
        "ideals": list(dec.ideal_names),
        "components": [component_json(c, dec.ideal_names, mod_delta) for c in dec.components],
    }
    if charge is not None:
        out["charge"] = charge
    return out


def decomposition_text(dec: br.Decomposition, mod_delta: bool) -> list[str]:
    head = f"# {dec.module_id}"
    head += f"  multiplier={dec.global_multiplier}  ideals={' ⊗ '.join(dec.ideal_names)}"
    head += f"  components={len(dec.components)}"
    lines = [head]
    for c in dec.components:
        cols = [format_coeffs(c.ideal_coeffs)]
        if c.center is not None:
            cols.append(f"center={fmt_fraction(c.center)}")
        if not mod_delta:
            cols.append(f"delta={fmt_fraction(c.delta_coeff)}")
        cols.append(f"mult={c.multiplicity}")
        cols.append(label_text(c.label))
        lines.append("  ".join(cols))
    return lines


def emit(doc: dict, lines: list[str], fmt: str) -> None:
    if fmt == "json":
        sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write("\n".join(lines) + "\n")


def header(d: AffineDatum) -> dict:
    return {"algebra": str(d.lie_type), "sigma": list(d.sigma.s), "k": d.k, "table": d.table.name}


# ---------------------------------------------------------------------------
# Commands


def _decompositions(d: AffineDatum, rep: str, charges: list[int] | None) -> list[tuple[br.Decomposition, int | None]]:
    reps = ["basic", "vector", "spin"] if rep == "all" else [rep]
    out: list[tuple[br.Decomposition, int | None]] = []
    if d.center_dim:
        if charges is None:
            raise UsageError("k has a center: pass --charge q (or a range a..b)")
        for r in reps:
            for q in charges:
                out.append((br.decompose_hermitian(d, r, q), q))
        return out
    if charges is not None:
        raise UsageError("--charge applies only when k has a center")
    for r in reps:
        if r == "basic":
            out.append((br.decompose_basic_vector(d, 0), None))
        elif r == "vector":
            out.append((br.decompose_basic_vector(d, 1), None))
        else:
            out.extend((dec, None) for dec in br.decompose_spin(d))
    return out


def cmd_decompose(args: argparse.Namespace) -> int:
    d = build_datum(args)
    decs = _decompositions(d, args.rep, parse_charges(args.charge))
    doc = header(d)
    doc["k_type"] = d.k_structure.describe()
    doc["modules"] = [decomposition_json(dec, args.mod_delta, q) for dec, q in decs]
    lines = [f"{d.name}  k = {d.k_structure.describe()}"]
    for dec, _ in decs:
        lines += decomposition_text(dec, args.mod_delta)
    emit(doc, lines, args.format)
    return EXIT_OK


ENUMERATIONS = ("abelian", "cosets", "minuscule", "spin-cosets", "hermitian", "wsigma", "involutions")


def _element_json(w: wc.WeylElement) -> dict:
    """Inversions are listed in simple-root coordinates ``(m_0, ..., m_n)``."""
    return {
        "word": list(w.word),
        "label": w.label(),
        "length": w.length,
        "inversions": [list(m) for m in w.sorted_inversions()],
    }


def _subspace_json(a: wc.AbelianSubspace, hermitian: bool = False) -> dict:
    out = {
        "word": list(a.witness.word),
        "label": a.witness.label(),
        "inversions": [list(m) for m in a.witness.sorted_inversions()],
        "size": a.size,
        "subspace": [[fmt_fraction(x) for x in v] for v in sorted(a.weights)],
    }
    if hermitian:
        out["plus"] = a.plus
        out["minus"] = a.minus
    return out


def cmd_enumerate(args: argparse.Namespace) -> int:
    what = args.what
    if what == "involutions":
        t = LieType.parse(args.algebra)
        specs = order_two_involutions(t)
        items = [{"sigma": list(s.s), "k": s.k} for s in specs]
        doc = {"algebra": str(t), "what": what, "count": len(items), "items": items}
        lines = [f"{t}: {len(items)} involution types"] + [str(s) for s in specs]
        emit(doc, lines, args.format)
        return EXIT_OK
    d = build_datum(args)
    if what == "abelian":
        items = [_subspace_json(a) for a in wc.abelian_subspaces(d)]
    elif what == "hermitian":
        items = [_subspace_json(a, True) for a in wc.hermitian_fundamental_subspaces(d)]
    elif what == "cosets":
        items = [_element_json(w) for w in wc.even_coset_reps(d)]
    elif what == "minuscule":
        items = [_element_json(w) for w in wc.enumerate_minuscule(d)]
    elif what == "spin-cosets":
        items = [_element_json(w) for w in wc.odd_coset_reps(d, build_lprime(d))]
    else:
        ws = wc.w_sigma(d)
        items = [_element_json(ws)]
    items.sort(key=lambda x: (x.get("length", x.get("size", 0)), x["word"]))
    doc = header(d)
    doc.update({"what": what, "count": len(items), "items": items})
    lines = [f"{d.name}: {len(items)} {what}"]
    for item in items:
        extra = item.get("subspace")
        lines.append(item["label"] if extra is None else f"{item['label']}  {extra}")
    emit(doc, lines, args.format)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    d = build_datum(args)
    charges = parse_charges(args.charge)
    if d.center_dim and charges is None:
        raise UsageError("k has a center: pass --charge q (or a range a..b)")
    report = co.verify(d, args.rep, parse_depth(args.depth), charges=charges)
    doc = header(d)
    doc.update(report.to_json())
    lines = [f"{d.name}  {report.status}  depth={fmt_fraction(report.depth)}  checks={','.join(report.checks)}"]
    for name, w, value in report.residuals:
        coeffs = format_coeffs([[fmt_fraction(x) for x in row] for row in w.coeffs])
        lines.append(f"  {name}: {coeffs}  delta={fmt_fraction(w.delta)}  excess={value}")
    emit(doc, lines, args.format)
    return EXIT_OK if report.ok else EXIT_FAILED


def cmd_inspect(args: argparse.Namespace) -> int:
    d = build_datum(args)
    ks = d.k_structure
    ideals = [
        {"name": s.name, "nodes": list(s.nodes), "h_dual": s.h_dual, "level": fmt_fraction(s.j)}
        for s in ks.simple_ideals
    ]
    roots = classify_roots(d)
    doc = header(d)
    doc.update(
        {
            "marks": list(d.marks),
            "comarks": list(d.comarks),
            "k_type": ks.describe(),
            "ideals": ideals,
            "center_dim": ks.center_dim,
            "Lambda0k": [[fmt_fraction(x) for x in row] for row in ks.Lambda0k.coeffs],
            "rho_n": [[fmt_fraction(x) for x in row] for row in ks.rho_n.coeffs],
            "dim_p": len(d.p_weights),
            "compact": len(roots.compact),
            "noncompact": len(roots.noncompact),
            "complex": len(roots.complex_),
            "p_index": d.p_index,
            "hermitian_index": d.hermitian_index,
            "w_sigma": br.has_w_sigma(d),
        }
    )
    if not d.is_complex:
        doc["lprime_kind"] = build_lprime(d).lprime_kind
    lines = [f"{key}: {doc[key]}" for key in sorted(doc)]
    emit(doc, lines, args.format)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point


def _add_datum_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algebra", required=True, help='simple type such as "D4", or "complex:A3"')
    p.add_argument("--sigma", help="comma-separated twist coordinates s0,...,sn")
    p.add_argument("--node", type=int, help="shorthand for a single s_p = 1")
    p.add_argument("--k", type=int, choices=(1, 2), help="1 for inner, 2 for outer")
    p.add_argument("--format", choices=("text", "json"), default="text")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="levelone", description="Level-one branching for symmetric pairs.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("decompose", help="decompose level-one modules")
    _add_datum_args(p)
    p.add_argument("--rep", choices=("basic", "vector", "spin", "all"), default="all")
    p.add_argument("--charge", help="center charge q or inclusive range a..b")
    p.add_argument("--mod-delta", action="store_true", help="drop delta_k coefficients")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("enumerate", help="list combinatorial index sets")
    p.add_argument("--what", choices=ENUMERATIONS, required=True)
    _add_datum_args(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="check decompositions against truncated characters")
    _add_datum_args(p)
    p.add_argument("--rep", choices=("basic", "vector", "spin", "all"), default="all")
    p.add_argument("--charge", help="center charge q or inclusive range a..b")
    p.add_argument("--depth", default="2", help="delta_k-degree bound (rational)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("inspect", help="show the root datum and the structure of k")
    _add_datum_args(p)
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = make_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except (LevelOneError, ValueError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    raise SystemExit(main())
