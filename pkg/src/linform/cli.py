"""Command-line interface.

Every subcommand prints a human-readable summary by default or a stable
JSON document with --json; the schema is the same for all commands:

    {"command": ..., "inputs": {...}, "outputs": {...},
     "status": "success" | "failure", "reason": ... | null}

Exit codes: 0 on success, 1 on a domain failure (for example a
construction shortfall), 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .intsets import (
    DIFFERENCE,
    SUM,
    FiniteIntSet,
    LinearForm,
    image,
    image_cardinality,
    set_from_json,
    set_from_text,
    set_to_text,
)
from .modular import (
    build_separating_set,
    load_locals,
    local_ratio_search,
    local_solution,
)
from .residues import kth_power_local_solutions, qr_local_solutions
from .smallsets import (
    ap_equality_set,
    classify_triples,
    conjugate_four_set_witness,
    five_set_witness,
    three_set_witness,
)
from . import verify as verify_mod

INLINE_SET_LIMIT = 100_000


class UsageError(ValueError):
    """Bad command-line input; maps to exit code 2."""


@dataclass
class CommandResult:
    command: str
    inputs: dict
    outputs: dict = field(default_factory=dict)
    status: str = "success"
    reason: str | None = None
    text: str = ""

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "inputs": self.inputs,
            "outputs": self.outputs,
            "status": self.status,
            "reason": self.reason,
        }


def parse_form(token: str) -> LinearForm:
    parts = [p.strip() for p in token.split(",")]
    coeffs = []
    for p in parts:
        try:
            coeffs.append(int(p))
        except ValueError:
            raise UsageError(f"could not parse form {token!r}: offending token {p!r}") from None
    try:
        return LinearForm(tuple(coeffs))
    except ValueError as exc:
        raise UsageError(f"invalid form {token!r}: {exc}") from None


def parse_inline_set(token: str) -> FiniteIntSet:
    values = []
    for p in token.split(","):
        p = p.strip()
        if not p:
            continue
        try:
            values.append(int(p))
        except ValueError:
            raise UsageError(f"could not parse set: offending token {p!r}") from None
    if not values:
        raise UsageError("inline set is empty")
    return FiniteIntSet(values)


def load_set_file(path: str) -> FiniteIntSet:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read set file {path!r}: {exc}") from None
    try:
        if path.endswith(".json"):
            return set_from_json(text)
        return set_from_text(text)
    except ValueError as exc:
        raise UsageError(f"bad set file {path!r}: {exc}") from None


def _resolve_set(args: argparse.Namespace) -> tuple[FiniteIntSet, dict]:
    if getattr(args, "inline", None) is not None:
        return parse_inline_set(args.inline), {"inline": args.inline}
    if getattr(args, "set_file", None) is not None:
        return load_set_file(args.set_file), {"file": args.set_file}
    raise UsageError("provide a set with -A FILE or --inline a,b,c")


def _form_str(form: LinearForm) -> str:
    return ",".join(str(c) for c in form.coefficients)


# ---------------------------------------------------------------------------
# subcommand handlers


def cmd_image(args: argparse.Namespace) -> CommandResult:
    form = parse_form(args.form)
    a, source = _resolve_set(args)
    inputs = {"form": _form_str(form), "set": source, "strategy": args.strategy}
    if args.full:
        img = image(form, a, strategy=args.strategy)
        card = len(img)
        outputs: dict = {"cardinality": card, "image": list(img.elements)}
        text = f"|f(A)| = {card}\n" + " ".join(str(x) for x in img.elements)
    else:
        card = image_cardinality(form, a, strategy=args.strategy)
        outputs = {"cardinality": card}
        text = f"|f(A)| = {card}"
    return CommandResult("image", inputs, outputs, text=text)


def cmd_compare(args: argparse.Namespace) -> CommandResult:
    form_f = parse_form(args.form_f)
    form_g = parse_form(args.form_g)
    a, source = _resolve_set(args)
    f_card = image_cardinality(form_f, a)
    g_card = image_cardinality(form_g, a)
    relation = "<" if f_card < g_card else (">" if f_card > g_card else "=")
    return CommandResult(
        "compare",
        {"form_f": _form_str(form_f), "form_g": _form_str(form_g), "set": source},
        {"f_card": f_card, "g_card": g_card, "relation": relation},
        text=f"|f(A)| = {f_card} {relation} {g_card} = |g(A)|",
    )


def cmd_classify3(args: argparse.Namespace) -> CommandResult:
    form = parse_form(f"{args.u},{args.v}")
    try:
        result = classify_triples(form, bound=args.bound, threads=args.threads)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    pairs = result.as_pairs()
    lines = [f"{{{', '.join(str(x) for x in elems)}}}: |f| = {card}" for elems, card in pairs]
    return CommandResult(
        "classify3",
        {"u": args.u, "v": args.v, "bound": result.bound},
        {"exceptional": [{"set": list(e), "cardinality": c} for e, c in pairs]},
        text="\n".join(lines) if lines else "no exceptional triples",
    )


def cmd_witness(args: argparse.Namespace) -> CommandResult:
    kind = args.kind
    if kind == "three":
        if args.form_f is None or args.form_g is None:
            raise UsageError("witness three needs -f and -g")
        w = three_set_witness(parse_form(args.form_f), parse_form(args.form_g))
    elif kind == "four":
        _require_uv(args)
        w = conjugate_four_set_witness(args.u, args.v)
    elif kind == "five":
        _require_uv(args)
        a, card_f, card_d = five_set_witness(args.u, args.v)
        return CommandResult(
            "witness",
            {"kind": "five", "u": args.u, "v": args.v},
            {"set": list(a.elements), "f_card": card_f, "d_card": card_d},
            text=f"A = {list(a.elements)}\n|f(A)| = {card_f} < {card_d} = |A - A|",
        )
    elif kind == "ap":
        _require_uv(args)
        if args.t is None:
            raise UsageError("witness ap needs -t")
        a = ap_equality_set(args.u, args.v, args.t)
        form_f = LinearForm((args.u, args.v))
        form_g = LinearForm((args.u, -args.v))
        cf = image_cardinality(form_f, a)
        cg = image_cardinality(form_g, a)
        return CommandResult(
            "witness",
            {"kind": "ap", "u": args.u, "v": args.v, "t": args.t},
            {"set": list(a.elements), "f_card": cf, "g_card": cg},
            text=f"A = {list(a.elements)}\n|f(A)| = {cf} = {cg} = |g(A)|",
        )
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(f"unknown witness kind {kind!r}")
    return CommandResult(
        "witness",
        {"kind": kind, "form_f": _form_str(w.form_f), "form_g": _form_str(w.form_g)},
        {
            "set_a": list(w.set_a.elements),
            "set_b": list(w.set_b.elements),
            "f_of_a": w.f_of_a,
            "g_of_a": w.g_of_a,
            "f_of_b": w.f_of_b,
            "g_of_b": w.g_of_b,
        },
        text=(
            f"A = {list(w.set_a.elements)}: |f(A)| = {w.f_of_a}, |g(A)| = {w.g_of_a}\n"
            f"B = {list(w.set_b.elements)}: |f(B)| = {w.f_of_b}, |g(B)| = {w.g_of_b}"
        ),
    )


def _require_uv(args: argparse.Namespace) -> None:
    if args.u is None or args.v is None:
        raise UsageError(f"witness {args.kind} needs -u and -v")


def cmd_local_search(args: argparse.Namespace) -> CommandResult:
    form_f = parse_form(args.form_f)
    form_g = parse_form(args.form_g)
    try:
        sol = local_ratio_search(form_f, form_g, args.modulus, budget=args.budget, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return CommandResult(
        "local-search",
        {
            "form_f": _form_str(form_f),
            "form_g": _form_str(form_g),
            "modulus": args.modulus,
            "budget": args.budget,
            "seed": args.seed,
        },
        {
            "classes": list(sol.residues.classes),
            "f_card": sol.f_card,
            "g_card": sol.g_card,
            "ratio": [sol.ratio.numerator, sol.ratio.denominator],
        },
        text=(
            f"R = {list(sol.residues.classes)} mod {args.modulus}\n"
            f"|f(R)| / |g(R)| = {sol.f_card}/{sol.g_card}"
        ),
    )


def cmd_construct(args: argparse.Namespace) -> CommandResult:
    form_f = parse_form(args.form_f)
    form_g = parse_form(args.form_g)
    inputs = {
        "form_f": _form_str(form_f),
        "form_g": _form_str(form_g),
        "source": args.source,
        "count": args.count,
        "window": args.window,
        "locals": args.locals,
    }
    shortfall_note = ""
    if args.source == "file":
        if not args.locals:
            raise UsageError("--source file needs --locals PATH")
        try:
            residue_sets = load_locals(Path(args.locals).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read locals file: {exc}") from None
        except ValueError as exc:
            raise UsageError(f"bad locals file: {exc}") from None
        locs = [local_solution(form_f, form_g, r) for r in residue_sets]
        direct = True
    else:
        u, v = _binary_coefficients(form_f)
        if form_g.coefficients not in ((1, 1), (1, -1)):
            raise UsageError(f"--source {args.source} builds locals against x+y or x-y only")
        try:
            if args.source == "qr":
                locs = qr_local_solutions(u, v, args.count)
            else:
                locs = kth_power_local_solutions(u, v, args.count)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if len(locs) < args.count:
            shortfall_note = f"prime search found only {len(locs)} of {args.count} local solutions; "
        direct = False
    if not locs:
        return CommandResult(
            "construct", inputs, {"locals_found": 0},
            status="failure", reason=shortfall_note + "no local solutions found",
            text="no local solutions found",
        )
    report = build_separating_set(form_f, form_g, locs, window_start=args.window, direct=direct)
    outputs = report.to_dict(inline_elements_limit=INLINE_SET_LIMIT)
    if args.set_out and report.elements is not None:
        Path(args.set_out).write_text(set_to_text(report.elements))
        outputs["set"] = {"file": args.set_out, "size": len(report.elements)}
    status = "success" if report.success else "failure"
    reason = None if report.success else shortfall_note + report.detail
    headline = (
        f"|f(A)| = {report.f_card} < {report.g_card} = |g(A)|"
        if report.success and report.f_card is not None
        else (f"certified: |f(A)| <= {report.f_card_upper} < {report.g_card_lower} <= |g(A)|"
              if report.success else f"failed: {report.detail}")
    )
    text = (
        f"{shortfall_note}{headline}\n"
        f"mode: {report.mode}; combined modulus {report.combined_modulus}; |A| = {report.set_size}\n"
        f"ratio product {report.ratio_product} vs threshold {report.threshold}"
    )
    return CommandResult("construct", inputs, outputs, status=status, reason=reason, text=text)


def _binary_coefficients(form: LinearForm) -> tuple[int, int]:
    if not form.is_binary:
        raise UsageError("this command needs a binary form u,v")
    return form.coefficients


def cmd_verify(args: argparse.Namespace) -> CommandResult:
    results = verify_mod.run_checks(only=args.only, threads=args.threads)
    ok = all(r.ok for r in results) and bool(results)
    return CommandResult(
        "verify",
        {"only": args.only},
        {"checks": [r.to_dict() for r in results]},
        status="success" if ok else "failure",
        reason=None if ok else "some checks failed" if results else "no checks matched",
        text=verify_mod.render_table(results),
    )


# ---------------------------------------------------------------------------
# parser wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linform",
        description="images of integer linear forms over finite sets and residue rings",
    )
    default_threads = int(os.environ.get("LINFORM_THREADS", "1"))
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON result document")
    common.add_argument("--threads", type=int, default=default_threads,
                        help="worker cap for parallel sections (results independent of it)")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("image", parents=[common], help="compute |f(A)| (and optionally f(A))")
    p.add_argument("-f", "--form", required=True, help="comma-separated coefficients, e.g. 2,1")
    p.add_argument("-A", "--set-file", help="set file: one integer per line, or .json array")
    p.add_argument("--inline", help="inline set, e.g. 0,1,2")
    p.add_argument("--strategy", choices=["auto", "pairs", "merge", "bitset"], default="auto")
    p.add_argument("--full", action="store_true", help="print the image, not just its size")
    p.set_defaults(handler=cmd_image)

    p = sub.add_parser("compare", parents=[common], help="compare |f(A)| with |g(A)|")
    p.add_argument("-f", "--form-f", required=True)
    p.add_argument("-g", "--form-g", required=True)
    p.add_argument("-A", "--set-file")
    p.add_argument("--inline")
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("classify3", parents=[common],
                       help="exceptional 3-element sets for a normalized form")
    p.add_argument("-u", type=int, required=True)
    p.add_argument("-v", type=int, required=True)
    p.add_argument("--bound", type=int, default=None)
    p.set_defaults(handler=cmd_classify3)

    p = sub.add_parser("witness", parents=[common], help="explicit separating witness sets")
    p.add_argument("kind", choices=["three", "four", "five", "ap"])
    p.add_argument("-f", "--form-f", help="first form (three)")
    p.add_argument("-g", "--form-g", help="second form (three)")
    p.add_argument("-u", type=int, help="leading coefficient (four, five, ap)")
    p.add_argument("-v", type=int, help="second coefficient (four, five, ap)")
    p.add_argument("-t", type=int, help="progression length (ap)")
    p.set_defaults(handler=cmd_witness)

    p = sub.add_parser("local-search", parents=[common],
                       help="search Z/mZ for a subset with small |f(R)|/|g(R)| and g(R) full")
    p.add_argument("-f", "--form-f", required=True)
    p.add_argument("-g", "--form-g", required=True)
    p.add_argument("-m", "--modulus", type=int, required=True)
    p.add_argument("--budget", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_local_search)

    p = sub.add_parser("construct", parents=[common],
                       help="combine local solutions into a set with |f(A)| < |g(A)|")
    p.add_argument("-f", "--form-f", required=True)
    p.add_argument("-g", "--form-g", required=True)
    p.add_argument("--source", choices=["qr", "kpower", "file"], required=True)
    p.add_argument("--count", type=int, default=8, help="local solutions to request (qr/kpower)")
    p.add_argument("--locals", help="JSON file of residue sets (file source)")
    p.add_argument("--window", type=int, default=0, help="first representative of the window")
    p.add_argument("--set-out", help="write the materialized set to this file")
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("verify", parents=[common], help="run the built-in verification suite")
    p.add_argument("--only", help="run only checks whose name starts with this prefix")
    p.set_defaults(handler=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result: CommandResult = args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        print(json.dumps(result.to_dict(), indent=2))
    else:
        print(result.text)
    return 0 if result.status == "success" else 1


if __name__ == "__main__":
    sys.exit(main())
