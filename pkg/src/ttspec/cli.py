"""Command-line front end: tables and JSON for every module plus a
verification driver.

Word expressions for `kmw reduce` follow a tiny grammar (see README):
sums of monomials c eta^i [a1][a2]..., where each bracket entry is an
integer representative or a power w^k of the fixed generator, and `h`
abbreviates the hyperbolic element 2 + eta[-1].
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from . import chow_motives, graded_spectrum, milnor_witt, quadratic_forms, tt_geometry
from .errors import TtspecError
from .finite_field import make_field, primitive_element

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2


def _field_for(q: int):
    # factor q = p^e
    for p in range(2, q + 1):
        if q % p == 0:
            e = 0
            m = q
            while m % p == 0:
                m //= p
                e += 1
            if m != 1:
                raise TtspecError(f"{q} is not a prime power")
            return make_field(p, e)
    raise TtspecError(f"{q} is not a prime power")


# ---------------------------------------------------------------- word parser

_TOKEN = re.compile(r"\s*(\[|\]|\^|\+|-|\*|eta|h|w|\d+)")


def _tokenize(text: str):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise TtspecError(f"cannot tokenize {text[pos:]!r}")
            break
        out.append(m.group(1))
        pos = m.end()
    return out


class _WordParser:
    """expr := term (('+'|'-') term)*
    term := ['-'] factor+          (juxtaposition is product)
    factor := INT | 'eta' ['^' INT] | 'h' | '[' entry ']'
    entry := ['-'] INT | 'w' ['^' INT]"""

    def __init__(self, field, tokens):
        self.field = field
        self.tokens = tokens
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise TtspecError(f"unexpected token {tok!r}, expected {expected!r}")
        self.pos += 1
        return tok

    def parse(self):
        result = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            nxt = self.term()
            result = result + nxt if op == "+" else result - nxt
        if self.peek() is not None:
            raise TtspecError(f"trailing input at {self.tokens[self.pos:]}")
        return result

    def term(self):
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        result = self.factor()
        while self.peek() not in (None, "+", "-"):
            if self.peek() == "*":
                self.take()
            result = result * self.factor()
        return sign * result if sign == -1 else result

    def factor(self):
        tok = self.peek()
        if tok is None:
            raise TtspecError("unexpected end of expression")
        if tok.isdigit():
            self.take()
            return int(tok) * milnor_witt.word_one(self.field)
        if tok == "eta":
            self.take()
            power = 1
            if self.peek() == "^":
                self.take()
                power = int(self.take())
            return milnor_witt.word_eta(self.field, power)
        if tok == "h":
            self.take()
            return milnor_witt.word_h(self.field)
        if tok == "[":
            self.take()
            entry = self.entry()
            self.take("]")
            return milnor_witt.word_symbol(entry)
        raise TtspecError(f"unexpected token {tok!r}")

    def entry(self):
        sign = 1
        if self.peek() == "-":
            self.take()
            sign = -1
        tok = self.take()
        if tok == "w":
            power = 1
            if self.peek() == "^":
                self.take()
                power = int(self.take())
            value = primitive_element(self.field) ** power
        elif tok.isdigit():
            value = self.field.element(int(tok))
        else:
            raise TtspecError(f"bad bracket entry {tok!r}")
        return -value if sign == -1 else value


def parse_word(field, text: str):
    return _WordParser(field, _tokenize(text)).parse()


# ------------------------------------------------------------------- commands


def _group_text(shape) -> str:
    if not shape.invariant_factors:
        return "0"
    parts = []
    for f in shape.invariant_factors:
        parts.append("Z" if f == 0 else f"Z/{f}")
    return " (+) ".join(parts)


def cmd_kmw_table(args):
    field = _field_for(args.q)
    lo, hi = _parse_range(args.range)
    rows = []
    for n in range(lo, hi + 1):
        shape = milnor_witt.kmw_group(field, n)
        rows.append(
            {
                "degree": n,
                "group": _group_text(shape),
                "invariant_factors": list(shape.invariant_factors),
                "generators": list(shape.generators),
            }
        )
    return {"q": args.q, "rows": rows}


def cmd_kmw_reduce(args):
    field = _field_for(args.q)
    w = parse_word(field, args.word)
    reduced = milnor_witt.reduce_word(w)
    components = []
    for n in sorted(reduced, reverse=True):
        el = reduced[n]
        shape = milnor_witt.kmw_group(field, n)
        components.append(
            {
                "degree": n,
                "coords": list(el.coords),
                "generators": list(shape.generators),
                "group": _group_text(shape),
            }
        )
    return {"q": args.q, "word": args.word, "components": components, "zero": not components}


def cmd_witt_classify(args):
    field = _field_for(args.q)
    entries = [int(x) for x in args.form.split(",") if x.strip()]
    form = quadratic_forms.diagonal(field, entries)
    h, kernel = quadratic_forms.witt_decompose(form)
    cls = quadratic_forms.witt_class(form)
    gwc = quadratic_forms.gw_class(form)
    return {
        "q": args.q,
        "form": entries,
        "rank": form.rank,
        "isotropic": quadratic_forms.is_isotropic(form),
        "hyperbolic_planes": h,
        "anisotropic_kernel": [a.value for a in kernel.entries],
        "witt_class": [a.value for a in cls.anisotropic_kernel.entries],
        "gw_class": {"rank": gwc.rank, "disc": gwc.disc},
    }


def cmd_gw(args):
    field = _field_for(args.q)
    witt = quadratic_forms.witt_ring_structure(field)
    return {
        "q": args.q,
        "gw": "Z (+) Z/2 as (rank, disc)",
        "witt": witt,
        "hyperbolic": {
            "rank": quadratic_forms.hyperbolic_class(field).rank,
            "disc": quadratic_forms.hyperbolic_class(field).disc,
        },
        "fundamental_ideal_orders": {
            n: quadratic_forms.fundamental_ideal_power(field, n)["order"] for n in range(4)
        },
    }


def cmd_milnor(args):
    field = _field_for(args.q)
    shape = milnor_witt.milnor_group(field, args.n)
    return {
        "q": args.q,
        "degree": args.n,
        "group": _group_text(shape),
        "generators": list(shape.generators),
    }


def cmd_spech(args):
    field = _field_for(args.q)
    space = graded_spectrum.enumerate_primes(field, args.prime_bound)
    points = []
    for p in space.points:
        points.append(
            {"generators": list(p.sorted_generators()), "discrepancy": p.discrepancy}
        )
    return {
        "q": args.q,
        "prime_bound": args.prime_bound,
        "points": points,
        "specializations": space.specializations(),
    }


def cmd_motive(args):
    space = chow_motives.parse_space(args.space)
    if args.motive_op == "decompose":
        parts = chow_motives.motive_decompose(space)
        return {
            "space": repr(space),
            "summands": [f"L^{w}" if w else "1" for _, w in parts],
            "twists": [w for _, w in parts],
        }
    if args.motive_op == "hom":
        target = chow_motives.parse_space(args.target_space)
        m = chow_motives.Motive(space, chow_motives.identity_correspondence(space), args.twist)
        n = chow_motives.Motive(target, chow_motives.identity_correspondence(target), args.target_twist)
        hom = chow_motives.hom_group(m, n)
        return {
            "source": repr(space),
            "target": repr(target),
            "rank": hom["rank"],
            "ambient_codim": hom["ambient_codim"],
            "basis": [repr(b) for b in hom["basis"]],
        }
    if args.motive_op == "dual":
        m = chow_motives.Motive(space, chow_motives.identity_correspondence(space), args.twist)
        d = chow_motives.motive_dual(m)
        return {"space": repr(space), "twist": args.twist, "dual_twist": d.twist}
    if args.motive_op == "pairing":
        report = chow_motives.pairing_nondegenerate(space)
        return report
    raise TtspecError(f"unknown motive operation {args.motive_op!r}")


def cmd_spc(args):
    if args.spc_op == "tate":
        universe = tt_geometry.TateUniverse(args.twist_radius, args.shift_radius)
        found = tt_geometry.enumerate_primes(universe)
        return {
            "q": args.q,
            "window": [args.twist_radius, args.shift_radius],
            "primes": [repr(p) for p in found["primes"]],
            "diagnostic": found["diagnostic"],
            "end_of_unit": tt_geometry.graded_endomorphism_ring(universe)["unit"],
        }
    if args.spc_op == "sh-top":
        space = tt_geometry.spc_shtop(args.primes, args.height)
        out = {
            "points": list(space.points),
            "specializations": sorted(
                [a, b] for a, b in space.specializes if a != b
            ),
        }
        if args.dot:
            out["dot"] = space.to_dot("shtop")
        return out
    if args.spc_op == "equivariant":
        space = tt_geometry.spc_equivariant(args.n, args.primes, args.height)
        out = {
            "n": args.n,
            "points": list(space.points),
            "point_count": len(space.points),
        }
        if args.dot:
            out["dot"] = space.to_dot("equivariant")
        return out
    raise TtspecError(f"unknown spc operation {args.spc_op!r}")


# ------------------------------------------------------------------ verify


def _suite_ses():
    failures = []
    for q in (3, 5, 7, 9):
        field = _field_for(q)
        for n in range(-4, 5):
            report = milnor_witt.verify_ses(field, n)
            if not report["ok"]:
                failures.append(report)
    return failures


def _suite_witt():
    failures = []
    for q in (3, 5, 7, 9, 11, 13):
        field = _field_for(q)
        structure = quadratic_forms.witt_ring_structure(field)
        expected = "Z/4" if q % 4 == 3 else "Z/2[e]/e^2"
        if structure["type"] != expected:
            failures.append({"q": q, "got": structure["type"], "want": expected})
    return failures


def _suite_tables():
    failures = []
    for q in (3, 5, 7, 9, 11, 13):
        field = _field_for(q)
        for n in range(-6, 7):
            shape = milnor_witt.kmw_group(field, n)
            if n >= 2 and shape.invariant_factors != ():
                failures.append({"q": q, "n": n})
            if n == 1 and shape.invariant_factors != (q - 1,):
                failures.append({"q": q, "n": n})
            if n == 0 and shape.invariant_factors != (0, 2):
                failures.append({"q": q, "n": n})
            if n < 0:
                want = (4,) if q % 4 == 3 else (2, 2)
                if shape.invariant_factors != want:
                    failures.append({"q": q, "n": n})
    return failures


def _suite_spech():
    failures = []
    field = _field_for(3)
    space = graded_spectrum.enumerate_primes(field, 50)
    flagged = [p for p in space.points if p.discrepancy]
    if len(flagged) != 1:
        failures.append({"flagged": len(flagged)})
    want = {("[w]", "eta"), ("[w]", "2"), ("[w]", "eta", "2")}
    for p in range(3, 51):
        if graded_spectrum._is_int_prime(p):
            want.add(("[w]", "eta", str(p)))
    got = {p.sorted_generators() for p in space.points}
    if got != want:
        failures.append({"got": sorted(got), "want": sorted(want)})
    return failures


def _suite_eta():
    failures = []
    for q in (3, 5, 7, 9):
        field = _field_for(q)
        for n in (1, 16, 64):
            if not milnor_witt.eta_power_nonzero(field, n):
                failures.append({"q": q, "n": n})
        local = milnor_witt.localize_eta(field)
        if not local["four_is_zero"]:
            failures.append({"q": q, "fact": "4=0"})
        if local["two_is_zero"] != (q % 4 == 1):
            failures.append({"q": q, "fact": "2=0"})
    return failures


def _suite_motives():
    failures = []
    for n in range(5):
        space = chow_motives.ProjSpaceProduct((n,))
        if len(chow_motives.motive_decompose(space)) != n + 1:
            failures.append({"space": f"P{n}"})
    for i in range(-3, 4):
        for j in range(-3, 4):
            for k in range(-3, 4):
                check = chow_motives.rigidity_check(
                    chow_motives.lefschetz_motive(i),
                    chow_motives.lefschetz_motive(j),
                    chow_motives.lefschetz_motive(k),
                )
                if not check["bijective"]:
                    failures.append({"twists": [i, j, k]})
    return failures


def _suite_tate():
    universe = tt_geometry.TateUniverse(4, 2)
    found = tt_geometry.enumerate_primes(universe)
    failures = []
    if len(found["primes"]) != 1 or found["primes"][0].lines:
        failures.append({"primes": [repr(p) for p in found["primes"]]})
    if tt_geometry.graded_endomorphism_ring(universe)["unit"] != "Q":
        failures.append({"end_of_unit": "not Q"})
    return failures


def _suite_spaces():
    failures = []
    space = tt_geometry.spc_shtop(3, 3)
    generic = tt_geometry.chromatic_label(0, 1)
    if space.closure({generic}) != set(space.points):
        failures.append({"fact": "generic point closure"})
    chain = space.closure({tt_geometry.chromatic_label(2, 1)})
    want = {tt_geometry.chromatic_label(2, n) for n in (1, 2, 3, "inf")}
    if chain != want:
        failures.append({"fact": "chain closure", "got": sorted(map(str, chain))})
    report = tt_geometry.verify_comparison(tt_geometry.TateUniverse(3, 2))
    if not report["ok"]:
        failures.append({"fact": "comparison", "report": report})
    return failures


SUITES = {
    "tables": _suite_tables,
    "witt": _suite_witt,
    "ses": _suite_ses,
    "spech": _suite_spech,
    "eta": _suite_eta,
    "motives": _suite_motives,
    "tate": _suite_tate,
    "spaces": _suite_spaces,
}


def cmd_verify(args):
    names = [args.suite] if args.suite else list(SUITES)
    for name in names:
        if name not in SUITES:
            raise TtspecError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    verdicts = {}
    ok = True
    for name in names:
        failures = SUITES[name]()
        verdicts[name] = {"ok": not failures, "failures": failures}
        ok = ok and not failures
    return {"suites": verdicts, "ok": ok}


# ------------------------------------------------------------------- plumbing


def _parse_range(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(-?\d+)\.\.(-?\d+)", text.strip())
    if not m:
        raise TtspecError(f"range must look like -3..2, got {text!r}")
    lo, hi = int(m.group(1)), int(m.group(2))
    if lo > hi:
        raise TtspecError(f"empty range {text!r}")
    return lo, hi


def _render_table(payload, indent=0) -> str:
    pad = "  " * indent
    lines = []
    if isinstance(payload, dict):
        for key in payload:
            value = payload[key]
            if isinstance(value, (dict, list)):
                lines.append(f"{pad}{key}:")
                lines.append(_render_table(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {value}")
    elif isinstance(payload, list):
        for item in payload:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(_render_table(item, indent + 1))
            else:
                lines.append(f"{pad}- {item}")
    else:
        lines.append(f"{pad}{payload}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    json_flag = argparse.ArgumentParser(add_help=False)
    json_flag.add_argument("--json", action="store_true", help="emit a JSON envelope")

    def _env_int(name, fallback):
        raw = os.environ.get(name)
        if raw is None:
            return fallback
        try:
            return int(raw)
        except ValueError:
            raise TtspecError(f"{name} must be an integer, got {raw!r}")
    parser = argparse.ArgumentParser(prog="ttspec", parents=[json_flag])
    sub = parser.add_subparsers(dest="command", required=True)

    kmw = sub.add_parser("kmw", help="Milnor-Witt K-theory tables and reduction")
    kmw_sub = kmw.add_subparsers(dest="kmw_op", required=True)
    table = kmw_sub.add_parser("table", parents=[json_flag])
    table.add_argument("--q", type=int, required=True)
    table.add_argument("--range", default="-6..6")
    table.set_defaults(func=cmd_kmw_table)
    reduce_p = kmw_sub.add_parser("reduce", parents=[json_flag])
    reduce_p.add_argument("--q", type=int, required=True)
    reduce_p.add_argument("--word", required=True)
    reduce_p.set_defaults(func=cmd_kmw_reduce)

    witt = sub.add_parser("witt", help="quadratic form classification")
    witt_sub = witt.add_subparsers(dest="witt_op", required=True)
    classify = witt_sub.add_parser("classify", parents=[json_flag])
    classify.add_argument("--q", type=int, required=True)
    classify.add_argument("--form", required=True)
    classify.set_defaults(func=cmd_witt_classify)

    gw = sub.add_parser("gw", parents=[json_flag], help="Grothendieck-Witt and Witt ring structure")
    gw.add_argument("--q", type=int, required=True)
    gw.set_defaults(func=cmd_gw)

    milnor = sub.add_parser("milnor", parents=[json_flag], help="Milnor K-theory groups")
    milnor.add_argument("--q", type=int, required=True)
    milnor.add_argument("--n", type=int, required=True)
    milnor.set_defaults(func=cmd_milnor)

    spech = sub.add_parser("spech", parents=[json_flag], help="homogeneous prime spectrum")
    spech.add_argument("--q", type=int, required=True)
    spech.add_argument("--prime-bound", type=int, default=_env_int("TTSPEC_PRIME_BOUND", 50))
    spech.set_defaults(func=cmd_spech)

    motive = sub.add_parser("motive", parents=[json_flag], help="Chow motive computations")
    motive.add_argument("motive_op", choices=["decompose", "hom", "dual", "pairing"])
    motive.add_argument("--space", required=True)
    motive.add_argument("--target-space", default="pt")
    motive.add_argument("--twist", type=int, default=0)
    motive.add_argument("--target-twist", type=int, default=0)
    motive.set_defaults(func=cmd_motive)

    spc = sub.add_parser("spc", parents=[json_flag], help="spectra of tensor-triangular models")
    spc.add_argument("spc_op", choices=["tate", "sh-top", "equivariant"])
    spc.add_argument("--q", type=int, default=3)
    spc.add_argument("--twist-radius", type=int, default=_env_int("TTSPEC_TWIST_RADIUS", 4))
    spc.add_argument("--shift-radius", type=int, default=_env_int("TTSPEC_SHIFT_RADIUS", 2))
    spc.add_argument("--primes", type=int, default=3)
    spc.add_argument("--height", type=int, default=3)
    spc.add_argument("--n", type=int, default=1)
    spc.add_argument("--dot", action="store_true")
    spc.set_defaults(func=cmd_spc)

    verify = sub.add_parser("verify", parents=[json_flag], help="run invariant suites")
    verify.add_argument("--suite", default=None)
    verify.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    try:
        parser = build_parser()
    except TtspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        payload = args.func(args)
    except TtspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    envelope = {
        "command": args.command,
        "parameters": {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in ("func", "json", "command") and v is not None
        },
        "result": payload,
    }
    if args.json:
        print(json.dumps(envelope, sort_keys=True, default=str))
    else:
        print(_render_table(payload))
    if args.command == "verify" and not payload["ok"]:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
