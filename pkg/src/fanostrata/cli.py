"""Command-line interface.

JSON on stdout (DOT with --dot), diagnostics on stderr. Exit codes:
0 success, 1 usage, 2 domain error (e.g. a line not on the hypersurface),
3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .errors import ConsistencyError, DomainError, FanoStrataError
from .exactalg import MultiPoly, field_from_tag, field_tag
from .experiment import fermat_suite, sample_types
from .normal import (Line, adapt_coordinates, local_equations,
                     random_witness, splitting_type)
from .schubert import chern_sym, stratum_class
from .strata import (SplittingType, expected_dimension, hasse_dot,
                     parse_type, poset)
from .tangent import tangent_dims

USAGE_EXIT = 1
DOMAIN_EXIT = 2
INTERNAL_EXIT = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(USAGE_EXIT, f"{self.prog}: error: {message}\n")


def _emit(payload, pretty=False):
    if pretty:
        json.dump(payload, sys.stdout, indent=2, sort_keys=True)
    else:
        json.dump(payload, sys.stdout, sort_keys=True)
    sys.stdout.write("\n")


def _load_surface(spec: str, field, nvars=None) -> MultiPoly:
    text = spec
    if spec.startswith("@"):
        text = Path(spec[1:]).read_text()
    elif spec.endswith(".json") and Path(spec).exists():
        text = Path(spec).read_text()
    text = text.strip()
    if text.startswith("{"):
        return MultiPoly.from_json(json.loads(text), field)
    return MultiPoly.parse(text, field, nvars=nvars)


def _load_line(spec: str, field) -> Line:
    text = spec
    if spec.startswith("@"):
        text = Path(spec[1:]).read_text()
    elif spec.endswith(".json") and Path(spec).exists():
        text = Path(spec).read_text()
    return Line.from_json(json.loads(text.strip()), field)


def _default_seed():
    return int(os.environ.get("FANOSTRATA_SEED", "0"))


def _split_type_flag(argv):
    """Let `--type -1,-1,1` survive argparse's option detection."""
    out = []
    i = 0
    while i < len(argv):
        if argv[i] == "--type" and i + 1 < len(argv):
            out.append(f"--type={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def build_parser() -> _Parser:
    parser = _Parser(prog="fanostrata",
                     description="Splitting-type strata of Fano schemes of "
                                 "lines on hypersurfaces, exactly.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("strata", parents=[], help="enumerate splitting types "
                       "and their specialization poset")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--dot", action="store_true", help="emit the Hasse diagram as DOT")
    p.add_argument("--pretty", action="store_true")

    p = sub.add_parser("split", help="splitting type and tangent report of a "
                       "line on a hypersurface")
    p.add_argument("--surface", required=True,
                   help="polynomial text, JSON, or @file")
    p.add_argument("--line", required=True, help="line JSON or @file")
    p.add_argument("--field", default="q", help="q or p:<prime> (default q)")
    p.add_argument("--pretty", action="store_true")

    p = sub.add_parser("class", help="Chow class of a stratum closure")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--type", required=True, dest="type_", metavar="TYPE",
                   help="comma-separated entries, e.g. -1,-1,1")
    p.add_argument("--orientation", choices=["porteous", "reciprocal"],
                   default="porteous",
                   help="which determinant orientation to headline "
                        "(both are always reported)")
    p.add_argument("--pretty", action="store_true")

    p = sub.add_parser("sample", help="seeded Monte Carlo over splitting types")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("p", type=int)
    p.add_argument("trials", type=int)
    p.add_argument("seed", type=int, nargs="?", default=None)
    p.add_argument("--seed", type=int, dest="seed_flag", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--csv", metavar="PATH", default=None,
                   help="also write a (type,count) CSV to PATH")
    p.add_argument("--pretty", action="store_true")

    p = sub.add_parser("witness", help="random line data with prescribed "
                       "splitting type")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--type", required=True, dest="type_", metavar="TYPE")
    p.add_argument("--field", default="p:1009")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--retries", type=int, default=20)
    p.add_argument("--pretty", action="store_true")

    p = sub.add_parser("localeq", help="local closure equations of a stratum "
                       "in a Grassmannian chart")
    p.add_argument("--surface", required=True)
    p.add_argument("--type", required=True, dest="type_", metavar="TYPE")
    p.add_argument("--field", default="q")
    p.add_argument("--line", default=None,
                   help="base line of the chart (default: the standard line)")
    p.add_argument("--force-size", action="store_true",
                   help="lift the n <= 5, d <= 4 size guard")
    p.add_argument("--pretty", action="store_true")

    p = sub.add_parser("fermat", help="cone-line suite on a Fermat hypersurface")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("--prime", type=int, default=None,
                   help="prime to work over (default: searched upward from 17)")
    p.add_argument("--pretty", action="store_true")

    return parser


def cmd_strata(args) -> int:
    p = poset(args.n, args.d)
    if args.dot:
        sys.stdout.write(hasse_dot(p) + "\n")
        return 0
    payload = {
        "n": args.n, "d": args.d,
        "types": [dict(t.to_json(), **expected_dimension(t).to_json())
                  for t in p.nodes],
        "covers": [[lo.label(), up.label()] for lo, up in p.covers],
    }
    _emit(payload, args.pretty)
    return 0


def cmd_split(args) -> int:
    field = field_from_tag(args.field)
    line = _load_line(args.line, field)
    f = _load_surface(args.surface, field, nvars=line.n + 1)
    restriction = adapt_coordinates(f, line)
    _, profile = splitting_type(restriction.forms)
    report = tangent_dims(f, line)
    st = report.splitting
    payload = dict(report.to_json())
    payload.update({"n": st.n, "d": st.d, "u": st.expected_codim,
                    "field": field_tag(field),
                    "rank_profile": profile.to_json()})
    _emit(payload, args.pretty)
    return 0


def cmd_class(args) -> int:
    st = parse_type(args.type_, args.n, args.d)
    rep = stratum_class(st)
    exp = expected_dimension(st)
    payload = rep.to_json()
    payload["expectation"] = exp.to_json()
    payload["orientation"] = args.orientation
    chosen = payload["orientations"][args.orientation]
    payload["class"] = chosen["class"]
    payload["pretty"] = chosen["pretty"]
    payload["degree"] = chosen["degree"]
    series = chern_sym(args.d - 1, args.n)
    payload["chern_sym_dminus1"] = [
        {"k": k, "pretty": series.component(k).pretty()}
        for k in range(1, min(args.d + 1, 2 * (args.n - 1)) + 1)]
    _emit(payload, args.pretty)
    return 0


def cmd_sample(args) -> int:
    seed = args.seed_flag if args.seed_flag is not None else args.seed
    if seed is None:
        seed = _default_seed()
    rep = sample_types(args.n, args.d, args.p, args.trials, seed=seed,
                       workers=args.workers)
    if args.csv:
        Path(args.csv).write_text(rep.to_csv())
        print(f"wrote {args.csv}", file=sys.stderr)
    _emit(rep.to_json(), args.pretty)
    return 0


def cmd_witness(args) -> int:
    field = field_from_tag(args.field)
    st = parse_type(args.type_, args.n, args.d)
    seed = args.seed if args.seed is not None else _default_seed()
    result = random_witness(st, field, seed, max_retries=args.retries)
    payload = result.to_json()
    payload.update({"n": args.n, "d": args.d, "seed": seed,
                    "field": field_tag(field)})
    # surface and line ready to round-trip through `split`
    F = field
    nv = args.n + 1
    surface = MultiPoly.zero(F, nv)
    for j, form in enumerate(result.forms):
        xi = MultiPoly.variable(F, nv, j + 2)
        lifted = MultiPoly(F, nv, {
            (form.degree - s, s) + (0,) * (nv - 2): c
            for s, c in enumerate(form.coeffs) if not F.is_zero(c)})
        surface = surface + xi * lifted
    payload["surface"] = surface.to_json()
    payload["line"] = Line.standard(F, args.n).to_json()
    _emit(payload, args.pretty)
    return 0


def cmd_localeq(args) -> int:
    field = field_from_tag(args.field)
    st = None
    line = _load_line(args.line, field) if args.line else None
    # ambient dimension comes from the type length, so parse lazily
    entries = [int(t) for t in args.type_.strip().lstrip("(").rstrip(")").split(",")]
    n = len(entries) + 2
    f = _load_surface(args.surface, field, nvars=n + 1)
    d = f.degree()
    st = SplittingType(tuple(entries), n, d)
    eqs = local_equations(f, st, line=line, force_size=args.force_size)
    payload = {
        "n": n, "d": d, "type": st.to_json(), "field": field_tag(field),
        "variables": [f"a{i}{j}" for i in range(2, n + 1) for j in (0, 1)],
        "equations": [e.to_json() for e in eqs],
        "equations_text": [e.to_text() for e in eqs],
    }
    _emit(payload, args.pretty)
    return 0


def cmd_fermat(args) -> int:
    rep = fermat_suite(args.n, args.d, args.prime)
    _emit(rep.to_json(), args.pretty)
    return 0


_HANDLERS = {
    "strata": cmd_strata,
    "split": cmd_split,
    "class": cmd_class,
    "sample": cmd_sample,
    "witness": cmd_witness,
    "localeq": cmd_localeq,
    "fermat": cmd_fermat,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_split_type_flag(argv))
    try:
        return _HANDLERS[args.command](args)
    except ConsistencyError as exc:
        print(f"internal consistency error: {exc}", file=sys.stderr)
        return INTERNAL_EXIT
    except (DomainError, FanoStrataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_EXIT


if __name__ == "__main__":
    sys.exit(main())
