"""torusloc command line.

Exit codes: 0 success or Verified, 2 Refuted, 3 Inapplicable or a failed
precondition, 1 usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from importlib import resources

from .errors import TorusLocError
from .fpdata import (
    ComponentSet,
    FixedPointSet,
    generate_toric,
    load_dataset,
    product,
    restrict_to_circle,
    segment,
    serialize_dataset,
    simplex,
)
from .localization import CONVENTIONS, character_exact, character_polarized, component_terms, component_coefficient
from .partition import count_Np, find_polarizing, make_sign_assignment, polarize, polarizing_vectors
from .theorems import (
    INAPPLICABLE,
    REFUTED,
    VerificationReport,
    verify_all,
    verify_cancellation,
    verify_halfspace,
    verify_lattice,
    verify_prop42,
)

EXIT_OK, EXIT_USAGE, EXIT_REFUTED, EXIT_INAPPLICABLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _int_vector(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _span(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(":")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected START:END, got {text!r}") from None


def bundled_paths() -> list[str]:
    root = resources.files("torusloc") / "data"
    return sorted(str(p) for p in root.iterdir() if p.name.endswith(".json"))


def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _load_epsilon(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read sign assignment {path}: {exc}") from None
    if not isinstance(doc, dict):
        raise UsageError(f"{path}: expected an object mapping point names to sign lists")
    return doc


@contextmanager
def _mapper(workers: int):
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            yield lambda fn, xs: pool.map(fn, xs, chunksize=8)
    else:
        yield map


# rendering


def _fmt_vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _compact(value) -> str:
    return json.dumps(value, separators=(", ", ": "))


def render_report(rep: dict) -> str:
    lines = [f"{rep['theorem']:<22} {rep['dataset'] or '-':<18} {rep['verdict']}"]
    if rep.get("window"):
        lines.append(f"  window: {_compact(rep['window'])}")
    for key, value in rep["witnesses"].items():
        if key == "counts":
            lines.append("  counts:")
            lines.append(f"    {'l':>12}  {'sum Q+':>10}  {'sum Q-':>10}")
            for l, plus, minus in value:
                shown = _fmt_vec(l) if isinstance(l, list) else str(l)
                mark = "" if plus == minus else "  <-"
                lines.append(f"    {shown:>12}  {plus:>10}  {minus:>10}{mark}")
        elif key == "table":
            lines.append("  table:")
            for row in value:
                lines.append("    " + "  ".join(f"{str(x):>8}" for x in row))
        else:
            lines.append(f"  {key}: {_compact(value)}")
    if rep.get("elapsed_ms") is not None:
        lines.append(f"  elapsed_ms: {rep['elapsed_ms']}")
    return "\n".join(lines)


def _exit_for(reports: list[dict]) -> int:
    verdicts = {r["verdict"] for r in reports}
    if REFUTED in verdicts:
        return EXIT_REFUTED
    if INAPPLICABLE in verdicts:
        return EXIT_INAPPLICABLE
    return EXIT_OK


# commands


def cmd_validate(args, out) -> int:
    status = EXIT_OK
    for path in args.files:
        try:
            d = load_dataset(path)
        except TorusLocError as exc:
            print(f"{path}: invalid: {exc}", file=out)
            status = EXIT_INAPPLICABLE
            continue
        if isinstance(d, FixedPointSet):
            what = f"{len(d.points)} fixed points"
        else:
            what = f"{len(d.components)} components"
        print(f"{path}: ok ({what}, rank {d.rank}, half_dim {d.half_dim})", file=out)
    return status


def cmd_character(args, out) -> int:
    d = load_dataset(args.file)
    if not isinstance(d, FixedPointSet):
        raise TorusLocError("character needs isolated fixed points; use `section4 coeff` for components")
    if args.polarize:
        chi = character_polarized(d, args.polarize, args.convention)
    else:
        chi = character_exact(d, args.convention)
    if args.json:
        doc = {"convention": args.convention, "character": str(chi), "terms": chi.to_json()}
        print(json.dumps(doc, indent=2), file=out)
    else:
        print(str(chi), file=out)
    return EXIT_OK


def _point_partition(d: FixedPointSet, args):
    if args.epsilon:
        return make_sign_assignment(d, _load_epsilon(args.epsilon)), "eps"
    u = args.polarize or ((1,) if d.rank == 1 else find_polarizing(d))
    return polarize(d, u), "polarized"


def _exponent(at, kind: str, rank: int):
    # polarized counts live on the line through u, eps counts in Z^r
    if kind == "polarized":
        if len(at) != 1:
            raise UsageError("--at takes a single integer for a polarized partition")
        return at[0]
    if len(at) != rank:
        raise UsageError(f"--at needs {rank} entries for a sign assignment")
    return at


def cmd_partition(args, out) -> int:
    d = load_dataset(args.file)
    if not isinstance(d, FixedPointSet):
        raise TorusLocError("partition needs isolated fixed points")
    part, kind = _point_partition(d, args)
    rows = []
    for p in d.points:
        row = {
            "point": p.name,
            "moment": list(p.moment),
            "weights": [list(w) for w in p.weights],
            "A": [j + 1 for j in part.A[p.name]],
            "B": [j + 1 for j in part.B[p.name]],
            "sigma": part.sigma[p.name],
        }
        if args.at is not None:
            row["N"] = count_Np(p, _exponent(args.at, kind, d.rank), part)
        rows.append(row)
    header = {"Q_plus": list(part.Q_plus), "Q_minus": list(part.Q_minus)}
    if kind == "eps":
        header["interior"] = [str(x) for x in part.interior]
    else:
        header["u"] = [str(x) for x in part.u]
    if args.figures:
        from .plotting import moment_figure

        moment_figure(d, part, args.figures, _stem(args.file) + "_partition")
    if args.json:
        print(json.dumps({**header, "points": rows}, indent=2), file=out)
        return EXIT_OK
    for k, v in header.items():
        print(f"{k}: {' '.join(map(str, v)) if v else '-'}", file=out)
    cols = ["point", "moment", "weights", "A", "B", "sigma"] + (["N"] if args.at is not None else [])
    print("  ".join(f"{c:<14}" for c in cols).rstrip(), file=out)
    for row in rows:
        cells = [_compact(row[c]) if isinstance(row[c], list) else str(row[c]) for c in cols]
        print("  ".join(f"{c:<14}" for c in cells).rstrip(), file=out)
    return EXIT_OK


def _run_one(theorem: str, d, name: str, args, mapper) -> list[VerificationReport]:
    timing = args.timing
    if theorem == "all":
        return verify_all(d, dataset=name, window=args.window, convention=args.convention, timing=timing, mapper=mapper)
    if theorem == "prop42":
        if not isinstance(d, ComponentSet):
            raise TorusLocError("prop42 needs a component dataset")
        return [verify_prop42(d, n0_max=args.n0_max, dataset=name, timing=timing)]
    if isinstance(d, ComponentSet):
        raise TorusLocError(f"{theorem} needs isolated fixed points")
    if theorem == "halfspace":
        return [verify_halfspace(d, dataset=name, timing=timing)]
    sa = make_sign_assignment(d, _load_epsilon(args.epsilon)) if args.epsilon else None
    if sa is not None:
        mode, u = "eps", None
    elif args.polarize:
        mode, u = "polarized", args.polarize
    elif d.rank == 1:
        mode, u = "circle", None
    else:
        mode, u = "polarized", find_polarizing(d)
    if theorem == "cancellation":
        return [
            verify_cancellation(
                d, mode, u=u, eps=sa, window=args.window, convention=args.convention,
                dataset=name, mapper=mapper, timing=timing,
            )
        ]
    return [verify_lattice(d, mode, u=u, eps=sa, dataset=name, timing=timing)]


def cmd_verify(args, out) -> int:
    paths = args.files or bundled_paths()
    reports = []
    with _mapper(args.parallel) as mapper:
        for path in paths:
            d = load_dataset(path)
            try:
                reports.extend(r.to_json() for r in _run_one(args.theorem, d, _stem(path), args, mapper))
            except TorusLocError as exc:
                if not args.files or len(paths) > 1:
                    reports.append(VerificationReport(args.theorem, _stem(path), INAPPLICABLE, {"reason": str(exc)}).to_json())
                else:
                    raise
    if args.figures:
        from .plotting import cancellation_figure

        for i, rep in enumerate(reports):
            if rep["witnesses"].get("counts"):
                cancellation_figure(rep, args.figures, f"{rep['dataset']}_{rep['theorem']}_{i}")
    if args.json:
        print(json.dumps(reports if len(reports) != 1 else reports[0], indent=2), file=out)
    else:
        print("\n\n".join(render_report(r) for r in reports), file=out)
    return _exit_for(reports)


def cmd_toric(args, out) -> int:
    if args.shape == "simplex":
        poly = simplex(args.dilation, args.dim)
    elif args.shape == "segment":
        poly = segment(args.dilation)
    else:
        parts = []
        for item in args.factors.split(","):
            kind, _, k = item.partition(":")
            k = int(k or 1)
            if kind == "simplex":
                parts.append(simplex(k))
            elif kind == "segment":
                parts.append(segment(k))
            else:
                raise UsageError(f"unknown factor {kind!r}; expected simplex or segment")
        poly = parts[0]
        for extra in parts[1:]:
            poly = product(poly, extra)
    fps = generate_toric(poly)
    if args.restrict:
        fps = restrict_to_circle(fps, args.restrict)
    out.write(serialize_dataset(fps))
    return EXIT_OK


def cmd_section4(args, out) -> int:
    d = load_dataset(args.file)
    cs = ComponentSet.from_points(d) if isinstance(d, FixedPointSet) else d
    if args.polarize:
        u = args.polarize
    else:
        u = polarizing_vectors([w for c in cs.components for w in c.weights], 1)[0]
    if args.k is not None:
        ks = [args.k]
    else:
        a, b = args.range
        ks = list(range(a, b + 1))
    rows = []
    for k in ks:
        terms = component_terms(cs, u, k)
        rows.append({
            "k": k,
            "coefficient": component_coefficient(cs, u, k),
            "tau_plus": sum(t["A"] * t["D"] for t in terms if t["tau"] == 1),
            "tau_minus": sum(t["A"] * t["D"] for t in terms if t["tau"] == -1),
        })
    if args.json:
        from .theorems import jsonable

        print(json.dumps({"u": list(u), "rows": jsonable(rows)}, indent=2), file=out)
        return EXIT_OK
    print(f"u = {_fmt_vec(u)}", file=out)
    print(f"{'k':>6}  {'coefficient':>12}  {'tau +1':>10}  {'tau -1':>10}", file=out)
    for r in rows:
        print(f"{r['k']:>6}  {str(r['coefficient']):>12}  {str(r['tau_plus']):>10}  {str(r['tau_minus']):>10}", file=out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="torusloc", description="Fixed-point data of torus actions: characters and checks.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(p, polarize=True, epsilon=False):
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("-o", "--output", metavar="FILE", help="write output to FILE")
        if polarize:
            p.add_argument("--polarize", type=_int_vector, metavar="u1,...,ur")
        if epsilon:
            p.add_argument("--epsilon", metavar="FILE", help="JSON object: point name -> list of +1/-1")

    p = sub.add_parser("validate", help="check dataset files")
    p.add_argument("files", nargs="+")
    common(p, polarize=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("character", help="character of the equivariant index")
    p.add_argument("file")
    p.add_argument("--convention", choices=CONVENTIONS, default="paper")
    common(p)
    p.set_defaults(func=cmd_character)

    p = sub.add_parser("partition", help="sign partition of the fixed points")
    p.add_argument("file")
    p.add_argument("--at", type=_int_vector, metavar="l", help="also count N_p at this exponent")
    p.add_argument("--figures", metavar="DIR")
    common(p, epsilon=True)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="run verifiers (bundled corpus when no file is given)")
    p.add_argument("theorem", choices=["cancellation", "lattice", "halfspace", "prop42", "all"])
    p.add_argument("files", nargs="*")
    p.add_argument("--convention", choices=CONVENTIONS, default="paper")
    p.add_argument("--window", type=int, default=40)
    p.add_argument("--n0-max", type=int, default=50, dest="n0_max")
    p.add_argument("--timing", action="store_true", help="record elapsed_ms in reports")
    p.add_argument("--parallel", type=int, default=0, metavar="N", help="worker processes for count windows")
    p.add_argument("--figures", metavar="DIR", help="write PNG and CSV of the count tables")
    common(p, epsilon=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("toric", help="fixed-point data of a toric manifold")
    p.add_argument("shape", choices=["simplex", "segment", "product"])
    p.add_argument("--dilation", type=int, default=1)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--factors", default="segment:1,segment:1", help="product factors, e.g. simplex:1,segment:2")
    p.add_argument("--restrict", type=_int_vector, metavar="X", help="restrict to the circle generated by X")
    p.add_argument("-o", "--output", metavar="FILE")
    p.set_defaults(func=cmd_toric, json=False)

    p = sub.add_parser("section4", help="coefficients from fixed components")
    s4 = p.add_subparsers(dest="action", parser_class=_Parser)
    s4.required = True
    q = s4.add_parser("coeff")
    q.add_argument("file")
    grp = q.add_mutually_exclusive_group(required=True)
    grp.add_argument("--k", type=int)
    grp.add_argument("--range", type=_span, metavar="START:END")
    common(q)
    q.set_defaults(func=cmd_section4)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        print(parser.format_usage().rstrip(), file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    out = sys.stdout
    fh = None
    try:
        if getattr(args, "output", None):
            fh = out = open(args.output, "w", encoding="utf-8")
        return args.func(args, out)
    except UsageError as exc:
        print(f"torusloc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TorusLocError as exc:
        print(f"torusloc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INAPPLICABLE
    except OSError as exc:
        print(f"torusloc: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if fh is not None:
            fh.close()


if __name__ == "__main__":
    sys.exit(main())
