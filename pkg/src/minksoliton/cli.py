"""Command-line entry point.

Three subcommands:

* ``analyze``    -- run the full identity/classification/soliton analysis on
                    a catalog entry or a user chart file;
* ``case-sweep`` -- randomized solvability sweep of one canonical form;
* ``list``       -- print the catalog manifest.

Exit codes: 0 on success, 1 on usage or configuration errors, 2 when the
universal identity checks fail.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import analysis, canonical, catalog, exprs
from .lorentz import FormVariant


def _fmt_float(x):
    return float(f"{x:.12g}")


def round_floats(obj):
    """12-significant-digit canonicalization, so reports re-serialize
    byte-identically after a JSON round trip."""
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def dump_json(report):
    return json.dumps(round_floats(report), indent=2) + "\n"


class UsageError(ValueError):
    pass


def _parse_params(items):
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects name=value, got {item!r}")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = float(v)
        except ValueError:
            out[k.strip()] = v.strip()
    return out


def _parse_grid(text):
    try:
        counts = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise UsageError(f"--grid expects N,N,N, got {text!r}") from None
    if len(counts) != 3:
        raise UsageError("--grid expects exactly three counts")
    if any(c < 2 for c in counts):
        raise UsageError("grid needs at least 2 samples per axis")
    return counts


def _parse_box(text):
    box = []
    for part in text.split(","):
        bits = part.split(":")
        if len(bits) != 2:
            raise UsageError(f"--box expects lo:hi,lo:hi,lo:hi, got {text!r}")
        box.append((float(bits[0]), float(bits[1])))
    if len(box) != 3:
        raise UsageError("--box expects three intervals")
    return tuple(box)


def _write_output(text, out_path):
    if not out_path or out_path == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as err:
        raise UsageError(f"cannot write report to {out_path!r}: {err}")


# -- analyze -------------------------------------------------------------------

def _text_report(report):
    lines = []
    lines.append(f"entry: {report['entry']}")
    if report["parameters"]:
        pstr = ", ".join(f"{k}={v}" for k, v in report["parameters"].items())
        lines.append(f"parameters: {pstr}")
    grid = report["grid"]
    if "counts" in grid:
        lines.append(f"grid: {'x'.join(map(str, grid['counts']))} over "
                     f"{grid['box']}")
    ids = report["identities"]
    lines.append(f"identities (tau={ids['tau']:.1e}): "
                 f"{'PASS' if ids['pass'] else 'FAIL'}")
    for key in sorted(ids):
        if key in ("pass", "tau", "lemma1", "epsilon"):
            continue
        lines.append(f"  {key:32s} {ids[key]:.6e}")
    lines.append(f"  {'lemma1 (position/support)':32s} "
                 f"{ids['lemma1'][0]:.6e} {ids['lemma1'][1]:.6e}")
    lines.append(f"  epsilon = {ids['epsilon']:+.0f}")

    cls = report["classification"]
    hist = ", ".join(f"{k}:{v}" for k, v in sorted(cls["form_histogram"].items()))
    lines.append(f"classification: {hist}")
    if cls["center_form"]:
        cf = cls["center_form"]
        params = ", ".join(f"{p:.9g}" for p in cf["parameters"])
        lines.append(f"  center form: {cf['variant']}({params}), min poly "
                     f"{[round(c, 9) for c in cf['minimal_polynomial']]}")
    st = cls["structure"]
    lines.append("  structure: " + ", ".join(
        f"{k}={st[k]}" for k in ("totally_umbilical", "isoparametric",
                                 "generalized_constant_ratio",
                                 "constant_mean_curvature")))

    sol = report["soliton"]
    lines.append(f"soliton (headline {sol['headline_mode']}): "
                 f"verdict={sol['verdict']} lambda={sol['lambda_fit']:.12g} "
                 f"spread={sol['lambda_spread']:.3e} "
                 f"residual={sol['residual_sup']:.3e}")
    for mode in ("corrected", "paper_form"):
        if mode in sol:
            m = sol[mode]
            lines.append(f"  {mode:11s} lambda={m['lambda_fit']:+.12g} "
                         f"spread={m['lambda_spread']:.3e} "
                         f"residual={m['residual_sup']:.3e} "
                         f"verdict={m['verdict']}")
    lines.append(f"  route_agreement={sol['route_agreement']:.3e} "
                 f"gradient_check={sol['gradient_check']:.3e} "
                 f"lemma1={[f'{x:.3e}' for x in sol['lemma1']]}")
    if "case_system_consistency" in sol:
        cc = sol["case_system_consistency"]
        lines.append(f"  case-system consistency ({cc['convention']}): "
                     f"max residual {cc['max_residual']:.3e} at "
                     f"lambda={cc['lambda']:.12g}")

    if report["expectations"]:
        lines.append("expectations (claimed vs computed):")
        lines.append(f"  {'key':28s} {'claimed':>22s} {'computed':>22s} "
                     f"{'source':>8s}  agrees")
        for row in report["expectations"]:
            claimed = row["claimed"]
            computed = row["computed"]
            agrees = {True: "yes", False: "NO", None: "-"}[row["agrees"]]
            lines.append(f"  {row['key']:28s} {str(claimed):>22s} "
                         f"{str(computed):>22s} {row['source']:>8s}  {agrees}")
    return "\n".join(lines) + "\n"


def cmd_analyze(args):
    params = _parse_params(args.param)
    grid_counts = _parse_grid(args.grid)
    mode = args.ricci_mode

    is_file = os.path.sep in args.entry or os.path.exists(args.entry)
    if is_file and args.entry not in catalog.ENTRIES:
        if not os.path.exists(args.entry):
            raise UsageError(f"chart file {args.entry!r} does not exist")
        box = _parse_box(args.box) if args.box else None
        try:
            imm = exprs.immersion_from_file(args.entry, params, box)
        except exprs.ParseError as err:
            raise UsageError(f"bad chart file: {err}")
        if args.orientation:
            imm = imm.with_orientation(float(args.orientation))
        grid = analysis.grid_points(imm.domain, grid_counts)
        report = analysis.analyze_immersion(imm, grid, ricci_mode=mode)
        report["parameters"] = params
        report["grid"] = {"counts": list(grid_counts),
                          "box": [list(iv) for iv in imm.domain],
                          "n_points": int(len(grid))}
        entry_obj, merged = None, params
    else:
        if args.entry not in catalog.ENTRIES:
            raise UsageError(f"unknown catalog entry {args.entry!r}; "
                             f"try 'list'")
        try:
            report = analysis.analyze_entry(
                args.entry, params, grid_counts, ricci_mode=mode,
                orientation_override=(float(args.orientation)
                                      if args.orientation else None))
        except (KeyError, ValueError) as err:
            raise UsageError(str(err))
        entry_obj = catalog.get(args.entry)

    if args.format == "json":
        text = dump_json(report)
    elif args.format == "text":
        text = _text_report(report)
    else:  # csv: pointwise scalars
        if entry_obj is not None:
            imm, merged = entry_obj.build(**params)
            grid = analysis.default_grid(entry_obj, merged, grid_counts)
        header, rows = analysis.pointwise_table(imm, grid)
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{x:.12g}" if isinstance(x, float) else x
                             for x in row])
        text = buf.getvalue()

    _write_output(text, args.out)
    return 0 if report["identities"]["pass"] else 2


# -- case-sweep ----------------------------------------------------------------

_FORM_NAMES = {
    "diagonalizable": FormVariant.DIAGONALIZABLE,
    "complex_pair": FormVariant.COMPLEX_PAIR,
    "jordan2": FormVariant.JORDAN_2,
    "jordan3": FormVariant.JORDAN_3,
}


def cmd_case_sweep(args):
    if args.form not in _FORM_NAMES:
        raise UsageError(f"unknown form {args.form!r}; "
                         f"known: {sorted(_FORM_NAMES)}")
    form = _FORM_NAMES[args.form]
    eps_values = (1, -1) if args.epsilon == "both" else (int(args.epsilon),)
    if form is not FormVariant.DIAGONALIZABLE:
        eps_values = (1,)
    all_rows = []
    summaries = []
    for eps in eps_values:
        summary = canonical.sweep(form, args.count, seed=args.seed,
                                  epsilon=eps)
        summaries.append(summary)
        for row in summary.rows:
            row = dict(row)
            row["epsilon"] = eps
            all_rows.append(row)

    param_keys = [k for k in ("a1", "a2", "a3", "b1") if k in all_rows[0]]
    header = param_keys + ["epsilon", "kind", "solvable", "branch",
                           "lambda", "rho", "witness"]
    if args.format == "json":
        payload = {
            "form": args.form,
            "count": args.count,
            "seed": args.seed,
            "misclassifications": sum(s.misclassifications
                                      for s in summaries),
            "solvable": sum(s.solvable_count for s in summaries),
            "infeasible": sum(s.infeasible_count for s in summaries),
            "rows": [
                {k: row.get(k) for k in header} for row in all_rows
            ],
        }
        text = dump_json(payload)
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in all_rows:
            writer.writerow([
                f"{row[k]:.12g}" if isinstance(row.get(k), float) else row.get(k)
                for k in header
            ])
        text = buf.getvalue()
    _write_output(text, args.out)
    mis = sum(s.misclassifications for s in summaries)
    if mis:
        sys.stderr.write(f"warning: {mis} draws disagree with the expected "
                         "branch structure\n")
    return 0


def cmd_list(args):
    entries = catalog.manifest()
    if args.format == "json":
        _write_output(dump_json(entries), args.out)
        return 0
    lines = []
    for e in entries:
        pstr = ", ".join(f"{k}={v}" for k, v in e["parameters"].items())
        lines.append(f"{e['name']:28s} [{pstr or 'no parameters'}] "
                     f"{e['description']}")
        for exp in e["expectations"]:
            lines.append(f"    {exp['source']:>8s}  {exp['key']} = "
                         f"{exp['claimed']}"
                         + (f"   ({exp['note']})" if exp["note"] else ""))
    _write_output("\n".join(lines) + "\n", args.out)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="minksoliton",
        description="Curvature and Ricci-soliton verification for "
                    "hypersurfaces of Minkowski 4-space")
    sub = ap.add_subparsers(dest="command", required=True)

    pa = sub.add_parser("analyze", help="analyze a catalog entry or chart file")
    pa.add_argument("--entry", required=True,
                    help="catalog entry name or chart expression file")
    pa.add_argument("--param", action="append", metavar="NAME=VALUE",
                    help="entry parameter (repeatable)")
    pa.add_argument("--grid", default="5,5,5", metavar="N,N,N",
                    help="samples per chart axis (default 5,5,5)")
    pa.add_argument("--ricci-mode", default="both",
                    choices=["corrected", "paper_form", "both"])
    pa.add_argument("--format", default="text",
                    choices=["text", "json", "csv"])
    pa.add_argument("--out", default="-", help="output path (default stdout)")
    pa.add_argument("--box", default=None, metavar="LO:HI,LO:HI,LO:HI",
                    help="sampling box for chart files")
    pa.add_argument("--orientation", default=None, choices=["1", "-1"],
                    help="override the normal orientation sign")
    pa.set_defaults(func=cmd_analyze)

    ps = sub.add_parser("case-sweep",
                        help="randomized solvability sweep of one canonical form")
    ps.add_argument("--form", required=True,
                    choices=sorted(_FORM_NAMES))
    ps.add_argument("--count", type=int, default=10000)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--epsilon", default="both", choices=["1", "-1", "both"])
    ps.add_argument("--format", default="csv", choices=["csv", "json"])
    ps.add_argument("--out", default="-")
    ps.set_defaults(func=cmd_case_sweep)

    pl = sub.add_parser("list", help="print the catalog manifest")
    pl.add_argument("--format", default="text", choices=["text", "json"])
    pl.add_argument("--out", default="-")
    pl.set_defaults(func=cmd_list)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as err:
        return 1 if err.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as err:
        sys.stderr.write(f"error: {err}\n")
        return 1
    except Exception as err:  # geometry/config failures are config errors
        sys.stderr.write(f"error: {type(err).__name__}: {err}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
