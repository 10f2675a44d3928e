"""Command-line interface.

Subcommands
-----------
sweep      run a parameter sweep, write the curve data as CSV and print
           a singularity summary (each kink bracket tagged PHYSICAL or
           MATHEMATICAL)
point      all correlation measures of a single parameter point
rdm        print the two-qubit reduced density matrix (or the
           closed-form oracle for built-in models)
crossings  transfer-matrix level-crossing brackets over a range
validate   check a model config file

Models are selected with ``--model {ladder,xyz,three_body}`` (built-in)
or ``--config FILE``. For the ladder the sweep parameter is the rung
coordinate x = g/(2a^2), which is also what ``--g`` and ``--range``
refer to; the CSV reports both g and x. Exit codes: 0 success, 2 bad
arguments, 3 model or config errors (per-point sweep failures are
recorded in the CSV status column instead). ``MPSBELL_THREADS`` caps
sweep parallelism.
"""

from __future__ import annotations

import argparse
import math
import os
import re
import sys
from pathlib import Path

import numpy as np

from . import correlations, models, mps, sweep as sweep_mod
from .config import ConfigError, load_model_config

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MODEL = 3

CSV_HEADER = ["g", "B", "C", "D", "xi", "lambda1_abs", "lambda2_abs",
              "gap_ratio", "status"]


class ModelError(RuntimeError):
    pass


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return f"{value:.12g}"


def _parse_range(spec: str):
    parts = spec.split(":")
    if len(parts) != 3:
        raise ValueError("range must be MIN:MAX:STEP")
    lo, hi, step = (float(p) for p in parts)
    if step <= 0:
        raise ValueError("range step must be positive")
    if hi <= lo:
        raise ValueError("range must satisfy MIN < MAX")
    n = int(round((hi - lo) / step))
    if abs(lo + n * step - hi) > 1e-9 * max(1.0, abs(hi), abs(lo)):
        raise ValueError("range STEP must divide MAX - MIN")
    return tuple(lo + k * step for k in range(n + 1))


def _load_family(args) -> models.ModelFamily:
    if getattr(args, "config", None):
        path = Path(args.config)
        try:
            text = path.read_text()
        except OSError as exc:
            raise ModelError(f"cannot read config {path}: {exc}") from exc
        try:
            return load_model_config(text)
        except ConfigError as exc:
            raise ModelError(f"{path}: {exc}") from exc
    name = args.model
    if name == "ladder":
        return models.ladder_family(args.a)   # a = 0 raises ValueError -> exit 2
    if name in models.BUILTIN_FAMILIES:
        return models.BUILTIN_FAMILIES[name]()
    raise ModelError(f"unknown model {name!r}")


def _default_r(family: models.ModelFamily, args) -> int:
    # misuse of --r is an argument error (exit 2), not a model error
    r = getattr(args, "r", None)
    if family.d == 4:
        if r not in (None, models.RUNG):
            raise ValueError("d = 4 families use the rung as the two-qubit state; omit --r")
        return models.RUNG
    if family.d != 2:
        raise ValueError(f"pair states need a d = 2 or d = 4 family (got d = {family.d})")
    if r is not None and r < 1:
        raise ValueError("--r must be >= 1")
    return 1 if r is None else int(r)


def _limit(args):
    n = getattr(args, "limit", None)
    return mps.INFINITE if n is None else int(n)


def _threads() -> int | None:
    raw = os.environ.get("MPSBELL_THREADS", "")
    try:
        return max(1, int(raw)) if raw else None
    except ValueError:
        return None


def _sweep_rows_to_csv(result, family) -> str:
    is_ladder = family.parameter_to_g is not None
    header = CSV_HEADER + (["x"] if is_ladder else [])
    lines = [",".join(header)]
    for row in result.rows:
        g_raw = family.underlying_g(row.g)
        cells = [_fmt(g_raw), _fmt(row.bcf), _fmt(row.concurrence),
                 _fmt(row.discord), _fmt(row.xi), _fmt(row.lambda1_abs),
                 _fmt(row.lambda2_abs), _fmt(row.gap_ratio), row.status]
        if is_ladder:
            cells.append(_fmt(row.g))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def cmd_sweep(args) -> int:
    family = _load_family(args)
    r = _default_r(family, args)
    grid = _parse_range(args.range)
    measures = tuple(m.strip() for m in args.measures.split(",") if m.strip())
    spec = sweep_mod.SweepSpec(family=family, g_values=grid, r=r,
                               measures=measures, limit=_limit(args))
    result = sweep_mod.run_sweep(spec, max_workers=_threads())
    Path(args.output).write_text(_sweep_rows_to_csv(result, family))
    reports = sweep_mod.find_singularities(result, sensitivity=args.sensitivity)
    axis = family.parameter_name
    if not reports:
        print("no singularities detected")
    for rep in reports:
        measures_str = ",".join(rep.affected_measures) or "-"
        print(f"singularity {axis} in [{_fmt(rep.g_star[0])}, {_fmt(rep.g_star[1])}] "
              f"measures={measures_str} kind={rep.kind} ({rep.evidence})")
    print(f"wrote {len(result.rows)} rows to {args.output}")
    return EXIT_OK


def _point_state(family, g, r, limit):
    model = family.matrix_fn(g)
    if limit is mps.INFINITE:
        if r == models.RUNG:
            rho, _ = mps.rdm_adjacent_auto(model, 1)
        else:
            rho, _ = mps.rdm_pair_auto(model, r)
        return rho
    if r == models.RUNG:
        return mps.rdm_adjacent(model, 1, limit)
    return mps.rdm_pair(model, r, limit)


def cmd_point(args) -> int:
    family = _load_family(args)
    r = _default_r(family, args)
    spectrum = mps.transfer_spectrum(family.matrix_fn(args.g))
    xi = mps.correlation_length(spectrum)
    rho = _point_state(family, args.g, r, _limit(args))
    rep = correlations.classify(rho)
    values = [
        (family.parameter_name, args.g),
        ("B", rep.bcf), ("C", rep.concurrence), ("D", rep.discord),
        ("I", rep.mutual_information), ("J", rep.classical_correlation),
        ("nonlocal", rep.nonlocal_), ("entangled", rep.entangled),
        ("discordant", rep.discordant), ("xi", xi),
    ]
    if args.format == "csv":
        print(",".join(name for name, _ in values))
        print(",".join(str(v).lower() if isinstance(v, bool) else _fmt(v)
                       for _, v in values))
    else:
        for name, v in values:
            print(f"{name} = {str(v).lower() if isinstance(v, bool) else _fmt(v)}")
    return EXIT_OK


def cmd_rdm(args) -> int:
    family = _load_family(args)
    if family.d == 2 or family.d == 4:
        r = _default_r(family, args)
    else:
        # matrix dump works for any physical dimension (d^2 x d^2)
        r = args.r or 1
    if args.closed_form:
        if not family.closed_form_available:
            raise ModelError(f"no closed form for model {family.name!r}")
        rho = models.closed_form_rdm(family, args.g, r)
    else:
        rho = _point_state(family, args.g, r, _limit(args))
    for row in np.asarray(rho):
        print(" ".join(f"{v.real:.12g}{v.imag:+.12g}j" for v in row))
    return EXIT_OK


def cmd_crossings(args) -> int:
    family = _load_family(args)
    grid = _parse_range(args.range)
    for lo, hi in mps.level_crossing_scan(family, grid):
        print(f"{_fmt(lo)}:{_fmt(hi)}")
    return EXIT_OK


def cmd_validate(args) -> int:
    path = Path(args.config)
    try:
        text = path.read_text()
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        return EXIT_MODEL
    try:
        family = load_model_config(text)
    except ConfigError as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_MODEL
    lo, hi = family.parameter_domain
    probe = 0.5 * (lo + hi)
    print(f"name = {family.name}")
    print(f"d = {family.d}, D = {family.D}, domain = [{_fmt(lo)}, {_fmt(hi)}]")
    print(f"probe point g = {_fmt(probe)}")
    try:
        spectrum = mps.transfer_spectrum(family.matrix_fn(probe))
        print(f"transfer spectrum: |lambda1| = {_fmt(abs(spectrum.eigenvalues[0]))}, "
              f"gap ratio = {_fmt(spectrum.gap_ratio)}")
        rho, n = mps.rdm_adjacent_auto(family.matrix_fn(probe), 1)
        smallest = float(np.linalg.eigvalsh(rho)[0])
        note = "" if n is None else f" (finite N = {n})"
        print(f"single-site state physical{note}: min eigenvalue = {_fmt(smallest)}")
    except (ValueError, RuntimeError) as exc:
        print(f"invalid: probe-point check failed: {exc}", file=sys.stderr)
        return EXIT_MODEL
    print("valid")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpsbell",
        description="Bell-CHSH, concurrence and discord on matrix-product-state "
                    "pair states; MPS-QPT detection and classification.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_model_args(p, with_a=True):
        p.add_argument("--model", choices=sorted(models.BUILTIN_FAMILIES),
                       help="built-in model family")
        p.add_argument("--config", help="model config file (alternative to --model)")
        if with_a:
            p.add_argument("--a", type=float, default=1.0,
                           help="ladder scale parameter (default 1)")

    p = sub.add_parser("sweep", help="sweep the family parameter, write CSV")
    add_model_args(p)
    p.add_argument("--range", required=True, help="MIN:MAX:STEP (x for the ladder)")
    p.add_argument("--r", type=int, help="pair distance (d = 2 families)")
    p.add_argument("--measures", default="bcf,concurrence,discord,xi",
                   help="comma list from bcf,concurrence,discord,xi")
    p.add_argument("--limit", type=int,
                   help="finite chain length (default: thermodynamic limit)")
    p.add_argument("--output", default="sweep.csv", help="CSV output path")
    p.add_argument("--sensitivity", type=float, default=10.0,
                   help="kink detector sensitivity (default 10)")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("point", help="correlation report at one parameter value")
    add_model_args(p)
    p.add_argument("--g", type=float, required=True,
                   help="parameter value (x for the ladder)")
    p.add_argument("--r", type=int, help="pair distance (d = 2 families)")
    p.add_argument("--limit", type=int)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("rdm", help="print the pair reduced density matrix")
    add_model_args(p)
    p.add_argument("--g", type=float, required=True)
    p.add_argument("--r", type=int)
    p.add_argument("--limit", type=int)
    p.add_argument("--closed-form", action="store_true",
                   help="print the closed-form oracle state instead")
    p.set_defaults(func=cmd_rdm)

    p = sub.add_parser("crossings", help="transfer-spectrum level crossings")
    add_model_args(p)
    p.add_argument("--range", required=True, help="MIN:MAX:STEP")
    p.set_defaults(func=cmd_crossings)

    p = sub.add_parser("validate", help="validate a model config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_validate)
    return parser


# Flags whose values may start with '-' (negative numbers, ranges);
# argparse would otherwise read them as option strings.
_NEGATIVE_VALUE_FLAGS = {"--range", "--g", "--a"}
_NEGATIVE_VALUE_RE = re.compile(r"-[0-9.][0-9.eE+:-]*$")


def _merge_negative_values(argv):
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if (tok in _NEGATIVE_VALUE_FLAGS and i + 1 < len(argv)
                and _NEGATIVE_VALUE_RE.fullmatch(argv[i + 1])):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_merge_negative_values(argv))
    if args.command != "validate" and not (getattr(args, "model", None)
                                           or getattr(args, "config", None)):
        parser.error("one of --model or --config is required")
    try:
        return args.func(args)
    except ValueError as exc:
        # bad numeric arguments (range syntax, r constraints, ...)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ModelError, ConfigError, mps.DegenerateTransferSpectrum) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
