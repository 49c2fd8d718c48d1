"""Command-line front end.

Exit codes
----------
0  success
1  I/O failure
2  usage error (bad arguments or preconditions)
3  input file could not be parsed
4  covariance matrix is not physical
5  search budget exhausted before convergence
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .entanglement import log_negativity, pt_symplectic_spectrum
from .errors import AsymmetricInput, BudgetExhausted, NonFiniteEntry, NotPhysical, ParseError
from .mode_transforms import U2Chart, standard_form
from .state_sampling import SampleRanges, census, pure_tms
from .symplectic_core import (
    PHYSICAL_TOL,
    StandardFormParams,
    is_physical,
    is_pure,
    make_covariance,
    symplectic_spectrum,
)
from .tps_search import (
    ABS_SEPARABLE_TOL,
    AXES,
    DEFAULT_BUDGET,
    DEFAULT_GRID,
    SweepSpec,
    extremal,
    sweep,
)
from .tps_search import surface as compute_surface

log = logging.getLogger("gaussrel")

ORDERING = "qA,pA,qB,pB"
FILE_SYMMETRY_TOL = 1e-9

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_NOT_PHYSICAL = 4
EXIT_BUDGET = 5


class UsageError(Exception):
    pass


def write_atomic(path, text: str) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def matrix_to_json(V, label: str | None = None) -> str:
    doc = {"ordering": ORDERING, "matrix": np.asarray(V, dtype=float).tolist()}
    if label is not None:
        doc["label"] = label
    return json.dumps(doc, indent=2) + "\n"


def read_matrix(path) -> np.ndarray:
    """Load a MatrixFile; raises ParseError on any schema violation."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(doc, dict):
        raise ParseError(f"{path}: top level must be an object")
    if doc.get("ordering") != ORDERING:
        raise ParseError(f"{path}: 'ordering' must be exactly {ORDERING!r}")
    raw = doc.get("matrix")
    try:
        m = np.array(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: 'matrix' is not numeric") from exc
    if m.shape != (4, 4):
        raise ParseError(f"{path}: 'matrix' must be 4x4, got shape {m.shape}")
    try:
        return make_covariance(m, tol=FILE_SYMMETRY_TOL)
    except (AsymmetricInput, NonFiniteEntry) as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _floats(text: str, n: int, name: str) -> list[float]:
    parts = text.split(",")
    if len(parts) != n:
        raise argparse.ArgumentTypeError(f"{name} needs {n} comma-separated values")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{name}: not a number in {text!r}") from None


def _grid(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("--grid takes 4 integers, e.g. 9,8,8,8") from None
    if len(vals) != 4 or min(vals) < 1:
        raise argparse.ArgumentTypeError("--grid takes 4 positive integers")
    return vals


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _emit(text: str, out) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _chart_dict(chart) -> dict:
    return {k: float(v) for k, v in zip(AXES, chart)}


def cmd_tms(args) -> int:
    if not (np.isfinite(args.r) and args.r >= 0):
        raise UsageError("squeeze parameter r must be >= 0")
    _emit(matrix_to_json(pure_tms(args.r), label=f"two-mode squeezed r={args.r!r}"), args.out)
    return EXIT_OK


def analyze(V, tol=PHYSICAL_TOL, grid=DEFAULT_GRID, budget=DEFAULT_BUDGET, seed=0) -> dict:
    """Full report for one covariance matrix; the schema does not depend on the state."""
    if not is_physical(V, tol):
        raise NotPhysical("covariance matrix violates the uncertainty principle")
    spec = symplectic_spectrum(V)
    pt = pt_symplectic_spectrum(V)
    params, _ = standard_form(V, tol)
    hi = extremal(V, "max", budget=budget, seed=seed, grid=grid)
    lo = extremal(V, "min", budget=budget, seed=seed, grid=grid)
    verdict = "absolutely_separable" if hi.value <= ABS_SEPARABLE_TOL else "relatively_entangled"
    return {
        "symplectic_spectrum": {"nu_plus": spec.nu_plus, "nu_minus": spec.nu_minus},
        "pt_spectrum": {"nu_plus": pt.nu_plus, "nu_minus": pt.nu_minus},
        "log_negativity": log_negativity(V).log_negativity,
        "pure": is_pure(V),
        "standard_form": {"a": params.a, "b": params.b, "c_plus": params.c_plus, "c_minus": params.c_minus},
        "e_plus": hi.value,
        "e_minus": lo.value,
        "witness_charts": {"max": _chart_dict(hi.chart), "min": _chart_dict(lo.chart)},
        "evaluations": {"max": hi.evaluations, "min": lo.evaluations},
        "converged": {"max": hi.converged, "min": lo.converged},
        "classification": verdict,
    }


def _report_text(rep: dict) -> str:
    sf = rep["standard_form"]
    lines = [
        f"symplectic spectrum   nu+ = {_fmt(rep['symplectic_spectrum']['nu_plus'])}"
        f"  nu- = {_fmt(rep['symplectic_spectrum']['nu_minus'])}",
        f"partial transpose     nu+ = {_fmt(rep['pt_spectrum']['nu_plus'])}"
        f"  nu- = {_fmt(rep['pt_spectrum']['nu_minus'])}",
        f"log-negativity        {_fmt(rep['log_negativity'])} bits",
        f"pure                  {rep['pure']}",
        f"standard form         a = {_fmt(sf['a'])}  b = {_fmt(sf['b'])}"
        f"  c+ = {_fmt(sf['c_plus'])}  c- = {_fmt(sf['c_minus'])}",
        f"E+ (max over modes)   {_fmt(rep['e_plus'])} bits at {rep['witness_charts']['max']}",
        f"E- (min over modes)   {_fmt(rep['e_minus'])} bits at {rep['witness_charts']['min']}",
        f"classification        {rep['classification']}",
    ]
    return "\n".join(lines) + "\n"


def cmd_analyze(args) -> int:
    V = read_matrix(args.input)
    rep = analyze(V, tol=args.tol, grid=args.grid, budget=args.budget, seed=args.seed)
    text = json.dumps(rep, indent=2, sort_keys=True) + "\n"
    if args.out:
        write_atomic(args.out, text)
    sys.stdout.write(text if args.json else _report_text(rep))
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be >= 2")
    V = read_matrix(args.input)
    try:
        spec = SweepSpec(args.axis, args.steps, U2Chart(*args.fixed), args.lo, args.hi)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = sweep(V, spec)
    fixed = ",".join(_fmt(v) for v in args.fixed)
    out = [f"# gaussrel sweep axis={args.axis} steps={args.steps} fixed={fixed}", "angle,log_negativity"]
    out += [f"{_fmt(a)},{_fmt(e)}" for a, e in rows]
    _emit("\n".join(out) + "\n", args.out)
    return EXIT_OK


def cmd_surface(args) -> int:
    if not (np.isfinite(args.r) and args.r >= 0):
        raise UsageError("squeeze parameter r must be >= 0")
    eta_lo, eta_hi = args.eta_range
    if not 0 < eta_lo <= eta_hi:
        raise UsageError("--eta-range needs 0 < lo <= hi")
    if args.eta_steps < 1 or args.theta_steps < 2:
        raise UsageError("need --eta-steps >= 1 and --theta-steps >= 2")
    a, c = np.cosh(2 * args.r) / 2, np.sinh(2 * args.r) / 2
    etas = np.linspace(eta_lo, eta_hi, args.eta_steps)
    thetas = np.linspace(0.0, np.pi / 2, args.theta_steps)
    surf = compute_surface(StandardFormParams(a, a, c, -c), etas, thetas, tuple(args.phases))
    phases = ",".join(_fmt(v) for v in args.phases)
    out = [f"# gaussrel surface r={_fmt(args.r)} squeeze=(eta,1/eta) phases={phases}", "eta,theta,log_negativity"]
    for i, eta in enumerate(surf.etas):
        out += [f"{_fmt(eta)},{_fmt(t)},{_fmt(e)}" for t, e in zip(surf.thetas, surf.values[i])]
    _emit("\n".join(out) + "\n", args.out)
    if args.out:
        for eta, t, e in zip(surf.etas, surf.valley_thetas, surf.valley_values):
            print(f"eta={_fmt(eta)}  valley theta={_fmt(t)}  E_N={_fmt(e)}")
    return EXIT_OK


def cmd_census(args) -> int:
    mode = "generic-via-T" if args.generic_via_T else args.mode
    if args.generic_via_T and args.mode != "generic":
        raise UsageError("--generic-via-T applies to --mode generic")
    try:
        ranges = SampleRanges(*args.ranges)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    def progress(k, n):
        if args.verbose and (k % 500 == 0 or k == n):
            print(f"classified {k}/{n}", file=sys.stderr)

    rep = census(mode, args.n, ranges, args.seed, args.budget, grid=args.grid, progress=progress)
    doc = rep.to_dict()
    doc["config"] = {
        "n": args.n,
        "ranges": list(args.ranges),
        "budget": args.budget,
        "grid": list(args.grid),
        "tol": ABS_SEPARABLE_TOL,
        "seed": args.seed,
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=_positive_float, default=PHYSICAL_TOL, help="physicality tolerance")
    common.add_argument("--grid", type=_grid, default=DEFAULT_GRID, help="chart grid t,p,p1,p2")
    common.add_argument("--budget", type=_positive_int, default=DEFAULT_BUDGET, help="evaluation cap per search")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output file (stdout if omitted)")

    p = argparse.ArgumentParser(prog="gaussrel", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("tms", parents=[common], help="write a two-mode squeezed vacuum matrix file")
    s.add_argument("r", type=float)
    s.set_defaults(func=cmd_tms)

    s = sub.add_parser("analyze", parents=[common], help="spectra, negativity, E+/E- and classification")
    s.add_argument("input")
    s.add_argument("--json", action="store_true", help="print the JSON report instead of text")
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("sweep", parents=[common], help="E_N along one chart axis (CSV)")
    s.add_argument("input")
    s.add_argument("--axis", choices=AXES, default="theta")
    s.add_argument("--steps", type=int, default=181)
    s.add_argument("--fixed", type=lambda t: _floats(t, 4, "--fixed"), default=[0.0, 0.0, 0.0, 0.0],
                   help="theta,phi,phi1,phi2; the swept entry is ignored")
    s.add_argument("--lo", type=float, default=0.0)
    s.add_argument("--hi", type=float, default=None)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("surface", parents=[common], help="E_N over (eta, theta) for a squeezed TMS (CSV)")
    s.add_argument("r", type=float)
    s.add_argument("--eta-range", type=lambda t: _floats(t, 2, "--eta-range"), default=[0.5, 2.0])
    s.add_argument("--eta-steps", type=int, default=31)
    s.add_argument("--theta-steps", type=int, default=181)
    s.add_argument("--phases", type=lambda t: _floats(t, 3, "--phases"), default=[0.0, 0.0, 0.0])
    s.set_defaults(func=cmd_surface)

    s = sub.add_parser("census", parents=[common], help="absolute-separability census (JSON)")
    s.add_argument("--mode", choices=("standard", "generic"), default="standard")
    s.add_argument("--n", type=_positive_int, default=7746)
    s.add_argument("--ranges", type=lambda t: _floats(t, 4, "--ranges"), default=[0.5, 1.5, -1.0, 1.0],
                   help="diag_lo,diag_hi,offdiag_lo,offdiag_hi")
    s.add_argument("--generic-via-T", dest="generic_via_T", action="store_true",
                   help="generic states as random local maps of standard-form draws")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_census)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))  # exits with EXIT_USAGE
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotPhysical as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_PHYSICAL
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK

