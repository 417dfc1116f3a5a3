"""Command-line front end.

Exit status: 0 on success, 1 on invalid input or failed checks, 2 on a
numerical failure (singular window, non-finite state).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass

import numpy as np

from . import families as fam
from .checks import SUITES, run_suite
from .errors import NumericalError, SingularDenominator
from .factorize import alpha_numeric, partner_coefficients, reconstruct_fg
from .families import FamilyParams, SuperpositionConstants
from .funcs import make_grid, sample

NUMBER = "{:.11e}"
# 12 significant digits leave ~1e-11 relative slack in abs**2 vs re**2 + im**2
ABS_CHECK_RTOL = 5e-11


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    quantity: str
    rate: float
    lam: float
    c_a: complex
    c_b: complex
    t1: float


FIGURES = {
    1: FigureSpec("trig", "solution+v1", 3.5, 2.0, 2 / 7, 7 / 4, 4.0),
    2: FigureSpec("trig", "solution", 3.5, 2.0, 2 / 7, 7 / 4, 4.0),
    3: FigureSpec("trig", "zeta", 3.5, 2.0, 2 / 7, 7 / 4, 4.0),
    4: FigureSpec("trig", "G", 3.5, 2.0, 2 / 7, 7 / 4, 4.0),
    5: FigureSpec("hyp", "solution", 1.0, 0.5, 2.0, -1.0, 6.0),
    6: FigureSpec("hyp", "solution", 1.0, 0.5, 2.0, -1.0, 6.0),
    7: FigureSpec("hyp", "solution", 1.0, 0.5, 2.0, -1.0, 6.0),
    8: FigureSpec("hyp", "zeta", 1.0, 0.5, 2.0, -1.0, 6.0),
    9: FigureSpec("hyp", "G", 1.0, 0.5, 2.0, -1.0, 6.0),
}
FIGURE_N = 2001


class UsageError(Exception):
    pass


def parse_complex(text) -> complex:
    """``"re"`` or ``"re,im"``; numbers pass through."""
    if isinstance(text, (int, float, complex)):
        return complex(text)
    parts = [p.strip() for p in str(text).split(",")]
    try:
        if len(parts) == 1:
            return complex(float(parts[0]))
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 're' or 're,im', got {text!r}")


def _add_family_flags(p, window=True):
    p.add_argument("--kind", choices=["trig", "hyp"])
    p.add_argument("--omega0", type=float)
    p.add_argument("--k0", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    if window:
        p.add_argument("--t0", type=float)
        p.add_argument("--t1", type=float)
        p.add_argument("--n", type=int)


def _add_constants(p):
    for name in ("c1", "c2", "c3", "c4"):
        p.add_argument(f"--{name}", type=parse_complex)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="darboux-osc",
        description="Partner oscillators from alpha-beta factorizations.")
    parser.add_argument("--config", help="JSON file with default flag values")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("family", help="evaluate a family on a time window")
    _add_family_flags(p)
    _add_constants(p)
    p.add_argument("--quantity", default="solution",
                   choices=["solution", "alpha", "beta", "zeta", "F", "G"])
    p.add_argument("--out")

    p = sub.add_parser("figure", help="emit figure data as CSV")
    p.add_argument("--id", type=int, required=False)
    _add_family_flags(p)
    _add_constants(p)
    p.add_argument("--out")

    p = sub.add_parser("scan", help="list singular times in a window")
    _add_family_flags(p)

    p = sub.add_parser("verify", help="run invariant checks")
    p.add_argument("--suite", default="all", choices=["all", *SUITES])

    p = sub.add_parser("factorize", help="quadrature factorization vs closed form")
    _add_family_flags(p)
    p.add_argument("--out")
    return parser


def _load_config(path):
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    cfg = {("lam" if k == "lambda" else k.replace("-", "_")): v for k, v in cfg.items()}
    for key in ("c1", "c2", "c3", "c4"):
        if key in cfg:
            cfg[key] = parse_complex(cfg[key])
    return cfg


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = _load_config(args.config)
        cfg.pop("command", None)
        explicit = vars(args)
        for key, value in cfg.items():
            if explicit.get(key) is None:
                setattr(args, key, value)
    return args


def _params(args, default: FigureSpec | None = None) -> FamilyParams:
    kind = args.kind or (default.kind if default else None)
    if kind is None:
        raise UsageError("--kind is required")
    rate = args.omega0 if kind == "trig" else args.k0
    if rate is None and default is not None and default.kind == kind:
        rate = default.rate
    if rate is None:
        raise UsageError("--omega0 is required" if kind == "trig" else "--k0 is required")
    lam = args.lam if args.lam is not None else (default.lam if default else None)
    if lam is None:
        raise UsageError("--lambda is required")
    try:
        return FamilyParams(kind, rate, lam)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _constants(args, p: FamilyParams, default: FigureSpec | None = None):
    names = ("c1", "c2") if p.kind == fam.TRIG else ("c3", "c4")
    vals = [getattr(args, n, None) for n in names]
    if default is not None and default.kind[0] == p.kind[0]:
        vals = [v if v is not None else d for v, d in zip(vals, (default.c_a, default.c_b))]
    vals = [1.0 if v is None else v for v in vals]
    return SuperpositionConstants(*(complex(v) for v in vals))


def _grid(args, t0=0.0, t1=None, n=FIGURE_N):
    t0 = args.t0 if getattr(args, "t0", None) is not None else t0
    t1 = args.t1 if getattr(args, "t1", None) is not None else t1
    n = args.n if getattr(args, "n", None) is not None else n
    if t1 is None:
        raise UsageError("--t1 is required")
    try:
        return make_grid(t0, t1, n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _fmt(x: float) -> str:
    return NUMBER.format(float(x))


def _rows(t, columns):
    """CSV body lines; complex columns expand to re, im, abs."""
    out = []
    for i, ti in enumerate(t):
        cells = [_fmt(ti)]
        for kind, values in columns:
            v = values[i]
            if kind == "complex":
                cells += [_fmt(v.real), _fmt(v.imag), _fmt(abs(v))]
            else:
                cells.append(_fmt(v))
        out.append(",".join(cells))
    return out


def _check_abs_columns(text: str):
    lines = text.splitlines()
    header = lines[0].split(",")
    if "abs" not in header:
        return
    ir, ii, ia = header.index("re"), header.index("im"), header.index("abs")
    for line in lines[1:]:
        cells = [float(c) for c in line.split(",")]
        re, im, ab = cells[ir], cells[ii], cells[ia]
        if abs(ab * ab - (re * re + im * im)) > ABS_CHECK_RTOL * max(ab * ab, 1e-300):
            raise NumericalError(f"abs column inconsistent in row {line!r}")


def write_csv(path: str | None, header: list[str], lines: list[str]) -> str | None:
    """Write atomically (temp file + rename); ``path=None`` prints to stdout."""
    text = ",".join(header) + "\n" + "".join(line + "\n" for line in lines)
    _check_abs_columns(text)
    if path is None:
        sys.stdout.write(text)
        return None
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".csv")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def _real(values, label):
    values = np.asarray(values, dtype=complex)
    if np.any(np.abs(values.imag) > 1e-12 * np.maximum(1.0, np.abs(values.real))):
        return ("complex", values)
    return ("real", values.real)


def _series(p: FamilyParams, c: SuperpositionConstants, quantity: str, t):
    if quantity in ("solution", "solution+v1"):
        cols = [("complex", np.asarray(fam.solution(p, c, t), dtype=complex))]
        if quantity == "solution+v1":
            cols.append(("real", np.real(fam.trig_v_modes(p.rate, t)[0])))
        return cols
    if quantity in ("alpha", "beta"):
        a, b, _, _ = fam.factors(p, t)
        return [("complex", np.asarray(a if quantity == "alpha" else b, dtype=complex))]
    if quantity == "zeta":
        return [_real(fam.damping_ratio(p, t), "zeta")]
    if quantity == "F":
        return [_real(2 * p.rate * fam.damping_ratio(p, t), "F")]
    return [_real(fam.frequency(p, t), "G")]


def _header(columns, extra=()):
    head = ["t"]
    if len(columns) == 1 and columns[0][0] == "real":
        return head + ["value"]
    for kind, _ in columns[:1]:
        head += ["re", "im", "abs"] if kind == "complex" else ["value"]
    return head + list(extra)


def _emit(p, c, quantity, grid, out, extra=()):
    roots = fam.singularity_scan(p, grid)
    if roots:
        raise SingularDenominator(roots)
    t = grid.samples
    cols = _series(p, c, quantity, t)
    return write_csv(out, _header(cols, extra), _rows(t, cols))


def emit_figure(fig_id: int, args=None) -> str | None:
    """Write the data series for figure ``fig_id``; returns the file path."""
    if fig_id not in FIGURES:
        raise UsageError(f"figure id must be in 1..9, got {fig_id}")
    fig = FIGURES[fig_id]
    args = args or argparse.Namespace()
    for name in ("kind", "omega0", "k0", "lam", "c1", "c2", "c3", "c4", "t0", "t1", "n", "out"):
        if not hasattr(args, name):
            setattr(args, name, None)
    if args.kind is not None and args.kind != fig.kind:
        raise UsageError(f"figure {fig_id} is a {fig.kind} figure")
    p = _params(args, fig)
    c = _constants(args, p, fig)
    grid = _grid(args, 0.0, fig.t1, FIGURE_N)
    out = args.out if args.out is not None else f"figure_{fig_id}.csv"
    extra = ("v1",) if fig.quantity == "solution+v1" else ()
    return _emit(p, c, fig.quantity, grid, out, extra)


def cmd_family(args):
    p = _params(args)
    c = _constants(args, p)
    grid = _grid(args, 0.0, 4.0 if p.kind == fam.TRIG else 6.0)
    _emit(p, c, args.quantity, grid, args.out)
    return 0


def cmd_figure(args):
    if args.id is None:
        raise UsageError("--id is required")
    path = emit_figure(args.id, args)
    print(path)
    return 0


def cmd_scan(args):
    p = _params(args)
    grid = _grid(args, 0.0, None, 20001)
    for root in fam.singularity_scan(p, grid):
        print(f"{root:.10f}")
    return 0


def cmd_verify(args):
    results = run_suite(args.suite)
    for r in results:
        print(r.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def cmd_factorize(args):
    p = _params(args)
    default_t1 = 0.4 if p.kind == fam.TRIG else 2.0
    grid = _grid(args, 0.0, default_t1, 4001)
    roots = fam.singularity_scan(p, grid)
    if roots:
        raise SingularDenominator(roots)
    coeffs = fam.coefficients(p)
    lam_num = fam.numeric_lambda(p, grid.t0)
    sol = alpha_numeric(coeffs, fam.seed(p), lam_num, grid)
    partner = partner_coefficients(coeffs, sol)
    closed = fam.partner_ode(p)
    t = grid.samples
    dev_F = float(np.max(np.abs(partner.F.values - closed.F(t))))
    dev_G = float(np.max(np.abs(partner.G.values - closed.G(t))))
    back = reconstruct_fg(sol)
    rt = max(float(np.max(np.abs(back.f.values - sample(coeffs.f, grid).values))),
             float(np.max(np.abs(back.g.values - sample(coeffs.g, grid).values))))
    print(f"lambda (closed form) = {p.lam:g}, integration constant = {complex(lam_num).real:.12g}")
    print(f"max |F_quad - F_closed| = {dev_F:.3e}")
    print(f"max |G_quad - G_closed| = {dev_G:.3e}")
    print(f"round trip max |(f,g)_rebuilt - (f,g)| = {rt:.3e}")
    if args.out:
        F, G = partner.F.values, partner.G.values
        lines = [",".join(_fmt(x) for x in (t[i], F[i].real, F[i].imag, G[i].real, G[i].imag))
                 for i in range(t.size)]
        write_csv(args.out, ["t", "F_re", "F_im", "G_re", "G_im"], lines)
    return 0


COMMANDS = {
    "family": cmd_family,
    "figure": cmd_figure,
    "scan": cmd_scan,
    "verify": cmd_verify,
    "factorize": cmd_factorize,
}


def run(argv=None) -> int:
    try:
        args = parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
