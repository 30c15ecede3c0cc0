"""Command-line front end: ``hankel transform | verify | basis``.

Exit codes: 0 success, 1 a verification failed, 2 bad input, 3 quadrature
did not converge. Output goes to stdout or, with ``--out PATH``, to a file
written atomically (temporary file then rename).
"""
from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from .errors import HankelError, QuadratureError
from .function_model import DEFAULT_GRID, make_grid, parse_spec
from .hankel import hankel_profile, hankel_transform
from .intertwiners import m_transform, t_image, t_transform, t_transform_quadrature
from .kfinite_basis import basis_vector, gram_matrix, hankel_fixed_point_error
from .special_functions import as_order
from .suites import SUITE_PARAMETER, SUITES

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_QUADRATURE = 0, 1, 2, 3
FORMATS = ("csv", "json")

_COMPLEX = re.compile(
    r"^\s*(?P<re>[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?"
    r"(?:(?P<im>[+-](?:(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?)i)?\s*$")


class InputError(HankelError, ValueError):
    pass


def parse_complex(text: str) -> complex:
    """``a``, ``a+bi``, ``a-bi``, ``bi`` or ``-i``."""
    m = _COMPLEX.match(text)
    if not m or (m.group("re") is None and m.group("im") is None):
        # a pure imaginary like "0.5i" has no leading sign
        pure = re.fullmatch(r"\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i\s*", text)
        if pure:
            return complex(0, float(pure.group(1)))
        raise InputError(f"cannot read {text!r} as a complex number (use a+bi)")
    real = float(m.group("re")) if m.group("re") else 0.0
    im_text = m.group("im")
    if im_text is None:
        return complex(real, 0)
    imag = float(im_text + "1") if im_text in "+-" else float(im_text)
    return complex(real, imag)


def _format_float(v: float) -> str:
    return f"{v:.17g}"


@dataclass
class RunConfig:
    command: str
    nu: complex | None = None
    d: int | None = None
    tol: float | None = None
    grid: str = DEFAULT_GRID
    spec: str | None = None
    format: str = "csv"
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.tol is not None and not self.tol > 0:
            raise InputError("tolerance must be positive")
        if self.format not in FORMATS:
            raise InputError(f"format must be one of {FORMATS}")

    def echo(self) -> dict:
        out = asdict(self)
        if self.nu is not None:
            out["nu"] = [self.nu.real, self.nu.imag]
        return out


# ------------------------------------------------------------------ output

def _csv_table(header: str, rows) -> str:
    lines = [header]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else _format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, allow_nan=True) + "\n"


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".hankel-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_output(args) -> tuple[str, str | None]:
    """``--out csv|json`` names a format on stdout; anything else is a path."""
    fmt, out = args.format, args.out
    if out in FORMATS:
        return out, None
    return fmt or "csv", out


# ------------------------------------------------------------------ commands

def _weight(value) -> int:
    d = float(value)
    if d != int(d) or d < 1:
        raise InputError(f"d must be a positive integer, got {value}")
    return int(d)


def cmd_transform(config: RunConfig, out: str | None) -> int:
    kind = config.extra.get("transform", "hankel")
    nu = as_order(config.nu if config.nu is not None else 0)
    f = parse_spec(config.spec or "", nu=nu.value)
    tol = config.tol or 1e-12
    grid = make_grid(config.grid)
    if kind == "hankel":
        values = hankel_transform(f, config.grid, tol).values
    elif kind == "hankel-exact":
        values = hankel_profile(f).local(grid)
    elif kind == "t":
        values = t_transform(f, grid) if not f.max_frequency else t_transform_quadrature(f, grid, tol)
    elif kind == "m":
        d = _weight(nu.value.real if nu.value.imag == 0 else math.nan)
        values = m_transform(t_image(f, None, d=d), grid, d, tol=max(tol, 1e-12))
    else:
        raise InputError(f"unknown transform {kind!r}")
    if config.format == "csv":
        text = _csv_table("x,re,im", ((x, v.real, v.imag) for x, v in zip(grid, values)))
    else:
        text = _json_text({
            "tool": "hankel", "version": __version__, "config": config.echo(),
            "x": grid.tolist(), "re": np.real(values).tolist(), "im": np.imag(values).tolist(),
        })
    _emit(text, out)
    return EXIT_OK


def _run_suite(name: str, config: RunConfig):
    fn = SUITES[name]
    kind = SUITE_PARAMETER[name]
    kwargs = {}
    if kind == "nu":
        kwargs["nu"] = as_order(config.nu if config.nu is not None else 1).value
    elif kind == "d":
        kwargs["d"] = _weight(config.d if config.d is not None else 2)
    if "seed" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
        kwargs["seed"] = config.seed
    report = fn(**kwargs)
    data = report.to_dict()
    if config.tol is not None:
        for check in data["checks"]:
            check["tolerance"] = config.tol
            check["passed"] = bool(check["max_error"] <= config.tol)
        data["pass"] = all(c["passed"] for c in data["checks"])
    return data


def _threads() -> int:
    raw = os.environ.get("HANKEL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise InputError(f"HANKEL_THREADS must be an integer, got {raw!r}")


def cmd_verify(config: RunConfig, out: str | None) -> int:
    suite = config.extra.get("suite", "all")
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        if name not in SUITES:
            raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    workers = min(_threads(), len(names))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(lambda n: _run_suite(n, config), names))
    else:
        reports = [_run_suite(n, config) for n in names]
    passed = all(r["pass"] for r in reports)
    if config.format == "json":
        body = reports[0] if len(reports) == 1 else {"suites": reports}
        text = _json_text({"tool": "hankel", "version": __version__, "config": config.echo(),
                           **body, "pass": passed})
    else:
        rows = [(r["suite"], c["name"], c["max_error"], c["tolerance"],
                 "pass" if c["passed"] else "FAIL") for r in reports for c in r["checks"]]
        text = _csv_table("suite,check,max_error,tolerance,result",
                          ((s, f'"{n}"', e, t, p) for s, n, e, t, p in rows))
    _emit(text, out)
    if not passed:
        for r in reports:
            for c in r["checks"]:
                if not c["passed"]:
                    print(f"FAILED {r['suite']}: {c['name']} max_error={c['max_error']:.3g} "
                          f"tol={c['tolerance']:.3g} case={json.dumps(c['worst_case'])}",
                          file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAILED


def cmd_basis(config: RunConfig, out: str | None) -> int:
    d = _weight(config.d if config.d is not None else 1)
    N = int(config.extra.get("n", 5))
    if N < 0:
        raise InputError("n must be nonnegative")
    tol = config.tol or 1e-8
    gram = gram_matrix(N, d)
    deviation = float(np.max(np.abs(gram - np.eye(N + 1))))
    passed = deviation <= tol
    fixed = None
    if config.extra.get("check_hankel_fixed_point"):
        fixed = hankel_fixed_point_error(d, config.grid)
        passed = passed and fixed <= 1e-9
    grid = make_grid(config.grid)
    samples = [(n, basis_vector(n, d).profile.local(grid)) for n in range(N + 1)]
    if config.format == "json":
        text = _json_text({
            "tool": "hankel", "version": __version__, "config": config.echo(),
            "gram": gram.tolist(), "gram_deviation": deviation,
            "hankel_fixed_point_error": fixed, "pass": passed,
            "samples": {str(n): {"re": v.real.tolist(), "im": v.imag.tolist()} for n, v in samples},
            "x": grid.tolist(),
        })
    else:
        rows = [(str(n), x, val.real, val.imag) for n, v in samples for x, val in zip(grid, v)]
        text = _csv_table("n,x,re,im", rows)
    _emit(text, out)
    print(f"gram deviation {deviation:.3g} (tol {tol:.3g})"
          + ("" if fixed is None else f"; H_d e_0 - e_0 = {fixed:.3g}"), file=sys.stderr)
    return EXIT_OK if passed else EXIT_FAILED


# ------------------------------------------------------------------ argument parsing

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hankel", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--grid", default=DEFAULT_GRID)
        p.add_argument("--format", choices=FORMATS, default=None)
        p.add_argument("--out", default=None, help="output path, or csv/json for stdout")
        p.add_argument("--seed", type=int, default=0)

    t = sub.add_parser("transform", help="apply a transform to a function spec")
    t.add_argument("--nu", default="0")
    t.add_argument("--spec", required=True)
    t.add_argument("--transform", choices=("hankel", "hankel-exact", "t", "m"), default="hankel")
    common(t)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", default="all")
    v.add_argument("--nu", default=None)
    v.add_argument("--d", default=None)
    common(v)

    b = sub.add_parser("basis", help="K-finite basis samples and Gram matrix")
    b.add_argument("--d", default="1")
    b.add_argument("--n", type=int, default=5)
    b.add_argument("--check-hankel-fixed-point", action="store_true")
    common(b)
    return parser


def _config(args) -> tuple[RunConfig, str | None]:
    fmt, out = _resolve_output(args)
    if args.command == "verify" and args.format is None and args.out not in FORMATS:
        fmt = "json"
    if args.command == "basis" and args.format is None and args.out not in FORMATS:
        fmt = "json"
    nu = parse_complex(args.nu) if getattr(args, "nu", None) is not None else None
    d = None
    if getattr(args, "d", None) is not None:
        d = _weight(parse_complex(args.d).real) if parse_complex(args.d).imag == 0 else _weight(math.nan)
    extra = {}
    for key in ("transform", "suite", "n", "check_hankel_fixed_point"):
        if hasattr(args, key):
            extra[key] = getattr(args, key)
    config = RunConfig(args.command, nu, d, args.tol, args.grid, getattr(args, "spec", None),
                       fmt, args.seed, extra)
    return config, out


COMMANDS = {"transform": cmd_transform, "verify": cmd_verify, "basis": cmd_basis}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        config, out = _config(args)
        if config.nu is not None:
            as_order(config.nu)
        make_grid(config.grid)
        return COMMANDS[config.command](config, out)
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_QUADRATURE
    except (HankelError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
