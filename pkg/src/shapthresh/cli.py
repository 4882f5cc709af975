"""Command-line interface.

Exit codes: 0 success, 1 a required verification check failed, 2 parse or
usage error, 3 size limit exceeded, 4 domain error (e.g. a constant or
non-monotone function given to ``threshold``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from .exceptions import DomainError, SizeError, SpecError
from .functions import BooleanFunction, FunctionSpec, build
from .measures import influences, mu, mu_derivative
from .power import banzhaf, shapley_exact, shapley_owen, shapley_sampled
from .spectral import transform
from .threshold import (
    DEFAULT_GRID,
    banzhaf_shapley_report,
    shapley_interval_bound,
    shapley_interval_report,
    threshold_interval,
)
from .verify import SUITES, Check, run_suite

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_SIZE, EXIT_DOMAIN = 0, 1, 2, 3, 4


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def g17(x) -> str:
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def load_spec(arg: str) -> BooleanFunction:
    """Read a FunctionSpec from a path, ``-`` for stdin, or an inline JSON object."""
    if arg == "-":
        text = sys.stdin.read()
    elif arg.lstrip().startswith("{"):
        text = arg
    else:
        try:
            text = Path(arg).read_text()
        except OSError as exc:
            raise SpecError(f"cannot read spec file {arg!r}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"spec is not valid JSON: {exc}") from exc
    return build(FunctionSpec.from_dict(data))


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([g17(v) for v in r])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    return obj


# ----------------------------------------------------------------------
# commands; each returns (data, header, rows) where header/rows feed CSV


def cmd_power(args):
    f = load_spec(args.spec)
    if args.method == "exact":
        pv = shapley_exact(f)
    elif args.method == "owen":
        pv = shapley_owen(f, args.nodes)
    elif args.method == "banzhaf":
        pv = banzhaf(f)
    else:
        if args.seed is None:
            raise SpecError("--seed is required for --method sampled")
        pv = shapley_sampled(f, f.n, args.samples, args.seed)
    rows = pv.rows()
    header = ["player", "value"] + (["stderr"] if pv.stderr is not None else [])
    data = {"function": f.name, "method": pv.method, "total": pv.total(), "rows": rows}
    return data, header, [[r[h] for h in header] for r in rows]


def cmd_curve(args):
    f = load_spec(args.spec)
    rows = []
    for k in range(1, args.points + 1):
        p = k / (args.points + 1)
        rows.append([p, mu(f, p), math.fsum(influences(f, p).tolist()), mu_derivative(f, p)])
    header = ["p", "mu", "total_influence", "mu_derivative"]
    data = {"function": f.name, "monotone": f.is_monotone(), "rows": [dict(zip(header, r)) for r in rows]}
    return data, header, rows


def cmd_threshold(args):
    f = load_spec(args.spec)
    rep = threshold_interval(f, args.eps, args.grid)
    data = {
        "threshold": rep.to_dict(),
        "shapley_interval": shapley_interval_report(f, args.eps, report=rep).to_dict(),
        "interval_bound": shapley_interval_bound(f, args.eps).__dict__,
    }
    try:
        data["banzhaf_shapley"] = banzhaf_shapley_report(f, args.eps).to_dict()
    except DomainError as exc:
        data["banzhaf_shapley"] = {"hypothesis_violated": str(exc)}
    header = ["p", "max_influence", "argmax", "total_influence"]
    rows = [[r.p, r.max_influence, r.argmax, r.total_influence] for r in rep.grid]
    return data, header, rows


def cmd_spectrum(args):
    f = load_spec(args.spec)
    spec = transform(f, args.p)
    rows = [[s, lv, c] for s, lv, c in spec.rows() if not args.nonzero or abs(c) > 1e-12]
    data = {
        "function": f.name,
        "p": args.p,
        "parseval_total": spec.weight(),
        "expectation_f2": mu(f, args.p),
        "rows": [{"bitmask": s, "level": lv, "coefficient": c} for s, lv, c in rows],
    }
    return data, ["bitmask", "level", "coefficient"], rows


def cmd_verify(args):
    checks = run_suite(args.suite, args.seed)
    data = {"suite": args.suite, "checks": [c.to_dict() for c in checks],
            "failed": sum(c.required and not c.passed for c in checks)}
    rows = [[c.suite, c.name, c.passed, c.required, "" if c.value is None else c.value, c.detail] for c in checks]
    return data, ["suite", "name", "passed", "required", "value", "detail"], rows


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shapthresh", description="Power indices, biased spectra and threshold intervals of Boolean functions.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, spec=True):
        if spec:
            p.add_argument("spec", help="FunctionSpec JSON file, '-' for stdin, or an inline JSON object")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write output here instead of stdout")
        p.add_argument("--threads", type=int, default=1, help="worker cap; results do not depend on it")

    p = sub.add_parser("power", help="Shapley or Banzhaf values")
    common(p)
    p.add_argument("--method", choices=("exact", "owen", "sampled", "banzhaf"), default="exact")
    p.add_argument("--samples", type=int, default=10000, help="permutations for --method sampled")
    p.add_argument("--nodes", type=int, default=None, help="quadrature nodes for --method owen")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("curve", help="mu_p, total influence and d mu/dp on a p grid")
    common(p)
    p.add_argument("--points", type=int, default=99)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("threshold", help="threshold interval and Shapley/Banzhaf reports")
    common(p)
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--grid", type=int, default=DEFAULT_GRID)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("spectrum", help="p-biased Fourier coefficients")
    common(p)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--nonzero", action="store_true", help="omit coefficients below 1e-12")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run invariant sweeps")
    common(p, spec=False)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)
    return parser


def _params(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "out", "threads")}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        data, header, rows = args.func(args)
    except SizeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except SpecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    manifest = {
        "command": args.command,
        "parameters": _params(args),
        "seed": getattr(args, "seed", None),
        "version": tool_version(),
        "duration_s": round(time.perf_counter() - start, 6),
    }
    if args.format == "json":
        _emit(json.dumps({"manifest": manifest, "data": _jsonable(data)}, indent=2) + "\n", args.out)
    else:
        _emit(_csv_text(header, rows), args.out)
        side = json.dumps(_jsonable(manifest))
        if args.out:
            Path(args.out + ".manifest.json").write_text(side + "\n")
        else:
            print(f"manifest: {side}", file=sys.stderr)
    if args.command == "verify":
        for c in data["checks"]:
            print(Check(**c).line(), file=sys.stderr)
        return EXIT_FAIL if data["failed"] else EXIT_OK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
