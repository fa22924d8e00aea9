"""Command-line front end: ``cohomfold {verify,degree,apply,table,realize}``.

Exit codes: 0 ok, 2 usage or malformed input, 3 inconclusive estimate,
4 domain failure (input not on the manifold).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import weyl
from .encoding import (
    EncodingError,
    decode_complex_vector,
    decode_matrix,
    decode_real_vector,
    dumps,
    encode_complex_vector,
    encode_matrix,
    encode_real_vector,
)
from .errors import ConsistencyError, DomainError, InvalidParameterError
from .linalg import RandomSource, check_special_unitary
from .maps import SelfMap, parse_map
from .numtopo import degree_estimate, get_model
from .su3 import RealizationPlan, realize_degree
from .verify import consistent_grid, grid_data, run_suite

EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE, EXIT_DOMAIN = 0, 2, 3, 4

TABLE_COLUMNS = [
    "example",
    "|W|",
    "codim0",
    "codim1",
    "j",
    "k",
    "deg_formula",
    "deg_oracle",
    "deg_numeric",
    "L_formula",
    "L_oracle",
    "flags",
]


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return "" if x is None else str(x)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _stamp(payload: dict, args) -> dict:
    if not args.reproducible:
        payload["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return payload


def _write_csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


# -- verify -------------------------------------------------------------------


def cmd_verify(args) -> int:
    try:
        report = run_suite(args.suite)
    except KeyError:
        raise UsageError(f"unknown suite {args.suite!r}") from None
    ok = all(c.passed for checks in report.values() for c in checks)
    if args.format == "csv":
        rows = [
            [suite, c.name, c.residual, c.tolerance, c.passed]
            for suite, checks in report.items()
            for c in checks
        ]
        text = _write_csv(rows, ["suite", "check", "residual", "tolerance", "passed"])
    else:
        payload = {
            "suite": args.suite,
            "passed": ok,
            "checks": {
                suite: [
                    {"name": c.name, "residual": c.residual, "tolerance": c.tolerance, "passed": c.passed}
                    for c in checks
                ]
                for suite, checks in report.items()
            },
        }
        text = dumps(_stamp(payload, args)) + "\n"
    _emit(text, args.output)
    return EXIT_OK if ok else 1


# -- degree -------------------------------------------------------------------


def _resolve_map(spec: str, manifold: str):
    try:
        fn = parse_map(spec)
        model = get_model(manifold)
    except (InvalidParameterError, ValueError, KeyError) as exc:
        raise UsageError(str(exc)) from None
    if not fn.compatible(model):
        raise UsageError(f"map {fn} does not act on {model.name}")
    return fn, model


def cmd_degree(args) -> int:
    fn, model = _resolve_map(args.map, args.manifold)
    if args.samples < 1000:
        raise UsageError("--samples must be at least 1000")
    if fn.kind == "realize" and not isinstance(realize_degree(fn.k), RealizationPlan):
        raise UsageError(f"degree {fn.k} is not realized by a composition")
    est = degree_estimate(fn, model, args.samples, RandomSource(args.seed), h=args.h, workers=args.workers)
    payload = {"manifold": model.name, "map": str(fn), "seed": args.seed, "h": args.h, **est.to_json()}
    if args.format == "csv":
        keys = list(payload)
        text = _write_csv([[payload[k] for k in keys]], keys)
    else:
        text = dumps(_stamp(payload, args)) + "\n"
    _emit(text, args.output)
    return EXIT_OK if est.accepted else EXIT_INCONCLUSIVE


# -- apply --------------------------------------------------------------------

_MATRIX_KINDS = {"psi", "rho", "realize", "transpose"}


def cmd_apply(args) -> int:
    try:
        fn = parse_map(args.map)
    except InvalidParameterError as exc:
        raise UsageError(str(exc)) from None
    try:
        with open(args.input, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise EncodingError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None

    kind = fn.kind
    if kind == "identity":
        kind = "matrix" if isinstance(raw, dict) else ("complex" if raw and isinstance(raw[0], list) else "real")
    if kind in _MATRIX_KINDS or kind == "matrix":
        b = decode_matrix(raw)
        if b.shape != (3, 3):
            raise DomainError(f"expected a 3x3 matrix, got n = {b.shape[0]}")
        check_special_unitary(b)
        out = encode_matrix(fn(b))
    elif kind in ("fold", "complex"):
        out = encode_complex_vector(fn(decode_complex_vector(raw)))
    else:
        p = decode_real_vector(raw)
        if fn.kind == "antipodal" and abs(np.linalg.norm(p) - 1) > 1e-9:
            raise DomainError("expected a unit vector")
        out = encode_real_vector(fn(p))
    _emit(dumps(out) + "\n", args.output)
    return EXIT_OK


# -- table --------------------------------------------------------------------

_J_EVEN = [-6, -4, -2, 2, 4, 6]
_J_ODD = [-5, -3, -1, 1, 3, 5]


def _parse_int_list(text: str, step: int = 1) -> list[int]:
    """``1,3,5`` or ranges ``lo..hi`` (every ``step``-th value from ``lo``)."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1, step))
        elif part:
            out.append(int(part))
    return out


def _numeric_map(entry: weyl.CohomOneData, k: int):
    """Model and map realizing the folding numerically, if there is one."""
    name = entry.name
    if name == "SU3" and k % 2:
        return get_model("su3"), SelfMap("psi", k)
    if name.startswith("S") and name[1:].isdigit():
        return get_model(name.lower()), SelfMap("power", k)
    if name.startswith("CP") and k % 2:
        return get_model(name.lower()), SelfMap("fold", k)
    return None


def _table_row(entry, j: int, args) -> list:
    k = entry.fold_k(j)
    flags = []
    deg_f = deg_o = deg_n = l_f = l_o = None
    try:
        deg_f = weyl.degree_formula(entry, j)
        deg_o = weyl.degree_oracle(entry, j, retry=True)
        if deg_f != deg_o:
            flags.append("degree-discrepancy")
    except InvalidParameterError:
        flags.append("degree-undefined")
    try:
        l_f = weyl.lefschetz_formula(entry, j)
        l_o = weyl.lefschetz_oracle(entry, j)
        if l_f != l_o:
            flags.append("lefschetz-discrepancy")
    except InvalidParameterError:
        flags.append("lefschetz-undefined")
    if args.numeric:
        found = _numeric_map(entry, k)
        if found is not None:
            model, fn = found
            est = degree_estimate(fn, model, args.samples, RandomSource(args.seed), h=args.h, workers=args.workers)
            deg_n = est.rounded if est.accepted else None
            if not est.accepted:
                flags.append("numeric-inconclusive")
            elif deg_o is not None and est.rounded != deg_o:
                flags.append("numeric-discrepancy")
    return [entry.name, entry.weyl_order, entry.codim0, entry.codim1, j, k, deg_f, deg_o, deg_n, l_f, l_o, ";".join(flags)]


def cmd_table(args) -> int:
    js: list[int] = []
    if args.j:
        js.extend(_parse_int_list(args.j))
    if args.j_even:
        js.extend(_J_EVEN)
    if args.j_odd:
        js.extend(_J_ODD)
    if not js:
        js = _J_ODD + _J_EVEN
    js = sorted(set(js), key=lambda v: (abs(v), v))

    entries = []
    if args.catalog:
        for name in args.catalog.split(","):
            try:
                entries.append(weyl.lookup(name.strip()))
            except KeyError as exc:
                raise UsageError(str(exc.args[0])) from None
    if args.weyl:
        orders = _parse_int_list(args.weyl, step=2)
        if any(w <= 0 or w % 2 for w in orders):
            raise UsageError("--weyl values must be positive and even")
        wanted = None
        if args.parities:
            pair = [p.strip() for p in args.parities.split(",")]
            if len(pair) != 2:
                raise UsageError("--parities takes two values, e.g. odd,even")
            wanted = tuple(weyl.Parity.of(p) for p in pair)
        for W, p0, p1 in consistent_grid(orders):
            if wanted is None or (p0, p1) == wanted:
                entries.append(grid_data(W, p0, p1))
    if not entries:
        entries = list(weyl.catalog().values())

    rows = [_table_row(entry, j, args) for entry in entries for j in js if j != 0]
    if args.format == "json":
        payload = {"columns": TABLE_COLUMNS, "rows": [dict(zip(TABLE_COLUMNS, r)) for r in rows]}
        text = dumps(_stamp(payload, args)) + "\n"
    else:
        text = _write_csv(rows, TABLE_COLUMNS)
    _emit(text, args.output)
    return EXIT_OK


# -- realize ------------------------------------------------------------------


def cmd_realize(args) -> int:
    plan = realize_degree(args.d)
    if isinstance(plan, RealizationPlan):
        payload = {
            "degree": args.d,
            "status": "realizable",
            "m": plan.m,
            "ell": plan.ell,
            "psi_k": plan.psi_k,
            "power": plan.power,
            "composition": plan.describe(),
        }
    else:
        payload = {"degree": args.d, "status": plan.value}
    _emit(dumps(payload) + "\n", args.output)
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, estimate: bool = False, fmt: str = "json") -> None:
    p.add_argument("--config", help="JSON file of default option values (flags win)")
    p.add_argument("--output", "-o", help="write to this file instead of stdout")
    p.add_argument("--format", choices=["json", "csv"], default=fmt)
    p.add_argument("--reproducible", action="store_true", help="omit the timestamp field")
    if estimate:
        p.add_argument("--samples", type=int, default=200_000)
        p.add_argument("--seed", type=int, default=42)
        p.add_argument("--h", type=float, default=1e-4, help="finite-difference step")
        p.add_argument("--workers", type=int, default=os.cpu_count() or 1)


def build_parser() -> tuple[argparse.ArgumentParser, dict]:
    parser = argparse.ArgumentParser(prog="cohomfold", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = sub.add_parser("verify", help="run invariant suites")
    p.add_argument("suite", help="halfangle, su3, sphere, cpm, theory or all")
    _common(p)
    p.set_defaults(func=cmd_verify)
    subs["verify"] = p

    p = sub.add_parser("degree", help="Monte-Carlo mapping degree")
    p.add_argument("--manifold", required=True, help="su3, s<n> or cp<m>")
    p.add_argument("--map", required=True, help="e.g. psi:3, rho:2, power:4, fold:3")
    _common(p, estimate=True)
    p.set_defaults(func=cmd_degree)
    subs["degree"] = p

    p = sub.add_parser("apply", help="apply a map to a JSON-encoded point")
    p.add_argument("map", help="e.g. psi:-1, rho:2, fold:3")
    p.add_argument("input", help="JSON matrix or vector file")
    _common(p)
    p.set_defaults(func=cmd_apply)
    subs["apply"] = p

    p = sub.add_parser("table", help="degree and Lefschetz tables")
    p.add_argument("--catalog", help="comma-separated example names, e.g. SU3,M7_1")
    p.add_argument("--weyl", help="even Weyl group orders, e.g. 4 or 2..12")
    p.add_argument("--parities", help="codimension parities of N0,N1, e.g. odd,even")
    p.add_argument("--j", help="comma-separated j values")
    p.add_argument("--j-even", action="store_true", help="j in {+-2, +-4, +-6}")
    p.add_argument("--j-odd", action="store_true", help="j in {+-1, +-3, +-5}")
    p.add_argument("--numeric", action="store_true", help="add Monte-Carlo degrees where a model exists")
    _common(p, estimate=True, fmt="csv")
    p.set_defaults(func=cmd_table)
    subs["table"] = p

    p = sub.add_parser("realize", help="realize a degree on SU(3) as rho o psi")
    p.add_argument("d", type=int)
    _common(p)
    p.set_defaults(func=cmd_realize)
    subs["realize"] = p
    return parser, subs


def _load_config(argv: list[str]) -> dict:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return {}
    try:
        with open(known.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load config {known.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config file must hold a JSON object")
    return {key.replace("-", "_"): value for key, value in cfg.items()}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subs = build_parser()
    try:
        cfg = _load_config(argv)
        for p in subs.values():
            known = {a.dest for a in p._actions}
            p.set_defaults(**{k: v for k, v in cfg.items() if k in known})
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EncodingError as exc:
        print(f"error: malformed input at {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, ConsistencyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
