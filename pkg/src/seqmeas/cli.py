"""Command line interface.

Subcommands:

  verify      run the randomised verification suites
  example     build the rotation-angle pair showing an order effect with
              A-B-A repeatability, and report every condition on it
  check       evaluate a measurement pair loaded from JSON
  search      maximise the order effect under repeatability constraints
  shift-demo  the truncated-shift instance whose absorption defect sits
              on the boundary column

Every long flag can also be supplied through the environment as
SEQMEAS_<FLAG> with dashes turned into underscores (for example
SEQMEAS_EQ_TOL=1e-8); explicit command line values win.  Exit status is 0
for success, 1 when a requested check or search came out negative, and 2
for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys

import numpy as np

from . import criteria, instances, search, verify
from .exceptions import ToolkitError
from .linalg import Tolerances
from .measurement import pair_from_json, pair_to_json, validate_pair

SCHEMA_VERSION = 1

_THETA_PATTERN = re.compile(r"^[0-9pi+\-*/(). \t]+$")


class _UsageError(Exception):
    pass


def parse_angle(text: str) -> float:
    """Parse an angle that may mention pi, e.g. '0.5', 'pi/4', '-3*pi/8'."""
    s = text.strip()
    if not s:
        raise _UsageError("empty angle")
    try:
        plain = float(s)
    except ValueError:
        pass
    else:
        if not math.isfinite(plain):
            raise _UsageError(f"angle {text!r} is not a finite number")
        return plain
    if not _THETA_PATTERN.fullmatch(s) or "pi" not in s:
        raise _UsageError(f"cannot parse angle {text!r}")
    try:
        value = eval(s, {"__builtins__": {}}, {"pi": math.pi})  # noqa: S307
    except Exception as exc:
        raise _UsageError(f"cannot parse angle {text!r}: {exc}") from None
    if not isinstance(value, (int, float)) or not math.isfinite(value):
        raise _UsageError(f"angle {text!r} is not a finite number")
    return float(value)


def parse_amplitude(text: str) -> complex:
    """Parse a complex amplitude like '0.5' or '0.3+0.4j'."""
    try:
        value = complex(text.strip().replace(" ", ""))
    except ValueError:
        raise _UsageError(f"cannot parse amplitude {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise _UsageError(f"amplitude {text!r} is not finite")
    return value


def parse_constraints(text: str) -> tuple[str, ...]:
    s = text.strip()
    if not s or s == "none":
        return ()
    if s == "all":
        return search.CONSTRAINT_TOKENS
    tokens = tuple(part.strip() for part in s.split(",") if part.strip())
    for token in tokens:
        if token not in search.CONSTRAINT_TOKENS:
            raise _UsageError(
                f"unknown constraint {token!r}; choose from "
                + ", ".join(search.CONSTRAINT_TOKENS)
                + ", or 'all'"
            )
    if len(set(tokens)) != len(tokens):
        raise _UsageError("duplicate constraint tokens")
    return tokens


def _opt(args, attr: str, cast, default=None):
    """Resolve an option: command line first, then SEQMEAS_<FLAG>, then default."""
    value = getattr(args, attr, None)
    if value is None:
        env = os.environ.get("SEQMEAS_" + attr.upper(), "")
        if env != "":
            value = env
    if value is None:
        return default
    if isinstance(value, str) and cast is not str:
        try:
            return cast(value)
        except _UsageError:
            raise
        except (TypeError, ValueError) as exc:
            raise _UsageError(f"bad value for --{attr.replace('_', '-')}: {exc}") from None
    return value


def _flag(args, attr: str) -> bool:
    if getattr(args, attr, False):
        return True
    env = os.environ.get("SEQMEAS_" + attr.upper(), "")
    return env.lower() in ("1", "true", "yes", "on")


def _tolerances(args) -> Tolerances:
    eq = _opt(args, "eq_tol", float, 1e-9)
    rank = _opt(args, "rank_tol", float, 1e-8)
    prob = _opt(args, "prob_tol", float, 1e-9)
    try:
        return Tolerances(eq_tol=eq, rank_tol=rank, prob_tol=prob)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _envelope(command: str, tol: Tolerances) -> dict:
    return {"schemaVersion": SCHEMA_VERSION, "command": command, "tolerances": tol.to_json()}


def _flatten(value, prefix: str, rows: list) -> None:
    if isinstance(value, dict):
        for key in sorted(value):
            _flatten(value[key], f"{prefix}.{key}" if prefix else str(key), rows)
    elif isinstance(value, (list, tuple)):
        rows.append((prefix, json.dumps(value)))
    else:
        rows.append((prefix, value if isinstance(value, str) else repr(value)))


def _render_csv(payload: dict) -> str:
    rows: list = []
    _flatten(payload, "", rows)
    lines = ["key,value"]
    for key, value in rows:
        text = str(value)
        if "," in text or '"' in text:
            text = '"' + text.replace('"', '""') + '"'
        lines.append(f"{key},{text}")
    return "\n".join(lines) + "\n"


def _emit(args, payload: dict, csv_text: str | None = None) -> None:
    fmt = _opt(args, "format", str, "json")
    if fmt not in ("json", "csv"):
        raise _UsageError(f"unknown format {fmt!r}; choose json or csv")
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True, allow_nan=False) + "\n"
    else:
        text = csv_text if csv_text is not None else _render_csv(payload)
    out = _opt(args, "out", str, None)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _cmd_verify(args) -> int:
    tol = _tolerances(args)
    seed = _opt(args, "seed", int, 0)
    samples = _opt(args, "samples", int, None)
    results = verify.run_all(seed=seed, tol=tol, cases=samples)
    all_passed = all(r.passed for r in results)
    payload = _envelope("verify", tol)
    payload["seed"] = seed
    payload["suites"] = [r.to_json() for r in results]
    payload["allPassed"] = all_passed
    lines = ["name,cases,failures,worstResidual,passed"]
    for r in results:
        lines.append(f"{r.name},{r.cases},{r.failures},{r.worst_residual!r},{r.passed}")
    _emit(args, payload, csv_text="\n".join(lines) + "\n")
    return 0 if all_passed else 1


def _cmd_example(args) -> int:
    tol = _tolerances(args)
    theta = _opt(args, "theta", parse_angle, math.pi / 4.0)
    pair = instances.example_pair_theta(theta)
    validate_pair(pair, tol)
    report = criteria.criteria_report(pair, tol)
    structure = criteria.structural_consequences(pair, tol)
    payload = _envelope("example", tol)
    payload["theta"] = theta
    payload["report"] = report.to_json()
    payload["structure"] = structure.to_json()
    payload["pair"] = pair_to_json(pair)
    _emit(args, payload)
    return 0


def _cmd_check(args) -> int:
    tol = _tolerances(args)
    path = _opt(args, "pair", str, None)
    if path is None:
        raise _UsageError("check needs --pair FILE (or '-' for stdin)")
    required = _opt(args, "require", parse_constraints, ())
    try:
        if path == "-":
            data = json.load(sys.stdin)
        else:
            with open(path, "r", encoding="utf-8") as handle:
                data = json.load(handle)
    except OSError as exc:
        raise _UsageError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise _UsageError(f"{path} is not valid JSON: {exc}") from None
    try:
        pair = pair_from_json(data)
        validate_pair(pair, tol)
    except (ToolkitError, ValueError) as exc:
        payload = _envelope("check", tol)
        payload["valid"] = False
        payload["error"] = str(exc)
        _emit(args, payload)
        return 1
    report = criteria.criteria_report(pair, tol)
    checks = {
        "aa-a": report.aa_a.holds,
        "aa-b": report.aa_b.holds,
        "aba": report.aba.holds,
        "bab": report.bab.holds,
    }
    required_hold = all(checks[token] for token in required)
    payload = _envelope("check", tol)
    payload["valid"] = True
    payload["report"] = report.to_json()
    payload["required"] = sorted(required)
    payload["requiredHold"] = required_hold
    _emit(args, payload)
    return 0 if required_hold else 1


def _cmd_search(args) -> int:
    tol = _tolerances(args)
    dim = _opt(args, "dim", int, None)
    if dim is None:
        raise _UsageError("search needs --dim")
    constraints = _opt(args, "constraints", parse_constraints, ())
    seed = _opt(args, "seed", int, 0)
    restarts = _opt(args, "restarts", int, 16)
    max_iters = _opt(args, "max_iters", int, 2000)
    penalty = _opt(args, "penalty_weight", float, 100.0)
    free = _flag(args, "free_projectors")
    if free:
        rank_a = _opt(args, "rank_a", int, max(dim - 1, 1))
        rank_b = _opt(args, "rank_b", int, max(dim - 1, 1))
        projectors = None
    else:
        rank_a = rank_b = None
        projectors = search.default_projectors(dim)
    try:
        problem = search.SearchProblem(
            dim=dim,
            constraints=constraints,
            projectors=projectors,
            rank_a=rank_a,
            rank_b=rank_b,
            penalty_weight=penalty,
            restarts=restarts,
            max_iters=max_iters,
            seed=seed,
        )
        result = search.optimize(problem)
    except (ToolkitError, ValueError) as exc:
        raise _UsageError(str(exc)) from None
    feas = search.feasibility_report(result, tol)
    payload = _envelope("search", tol)
    payload["result"] = search.result_to_json(result)
    payload["feasibility"] = feas.to_json()
    trace_csv = _opt(args, "trace_csv", str, None)
    if trace_csv is not None:
        with open(trace_csv, "w", encoding="utf-8") as handle:
            handle.write(search.trace_to_csv(result))
    _emit(args, payload, csv_text=search.trace_to_csv(result))
    ok = (not constraints) or (result.feasible and feas.feasible)
    return 0 if ok else 1


def _cmd_shift_demo(args) -> int:
    tol = _tolerances(args)
    amplitude = _opt(args, "a", parse_amplitude, 0.5 + 0.0j)
    size = _opt(args, "dim", int, 6)
    try:
        inst = instances.truncated_shift(amplitude, size)
    except ToolkitError as exc:
        raise _UsageError(str(exc)) from None
    residual = instances.absorption_residual(inst)
    interior = instances.interior_absorption_residual(inst)
    effect_diag = [float(x) for x in np.real(np.diag(inst.effect))]
    payload = _envelope("shift-demo", tol)
    payload["instance"] = instances.shift_to_json(inst)
    payload["absorptionResidual"] = residual
    payload["interiorAbsorptionResidual"] = interior
    payload["effectDiagonal"] = effect_diag
    payload["boundaryDefect"] = (
        "the absorption defect is a single unit entry in the boundary column; "
        "away from it the effect absorbs the shift exactly"
    )
    _emit(args, payload)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", default=None, help="generator seed (default 0)")
    parser.add_argument(
        "--eq-tol",
        "--tolerance",
        dest="eq_tol",
        default=None,
        help="operator equality tolerance (default 1e-9)",
    )
    parser.add_argument("--rank-tol", dest="rank_tol", default=None,
                        help="eigenvalue cutoff for subspace extraction (default 1e-8)")
    parser.add_argument("--prob-tol", dest="prob_tol", default=None,
                        help="probability comparison tolerance (default 1e-9)")
    parser.add_argument("--out", default=None, help="write the report here instead of stdout")
    parser.add_argument("--format", default=None, choices=("json", "csv"),
                        help="report format (default json)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqmeas",
        description="sequential projective measurements: repeatability and order effects",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the randomised verification suites")
    p.add_argument("--samples", default=None, help="cases per suite (default: per-suite sizes)")
    _add_common(p)
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("example", help="rotation-angle pair with an order effect")
    p.add_argument("--theta", default=None, help="rotation angle, e.g. 0.5 or pi/4 (default pi/4)")
    _add_common(p)
    p.set_defaults(handler=_cmd_example)

    p = sub.add_parser("check", help="evaluate a measurement pair from JSON")
    p.add_argument("--pair", default=None, help="pair JSON file, or - for stdin")
    p.add_argument("--require", default=None,
                   help="comma list of conditions that must hold: aa-a,aa-b,aba,bab or all")
    _add_common(p)
    p.set_defaults(handler=_cmd_check)

    p = sub.add_parser("search", help="maximise the order effect under constraints")
    p.add_argument("--dim", default=None, help="ambient dimension")
    p.add_argument("--constraints", default=None,
                   help="comma list of penalised conditions: aa-a,aa-b,aba,bab, all, or none")
    p.add_argument("--restarts", default=None, help="independent restarts (default 16)")
    p.add_argument("--max-iters", dest="max_iters", default=None,
                   help="function evaluation budget per stage (default 2000)")
    p.add_argument("--penalty-weight", dest="penalty_weight", default=None,
                   help="initial quadratic penalty weight (default 100)")
    p.add_argument("--free-projectors", dest="free_projectors", action="store_true",
                   help="search over projectors too instead of the default geometry")
    p.add_argument("--rank-a", dest="rank_a", default=None,
                   help="rank of the first projector when free (default dim-1)")
    p.add_argument("--rank-b", dest="rank_b", default=None,
                   help="rank of the second projector when free (default dim-1)")
    p.add_argument("--trace-csv", dest="trace_csv", default=None,
                   help="also write the optimisation trace to this CSV file")
    _add_common(p)
    p.set_defaults(handler=_cmd_search)

    p = sub.add_parser("shift-demo", help="truncated-shift absorption defect report")
    p.add_argument("--a", default=None, help="boundary amplitude, e.g. 0.5 or 0.3+0.4j")
    p.add_argument("--dim", default=None, help="space dimension (default 6, minimum 3)")
    _add_common(p)
    p.set_defaults(handler=_cmd_shift_demo)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
