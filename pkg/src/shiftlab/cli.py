"""Command-line front end.

Subcommands:

* ``run <scenario.json>`` -- execute one scenario, print its report.
* ``suite <dir>`` -- run every ``*.json`` scenario in a directory.
* ``model dump <spec>`` -- print a model operator as interchange JSON.
* ``closure <spec> <vectors.json>`` -- Krylov closure of given columns
  under a single model operator.

Exit codes: 0 all checks passed, 1 some check failed or a multiplicity was
left uncertified, 2 configuration or usage error.
"""

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, ShiftlabError
from .models import (
    SpaceKind,
    complex_to_pair,
    load_matrix,
    make_quotient,
    make_shift,
    matrix_to_json,
)
from .multiplicity import krylov_closure
from .scenarios import (
    _resolve_kind,
    load_scenario,
    parse_roots,
    report_to_text,
    run_scenario,
)
from .subspaces import DEFAULT_TOL

_NAMED = {"hardy": SpaceKind.hardy, "bergman": SpaceKind.bergman, "dirichlet": SpaceKind.dirichlet}


def _parse_model_spec(spec):
    """Accept 'hardy:4' / 'wb2.5:3' shorthands or a JSON factor-kind file."""
    if ":" in spec and not spec.lower().endswith(".json"):
        kind_s, _, m_s = spec.partition(":")
        try:
            m = int(m_s)
        except ValueError:
            raise ConfigError(f"model spec {spec!r}: size after ':' must be an integer")
        if kind_s in _NAMED:
            model = make_shift(_NAMED[kind_s](), m)
        elif kind_s.startswith("wb"):
            try:
                alpha = float(kind_s[2:])
            except ValueError:
                raise ConfigError(f"model spec {spec!r}: cannot parse weight parameter")
            model = make_shift(SpaceKind.weighted_bergman(alpha), m)
        else:
            raise ConfigError(
                f"unknown model shorthand {kind_s!r}; use hardy/bergman/dirichlet/wb<alpha>"
            )
        return model.operator, model, model.label()
    path = Path(spec)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read model spec {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"model spec {path} is not valid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "kind" not in obj:
        raise ConfigError(f"model spec file {path} must be an object with a 'kind'")
    return _resolve_kind(obj, base_dir=path.parent)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
            if not text.endswith("\n"):
                fh.write("\n")
    else:
        print(text)


def _apply_overrides(scn, args):
    if args.tol is not None:
        scn.tol = args.tol
    if args.trials is not None:
        scn.trials = args.trials
    if args.seed is not None:
        scn.seed = args.seed
    return scn


def _cmd_run(args):
    scn = _apply_overrides(load_scenario(args.scenario), args)
    report = run_scenario(scn)
    if args.format == "json":
        _emit(json.dumps(report.to_json(), indent=2, sort_keys=True), args.out)
    else:
        _emit(report_to_text(report), args.out)
    return 0 if report.passed else 1


def _cmd_suite(args):
    root = Path(args.directory)
    if not root.is_dir():
        raise ConfigError(f"{root} is not a directory")
    paths = sorted(root.glob("*.json"))
    if not paths:
        raise ConfigError(f"no scenario files (*.json) found in {root}")
    reports = []
    for path in paths:
        scn = _apply_overrides(load_scenario(path), args)
        reports.append(run_scenario(scn))
    if args.format == "json":
        payload = [r.to_json() for r in reports]
        _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    else:
        lines = []
        for r in reports:
            ms = r.multiplicities["S"]
            mult = str(ms["upper"]) if ms["certified"] else f"[{ms['lower']},{ms['upper']}]"
            lines.append(
                f"[{'PASS' if r.passed else 'FAIL'}] {r.label}: dim S = {r.dim_S}, "
                f"mult(S) = {mult}, mode = {r.mode} ({r.elapsed_seconds:.2f}s)"
            )
        total = sum(r.passed for r in reports)
        lines.append(f"{total}/{len(reports)} scenarios passed")
        _emit("\n".join(lines), args.out)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_model_dump(args):
    T, model, desc = _parse_model_spec(args.spec)
    payload = {"label": desc, "m": T.shape[0], "matrix": matrix_to_json(T)}
    if model is not None and hasattr(model, "weights"):
        payload["weights"] = [float(w) for w in model.weights]
    if model is not None and hasattr(model, "roots"):
        payload["roots"] = [
            {"value": complex_to_pair(lam), "multiplicity": mult}
            for lam, mult in model.roots
        ]
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return 0


def _cmd_closure(args):
    T, _, desc = _parse_model_spec(args.spec)
    try:
        cols = load_matrix(args.vectors)
    except OSError as exc:
        raise ConfigError(f"cannot read vectors file {args.vectors}: {exc}") from exc
    if cols.shape[0] != T.shape[0]:
        raise ConfigError(
            f"vectors live in C^{cols.shape[0]} but {desc} acts on C^{T.shape[0]}"
        )
    closed = krylov_closure((T,), cols, tol=args.tol or DEFAULT_TOL)
    payload = {
        "model": desc,
        "generators": cols.shape[1],
        "dim": closed.dim,
        "basis": matrix_to_json(closed.basis),
    }
    _emit(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="rank-decision tolerance override")
    common.add_argument("--trials", type=int, default=None,
                        help="random generator trials override")
    common.add_argument("--seed", type=int, default=None, help="RNG seed override")
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="output format for run/suite (default: text)")
    common.add_argument("--out", default=None,
                        help="write output to a file instead of stdout")

    p = argparse.ArgumentParser(
        prog="shiftlab",
        description="Verify subspace-chain structure and certified multiplicities "
                    "for tensor products of truncated shift models.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("run", parents=[common], help="run one scenario file")
    sp.add_argument("scenario", help="path to a scenario JSON file")
    sp.set_defaults(func=_cmd_run)

    sp = sub.add_parser("suite", parents=[common],
                        help="run every *.json scenario in a directory")
    sp.add_argument("directory", help="directory of scenario files")
    sp.set_defaults(func=_cmd_suite)

    mp = sub.add_parser("model", help="model utilities")
    msub = mp.add_subparsers(dest="model_command", required=True)
    sp = msub.add_parser("dump", parents=[common], help="print a model operator as JSON")
    sp.add_argument("spec", help="shorthand like hardy:4 or wb2:3, or a JSON factor file")
    sp.set_defaults(func=_cmd_model_dump)

    sp = sub.add_parser("closure", parents=[common],
                        help="Krylov closure of vectors under one model")
    sp.add_argument("spec", help="model spec (shorthand or JSON factor file)")
    sp.add_argument("vectors", help="JSON matrix of generator columns")
    sp.set_defaults(func=_cmd_closure)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ShiftlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


cli_main = main


if __name__ == "__main__":
    sys.exit(main())
