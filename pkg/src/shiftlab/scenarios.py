"""Scenario runner: declarative JSON descriptions in, verified reports out.

A scenario lists tensor factors (named weighted-shift models, quotient
models, custom weights, or explicit matrices) each with a co-invariant
subspace, plus tolerances and a list of named checks.  Running a scenario
builds the tensor system, the joint invariant subspace S with its nested
chain down to F, certifies multiplicities, and evaluates every requested
check exactly once, recording pass/fail verdicts and worst-case residuals.

When every factor satisfies the hypotheses of the additive multiplicity
formula (cyclic factor, wandering subspace of the restriction generates,
a usable adjoint eigenvector in the co-invariant part), the run certifies

    mult(S) = mult(F) = sum_i dim(S_i (-) T_i S_i).

Otherwise the run downgrades to ``inequality_only`` mode: it still verifies
mult(S) >= mult(F) and flags which hypothesis failed, but claims no equality.
"""

import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, EigenError, InputError, ShiftlabError
from .models import (
    QuotientModel,
    SpaceKind,
    complex_to_pair,
    ideal_subspace,
    load_matrix,
    make_quotient,
    make_shift,
    matrix_from_json,
)
from .multiplicity import (
    OperatorTuple,
    has_gws,
    multiplicity,
    shifted_closure_check,
    wandering_subspace,
)
from .subspaces import (
    DEFAULT_TOL,
    Subspace,
    complement_within,
    compress,
    orthonormalize,
)
from .tensorized import (
    build_system,
    coinvariant_eigenpairs,
    f_chain,
    tensor_factor,
    verify_compression_structure,
    wandering_E,
)

ALL_CHECKS = (
    "projection_identities",
    "chain",
    "semi_invariance",
    "commutativity",
    "block_structure",
    "power_identity",
    "shift_lemma",
    "gws",
    "additive_formula",
)

_NAMED_KINDS = {
    "hardy": SpaceKind.hardy,
    "bergman": SpaceKind.bergman,
    "dirichlet": SpaceKind.dirichlet,
}


def parse_roots(obj):
    """Decode a JSON root list into (complex, multiplicity) pairs.

    Accepted entry forms: a real number, an [re, im] pair, or
    [[re, im], mult] attaching an integer multiplicity.
    """
    if not isinstance(obj, list) or not obj:
        raise ConfigError(f"expected a non-empty list of roots, got {obj!r}")
    out = []
    for entry in obj:
        if isinstance(entry, (int, float)) and not isinstance(entry, bool):
            out.append((complex(entry), 1))
        elif (
            isinstance(entry, list)
            and len(entry) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
        ):
            out.append((complex(entry[0], entry[1]), 1))
        elif (
            isinstance(entry, list)
            and len(entry) == 2
            and isinstance(entry[0], list)
            and isinstance(entry[1], int)
            and not isinstance(entry[1], bool)
        ):
            if not (
                len(entry[0]) == 2
                and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry[0])
            ):
                raise ConfigError(f"root value must be an [re, im] pair, got {entry[0]!r}")
            out.append((complex(entry[0][0], entry[0][1]), entry[1]))
        else:
            raise ConfigError(
                f"cannot parse root entry {entry!r}: use a number, [re, im], or [[re, im], mult]"
            )
    return out


@dataclass(eq=False)
class ResolvedFactor:
    factor: object  # TensorFactor
    model: object   # ShiftModel | QuotientModel | None
    description: str


def _resolve_kind(spec, base_dir):
    """Return (operator, model-or-None, description) for a factor spec."""
    kind = spec.get("kind")
    if isinstance(kind, str):
        if kind not in _NAMED_KINDS:
            raise ConfigError(
                f"unknown factor kind {kind!r}; named kinds are {sorted(_NAMED_KINDS)}"
            )
        m = spec.get("m")
        if not isinstance(m, int) or isinstance(m, bool):
            raise ConfigError(f"factor kind {kind!r} needs an integer 'm'")
        model = make_shift(_NAMED_KINDS[kind](), m)
        return model.operator, model, model.label()
    if isinstance(kind, dict) and len(kind) == 1:
        (key, value), = kind.items()
        if key == "weighted_bergman":
            m = spec.get("m")
            if not isinstance(m, int) or isinstance(m, bool):
                raise ConfigError("weighted_bergman factors need an integer 'm'")
            model = make_shift(SpaceKind.weighted_bergman(float(value)), m)
            return model.operator, model, model.label()
        if key == "custom_weights":
            if not isinstance(value, list) or not value:
                raise ConfigError("custom_weights must be a non-empty list")
            weights = [float(w) for w in value]
            model = make_shift(SpaceKind.custom(weights), len(weights) + 1)
            if "m" in spec and spec["m"] != model.m:
                raise ConfigError(
                    f"custom_weights of length {len(weights)} implies m = {model.m}, "
                    f"not {spec['m']}"
                )
            return model.operator, model, model.label()
        if key == "quotient_roots":
            model = make_quotient(parse_roots(value))
            if "m" in spec and spec["m"] != model.m:
                raise ConfigError(
                    f"quotient roots imply m = {model.m}, not {spec['m']}"
                )
            return model.operator, model, model.label()
        if key == "matrix":
            T = matrix_from_json(value)
            return T, None, f"matrix:{T.shape[0]}"
        if key == "matrix_file":
            T = load_matrix(Path(base_dir) / value)
            return T, None, f"matrix:{T.shape[0]}"
        raise ConfigError(f"unknown factor kind key {key!r}")
    raise ConfigError(f"cannot parse factor kind {kind!r}")


def _resolve_coinvariant(spec, T, model, tol, base_dir):
    """Return the co-invariant subspace Q for a factor spec."""
    co = spec.get("coinvariant")
    if not isinstance(co, dict) or len(co) != 1:
        raise ConfigError(
            "each factor needs a 'coinvariant' object with exactly one of "
            "'prefix', 'ideal_roots', 'basis', 'basis_file'"
        )
    (key, value), = co.items()
    m = T.shape[0]
    if key == "prefix":
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(f"prefix length must be an integer, got {value!r}")
        from .models import prefix_coinvariant

        return prefix_coinvariant(m, value)
    if key == "ideal_roots":
        if not isinstance(model, QuotientModel):
            raise ConfigError("ideal_roots only applies to quotient_roots factors")
        S = ideal_subspace(model, parse_roots(value), tol=tol)
        return complement_within(Subspace.full(m, tol=tol), S)
    if key == "basis":
        cols = matrix_from_json(value)
        return orthonormalize(cols, tol=tol, ambient_dim=m)
    if key == "basis_file":
        cols = load_matrix(Path(base_dir) / value)
        return orthonormalize(cols, tol=tol, ambient_dim=m)
    raise ConfigError(f"unknown coinvariant key {key!r}")


def resolve_factor(spec, tol, base_dir="."):
    """Turn one JSON factor spec into a validated TensorFactor."""
    if not isinstance(spec, dict):
        raise ConfigError(f"factor spec must be an object, got {type(spec).__name__}")
    try:
        T, model, desc = _resolve_kind(spec, base_dir)
        label = spec.get("label") or desc
        Q = _resolve_coinvariant(spec, T, model, tol, base_dir)
        factor = tensor_factor(T, Q, tol=tol, label=label)
    except ConfigError:
        raise
    except ShiftlabError as exc:
        raise ConfigError(f"invalid factor spec: {exc}") from exc
    return ResolvedFactor(factor=factor, model=model, description=label)


@dataclass
class Scenario:
    """A parsed scenario: factor specs plus run settings."""

    factor_specs: list
    label: str = ""
    tol: float = DEFAULT_TOL
    check_tol: float = 1e-9
    angle_tol: float = 1e-8
    trials: int = 64
    seed: int = 42
    checks: tuple = ALL_CHECKS
    base_dir: str = "."


def scenario_from_json(obj, base_dir="."):
    if not isinstance(obj, dict):
        raise ConfigError("scenario must be a JSON object")
    known = {"factors", "label", "tol", "check_tol", "angle_tol", "trials", "seed", "checks"}
    unknown = set(obj) - known
    if unknown:
        raise ConfigError(f"unknown scenario keys: {sorted(unknown)}")
    factors = obj.get("factors")
    if not isinstance(factors, list) or len(factors) < 2:
        raise ConfigError("scenario needs a 'factors' list with at least two entries")
    checks = obj.get("checks", list(ALL_CHECKS))
    if not isinstance(checks, list) or not checks:
        raise ConfigError("'checks' must be a non-empty list of check names")
    bad = [c for c in checks if c not in ALL_CHECKS]
    if bad:
        raise ConfigError(f"unknown checks {bad}; known checks are {list(ALL_CHECKS)}")
    seen = set()
    ordered = [c for c in checks if not (c in seen or seen.add(c))]

    def _num(key, default):
        v = obj.get(key, default)
        if not isinstance(v, (int, float)) or isinstance(v, bool) or v <= 0:
            raise ConfigError(f"'{key}' must be a positive number")
        return float(v)

    trials = obj.get("trials", 64)
    seed = obj.get("seed", 42)
    for name, v in (("trials", trials), ("seed", seed)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise ConfigError(f"'{name}' must be a non-negative integer")
    return Scenario(
        factor_specs=factors,
        label=str(obj.get("label", "")),
        tol=_num("tol", DEFAULT_TOL),
        check_tol=_num("check_tol", 1e-9),
        angle_tol=_num("angle_tol", 1e-8),
        trials=trials,
        seed=seed,
        checks=tuple(ordered),
        base_dir=str(base_dir),
    )


def load_scenario(path):
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file {path} is not valid JSON: {exc}") from exc
    scn = scenario_from_json(obj, base_dir=path.parent)
    if not scn.label:
        scn.label = path.stem
    return scn


def _mult_to_json(res):
    return {
        "lower": int(res.lower),
        "upper": int(res.upper),
        "certified": bool(res.certified),
        "witness_point": (
            None if res.witness_point is None
            else [complex_to_pair(z) for z in res.witness_point]
        ),
        "trials_used": int(res.trials_used),
    }


@dataclass
class Report:
    """Everything a scenario run establishes, JSON-serializable via to_json()."""

    label: str
    dims: list
    factor_labels: list
    dim_S: int
    dim_F: int
    chain_dims: list
    x_ranks: list
    wandering_dim_S: int
    factor_wandering_dims: list | None
    distinguished_dim: int | None
    eigenvalues: list | None
    shift_points: list | None
    mode: str
    hypotheses: dict
    failed_hypotheses: list
    multiplicities: dict
    verdicts: dict
    residuals: dict
    settings: dict
    elapsed_seconds: float
    passed: bool
    notes: list = field(default_factory=list)

    def to_json(self):
        out = {
            "label": self.label,
            "dims": list(self.dims),
            "factor_labels": list(self.factor_labels),
            "dim_S": self.dim_S,
            "dim_F": self.dim_F,
            "chain_dims": list(self.chain_dims),
            "x_ranks": list(self.x_ranks),
            "wandering_dim_S": self.wandering_dim_S,
            "factor_wandering_dims": self.factor_wandering_dims,
            "distinguished_dim": self.distinguished_dim,
            "eigenvalues": self.eigenvalues,
            "shift_points": self.shift_points,
            "mode": self.mode,
            "hypotheses": self.hypotheses,
            "failed_hypotheses": list(self.failed_hypotheses),
            "multiplicities": self.multiplicities,
            "verdicts": self.verdicts,
            "residuals": self.residuals,
            "settings": self.settings,
            "elapsed_seconds": self.elapsed_seconds,
            "passed": self.passed,
            "notes": list(self.notes),
        }
        return out


def _factor_hypotheses(resolved, scn):
    """Evaluate the additive-formula hypotheses factor by factor."""
    hyp = {}
    failed = []
    for i, rf in enumerate(resolved):
        f = rf.factor
        single = OperatorTuple((f.T,))
        cyc = multiplicity(single, trials=scn.trials, seed=scn.seed, tol=scn.tol)
        cyclic = bool(cyc.certified and cyc.upper == 1)
        gws_i = bool(has_gws(single, f.S))
        pairs = coinvariant_eigenpairs(f.T, f.Q, tol=scn.tol)
        eigen_residual = pairs[0][2] if pairs else float("inf")
        eigen_ok = bool(eigen_residual <= max(scn.tol, 1e-10))
        m = f.T.shape[0]
        proper = bool(0 < f.Q.dim < m)
        record = {
            "label": rf.description,
            "cyclic": cyclic,
            "cyclic_bounds": [int(cyc.lower), int(cyc.upper)],
            "gws_restriction": gws_i,
            "eigen_residual": float(eigen_residual),
            "eigen_ok": eigen_ok,
            "proper_coinvariant": proper,
        }
        record["ok"] = cyclic and gws_i and eigen_ok and proper
        hyp[f"factor_{i}"] = record
        for name, value in (
            ("cyclic", cyclic),
            ("gws_restriction", gws_i),
            ("eigen_ok", eigen_ok),
            ("proper_coinvariant", proper),
        ):
            if not value:
                failed.append(f"factor_{i}:{name}")
    return hyp, failed


def _structural_verdicts(scn, sys, struct):
    verdicts = {}
    fams = struct.families()
    for name in (
        "projection_identities",
        "chain",
        "semi_invariance",
        "commutativity",
        "block_structure",
        "power_identity",
    ):
        if name not in scn.checks:
            continue
        worst = max(fams[name].values(), default=0.0)
        if name == "commutativity":
            worst = max(worst, sys.doubly_commuting_residual)
        verdicts[name] = {
            "status": "pass" if worst <= scn.check_tol else "fail",
            "max_residual": float(worst),
            "threshold": scn.check_tol,
        }
    return verdicts


def _shift_lemma_verdict(scn, sys, S):
    """Seeded random draws of generators and shift points; closures must agree."""
    A = sys.op_tuple()
    rng = np.random.default_rng([scn.seed, 101])
    draws = []
    for d in range(6):
        r = 1 + d % 2
        if d < 3:
            G = rng.standard_normal((sys.N, r)) + 1j * rng.standard_normal((sys.N, r))
        else:
            coeff = rng.standard_normal((S.dim, r)) + 1j * rng.standard_normal((S.dim, r))
            G = S.basis @ coeff
        G /= np.linalg.norm(G, axis=0)
        rad = 0.9 * np.sqrt(rng.uniform(size=sys.n))
        th = rng.uniform(0.0, 2 * np.pi, size=sys.n)
        lam = tuple(rad * np.exp(1j * th))
        draws.append(bool(shifted_closure_check(A, G, lam, tol=scn.angle_tol)))
    ok = all(draws)
    return {
        "status": "pass" if ok else "fail",
        "draws": len(draws),
        "agreed": int(sum(draws)),
    }


def run_scenario(scn):
    """Execute a scenario and return its Report."""
    t0 = time.perf_counter()
    resolved = [resolve_factor(spec, scn.tol, scn.base_dir) for spec in scn.factor_specs]
    sys = build_system([rf.factor for rf in resolved], tol=scn.tol)
    chain = f_chain(sys)
    struct = verify_compression_structure(sys, chain, seed=scn.seed)
    A = sys.op_tuple()

    hyp, failed = _factor_hypotheses(resolved, scn)
    mode = "equality" if not failed else "inequality_only"

    notes = []
    wdec = None
    try:
        wdec = wandering_E(sys)
    except EigenError as exc:
        notes.append(f"distinguished summands unavailable: {exc}")

    extra_points = list(wdec.shift_points) if wdec is not None else None
    mult_S = multiplicity(
        A, chain.S, lambda_samples=extra_points,
        trials=scn.trials, seed=scn.seed, tol=scn.tol,
    )
    comp_F = OperatorTuple(tuple(compress(T, chain.F) for T in sys.ops))
    mult_F = multiplicity(
        comp_F, lambda_samples=extra_points,
        trials=scn.trials, seed=scn.seed, tol=scn.tol,
    )
    W_S = wandering_subspace(A, chain.S)
    gws_S = bool(has_gws(A, chain.S))

    verdicts = {}
    for name in scn.checks:
        if name in (
            "projection_identities", "chain", "semi_invariance",
            "commutativity", "block_structure", "power_identity",
        ):
            continue  # handled as a batch below, in scenario order
        if name == "shift_lemma":
            verdicts[name] = _shift_lemma_verdict(scn, sys, chain.S)
        elif name == "gws":
            consistent = True
            if gws_S and mult_S.certified:
                consistent = mult_S.upper == W_S.dim
            verdicts[name] = {
                "status": "pass" if consistent else "fail",
                "has_gws": gws_S,
                "wandering_dim": int(W_S.dim),
                "applicable": bool(gws_S and mult_S.certified),
            }
        elif name == "additive_formula":
            predicted = (
                None if wdec is None else int(sum(wdec.factor_wandering_dims))
            )
            if mode == "equality":
                ok = (
                    wdec is not None
                    and mult_S.certified
                    and mult_F.certified
                    and mult_S.upper == mult_F.upper == predicted == wdec.E.dim
                )
            else:
                ok = mult_S.upper >= mult_F.lower
            verdicts[name] = {
                "status": "pass" if ok else "fail",
                "mode": mode,
                "predicted_sum": predicted,
                "distinguished_dim": None if wdec is None else int(wdec.E.dim),
                "mult_S": _mult_to_json(mult_S),
                "mult_F": _mult_to_json(mult_F),
            }
    structural = _structural_verdicts(scn, sys, struct)
    ordered_verdicts = {}
    for name in scn.checks:
        ordered_verdicts[name] = structural.get(name, verdicts.get(name))

    residuals = {name: max(fam.values(), default=0.0) for name, fam in struct.families().items()}
    residuals["doubly_commuting"] = float(sys.doubly_commuting_residual)
    residuals["coinvariance"] = max(rf.factor.coinvariance_residual for rf in resolved)
    if wdec is not None:
        residuals["distinguished_alignment"] = float(wdec.alignment_residual)
        residuals["eigen"] = max(e[2] for e in wdec.eigen_data)

    x_ranks = [int(round(np.trace(X).real)) for X in chain.X]
    passed = all(v["status"] == "pass" for v in ordered_verdicts.values())

    return Report(
        label=scn.label,
        dims=list(sys.dims),
        factor_labels=[rf.description for rf in resolved],
        dim_S=int(chain.S.dim),
        dim_F=int(chain.F.dim),
        chain_dims=[int(Fi.dim) for Fi in chain.F_chain],
        x_ranks=x_ranks,
        wandering_dim_S=int(W_S.dim),
        factor_wandering_dims=(
            None if wdec is None else [int(w) for w in wdec.factor_wandering_dims]
        ),
        distinguished_dim=None if wdec is None else int(wdec.E.dim),
        eigenvalues=(
            None if wdec is None else [complex_to_pair(e[0]) for e in wdec.eigen_data]
        ),
        shift_points=(
            None if wdec is None
            else [[complex_to_pair(z) for z in pt] for pt in wdec.shift_points]
        ),
        mode=mode,
        hypotheses=hyp,
        failed_hypotheses=failed,
        multiplicities={"S": _mult_to_json(mult_S), "F": _mult_to_json(mult_F)},
        verdicts=ordered_verdicts,
        residuals={k: float(v) for k, v in residuals.items()},
        settings={
            "tol": scn.tol,
            "check_tol": scn.check_tol,
            "angle_tol": scn.angle_tol,
            "trials": scn.trials,
            "seed": scn.seed,
        },
        elapsed_seconds=float(time.perf_counter() - t0),
        passed=bool(passed),
        notes=notes,
    )


def run_scenario_file(path):
    return run_scenario(load_scenario(path))


def report_to_text(report):
    """Human-oriented one-screen summary of a report."""
    lines = []
    lines.append(f"scenario: {report.label or '(unnamed)'}")
    lines.append(
        "factors: " + ", ".join(
            f"{lab} (m={m})" for lab, m in zip(report.factor_labels, report.dims)
        )
    )
    lines.append(
        f"dim S = {report.dim_S}, chain {' >= '.join(str(d) for d in report.chain_dims)}, "
        f"X ranks {report.x_ranks}"
    )
    ms, mf = report.multiplicities["S"], report.multiplicities["F"]

    def fmt(m):
        if m["certified"]:
            return f"{m['upper']} (certified)"
        return f"[{m['lower']}, {m['upper']}] (not certified)"

    lines.append(f"mult(S) = {fmt(ms)}, mult(F) = {fmt(mf)}")
    if report.factor_wandering_dims is not None:
        lines.append(
            f"factor wandering dims {report.factor_wandering_dims}, "
            f"distinguished dim {report.distinguished_dim}"
        )
    lines.append(f"mode: {report.mode}")
    if report.failed_hypotheses:
        lines.append("failed hypotheses: " + ", ".join(report.failed_hypotheses))
    for name, v in report.verdicts.items():
        detail = ""
        if "max_residual" in v:
            detail = f" (max residual {v['max_residual']:.3e})"
        elif name == "shift_lemma":
            detail = f" ({v['agreed']}/{v['draws']} draws agreed)"
        lines.append(f"  [{'PASS' if v['status'] == 'pass' else 'FAIL'}] {name}{detail}")
    for note in report.notes:
        lines.append(f"note: {note}")
    lines.append(
        f"result: {'PASS' if report.passed else 'FAIL'} "
        f"({report.elapsed_seconds:.2f}s)"
    )
    return "\n".join(lines)
