"""Command-line front end: compute, selftest, oracle, and scan subcommands.

Exit codes: 0 success, 1 invalid input, 2 ansatz failure (compute only).
All REE values are emitted in nats; --bits adds a display conversion.
Input and output documents are JSON validated against the schema files
shipped under xree/schemas; scan output is CSV with a fixed header.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from importlib import resources

import jsonschema
import numpy as np

from .config import default_tolerances
from .errors import InvalidStateError, NotInFamilyError, XreeError
from .oracle import OracleConfig, OracleValidation, oracle_validate
from .qmath import DensityMatrix, LN2, min_eig_pt, relative_entropy
from .ree import (
    BRANCH_FAILURE,
    ReeResult,
    closed_form_family_ree,
    compute_ree,
    css_to_density_matrix,
    ree_from_css,
)
from .states import (
    RAINS_PARAMS,
    BlochZParams,
    XStateParams,
    from_density_matrix,
    named_state,
    to_density_matrix,
    x_state,
    x_state_from_bloch,
)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_ANSATZ_FAILURE = 2

SCAN_CAP_DEFAULT = 100000


def _schema(name: str) -> dict:
    text = resources.files("xree.schemas").joinpath(name).read_text(encoding="utf-8")
    return json.loads(text)


def _validate_document(doc, schema_name: str) -> None:
    validator = jsonschema.Draft7Validator(_schema(schema_name))
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        field = "/".join(str(x) for x in err.absolute_path) or "(document root)"
        raise InvalidStateError(f"field {field}: {err.message}")


def _matrix_to_pairs(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]


def _pairs_to_matrix(doc) -> np.ndarray:
    return np.array(
        [[complex(entry[0], entry[1]) for entry in row] for row in doc], dtype=complex
    )


def load_state_document(doc: dict) -> XStateParams:
    """Parse a validated state-input document into family parameters."""
    _validate_document(doc, "state_input.schema.json")
    if "matrix" in doc:
        rho = DensityMatrix.from_matrix(_pairs_to_matrix(doc["matrix"]))
        return from_density_matrix(rho)
    if "params" in doc:
        p = doc["params"]
        return x_state(
            p["A1"], p["A2"], p["A3"], p["A4"], p["D"], p.get("phi", 0.0)
        )
    if "bloch" in doc:
        b = doc["bloch"]
        return x_state_from_bloch(
            BlochZParams(b["r"], b["s"], b["gx"], b["gz"], b.get("phi", 0.0))
        )
    fam = doc["family"]
    rho = named_state(fam["name"], *fam.get("weights", []))
    return from_density_matrix(rho)


def _parse_params_flag(text: str) -> XStateParams:
    parts = text.split(",")
    if len(parts) not in (5, 6):
        raise InvalidStateError(
            "--params expects a1,a2,a3,a4,d[,phi] (5 or 6 comma-separated numbers)"
        )
    try:
        vals = [float(v) for v in parts]
    except ValueError as exc:
        raise InvalidStateError(f"--params: {exc}") from exc
    phi = vals[5] if len(vals) == 6 else 0.0
    return x_state(vals[0], vals[1], vals[2], vals[3], vals[4], phi)


def _parse_family_flag(text: str) -> XStateParams:
    name, _, tail = text.partition(":")
    weights = []
    if tail:
        try:
            weights = [float(v) for v in tail.split(",")]
        except ValueError as exc:
            raise InvalidStateError(f"--family weights: {exc}") from exc
    return from_density_matrix(named_state(name, *weights))


def _state_from_args(args) -> XStateParams:
    given = [
        flag
        for flag, value in (
            ("--input", args.input),
            ("--params", args.params),
            ("--family", args.family),
        )
        if value
    ]
    if len(given) != 1:
        raise InvalidStateError(
            f"exactly one of --input/--params/--family required, got {given or 'none'}"
        )
    if args.input:
        with open(args.input, "r", encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise InvalidStateError(f"input document is not valid JSON: {exc}")
        return load_state_document(doc)
    if args.params:
        return _parse_params_flag(args.params)
    return _parse_family_flag(args.family)


def _oracle_config_from_args(args) -> OracleConfig:
    return OracleConfig(
        num_product_terms=args.terms,
        restarts=args.restarts,
        max_iterations=args.iterations,
        rng_seed=args.seed,
    )


def _oracle_document(val: OracleValidation, cfg: OracleConfig, closed: ReeResult, bits: bool) -> dict:
    res = val.oracle
    doc = {
        "ree_upper_bound": float(res.ree_upper_bound),
        "converged": bool(res.converged),
        "iterations_used": int(res.iterations_used),
        "restart_best_index": int(res.restart_best_index),
        "sigma_matrix": _matrix_to_pairs(res.sigma.matrix),
        "weights": [float(w) for w in res.weights],
        "structure": {
            "off_pattern_max": val.off_pattern_max,
            "bloch_xy_max": val.bloch_xy_max,
        },
        "config": {
            "seed": cfg.rng_seed,
            "restarts": cfg.restarts,
            "terms": cfg.num_product_terms,
            "max_iterations": cfg.max_iterations,
        },
        "closed": {
            "ree_nats": closed.ree,
            "branch": closed.branch,
        },
        "abs_difference": val.abs_difference,
    }
    if bits:
        doc["ree_upper_bound_bits"] = float(res.ree_upper_bound / LN2)
    return doc


def _emit(doc_text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(doc_text)
    else:
        sys.stdout.write(doc_text)


def cmd_compute(args) -> int:
    params = _state_from_args(args)
    t0 = time.perf_counter()
    result = compute_ree(params)
    elapsed = time.perf_counter() - t0
    doc = {
        "ree_nats": result.ree,
        "branch": result.branch,
        "css": None,
        "css_matrix": None,
        "residual_max": result.residual_max,
        "edge_min_eig": None,
        "diagnostics": result.diagnostics,
        "elapsed": elapsed,
    }
    if args.bits:
        doc["ree_bits"] = None if result.ree is None else result.ree / LN2
    if result.css is not None:
        c = result.css
        doc["css"] = {
            "r1": c.r1, "r2": c.r2, "r3": c.r3, "r4": c.r4,
            "y": c.y, "phi": c.phi, "x": c.x,
        }
        pi = css_to_density_matrix(c)
        doc["css_matrix"] = _matrix_to_pairs(pi.matrix)
        doc["edge_min_eig"] = min_eig_pt(pi)
    if args.oracle:
        cfg = _oracle_config_from_args(args)
        val = oracle_validate(params, result, cfg)
        doc["oracle"] = _oracle_document(val, cfg, result, args.bits)
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_ANSATZ_FAILURE if result.branch == BRANCH_FAILURE else EXIT_OK


def cmd_oracle(args) -> int:
    params = _state_from_args(args)
    cfg = _oracle_config_from_args(args)
    closed = compute_ree(params)
    val = oracle_validate(params, closed, cfg)
    doc = _oracle_document(val, cfg, closed, args.bits)
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def _selftest_rows() -> list[tuple[str, float | str, float | str, float]]:
    """(name, expected, computed, tolerance) for every fixed regression."""
    rows: list[tuple[str, float | str, float | str, float]] = []

    bell = from_density_matrix(named_state("vp", 1.0, 0.0, 0.0))
    rows.append(("bell |b3> REE = ln 2", math.log(2.0), compute_ree(bell).ree, 1e-12))
    rows.append(
        (
            "bell-diagonal closed form at (0,0,1,0)",
            math.log(2.0),
            closed_form_family_ree("bell_diagonal", (0.0, 0.0, 1.0, 0.0)),
            1e-12,
        )
    )

    vp_w = (0.5, 0.3, 0.2)
    vp_state = from_density_matrix(named_state("vp", *vp_w))
    vp_result = compute_ree(vp_state)
    rows.append(("vp(0.5,0.3,0.2) routed to theorem1", "theorem1", vp_result.branch, 0.0))
    rows.append(
        (
            "vp(0.5,0.3,0.2) vs closed form",
            closed_form_family_ree("vp", vp_w),
            vp_result.ree,
            1e-10,
        )
    )

    t1 = from_density_matrix(
        named_state("theorem1_example", 0.5, 1 / math.sqrt(2), 1 / math.sqrt(2), 0.3, 0.2)
    )
    t1_result = compute_ree(t1)
    rows.append(("theorem1 example CSS r2", 0.55, t1_result.css.r2, 1e-12))
    rows.append(("theorem1 example CSS r3", 0.45, t1_result.css.r3, 1e-12))
    lam = 0.5 * (1.0 + math.sqrt(0.25 + 0.01))
    expected = -(0.55 * math.log(0.55) + 0.45 * math.log(0.45)) + (
        lam * math.log(lam) + (1 - lam) * math.log(1 - lam)
    )
    rows.append(("theorem1 example REE", expected, t1_result.ree, 1e-12))

    hor_w = (0.6, 0.25, 0.15)
    hor = from_density_matrix(named_state("horodecki", *hor_w))
    hor_result = compute_ree(hor)
    rows.append(("horodecki(0.6,0.25,0.15) routed to theorem2", "theorem2", hor_result.branch, 0.0))
    rows.append(
        (
            "horodecki theorem2 vs closed form",
            closed_form_family_ree("horodecki", hor_w),
            hor_result.ree,
            1e-10,
        )
    )
    red = compute_ree(from_density_matrix(named_state("theorem2_example", 0.6, 0.0, 0.25, 0.15)))
    rows.append(
        (
            "theorem2_example(0.6,0,0.25,0.15) reduction",
            closed_form_family_ree("horodecki", hor_w),
            red.ree,
            1e-10,
        )
    )
    swap_a = compute_ree(from_density_matrix(named_state("theorem2_example", 0.5, 0.1, 0.25, 0.15)))
    swap_b = compute_ree(from_density_matrix(named_state("theorem2_example", 0.5, 0.1, 0.15, 0.25)))
    rows.append(("outer-population swap invariance", swap_a.ree, swap_b.ree, 1e-10))

    rains = compute_ree(RAINS_PARAMS)
    rows.append(("rains routed to theorem3", "theorem3", rains.branch, 0.0))
    rows.append(("rains r1 = 1/6", 1.0 / 6.0, rains.css.r1, 1e-9))
    rows.append(("rains r2 = 55/144", 55.0 / 144.0, rains.css.r2, 1e-9))
    rows.append(("rains r3 = 41/144", 41.0 / 144.0, rains.css.r3, 1e-9))
    rows.append(("rains y = 1/6", 1.0 / 6.0, rains.css.y, 1e-9))
    pi = css_to_density_matrix(rains.css)
    rows.append(("rains CSS is an edge state", 0.0, min_eig_pt(pi), 1e-12))
    rows.append(
        (
            "rains REE dual path (formula vs spectral)",
            ree_from_css(RAINS_PARAMS, rains.css),
            relative_entropy(to_density_matrix(RAINS_PARAMS), pi),
            1e-10,
        )
    )

    six = compute_ree(
        from_density_matrix(named_state("theorem3_example", 0.66, 0.16, 0.03, 0.06, 0.09))
    )
    for name, want, got in (
        ("six-digit CSS r1", 0.139198, six.css.r1),
        ("six-digit CSS r2", 0.405896, six.css.r2),
        ("six-digit CSS r3", 0.285707, six.css.r3),
        ("six-digit CSS r4", 0.169198, six.css.r4),
        ("six-digit CSS y", 0.153467, six.css.y),
    ):
        rows.append((name, want, got, 1e-5))

    failure = compute_ree(
        from_density_matrix(named_state("theorem3_example", 0.66, 0.05, 0.07, 0.04, 0.18))
    )
    rows.append(("failure case detected", BRANCH_FAILURE, failure.branch, 0.0))
    return rows


def cmd_selftest(args) -> int:
    rows = _selftest_rows()
    lines = []
    header = f"{'check':<44} {'expected':>20} {'computed':>20} {'|diff|':>10} {'tol':>8} {'status':>7}"
    lines.append(header)
    lines.append("-" * len(header))
    failures = 0
    for name, expected, computed, tolerance in rows:
        if isinstance(expected, str):
            ok = expected == computed
            diff_text = "-"
            exp_text, got_text = expected, str(computed)
        else:
            diff = abs(expected - computed)
            ok = diff <= tolerance
            diff_text = f"{diff:.2e}"
            exp_text, got_text = f"{expected:.12g}", f"{computed:.12g}"
        if not ok:
            failures += 1
        lines.append(
            f"{name:<44} {exp_text:>20} {got_text:>20} {diff_text:>10} "
            f"{tolerance:>8.0e} {'pass' if ok else 'FAIL':>7}"
        )
    lines.append("-" * len(header))
    lines.append(f"{len(rows) - failures}/{len(rows)} checks passed")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if failures == 0 else EXIT_INVALID


def _axis_values(spec) -> list[float]:
    if isinstance(spec, (int, float)):
        return [float(spec)]
    if isinstance(spec, list):
        return [float(v) for v in spec]
    if spec["count"] == 1:
        return [float(spec["start"])]
    step = (spec["stop"] - spec["start"]) / (spec["count"] - 1)
    return [spec["start"] + i * step for i in range(spec["count"])]


_SCAN_COLUMNS = {
    "theorem3_example": ("p", "q1", "q2", "q3", "q4"),
    "raw": ("a1", "a2", "a3", "a4", "d"),
}


def _grid_points(doc: dict) -> tuple[str, tuple[str, ...], list[tuple[float, ...]]]:
    _validate_document(doc, "scan_grid.schema.json")
    if doc["mode"] == "line":
        frm, to, count = doc["from"], doc["to"], doc["count"]
        pts = [
            tuple(
                frm[k] + (to[k] - frm[k]) * i / (count - 1) for k in range(len(frm))
            )
            for i in range(count)
        ]
        return "theorem3_example", _SCAN_COLUMNS["theorem3_example"], pts
    mode = doc["mode"]
    names = _SCAN_COLUMNS[mode]
    axes = [_axis_values(doc["axes"][n]) for n in names]
    return mode, names, [tuple(p) for p in itertools.product(*axes)]


def _scan_state(mode: str, point: tuple[float, ...], tol) -> XStateParams | None:
    """Map a grid point to parameters; None if infeasible."""
    try:
        if mode == "theorem3_example":
            p, q1, q2, q3, q4 = point
            return x_state(q3, p / 2.0 + q1, p / 2.0 + q2, q4, p / 2.0)
        a1, a2, a3, a4, d = point
        return x_state(a1, a2, a3, a4, d)
    except InvalidStateError:
        return None


def _scan_row(mode: str, point: tuple[float, ...]) -> str:
    tol = default_tolerances()
    cells = [f"{v:.12g}" for v in point]
    state = _scan_state(mode, point, tol)
    if state is None:
        return ""
    result = compute_ree(state)
    cells.append(result.branch)
    cells.append("" if result.ree is None else f"{result.ree:.12g}")
    cells.append("" if result.residual_max is None else f"{result.residual_max:.12g}")
    return ",".join(cells)


def cmd_scan(args) -> int:
    with open(args.grid, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InvalidStateError(f"grid document is not valid JSON: {exc}")
    mode, names, points = _grid_points(doc)
    if len(points) > args.cap:
        raise InvalidStateError(
            f"grid has {len(points)} points, above the cap of {args.cap}"
        )
    if args.threads > 1:
        with ThreadPoolExecutor(max_workers=args.threads) as pool:
            rows = list(pool.map(lambda pt: _scan_row(mode, pt), points))
    else:
        rows = [_scan_row(mode, pt) for pt in points]
    skipped = sum(1 for r in rows if not r)
    header = ",".join(names + ("branch", "ree", "residual_max"))
    body = "\n".join([header] + [r for r in rows if r]) + "\n"
    _emit(body, args.out)
    if skipped:
        print(f"warning: skipped {skipped} infeasible grid points", file=sys.stderr)
    return EXIT_OK


def _add_state_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", help="JSON state document (see state_input schema)")
    parser.add_argument("--params", help="a1,a2,a3,a4,d[,phi] family parameters")
    parser.add_argument("--family", help="NAME[:w1,w2,...] named reference state")


def _add_oracle_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="oracle RNG seed")
    parser.add_argument("--restarts", type=int, default=8, help="random restarts")
    parser.add_argument("--terms", type=int, default=16, help="product terms K")
    parser.add_argument(
        "--iterations", type=int, default=2000, help="objective evaluations per seed"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="xree",
        description="REE and closest separable states for two-qubit X-like states",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="closed-form REE and CSS")
    _add_state_flags(p_compute)
    p_compute.add_argument("--oracle", action="store_true", help="attach oracle cross-check")
    _add_oracle_flags(p_compute)
    p_compute.add_argument("--bits", action="store_true", help="also report REE in bits")
    p_compute.add_argument("--out", help="write the document here instead of stdout")
    p_compute.set_defaults(func=cmd_compute)

    p_self = sub.add_parser("selftest", help="run the fixed regression table")
    p_self.add_argument("--out", help="write the table here instead of stdout")
    p_self.set_defaults(func=cmd_selftest)

    p_oracle = sub.add_parser("oracle", help="brute-force separable minimization")
    _add_state_flags(p_oracle)
    _add_oracle_flags(p_oracle)
    p_oracle.add_argument("--bits", action="store_true", help="also report the bound in bits")
    p_oracle.add_argument("--out", help="write the document here instead of stdout")
    p_oracle.set_defaults(func=cmd_oracle)

    p_scan = sub.add_parser("scan", help="sweep a parameter grid to CSV")
    p_scan.add_argument("--grid", required=True, help="JSON grid specification")
    p_scan.add_argument("--out", help="write CSV here instead of stdout")
    p_scan.add_argument("--threads", type=int, default=1, help="worker threads")
    p_scan.add_argument("--cap", type=int, default=SCAN_CAP_DEFAULT, help="max grid points")
    p_scan.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotInFamilyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (XreeError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
