"""Batch command-line front end.

Loads a fixture file (or the built-in standard set), runs one verifier or
scan, and writes a machine-readable JSON or CSV report.  Exit codes:
0 all checks passed, 1 at least one verification failed, 2 input or
convergence error.  Output is byte-for-byte deterministic for a fixed
command, fixtures, and seed, except for the runtime_ms fields.

Fixture files are JSON documents
``{"measures": [...], "self_maps": [...], "cases": [...]}`` where each
measure is an array of ``{"angle", "re", "im"}`` atoms, each self-map is a
``{"kind": ...}`` literal, and each case binds command-specific fields
(indices into the two pools, or inline values such as ``"a"``, ``"h"``,
``"zeta_angle"``, ``"r"``, ``"a_values"``).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field

from .circle import CirclePoint, DiskPoint, MobiusMap, NonConvergenceError
from .disk_algebra import make_poly, poly_to_obj
from .fixtures import standard_fixtures
from .kernel_op import p_lambda_closed_form, p_phi_at_stable
from .measures import AtomicMeasure, measure_from_obj, measure_to_obj
from .norm_engine import (
    PreconditionError,
    knorm_bracket,
    sharpness_scan,
    verify_eq1,
    verify_lemma1,
    verify_lemma2,
)
from .self_maps import (
    DiskSelfMap,
    MobiusSelfMap,
    factorization_residual,
    schwarz_factorize,
    self_map_from_obj,
    self_map_to_obj,
)

COMMANDS = (
    "verify-bound",
    "verify-lemma1",
    "verify-lemma2",
    "factorize",
    "kernel-compare",
    "norm-estimate",
    "sharpness-scan",
)

DEFAULT_TOLERANCES = {
    "pass_margin": 1e-8,       # verifier ceiling slack
    "kernel_compare": 1e-10,   # closed form vs quadrature
    "sandwich": 1e-9,          # bracket consistency
    "factorize_residual": 1e-12,
    "base_point": 1e-14,
}


class FixtureError(ValueError):
    """Fixture input that cannot be used for the requested command."""


@dataclass
class RunConfig:
    command: str
    fixtures: str = "standard"
    seed: int = 20240001
    output: str | None = None
    format: str = "json"
    tolerances: dict = field(default_factory=dict)
    degree_cap: int = 8
    restarts: int = 8

    def tol(self, name: str) -> float:
        if name not in DEFAULT_TOLERANCES:
            raise FixtureError(f"unknown tolerance name {name!r}")
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))


def _load_fixture_doc(path: str, command: str) -> tuple[list, list, list]:
    if path == "standard":
        doc = standard_fixtures()
    else:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise FixtureError(f"cannot read fixtures: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise FixtureError(
                f"{path}:{exc.lineno}:{exc.colno}: invalid JSON ({exc.msg})"
            ) from exc
    if not isinstance(doc, dict):
        raise FixtureError("fixture document must be a JSON object")
    measures_raw = doc.get("measures", [])
    maps_raw = doc.get("self_maps", [])
    cases = doc.get("cases", [])
    if isinstance(cases, dict):  # the built-in set keys cases by command
        cases = cases.get(command, [])
    if not isinstance(cases, list):
        raise FixtureError("'cases' must be an array of case objects")
    measures = [
        measure_from_obj(m, where=f"measures[{i}]") for i, m in enumerate(measures_raw)
    ]
    maps = [
        self_map_from_obj(s, where=f"self_maps[{i}]") for i, s in enumerate(maps_raw)
    ]
    return measures, maps, cases


def _case_measure(case: dict, measures: list, idx: int) -> AtomicMeasure:
    if "measure" not in case:
        raise FixtureError(f"cases[{idx}]: missing 'measure' index")
    j = case["measure"]
    if not isinstance(j, int) or not 0 <= j < len(measures):
        raise FixtureError(f"cases[{idx}].measure: index {j!r} out of range")
    return measures[j]


def _case_self_map(case: dict, maps: list, idx: int) -> DiskSelfMap:
    if "self_map" not in case:
        raise FixtureError(f"cases[{idx}]: missing 'self_map' index")
    j = case["self_map"]
    if not isinstance(j, int) or not 0 <= j < len(maps):
        raise FixtureError(f"cases[{idx}].self_map: index {j!r} out of range")
    return maps[j]


def _case_complex(case: dict, key: str, idx: int) -> complex:
    if key not in case:
        raise FixtureError(f"cases[{idx}]: missing '{key}'")
    v = case[key]
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise FixtureError(f"cases[{idx}].{key}: expected a number or [re, im] pair")


def _map_label(phi: DiskSelfMap) -> str:
    obj = self_map_to_obj(phi)
    return json.dumps(obj, sort_keys=True)


def _run_verify_bound(cfg: RunConfig, measures, maps, cases) -> list[dict]:
    reports = []
    for i, case in enumerate(cases):
        mu = _case_measure(case, measures, i)
        phi = _case_self_map(case, maps, i)
        rep = verify_eq1(
            mu, phi, cfg.degree_cap, cfg.restarts, cfg.seed, cfg.tol("pass_margin")
        )
        reports.append(rep.to_obj())
    return reports


def _run_verify_lemma2(cfg: RunConfig, measures, maps, cases) -> list[dict]:
    reports = []
    for i, case in enumerate(cases):
        mu = _case_measure(case, measures, i)
        a = _case_complex(case, "a", i)
        rep = verify_lemma2(
            mu, a, cfg.degree_cap, cfg.restarts, cfg.seed, cfg.tol("pass_margin")
        )
        reports.append(rep.to_obj())
    return reports


def _run_verify_lemma1(cfg: RunConfig, measures, maps, cases) -> list[dict]:
    reports = []
    for i, case in enumerate(cases):
        mu = _case_measure(case, measures, i)
        psi = _case_self_map(case, maps, i)
        rep = verify_lemma1(
            mu, psi, cfg.degree_cap, cfg.restarts, cfg.seed, cfg.tol("pass_margin")
        )
        reports.append(rep.to_obj())
    return reports


def _run_factorize(cfg: RunConfig, measures, maps, cases) -> list[dict]:
    reports = []
    for i, case in enumerate(cases):
        phi = _case_self_map(case, maps, i)
        t0 = time.perf_counter()
        base, psi = schwarz_factorize(phi)
        residual = factorization_residual(phi, base, psi)
        psi0 = abs(psi.at_zero())
        passed = residual <= cfg.tol("factorize_residual") and psi0 <= cfg.tol("base_point")
        reports.append(
            {
                "claim": f"factorization of {_map_label(phi)}",
                "inputs": {"phi": self_map_to_obj(phi)},
                "a": [base.value.real, base.value.imag],
                "psi_at_zero": psi0,
                "reconstruction_residual": residual,
                "psi": self_map_to_obj(psi),
                "pass": passed,
                "runtime_ms": (time.perf_counter() - t0) * 1e3,
            }
        )
    return reports


def _run_kernel_compare(cfg: RunConfig, measures, maps, cases) -> list[dict]:
    reports = []
    for i, case in enumerate(cases):
        a = _case_complex(case, "a", i)
        if "h" not in case:
            raise FixtureError(f"cases[{i}]: missing 'h' coefficients")
        try:
            coeffs = [complex(float(p[0]), float(p[1])) for p in case["h"]]
        except (TypeError, IndexError, ValueError) as exc:
            raise FixtureError(f"cases[{i}].h: expected [re, im] pairs ({exc})") from exc
        h = make_poly(coeffs)
        if "zeta_angle" not in case or "r" not in case:
            raise FixtureError(f"cases[{i}]: needs 'zeta_angle' and 'r'")
        zeta = CirclePoint(float(case["zeta_angle"]))
        r = float(case["r"])
        t0 = time.perf_counter()
        phi = MobiusSelfMap(MobiusMap(DiskPoint(a)))
        closed = p_lambda_closed_form(a, h, zeta, r)
        quad = p_phi_at_stable(phi, h, zeta, r)
        diff = abs(closed - quad)
        tol = cfg.tol("kernel_compare") * max(1.0, abs(closed))
        reports.append(
            {
                "claim": f"residue closed form vs quadrature at |a| = {abs(a):.6g}",
                "inputs": {
                    "a": [a.real, a.imag],
                    "h": [[c.real, c.imag] for c in coeffs],
                    "zeta_angle": zeta.angle,
                    "r": r,
                },
                "zeta_angle": zeta.angle,
                "r": r,
                "re": closed.real,
                "im": closed.imag,
                "abs": abs(closed),
                "quad_re": quad.real,
                "quad_im": quad.imag,
                "abs_diff": diff,
                "pass": diff <= tol,
                "runtime_ms": (time.perf_counter() - t0) * 1e3,
            }
        )
    return reports


def _run_norm_estimate(cfg: RunConfig, measures, maps, cases) -> list[dict]:
    reports = []
    for i, case in enumerate(cases):
        mu = _case_measure(case, measures, i)
        cap = int(case.get("degree_cap", cfg.degree_cap))
        restarts = int(case.get("restarts", cfg.restarts))
        t0 = time.perf_counter()
        bracket = knorm_bracket(mu, cap, restarts, cfg.seed)
        passed = bracket.lower <= bracket.upper + cfg.tol("sandwich")
        reports.append(
            {
                "claim": "transform norm bracket from duality",
                "inputs": {"measure": measure_to_obj(mu)},
                "lower": bracket.lower,
                "upper": bracket.upper,
                "bound": bracket.upper,
                "pass": passed,
                "witnesses": {
                    "h": poly_to_obj(bracket.witness_h),
                    "mu": measure_to_obj(bracket.witness_mu),
                },
                "runtime_ms": (time.perf_counter() - t0) * 1e3,
            }
        )
    return reports


def _run_sharpness_scan(cfg: RunConfig, measures, maps, cases) -> list[dict]:
    reports = []
    for i, case in enumerate(cases):
        a_values = case.get("a_values")
        if not isinstance(a_values, list) or not a_values:
            raise FixtureError(f"cases[{i}]: missing 'a_values' list")
        cap = int(case.get("degree_cap", 6))
        t0 = time.perf_counter()
        rows = sharpness_scan([float(a) for a in a_values], cap, cfg.seed)
        reports.append(
            {
                "claim": "achieved ratio against the composition bound",
                "inputs": {"a_values": a_values, "degree_cap": cap},
                "rows": [
                    {
                        "a": row.a,
                        "ratio": row.ratio,
                        "bound": row.bound,
                        "margin": row.margin,
                        "atom_count": row.atom_count,
                        "measure": measure_to_obj(row.measure),
                    }
                    for row in rows
                ],
                "pass": all(row.ratio <= row.bound + cfg.tol("pass_margin") for row in rows),
                "runtime_ms": (time.perf_counter() - t0) * 1e3,
            }
        )
    return reports


_HANDLERS = {
    "verify-bound": _run_verify_bound,
    "verify-lemma1": _run_verify_lemma1,
    "verify-lemma2": _run_verify_lemma2,
    "factorize": _run_factorize,
    "kernel-compare": _run_kernel_compare,
    "norm-estimate": _run_norm_estimate,
    "sharpness-scan": _run_sharpness_scan,
}

_CSV_COLUMNS = ["claim", "lower", "upper", "bound", "pass", "runtime_ms"]


def _reports_to_csv(command: str, reports: list[dict]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    if command == "sharpness-scan":
        writer.writerow(["a", "ratio", "bound", "margin", "atom_count"])
        for rep in reports:
            for row in rep["rows"]:
                writer.writerow(
                    [row["a"], row["ratio"], row["bound"], row["margin"], row["atom_count"]]
                )
    elif command == "kernel-compare":
        writer.writerow(["zeta_angle", "r", "re", "im", "abs", "quad_re", "quad_im", "abs_diff", "pass"])
        for rep in reports:
            writer.writerow(
                [rep[k] for k in ("zeta_angle", "r", "re", "im", "abs", "quad_re", "quad_im", "abs_diff", "pass")]
            )
    else:
        writer.writerow(_CSV_COLUMNS)
        for rep in reports:
            writer.writerow([rep.get(k, "") for k in _CSV_COLUMNS])
    return out.getvalue()


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit code."""
    t0 = time.perf_counter()
    try:
        measures, maps, cases = _load_fixture_doc(config.fixtures, config.command)
        if not cases:
            raise FixtureError(f"no cases for command {config.command!r}")
        reports = _HANDLERS[config.command](config, measures, maps, cases)
    except (FixtureError, PreconditionError, NonConvergenceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    all_pass = all(rep.get("pass", True) for rep in reports)
    if config.format == "csv":
        text = _reports_to_csv(config.command, reports)
    else:
        document = {
            "command": config.command,
            "fixtures": config.fixtures,
            "seed": config.seed,
            "reports": reports,
            "pass": all_pass,
            "runtime_ms": (time.perf_counter() - t0) * 1e3,
        }
        text = json.dumps(document, sort_keys=True, indent=2) + "\n"
    if config.output and config.output != "-":
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all_pass else 1


def _parse_tolerances(entries: list[str]) -> dict:
    out = {}
    for entry in entries:
        if "=" not in entry:
            raise FixtureError(f"--tol expects NAME=VALUE, got {entry!r}")
        name, _, value = entry.partition("=")
        if name not in DEFAULT_TOLERANCES:
            raise FixtureError(f"unknown tolerance name {name!r}")
        try:
            out[name] = float(value)
        except ValueError as exc:
            raise FixtureError(f"--tol {name}: bad value {value!r}") from exc
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cstrans",
        description="verify composition-operator norm bounds on Cauchy transforms",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--fixtures", default="standard", help="fixture file path or 'standard'")
    parser.add_argument("--seed", type=int, default=20240001)
    parser.add_argument("--out", default=None, help="output path (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument(
        "--tol", action="append", default=[], metavar="NAME=VALUE",
        help="override a named tolerance (repeatable)",
    )
    parser.add_argument("--degree-cap", type=int, default=8)
    parser.add_argument("--restarts", type=int, default=8)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        tolerances = _parse_tolerances(args.tol)
    except FixtureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    config = RunConfig(
        command=args.command,
        fixtures=args.fixtures,
        seed=args.seed,
        output=args.out,
        format=args.format,
        tolerances=tolerances,
        degree_cap=args.degree_cap,
        restarts=args.restarts,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
