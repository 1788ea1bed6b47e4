"""Command-line front end: experiment configs, named presets, and the selftest.

Exit codes distinguish the failure classes:

* 0 -- success, all declared checks passed;
* 2 -- configuration error (bad JSON, invalid field, unknown preset);
* 3 -- a declared numeric tolerance check failed;
* 4 -- the example-2 hypothesis search exhausted its budget;
* 1 -- selftest failure or unexpected error.

The environment variable TTOLAB_THREADS overrides the number of worker
threads used to compute sweep rows (default 1; rows are assembled in
input order either way, so output bytes do not depend on it).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import report, szego
from .presets import PRESETS, preset_config
from .report import CheckResult
from .szego import ConvergenceRow, HypothesisSearchError, ZeroSequence

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_TOLERANCE = 3
EXIT_HYPOTHESIS = 4

_EXPERIMENTS = ("power", "g", "fixed_alpha", "example1", "example2", "clark")

_OPERATOR_EXPORTS = ("delta", "shift", "weight")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


# -- descriptor compilation ----------------------------------------------------


def _sequence_from(desc) -> ZeroSequence:
    if not isinstance(desc, dict) or "kind" not in desc:
        raise ConfigError("sequence descriptor must be an object with a 'kind'")
    kind = desc["kind"]
    try:
        if kind == "constant_zero":
            return szego.constant_zero()
        if kind == "radial_harmonic":
            return szego.radial_harmonic()
        if kind == "circles":
            return szego.circle_layers(int(desc["m_max"]))
        if kind == "real_fast":
            return szego.real_fast(float(desc["c"]), float(desc["q"]))
        if kind == "explicit":
            zeros = [complex(re, im) for re, im in desc["zeros"]]
            return szego.explicit(zeros, bool(desc.get("blaschke", True)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("bad sequence descriptor: %s" % exc) from exc
    raise ConfigError("unknown sequence kind %r" % kind)


def _symbol_from(desc):
    if isinstance(desc, str):
        desc = {"preset": desc}
    if not isinstance(desc, dict):
        raise ConfigError("symbol descriptor must be a string or object")
    if "preset" in desc:
        name = desc["preset"]
        if name == "2cos":
            return lambda theta: 2.0 * np.cos(theta) + 0.0j
        raise ConfigError("unknown symbol preset %r" % name)
    if "fourier" in desc:
        try:
            terms = [(int(k), complex(re, im)) for k, re, im in desc["fourier"]]
        except (TypeError, ValueError) as exc:
            raise ConfigError("fourier terms must be [k, re, im] triples") from exc

        def trig(theta):
            out = np.zeros(np.shape(theta), dtype=complex)
            for k, c in terms:
                out = out + c * np.exp(1j * k * np.asarray(theta))
            return out

        return trig
    if "kernel_combo" in desc:
        spec = desc["kernel_combo"]
        try:
            points = np.array([complex(re, im) for re, im in spec["points"]])
            coeffs = np.array([complex(re, im) for re, im in spec["coeffs"]])
            conj_coeffs = np.array([complex(re, im) for re, im in spec.get("conj_coeffs", [])])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("bad kernel_combo descriptor: %s" % exc) from exc
        if np.abs(points).max() >= 1.0:
            raise ConfigError("kernel points must lie in the open disk")
        if conj_coeffs.size not in (0, points.size) or coeffs.size != points.size:
            raise ConfigError("kernel_combo coefficient counts must match the points")

        def combo(theta):
            z = np.exp(1j * np.asarray(theta))
            kernels = 1.0 / (1.0 - np.conj(points)[:, None] * z[None, :])
            out = coeffs @ kernels
            if conj_coeffs.size:
                out = out + conj_coeffs @ np.conj(kernels)
            return out.reshape(np.shape(theta))

        return combo
    raise ConfigError("symbol descriptor needs one of: preset, fourier, kernel_combo")


def _g_from(desc):
    if isinstance(desc, str):
        if desc == "identity":
            return lambda x: x
        if desc == "abs":
            return np.abs
        raise ConfigError("unknown g preset %r" % desc)
    if isinstance(desc, dict) and "poly" in desc:
        try:
            coeffs = [float(c) for c in desc["poly"]]
        except (TypeError, ValueError) as exc:
            raise ConfigError("poly coefficients must be real numbers") from exc

        def poly(x):
            out = np.zeros(np.shape(x), dtype=float)
            for c in reversed(coeffs):
                out = out * x + c
            return out

        return poly
    raise ConfigError("g descriptor must be 'identity', 'abs', or {'poly': [...]}")


@dataclass
class ExperimentConfig:
    """Validated experiment description (see the README for the JSON schema)."""

    name: str
    experiment: str
    raw: dict
    sequence: ZeroSequence
    symbol: object = None
    alpha: complex | None = None
    powers: tuple = ()
    g: object = None
    ns: tuple = ()
    n: int = 5
    budget: int = 40
    operator: str | None = None
    quadrature_points: int | None = None
    alpha_nodes: int = 512
    output_path: str = "out"
    checks: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        experiment = data.get("experiment")
        if experiment not in _EXPERIMENTS:
            raise ConfigError("experiment must be one of %s" % (_EXPERIMENTS,))
        name = str(data.get("name", experiment))
        sequence = _sequence_from(data.get("sequence", {}))

        symbol = None
        if experiment in ("power", "g", "fixed_alpha"):
            if "symbol" not in data:
                raise ConfigError("experiment %r needs a symbol" % experiment)
            symbol = _symbol_from(data["symbol"])

        alpha = None
        if "alpha" in data and data["alpha"] is not None:
            a = data["alpha"]
            alpha = complex(a[0], a[1]) if isinstance(a, (list, tuple)) else complex(a)
            if abs(abs(alpha) - 1.0) > 1e-12:
                raise ConfigError("alpha must be unimodular to 1e-12, got |alpha| = %.12g" % abs(alpha))
        if experiment in ("fixed_alpha", "clark") and alpha is None:
            raise ConfigError("%s experiments need a unimodular alpha" % experiment)

        operator = data.get("operator")
        if operator is not None:
            if experiment != "clark":
                raise ConfigError("operator export is only available on clark experiments")
            if operator not in _OPERATOR_EXPORTS:
                raise ConfigError("operator must be one of %s" % (_OPERATOR_EXPORTS,))

        powers: tuple = ()
        if experiment in ("power", "fixed_alpha"):
            p = data.get("p", 1)
            powers = tuple(int(v) for v in (p if isinstance(p, (list, tuple)) else [p]))
            if not powers or any(v < 1 for v in powers):
                raise ConfigError("powers must be integers >= 1")

        g = _g_from(data["g"]) if experiment == "g" else None
        if experiment == "g" and "g" not in data:
            raise ConfigError("g experiments need a g descriptor")

        ns: tuple = ()
        if experiment in ("power", "g", "fixed_alpha"):
            ns_raw = data.get("ns")
            if not ns_raw:
                raise ConfigError("sweep experiments need a nonempty ns list")
            ns = tuple(int(v) for v in ns_raw)
            if any(b <= a for a, b in zip(ns, ns[1:])):
                raise ConfigError("ns must be strictly increasing")

        quadrature_points = data.get("quadrature_points")
        if quadrature_points is not None:
            quadrature_points = int(quadrature_points)
            if ns and quadrature_points < 8 * max(ns):
                raise ConfigError("quadrature_points must be at least 8 * max(ns)")

        alpha_nodes = int(data.get("alpha_nodes", 512))
        if alpha_nodes < 16:
            raise ConfigError("alpha_nodes must be at least 16")

        return cls(
            name=name,
            experiment=experiment,
            raw=data,
            sequence=sequence,
            symbol=symbol,
            alpha=alpha,
            powers=powers,
            g=g,
            ns=ns,
            n=int(data.get("n", 5)),
            budget=int(data.get("budget", 40)),
            operator=operator,
            quadrature_points=quadrature_points,
            alpha_nodes=alpha_nodes,
            output_path=str(data.get("output_path", "out")),
            checks=dict(data.get("checks", {})),
        )

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError("cannot read config %s: %s" % (path, exc)) from exc
        return cls.from_dict(data)


# -- checks ---------------------------------------------------------------------


def _sweep_checks(cfg: ExperimentConfig, label: str, rows: list[ConvergenceRow]) -> list[CheckResult]:
    out = []
    checks = cfg.checks
    if "closed_form" in checks:
        tol = float(checks["closed_form"].get("tol", 1e-10))
        worst = max(abs(r.trace_value - 2.0 * (r.n - 1) / r.n) for r in rows)
        out.append(CheckResult("%s:closed_form" % label, worst <= tol,
                               "max deviation from 2(n-1)/n is %.3e (tol %.1e)" % (worst, tol)))
    if checks.get("error_decreasing_endpoints"):
        first, last = rows[0], rows[-1]
        ok = last.abs_error < first.abs_error
        out.append(CheckResult("%s:error_decreasing" % label, ok,
                               "abs_error %.3e at n=%d vs %.3e at n=%d" % (
                                   last.abs_error, last.n, first.abs_error, first.n)))
    if "final_abs_error" in checks:
        bound = float(checks["final_abs_error"])
        last = rows[-1]
        out.append(CheckResult("%s:final_abs_error" % label, last.abs_error <= bound,
                               "abs_error %.3e at n=%d (bound %.3e)" % (last.abs_error, last.n, bound)))
    if "final_rel_error" in checks:
        bound = float(checks["final_rel_error"])
        last = rows[-1]
        scale = abs(last.limit_value)
        err = last.abs_error / scale if scale > 1e-9 else last.abs_error
        out.append(CheckResult("%s:final_rel_error" % label, err <= bound,
                               "relative error %.3e at n=%d (bound %.3e; absolute used when the limit vanishes)"
                               % (err, last.n, bound)))
    return out


def _example1_checks(cfg: ExperimentConfig, levels) -> list[CheckResult]:
    out = []
    checks = cfg.checks
    if checks.get("min_bprime_lower_bound"):
        ok = all(lv.min_boundary_derivative >= lv.lower_bound for lv in levels)
        out.append(CheckResult("example1:min_bprime_lower_bound", ok,
                               "min |B'| per level: %s" % ["%.3f" % lv.min_boundary_derivative for lv in levels]))
    if checks.get("min_bprime_increasing"):
        vals = [lv.min_boundary_derivative for lv in levels]
        ok = all(b > a for a, b in zip(vals, vals[1:]))
        out.append(CheckResult("example1:min_bprime_increasing", ok, "levels %s" % ["%.3f" % v for v in vals]))
    if checks.get("delta_norm_decreasing"):
        vals = [lv.delta_norm for lv in levels]
        ok = all(b < a for a, b in zip(vals, vals[1:]))
        out.append(CheckResult("example1:delta_norm_decreasing", ok, "levels %s" % ["%.4f" % v for v in vals]))
    return out


def _example2_checks(cfg: ExperimentConfig, result) -> list[CheckResult]:
    out = []
    checks = cfg.checks
    if "trace_agreement" in checks:
        tol = float(checks["trace_agreement"])
        gap = abs(result.trace_direct - result.trace_formula)
        out.append(CheckResult("example2:trace_agreement", gap <= tol,
                               "matrix trace vs closed form differ by %.3e (tol %.1e)" % (gap, tol)))
    if checks.get("bound_ok"):
        out.append(CheckResult("example2:bound_ok", result.bound_ok,
                               "|trace| = %.6f vs threshold 1/3" % abs(result.trace_direct)))
    if checks.get("atom_derivative_floor"):
        ok = (result.min_bprime_off_arc >= 9.0 * math.pi
              and result.b_prime_at_minus1 <= 1.5 and result.arc_max_bprime <= 1.1)
        out.append(CheckResult("example2:atom_derivative_floor", ok,
                               "|B'(-1)| = %.4f, min off-arc = %.1f (floor %.1f), arc max = %.4f"
                               % (result.b_prime_at_minus1, result.min_bprime_off_arc, 9.0 * math.pi,
                                  result.arc_max_bprime)))
    return out


# -- execution --------------------------------------------------------------------


def _workers() -> int:
    try:
        return max(1, int(os.environ.get("TTOLAB_THREADS", "1")))
    except ValueError:
        return 1


def _sweep_rows(fn, ns, workers):
    """Evaluate one row per n, possibly in worker threads, in input order."""
    if workers <= 1 or len(ns) <= 1:
        return [fn(n) for n in ns]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, ns))


def execute(cfg: ExperimentConfig, out_dir: Path, figures: bool = True) -> tuple[int, list[CheckResult]]:
    """Run one experiment, writing CSV, JSON, and figures into out_dir."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    workers = _workers()
    rows_json: list[dict] = []
    checks: list[CheckResult] = []
    exit_code = EXIT_OK

    if cfg.experiment in ("power", "g", "fixed_alpha"):
        sweeps: list[tuple[str, list[ConvergenceRow]]] = []
        if cfg.experiment == "power":
            for p in cfg.powers:
                rows = _sweep_rows(
                    lambda n, p=p: szego.szego_power_sweep(
                        cfg.sequence, cfg.symbol, p, [n], quadrature_points=cfg.quadrature_points)[0],
                    cfg.ns, workers)
                label = cfg.name if len(cfg.powers) == 1 else "%s_p%d" % (cfg.name, p)
                sweeps.append((label, rows))
        elif cfg.experiment == "g":
            rows = _sweep_rows(
                lambda n: szego.szego_g_sweep(
                    cfg.sequence, cfg.symbol, cfg.g, [n], quadrature_points=cfg.quadrature_points)[0],
                cfg.ns, workers)
            sweeps.append((cfg.name, rows))
        else:
            for p in cfg.powers:
                rows = szego.fixed_alpha_sweep(cfg.sequence, cfg.alpha, cfg.symbol, p, list(cfg.ns),
                                               quadrature_points=cfg.quadrature_points)
                label = cfg.name if len(cfg.powers) == 1 else "%s_p%d" % (cfg.name, p)
                sweeps.append((label, rows))
        for label, rows in sweeps:
            report.write_convergence_csv(out_dir / ("%s.csv" % label), rows)
            if figures:
                report.convergence_figure(out_dir / ("%s.png" % label), rows, label)
            rows_json.extend(report.row_dict(label, r) for r in rows)
            checks.extend(_sweep_checks(cfg, label, rows))

    elif cfg.experiment == "example1":
        m_max = cfg.sequence.params[0]
        levels = szego.example1_profile(m_max)
        report.write_example1_csv(out_dir / ("%s.csv" % cfg.name), levels)
        if figures:
            report.example1_figure(out_dir / ("%s.png" % cfg.name), levels, cfg.name)
        rows_json.extend({
            "experiment": cfg.name,
            "level": lv.level,
            "n": lv.n_zeros,
            "min_bprime": lv.min_boundary_derivative,
            "lower_bound": lv.lower_bound,
            "delta_norm": lv.delta_norm,
        } for lv in levels)
        checks.extend(_example1_checks(cfg, levels))

    elif cfg.experiment == "example2":
        c0 = cfg.sequence.params[0] if cfg.sequence.kind == "real_fast" else 0.02
        q = cfg.sequence.params[1] if cfg.sequence.kind == "real_fast" else 0.5
        try:
            result = szego.example2_run(n=cfg.n, c0=c0, q=q, budget=cfg.budget,
                                        quadrature_points=cfg.quadrature_points)
        except HypothesisSearchError as exc:
            checks.append(CheckResult("example2:hypothesis_search", False, str(exc)))
            report.write_summary_json(out_dir / ("%s.json" % cfg.name), cfg.raw, rows_json, checks)
            return EXIT_HYPOTHESIS, checks
        report.write_example2_csv(out_dir / ("%s.csv" % cfg.name), result)
        if figures:
            report.example2_figure(out_dir / ("%s.png" % cfg.name), result, cfg.name)
        rows_json.append({
            "experiment": cfg.name,
            "n": int(result.zeros.size),
            "trace_direct": [result.trace_direct.real, result.trace_direct.imag],
            "trace_formula": [result.trace_formula.real, result.trace_formula.imag],
            "bound_ok": result.bound_ok,
            "b_prime_at_minus1": result.b_prime_at_minus1,
            "min_bprime_off_arc": result.min_bprime_off_arc,
            "trials": result.trials,
        })
        checks.extend(_example2_checks(cfg, result))

    elif cfg.experiment == "clark":
        from . import tto
        from .clark import clark_measure
        from .modelspace import tm_basis

        B = cfg.sequence.blaschke(cfg.n)
        mu = clark_measure(B, cfg.alpha)
        report.write_clark_csv(out_dir / ("%s.csv" % cfg.name), mu)
        if figures:
            report.clark_figure(out_dir / ("%s.png" % cfg.name), mu, cfg.name)
        if cfg.operator:
            basis = tm_basis(B, quadrature_points=cfg.quadrature_points)
            if cfg.operator == "delta":
                op = tto.delta_operator(basis, cfg.alpha)
            elif cfg.operator == "shift":
                op = tto.modified_shift(basis, cfg.alpha)
            else:
                op = szego.weight_operator(basis)
            report.write_operator_csv(out_dir / ("%s_%s.csv" % (cfg.name, cfg.operator)), op)
        rows_json.extend({
            "experiment": cfg.name,
            "atom": pair,
            "atom_arg": float(arg),
            "weight": float(weight),
        } for pair, arg, weight in zip(report.complex_pairs(mu.atoms), mu.arguments, mu.weights))

    report.write_summary_json(out_dir / ("%s.json" % cfg.name), cfg.raw, rows_json, checks)
    if any(not c.passed for c in checks):
        exit_code = EXIT_TOLERANCE
    return exit_code, checks


# -- entry points ------------------------------------------------------------------


def _print_checks(checks: list[CheckResult]):
    for c in checks:
        print("[%s] %s -- %s" % ("PASS" if c.passed else "FAIL", c.name, c.detail))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ttolab",
        description="Truncated Toeplitz operator experiments on finite-dimensional model spaces.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run an experiment described by a JSON config")
    run_p.add_argument("config", help="path to the JSON experiment config")
    run_p.add_argument("--out", default=None, help="output directory (default: config output_path)")
    run_p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    pre_p = sub.add_parser("preset", help="run a named, pinned experiment")
    pre_p.add_argument("name", choices=sorted(PRESETS), help="preset name")
    pre_p.add_argument("--out", default="out", help="output directory")
    pre_p.add_argument("--no-figures", action="store_true", help="skip PNG rendering")

    st_p = sub.add_parser("selftest", help="run the full invariant suite")
    st_p.add_argument("--only", default=None, help="substring filter on check names")

    args = parser.parse_args(argv)

    if args.command == "selftest":
        from .selftest import run_selftest

        return run_selftest(only=args.only)

    try:
        if args.command == "run":
            cfg = ExperimentConfig.from_file(args.config)
            out_dir = Path(args.out) if args.out else Path(cfg.output_path)
        else:
            cfg = ExperimentConfig.from_dict(preset_config(args.name))
            out_dir = Path(args.out)
    except (ConfigError, KeyError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return EXIT_CONFIG

    code, checks = execute(cfg, out_dir, figures=not args.no_figures)
    _print_checks(checks)
    print("artifacts written to %s" % out_dir)
    return code


if __name__ == "__main__":
    sys.exit(main())
