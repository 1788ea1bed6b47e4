"""Delimited output, JSON summaries, and rendered figures for experiments.

Every experiment emits a CSV table (deterministic bytes for a fixed
config), and the JSON summary carries the config echo, the rows, the
declared tolerance checks, and version stamps under the stable top-level
keys {config, rows, checks, versions}.  Alongside the delimited output
the report path renders a matplotlib figure per experiment to PNG.
"""

from __future__ import annotations

import csv
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import __version__
from .szego import CircleLayerLevel, ConvergenceRow, Example2Result

#: Deterministic float formatting shared by every CSV cell.
_FMT = "%.17g"


def _cell(x) -> str:
    return _FMT % float(x)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def as_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "detail": self.detail}


def versions() -> dict:
    return {
        "ttolab": __version__,
        "numpy": np.__version__,
        "python": "%d.%d.%d" % sys.version_info[:3],
    }


# -- CSV ----------------------------------------------------------------------


def write_convergence_csv(path, rows: list[ConvergenceRow]):
    """Sweep table: n, trace_re, trace_im, limit_re, limit_im, abs_error[, delta_norm]."""
    with_delta = any(r.delta_norm is not None for r in rows)
    header = ["n", "trace_re", "trace_im", "limit_re", "limit_im", "abs_error"]
    if with_delta:
        header.append("delta_norm")
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for r in rows:
            record = [str(r.n), _cell(r.trace_value.real), _cell(r.trace_value.imag),
                      _cell(r.limit_value.real), _cell(r.limit_value.imag), _cell(r.abs_error)]
            if with_delta:
                record.append(_cell(r.delta_norm if r.delta_norm is not None else float("nan")))
            writer.writerow(record)


def write_clark_csv(path, mu):
    """Clark atom table: one (argument, weight) row per atom, sorted by argument."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["atom_arg", "weight"])
        for arg, weight in zip(mu.arguments, mu.weights):
            writer.writerow([_cell(arg), _cell(weight)])


def write_operator_csv(path, operator):
    """Row-major dump of a complex matrix; every entry is a re, im field pair."""
    mat = operator.mat if hasattr(operator, "mat") else np.asarray(operator, dtype=complex)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        header = []
        for k in range(mat.shape[1]):
            header += ["re%d" % k, "im%d" % k]
        writer.writerow(header)
        for row in mat:
            cells = []
            for entry in row:
                cells += [_cell(entry.real), _cell(entry.imag)]
            writer.writerow(cells)


def complex_pairs(values) -> list:
    """JSON-friendly serialization of a complex vector as [re, im] pairs."""
    arr = np.asarray(values, dtype=complex).ravel()
    return [[float(v.real), float(v.imag)] for v in arr]


def write_example1_csv(path, levels: list[CircleLayerLevel]):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["level", "n_zeros", "min_bprime", "lower_bound", "delta_norm"])
        for lv in levels:
            writer.writerow([str(lv.level), str(lv.n_zeros), _cell(lv.min_boundary_derivative),
                             _cell(lv.lower_bound), _cell(lv.delta_norm)])


def write_example2_csv(path, result: Example2Result):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "c", "q", "trials", "trace_direct_re", "trace_direct_im",
                         "trace_formula_re", "trace_formula_im", "abs_trace", "bound_ok",
                         "b_prime_at_minus1", "min_bprime_off_arc", "arc_max_bprime"])
        writer.writerow([
            str(result.zeros.size), _cell(result.c), _cell(result.q), str(result.trials),
            _cell(result.trace_direct.real), _cell(result.trace_direct.imag),
            _cell(result.trace_formula.real), _cell(result.trace_formula.imag),
            _cell(abs(result.trace_direct)), "1" if result.bound_ok else "0",
            _cell(result.b_prime_at_minus1), _cell(result.min_bprime_off_arc),
            _cell(result.arc_max_bprime),
        ])


# -- JSON ----------------------------------------------------------------------


def row_dict(experiment: str, r: ConvergenceRow) -> dict:
    out = {
        "experiment": experiment,
        "n": r.n,
        "trace": [r.trace_value.real, r.trace_value.imag],
        "limit": [r.limit_value.real, r.limit_value.imag],
        "abs_error": r.abs_error,
    }
    if r.delta_norm is not None:
        out["delta_norm"] = r.delta_norm
    return out


def write_summary_json(path, config: dict, rows: list[dict], checks: list[CheckResult]):
    payload = {
        "config": config,
        "rows": rows,
        "checks": [c.as_dict() for c in checks],
        "versions": versions(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# -- figures --------------------------------------------------------------------


def convergence_figure(path, rows: list[ConvergenceRow], title: str):
    """Two panels: weighted trace against its limit, and the error decay."""
    ns = [r.n for r in rows]
    traces = [abs(r.trace_value) for r in rows]
    limit = abs(rows[-1].limit_value)
    errs = [max(r.abs_error, 1e-18) for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.4))
    ax1.plot(ns, traces, "o-", label="|trace|")
    ax1.axhline(limit, color="gray", ls="--", lw=1, label="|limit|")
    ax1.set_xlabel("n")
    ax1.set_ylabel("weighted trace")
    ax1.legend(frameon=False)
    ax2.loglog(ns, errs, "s-")
    ax2.set_xlabel("n")
    ax2.set_ylabel("abs error")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def example1_figure(path, levels: list[CircleLayerLevel], title: str):
    ms = [lv.level for lv in levels]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.4))
    ax1.plot(ms, [lv.min_boundary_derivative for lv in levels], "o-", label="min |B'|")
    ax1.plot(ms, [lv.lower_bound for lv in levels], "--", color="gray", label="level/100")
    ax1.set_xlabel("circle level")
    ax1.set_ylabel("boundary derivative")
    ax1.legend(frameon=False)
    ax2.semilogy(ms, [lv.delta_norm for lv in levels], "s-")
    ax2.set_xlabel("circle level")
    ax2.set_ylabel("largest Clark weight")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def clark_figure(path, mu, title: str):
    """Atoms on the unit circle, marker size tracking the weights."""
    fig, ax = plt.subplots(figsize=(4.2, 4.2))
    circle = np.exp(1j * np.linspace(0, 2 * np.pi, 256))
    ax.plot(circle.real, circle.imag, color="lightgray", lw=1)
    sizes = 300.0 * mu.weights / mu.weights.max()
    ax.scatter(mu.atoms.real, mu.atoms.imag, s=sizes, zorder=3)
    ax.set_aspect("equal")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def example2_figure(path, result: Example2Result, title: str):
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9.0, 3.4))
    ax1.bar(["|trace|"], [abs(result.trace_direct)])
    ax1.axhline(1.0 / 3.0, color="red", ls="--", lw=1, label="1/3")
    ax1.set_ylabel("weighted rank-one trace")
    ax1.legend(frameon=False)
    ax2.semilogy(np.arange(result.zeros.size) + 1, 1.0 - np.abs(result.zeros), "o-")
    ax2.set_xlabel("zero index")
    ax2.set_ylabel("1 - |zero|")
    fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
