"""Named experiment configurations pinning the acceptance runs.

Each preset is an ordinary experiment config plus the tolerance checks
that CI runs by name.  All presets are deterministic: the zero recipes,
symbols, and quadrature rules contain no randomness.
"""

from __future__ import annotations

PRESETS: dict[str, dict] = {
    # Classical all-zeros-at-origin case: the weighted trace of T[2cos]^2
    # equals 2(n-1)/n exactly at every n, so the error is exactly 2/n.
    "classical": {
        "name": "classical",
        "experiment": "power",
        "sequence": {"kind": "constant_zero"},
        "symbol": "2cos",
        "p": 2,
        "ns": [8, 16, 32, 64, 128, 256],
        "checks": {
            "closed_form": {"kind": "classical_rows", "tol": 1e-10},
            "final_abs_error": 0.008,
        },
    },
    # Divergent-radius sequence with golden-angle arguments; convergence is
    # a trend (no rate is available), so the checks compare endpoints and
    # cap the final relative error at 10%.
    "harmonic": {
        "name": "harmonic",
        "experiment": "power",
        "sequence": {"kind": "radial_harmonic"},
        "symbol": "2cos",
        "p": [1, 2],
        "ns": [20, 40, 80, 160],
        "checks": {
            "error_decreasing_endpoints": True,
            "final_rel_error": 0.1,
        },
    },
    # Blaschke circle layers: min |B_n'| grows at least like level/100,
    # so the largest Clark weight decays.
    "example1": {
        "name": "example1",
        "experiment": "example1",
        "sequence": {"kind": "circles", "m_max": 5},
        "checks": {
            "min_bprime_lower_bound": True,
            "min_bprime_increasing": True,
            "delta_norm_decreasing": True,
        },
    },
    # Real zeros rushing to 1: the weighted trace of the rank-one
    # compression stays above 1/3 in modulus, defeating convergence.
    "example2": {
        "name": "example2",
        "experiment": "example2",
        "sequence": {"kind": "real_fast", "c": 0.02, "q": 0.5},
        "n": 5,
        "budget": 40,
        "checks": {
            "trace_agreement": 1e-9,
            "bound_ok": True,
            "atom_derivative_floor": True,
        },
    },
}


def preset_config(name: str) -> dict:
    if name not in PRESETS:
        raise KeyError("unknown preset %r (available: %s)" % (name, ", ".join(sorted(PRESETS))))
    import copy

    return copy.deepcopy(PRESETS[name])
