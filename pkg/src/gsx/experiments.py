"""Desk-scale simulation runners behind the ``gsx`` command.

Each runner takes an :class:`ExperimentConfig` and returns an
:class:`ExperimentResult`: one table (list of row dicts) per shift kind plus a
small summary. :func:`write_result` turns that into CSV files and a manifest.
"""

from __future__ import annotations

import csv
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, NotDiagonalizable, RepeatedEigenvalues
from .gft import frame_bounds
from .graphs_io import (
    add_noise,
    cyclic_graph,
    derived_seed,
    directed_subsample,
    exp_weighted_graph,
    k_sparse_signal,
    knn_sensor_graph,
    make_rng,
    read_graph,
    sigma_for_snr,
)
from .shift_ops import (
    TWO_PI,
    ShiftKind,
    ShiftOperator,
    make_a_e,
    make_a_phi,
    normalized_shift,
    raw_shift,
)
from .spectral_core import EigenDecomposition, Graph, eigendecompose
from .wiener import WienerProblem, build_shift_basis, reconstruction_error, wiener_taps_ls

EXPERIMENTS = {
    "energy-vs-shift": "EnergyVsShift",
    "energy-shift-vs-fourier": "EnergyShiftVsFourier",
    "wiener-tap-sweep": "WienerTapSweep",
    "spectrum-report": "SpectrumReport",
}
GENERATORS = ("knn", "exp_weighted", "cyclic", "file")
SATURATION_RTOL = 0.01
RESAMPLE_ATTEMPTS = 64

_DEFAULT_KINDS = {
    "EnergyVsShift": ["GenericPhi", "CanonicalE", "RawAdjacency", "NormalizedAdjacency"],
    "EnergyShiftVsFourier": ["CanonicalE"],
    "WienerTapSweep": ["CanonicalE", "RawAdjacency", "NormalizedAdjacency"],
    "SpectrumReport": [],
}


@dataclass
class GraphSpec:
    generator: str = "knn"
    n: int = 20
    k: int = 6
    seed: int = 42
    theta: float = 0.1
    path: str | None = None
    # keep each directed edge with this probability (None: leave undirected)
    directed_prob: float | None = None
    directed_seed: int = 7
    # retry derived seeds until the spectrum is distinct and diagonalizable
    resample: bool = True


@dataclass
class ExperimentConfig:
    experiment: str
    graph: GraphSpec = field(default_factory=GraphSpec)
    K: int = 10
    signal_seed: int = 1
    shift_kinds: list = field(default_factory=list)
    phase_seed: int = 3
    phi_const: float = 0.0
    max_shifts: int = 50
    L_min: int = 1
    L_max: int | None = None
    snr_db: list = field(default_factory=lambda: [35.0, 15.0])
    sigmas: list | None = None
    trials: int = 50
    seed: int = 0

    def to_json(self) -> dict:
        return asdict(self)


def _canonical_experiment(name: str) -> str:
    if name in EXPERIMENTS:
        return EXPERIMENTS[name]
    if name in EXPERIMENTS.values():
        return name
    raise ConfigError(f"unknown experiment {name!r}; choose from {sorted(EXPERIMENTS)}")


def _int(obj, key, lo=None):
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{key} must be an integer, got {v!r}")
    if lo is not None and v < lo:
        raise ConfigError(f"{key} must be >= {lo}, got {v}")
    return v


def _num(obj, key):
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{key} must be a number, got {v!r}")
    return float(v)


def parse_config(obj: dict, experiment: str | None = None) -> ExperimentConfig:
    """Validate a JSON config object. Unknown keys are rejected."""
    if not isinstance(obj, dict):
        raise ConfigError("config must be a JSON object")
    obj = dict(obj)
    named = obj.pop("experiment", None)
    if experiment is None and named is None:
        raise ConfigError("no experiment given")
    exp = _canonical_experiment(experiment or named)
    if named is not None and _canonical_experiment(named) != exp:
        raise ConfigError(f"config is for {named!r}, not {experiment!r}")

    gobj = obj.pop("graph", {})
    if not isinstance(gobj, dict):
        raise ConfigError("graph must be an object")
    allowed = set(GraphSpec.__dataclass_fields__)
    extra = set(gobj) - allowed
    if extra:
        raise ConfigError(f"unknown graph keys: {sorted(extra)}")
    g = GraphSpec(**gobj)
    if g.generator not in GENERATORS:
        raise ConfigError(f"graph.generator must be one of {GENERATORS}")
    if g.generator == "file" and not g.path:
        raise ConfigError("graph.path is required for generator 'file'")
    gd = asdict(g)
    _int(gd, "n", 1)
    _int(gd, "k", 1)
    _int(gd, "seed", 0)
    _int(gd, "directed_seed", 0)
    if g.generator in ("knn", "exp_weighted") and not 1 <= g.k < g.n:
        raise ConfigError(f"graph.k must lie in [1, n), got {g.k}")
    if g.theta <= 0:
        raise ConfigError("graph.theta must be positive")
    if g.directed_prob is not None and not 0 < g.directed_prob <= 1:
        raise ConfigError("graph.directed_prob must lie in (0, 1]")

    allowed = set(ExperimentConfig.__dataclass_fields__) - {"experiment", "graph"}
    extra = set(obj) - allowed
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    cfg = ExperimentConfig(experiment=exp, graph=g, **obj)

    for key, lo in (("K", 1), ("max_shifts", 0), ("L_min", 1), ("trials", 1),
                    ("seed", 0), ("signal_seed", 0), ("phase_seed", 0)):
        _int(asdict(cfg), key, lo)
    _num(asdict(cfg), "phi_const")
    if not cfg.shift_kinds:
        cfg.shift_kinds = list(_DEFAULT_KINDS[exp])
    for kind in cfg.shift_kinds:
        try:
            ShiftKind(kind)
        except ValueError:
            raise ConfigError(f"unknown shift kind {kind!r}") from None
    if cfg.L_max is None:
        cfg.L_max = g.n
    _int(asdict(cfg), "L_max", cfg.L_min)
    if g.generator != "file" and exp != "SpectrumReport":
        _check_sizes(cfg, g.n)
    if cfg.sigmas is not None:
        if not cfg.sigmas or any(not isinstance(s, (int, float)) or s < 0 for s in cfg.sigmas):
            raise ConfigError("sigmas must be a non-empty list of non-negative numbers")
    elif not cfg.snr_db:
        raise ConfigError("snr_db must be non-empty")
    return cfg


def _check_sizes(cfg: ExperimentConfig, n: int) -> None:
    if cfg.K > n:
        raise ConfigError(f"K={cfg.K} exceeds n={n}")
    if cfg.L_max > n:
        raise ConfigError(f"L_max={cfg.L_max} exceeds n={n}")


def load_config(path, experiment: str | None = None) -> ExperimentConfig:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        return parse_config(obj, experiment)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


# -- building blocks ----------------------------------------------------------

def _generate(spec: GraphSpec, seed: int) -> Graph:
    if spec.generator == "knn":
        g, _ = knn_sensor_graph(spec.n, spec.k, seed)
    elif spec.generator == "exp_weighted":
        g, _ = exp_weighted_graph(spec.n, seed, spec.theta, spec.k)
    elif spec.generator == "cyclic":
        g = cyclic_graph(spec.n)
    else:
        g = read_graph(spec.path)
    return g


def build_graph(spec: GraphSpec) -> tuple[EigenDecomposition, dict]:
    """Generate the configured graph and decompose it.

    Random generators with ``resample`` on retry ``derived_seed(seed, i)`` for
    ``i = 1, 2, ...`` until the decomposition succeeds. The seeds actually used
    are reported in the returned info dict.
    """
    randomized = spec.generator in ("knn", "exp_weighted") or spec.directed_prob is not None
    attempts = RESAMPLE_ATTEMPTS if (spec.resample and randomized) else 1
    last = None
    for i in range(attempts):
        gseed = spec.seed if i == 0 else derived_seed(spec.seed, i)
        dseed = spec.directed_seed if i == 0 else derived_seed(spec.directed_seed, i)
        g = _generate(spec, gseed)
        if spec.directed_prob is not None:
            g = directed_subsample(g, spec.directed_prob, dseed)
        try:
            d = eigendecompose(g)
        except (RepeatedEigenvalues, NotDiagonalizable) as exc:
            last = exc
            continue
        info = {"graph_seed_used": gseed, "resample_attempts": i, "directed": g.directed}
        if spec.directed_prob is not None:
            info["directed_seed_used"] = dseed
        return d, info
    raise last


def _prepare(cfg: ExperimentConfig) -> tuple[EigenDecomposition, dict]:
    d, info = build_graph(cfg.graph)
    _check_sizes(cfg, d.n)
    return d, info


def make_shift(d: EigenDecomposition, kind: str, cfg: ExperimentConfig) -> ShiftOperator:
    kind = ShiftKind(kind)
    if kind is ShiftKind.CANONICAL_E:
        return make_a_e(d, cfg.phi_const)
    if kind is ShiftKind.GENERIC_PHI:
        return make_a_phi(d, make_rng(cfg.phase_seed).random(d.n) * TWO_PI)
    if kind is ShiftKind.RAW:
        return raw_shift(d)
    return normalized_shift(d)


def thread_count() -> int:
    cap = os.environ.get("GSX_THREADS")
    n = os.cpu_count() or 1
    if cap:
        try:
            n = min(n, max(1, int(cap)))
        except ValueError:
            raise ConfigError(f"GSX_THREADS must be an integer, got {cap!r}") from None
    return n


def saturation_point(curve, taps) -> int:
    """First tap count whose relative improvement over the previous one is below 1%.

    Returns the last tap count when the curve keeps improving throughout.
    """
    v = np.asarray(curve, dtype=float)
    for i in range(1, v.size):
        if v[i - 1] == 0 or (v[i - 1] - v[i]) / v[i - 1] < SATURATION_RTOL:
            return taps[i]
    return taps[-1]


@dataclass
class ExperimentResult:
    experiment: str
    tables: dict
    columns: list
    summary: dict = field(default_factory=dict)


# -- runners ------------------------------------------------------------------

def run_energy_vs_shift(cfg: ExperimentConfig) -> ExperimentResult:
    """Fourier-domain energy of ``S^k x`` for k = 0..max_shifts."""
    d, info = _prepare(cfg)
    x_f = d.v_inv @ k_sparse_signal(d, cfg.K, cfg.signal_seed).values
    ks = np.arange(cfg.max_shifts + 1)
    tables = {}
    for kind in cfg.shift_kinds:
        s = make_shift(d, kind, cfg)
        e = np.sum(np.abs(s.spectral_power(ks) * x_f[:, None]) ** 2, axis=0)
        tables[kind] = [{"shift_kind": kind, "k": int(k), "fourier_energy": float(v)}
                        for k, v in zip(ks, e)]
    return ExperimentResult("EnergyVsShift", tables, ["shift_kind", "k", "fourier_energy"], info)


def run_energy_shift_vs_fourier(cfg: ExperimentConfig) -> ExperimentResult:
    """Vertex-domain against Fourier-domain energy of ``A_e^k x``, with frame bounds."""
    d, info = _prepare(cfg)
    x_f = d.v_inv @ k_sparse_signal(d, cfg.K, cfg.signal_seed).values
    fb = frame_bounds(d)
    ks = np.arange(cfg.max_shifts + 1)
    tables = {}
    for kind in cfg.shift_kinds:
        s = make_shift(d, kind, cfg)
        coeffs = s.spectral_power(ks) * x_f[:, None]
        shift_e = np.sum(np.abs(d.v @ coeffs) ** 2, axis=0)
        fourier_e = np.sum(np.abs(coeffs) ** 2, axis=0)
        rows = []
        for k, se, fe in zip(ks, shift_e, fourier_e):
            lo, hi = (float(b) for b in fb.shift_domain_range(fe))
            rows.append({"shift_kind": kind, "k": int(k), "shift_energy": float(se),
                         "fourier_energy": float(fe), "lower_bound": lo, "upper_bound": hi})
        tables[kind] = rows
    info.update(alpha=fb.alpha, beta=fb.beta, unitary_v=d.unitary_v)
    cols = ["shift_kind", "k", "shift_energy", "fourier_energy", "lower_bound", "upper_bound"]
    return ExperimentResult("EnergyShiftVsFourier", tables, cols, info)


def _noise_levels(cfg: ExperimentConfig):
    if cfg.sigmas is not None:
        return [("sigma", float(s)) for s in cfg.sigmas]
    return [("snr_db", float(v)) for v in cfg.snr_db]


def _sweep_trial(d, shifts, cfg, levels, t):
    """Errors for one trial, shape (levels, kinds, taps)."""
    x = k_sparse_signal(d, cfg.K, derived_seed(cfg.signal_seed, t)).values
    noise_seed = derived_seed(cfg.seed, t)
    taps = range(cfg.L_min, cfg.L_max + 1)
    out = np.empty((len(levels), len(shifts), len(taps)))
    for a, (mode, level) in enumerate(levels):
        sigma = level if mode == "sigma" else sigma_for_snr(x, level)
        y = add_noise(x, sigma, noise_seed).values
        for b, s in enumerate(shifts):
            for c, L in enumerate(taps):
                h = wiener_taps_ls(WienerProblem(s, x, y, L), allow_pinv=True).h
                # evaluate on the same Krylov basis the solver saw
                out[a, b, c] = reconstruction_error(x, build_shift_basis(s, y, L) @ h)
    return out


def run_wiener_tap_sweep(cfg: ExperimentConfig) -> ExperimentResult:
    """Mean relative reconstruction error of the optimal filter per (noise, kind, L)."""
    d, info = _prepare(cfg)
    shifts = [make_shift(d, k, cfg) for k in cfg.shift_kinds]
    levels = _noise_levels(cfg)
    with ThreadPoolExecutor(max_workers=thread_count()) as pool:
        per_trial = list(pool.map(lambda t: _sweep_trial(d, shifts, cfg, levels, t),
                                  range(cfg.trials)))
    # sum in trial order so the result does not depend on scheduling
    mean = np.zeros_like(per_trial[0])
    for arr in per_trial:
        mean += arr
    mean /= cfg.trials

    taps = list(range(cfg.L_min, cfg.L_max + 1))
    tables = {kind: [] for kind in cfg.shift_kinds}
    saturation = {}
    for a, (mode, level) in enumerate(levels):
        label = f"{mode}={level:g}"
        saturation[label] = {}
        for b, kind in enumerate(cfg.shift_kinds):
            for c, L in enumerate(taps):
                tables[kind].append({"shift_kind": kind, mode: level, "L": L,
                                     "mean_reconstruction_error": float(mean[a, b, c])})
            saturation[label][kind] = saturation_point(mean[a, b], taps)
    for kind in tables:
        tables[kind].sort(key=lambda r: (-r.get("snr_db", 0.0), r.get("sigma", 0.0), r["L"]))
    mode = levels[0][0]
    info["saturation_L"] = saturation
    return ExperimentResult("WienerTapSweep", tables,
                            ["shift_kind", mode, "L", "mean_reconstruction_error"], info)


def run_spectrum_report(cfg: ExperimentConfig) -> ExperimentResult:
    """Eigenvalues in canonical order."""
    d, info = build_graph(cfg.graph)
    rows = [{"index": i, "re": float(z.real), "im": float(z.imag), "abs": float(abs(z))}
            for i, z in enumerate(d.eigenvalues)]
    info.update(trace=float(np.trace(d.adjacency)), eigenvalue_sum=float(np.sum(d.eigenvalues).real))
    return ExperimentResult("SpectrumReport", {"": rows}, ["index", "re", "im", "abs"], info)


RUNNERS = {
    "EnergyVsShift": run_energy_vs_shift,
    "EnergyShiftVsFourier": run_energy_shift_vs_fourier,
    "WienerTapSweep": run_wiener_tap_sweep,
    "SpectrumReport": run_spectrum_report,
}


def run(cfg: ExperimentConfig) -> ExperimentResult:
    return RUNNERS[cfg.experiment](cfg)


# -- output -------------------------------------------------------------------

def _cell(v):
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_table(path, columns, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(r[c]) for c in columns])


def _slug(experiment: str) -> str:
    return {v: k for k, v in EXPERIMENTS.items()}[experiment]


def write_result(result: ExperimentResult, cfg: ExperimentConfig, out_dir, wall_time: float) -> list:
    """Write one CSV per shift kind plus ``<experiment>.manifest.json``; return the paths."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    slug = _slug(result.experiment)
    files = []
    for kind in sorted(result.tables):
        name = f"{slug}_{kind}.csv" if kind else f"{slug}.csv"
        write_table(out / name, result.columns, result.tables[kind])
        files.append(name)
    manifest = {
        "experiment": result.experiment,
        "version": __version__,
        "config": cfg.to_json(),
        "wall_time_s": wall_time,
        "files": files,
        "summary": result.summary,
    }
    mpath = out / f"{slug}.manifest.json"
    mpath.write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return [out / f for f in files] + [mpath]


def execute(cfg: ExperimentConfig, out_dir) -> tuple[ExperimentResult, list]:
    t0 = time.perf_counter()
    result = run(cfg)
    return result, write_result(result, cfg, out_dir, time.perf_counter() - t0)
