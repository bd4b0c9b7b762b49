"""Grid sweeps over (n_g, f), model comparison, and deterministic CSV/JSON export.

Row order is f-major, then n_g, then model; evaluation is embarrassingly parallel
over grid points and collected by index, so the output is byte-identical at any
worker count.  Point-local numerical conditions (exact crossings, series
divergences, hybridized oracle spectra, ...) become row flags, never aborts: rows
keep their numeric values where defined and NaN where not.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import circuit, fock, perturbative
from .errors import (
    ConfigInvalid,
    CpbOptomechError,
    DegenerateBand,
    DegeneratePoint,
    DerivativeUnresolved,
    IoFailure,
    LabelingAmbiguous,
    NonAnalyticPoint,
    OracleBudgetExceeded,
    SeriesDivergence,
)
from .params import BiasPoint, ValidatedParams, params_from_dict, params_to_dict, validate

MODELS = ("circuit", "perturbative2", "perturbative3", "fock_oracle")
_FLAGGABLE = (NonAnalyticPoint, SeriesDivergence, LabelingAmbiguous,
              DegenerateBand, DegeneratePoint, DerivativeUnresolved)
_ORACLE_GRID_CAP = 64 * 64

CSV_HEADER = "n_g,f,model,omega_c_hz,g_rp_hz,g_0_hz,g_ck_hz,enhancement,flags"


@dataclass(frozen=True)
class SweepConfig:
    params: dict                      # CircuitParams in JSON-schema form
    n_g_range: tuple                  # (lo, hi, count)
    f_range: tuple                    # (lo, hi, count)
    models: tuple = ("circuit",)
    ej_ec_ratios: tuple | None = None  # Fig-2b mode: E_J fixed, E_C = E_J/ratio
    output: str | None = None
    fmt: str = "csv"
    charge_channel: str = perturbative.GATE
    n_cavity: int = 8
    n_mech: int = 8

    def validated_params(self) -> ValidatedParams:
        return validate(params_from_dict(self.params))

    def axis(self, which: str) -> np.ndarray:
        lo, hi, count = getattr(self, which)
        return np.linspace(lo, hi, int(count))


def config_from_dict(data: dict) -> SweepConfig:
    data = dict(data)
    data.pop("config_fingerprint", None)
    known = {"params", "n_g_range", "f_range", "models", "ej_ec_ratios",
             "output", "fmt", "charge_channel", "n_cavity", "n_mech"}
    unknown = set(data) - known
    if unknown:
        raise ConfigInvalid(f"unknown config keys: {sorted(unknown)}")
    if "params" not in data or "n_g_range" not in data or "f_range" not in data:
        raise ConfigInvalid("config needs params, n_g_range, and f_range")
    cfg = SweepConfig(
        params=dict(data["params"]),
        n_g_range=tuple(data["n_g_range"]),
        f_range=tuple(data["f_range"]),
        models=tuple(data.get("models", ("circuit",))),
        ej_ec_ratios=(tuple(data["ej_ec_ratios"])
                      if data.get("ej_ec_ratios") else None),
        output=data.get("output"),
        fmt=data.get("fmt", "csv"),
        charge_channel=data.get("charge_channel", perturbative.GATE),
        n_cavity=int(data.get("n_cavity", 8)),
        n_mech=int(data.get("n_mech", 8)),
    )
    return validate_config(cfg)


def validate_config(cfg: SweepConfig) -> SweepConfig:
    if not cfg.models:
        raise ConfigInvalid("empty model set")
    for m in cfg.models:
        if m not in MODELS:
            raise ConfigInvalid(f"unknown model {m!r}; choose from {MODELS}")
    for which in ("n_g_range", "f_range"):
        rng = getattr(cfg, which)
        if len(rng) != 3:
            raise ConfigInvalid(f"{which} must be (lo, hi, count)")
        lo, hi, count = rng
        if int(count) < 2:
            raise ConfigInvalid(f"{which} count must be >= 2")
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise ConfigInvalid(f"{which} bounds must be finite")
    if cfg.fmt not in ("csv", "json"):
        raise ConfigInvalid(f"format must be csv or json, got {cfg.fmt!r}")
    if cfg.charge_channel not in (perturbative.GATE, perturbative.ISLAND):
        raise ConfigInvalid(f"unknown charge channel {cfg.charge_channel!r}")
    grid = int(cfg.n_g_range[2]) * int(cfg.f_range[2])
    if "fock_oracle" in cfg.models and grid > _ORACLE_GRID_CAP:
        raise OracleBudgetExceeded(
            f"fock_oracle on a {grid}-point grid exceeds the {_ORACLE_GRID_CAP} cap"
        )
    try:
        cfg.validated_params()
    except CpbOptomechError as exc:
        raise ConfigInvalid(f"invalid circuit parameters: {exc}") from exc
    return cfg


def config_to_dict(cfg: SweepConfig) -> dict:
    return {
        "params": dict(cfg.params),
        "n_g_range": list(cfg.n_g_range),
        "f_range": list(cfg.f_range),
        "models": list(cfg.models),
        "ej_ec_ratios": list(cfg.ej_ec_ratios) if cfg.ej_ec_ratios else None,
        "output": cfg.output,
        "fmt": cfg.fmt,
        "charge_channel": cfg.charge_channel,
        "n_cavity": cfg.n_cavity,
        "n_mech": cfg.n_mech,
    }


def config_fingerprint(cfg: SweepConfig) -> str:
    canon = json.dumps(config_to_dict(cfg), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


@dataclass(frozen=True)
class Row:
    n_g: float
    f: float
    model: str
    omega_c: float         # rad/s
    g_rp: float
    g_0: float
    g_ck: float
    enhancement: float
    flags: str = ""


@dataclass
class SweepTable:
    rows: list
    config_fingerprint: str
    config: dict = field(default_factory=dict)


def eval_point(vp: ValidatedParams, bias: BiasPoint, models,
               charge_channel: str = perturbative.GATE,
               fock_cfg: fock.FockConfig | None = None) -> list:
    """One CouplingResult row per requested model, numerical conditions as flags."""
    rows = []
    nan = float("nan")
    for model in models:
        flags = ""
        res = None
        try:
            if model == "circuit":
                res = circuit.circuit_couplings(vp, bias)
            elif model in ("perturbative2", "perturbative3"):
                order = 2 if model == "perturbative2" else 3
                res = perturbative.grp_perturbative(vp, bias, order, charge_channel)
            elif model == "fock_oracle":
                cfg = fock_cfg or fock.FockConfig(charge_channel=charge_channel)
                res = fock.oracle_couplings(vp, bias, cfg)
            else:
                raise ConfigInvalid(f"unknown model {model!r}")
        except _FLAGGABLE as exc:
            flags = type(exc).__name__
        if res is None:
            g_0 = circuit.direct_coupling(vp)
            rows.append(Row(bias.n_g0, bias.f, model, nan, nan, g_0, nan, nan, flags))
        else:
            rows.append(Row(bias.n_g0, bias.f, model, res.omega_c, res.g_rp,
                            res.g_0, res.g_ck, res.enhancement, flags))
    return rows


def _worker(task):
    vp, n_g, f, models, channel, nc, nm = task
    cfg = fock.FockConfig(n_cavity=nc, n_mech=nm, charge_channel=channel)
    return eval_point(vp, BiasPoint(n_g0=n_g, f=f), models, channel, cfg)


def resolve_jobs(jobs: int | None) -> int:
    if jobs is None:
        jobs = int(os.environ.get("CPB_OPTOMECH_JOBS", "1"))
    return max(1, jobs)


def run_sweep(cfg: SweepConfig, jobs: int | None = None) -> SweepTable:
    """Evaluate the full grid; deterministic row order regardless of parallelism."""
    cfg = validate_config(cfg)
    vp = cfg.validated_params()
    n_gs = cfg.axis("n_g_range")
    fs = cfg.axis("f_range")
    tasks = [(vp, float(n_g), float(f), cfg.models, cfg.charge_channel,
              cfg.n_cavity, cfg.n_mech)
             for f in fs for n_g in n_gs]
    jobs = resolve_jobs(jobs)
    if jobs == 1 or len(tasks) < 4:
        results = [_worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker, tasks,
                                    chunksize=max(1, len(tasks) // (4 * jobs))))
    rows = [row for point_rows in results for row in point_rows]
    return SweepTable(rows=rows, config_fingerprint=config_fingerprint(cfg),
                      config=config_to_dict(cfg))


@dataclass
class ComparisonReport:
    """Fig.-4-style ratio table between models plus summary quantiles."""
    reference: str
    others: list
    rows: list                     # dicts: n_g, f, model, rp_ratio, ck_ratio, excluded
    quantiles: dict                # (model, which) -> (q25, q50, q75)
    band: float
    passed: bool

    def table(self) -> str:
        lines = ["n_g,f,model,grp_ratio,gck_ratio,excluded"]
        for r in self.rows:
            lines.append(f"{r['n_g']!r},{r['f']!r},{r['model']},"
                         f"{r['rp_ratio']!r},{r['ck_ratio']!r},{int(r['excluded'])}")
        return "\n".join(lines)


def compare_models(cfg: SweepConfig, jobs: int | None = None,
                   band: float = 0.2, exclusion_window: float = 0.02,
                   reference: str = "circuit") -> ComparisonReport:
    """Per-point coupling ratios of every requested model against a reference.

    Points within `exclusion_window` of a half-integer n_g are excluded (g_rp
    crosses zero there, so the ratio is 0/0) and do not count against the band.
    """
    if len(cfg.models) < 2:
        raise ConfigInvalid("compare needs at least two models")
    if reference not in cfg.models:
        raise ConfigInvalid(f"reference model {reference!r} not in {cfg.models}")
    table = run_sweep(cfg, jobs=jobs)
    by_bias: dict = {}
    for row in table.rows:
        by_bias.setdefault((row.n_g, row.f), {})[row.model] = row
    # a model set that only repeats the reference degenerates to a self-comparison
    others = [m for m in cfg.models if m != reference] or [reference]
    rows, passed = [], True
    ratios: dict = {(m, w): [] for m in others for w in ("rp", "ck")}
    for (n_g, f), group in sorted(by_bias.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        ref = group[reference]
        excluded = abs(n_g - round(n_g) - 0.5) < exclusion_window \
            or abs(n_g - round(n_g) + 0.5) < exclusion_window
        for m in others:
            other = group[m]
            rp = other.g_rp / ref.g_rp if ref.g_rp else float("nan")
            ck = other.g_ck / ref.g_ck if ref.g_ck else float("nan")
            bad_flags = bool(ref.flags or other.flags)
            rows.append({"n_g": n_g, "f": f, "model": m, "rp_ratio": rp,
                         "ck_ratio": ck, "excluded": excluded or bad_flags})
            if not (excluded or bad_flags):
                ratios[(m, "rp")].append(rp)
                ratios[(m, "ck")].append(ck)
                if not (abs(rp - 1.0) <= band and abs(ck - 1.0) <= band):
                    passed = False
    quantiles = {}
    for key, vals in ratios.items():
        arr = np.asarray(vals, dtype=float)
        quantiles[key] = (tuple(np.quantile(arr, (0.25, 0.5, 0.75)))
                          if arr.size else (float("nan"),) * 3)
    return ComparisonReport(reference=reference, others=others, rows=rows,
                            quantiles=quantiles, band=band, passed=passed)


def run_ratio_ladder(cfg: SweepConfig, jobs: int | None = None) -> dict:
    """Fig-2b/3b mode: rerun the n_g scan at fixed E_J for each E_J/E_C ratio.

    E_J and the c_g10/C_Sigma1 fraction are taken from the config params; E_C is
    re-solved per ratio and the junction capacitances re-split equally.  The scan
    runs at the lower edge of f_range (the protocol uses a single flux).
    """
    if not cfg.ej_ec_ratios:
        raise ConfigInvalid("ej_ec_ratios is empty")
    from .constants import E_CHARGE as _e
    vp = cfg.validated_params()
    frac = vp.c_g10 / vp.c_sigma1
    out = {}
    for ratio in cfg.ej_ec_ratios:
        if not 0.0 < ratio:
            raise ConfigInvalid(f"ratio must be positive, got {ratio!r}")
        e_c_new = vp.e_j / ratio
        c_sigma1_new = _e**2 / (2.0 * e_c_new)
        params = dict(cfg.params)
        for key in ("e_c_ghz", "e_j_ghz", "d", "c_g10", "c_j1", "c_j2",
                    "e_j1", "e_j2", "e_j1_ghz", "e_j2_ghz"):
            params.pop(key, None)
        params.update({
            "c_g10": frac * c_sigma1_new,
            "c_j1": (1.0 - frac) * c_sigma1_new / 2.0,
            "c_j2": (1.0 - frac) * c_sigma1_new / 2.0,
            "e_j1": (1.0 + vp.d_asym) * vp.e_j / 2.0,
            "e_j2": (1.0 - vp.d_asym) * vp.e_j / 2.0,
        })
        sub = SweepConfig(
            params=params, n_g_range=cfg.n_g_range, f_range=cfg.f_range,
            models=cfg.models, output=None, fmt=cfg.fmt,
            charge_channel=cfg.charge_channel,
            n_cavity=cfg.n_cavity, n_mech=cfg.n_mech,
        )
        sub = validate_config(sub)
        vp_sub = sub.validated_params()
        f0 = float(cfg.f_range[0])
        tasks = [(vp_sub, float(n_g), f0, sub.models, sub.charge_channel,
                  sub.n_cavity, sub.n_mech) for n_g in sub.axis("n_g_range")]
        jobs_n = resolve_jobs(jobs)
        if jobs_n == 1 or len(tasks) < 4:
            results = [_worker(t) for t in tasks]
        else:
            with ProcessPoolExecutor(max_workers=jobs_n) as pool:
                results = list(pool.map(_worker, tasks,
                                        chunksize=max(1, len(tasks) // (4 * jobs_n))))
        rows = [row for point_rows in results for row in point_rows]
        out[ratio] = SweepTable(rows=rows, config_fingerprint=config_fingerprint(sub),
                                config=config_to_dict(sub))
    return out


# --- serialization -----------------------------------------------------------

def _fmt(x: float) -> str:
    return repr(float(x))


def table_to_csv(table: SweepTable) -> bytes:
    lines = [CSV_HEADER]
    two_pi = 2.0 * math.pi
    for r in table.rows:
        lines.append(",".join([
            _fmt(r.n_g), _fmt(r.f), r.model,
            _fmt(r.omega_c / two_pi), _fmt(r.g_rp / two_pi), _fmt(r.g_0 / two_pi),
            _fmt(r.g_ck / two_pi), _fmt(r.enhancement), r.flags,
        ]))
    return ("\n".join(lines) + "\n").encode()


def table_to_json(table: SweepTable) -> bytes:
    two_pi = 2.0 * math.pi
    payload = {
        "config_fingerprint": table.config_fingerprint,
        "config": table.config,
        "rows": [{
            "n_g": r.n_g, "f": r.f, "model": r.model,
            "omega_c_hz": r.omega_c / two_pi, "g_rp_hz": r.g_rp / two_pi,
            "g_0_hz": r.g_0 / two_pi, "g_ck_hz": r.g_ck / two_pi,
            "enhancement": r.enhancement, "flags": r.flags,
        } for r in table.rows],
    }
    return (json.dumps(payload, indent=1, sort_keys=True, allow_nan=True)
            + "\n").encode()


def emit(table: SweepTable, path: str, fmt: str = "csv") -> None:
    """Write the table; csv uses the exact pinned header and \\n line endings."""
    if fmt == "csv":
        blob = table_to_csv(table)
    elif fmt == "json":
        blob = table_to_json(table)
    else:
        raise ConfigInvalid(f"format must be csv or json, got {fmt!r}")
    try:
        with open(path, "wb") as fh:
            fh.write(blob)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_config(path: str) -> SweepConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise IoFailure(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"malformed JSON in {path}: {exc}") from exc
    if "config" in data and "rows" in data:
        data = data["config"]     # emitted JSON round-trips through the loader
    return config_from_dict(data)
