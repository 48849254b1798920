"""Batch sweeps over ``(n, 10**k / n, nu)`` with CSV emission.

Output layout of :func:`emit_reports`::

    records.csv        n,k,F,mu,nu,mu_border,predicted_convergent,max_u1,max_u2star,ratio,degenerate
    border_<nu>.csv    F,mu_border
    profiles_n<n>.csv  n,F,mu,nu,r,phi,amp_u1,amp_u2star
    manifest.json      config, config hash, package version, file list

Floats are written with ``repr`` so every row parses back to the same value
and re-emits byte-identically.
"""
from __future__ import annotations

import configparser
import csv
import hashlib
import json
import logging
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .convergence import (
    EXPONENTS,
    MODES,
    VISCOSITIES,
    SweepRecord,
    amplitude,
    border_mu,
    border_value,
    convergence_predicate,
    dot_set_mu,
)
from .picard import extract_profiles, run_iteration
from .spectral import ForceParams, GridSpec, SolverError, TimeGrid, required_resolution

log = logging.getLogger(__name__)

RECORD_COLUMNS = ["n", "k", "F", "mu", "nu", "mu_border", "predicted_convergent",
                  "max_u1", "max_u2star", "ratio", "degenerate"]
PROFILE_COLUMNS = ["n", "F", "mu", "nu", "r", "phi", "amp_u1", "amp_u2star"]
BORDER_COLUMNS = ["F", "mu_border"]
F_RANGE = (0.2, 1000.0)
PROFILE_RADII = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)


class ConfigError(ValueError):
    pass


class SweepIOError(OSError):
    pass


@dataclass(frozen=True)
class SweepConfig:
    L: float = 8.0
    N: int = 256
    t_final: float = 1.0
    steps: int = 200
    store_every: int = 5
    modes: tuple[int, ...] = MODES
    exponents: tuple[int, ...] = EXPONENTS
    viscosities: tuple[float, ...] = VISCOSITIES
    margin: float = 1.0
    profile_radii: tuple[float, ...] = PROFILE_RADII
    profile_angles: int = 17
    border_samples: int = 50
    # raise N per point to required_resolution(mu, L) when it is larger
    auto_resolve: bool = False
    workers: int = 1
    out_dir: str | None = None

    def validate(self) -> "SweepConfig":
        try:
            grid = GridSpec(self.L, self.N)
            TimeGrid(self.t_final, self.steps)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.N & (self.N - 1):
            raise ConfigError(f"N must be a power of two, got {self.N}")
        if self.store_every < 1:
            raise ConfigError("store_every must be >= 1")
        if any(int(n) != n or n < 1 for n in self.modes):
            raise ConfigError(f"modes must be positive integers, got {self.modes}")
        if any(not nu > 0 for nu in self.viscosities):
            raise ConfigError(f"viscosities must be positive, got {self.viscosities}")
        if self.margin < 1:
            raise ConfigError(f"margin must be >= 1, got {self.margin}")
        if any(not 0 <= r <= grid.L - grid.dx for r in self.profile_radii):
            raise ConfigError(f"profile radii must lie in [0, {grid.L - grid.dx}]")
        if self.profile_angles < 1:
            raise ConfigError("profile_angles must be >= 1")
        if self.border_samples < 2:
            raise ConfigError("border_samples must be >= 2")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        for name in ("modes", "exponents", "viscosities"):
            values = getattr(self, name)
            if len(set(values)) != len(values):
                raise ConfigError(f"{name} contains duplicates: {values}")
        return self

    def physics(self) -> dict:
        """Fields that determine the numerical results (excludes workers and out_dir)."""
        d = asdict(self)
        del d["workers"], d["out_dir"]
        return {k: list(v) if isinstance(v, tuple) else v for k, v in d.items()}

    def digest(self) -> str:
        blob = json.dumps(self.physics(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()


_TUPLE_TYPES = {"modes": int, "exponents": int, "viscosities": float, "profile_radii": float}
_SCALAR_TYPES = {"L": float, "N": int, "t_final": float, "steps": int, "store_every": int,
                 "margin": float, "profile_angles": int, "border_samples": int, "workers": int}


def _parse_value(key: str, raw: str):
    raw = raw.strip()
    if key in _TUPLE_TYPES:
        cast = _TUPLE_TYPES[key]
        return tuple(cast(v) for v in raw.replace(",", " ").split())
    if key in _SCALAR_TYPES:
        return _SCALAR_TYPES[key](raw)
    if key == "auto_resolve":
        if raw.lower() not in ("true", "false", "yes", "no", "1", "0"):
            raise ValueError(f"not a boolean: {raw!r}")
        return raw.lower() in ("true", "yes", "1")
    if key == "out_dir":
        return raw or None
    raise KeyError(key)


def parse_config(text: str) -> SweepConfig:
    """Read a ``[sweep]`` section of ``key = value`` lines; lists are comma separated."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    extra = [s for s in parser.sections() if s != "sweep"]
    if extra:
        raise ConfigError(f"unknown sections: {extra}")
    values = {}
    if parser.has_section("sweep"):
        for key, raw in parser.items("sweep"):
            try:
                values[key] = _parse_value(key, raw)
            except KeyError:
                raise ConfigError(f"unknown config key: {key!r}") from None
            except ValueError as exc:
                raise ConfigError(f"bad value for {key!r}: {exc}") from None
    return SweepConfig(**values).validate()


def load_config(path: str | os.PathLike) -> SweepConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def format_config(cfg: SweepConfig) -> str:
    lines = ["[sweep]"]
    for f in fields(cfg):
        v = getattr(cfg, f.name)
        if v is None:
            continue
        if isinstance(v, tuple):
            v = ", ".join(repr(x) for x in v)
        elif isinstance(v, bool):
            v = str(v).lower()
        lines.append(f"{f.name} = {v}")
    return "\n".join(lines) + "\n"


@dataclass
class PointResult:
    record: SweepRecord
    profiles: list[tuple] = field(default_factory=list)
    max_rel_divergence: float = float("nan")


@dataclass
class SweepReport:
    config: SweepConfig
    records: list[SweepRecord]
    profiles: dict[int, list[tuple]]
    borders: dict[float, np.ndarray]
    max_rel_divergence: list[float]
    # wall-clock provenance; not written to the emitted files
    created_at: str = ""

    @property
    def failed(self) -> list[SweepRecord]:
        return [r for r in self.records if r.degenerate]


def evaluate_point(n: int, k: int | None, F: float, mu: float, nu: float, cfg: SweepConfig) -> PointResult:
    """Run one parameter point; solver failures come back as a degenerate record."""
    N = max(cfg.N, required_resolution(mu, cfg.L)) if cfg.auto_resolve else cfg.N
    grid = GridSpec(cfg.L, N)
    tg = TimeGrid(cfg.t_final, cfg.steps)
    try:
        with np.errstate(over="raise", invalid="raise"):
            res = run_iteration(ForceParams(n, F, mu, nu), grid, tg, cfg.store_every, keep_fields=False)
    except (SolverError, FloatingPointError) as exc:
        log.warning("point n=%s F=%r mu=%r nu=%r failed: %s", n, F, mu, nu, exc)
        return PointResult(SweepRecord.failed(n, k, F, mu, nu))
    record = SweepRecord(
        n=n, k=k, F=F, mu=mu, nu=nu,
        mu_border=border_mu(F, nu),
        predicted_convergent=convergence_predicate(F, mu, nu),
        max_u1=res.max_u1,
        max_u2star=res.max_u2star,
        ratio=res.ratio,
        degenerate=res.degenerate,
    )
    angles = np.linspace(0.0, np.pi, cfg.profile_angles)
    profiles = [(n, F, mu, nu, s.r, s.phi, s.amp1, s.amp2)
                for s in extract_profiles(res, cfg.profile_radii, angles)]
    div = max(res.u1_history.max_rel_divergence, res.u2star_history.max_rel_divergence)
    return PointResult(record, profiles, div)


def _evaluate_job(job):
    return evaluate_point(*job)


def sweep_points(cfg: SweepConfig) -> list[tuple[int, int, float, float, float]]:
    """``(n, k, F, mu, nu)`` ordered by mode, then exponent, then viscosity."""
    pts = []
    for n in cfg.modes:
        for k in cfg.exponents:
            F = amplitude(n, k)
            mu = dot_set_mu(F, cfg.margin)
            pts.extend((n, k, F, mu, nu) for nu in cfg.viscosities)
    return pts


def ensure_writable(path: str | os.PathLike) -> Path:
    path = Path(path)
    try:
        path.mkdir(parents=True, exist_ok=True)
        with tempfile.TemporaryFile(dir=path):
            pass
    except OSError as exc:
        raise SweepIOError(f"output directory {path} is not writable: {exc}") from None
    return path


def emit_border_curves(viscosities, F_range=F_RANGE, samples: int = 50) -> dict[float, np.ndarray]:
    """Log-spaced ``(F, mu_border)`` tables, one per viscosity."""
    lo, hi = F_range
    if not 0 < lo < hi:
        raise ValueError(f"invalid F range {F_range}")
    if samples < 2:
        raise ValueError(f"need at least 2 samples, got {samples}")
    Fs = np.logspace(np.log10(lo), np.log10(hi), samples)
    # pin the endpoints exactly; logspace round-trips through log10
    Fs[0], Fs[-1] = lo, hi
    return {nu: np.column_stack([Fs, [border_mu(F, nu) for F in Fs]]) for nu in viscosities}


def run_sweep(cfg: SweepConfig) -> SweepReport:
    cfg.validate()
    if cfg.out_dir is not None:
        ensure_writable(cfg.out_dir)
    points = sweep_points(cfg)
    jobs = [(*pt, cfg) for pt in points]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(_evaluate_job, jobs))
    else:
        results = [_evaluate_job(job) for job in jobs]
    profiles: dict[int, list[tuple]] = {}
    for r in results:
        profiles.setdefault(r.record.n, []).extend(r.profiles)
    return SweepReport(
        config=cfg,
        records=[r.record for r in results],
        profiles=profiles,
        borders=emit_border_curves(cfg.viscosities, F_RANGE, cfg.border_samples),
        max_rel_divergence=[r.max_rel_divergence for r in results],
        created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
    )


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def record_row(rec: SweepRecord) -> list[str]:
    return [_fmt(getattr(rec, c)) for c in RECORD_COLUMNS]


def _parse_bool(s: str) -> bool:
    if s not in ("true", "false"):
        raise ValueError(f"not a boolean: {s!r}")
    return s == "true"


def parse_record_row(row: list[str]) -> SweepRecord:
    if len(row) != len(RECORD_COLUMNS):
        raise ValueError(f"expected {len(RECORD_COLUMNS)} columns, got {len(row)}")
    d = dict(zip(RECORD_COLUMNS, row))
    return SweepRecord(
        n=int(d["n"]),
        k=int(d["k"]) if d["k"] else None,
        F=float(d["F"]),
        mu=float(d["mu"]),
        nu=float(d["nu"]),
        mu_border=float(d["mu_border"]),
        predicted_convergent=_parse_bool(d["predicted_convergent"]),
        max_u1=float(d["max_u1"]),
        max_u2star=float(d["max_u2star"]),
        ratio=float(d["ratio"]) if d["ratio"] else None,
        degenerate=_parse_bool(d["degenerate"]),
    )


def _write_csv(path: Path, header: list[str], rows) -> None:
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise SweepIOError(f"failed writing {path}: {exc}") from None


def read_csv(path: str | os.PathLike) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


def read_records(path: str | os.PathLike) -> list[SweepRecord]:
    header, rows = read_csv(path)
    if header != RECORD_COLUMNS:
        raise ValueError(f"unexpected records header {header}")
    return [parse_record_row(r) for r in rows]


def border_filename(nu: float) -> str:
    return f"border_{nu!r}.csv"


def emit_reports(report: SweepReport, out_dir: str | os.PathLike) -> list[Path]:
    """Write the CSV tables and manifest; returns the written paths in order."""
    out = ensure_writable(out_dir)
    written = []

    path = out / "records.csv"
    _write_csv(path, RECORD_COLUMNS, (record_row(r) for r in report.records))
    written.append(path)

    for nu, table in report.borders.items():
        path = out / border_filename(nu)
        _write_csv(path, BORDER_COLUMNS, ([_fmt(F), _fmt(mu)] for F, mu in table))
        written.append(path)

    for n in sorted(report.profiles):
        path = out / f"profiles_n{n}.csv"
        _write_csv(path, PROFILE_COLUMNS, ([_fmt(v) for v in row] for row in report.profiles[n]))
        written.append(path)

    manifest = {
        "version": __version__,
        "config": report.config.physics(),
        "config_hash": report.config.digest(),
        "records": len(report.records),
        "failed": len(report.failed),
        "files": [p.name for p in written],
    }
    path = out / "manifest.json"
    try:
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    except OSError as exc:
        raise SweepIOError(f"failed writing {path}: {exc}") from None
    written.append(path)
    return written


def point_record(n: int, F: float, mu: float, nu: float, cfg: SweepConfig | None = None) -> SweepRecord:
    """Single-point diagnostic; ``k`` is filled in when ``n F`` is a power of ten."""
    cfg = cfg or SweepConfig()
    kf = math.log10(n * F)
    k = round(kf) if abs(kf - round(kf)) < 1e-12 else None
    return evaluate_point(n, k, F, mu, nu, replace(cfg, profile_radii=())).record
