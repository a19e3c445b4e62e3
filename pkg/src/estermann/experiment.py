"""Batch experiment configuration, runner and CSV/JSON report emission."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

from estermann.dissect import ProblemInstance, dissection_params, sample_arcs, theta
from estermann.errors import DomainError, EstermannError
from estermann.repcount import CountReport, exact_count, h_threshold
from estermann.sseries import DEFAULT_CUTOFF, VARIANTS

CSV_COLUMNS = ["N", "n", "mu1", "mu2", "mu3", "H", "exact", "sseries", "main_term", "ratio", "m_count", "elapsed_ms"]
H_POLICIES = ("exponent", "absolute", "threshold")


class ConfigError(EstermannError, ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    Ns: list = field(default_factory=list)
    n: int = 3
    mu: tuple = (1 / 3, 1 / 3, 1 / 3)
    h_policy: str = "exponent"
    h_value: float | None = None
    prime_cutoff: int = DEFAULT_CUTOFF
    variant: str = "rho_minus_one"
    arc_samples: int = 0
    arc_eta: float | None = None
    seed: int = 0
    workers: int = 1
    record_timing: bool = False
    csv_path: str | None = None
    json_path: str | None = None

    def H_for(self, N: int) -> float:
        if self.h_policy == "exponent":
            e = 1 - theta(self.n) if self.h_value is None else self.h_value
            return float(N) ** e
        if self.h_policy == "absolute":
            return float(self.h_value)
        return h_threshold(N, self.n)

    def instances(self) -> list[ProblemInstance]:
        return [ProblemInstance(int(N), self.n, *self.mu, self.H_for(int(N))) for N in self.Ns]

    def validate(self) -> "ExperimentConfig":
        if self.h_policy not in H_POLICIES:
            raise ConfigError(f"h_policy must be one of {H_POLICIES}, got {self.h_policy!r}")
        if self.h_policy == "absolute" and self.h_value is None:
            raise ConfigError("h_policy 'absolute' needs h_value")
        if self.variant not in VARIANTS:
            raise ConfigError(f"variant must be one of {VARIANTS}")
        if len(self.mu) != 3:
            raise ConfigError("mu needs three entries")
        if self.workers < 1 or self.prime_cutoff < 2 or self.arc_samples < 0:
            raise ConfigError("workers >= 1, prime_cutoff >= 2, arc_samples >= 0 required")
        try:
            self.instances()
        except DomainError as exc:
            raise ConfigError(f"configuration yields an invalid instance: {exc}") from exc
        return self

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")
        data = dict(data)
        if "mu" in data:
            data["mu"] = tuple(float(m) for m in data["mu"])
        if "Ns" in data:
            data["Ns"] = [int(float(N)) if isinstance(N, (int, float, str)) else N for N in data["Ns"]]
        return cls(**data).validate()

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a flat JSON object")
        return cls.from_mapping(data)


def _one(inst: ProblemInstance, cfg: ExperimentConfig) -> tuple[CountReport, object]:
    try:
        rep = exact_count(inst, variant=cfg.variant, prime_cutoff=cfg.prime_cutoff)
    except EstermannError as exc:
        rep = CountReport(inst, None, float("nan"), float("nan"), None, 0, variant=cfg.variant,
                          error=type(exc).__name__)
    arcs = None
    if cfg.arc_samples:
        arcs = sample_arcs(dissection_params(inst), cfg.arc_samples, cfg.seed, cfg.arc_eta)
    return rep, arcs


def run_experiment(cfg: ExperimentConfig, return_arcs: bool = False):
    """Count, predict and compare for every N; per-instance errors become markers."""
    cfg.validate()
    insts = cfg.instances()
    if cfg.workers > 1 and len(insts) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(lambda i: _one(i, cfg), insts))
    else:
        results = [_one(i, cfg) for i in insts]
    reports = [r for r, _ in results]
    if not cfg.record_timing:
        for r in reports:
            r.elapsed = None
    if return_arcs:
        return reports, [a for _, a in results]
    return reports


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, int):
        return str(x)
    return format(x, ".12g")


def _round12(x):
    if x is None or isinstance(x, int):
        return x
    return float(format(x, ".12g"))


def report_row(r: CountReport) -> dict:
    i = r.instance
    ok = r.error is None
    return {
        "N": i.N,
        "n": i.n,
        "mu1": _round12(i.mu1),
        "mu2": _round12(i.mu2),
        "mu3": _round12(i.mu3),
        "H": _round12(float(i.H)),
        "exact": r.exact if ok else None,
        "sseries": _round12(r.sseries_value) if ok else None,
        "main_term": _round12(r.main_term) if ok else None,
        "ratio": _round12(r.ratio) if ok else None,
        "m_count": r.m_values_used if ok else None,
        "elapsed_ms": _round12(r.elapsed * 1e3) if r.elapsed is not None else None,
    }


def emit_report(reports, fmt: str = "csv", arcs=None) -> str:
    """Serialise reports; CSV has the fixed column set, JSON mirrors it plus markers."""
    if fmt == "csv":
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(CSV_COLUMNS)
        for r in reports:
            row = report_row(r)
            cells = [_fmt(row[c]) for c in CSV_COLUMNS]
            if r.error is not None:
                cells[CSV_COLUMNS.index("exact")] = f"error:{r.error}"
            out.writerow(cells)
        return buf.getvalue()
    if fmt == "json":
        docs = []
        for k, r in enumerate(reports):
            d = report_row(r)
            d["variant"] = r.variant
            d["error"] = r.error
            if arcs is not None and arcs[k] is not None:
                a = arcs[k]
                d["arcs"] = {
                    "eta": a.eta_used,
                    "counts": a.counts,
                    "max_ratio": {c: _round12(v) for c, v in a.max_ratio.items()},
                }
            docs.append(d)
        return json.dumps(docs, indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def write_report(reports, path, fmt: str, arcs=None) -> None:
    """Write to ``path``; OSError propagates for unwritable destinations."""
    Path(path).write_text(emit_report(reports, fmt, arcs))
