"""Experiment manifests: a process, a normalizer, a replica count and a list
of checks, run into a versioned JSON report."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import asymptotics as asy
from .paths import DomainError
from .simulate import ProcessSpec

SCHEMA_VERSION = 1
CHECK_IDS = ("range_slope", "sup_slope", "inverse_slope", "renewal", "pnorm",
             "duality", "involution")
BUNDLED = ("drift_eta1", "bm_zero", "renewal_exp1")


@dataclass(frozen=True)
class ExperimentManifest:
    name: str
    spec: ProcessSpec
    psi: str = "t"
    replicas: int = 1
    checks: tuple[str, ...] = ("range_slope",)
    output_format: str = "json"
    output: str | None = None
    tail_fraction: float = asy.TAIL_FRACTION
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.replicas < 1:
            raise DomainError("replicas must be at least 1")
        unknown = [c for c in self.checks if c not in CHECK_IDS]
        if unknown:
            raise DomainError(f"unknown check id(s): {', '.join(unknown)}")
        if self.output_format not in ("json", "csv"):
            raise DomainError("output format must be json or csv")

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentManifest:
        d = dict(d)
        try:
            spec = d.pop("spec")
        except KeyError:
            raise DomainError("manifest has no spec") from None
        if "seed" not in spec:
            raise DomainError("manifest spec must carry a seed")
        out = d.pop("output", None) or {}
        known = {"name", "psi", "replicas", "checks", "tail_fraction", "tolerances"}
        extra = set(d) - known
        if extra:
            raise DomainError(f"unexpected manifest keys {sorted(extra)}")
        if "name" not in d:
            raise DomainError("manifest has no name")
        return cls(spec=ProcessSpec.from_dict(spec),
                   checks=tuple(d.pop("checks", ("range_slope",))),
                   output_format=out.get("format", "json"), output=out.get("path"), **d)

    @classmethod
    def load(cls, path: str | Path) -> ExperimentManifest:
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise DomainError(f"manifest is not valid JSON: {exc}") from None
        return cls.from_dict(data)

    @classmethod
    def bundled(cls, name: str) -> ExperimentManifest:
        if name not in BUNDLED:
            raise DomainError(f"no bundled manifest {name!r}")
        text = resources.files("rangeproc").joinpath("manifests", f"{name}.json").read_text()
        return cls.from_dict(json.loads(text))


def _tol(m: ExperimentManifest, check: str, default):
    return m.tolerances.get(check, default)


def run_check(m: ExperimentManifest, check: str, jobs: int = 1) -> asy.CheckReport:
    spec, n = m.spec, m.replicas
    if check == "range_slope":
        return asy.range_slope_experiment(spec, n, m.psi, tolerance=_tol(m, check, None),
                                          tail_fraction=m.tail_fraction, jobs=jobs)
    if check == "sup_slope":
        return asy.sup_slope_experiment(spec, n, m.psi, tolerance=_tol(m, check, None),
                                        tail_fraction=m.tail_fraction, jobs=jobs)
    if check == "inverse_slope":
        return asy.inverse_slope_experiment(spec, n, tolerance=_tol(m, check, 0.05), jobs=jobs)
    if check == "renewal":
        return asy.renewal_experiment(spec, n, _tol(m, check, 0.02), m.tail_fraction, jobs)
    if check == "pnorm":
        return asy.pnorm_negligibility_check(spec, _tol(m, check, 0.1), n,
                                             m.tail_fraction, jobs)
    if check == "duality":
        return asy.duality_experiment(spec, n, jobs=jobs)
    return asy.involution_experiment(spec, n, jobs=jobs)


def run_manifest(m: ExperimentManifest, jobs: int = 1, timestamp: bool = True,
                 halving: bool = True) -> dict:
    """Run every check of ``m``; returns the JSON-ready report."""
    reports = [run_check(m, c, jobs).to_dict() for c in m.checks]
    delta = None
    if halving and m.spec.kind != "renewal" and any(
            c in ("range_slope", "pnorm", "sup_slope") for c in m.checks):
        delta = asy.step_halving_delta(m.spec, m.psi, m.tail_fraction)
    report = {
        "schema_version": SCHEMA_VERSION,
        "name": m.name,
        "spec": m.spec.to_dict(),
        "process": m.spec.token,
        "psi": m.psi,
        "replicas": m.replicas,
        "seed": int(m.spec.seed),
        "step": m.spec.step,
        "horizon": m.spec.horizon,
        "tail_fraction": m.tail_fraction,
        "step_halving_delta": None if delta is None else asy._num(delta),
        "checks": reports,
        "passed": all(r["passed"] for r in reports),
    }
    if timestamp:
        report["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return report


def dumps(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"


def report_rows(report: dict):
    """Flat ``check, quantity, value`` rows for CSV output."""
    for chk in report["checks"]:
        yield chk["check"], "passed", int(chk["passed"])
        for key, val in _flatten(chk["estimates"]):
            yield chk["check"], key, val


def _flatten(d: dict, prefix: str = ""):
    for k, v in d.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            yield from _flatten(v, key + ".")
        elif isinstance(v, (int, float)) and not isinstance(v, bool):
            yield key, v
        elif isinstance(v, str) and v in ("inf", "-inf", "nan"):
            yield key, float(v)


def write_report_csv(report: dict, fh) -> None:
    fh.write("check,quantity,value\n")
    for check, key, val in report_rows(report):
        fh.write(f"{check},{key},{format(float(val), '.17g') if not math.isnan(val) else 'nan'}\n")
