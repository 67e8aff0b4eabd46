"""Corpus runner: spectra, bound reports, cross-solver and scaling checks, CSV output."""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Optional

import numpy as np

from .annulus import steklov_spectrum_annulus
from .bem import steklov_spectrum_bem
from .conformal import ConformalMap
from .errors import ConfigParse, NoSecondSolver
from .fourier import steklov_spectrum_fourier
from .geometry import DomainSpec, Spectrum, assemble_domain, circle, domain_from_json, ellipse
from .hps import hps_bound_pair, hps_bound_single

logger = logging.getLogger(__name__)

SOLVERS = ("fourier", "annulus", "bem")
K_COLUMNS = ["domain", "solver", "k", "sigma", "sigmaL", "bound", "slack"]
PQ_COLUMNS = ["domain", "solver", "p", "q", "product", "bound", "slack"]
SUMMARY_COLUMNS = ["domain", "solver", "l", "L", "kmax", "min_rel_slack", "violations", "status"]
VIOLATION_TOL = 1e-8
EQUALITY_TOL = 1e-6


def fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.15g}"


@dataclass(frozen=True)
class CorpusDomain:
    """A domain plus whatever extra structure lets the specialised solvers run."""

    id: str
    spec: DomainSpec
    conformal: Optional[ConformalMap] = None
    epsilon: Optional[float] = None
    scale: float = 1.0

    @property
    def solvers(self) -> list:
        out = []
        if self.conformal is not None:
            out.append("fourier")
        if self.epsilon is not None:
            out.append("annulus")
        if self.spec.genus == 0:
            out.append("bem")
        return out

    def scaled(self, c: float) -> "CorpusDomain":
        conformal = self.conformal.scaled(c) if self.conformal is not None else None
        return replace(self, spec=self.spec.scaled(c), conformal=conformal, scale=self.scale * c)


def conformal_domain(id: str, taylor) -> CorpusDomain:
    phi = ConformalMap.from_taylor(taylor)
    return CorpusDomain(id, assemble_domain(phi.boundary_curve()), conformal=phi)


def annulus_domain(id: str, epsilon: float) -> CorpusDomain:
    spec = assemble_domain(circle(), [circle(0, epsilon, "negative")])
    return CorpusDomain(id, spec, epsilon=float(epsilon))


def _builtins() -> dict:
    return {
        "disk": lambda: conformal_domain("disk", [1.0]),
        "limacon-0.3": lambda: conformal_domain("limacon-0.3", [1.0, 0.3]),
        "oval-0.1": lambda: conformal_domain("oval-0.1", [1.0, 0.0, 0.1]),
        "mixed-0.2-0.05": lambda: conformal_domain("mixed-0.2-0.05", [1.0, 0.2, 0.05]),
        "annulus-0.2": lambda: annulus_domain("annulus-0.2", 0.2),
        "annulus-0.5": lambda: annulus_domain("annulus-0.5", 0.5),
        "annulus-0.8": lambda: annulus_domain("annulus-0.8", 0.8),
        "offset-hole": lambda: CorpusDomain("offset-hole", assemble_domain(
            circle(), [circle(0.3, 0.25, "negative")])),
        "two-holes": lambda: CorpusDomain("two-holes", assemble_domain(
            circle(), [circle(-0.45, 0.2, "negative"), circle(0.45, 0.2, "negative")])),
        "ellipse-two-holes": lambda: CorpusDomain("ellipse-two-holes", assemble_domain(
            ellipse(1.5, 1.0), [circle(-0.6, 0.25, "negative"), circle(0.5 + 0.2j, 0.3, "negative")])),
    }


BUILTIN_NAMES = tuple(_builtins())


def load_domain(source, id: Optional[str] = None) -> CorpusDomain:
    """Accepts ``builtin:NAME``, a bare builtin name, a JSON file path, or a parsed dict."""
    if isinstance(source, str):
        name = source[len("builtin:"):] if source.startswith("builtin:") else source
        table = _builtins()
        if name in table:
            dom = table[name]()
            return replace(dom, id=id or dom.id)
        path = Path(source)
        if not path.exists():
            raise ConfigParse(f"no builtin domain or file named {source!r}")
        return load_domain(json.loads(path.read_text()), id or path.stem)
    obj = dict(source)
    kind = obj.get("type", "curves")
    if kind == "conformal":
        return conformal_domain(id or "conformal", [complex(re, im) for re, im in obj["taylor"]])
    if kind == "annulus":
        return annulus_domain(id or "annulus", float(obj["epsilon"]))
    if "curves" in obj:
        return CorpusDomain(id or "domain", domain_from_json(obj))
    raise ConfigParse(f"unrecognized domain description: {obj!r}")


def solve(domain: CorpusDomain, solver: str = "auto", k_max: int = 8, modes: int = 64,
          nodes: int = 128) -> Spectrum:
    if solver == "auto":
        solver = domain.solvers[0]
    if solver not in domain.solvers:
        raise ValueError(f"solver {solver!r} does not apply to domain {domain.id!r}")
    if solver == "fourier":
        return steklov_spectrum_fourier(domain.conformal, modes, k_max)
    if solver == "annulus":
        s = steklov_spectrum_annulus(domain.epsilon, k_max)
        return replace(s, values=s.values / domain.scale, L=s.L * domain.scale)
    return steklov_spectrum_bem(domain.spec, nodes, k_max)


@dataclass
class BoundReport:
    domain: str
    solver: str
    l: int
    genus: int
    L: float
    k_rows: list = field(default_factory=list)    # (k, sigma, sigmaL, bound, slack)
    pq_rows: list = field(default_factory=list)   # (p, q, product, bound, slack)
    flags: dict = field(default_factory=dict)

    @property
    def violations(self) -> list:
        bad = [f"k={r[0]}" for r in self.k_rows if r[4] < -VIOLATION_TOL]
        bad += [f"p={r[0]},q={r[1]}" for r in self.pq_rows if r[4] < -VIOLATION_TOL]
        return bad

    @property
    def min_rel_slack(self) -> float:
        rel = [r[4] / r[3] for r in self.k_rows] + [r[4] / r[3] for r in self.pq_rows]
        return min(rel) if rel else math.inf

    def k_table(self) -> list:
        return [[self.domain, self.solver, *r] for r in self.k_rows]

    def pq_table(self) -> list:
        return [[self.domain, self.solver, *r] for r in self.pq_rows]


def verify_domain(domain: CorpusDomain, solver: str = "auto", k_max: int = 8, pq_max: int = 6,
                  modes: int = 64, nodes: int = 128, sigma_scale: float = 1.0) -> BoundReport:
    """Compare a computed spectrum against both closed-form bounds.

    ``sigma_scale`` multiplies every eigenvalue before comparison; it exists
    only to inject faults in tests.
    """
    spec = solve(domain, solver, max(k_max, pq_max), modes, nodes)
    if spec.trusted_count < max(k_max, pq_max):
        raise ValueError(f"only {spec.trusted_count} trusted eigenvalues, need {max(k_max, pq_max)}")
    sigma = spec.values * sigma_scale
    g, l, L = domain.spec.genus, domain.spec.l, domain.spec.L
    report = BoundReport(domain.id, spec.solver, l, g, L)
    for k in range(1, k_max + 1):
        bound = hps_bound_single(k, g, l, L) * L
        sl = sigma[k] * L
        report.k_rows.append((k, float(sigma[k]), float(sl), float(bound), float(bound - sl)))
    for p in range(1, pq_max + 1):
        for q in range(p, pq_max + 1):
            bound = hps_bound_pair(p, q, g, l, L) * L * L
            prod = sigma[p] * sigma[q] * L * L
            report.pq_rows.append((p, q, float(prod), float(bound), float(bound - prod)))
    rel = [r[4] / r[3] for r in report.k_rows]
    report.flags["equality_within"] = min(rel) if rel else math.inf
    report.flags["equality_rows"] = [r[0] for r in report.k_rows if r[4] / r[3] < EQUALITY_TOL]
    return report


def cross_solver_check(domain: CorpusDomain, k_max: int = 8, modes: int = 64, nodes: int = 128) -> float:
    """Max over k = 1..k_max of |sigma_k^A - sigma_k^B| / sigma_k across applicable solvers."""
    names = domain.solvers
    if len(names) < 2:
        raise NoSecondSolver(f"only {names} apply to {domain.id!r}")
    spectra = [solve(domain, s, k_max, modes, nodes).values[1:k_max + 1] for s in names]
    ref = spectra[0]
    return float(max((np.abs(s - ref) / ref).max() for s in spectra[1:]))


def scale_invariance(domain: CorpusDomain, factors=(0.5, 2.0), k_max: int = 8, solver: str = "auto",
                     modes: int = 64, nodes: int = 128) -> float:
    """Max relative change of sigma_k L under dilation by each factor."""
    base = solve(domain, solver, k_max, modes, nodes)
    ref = base.values[1:k_max + 1] * domain.spec.L
    worst = 0.0
    for c in factors:
        scaled = domain.scaled(c)
        s = solve(scaled, base.solver, k_max, modes, nodes)
        worst = max(worst, float((np.abs(s.values[1:k_max + 1] * scaled.spec.L - ref) / ref).max()))
    return worst


def write_csv(path: Path, header: list, rows: list) -> None:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(x) if isinstance(x, (float, int, np.floating, np.integer)) else x for x in row])
    path.write_text(buf.getvalue())


def default_corpus_path() -> Path:
    return Path(str(resources.files("steklov") / "data" / "default_corpus.json"))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("STEKLOV_THREADS", "")))
    except ValueError:
        return max(1, os.cpu_count() or 1)


def load_config(path) -> dict:
    try:
        config = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigParse(f"cannot read corpus config {path}: {exc}") from None
    if not isinstance(config, dict) or not isinstance(config.get("domains", []), list):
        raise ConfigParse("corpus config must be an object with a 'domains' list")
    return config


def run_corpus(config_path, out_dir) -> int:
    """Verify every (domain, solver) of a corpus config; 0 iff no bound is violated."""
    config = load_config(config_path)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    entries = config.get("domains", [])
    if not entries:
        logger.warning("corpus %s lists no domains", config_path)
    defaults = {"kmax": config.get("kmax", 8), "pqmax": config.get("pqmax", 6),
                "modes": config.get("modes", 64), "nodes": config.get("nodes", 128)}
    fault = float(config.get("fault_sigma_scale", 1.0))

    jobs = []
    for entry in entries:
        try:
            dom = load_domain(entry["domain"], entry.get("id"))
        except KeyError as exc:
            raise ConfigParse(f"corpus entry missing {exc}") from None
        opts = {**defaults, **{k: entry[k] for k in defaults if k in entry}}
        for solver in entry.get("solvers", dom.solvers):
            jobs.append((dom, solver, opts))

    def work(job):
        dom, solver, opts = job
        return verify_domain(dom, solver, opts["kmax"], opts["pqmax"], opts["modes"], opts["nodes"],
                             sigma_scale=fault)

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        reports = list(pool.map(work, jobs))

    by_domain: dict = {}
    for rep in reports:
        by_domain.setdefault(rep.domain, []).append(rep)
    summary = []
    failed = False
    for name, reps in by_domain.items():
        write_csv(out / f"{name}.csv", K_COLUMNS, [row for r in reps for row in r.k_table()])
        write_csv(out / f"{name}_pairs.csv", PQ_COLUMNS, [row for r in reps for row in r.pq_table()])
        for r in reps:
            bad = r.violations
            for b in bad:
                logger.error("bound violated: domain=%s solver=%s %s", r.domain, r.solver, b)
            failed |= bool(bad)
            summary.append([r.domain, r.solver, r.l, r.L, len(r.k_rows), r.min_rel_slack,
                            ";".join(bad), "FAIL" if bad else "ok"])
    write_csv(out / "summary.csv", SUMMARY_COLUMNS, summary)
    return 1 if failed else 0
