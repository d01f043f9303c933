"""Monte Carlo harness: probability estimates, exponent sweeps, copy-count
distributions, and unextendable-copy counts, with seeded reproducibility.

Every trial is a pure function of (config, trial index), so runs can be
sharded across processes and re-aggregated deterministically.  Estimates
carry Wilson 95% intervals; count distributions are compared against
their limiting Poisson laws by total-variation distance.
"""
from __future__ import annotations

import csv
import hashlib
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .bounds import unextendable_poisson_rate
from .errors import BudgetExceeded, HypothesisViolated
from .extensions import RootedPair, strict_extensions
from .hypergraph import (Hypergraph, automorphism_count, contains_copy,
                         count_copies, density, is_strictly_balanced)
from .logic import Formula, evaluate, parse
from .sampling import ModelParams, p_from_alpha, sample, sample_coupled

_WILSON_Z = 1.959963984540054  # two-sided 95%

BUILTIN_PROPERTIES = ("contains-edge",)


def wilson_interval(successes: int, trials: int) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion at 95%."""
    if trials <= 0:
        return (0.0, 1.0)
    z2 = _WILSON_Z ** 2
    phat = successes / trials
    denom = 1 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = _WILSON_Z * math.sqrt(
        phat * (1 - phat) / trials + z2 / (4 * trials ** 2)) / denom
    # the boundary endpoints are analytically exact; keep them float-noise free
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return (lo, hi)


def poisson_pmf(lam: float, j: int) -> float:
    out = math.exp(-lam)
    for i in range(1, j + 1):
        out *= lam / i
    return out


def tv_distance_to_poisson(histogram: dict[int, int], lam: float) -> float:
    """Exact TV distance between the empirical law and Pois(lam).

    Sums |empirical - poisson| over the observed support and adds the
    Poisson mass beyond it, halving the total.
    """
    trials = sum(histogram.values())
    if trials == 0:
        raise ValueError("histogram is empty")
    top = max(histogram)
    total = 0.0
    tail = 1.0
    for j in range(top + 1):
        pj = poisson_pmf(lam, j)
        tail -= pj
        total += abs(histogram.get(j, 0) / trials - pj)
    return 0.5 * (total + max(tail, 0.0))


@dataclass(frozen=True)
class PropertySpec:
    """What to test on each sample: a pattern, a sentence, or a builtin."""

    kind: str
    pattern: Optional[Hypergraph] = None
    formula_text: Optional[str] = None
    builtin: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("pattern", "formula", "builtin"):
            raise ValueError(f"unknown property kind {self.kind!r}")
        if self.kind == "pattern" and self.pattern is None:
            raise ValueError("pattern property needs a hypergraph")
        if self.kind == "formula" and not self.formula_text:
            raise ValueError("formula property needs source text")
        if self.kind == "builtin" and self.builtin not in BUILTIN_PROPERTIES:
            raise ValueError(f"builtin must be one of {BUILTIN_PROPERTIES}")

    def resolve(self, s: int):
        """(checker, monotone flag); parse/validation errors surface here."""
        if self.kind == "pattern":
            if self.pattern.s != s:
                raise ValueError("pattern uniformity differs from the model")
            pat = self.pattern
            return (lambda g: contains_copy(g, pat)), True
        if self.kind == "builtin":
            return (lambda g: g.e > 0), True
        sentence = parse(self.formula_text, s)
        return (lambda g: evaluate(g, sentence)), False

    def describe(self) -> dict:
        if self.kind == "pattern":
            return {"kind": "pattern", "pattern": self.pattern.to_json_dict()}
        if self.kind == "builtin":
            return {"kind": "builtin", "builtin": self.builtin}
        return {"kind": "formula", "formula": self.formula_text}


@dataclass(frozen=True)
class ExperimentConfig:
    s: int
    n_list: tuple[int, ...]
    prop: PropertySpec
    trials: int
    seed: int = 0
    alpha: Optional[Fraction] = None
    p: Optional[float] = None
    out_path: Optional[str] = None
    jobs: int = 1

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(self.n_list))
        if not self.n_list:
            raise ValueError("n_list must be nonempty")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if (self.alpha is None) == (self.p is None):
            raise ValueError("give exactly one of alpha and p")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        self.prop.resolve(self.s)

    def digest(self) -> str:
        doc = {
            "s": self.s, "n_list": list(self.n_list),
            "alpha": None if self.alpha is None else str(Fraction(self.alpha)),
            "p": self.p, "trials": self.trials, "seed": self.seed,
            "property": self.prop.describe(),
        }
        blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


@dataclass(frozen=True)
class TrialRecord:
    n: int
    p: float
    trial_index: int
    outcome: Union[bool, int]
    elapsed: float = field(compare=False, default=0.0)
    budget_exceeded: bool = False
    alpha: Optional[Fraction] = None


@dataclass(frozen=True)
class EstimateReport:
    n: int
    alpha: Optional[Fraction]
    p: float
    trials: int
    successes: int
    estimate: float
    ci_lo: float
    ci_hi: float
    budget_exceeded: int
    digest: str


def _cell_p(n: int, alpha, p) -> float:
    return p_from_alpha(n, alpha) if p is None else p


def _run_cell_chunk(cfg: ExperimentConfig, n: int, indices) -> list[TrialRecord]:
    checker, _ = cfg.prop.resolve(cfg.s)
    p = _cell_p(n, cfg.alpha, cfg.p)
    records = []
    for t in indices:
        start = time.perf_counter()
        try:
            g = sample(ModelParams(cfg.s, n, p=p, seed=cfg.seed, trial_index=t))
            outcome = bool(checker(g))
            exceeded = False
        except BudgetExceeded:
            outcome = False
            exceeded = True
        records.append(TrialRecord(n, p, t, outcome,
                                   time.perf_counter() - start,
                                   exceeded, cfg.alpha))
    return records


def _chunks(total: int, parts: int):
    size = max(1, -(-total // parts))
    return [range(lo, min(lo + size, total)) for lo in range(0, total, size)]


def _collect_cell(cfg: ExperimentConfig, n: int) -> list[TrialRecord]:
    if cfg.jobs == 1:
        return _run_cell_chunk(cfg, n, range(cfg.trials))
    with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
        parts = pool.map(_run_cell_chunk, *zip(*[
            (cfg, n, chunk) for chunk in _chunks(cfg.trials, cfg.jobs)]))
        records = [r for part in parts for r in part]
    records.sort(key=lambda r: r.trial_index)
    return records


def _report_from_records(cfg: ExperimentConfig, n: int,
                         records: list[TrialRecord],
                         alpha=None) -> EstimateReport:
    alpha = cfg.alpha if alpha is None else alpha
    exceeded = sum(1 for r in records if r.budget_exceeded)
    done = [r for r in records if not r.budget_exceeded]
    successes = sum(1 for r in done if r.outcome)
    estimate = successes / len(done) if done else 0.0
    lo, hi = wilson_interval(successes, len(done))
    return EstimateReport(n, alpha, records[0].p if records else 0.0,
                          len(done), successes, estimate, lo, hi,
                          exceeded, cfg.digest())


def estimate_probability(cfg: ExperimentConfig) -> EstimateReport:
    """Empirical probability that one (n, p) cell has the property."""
    if len(cfg.n_list) != 1:
        raise ValueError("estimate_probability wants exactly one n; use sweep_alpha")
    n = cfg.n_list[0]
    records = _collect_cell(cfg, n)
    if cfg.out_path:
        save_jsonl(cfg.out_path, cfg, records, append=True)
    return _report_from_records(cfg, n, records)


def sweep_alpha(cfg: ExperimentConfig, alphas=None,
                coupled: bool = True) -> list[EstimateReport]:
    """One estimate per (n, alpha) grid cell, coupling trials across alpha.

    With coupling on, all cells of a trial share one uniform stream, so
    containment indicators are non-increasing in alpha within a trial.
    """
    if alphas is None:
        if cfg.alpha is None:
            raise ValueError("sweep needs an alpha grid or an alpha in the config")
        alphas = [cfg.alpha]
    alphas = [Fraction(a) for a in alphas]
    for a in alphas:
        if a <= 0:
            raise ValueError(f"grid exponent {a} must be positive")
    checker, monotone = cfg.prop.resolve(cfg.s)
    if not coupled or not monotone or len(alphas) == 1:
        reports = []
        for n in cfg.n_list:
            for a in alphas:
                sub = ExperimentConfig(cfg.s, (n,), cfg.prop, cfg.trials,
                                       cfg.seed, alpha=a, jobs=cfg.jobs)
                reports.append(estimate_probability(sub))
    else:
        reports = _sweep_coupled(cfg, alphas, checker)
    if cfg.out_path:
        save_csv(cfg.out_path, cfg.digest(), reports)
    return reports


def _sweep_coupled(cfg: ExperimentConfig, alphas, checker) -> list[EstimateReport]:
    digest = cfg.digest()
    reports = []
    for n in cfg.n_list:
        ps = [p_from_alpha(n, a) for a in alphas]
        successes = [0] * len(alphas)
        done = [0] * len(alphas)
        exceeded = [0] * len(alphas)
        for t in range(cfg.trials):
            try:
                gs = sample_coupled(
                    ModelParams(cfg.s, n, p=max(ps), seed=cfg.seed,
                                trial_index=t), ps)
            except BudgetExceeded:
                for i in range(len(alphas)):
                    exceeded[i] += 1
                continue
            for i, g in enumerate(gs):
                try:
                    successes[i] += bool(checker(g))
                    done[i] += 1
                except BudgetExceeded:
                    exceeded[i] += 1
        for i, a in enumerate(alphas):
            lo, hi = wilson_interval(successes[i], done[i])
            reports.append(EstimateReport(
                n, a, ps[i], done[i], successes[i],
                successes[i] / done[i] if done[i] else 0.0, lo, hi,
                exceeded[i], digest))
    return reports


# ---------------------------------------------------------------------------
# Copy-count distributions against their Poisson limits.

@dataclass(frozen=True)
class CopyCountReport:
    n: int
    p: float
    trials: int
    histograms: tuple[dict, ...]
    means: tuple[float, ...]
    rates: tuple[float, ...]
    tv_distances: tuple[float, ...]
    correlations: tuple[tuple[int, int, float], ...]


def _pearson(xs: list[int], ys: list[int]) -> float:
    m = len(xs)
    mx = sum(xs) / m
    my = sum(ys) / m
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    vx = sum((x - mx) ** 2 for x in xs)
    vy = sum((y - my) ** 2 for y in ys)
    if vx == 0 or vy == 0:
        return float("nan")
    return cov / math.sqrt(vx * vy)


def copy_count_distribution(patterns, n: int, trials: int, seed: int,
                            p: Optional[float] = None,
                            cap: Optional[int] = None) -> CopyCountReport:
    """Per-trial copy counts of one or more strictly balanced patterns.

    Defaults p to the pattern's own threshold n^{-v/e}.  Reports the
    empirical histogram, mean, limiting Poisson rate 1/aut, and the TV
    distance to that Poisson law; with several patterns (which must share
    one density) also the pairwise count correlations.
    """
    if isinstance(patterns, Hypergraph):
        patterns = [patterns]
    patterns = list(patterns)
    if not patterns:
        raise ValueError("need at least one pattern")
    for g in patterns:
        if g.s != patterns[0].s:
            raise ValueError("patterns must share one uniformity")
        if not is_strictly_balanced(g):
            raise HypothesisViolated("pattern is not strictly balanced")
    rho = density(patterns[0])
    for g in patterns[1:]:
        if density(g) != rho:
            raise HypothesisViolated(
                f"patterns must share one density: {density(g)} != {rho}")
    if p is None:
        p = p_from_alpha(n, 1 / rho)
    counts = [[] for _ in patterns]
    for t in range(trials):
        host = sample(ModelParams(patterns[0].s, n, p=p, seed=seed, trial_index=t))
        for i, g in enumerate(patterns):
            counts[i].append(count_copies(host, g, cap=cap))
    histograms = []
    means = []
    rates = []
    tvs = []
    for i, g in enumerate(patterns):
        hist = {}
        for c in counts[i]:
            hist[c] = hist.get(c, 0) + 1
        lam = 1.0 / automorphism_count(g, cap=cap)
        histograms.append(hist)
        means.append(sum(counts[i]) / trials)
        rates.append(lam)
        tvs.append(tv_distance_to_poisson(hist, lam))
    correlations = tuple(
        (i, j, _pearson(counts[i], counts[j]))
        for i in range(len(patterns)) for j in range(i + 1, len(patterns)))
    return CopyCountReport(n, p, trials, tuple(histograms), tuple(means),
                           tuple(rates), tuple(tvs), correlations)


# ---------------------------------------------------------------------------
# Copies of the root structure that no full copy extends.

def _embeddings(host: Hypergraph, pattern: Hypergraph):
    """Yield every injective edge-preserving map as an image tuple.

    Pattern edges drive the search: the first edge of a component ranges
    over host edges, later ones only over edges incident to an already
    placed vertex, so sparse hosts cost about e(host) per component
    instead of n per vertex.
    """
    edges_left = list(pattern.edges)
    ordered: list[tuple] = []
    covered: set[int] = set()
    while edges_left:
        pick = next((e for e in edges_left if covered & set(e)), edges_left[0])
        edges_left.remove(pick)
        ordered.append(pick)
        covered |= set(pick)
    free = [v for v in range(pattern.n) if v not in covered]
    image: dict[int, int] = {}
    used: set[int] = set()

    def landed_ok(x: int, w: int) -> bool:
        for e in pattern.incident[x]:
            if all(y == x or y in image for y in e):
                landed = tuple(sorted(w if y == x else image[y] for y in e))
                if landed not in host.edge_set:
                    return False
        return True

    def place(idx: int):
        if idx == len(ordered):
            yield from place_free(0)
            return
        pe = ordered[idx]
        mapped = [x for x in pe if x in image]
        unmapped = [x for x in pe if x not in image]
        if mapped:
            candidates = [f for f in host.incident[image[mapped[0]]]
                          if all(image[x] in f for x in mapped)]
        else:
            candidates = host.edges
        taken = {image[x] for x in mapped}
        for f in candidates:
            slots = [w for w in f if w not in taken]
            if len(slots) == len(unmapped):
                yield from assign(unmapped, slots, idx)

    def assign(unmapped: list[int], slots: list[int], idx: int):
        if not unmapped:
            yield from place(idx + 1)
            return
        x, rest = unmapped[0], unmapped[1:]
        for w in slots:
            if w in used or not landed_ok(x, w):
                continue
            image[x] = w
            used.add(w)
            yield from assign(rest, [u for u in slots if u != w], idx)
            used.discard(w)
            del image[x]

    def place_free(i: int):
        if i == len(free):
            yield tuple(image[v] for v in range(pattern.n))
            return
        v = free[i]
        for y in range(host.n):
            if y in used:
                continue
            image[v] = y
            used.add(y)
            yield from place_free(i + 1)
            used.discard(y)
            del image[v]

    yield from place(0)


def count_unextendable_copies(host: Hypergraph, pair: RootedPair,
                              cap: Optional[int] = None) -> int:
    """Copies of the pair's root structure inside no strict extension.

    A copy counts as extendable when at least one of its embeddings
    admits a strict extension of the pair over the embedded root tuple.
    """
    h = Hypergraph(pair.g.s, pair.roots, pair.h_edges)
    status: dict = {}
    for phi in _embeddings(host, h):
        key = (frozenset(phi),
               frozenset(tuple(sorted(phi[v] for v in e)) for e in h.edges))
        if status.get(key):
            continue
        ext = strict_extensions(host, phi[:pair.roots], pair, cap=cap)
        status[key] = bool(ext)
    return sum(1 for ok in status.values() if not ok)


@dataclass(frozen=True)
class UnextendableReport:
    n: int
    p: float
    trials: int
    histogram: dict
    mean: float
    rate: float
    tv_distance: float


def unextendable_copy_count(pair: RootedPair, n: int, trials: int, seed: int,
                            p: Optional[float] = None,
                            cap: Optional[int] = None) -> UnextendableReport:
    """Distribution of unextendable root-structure copies in G^s(n, p).

    Validates the limiting-rate hypotheses exactly (strict balance of
    the root structure and of the pair, density equality) and compares
    the counts against the resulting Poisson law.

    The trivial pair (whole structure rooted, nothing added) is a
    definitional boundary: every copy contains itself, so the count is 0
    without sampling and the comparison law is the point mass at 0.
    """
    h = Hypergraph(pair.g.s, pair.roots, pair.h_edges)
    if pair.v_diff == 0 and not pair.pattern_edges:
        if p is None:
            if h.e == 0:
                raise ValueError("p required when the root structure has no edges")
            p = p_from_alpha(n, Fraction(h.v, h.e))
        return UnextendableReport(n, p, trials, {0: trials}, 0.0, 0.0, 0.0)
    rate = unextendable_poisson_rate(pair, cap=cap)
    if p is None:
        p = p_from_alpha(n, Fraction(h.v, h.e))
    hist: dict = {}
    total = 0
    for t in range(trials):
        host = sample(ModelParams(pair.g.s, n, p=p, seed=seed, trial_index=t))
        c = count_unextendable_copies(host, pair, cap=cap)
        hist[c] = hist.get(c, 0) + 1
        total += c
    return UnextendableReport(n, p, trials, hist, total / trials, rate,
                              tv_distance_to_poisson(hist, rate))


# ---------------------------------------------------------------------------
# Persistence: JSONL for raw records, CSV for summaries.

JSONL_SCHEMA = "hyperspectra.trials.v1"
CSV_FIELDS = ["n", "alpha", "p", "trials", "successes", "estimate",
              "ci_lo", "ci_hi", "budget_exceeded"]


def _record_to_dict(r: TrialRecord) -> dict:
    return {"n": r.n, "p": r.p, "trial_index": r.trial_index,
            "outcome": r.outcome, "elapsed": r.elapsed,
            "budget_exceeded": r.budget_exceeded,
            "alpha": None if r.alpha is None else str(Fraction(r.alpha))}


def _record_from_dict(doc: dict) -> TrialRecord:
    alpha = doc.get("alpha")
    return TrialRecord(doc["n"], doc["p"], doc["trial_index"], doc["outcome"],
                       doc.get("elapsed", 0.0), doc.get("budget_exceeded", False),
                       None if alpha is None else Fraction(alpha))


def save_jsonl(path, cfg: ExperimentConfig, records, append: bool = False):
    """Write a header line (schema, config, digest) then one record per line."""
    mode = "a" if append else "w"
    try:
        with open(path, mode) as fh:
            if fh.tell() == 0:
                header = {"schema": JSONL_SCHEMA, "digest": cfg.digest(),
                          "config": {"s": cfg.s, "n_list": list(cfg.n_list),
                                     "alpha": None if cfg.alpha is None
                                     else str(Fraction(cfg.alpha)),
                                     "p": cfg.p, "trials": cfg.trials,
                                     "seed": cfg.seed,
                                     "property": cfg.prop.describe()}}
                fh.write(json.dumps(header, sort_keys=True) + "\n")
            for r in records:
                fh.write(json.dumps(_record_to_dict(r), sort_keys=True) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def load_jsonl(path) -> tuple[dict, list[TrialRecord]]:
    try:
        with open(path) as fh:
            lines = [line for line in fh if line.strip()]
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    if not lines:
        raise ValueError(f"{path}: empty record file")
    header = json.loads(lines[0])
    if header.get("schema") != JSONL_SCHEMA:
        raise ValueError(f"{path}: unexpected schema {header.get('schema')!r}")
    return header, [_record_from_dict(json.loads(line)) for line in lines[1:]]


def save_csv(path, digest: str, reports):
    try:
        with open(path, "w", newline="") as fh:
            fh.write(f"# digest: {digest}\n")
            writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
            writer.writeheader()
            for r in reports:
                writer.writerow({
                    "n": r.n,
                    "alpha": "" if r.alpha is None else str(Fraction(r.alpha)),
                    "p": f"{r.p:.12g}", "trials": r.trials,
                    "successes": r.successes, "estimate": f"{r.estimate:.12g}",
                    "ci_lo": f"{r.ci_lo:.12g}", "ci_hi": f"{r.ci_hi:.12g}",
                    "budget_exceeded": r.budget_exceeded})
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc


def load_csv(path) -> tuple[str, list[dict]]:
    try:
        with open(path) as fh:
            first = fh.readline().strip()
            digest = first.removeprefix("# digest: ")
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc}") from exc
    return digest, rows
