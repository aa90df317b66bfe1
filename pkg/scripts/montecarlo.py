#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
montecarlo.py
Histogramas das probabilidades de projeção e teste χ² contra as densidades analíticas.

Sorteios em blocos de CHUNK_DRAWS; o bloco i usa o i-ésimo filho de SeedSequence(seed), então o
resultado não depende de --threads. Cada bloco vira um sub-histograma; a soma é feita uma vez no fim.

Binagem: bins iguais em [lo, hi]; o valor hi cai no último bin.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special, stats

from analytic import onepoint_cdf, onepoint_density
from common import (
    CHUNK_DRAWS,
    MAX_BINS_TOTAL,
    InsufficientDataError,
    TooManyBinsError,
    log,
)
from sampling import (
    EnsembleKind,
    ProjectionConfig,
    check_weights,
    projection_probs_batch,
    sample_haar_batch,
    spawn_streams,
    weighted_mixture_probs_batch,
)

MIN_EXPECTED = 5.0
GL_NODES = 3
MAX_BINNED_R = 3


# ================= Tipos =================

@dataclass(frozen=True)
class Histogram:
    edges: Tuple[np.ndarray, ...]
    counts: np.ndarray
    total: int
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.counts.ndim != len(self.edges):
            raise ValueError("counts e edges com dimensões diferentes")
        if int(self.counts.sum()) != self.total:
            raise ValueError(f"soma dos counts ({int(self.counts.sum())}) != total ({self.total})")

    @property
    def R(self) -> int:
        return len(self.edges)

    @property
    def bins(self) -> int:
        return int(self.counts.shape[0])

    def bin_volume(self) -> float:
        return float(np.prod([e[1] - e[0] for e in self.edges]))

    def density(self) -> np.ndarray:
        if self.total == 0:
            raise InsufficientDataError("histograma vazio")
        return self.counts / (self.total * self.bin_volume())

    def centers(self, axis: int = 0) -> np.ndarray:
        e = self.edges[axis]
        return 0.5 * (e[:-1] + e[1:])

    def marginal(self, axis: int) -> "Histogram":
        others = tuple(i for i in range(self.R) if i != axis)
        counts = self.counts.sum(axis=others) if others else self.counts
        meta = dict(self.metadata, R=1, marginal_axis=axis)
        return Histogram((self.edges[axis],), counts, self.total, meta)


@dataclass(frozen=True)
class Histogram2D(Histogram):
    def __post_init__(self):
        super().__post_init__()
        if self.R != 2:
            raise ValueError("Histogram2D exige duas dimensões")

    @property
    def edges_x(self) -> np.ndarray:
        return self.edges[0]

    @property
    def edges_y(self) -> np.ndarray:
        return self.edges[1]


@dataclass(frozen=True)
class RawSamples:
    samples: np.ndarray
    metadata: Dict[str, Any] = field(default_factory=dict)

    @property
    def R(self) -> int:
        return int(self.samples.shape[1])


@dataclass(frozen=True)
class FitReport:
    chi2: float
    dof: int
    p_value: float
    sup_norm: float
    n_draws: int
    seed: Optional[int]
    groups: int = 0
    excluded_bins: int = 0

    def accepted(self, threshold: float) -> bool:
        return self.p_value >= threshold

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "draws": self.n_draws,
            "chi2": self.chi2,
            "dof": self.dof,
            "p_value": self.p_value,
            "sup_norm": self.sup_norm,
            "groups": self.groups,
            "excluded_bins": self.excluded_bins,
        }


# ================= Sorteio =================

def chunk_sizes(draws: int) -> List[int]:
    n = math.ceil(draws / CHUNK_DRAWS)
    return [min(CHUNK_DRAWS, draws - i * CHUNK_DRAWS) for i in range(n)]


def map_chunks(ensemble, N: int, draws: int, seed: int, threads: int,
               fn: Callable[[np.ndarray], Any]) -> List[Any]:
    """Aplica fn a cada bloco de matrizes de Haar; resultados na ordem dos blocos."""
    if draws < 1:
        raise ValueError(f"draws deve ser >= 1 (draws={draws})")
    ensemble = EnsembleKind.parse(ensemble)
    sizes = chunk_sizes(draws)
    streams = spawn_streams(seed, len(sizes))

    def _run(i: int):
        return fn(sample_haar_batch(ensemble, N, sizes[i], streams[i]))

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        return list(pool.map(_run, range(len(sizes))))


def draw_observable(ensemble, N: int, draws: int, seed: int, threads: int,
                    observable: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    return np.concatenate(map_chunks(ensemble, N, draws, seed, threads, observable), axis=0)


# ================= Histogramas =================

def check_bins(bins: int, R: int):
    if bins < 1:
        raise ValueError(f"bins deve ser >= 1 (bins={bins})")
    if bins ** R > MAX_BINS_TOTAL:
        raise TooManyBinsError(f"bins^R = {bins}^{R} excede o limite de {MAX_BINS_TOTAL:.0e} células")


def bin_counts(samples: np.ndarray, bins: int, lo: float = 0.0, hi: float = 1.0) -> np.ndarray:
    x = np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, np.newaxis]
    R = x.shape[1]
    idx = np.floor((x - lo) / (hi - lo) * bins).astype(np.int64)
    np.clip(idx, 0, bins - 1, out=idx)
    flat = np.ravel_multi_index(tuple(idx.T), (bins,) * R)
    return np.bincount(flat, minlength=bins ** R).reshape((bins,) * R)


def make_histogram(counts: np.ndarray, bins: int, R: int, metadata: Optional[Dict[str, Any]] = None,
                   lo: float = 0.0, hi: float = 1.0) -> Histogram:
    edges = tuple(np.linspace(lo, hi, bins + 1) for _ in range(R))
    cls = Histogram2D if R == 2 else Histogram
    return cls(edges, counts, int(counts.sum()), dict(metadata or {}))


def histogram_from_samples(samples: np.ndarray, bins: int, metadata: Optional[Dict[str, Any]] = None,
                           lo: float = 0.0, hi: float = 1.0) -> Histogram:
    x = np.asarray(samples, dtype=float)
    R = 1 if x.ndim == 1 else x.shape[1]
    check_bins(bins, R)
    return make_histogram(bin_counts(x, bins, lo, hi), bins, R, metadata, lo, hi)


def estimate_joint(ensemble, N: int, K: int, R: int, draws: int, bins: int, seed: int,
                   threads: int = 1, verbose: bool = False):
    """Histogram para R <= 3; RawSamples para R > 3."""
    ensemble = EnsembleKind.parse(ensemble)
    ProjectionConfig(N, K, R)
    meta = {"ensemble": ensemble.value, "N": N, "K": K, "R": R, "draws": draws, "bins": bins, "seed": seed}

    def observable(frames):
        return projection_probs_batch(frames, K, R)

    if R > MAX_BINNED_R:
        log(f"➡️ {draws} sorteios {ensemble.value} N={N} K={K} R={R} (amostras brutas)", verbose)
        return RawSamples(draw_observable(ensemble, N, draws, seed, threads, observable), meta)

    check_bins(bins, R)
    log(f"➡️ {draws} sorteios {ensemble.value} N={N} K={K} R={R}, {bins}^{R} bins", verbose)
    parts = map_chunks(ensemble, N, draws, seed, threads, lambda f: bin_counts(observable(f), bins))
    hist = make_histogram(np.sum(parts, axis=0), bins, R, meta)
    log(f"✅ Histograma pronto ({hist.total} sorteios)", verbose)
    return hist


def estimate_mixture(ensemble, N: int, K: int, weights: Sequence[float], draws: int, bins: int,
                     seed: int, threads: int = 1) -> Histogram:
    """Histograma de t̄ = Σ p_ξ t_ξ, R = len(weights)."""
    ensemble = EnsembleKind.parse(ensemble)
    p = check_weights(weights)
    R = p.size
    ProjectionConfig(N, K, R)
    check_bins(bins, 1)
    meta = {"ensemble": ensemble.value, "N": N, "K": K, "R": R, "draws": draws, "bins": bins,
            "seed": seed, "weights": p.tolist()}
    parts = map_chunks(
        ensemble, N, draws, seed, threads,
        lambda f: bin_counts(weighted_mixture_probs_batch(projection_probs_batch(f, K, R), p), bins),
    )
    return make_histogram(np.sum(parts, axis=0), bins, 1, meta)


# ================= Comparação =================

def _gl_unit(n: int) -> Tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _in_strip(lows: Sequence[float], highs: Sequence[float], eps: float) -> bool:
    return sum(lows) - 1.0 < eps and sum(highs) - 1.0 > -eps


def bin_mass(evaluate: Callable[..., float], lows: Sequence[float], highs: Sequence[float],
             nodes: int = GL_NODES) -> float:
    """∫ da densidade sobre o bin por Gauss–Legendre tensorial."""
    x, w = _gl_unit(nodes)
    grids = [lo + (hi - lo) * x for lo, hi in zip(lows, highs)]
    vol = float(np.prod([hi - lo for lo, hi in zip(lows, highs)]))
    total = 0.0
    for ix in np.ndindex(*(nodes,) * len(lows)):
        point = [grids[d][i] for d, i in enumerate(ix)]
        weight = float(np.prod([w[i] for i in ix]))
        total += weight * float(evaluate(*point))
    return total * vol


def merge_bins(observed: np.ndarray, expected: np.ndarray, min_expected: float = MIN_EXPECTED):
    """Agrupa bins consecutivos até E >= min_expected; a sobra vai para o último grupo."""
    obs_groups: List[float] = []
    exp_groups: List[float] = []
    o_acc = e_acc = 0.0
    for o, e in zip(observed, expected):
        o_acc += o
        e_acc += e
        if e_acc >= min_expected:
            obs_groups.append(o_acc)
            exp_groups.append(e_acc)
            o_acc = e_acc = 0.0
    if e_acc > 0 or o_acc > 0:
        if exp_groups:
            obs_groups[-1] += o_acc
            exp_groups[-1] += e_acc
        else:
            obs_groups.append(o_acc)
            exp_groups.append(e_acc)
    return np.asarray(obs_groups), np.asarray(exp_groups)


def compare(hist: Histogram, analytic: Callable[..., float], exclude_strip: float = 0.0,
            nodes: int = GL_NODES) -> FitReport:
    """
    χ² entre o histograma e a densidade analítica (R = 1 ou 2).

    Esperados: massa de cada bin (Gauss–Legendre nodes^R) reescalada para o total observado nos
    bins incluídos. Bins que tocam |t1 + t2 - 1| < exclude_strip ficam de fora, assim como bins onde
    a densidade não é avaliável (SingularityError).
    """
    if hist.total == 0:
        raise InsufficientDataError("histograma vazio: nada a comparar")
    if hist.R > 2:
        raise ValueError("compare aceita R = 1 ou 2; para R >= 3 use compare_marginals")

    edges = hist.edges
    emp_density = hist.density()
    observed, masses, gaps = [], [], []
    excluded = 0
    for ix in np.ndindex(*hist.counts.shape):
        lows = [edges[d][i] for d, i in enumerate(ix)]
        highs = [edges[d][i + 1] for d, i in enumerate(ix)]
        if exclude_strip > 0 and hist.R == 2 and _in_strip(lows, highs, exclude_strip):
            excluded += 1
            continue
        try:
            mass = bin_mass(analytic, lows, highs, nodes)
            center = [0.5 * (lo + hi) for lo, hi in zip(lows, highs)]
            gaps.append(abs(emp_density[ix] - float(analytic(*center))))
        except ArithmeticError:
            excluded += 1
            continue
        observed.append(int(hist.counts[ix]))
        masses.append(mass)

    observed = np.asarray(observed, dtype=float)
    masses = np.asarray(masses, dtype=float)
    n_obs = observed.sum()
    if n_obs == 0 or masses.sum() <= 0:
        raise InsufficientDataError("nenhum sorteio nos bins incluídos")
    expected = masses / masses.sum() * n_obs

    o, e = merge_bins(observed, expected)
    keep = e > 0
    o, e = o[keep], e[keep]
    dof = int(o.size - 1)
    if dof < 1:
        raise InsufficientDataError(f"poucos grupos após a fusão de bins ({o.size})")
    chi2 = float(np.sum((o - e) ** 2 / e))
    p_value = float(special.gammaincc(dof / 2.0, chi2 / 2.0))
    return FitReport(
        chi2=chi2,
        dof=dof,
        p_value=p_value,
        sup_norm=float(max(gaps)) if gaps else 0.0,
        n_draws=int(hist.total),
        seed=hist.metadata.get("seed"),
        groups=int(o.size),
        excluded_bins=excluded,
    )


def compare_marginals(samples, ensemble, N: int, K: int) -> List[Tuple[float, float]]:
    """
    Cada marginal contra a lei Beta de um ponto: [(statistic, p_value), ...].

    Amostras brutas usam KS; um Histogram (R <= 3) usa χ² em hist.marginal(j), e statistic é o χ².
    """
    ensemble = EnsembleKind.parse(ensemble)
    if isinstance(samples, Histogram):
        reports = [compare(samples.marginal(j), lambda t: onepoint_density(ensemble, N, K, t).value)
                   for j in range(samples.R)]
        return [(r.chi2, r.p_value) for r in reports]
    x = samples.samples if isinstance(samples, RawSamples) else np.asarray(samples, dtype=float)
    if x.ndim == 1:
        x = x[:, np.newaxis]
    if x.shape[0] == 0:
        raise InsufficientDataError("nenhuma amostra")
    out = []
    for j in range(x.shape[1]):
        res = stats.kstest(x[:, j], lambda t: onepoint_cdf(ensemble, N, K, t))
        out.append((float(res.statistic), float(res.pvalue)))
    return out
