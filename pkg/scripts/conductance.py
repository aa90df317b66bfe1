#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
conductance.py
Distribuição da condutância g = Σ_ξ t_ξ (soma das condutâncias parciais).

  - p_g_closed_42        forma fechada unitária N=4, K=2: 2g³ em [0,1], 2(2-g)³ em [1,2]
  - p_g_convolution      ∫ P_NK(t, g-t) dt sobre [max(0,g-1), min(1,g)]
  - conductance_density  p(g) exata quando um dos terminais tem 2 modos
  - p_g_monte_carlo      histograma de g a partir de matrizes de Haar
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence

import numpy as np
from scipy import integrate

from common import (
    DEFAULT_EPS_TS,
    DEFAULT_QUAD_TOL,
    NearSingularityError,
    UnsupportedDimensionError,
    log,
)
from densities import density_auto
from montecarlo import check_bins, draw_observable, histogram_from_samples
from sampling import (
    EnsembleKind,
    ProjectionConfig,
    check_weights,
    partial_conductances_batch,
    weighted_mixture_probs_batch,
)

CONDUCTANCE_METHODS = ("closed_form", "convolution", "monte_carlo")


@dataclass(frozen=True)
class ConductanceDensity:
    grid: np.ndarray
    values: np.ndarray
    method: str
    metadata: Dict[str, Any] = field(default_factory=dict)
    bin_width: Optional[float] = None

    def __post_init__(self):
        if self.method not in CONDUCTANCE_METHODS:
            raise ValueError(f"método inválido: {self.method}")
        if self.grid.shape != self.values.shape:
            raise ValueError("grid e values com tamanhos diferentes")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid deve ser estritamente crescente")
        if np.any(self.values < 0):
            raise ValueError("densidade negativa")

    def integral(self) -> float:
        """Trapézio na grade; histogramas (bin_width definido) somam valor x largura."""
        if self.bin_width is not None:
            return float(np.sum(self.values) * self.bin_width)
        return float(integrate.trapezoid(self.values, self.grid))

    def evaluate(self, g) -> np.ndarray:
        """
        Densidade em pontos arbitrários por interpolação linear, 0 fora da grade.
        Histogramas interpolam entre os centros e valem 0 nas bordas do suporte.
        """
        x, y = self.grid, self.values
        if self.bin_width is not None:
            half = 0.5 * self.bin_width
            x = np.concatenate([[x[0] - half], x, [x[-1] + half]])
            y = np.concatenate([[0.0], y, [0.0]])
        return np.interp(np.asarray(g, dtype=float), x, y, left=0.0, right=0.0)


def support_max(N: int, K: int) -> int:
    return min(K, N - K)


# ================= Analítico =================

def p_g_closed_42(g: float) -> float:
    if g < 0 or g > 2:
        return 0.0
    if g <= 1:
        return 2.0 * g ** 3
    return 2.0 * (2.0 - g) ** 3


def p_g_convolution(ensemble, N: int, K: int, g: float,
                    eps_ts: float = DEFAULT_EPS_TS, tol: float = DEFAULT_QUAD_TOL) -> float:
    """
    Densidade de t1 + t2 sob P_NK(t1, t2). t1 + t2 - 1 = g - 1 é constante ao longo do segmento.
    """
    ensemble = EnsembleKind.parse(ensemble)
    ProjectionConfig(N, K, 2)
    need = 4 if ensemble is EnsembleKind.ORTHOGONAL else 3
    if N < need:
        raise UnsupportedDimensionError(
            f"convolução exige a densidade de dois pontos (N >= {need} para {ensemble.value}; N={N})"
        )
    lo, hi = max(0.0, g - 1.0), min(1.0, g)
    if hi <= lo:
        return 0.0
    if ensemble is EnsembleKind.ORTHOGONAL and abs(g - 1.0) < eps_ts:
        raise NearSingularityError(f"|g-1| = {abs(g - 1.0):.2e} < {eps_ts:g}: segmento sobre a linha singular")

    def f(t):
        t2 = g - t
        if not (0.0 < t < 1.0 and 0.0 < t2 < 1.0):
            return 0.0
        return density_auto(ensemble, N, K, t, t2, eps_ts=eps_ts, tol=tol).value

    val, _ = integrate.quad(f, lo, hi, epsabs=1e-11, epsrel=1e-10, limit=200)
    return max(float(val), 0.0)


def conductance_density(ensemble, N: int, K: int, g: float,
                        eps_ts: float = DEFAULT_EPS_TS, tol: float = DEFAULT_QUAD_TOL) -> float:
    """p(g) para g = tr(τ τ†), τ o bloco K x (N-K); exige N-K = 2 ou K = 2."""
    ProjectionConfig(N, K, 1)
    if N - K == 2:
        return p_g_convolution(ensemble, N, K, g, eps_ts, tol)
    if K == 2:
        # g lido pelas linhas de τ
        return p_g_convolution(ensemble, N, N - K, g, eps_ts, tol)
    raise UnsupportedDimensionError(
        f"p(g) analítica só com um terminal de 2 modos (K=2 ou N-K=2; N={N}, K={K}); use Monte Carlo"
    )


def conductance_curve(ensemble, N: int, K: int, grid: Sequence[float],
                      eps_ts: float = DEFAULT_EPS_TS, tol: float = DEFAULT_QUAD_TOL) -> ConductanceDensity:
    g = np.asarray(grid, dtype=float)
    values = np.array([conductance_density(ensemble, N, K, x, eps_ts, tol) for x in g])
    meta = {"ensemble": EnsembleKind.parse(ensemble).value, "N": N, "K": K}
    return ConductanceDensity(g, values, "convolution", meta)


# ================= Monte Carlo =================

def sample_conductances(ensemble, N: int, K: int, draws: int, seed: int, threads: int = 1,
                        weights: Optional[Sequence[float]] = None) -> np.ndarray:
    """g por sorteio; com pesos, g_w = Σ p_ξ t_ξ em [0, 1] (pesos uniformes dão g / (N-K))."""
    ProjectionConfig(N, K, 1)
    p = None if weights is None else check_weights(weights, N - K)

    def observable(frames):
        t = partial_conductances_batch(frames, K)
        if p is None:
            return t.sum(axis=1)
        return weighted_mixture_probs_batch(t, p)

    return draw_observable(ensemble, N, draws, seed, threads, observable)


def _mc_density(g: np.ndarray, hi: float, bins: int, meta: Dict[str, Any]) -> ConductanceDensity:
    check_bins(bins, 1)
    hist = histogram_from_samples(np.clip(g, 0.0, hi), bins, meta, lo=0.0, hi=hi)
    meta = dict(meta, **conductance_moments(g))
    return ConductanceDensity(hist.centers(), hist.density(), "monte_carlo", meta, hi / bins)


def p_g_monte_carlo(ensemble, N: int, K: int, draws: int, bins: int, seed: int,
                    threads: int = 1, verbose: bool = False) -> ConductanceDensity:
    ensemble = EnsembleKind.parse(ensemble)
    if bins < 2:
        raise ValueError(f"bins deve ser >= 2 (bins={bins})")
    log(f"➡️ p(g) Monte Carlo {ensemble.value} N={N} K={K}: {draws} sorteios", verbose)
    g = sample_conductances(ensemble, N, K, draws, seed, threads)
    meta = {"ensemble": ensemble.value, "N": N, "K": K, "draws": draws, "bins": bins, "seed": seed}
    return _mc_density(g, float(support_max(N, K)), bins, meta)


def weighted_conductance_monte_carlo(ensemble, N: int, K: int, weights: Sequence[float], draws: int,
                                     bins: int, seed: int, threads: int = 1) -> ConductanceDensity:
    ensemble = EnsembleKind.parse(ensemble)
    if bins < 2:
        raise ValueError(f"bins deve ser >= 2 (bins={bins})")
    g = sample_conductances(ensemble, N, K, draws, seed, threads, weights=weights)
    meta = {"ensemble": ensemble.value, "N": N, "K": K, "draws": draws, "bins": bins, "seed": seed,
            "weights": list(map(float, weights))}
    return _mc_density(g, 1.0, bins, meta)


def conductance_moments(samples) -> Dict[str, float]:
    g = np.asarray(samples, dtype=float)
    n = int(g.size)
    if n < 2:
        raise ValueError("momentos exigem ao menos 2 amostras")
    var = float(np.var(g, ddof=1))
    return {"n": n, "mean": float(np.mean(g)), "var": var, "se": float(np.sqrt(var / n))}
