#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
analytic.py
Densidades de um e de dois pontos por fórmula fechada e por quadratura.

Um ponto (densidades Beta):
  ortogonal  P_NK(t) = I_{(N-K)/2, K/2}(t, 1-t)
  unitário   𝒫_NK(t) = I_{N-K, K}(t, 1-t)

Dois pontos (R = 2), com α = 1 + i s t1, β = 1 - i s (1-t1), t_s = t1 + t2 - 1:
  ortogonal  P(t1,t2) = P(t2) (N-3)/(4π) ∫ ds α^{-(N-K-1)/2} β^{-(K-1)/2} (1 + i s t_s)^{-1/2}
  unitário   𝒫(t1,t2) = 𝒫(t2) (N-2)/(2π) ∫ ds α^{-(N-K-1)} β^{-(K-1)} (1 + i s t_s)^{-1}

As integrais em s rodam sobre a reta real; usamos f(-s) = conj f(s), a substituição
s = tan θ e quadratura adaptativa de Gauss–Kronrod (scipy.integrate.quad) em θ ∈ (0, π/2).
Potências complexas no ramo principal: todas as bases têm parte real 1 no caminho.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Tuple

import numpy as np
from scipy import integrate, special

from common import (
    DEFAULT_EPS_TS,
    DEFAULT_QUAD_TOL,
    DomainError,
    SingularityError,
    UnsupportedDimensionError,
    log,
    warn,
)
from sampling import EnsembleKind, ProjectionConfig
from special_fns import GammaRatio, beta_density

METHOD_CLOSED_FORM = "closed_form"
METHOD_QUADRATURE = "quadrature"
METHOD_RESIDUE = "residue"
METHODS = (METHOD_CLOSED_FORM, METHOD_QUADRATURE, METHOD_RESIDUE)

NEAR_LINE_REL_ERROR = 1e-2
QUAD_LIMIT = 400
# t1 + t2 - 1 dentro do arredondamento conta como sobre a linha
ON_LINE_ATOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class DensityValue:
    value: float
    method: str
    est_error: float = 0.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"método inválido: {self.method}")
        if not self.value >= 0:
            raise ValueError(f"densidade negativa ou NaN: {self.value}")
        if not self.est_error >= 0:
            raise ValueError(f"est_error deve ser >= 0: {self.est_error}")

    def __float__(self) -> float:
        return float(self.value)


def clipped(value: float, method: str, est_error: float) -> DensityValue:
    """Quadratura pode devolver -1e-13 onde a densidade é 0; o corte entra no erro."""
    if value < 0:
        est_error += -value
        value = 0.0
    return DensityValue(float(value), method, float(est_error))


def on_line(ts: float) -> bool:
    return abs(ts) <= ON_LINE_ATOL


def check_open_unit(**ts: float):
    for name, t in ts.items():
        if not (0.0 < t < 1.0):
            raise DomainError(f"{name} deve estar em (0,1) (recebido {t})")


# ================= Um ponto =================

def beta_params(ensemble, N: int, K: int) -> Tuple[float, float]:
    """(p, q) da densidade Beta t^(p-1) (1-t)^(q-1) de um ponto."""
    ensemble = EnsembleKind.parse(ensemble)
    ProjectionConfig(N, K, 1)
    if ensemble is EnsembleKind.ORTHOGONAL:
        return K / 2.0, (N - K) / 2.0
    return float(K), float(N - K)


def onepoint_density(ensemble, N: int, K: int, t: float) -> DensityValue:
    p, q = beta_params(ensemble, N, K)
    return DensityValue(beta_density(t, p, q), METHOD_CLOSED_FORM, 0.0)


def onepoint_cdf(ensemble, N: int, K: int, t):
    p, q = beta_params(ensemble, N, K)
    return special.betainc(p, q, np.clip(t, 0.0, 1.0))


def onepoint_quadrature(ensemble, N: int, K: int, t: float, tol: float = DEFAULT_QUAD_TOL) -> DensityValue:
    """Forma de Fourier da densidade de um ponto, integrada numericamente."""
    ensemble = EnsembleKind.parse(ensemble)
    p, q = beta_params(ensemble, N, K)
    check_open_unit(t=t)
    if p + q <= 1:
        raise UnsupportedDimensionError(f"integral de um ponto não converge para N={N} ({ensemble.value})")
    pref = (N - 2) / (4 * math.pi) if ensemble is EnsembleKind.ORTHOGONAL else (N - 1) / (2 * math.pi)

    def f(s):
        return np.exp(-q * np.log(1 + 1j * s * t) - p * np.log(1 - 1j * s * (1 - t)))

    integral, err = real_line_integral(f, scales=(t, 1 - t), tol=tol / pref)
    return clipped(pref * integral, METHOD_QUADRATURE, pref * err)


# ================= Dois pontos =================

@dataclass(frozen=True)
class TwoPointIntegrand:
    """
    Integrando reduzido de R = 2 (τ já integrado): α^{-m} β^{-k} (1 + i s t_s)^{-g},
    g = 1/2 (ortogonal) ou 1 (unitário).
    """

    ensemble: EnsembleKind
    N: int
    K: int
    t1: float
    t2: float

    @property
    def orthogonal(self) -> bool:
        return self.ensemble is EnsembleKind.ORTHOGONAL

    @property
    def m(self) -> float:
        return (self.N - self.K - 1) / 2.0 if self.orthogonal else float(self.N - self.K - 1)

    @property
    def k(self) -> float:
        return (self.K - 1) / 2.0 if self.orthogonal else float(self.K - 1)

    @property
    def g(self) -> float:
        return 0.5 if self.orthogonal else 1.0

    @property
    def ts(self) -> float:
        return self.t1 + self.t2 - 1.0

    def decay(self) -> float:
        """Expoente de |s| no decaimento do integrando (precisa ser > 1)."""
        return self.m + self.k + (0.0 if on_line(self.ts) else self.g)

    def alpha(self, s):
        return 1 + 1j * s * self.t1

    def beta(self, s):
        return 1 - 1j * s * (1 - self.t1)

    def prefactor(self) -> float:
        p2 = onepoint_density(self.ensemble, self.N, self.K, self.t2).value
        if self.orthogonal:
            return p2 * (self.N - 3) / (4 * math.pi)
        return p2 * (self.N - 2) / (2 * math.pi)

    def __call__(self, s):
        logv = -self.m * np.log(self.alpha(s)) - self.k * np.log(self.beta(s))
        if self.ts != 0:
            logv = logv - self.g * np.log(1 + 1j * s * self.ts)
        return np.exp(logv)


def real_line_integral(f: Callable, scales: Iterable[float] = (), tol: float = DEFAULT_QUAD_TOL) -> Tuple[float, float]:
    """
    ∫_{-inf}^{inf} f(s) ds para f(-s) = conj f(s): 2 ∫_0^{π/2} Re f(tan θ) sec²θ dθ.
    `scales` são as escalas 1/x onde o integrando muda de forma; viram breakpoints em θ.
    """
    def h(theta):
        c = math.cos(theta)
        return float(np.real(f(math.tan(theta)))) / (c * c)

    pts = sorted({math.atan(1.0 / x) for x in scales if x > 0})
    pts = [p for p in pts if 1e-9 < p < math.pi / 2 - 1e-9]
    val, err = integrate.quad(
        h, 0.0, math.pi / 2,
        points=pts or None,
        epsabs=max(tol / 2, 1e-15), epsrel=1e-12, limit=QUAD_LIMIT,
    )
    return 2.0 * val, 2.0 * err


def check_twopoint(ensemble, N: int, K: int, t1: float, t2: float) -> TwoPointIntegrand:
    ensemble = EnsembleKind.parse(ensemble)
    ProjectionConfig(N, K, 2)
    check_open_unit(t1=t1, t2=t2)
    integrand = TwoPointIntegrand(ensemble, N, K, float(t1), float(t2))
    if integrand.orthogonal and N < 4:
        raise UnsupportedDimensionError(
            f"quadratura ortogonal exige N >= 4 (decaimento |s|^-(N-1)/2 integrável); N={N}"
        )
    if not integrand.orthogonal and N < 3:
        raise UnsupportedDimensionError(f"quadratura unitária exige N >= 3; N={N}")
    return integrand


def twopoint_quadrature(ensemble, N: int, K: int, t1: float, t2: float,
                        eps_ts: float = DEFAULT_EPS_TS, tol: float = DEFAULT_QUAD_TOL,
                        verbose: bool = False) -> DensityValue:
    integrand = check_twopoint(ensemble, N, K, t1, t2)
    ts = integrand.ts
    if on_line(ts) and integrand.decay() <= 1:
        raise SingularityError(
            f"densidade {integrand.ensemble.value} N={N} K={K} diverge sobre t1+t2=1"
        )
    pref = integrand.prefactor()
    if pref == 0:
        return DensityValue(0.0, METHOD_QUADRATURE, 0.0)
    integral, err = real_line_integral(
        integrand, scales=(t1, 1 - t1, abs(ts)), tol=tol / pref
    )
    value, est = pref * integral, pref * err
    if integrand.orthogonal and abs(ts) < eps_ts:
        est = max(est, NEAR_LINE_REL_ERROR * abs(value))
        if verbose:
            warn(f"quadratura perto da linha singular (|t1+t2-1|={abs(ts):.2e} < {eps_ts:g})")
    log(f"   quad {integrand.ensemble.value} N={N} K={K} ({t1:.4g},{t2:.4g}) → {value:.6g} ± {est:.1e}", verbose)
    return clipped(value, METHOD_QUADRATURE, est)


# ================= Normalização =================

def z_zero(ensemble, N: int) -> float:
    """
    Z(0): ortogonal Γ[(N-1)/2] / (√π Γ(N/2)), unitário 1/(π(N-1)).
    Iguais a lorentzian_1d(1/4, N/2) e lorentzian_2d(1/4, N).
    """
    ensemble = EnsembleKind.parse(ensemble)
    if N < 3:
        raise DomainError(f"Z(0) exige N >= 3 (N={N})")
    if ensemble is EnsembleKind.ORTHOGONAL:
        return GammaRatio(((N - 1) / 2.0,), (0.5, N / 2.0)).value()
    return 1.0 / (math.pi * (N - 1))
