#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
special_fns.py
Funções especiais autocontidas (sem scipy.special).

  log_gamma            Lanczos (g=7, 9 termos) + reflexão abaixo de 1/2
  GammaRatio           razões de gammas em espaço log
  beta_density         densidade Beta com regras de fronteira
  i_mk                 I_mk(a,b) = Γ(m+k)/(Γ(m)Γ(k)) · a^(k-1) b^(m-1) / (a+b)^(m+k-1)
  i_mk_generalized     I_mk(α,a;β,b) = I_mk(a,b) · ((a+b)/(βa+αb))^(m+k-1)
  elliptic_k           K(k) = ∫_0^{π/2} dφ / sqrt(1 - k² sin²φ)   (módulo k, não m = k²)
  lorentzian_1d        (1/2π) ∫ dτ (1+cτ²)^(-m)
  lorentzian_2d        (1/4π²) ∫ d²τ (1+c|τ|²)^(-m)

Todas as funções são puras e determinísticas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

from common import BoundaryError, DomainError, SingularityError

# ================= Gamma =================

LANCZOS_G = 7
LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def log_gamma(x: float) -> float:
    if not x > 0:
        raise DomainError(f"log_gamma: x deve ser > 0 (recebido {x})")
    if x < 0.5:
        # Γ(x)Γ(1-x) = π / sin(πx)
        return math.log(math.pi / math.sin(math.pi * x)) - log_gamma(1.0 - x)
    z = x - 1.0
    series = LANCZOS_COEFFS[0]
    for i, c in enumerate(LANCZOS_COEFFS[1:], start=1):
        series += c / (z + i)
    t = z + LANCZOS_G + 0.5
    return LOG_SQRT_2PI + (z + 0.5) * math.log(t) - t + math.log(series)


@dataclass(frozen=True)
class GammaRatio:
    """Π Γ(numerator) / Π Γ(denominator), avaliado em espaço log."""

    numerator: Tuple[float, ...]
    denominator: Tuple[float, ...] = ()

    def __post_init__(self):
        for x in (*self.numerator, *self.denominator):
            if not x > 0:
                raise DomainError(f"GammaRatio: argumentos devem ser > 0 (recebido {x})")

    def log_value(self) -> float:
        return sum(log_gamma(x) for x in self.numerator) - sum(log_gamma(x) for x in self.denominator)

    def value(self) -> float:
        return math.exp(self.log_value())


def log_beta(p: float, q: float) -> float:
    return GammaRatio((p, q), (p + q,)).log_value()


def beta_density(t: float, p: float, q: float) -> float:
    """
    t^(p-1) (1-t)^(q-1) / B(p,q).

    Fora de [0,1] devolve 0. Na fronteira devolve o limite quando o expoente é >= 0
    e levanta BoundaryError quando o expoente é negativo (densidade diverge).
    """
    if p <= 0 or q <= 0:
        raise DomainError(f"beta_density: p, q devem ser > 0 (p={p}, q={q})")
    if t < 0.0 or t > 1.0:
        return 0.0
    for edge, expo in ((0.0, p - 1.0), (1.0, q - 1.0)):
        if t == edge:
            if expo < 0:
                raise BoundaryError(f"densidade Beta({p},{q}) diverge em t={edge:g}")
            if expo > 0:
                return 0.0
    logv = -log_beta(p, q)
    if t > 0.0:
        logv += (p - 1.0) * math.log(t)
    if t < 1.0:
        logv += (q - 1.0) * math.log1p(-t)
    return math.exp(logv)


# ================= Integrais I_mk =================

def _is_half_integer(x: float) -> bool:
    return x > 0 and float(2 * x).is_integer()


def _check_mk(m: float, k: float):
    if not (_is_half_integer(m) and _is_half_integer(k)):
        raise DomainError(f"m, k devem ser inteiros ou semi-inteiros positivos (m={m}, k={k})")
    if m + k < 2:
        raise DomainError(f"I_mk exige m+k >= 2 (m={m}, k={k})")


def i_mk(m: float, k: float, a: float, b: float) -> float:
    _check_mk(m, k)
    if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
        raise DomainError(f"I_mk exige 0 < a, b < 1 (a={a}, b={b})")
    logv = (
        GammaRatio((m + k,), (m, k)).log_value()
        + (k - 1.0) * math.log(a)
        + (m - 1.0) * math.log(b)
        - (m + k - 1.0) * math.log(a + b)
    )
    return math.exp(logv)


def i_mk_generalized(m: float, k: float, alpha: complex, a: float, beta: complex, b: float) -> complex:
    alpha, beta = complex(alpha), complex(beta)
    if alpha.real < 1.0 or beta.real < 1.0:
        raise DomainError(f"I_mk(α,a;β,b) exige Re(α), Re(β) >= 1 (α={alpha}, β={beta})")
    base = i_mk(m, k, a, b)
    denom = beta * a + alpha * b
    if denom == 0:
        raise SingularityError("I_mk(α,a;β,b): βa + αb = 0")
    # potência complexa no ramo principal
    return base * ((a + b) / denom) ** (m + k - 1.0)


# ================= Elíptica =================

AGM_MAX_ITER = 64


def _agm(a: float, g: float) -> float:
    for _ in range(AGM_MAX_ITER):
        if abs(a - g) <= 4e-16 * a:
            break
        a, g = 0.5 * (a + g), math.sqrt(a * g)
    return 0.5 * (a + g)


def elliptic_k_complement(kp: float) -> float:
    """K a partir do módulo complementar k' = sqrt(1 - k²); evita o cancelamento perto de k = 1."""
    if not (0.0 < kp <= 1.0):
        raise DomainError(f"elliptic_k: módulo complementar deve estar em (0,1] (k'={kp})")
    return math.pi / (2.0 * _agm(1.0, kp))


def elliptic_k(modulus: float) -> float:
    if modulus == 1.0:
        raise SingularityError("elliptic_k: K diverge em k = 1")
    if not (0.0 <= modulus < 1.0):
        raise DomainError(f"elliptic_k: módulo deve estar em [0,1) (k={modulus})")
    return elliptic_k_complement(math.sqrt((1.0 - modulus) * (1.0 + modulus)))


# ================= Lorentzianas =================

def lorentzian_1d(c: float, m: float) -> float:
    if c <= 0 or m < 1:
        raise DomainError(f"lorentzian_1d exige c > 0 e m >= 1 (c={c}, m={m})")
    return GammaRatio((m - 0.5,), (m,)).value() / (2.0 * math.sqrt(math.pi * c))


def lorentzian_2d(c: float, m: float) -> float:
    if c <= 0:
        raise DomainError(f"lorentzian_2d exige c > 0 (c={c})")
    if m <= 1:
        raise SingularityError(f"lorentzian_2d diverge para m <= 1 (m={m})")
    return 1.0 / (4.0 * math.pi * c * (m - 1.0))


def gamma_ratio(numerator: Sequence[float], denominator: Sequence[float] = ()) -> float:
    return GammaRatio(tuple(numerator), tuple(denominator)).value()
