#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
residues.py
Densidades de dois pontos pelo teorema dos resíduos.

Unitário (m = N-K-1, k = K-1, sempre inteiros): fecha-se o contorno em s no semiplano sem o
polo de (1 + i s t_s)^-1.
  t_s < 0: polo s0 = i/t1 de ordem m       I = i (m+k) Res[α^-m β^-k γ^-1, s0]
  t_s > 0: polo s1 = -i/(1-t1) de ordem k  I = -i (m+k) Res[α^-m β^-k γ^-1, s1]
  com γ = 1 + i s t_s e 𝒫(t1,t2) = 𝒫(t2) · I.

Ortogonal (só N par e K ímpar, m = (N-K-1)/2, k = (K-1)/2): substituição z² = 1 + i s t_s,
com f(z) = (z² - a²)^-m (b² - z²)^-k, a = sqrt((1-t2)/t1), b = sqrt(t2/(1-t1)).
  t_s > 0: J = (m+k-1/2) · (-2 t_s^(m+k-1)) / (t1^m (1-t1)^k) · Res[f, b]
  t_s < 0: J = (m+k-1/2) · (+2 t_s^(m+k-1)) / (t1^m (1-t1)^k) · Res[f, a]
  e P(t1,t2) = P(t2) · J.

O resíduo de um polo de ordem p é o coeficiente p-1 da série de Taylor da parte regular;
a série é montada com aritmética de séries truncadas (ComplexSeries), sem derivar numericamente.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Number
from typing import Sequence

import numpy as np

from analytic import METHOD_RESIDUE, DensityValue, check_open_unit, clipped, onepoint_density
from common import (
    DEFAULT_EPS_TS,
    NearSingularityError,
    UnsupportedDimensionError,
    UnsupportedParityError,
)
from sampling import EnsembleKind, ProjectionConfig


@dataclass(frozen=True)
class ComplexSeries:
    """Σ_n c_n (z - center)^n truncada em `order` termos."""

    center: complex
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise ValueError("ComplexSeries precisa de ao menos um coeficiente")
        if not np.all(np.isfinite(c)):
            raise ValueError("coeficientes não finitos")
        object.__setattr__(self, "coeffs", c)

    @property
    def order(self) -> int:
        return int(self.coeffs.size)

    @classmethod
    def polynomial(cls, center: complex, coeffs: Sequence[complex], order: int) -> "ComplexSeries":
        c = np.zeros(order, dtype=complex)
        n = min(order, len(coeffs))
        c[:n] = np.asarray(coeffs, dtype=complex)[:n]
        return cls(complex(center), c)

    def coefficient(self, n: int) -> complex:
        if not (0 <= n < self.order):
            raise IndexError(f"coeficiente {n} fora da truncagem (ordem {self.order})")
        return complex(self.coeffs[n])

    def _check_compatible(self, other: "ComplexSeries"):
        if other.center != self.center or other.order != self.order:
            raise ValueError("séries com centro ou ordem diferentes")

    def __mul__(self, other):
        if isinstance(other, Number):
            return ComplexSeries(self.center, self.coeffs * complex(other))
        self._check_compatible(other)
        return ComplexSeries(self.center, np.convolve(self.coeffs, other.coeffs)[: self.order])

    __rmul__ = __mul__

    def __add__(self, other: "ComplexSeries") -> "ComplexSeries":
        self._check_compatible(other)
        return ComplexSeries(self.center, self.coeffs + other.coeffs)

    def power(self, p: float) -> "ComplexSeries":
        """
        f^p pela recorrência de Miller (a0 ≠ 0):
          b0 = a0^p,  b_n = 1/(n a0) Σ_{j=1..n} ((p+1) j - n) a_j b_{n-j}.
        """
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("potência de série com termo constante nulo")
        b = np.zeros(self.order, dtype=complex)
        b[0] = a[0] ** p
        for n in range(1, self.order):
            j = np.arange(1, n + 1)
            b[n] = np.sum(((p + 1) * j - n) * a[j] * b[n - j]) / (n * a[0])
        return ComplexSeries(self.center, b)

    def residue(self, pole_order: int) -> complex:
        """Resíduo de series(z) / (z - center)^pole_order."""
        if pole_order < 0:
            raise ValueError(f"ordem de polo negativa: {pole_order}")
        if pole_order == 0:
            return 0j
        return self.coefficient(pole_order - 1)


# ================= Unitário =================

def unitary_residue_integral(N: int, K: int, t1: float, t2: float) -> complex:
    """(N-2)/(2π) ∫ ds α^-m β^-k γ^-1, pelo resíduo no semiplano escolhido por sign(t_s)."""
    m, k = N - K - 1, K - 1
    ts = t1 + t2 - 1.0
    if ts < 0:
        s0 = 1j / t1
        order = m
        L = max(order, 1)
        beta = ComplexSeries.polynomial(s0, (1 - 1j * (1 - t1) * s0, -1j * (1 - t1)), L)
        gamma = ComplexSeries.polynomial(s0, ((1 - t2) / t1, 1j * ts), L)
        # α = i t1 (s - s0)
        regular = (1j * t1) ** (-m) * beta.power(-k) * gamma.power(-1)
        return 1j * (m + k) * regular.residue(order)
    s1 = -1j / (1 - t1)
    order = k
    L = max(order, 1)
    alpha = ComplexSeries.polynomial(s1, (1 + 1j * t1 * s1, 1j * t1), L)
    gamma = ComplexSeries.polynomial(s1, (t2 / (1 - t1), 1j * ts), L)
    # β = -i (1-t1) (s - s1)
    regular = (-1j * (1 - t1)) ** (-k) * alpha.power(-m) * gamma.power(-1)
    return -1j * (m + k) * regular.residue(order)


# ================= Ortogonal =================

def orthogonal_residue_integral(N: int, K: int, t1: float, t2: float) -> complex:
    m, k = (N - K - 1) // 2, (K - 1) // 2
    ts = t1 + t2 - 1.0
    a = math.sqrt((1 - t2) / t1)
    b = math.sqrt(t2 / (1 - t1))
    # b² - a² sem cancelamento
    gap = ts / (t1 * (1 - t1))
    scale = (m + k - 0.5) * 2.0 * ts ** (m + k - 1) / (t1 ** m * (1 - t1) ** k)
    if ts > 0:
        L = max(k, 1)
        zb = ComplexSeries.polynomial(b, (2 * b, 1.0), L)
        za = ComplexSeries.polynomial(b, (gap, 2 * b, 1.0), L)
        regular = (-1) ** k * zb.power(-k) * za.power(-m)
        return -scale * regular.residue(k)
    L = max(m, 1)
    za = ComplexSeries.polynomial(a, (2 * a, 1.0), L)
    zb = ComplexSeries.polynomial(a, (gap, -2 * a, -1.0), L)
    regular = za.power(-m) * zb.power(-k)
    return scale * regular.residue(m)


def twopoint_residue(ensemble, N: int, K: int, t1: float, t2: float,
                     eps_ts: float = DEFAULT_EPS_TS) -> DensityValue:
    ensemble = EnsembleKind.parse(ensemble)
    ProjectionConfig(N, K, 2)
    check_open_unit(t1=t1, t2=t2)
    t1, t2 = float(t1), float(t2)
    if ensemble is EnsembleKind.ORTHOGONAL:
        if N % 2 or K % 2 == 0:
            raise UnsupportedParityError(
                f"resíduo ortogonal exige N par e K ímpar (N={N}, K={K}); use quadratura"
            )
        if N < 4:
            raise UnsupportedDimensionError(f"resíduo ortogonal exige N >= 4 (N={N})")
    elif N < 3:
        raise UnsupportedDimensionError(f"resíduo unitário exige N >= 3 (N={N})")

    ts = t1 + t2 - 1.0
    if abs(ts) < eps_ts:
        raise NearSingularityError(f"|t1+t2-1| = {abs(ts):.2e} < {eps_ts:g}: polos colidem, use quadratura")

    if ensemble is EnsembleKind.ORTHOGONAL:
        integral = orthogonal_residue_integral(N, K, t1, t2)
    else:
        integral = unitary_residue_integral(N, K, t1, t2)
    p2 = onepoint_density(ensemble, N, K, t2).value
    value = p2 * integral.real
    # parte imaginária é puro arredondamento
    err = p2 * abs(integral.imag) + 1e-14 * abs(value)
    return clipped(value, METHOD_RESIDUE, err)
