#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
sampling.py
Matrizes de Haar em O(N) / U(N) e as probabilidades de projeção.

Haar: matriz de Ginibre (gaussianas i.i.d., reais ou complexas) + QR; cada coluna de Q é
multiplicada pela fase de R_jj, de modo que a diagonal de R fique real e positiva. Sem essa
correção a distribuição de Q não é Haar.

  t_ξ = Σ_{j<K} |w_{jξ}|²      (primeiras R colunas, projeção nos K primeiros vetores da base)
  condutâncias parciais: mesmas somas sobre as últimas N-K colunas (bloco fora da diagonal)

Streams de RNG: SeedSequence(seed).spawn(n) → um Generator (PCG64) por bloco de sorteios.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np

from common import InvalidDimensionError, InvalidWeightsError

WEIGHT_SUM_TOL = 1e-12


class EnsembleKind(str, Enum):
    ORTHOGONAL = "orthogonal"
    UNITARY = "unitary"

    @classmethod
    def parse(cls, value) -> "EnsembleKind":
        if isinstance(value, cls):
            return value
        s = str(value).strip().lower()
        aliases = {"o": cls.ORTHOGONAL, "orth": cls.ORTHOGONAL, "u": cls.UNITARY}
        if s in aliases:
            return aliases[s]
        try:
            return cls(s)
        except ValueError:
            raise ValueError(f"Ensemble inválido: {value!r} (use orthogonal ou unitary)")

    @property
    def is_complex(self) -> bool:
        return self is EnsembleKind.UNITARY


@dataclass(frozen=True)
class ProjectionConfig:
    N: int
    K: int
    R: int = 1

    def __post_init__(self):
        if self.N < 2:
            raise InvalidDimensionError(f"N deve ser >= 2 (N={self.N})")
        if not (1 <= self.K <= self.N - 1):
            raise InvalidDimensionError(f"K deve satisfazer 1 <= K <= N-1 (N={self.N}, K={self.K})")
        if not (1 <= self.R <= self.N):
            raise InvalidDimensionError(f"R deve satisfazer 1 <= R <= N (N={self.N}, R={self.R})")

    def require_analytic(self, ensemble: EnsembleKind):
        """Cotas da avaliação analítica de dois pontos: Γ[(N-R-1)/2] resp. Γ(N-R) finitos."""
        ensemble = EnsembleKind.parse(ensemble)
        need = self.R + 2 if ensemble is EnsembleKind.ORTHOGONAL else self.R + 1
        if self.N < need:
            raise InvalidDimensionError(
                f"avaliação analítica ({ensemble.value}) exige N >= R+{need - self.R} "
                f"(N={self.N}, R={self.R})"
            )


@dataclass(frozen=True)
class FrameSample:
    entries: np.ndarray
    ensemble: EnsembleKind = EnsembleKind.ORTHOGONAL

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def gram_deviation(self) -> float:
        w = self.entries
        gram = w.conj().T @ w
        return float(np.max(np.abs(gram - np.eye(w.shape[1]))))


@dataclass(frozen=True)
class JointSample:
    t: np.ndarray = field(default_factory=lambda: np.zeros(0))

    @property
    def R(self) -> int:
        return int(self.t.shape[0])


# ================= RNG =================

def make_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def spawn_streams(seed: int, n: int) -> List[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.default_rng(c) for c in children]


# ================= Haar =================

def sample_haar_batch(ensemble, N: int, size: int, rng) -> np.ndarray:
    ensemble = EnsembleKind.parse(ensemble)
    if N < 1:
        raise InvalidDimensionError(f"N deve ser >= 1 (N={N})")
    if size < 0:
        raise ValueError(f"size deve ser >= 0 (size={size})")
    rng = make_rng(rng)
    shape = (size, N, N)
    z = rng.standard_normal(shape)
    if ensemble.is_complex:
        z = z + 1j * rng.standard_normal(shape)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=-2, axis2=-1)
    # coluna j de Q vezes fase(R_jj); a nova diagonal de R fica |R_jj| > 0
    q = q * (d / np.abs(d))[:, np.newaxis, :]
    return q


def sample_haar(ensemble, N: int, seed) -> FrameSample:
    ensemble = EnsembleKind.parse(ensemble)
    if N < 1:
        raise InvalidDimensionError(f"N deve ser >= 1 (N={N})")
    w = sample_haar_batch(ensemble, N, 1, seed)[0]
    return FrameSample(np.ascontiguousarray(w), ensemble)


# ================= Observáveis =================

def _check_KR(N: int, K: int, R: int):
    if not (1 <= K <= N):
        raise InvalidDimensionError(f"K fora do intervalo 1..N (N={N}, K={K})")
    if not (1 <= R <= N):
        raise InvalidDimensionError(f"R fora do intervalo 1..N (N={N}, R={R})")


def projection_probs_batch(frames: np.ndarray, K: int, R: int) -> np.ndarray:
    N = frames.shape[-1]
    _check_KR(N, K, R)
    block = frames[..., :K, :R]
    t = np.sum(block.real ** 2 + block.imag ** 2, axis=-2) if np.iscomplexobj(block) else np.sum(block ** 2, axis=-2)
    return np.clip(t, 0.0, 1.0)


def projection_probs(frame: FrameSample, K: int, R: int) -> JointSample:
    return JointSample(projection_probs_batch(frame.entries[np.newaxis], K, R)[0])


def partial_conductances_batch(frames: np.ndarray, K: int) -> np.ndarray:
    N = frames.shape[-1]
    if not (1 <= K <= N - 1):
        raise InvalidDimensionError(f"condutâncias parciais exigem 1 <= K <= N-1 (N={N}, K={K})")
    tau = frames[..., :K, K:]
    t = np.sum(np.abs(tau) ** 2, axis=-2)
    return np.clip(t, 0.0, 1.0)


def partial_conductances(frame: FrameSample, K: int) -> np.ndarray:
    return partial_conductances_batch(frame.entries[np.newaxis], K)[0]


def check_weights(weights: Sequence[float], R: Optional[int] = None) -> np.ndarray:
    p = np.asarray(weights, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise InvalidWeightsError("pesos devem formar um vetor não vazio")
    if R is not None and p.size != R:
        raise InvalidWeightsError(f"esperados {R} pesos, recebidos {p.size}")
    if np.any(p < 0) or not np.all(np.isfinite(p)):
        raise InvalidWeightsError(f"pesos devem ser finitos e >= 0: {p.tolist()}")
    if abs(p.sum() - 1.0) > WEIGHT_SUM_TOL:
        raise InvalidWeightsError(f"pesos devem somar 1 (soma={p.sum():.17g})")
    return p


def weighted_mixture_probs_batch(t: np.ndarray, weights: Sequence[float]) -> np.ndarray:
    """t̄ = Σ_ξ p_ξ t_ξ ao longo do último eixo, em [0, 1]."""
    t = np.asarray(t, dtype=float)
    p = check_weights(weights, t.shape[-1])
    return np.clip(t @ p, 0.0, 1.0)


def weighted_mixture_prob(sample: JointSample, weights: Sequence[float]) -> float:
    return float(weighted_mixture_probs_batch(sample.t, weights))


def boltzmann_weights(levels: Sequence[float], temperature: float) -> np.ndarray:
    """
    p_ξ ∝ exp(-E_ξ / T). T = 0: todo o peso no(s) nível(is) mais baixo(s); T = inf: uniforme.
    """
    e = np.asarray(levels, dtype=float)
    if e.ndim != 1 or e.size == 0:
        raise InvalidWeightsError("níveis devem formar um vetor não vazio")
    if temperature < 0 or math.isnan(temperature):
        raise InvalidWeightsError(f"temperatura deve ser >= 0 (T={temperature})")
    if temperature == 0:
        p = (e == e.min()).astype(float)
    elif math.isinf(temperature):
        p = np.ones_like(e)
    else:
        p = np.exp(-(e - e.min()) / temperature)
    p = p / p.sum()
    # soma exatamente 1 dentro da tolerância de check_weights
    p[-1] = 1.0 - p[:-1].sum()
    return np.clip(p, 0.0, 1.0)
