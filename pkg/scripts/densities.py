#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
densities.py
Escolhe o avaliador de dois pontos e tabula grades.

Ordem: forma fechada (se houver) → resíduos (se a paridade permitir e |t_s| >= eps_ts)
→ quadratura.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, Sequence, Union

import numpy as np
import pandas as pd

from analytic import DensityValue, twopoint_quadrature
from closed_forms import closed_form_for
from common import DEFAULT_EPS_TS, DEFAULT_QUAD_TOL, SingularityError, UnsupportedDimensionError, log
from residues import twopoint_residue
from sampling import EnsembleKind, ProjectionConfig

METHOD_SINGULAR = "singular"
GRID_COLUMNS = ["t1", "t2", "value", "method", "est_error"]


def density_auto(ensemble, N: int, K: int, t1: float, t2: float,
                 eps_ts: float = DEFAULT_EPS_TS, tol: float = DEFAULT_QUAD_TOL,
                 verbose: bool = False) -> DensityValue:
    ensemble = EnsembleKind.parse(ensemble)
    closed = closed_form_for(ensemble, N, K)
    if closed is not None:
        return closed(t1, t2)
    if abs(t1 + t2 - 1.0) >= eps_ts:
        try:
            return twopoint_residue(ensemble, N, K, t1, t2, eps_ts=eps_ts)
        except UnsupportedDimensionError:
            pass
    return twopoint_quadrature(ensemble, N, K, t1, t2, eps_ts=eps_ts, tol=tol, verbose=verbose)


def grid_points(grid: Union[int, Sequence[float]]) -> np.ndarray:
    """Inteiro G → pontos médios (i + 1/2)/G; sequência → usada como está."""
    if isinstance(grid, (int, np.integer)):
        if grid < 1:
            raise ValueError(f"grade deve ter ao menos 1 ponto (grid={grid})")
        return (np.arange(grid) + 0.5) / grid
    pts = np.asarray(list(grid), dtype=float)
    if pts.ndim != 1 or pts.size == 0:
        raise ValueError("grade vazia")
    return pts


def density_grid(ensemble, N: int, K: int, grid: Union[int, Iterable[float]],
                 threads: int = 1, eps_ts: float = DEFAULT_EPS_TS, tol: float = DEFAULT_QUAD_TOL,
                 verbose: bool = False) -> pd.DataFrame:
    ensemble = EnsembleKind.parse(ensemble)
    ProjectionConfig(N, K, 2).require_analytic(ensemble)
    ts = grid_points(grid)
    pairs = [(a, b) for a in ts for b in ts]

    def _eval(pair):
        t1, t2 = pair
        try:
            d = density_auto(ensemble, N, K, t1, t2, eps_ts=eps_ts, tol=tol)
            return (t1, t2, d.value, d.method, d.est_error)
        except SingularityError:
            return (t1, t2, np.inf, METHOD_SINGULAR, np.inf)

    log(f"➡️ Grade {ensemble.value} N={N} K={K}: {len(pairs)} pontos, {threads} thread(s)", verbose)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        rows = list(pool.map(_eval, pairs))
    df = pd.DataFrame(rows, columns=GRID_COLUMNS)
    log(f"✅ Grade pronta: métodos {sorted(df['method'].unique())}", verbose)
    return df
