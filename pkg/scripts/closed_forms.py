#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
closed_forms.py
Densidades de dois pontos com forma fechada conhecida.

  (orthogonal, 4, 2)   K(2√(ab)/(a+b)) / (π(a+b)),  a = √(t1 t2), b = √((1-t1)(1-t2))
  (unitary, 4, 2)      12 t1 t2                 | 12 (1-t1)(1-t2)
  (unitary, 6, 2)      80 t1 t2 S31(t1,t2)      | 80 (1-t1)³ (1-t2)³
  (orthogonal, 12, 3)  72/(7π) √(t1 t2) S(t1,t2) | 72/(7π) 16 (1-t1)^(7/2) (1-t2)^(7/2)

Ramo da esquerda para t1 + t2 < 1, da direita para t1 + t2 > 1.
"""

from __future__ import annotations

import math
from typing import Callable, Dict, Optional, Tuple

from analytic import METHOD_CLOSED_FORM, DensityValue, check_open_unit, on_line
from common import SingularityError
from sampling import EnsembleKind
from special_fns import elliptic_k_complement

ClosedForm = Callable[[float, float], DensityValue]


def closed_form_P42(t1: float, t2: float) -> DensityValue:
    check_open_unit(t1=t1, t2=t2)
    ts = t1 + t2 - 1.0
    if on_line(ts):
        raise SingularityError("P42 diverge (log) sobre a linha t1 + t2 = 1")
    a = math.sqrt(t1 * t2)
    b = math.sqrt((1 - t1) * (1 - t2))
    # k' = |a-b|/(a+b) e a² - b² = t_s
    kp = abs(ts) / (a + b) ** 2
    return DensityValue(elliptic_k_complement(kp) / (math.pi * (a + b)), METHOD_CLOSED_FORM)


def closed_form_unitary_42(t1: float, t2: float) -> DensityValue:
    check_open_unit(t1=t1, t2=t2)
    if t1 + t2 < 1:
        v = 12.0 * t1 * t2
    else:
        v = 12.0 * (1 - t1) * (1 - t2)
    return DensityValue(v, METHOD_CLOSED_FORM)


def s31(t1: float, t2: float) -> float:
    return (
        t1 * t2 * (t1 * t2 + 9)
        + 3 * t1 ** 2 * (1 - t2)
        + 3 * t2 ** 2 * (1 - t1)
        - 6 * (t1 + t2)
        + 3
    )


def closed_form_unitary_62(t1: float, t2: float) -> DensityValue:
    check_open_unit(t1=t1, t2=t2)
    if t1 + t2 < 1:
        v = 80.0 * t1 * t2 * s31(t1, t2)
    else:
        v = 80.0 * (1 - t1) ** 3 * (1 - t2) ** 3
    return DensityValue(max(v, 0.0), METHOD_CLOSED_FORM)


# coeficientes de t1^i t2^j
S12_3 = {
    (3, 3): 16, (2, 3): -56, (1, 3): 70, (0, 3): -35,
    (3, 2): -56, (2, 2): 196, (1, 2): -245, (0, 2): 105,
    (3, 1): 70, (2, 1): -245, (1, 1): 280, (0, 1): -105,
    (3, 0): -35, (2, 0): 105, (1, 0): -105, (0, 0): 35,
}


def s12_3(t1: float, t2: float) -> float:
    return float(sum(c * t1 ** i * t2 ** j for (i, j), c in S12_3.items()))


def closed_form_orthogonal_12_3(t1: float, t2: float) -> DensityValue:
    check_open_unit(t1=t1, t2=t2)
    pref = 72.0 / (7.0 * math.pi)
    if t1 + t2 < 1:
        v = pref * math.sqrt(t1 * t2) * s12_3(t1, t2)
    else:
        v = pref * 16.0 * ((1 - t1) * (1 - t2)) ** 3.5
    return DensityValue(max(v, 0.0), METHOD_CLOSED_FORM)


CLOSED_FORMS: Dict[Tuple[EnsembleKind, int, int], ClosedForm] = {
    (EnsembleKind.ORTHOGONAL, 4, 2): closed_form_P42,
    (EnsembleKind.UNITARY, 4, 2): closed_form_unitary_42,
    (EnsembleKind.UNITARY, 6, 2): closed_form_unitary_62,
    (EnsembleKind.ORTHOGONAL, 12, 3): closed_form_orthogonal_12_3,
}


def closed_form_for(ensemble, N: int, K: int) -> Optional[ClosedForm]:
    return CLOSED_FORMS.get((EnsembleKind.parse(ensemble), N, K))
