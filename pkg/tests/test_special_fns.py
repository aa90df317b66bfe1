
import math

import numpy as np
import pytest
from scipy import integrate

from common import BoundaryError, DomainError, SingularityError
from special_fns import (
    GammaRatio,
    beta_density,
    elliptic_k,
    elliptic_k_complement,
    gamma_ratio,
    i_mk,
    i_mk_generalized,
    log_gamma,
    lorentzian_1d,
    lorentzian_2d,
)


def _line_integral(f):
    """∫ f(s) ds na reta real, parte real e imaginária separadas."""
    re, _ = integrate.quad(lambda s: f(s).real, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12, limit=500)
    im, _ = integrate.quad(lambda s: f(s).imag, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12, limit=500)
    return complex(re, im)


# ---------- gamma ----------

@pytest.mark.parametrize("x", [0.5, 1.0, 1.5, 2.5, 6.0, 10.25, 33.0, 50.0])
def test_log_gamma_matches_lgamma(x):
    assert math.exp(log_gamma(x) - math.lgamma(x)) == pytest.approx(1.0, abs=2e-13)


def test_log_gamma_examples():
    assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-14)
    assert log_gamma(0.5) == pytest.approx(0.5723649429247001, abs=1e-13)
    assert log_gamma(6.0) == pytest.approx(math.log(120.0), abs=1e-13)
    assert log_gamma(0.1) == pytest.approx(math.lgamma(0.1), abs=1e-12)
    with pytest.raises(DomainError):
        log_gamma(0.0)
    with pytest.raises(DomainError):
        log_gamma(-1.5)


def test_gamma_ratio():
    assert GammaRatio((5.0,), (3.0,)).value() == pytest.approx(12.0, rel=1e-13)
    assert gamma_ratio([0.5, 0.5]) == pytest.approx(math.pi, rel=1e-13)
    # N grande sem overflow
    assert GammaRatio((200.0,), (199.0,)).value() == pytest.approx(199.0, rel=1e-11)
    with pytest.raises(DomainError):
        GammaRatio((0.0,))


# ---------- beta ----------

def test_beta_density_values_and_edges():
    assert beta_density(0.3, 1.0, 1.0) == pytest.approx(1.0)
    assert beta_density(0.5, 2.0, 2.0) == pytest.approx(1.5)
    assert beta_density(1.5, 2.0, 2.0) == 0.0
    assert beta_density(-0.1, 0.5, 0.5) == 0.0
    assert beta_density(0.0, 1.0, 3.0) == pytest.approx(3.0)
    assert beta_density(1.0, 2.0, 2.0) == 0.0
    with pytest.raises(BoundaryError):
        beta_density(0.0, 0.5, 1.5)
    with pytest.raises(BoundaryError):
        beta_density(1.0, 2.0, 0.5)


# ---------- I_mk ----------

def test_i_mk_examples():
    assert i_mk(1, 1, 0.5, 0.5) == pytest.approx(1.0, rel=1e-13)
    assert i_mk(2, 2, 0.5, 0.5) == pytest.approx(1.5, rel=1e-13)
    assert i_mk(1, 1, 0.25, 0.5) == pytest.approx(4.0 / 3.0, rel=1e-13)


@pytest.mark.parametrize("m,k,a,b", [(1, 1, 0.25, 0.5), (2, 1, 0.3, 0.6), (1.5, 1.5, 0.2, 0.7), (2.5, 0.5, 0.4, 0.9)])
def test_i_mk_matches_defining_integral(m, k, a, b):
    val = _line_integral(lambda s: (1 + 1j * a * s) ** (-m) * (1 - 1j * b * s) ** (-k))
    assert (m + k - 1) / (2 * math.pi) * val.real == pytest.approx(i_mk(m, k, a, b), abs=1e-10)
    assert abs(val.imag) < 1e-10


@pytest.mark.parametrize("m,k", [(1, 1), (2, 2), (1.5, 2.5), (3, 1), (0.5, 3.5)])
def test_i_mk_is_beta_density(m, k):
    total, _ = integrate.quad(lambda t: i_mk(m, k, t, 1 - t), 0, 1, epsabs=1e-13, limit=200)
    assert total == pytest.approx(1.0, abs=1e-10)


def test_i_mk_symmetry_and_domain():
    assert i_mk(2.5, 1.5, 0.3, 0.8) == pytest.approx(i_mk(1.5, 2.5, 0.8, 0.3), rel=1e-13)
    with pytest.raises(DomainError):
        i_mk(0.5, 0.5, 0.3, 0.3)       # m + k < 2
    with pytest.raises(DomainError):
        i_mk(1.2, 1, 0.3, 0.3)         # não semi-inteiro
    with pytest.raises(DomainError):
        i_mk(1, 1, 1.0, 0.3)


def test_i_mk_generalized():
    assert i_mk_generalized(2, 2, 1, 0.3, 1, 0.6) == pytest.approx(i_mk(2, 2, 0.3, 0.6), rel=1e-14)
    assert i_mk_generalized(1, 1, 2, 0.5, 2, 0.5) == pytest.approx(0.5, rel=1e-13)
    m, k, a, b, alpha, beta = 2, 1, 0.3, 0.6, 1 + 1j, 1
    val = _line_integral(lambda s: (alpha + 1j * a * s) ** (-m) * (beta - 1j * b * s) ** (-k))
    expected = (m + k - 1) / (2 * math.pi) * val
    got = i_mk_generalized(m, k, alpha, a, beta, b)
    assert abs(got - expected) < 1e-10
    with pytest.raises(DomainError):
        i_mk_generalized(1, 1, 0.5, 0.5, 1, 0.5)


# ---------- elíptica ----------

@pytest.mark.parametrize("k", [0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99])
def test_elliptic_k_matches_quadrature(k):
    ref, _ = integrate.quad(lambda p: 1 / math.sqrt(1 - k * k * math.sin(p) ** 2), 0, math.pi / 2,
                            epsabs=1e-15, epsrel=1e-14)
    assert elliptic_k(k) == pytest.approx(ref, rel=1e-12)


def test_elliptic_k_edges():
    assert elliptic_k(0.0) == pytest.approx(math.pi / 2, rel=1e-15)
    with pytest.raises(SingularityError):
        elliptic_k(1.0)
    with pytest.raises(DomainError):
        elliptic_k(1.5)
    # K ~ ln(4/k') perto de k = 1
    kp = 1e-8
    assert elliptic_k_complement(kp) == pytest.approx(math.log(4 / kp), rel=1e-6)


# ---------- Lorentzianas ----------

def test_lorentzian_examples():
    assert lorentzian_1d(1, 1) == pytest.approx(0.5, rel=1e-13)
    assert lorentzian_1d(4, 1) == pytest.approx(0.25, rel=1e-13)
    assert lorentzian_1d(1, 3) == pytest.approx(3 / 16, rel=1e-13)
    assert lorentzian_2d(1, 2) == pytest.approx(1 / (4 * math.pi), rel=1e-14)
    assert lorentzian_2d(0.25, 4) == pytest.approx(1 / (3 * math.pi), rel=1e-14)
    assert lorentzian_2d(2, 3) == pytest.approx(1 / (16 * math.pi), rel=1e-14)
    with pytest.raises(SingularityError):
        lorentzian_2d(1, 1)
    with pytest.raises(DomainError):
        lorentzian_1d(0, 2)


@pytest.mark.parametrize("c", [0.25, 1.0, 4.0])
@pytest.mark.parametrize("m", [1.5, 2.0, 3.0, 6.0])
def test_lorentzians_match_quadrature(c, m):
    one, _ = integrate.quad(lambda x: (1 + c * x * x) ** (-m), -np.inf, np.inf, epsabs=1e-14, epsrel=1e-13)
    assert lorentzian_1d(c, m) == pytest.approx(one / (2 * math.pi), rel=1e-10)
    radial, _ = integrate.quad(lambda r: r * (1 + c * r * r) ** (-m), 0, np.inf, epsabs=1e-14, epsrel=1e-13)
    assert lorentzian_2d(c, m) == pytest.approx(2 * math.pi * radial / (4 * math.pi ** 2), rel=1e-10)
