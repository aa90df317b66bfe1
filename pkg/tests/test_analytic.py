
import math

import numpy as np
import pytest
from scipy import integrate

from analytic import (
    DensityValue,
    TwoPointIntegrand,
    onepoint_cdf,
    onepoint_density,
    onepoint_quadrature,
    twopoint_quadrature,
    z_zero,
)
from closed_forms import (
    closed_form_P42,
    closed_form_for,
    closed_form_orthogonal_12_3,
    closed_form_unitary_42,
    closed_form_unitary_62,
)
from common import (
    BoundaryError,
    DomainError,
    InvalidDimensionError,
    SingularityError,
    UnsupportedDimensionError,
)
from densities import METHOD_SINGULAR, density_auto, density_grid
from sampling import EnsembleKind
from special_fns import lorentzian_1d, lorentzian_2d

O, U = EnsembleKind.ORTHOGONAL, EnsembleKind.UNITARY
INTERIOR = [(0.1, 0.2), (0.2, 0.3), (0.15, 0.6), (0.3, 0.4), (0.45, 0.35),
            (0.7, 0.8), (0.6, 0.55), (0.9, 0.3), (0.8, 0.85), (0.35, 0.95)]


def _value(f, t1, t2):
    # a quadratura externa pode cair exatamente sobre t1 + t2 = 1 (conjunto de medida nula)
    try:
        return f(t1, t2).value
    except SingularityError:
        return 0.0


# ---------- DensityValue ----------

def test_density_value_invariants():
    assert float(DensityValue(1.5, "closed_form")) == 1.5
    with pytest.raises(ValueError):
        DensityValue(-1.0, "quadrature")
    with pytest.raises(ValueError):
        DensityValue(1.0, "magic")


# ---------- um ponto ----------

@pytest.mark.parametrize("t", [0.05, 0.3, 0.5, 0.99])
def test_onepoint_orthogonal_42_is_flat(t):
    assert onepoint_density(O, 4, 2, t).value == pytest.approx(1.0, rel=1e-13)


def test_onepoint_examples():
    assert onepoint_density(U, 4, 2, 0.5).value == pytest.approx(1.5, rel=1e-13)
    # 𝒫_62(t) = 20 t (1-t)^3
    assert onepoint_density(U, 6, 2, 0.5).value == pytest.approx(20 * 0.5 * 0.5 ** 3, rel=1e-13)
    assert onepoint_density(U, 6, 2, 0.2).value == pytest.approx(20 * 0.2 * 0.8 ** 3, rel=1e-13)


def test_onepoint_edges():
    assert onepoint_density(U, 4, 2, 0.0).value == 0.0
    assert onepoint_density(U, 4, 2, 1.3).value == 0.0
    with pytest.raises(BoundaryError):
        onepoint_density(O, 4, 1, 0.0)
    with pytest.raises(InvalidDimensionError):
        onepoint_density(O, 4, 4, 0.5)


@pytest.mark.parametrize("ens,N,K", [(O, 4, 2), (O, 6, 3), (O, 5, 1), (U, 4, 2), (U, 6, 2), (U, 8, 3)])
def test_onepoint_normalized(ens, N, K):
    total, _ = integrate.quad(lambda t: onepoint_density(ens, N, K, t).value, 0, 1, epsabs=1e-13, limit=200)
    assert total == pytest.approx(1.0, abs=1e-10)
    assert onepoint_cdf(ens, N, K, 1.0) == pytest.approx(1.0)


@pytest.mark.parametrize("N,K", [(4, 2), (6, 1), (7, 3), (10, 5)])
@pytest.mark.parametrize("t", [0.1, 0.5, 0.8])
def test_onepoint_duality(N, K, t):
    assert onepoint_density(U, N, K, t).value == pytest.approx(onepoint_density(O, 2 * N, 2 * K, t).value, rel=1e-12)


@pytest.mark.parametrize("ens,N,K,t", [(U, 4, 2, 0.3), (U, 5, 1, 0.6), (O, 6, 3, 0.4), (O, 5, 2, 0.7), (O, 4, 1, 0.2)])
def test_onepoint_quadrature_matches_beta(ens, N, K, t):
    q = onepoint_quadrature(ens, N, K, t)
    assert q.method == "quadrature"
    assert q.value == pytest.approx(onepoint_density(ens, N, K, t).value, abs=1e-8)


def test_onepoint_cdf_symmetric():
    assert onepoint_cdf(U, 4, 2, 0.5) == pytest.approx(0.5, abs=1e-14)
    assert onepoint_cdf(O, 6, 3, 0.5) == pytest.approx(0.5, abs=1e-14)


# ---------- integrando ----------

def test_twopoint_integrand_exponents():
    f = TwoPointIntegrand(O, 12, 3, 0.2, 0.3)
    assert (f.m, f.k, f.g) == (4.0, 1.0, 0.5)
    assert f.decay() == pytest.approx(5.5)
    u = TwoPointIntegrand(U, 6, 2, 0.2, 0.8)
    assert (u.m, u.k) == (3.0, 1.0)
    assert u.ts == pytest.approx(0.0)
    s = np.array([-3.0, 0.0, 2.5])
    assert np.real(f.alpha(s)) == pytest.approx([1, 1, 1])
    assert np.real(f.beta(s)) == pytest.approx([1, 1, 1])
    assert f(2.0) == pytest.approx(np.conj(f(-2.0)))


# ---------- quadratura ----------

def test_twopoint_quadrature_unitary_42():
    assert twopoint_quadrature(U, 4, 2, 0.3, 0.4).value == pytest.approx(1.44, abs=1e-8)
    assert twopoint_quadrature(U, 4, 2, 0.7, 0.8).value == pytest.approx(0.72, abs=1e-8)
    # t_s = 0 com decaimento |s|^-2: integrável
    assert twopoint_quadrature(U, 4, 2, 0.5, 0.5).value == pytest.approx(3.0, abs=1e-8)


@pytest.mark.parametrize("t1,t2", INTERIOR)
def test_quadrature_matches_closed_forms(t1, t2):
    for ens, N, K in [(U, 4, 2), (U, 6, 2), (O, 4, 2), (O, 12, 3)]:
        exact = closed_form_for(ens, N, K)(t1, t2).value
        assert twopoint_quadrature(ens, N, K, t1, t2).value == pytest.approx(exact, abs=1e-8)


def test_quadrature_rejects_nonintegrable():
    with pytest.raises(UnsupportedDimensionError):
        twopoint_quadrature(O, 3, 1, 0.2, 0.3)
    with pytest.raises(UnsupportedDimensionError):
        twopoint_quadrature(U, 2, 1, 0.2, 0.3)
    with pytest.raises(DomainError):
        twopoint_quadrature(U, 4, 2, 0.0, 0.3)
    with pytest.raises(SingularityError):
        twopoint_quadrature(O, 4, 2, 0.5, 0.5)
    with pytest.raises(SingularityError):
        twopoint_quadrature(U, 3, 1, 0.4, 0.6)


def test_quadrature_near_line_inflates_error():
    d = twopoint_quadrature(O, 6, 3, 0.5, 0.5004)
    assert d.est_error >= 1e-2 * d.value
    far = twopoint_quadrature(O, 6, 3, 0.2, 0.3)
    assert far.est_error < 1e-6


def test_swap_and_complement_symmetry_quadrature():
    a = twopoint_quadrature(O, 5, 2, 0.2, 0.6).value
    b = twopoint_quadrature(O, 5, 2, 0.6, 0.2).value
    assert a == pytest.approx(b, abs=1e-7)
    c = twopoint_quadrature(O, 5, 3, 0.8, 0.4).value
    assert a == pytest.approx(c, abs=1e-7)
    u = twopoint_quadrature(U, 7, 3, 0.25, 0.5).value
    assert u == pytest.approx(twopoint_quadrature(U, 7, 4, 0.75, 0.5).value, abs=1e-7)


# ---------- formas fechadas ----------

@pytest.mark.parametrize("t1,t2", INTERIOR)
def test_closed_form_symmetries(t1, t2):
    for f in (closed_form_unitary_42, closed_form_unitary_62, closed_form_orthogonal_12_3, closed_form_P42):
        assert f(t1, t2).value == pytest.approx(f(t2, t1).value, abs=1e-10)
    # K = N - K
    assert closed_form_unitary_42(t1, t2).value == pytest.approx(closed_form_unitary_42(1 - t1, 1 - t2).value, abs=1e-10)
    assert closed_form_P42(t1, t2).value == pytest.approx(closed_form_P42(1 - t1, 1 - t2).value, abs=1e-10)


@pytest.mark.parametrize("t1", [0.1, 0.25, 0.5, 0.75, 0.9])
def test_branches_agree_on_line(t1):
    t2 = 1 - t1
    assert 80 * t1 * t2 * (t1 * t2 * (t1 * t2 + 9) + 3 * t1 ** 2 * (1 - t2) + 3 * t2 ** 2 * (1 - t1)
                          - 6 * (t1 + t2) + 3) == pytest.approx(80 * (1 - t1) ** 3 * (1 - t2) ** 3, abs=1e-10)
    lo = closed_form_unitary_62(t1, t2 - 1e-12).value
    hi = closed_form_unitary_62(t1, t2 + 1e-12).value
    assert lo == pytest.approx(hi, abs=1e-9)
    lo = closed_form_orthogonal_12_3(t1, t2 - 1e-12).value
    hi = closed_form_orthogonal_12_3(t1, t2 + 1e-12).value
    assert lo == pytest.approx(hi, abs=1e-9)


@pytest.mark.parametrize("f", [closed_form_unitary_42, closed_form_unitary_62, closed_form_orthogonal_12_3, closed_form_P42])
def test_closed_forms_normalized(f):
    def inner(t1):
        below, _ = integrate.quad(lambda t2: _value(f, t1, t2), 0, 1 - t1, epsabs=1e-12, limit=200)
        above, _ = integrate.quad(lambda t2: _value(f, t1, t2), 1 - t1, 1, epsabs=1e-12, limit=200)
        return below + above

    total, _ = integrate.quad(inner, 0, 1, epsabs=1e-10, limit=200)
    tol = 1e-4 if f is closed_form_P42 else 1e-6
    assert total == pytest.approx(1.0, abs=tol)


@pytest.mark.parametrize("ens,N,K", [(U, 4, 2), (U, 6, 2), (O, 12, 3), (O, 4, 2)])
@pytest.mark.parametrize("t1", [0.1, 0.3, 0.5, 0.7, 0.9])
def test_marginal_is_onepoint(ens, N, K, t1):
    f = closed_form_for(ens, N, K)
    below, _ = integrate.quad(lambda t2: _value(f, t1, t2), 0, 1 - t1, epsabs=1e-12, limit=200)
    above, _ = integrate.quad(lambda t2: _value(f, t1, t2), 1 - t1, 1, epsabs=1e-12, limit=200)
    assert below + above == pytest.approx(onepoint_density(ens, N, K, t1).value, abs=1e-6)


def test_p42_examples():
    assert closed_form_P42(0.5, 0.9).value == pytest.approx(twopoint_quadrature(O, 4, 2, 0.5, 0.9).value, abs=1e-8)
    with pytest.raises(SingularityError):
        closed_form_P42(0.5, 0.5)
    corner = closed_form_P42(0.01, 0.01).value
    assert corner == pytest.approx(0.5, abs=0.01)
    assert corner == pytest.approx(twopoint_quadrature(O, 4, 2, 0.01, 0.01).value, abs=1e-8)
    assert closed_form_P42(1e-6, 1e-6).value == pytest.approx(0.5, abs=1e-4)


def test_p42_grows_towards_line():
    values = [closed_form_P42(0.5, 0.5 - d).value for d in (1e-2, 1e-3, 1e-4)]
    assert values[0] < values[1] < values[2]
    # (O,4,2) passa de 10 dentro da faixa |t_s| < 1e-3; (U,4,2) fica limitada por 12
    assert closed_form_P42(0.001, 0.999 - 5e-4).value > 10
    grid = (np.arange(50) + 0.5) / 50
    assert max(closed_form_unitary_42(a, b).value for a in grid for b in grid) <= 12


@pytest.mark.parametrize("t2", [0.2, 0.5])
def test_steeper_small_t_for_large_dims(t2):
    assert closed_form_orthogonal_12_3(0.01, t2).value > closed_form_unitary_62(0.01, t2).value


# ---------- normalização Z(0) ----------

def test_z_zero():
    assert z_zero(U, 4) == pytest.approx(1 / (3 * math.pi), rel=1e-14)
    assert z_zero(O, 4) == pytest.approx(0.5, rel=1e-12)
    assert z_zero(O, 6) == pytest.approx(3 / 8, rel=1e-12)
    for N in (3, 4, 7, 12):
        assert z_zero(O, N) == pytest.approx(lorentzian_1d(0.25, N / 2), rel=1e-12)
        assert z_zero(U, N) == pytest.approx(lorentzian_2d(0.25, N), rel=1e-12)
        assert z_zero(O, N) == pytest.approx(math.exp(math.lgamma((N - 1) / 2) - math.lgamma(N / 2)) / math.sqrt(math.pi), rel=1e-12)
    with pytest.raises(DomainError):
        z_zero(O, 2)


# ---------- despacho ----------

def test_density_auto_routes():
    assert density_auto(U, 4, 2, 0.3, 0.4).method == "closed_form"
    assert density_auto(O, 12, 3, 0.3, 0.4).method == "closed_form"
    assert density_auto(O, 12, 4, 0.3, 0.4).method == "quadrature"
    assert density_auto(O, 5, 2, 0.3, 0.4).method == "quadrature"
    assert density_auto(O, 8, 3, 0.3, 0.4).method == "residue"
    assert density_auto(U, 5, 2, 0.3, 0.4).method == "residue"
    # perto da linha o resíduo cede à quadratura
    assert density_auto(U, 5, 2, 0.3, 0.7004).method == "quadrature"


def test_density_grid_marks_singular_points():
    df = density_grid(O, 4, 2, 4)
    assert list(df.columns) == ["t1", "t2", "value", "method", "est_error"]
    assert len(df) == 16
    sing = df[df["method"] == METHOD_SINGULAR]
    assert len(sing) == 4
    assert np.all(np.isinf(sing["value"]))
    assert set(df["method"]) == {"closed_form", METHOD_SINGULAR}


def test_density_grid_threads_do_not_change_values():
    a = density_grid(U, 5, 2, 5, threads=1)
    b = density_grid(U, 5, 2, 5, threads=3)
    assert a.equals(b)
    with pytest.raises(InvalidDimensionError):
        density_grid(O, 3, 1, 5)
