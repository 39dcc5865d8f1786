import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_psi, smooth_random_psi
from magsob.fields import FieldSpec, ScalarField, gauge_transform
from magsob.lattice import (DomainMismatchError, LatticeDomain, WaveFunction,
                            apply_operator, build_links, inner,
                            load_wavefunction, lp_norm, operator_matrix,
                            quadratic_form, rayleigh_quotient,
                            save_wavefunction, zero_links)


def unit_square(n):
    return LatticeDomain.rectangle((0, 1), (0, 1), n)


def sine_mode(d):
    return WaveFunction.from_function(
        d, lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y))


# --- domains -----------------------------------------------------------------

def test_domain_spacing_and_mask():
    d = LatticeDomain.rectangle((0, 2), (-1, 1), 21, 11)
    assert d.dx == pytest.approx(0.1) and d.dy == pytest.approx(0.2)
    assert not d.mask[0].any() and not d.mask[:, -1].any()
    assert d.n_interior == 19 * 9


def test_disk_mask_strictly_inside():
    d = LatticeDomain.disk((0.5, -0.5), 1.0, 41)
    X, Y = d.interior_points()
    assert np.all((X - 0.5) ** 2 + (Y + 0.5) ** 2 < 1.0)
    assert d.kind == "disk"
    assert d.boundary_distance((0.5, -0.5)) == pytest.approx(1.0)


def test_domain_errors():
    with pytest.raises(ValueError):
        LatticeDomain.rectangle((0, 1), (0, 1), 2)
    with pytest.raises(ValueError):
        LatticeDomain.rectangle((1, 0), (0, 1), 10)


def test_resample_keeps_geometry():
    d = LatticeDomain.square(2.0, 11).resample(0.01)
    assert d.xlim == (-2.0, 2.0) and d.dx <= 0.01


# --- links ---------------------------------------------------------------------

def test_zero_potential_links_are_one():
    d = unit_square(9)
    L = build_links(d, FieldSpec.power(0, 1e-300), 1.0)
    assert np.allclose(L.ux, 1) and np.allclose(L.uy, 1)


def test_power_well_vertical_edge_phase():
    d = LatticeDomain.rectangle((0, 4), (0, 1), 5, 11)   # node column at x = 2
    L = build_links(d, FieldSpec.power(0), 1.0)
    assert np.allclose(L.uy[2], np.exp(-2j * d.dy), atol=1e-15)
    assert np.allclose(L.ux, 1.0)


@pytest.mark.parametrize("spec", [FieldSpec.power(3), FieldSpec.radial_well(),
                                  FieldSpec.param_model(1, 3, 4)])
def test_links_unit_modulus(spec):
    L = build_links(LatticeDomain.square(1.0, 17), spec, 0.03)
    assert np.max(np.abs(np.abs(L.ux) - 1)) < 1e-14
    assert np.max(np.abs(np.abs(L.uy) - 1)) < 1e-14


def test_links_exact_line_integral():
    # the degree-3 potential of the vanishing field is integrated exactly
    spec = FieldSpec.radial_vanishing(1.3, 0.7, (0.1, 0.2))
    d = LatticeDomain.rectangle((0, 1), (0, 1), 3)
    L = build_links(d, spec, 1.0)
    from scipy.integrate import quad
    from magsob.fields import eval_potential
    ref, _ = quad(lambda t: eval_potential(spec, (t, 0.5))[0], 0.0, 0.5,
                  epsabs=1e-14)
    assert np.angle(L.ux[0, 1]) == pytest.approx(-ref, abs=1e-14)


def test_build_links_rejects_bad_h():
    with pytest.raises(ValueError):
        build_links(unit_square(5), FieldSpec.power(1), 0.0)


# --- quadratic form and operator ------------------------------------------------

def test_zero_state():
    d = unit_square(9)
    L = build_links(d, FieldSpec.power(1), 0.5)
    z = WaveFunction.zeros(d)
    assert quadratic_form(L, z) == 0.0
    assert np.all(apply_operator(L, z).values == 0)


def test_sine_mode_form():
    d = unit_square(128)
    psi = sine_mode(d)
    q = quadratic_form(zero_links(d, 1.0), psi)
    assert q == pytest.approx(np.pi ** 2 / 2, rel=1e-2)
    assert rayleigh_quotient(zero_links(d, 1.0), psi) == pytest.approx(
        2 * np.pi ** 2, rel=1e-2)


def test_form_operator_consistency(small_square):
    rng = np.random.default_rng(3)
    L = build_links(small_square, FieldSpec.radial_well(1.0, (0.1, 0.0)), 0.2)
    for _ in range(5):
        psi = random_psi(small_square, rng)
        q = quadratic_form(L, psi)
        assert inner(psi, apply_operator(L, psi)).real == pytest.approx(q, rel=1e-12)
        assert abs(inner(psi, apply_operator(L, psi)).imag) <= 1e-12 * q


def test_hermiticity_bruteforce_8x8():
    d = LatticeDomain.rectangle((0, 1), (0, 1), 10)   # 8 x 8 interior
    L = build_links(d, FieldSpec.power(2, 3.0), 0.1)
    M = operator_matrix(L).toarray()
    assert np.max(np.abs(M - M.conj().T)) <= 1e-12 * np.max(np.abs(M))
    rng = np.random.default_rng(0)
    for _ in range(20):
        a, b = random_psi(d, rng), random_psi(d, rng)
        lhs = inner(apply_operator(L, a), b)
        rhs = inner(a, apply_operator(L, b))
        scale = np.sqrt(inner(a, a).real * inner(b, b).real)
        assert abs(lhs - rhs) <= 1e-12 * scale * np.max(np.abs(M))
    # matrix agrees with matrix-free application
    psi = random_psi(d, rng)
    assert np.allclose(M @ psi.interior(), apply_operator(L, psi).interior(),
                       rtol=0, atol=1e-10)


@pytest.mark.parametrize("spec", [FieldSpec.constant(2.0), FieldSpec.power(1),
                                  FieldSpec.radial_vanishing(1.0, 0.6)])
def test_exact_gauge_invariance(spec):
    d = LatticeDomain.square(1.0, 41)
    h = 0.07
    phi_fn = lambda x, y: 0.3 * x ** 2 - 0.7 * x * y + 0.2 * y ** 3 + x
    psi = smooth_random_psi(d, 7)
    L = build_links(d, spec, h)
    Lg = build_links(d, spec, h, gauge=phi_fn)
    phi = ScalarField.from_function(d, phi_fn)
    q0 = quadratic_form(L, psi)
    q1 = quadratic_form(Lg, gauge_transform(psi, ScalarField(d, -phi.values), h))
    assert q1 == pytest.approx(q0, rel=1e-12)


def test_diamagnetic_inequality_exact():
    d = LatticeDomain.square(1.0, 21)
    L = build_links(d, FieldSpec.radial_well(2.0), 0.05)
    L0 = zero_links(d, 0.05)
    rng = np.random.default_rng(11)
    for _ in range(200):
        psi = random_psi(d, rng)
        assert quadratic_form(L, psi) >= quadratic_form(L0, psi.abs())


def test_magnetic_lower_bound_constant_field():
    d = LatticeDomain.square(1.0, 128)
    h, b0 = 0.05, 1.0
    L = build_links(d, FieldSpec.constant(b0), h)
    for s in (0.15, 0.3):
        psi = WaveFunction.from_function(
            d, lambda x, y: np.exp(-(x * x + y * y) / (2 * s * s)) * (1 + 0.5j * x))
        rhs = h * b0 * lp_norm(psi, 2) ** 2
        assert quadratic_form(L, psi) >= 0.95 * rhs


def test_form_converges_second_order():
    # Gaussian in symmetric gauge: Q = h^2 pi + b^2 pi s^4 / 4 (real psi)
    h, b, s = 0.3, 2.0, 0.2
    exact = h * h * np.pi + b * b * np.pi * s ** 4 / 4
    errs = []
    for n in (41, 81, 161):
        d = LatticeDomain.square(1.0, n)
        psi = WaveFunction.from_function(
            d, lambda x, y: np.exp(-(x * x + y * y) / (2 * s * s)))
        errs.append(abs(quadratic_form(build_links(d, FieldSpec.constant(b), h),
                                       psi) - exact))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(orders >= 1.8), orders


# --- norms -----------------------------------------------------------------------

def test_lp_norm_constant_state():
    d = LatticeDomain.square(1.0, 21)
    psi = WaveFunction(d, np.full(d.shape, 2.0))
    W = d.n_interior * d.cell_area
    for p in (1, 2, 3.5, 6):
        assert lp_norm(psi, p) == pytest.approx(2.0 * W ** (1 / p), rel=1e-14)


def test_lp_norm_p2_is_weighted_euclidean():
    d = LatticeDomain.square(1.0, 15)
    psi = random_psi(d, np.random.default_rng(0))
    assert lp_norm(psi, 2) == pytest.approx(np.sqrt(inner(psi, psi).real), rel=1e-14)
    with pytest.raises(ValueError):
        lp_norm(psi, 0.5)


@settings(max_examples=30, deadline=None)
@given(p=st.floats(1.0, 8.0), seed=st.integers(0, 10 ** 6))
def test_lp_normalization_projective(p, seed):
    d = LatticeDomain.square(1.0, 12)
    psi = random_psi(d, np.random.default_rng(seed))
    assert lp_norm(psi / lp_norm(psi, p), p) == pytest.approx(1.0, abs=1e-14)


def test_domain_mismatch():
    a, b = LatticeDomain.square(1.0, 9), LatticeDomain.square(1.0, 11)
    with pytest.raises(DomainMismatchError):
        quadratic_form(zero_links(a, 1.0), WaveFunction.zeros(b))
    with pytest.raises(DomainMismatchError):
        apply_operator(zero_links(a, 1.0), WaveFunction.zeros(b))


# --- binary files ------------------------------------------------------------------

def test_wavefunction_roundtrip(tmp_path):
    d = LatticeDomain.disk((0, 0), 1.0, 23)
    psi = random_psi(d, np.random.default_rng(5))
    f = tmp_path / "psi.bin"
    save_wavefunction(f, psi)
    raw = f.read_bytes()
    nx, ny = np.frombuffer(raw[:16], "<i8")
    assert (nx, ny) == (23, 23)
    assert len(raw) == 56 + 16 * d.n_interior
    back = load_wavefunction(f, d)
    assert np.array_equal(back.values, psi.values)
    with pytest.raises(DomainMismatchError):
        load_wavefunction(f, LatticeDomain.square(1.0, 23))
