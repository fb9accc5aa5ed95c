import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mimo_bands.array_geometry import coherence, dirichlet_coherence, ula_matrix, ula_response

angles = st.floats(-math.pi / 2, math.pi / 2, allow_nan=False)
sizes = st.integers(1, 512)


def direct_sum_coherence(a1, a2, n):
    # oracle: sum the geometric series term by term
    u = math.sin(a1) - math.sin(a2)
    acc = sum(complex(math.cos(math.pi * k * u), math.sin(math.pi * k * u)) for k in range(n))
    return abs(acc) / n


def test_broadside_response():
    v = ula_response(0.0, 4).elements
    np.testing.assert_allclose(v, 0.5 * np.ones(4), atol=1e-15)


def test_endfire_two_elements():
    v = ula_response(math.pi / 2, 2).elements
    np.testing.assert_allclose(v, np.array([1, -1]) / math.sqrt(2), atol=1e-15)


def test_unit_norm_example():
    assert abs(np.linalg.norm(ula_response(0.3, 64).elements) - 1.0) < 1e-12


def test_rejects_zero_antennas():
    with pytest.raises(ValueError):
        ula_response(0.1, 0)


def test_out_of_range_angle_is_accepted():
    v = ula_response(2.5, 8).elements
    assert abs(np.linalg.norm(v) - 1) < 1e-12


def test_ula_matrix_matches_columns():
    a = ula_matrix([0.1, -0.4], 8)
    np.testing.assert_allclose(a[:, 1], ula_response(-0.4, 8).elements)


def test_dirichlet_zero():
    n = 32
    oracle = direct_sum_coherence(math.asin(0.0), math.asin(2.0 / n), n)
    assert oracle < 1e-12
    assert coherence(math.asin(0.0), math.asin(2.0 / n), n) < 1e-12


def test_coherence_decays_with_size():
    assert direct_sum_coherence(0.1, 0.7, 1024) < direct_sum_coherence(0.1, 0.7, 16)
    assert coherence(0.1, 0.7, 1024) < coherence(0.1, 0.7, 16)


@given(angles, sizes)
def test_unit_norm(phi, n):
    assert abs(np.linalg.norm(ula_response(phi, n).elements) - 1.0) < 1e-12


@given(angles, sizes)
def test_self_coherence_is_one(phi, n):
    assert abs(coherence(phi, phi, n) - 1.0) < 1e-12


@given(angles, angles, sizes)
def test_symmetric(a1, a2, n):
    assert coherence(a1, a2, n) == coherence(a2, a1, n)


@settings(max_examples=200)
@given(angles, angles, st.integers(1, 256))
def test_closed_form_agrees_with_direct_sum(a1, a2, n):
    assert abs(dirichlet_coherence(a1, a2, n) - direct_sum_coherence(a1, a2, n)) < 1e-10
    assert abs(coherence(a1, a2, n) - direct_sum_coherence(a1, a2, n)) < 1e-10
