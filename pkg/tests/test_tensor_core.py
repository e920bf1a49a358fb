import math

import numpy as np
import pytest

from core import tensor_core
from core.errors import DegeneracyError, DomainError, IllConditionedError, NumericalError
from core.models import ChartMetricField, OneFormField, TangentPlane


def round_sphere_padded() -> ChartMetricField:
    # unit 2-sphere in (φ, θ) times a flat Euclidean plane
    return ChartMetricField(name="sphere_x_plane",
                            components=lambda p: np.diag([1.0, math.sin(p[0]) ** 2, 1.0, 1.0]))


def test_flat_metric_is_neutral():
    field = tensor_core.flat_metric_field()
    assert tensor_core.signature(field(np.zeros(4))) == (2, 2, 0)
    assert tensor_core.is_neutral(field, [1.0, -2.0, 3.0, 0.5])


def test_signature_counts_zero_eigenvalues():
    assert tensor_core.signature(np.diag([0.0, 1.0, -1.0])) == (1, 1, 1)
    assert tensor_core.signature(np.diag([2.0, 3.0, 1.0, 1.0])) == (4, 0, 0)


def test_null_cone_vectors(rng):
    field = tensor_core.flat_metric_field()
    for t, s in rng.uniform(0, 2 * math.pi, size=(200, 2)):
        v = tensor_core.null_cone_vector(t, s)
        assert abs(tensor_core.metric_value(field, np.zeros(4), v, v)) <= 1e-12


def test_metric_field_rejects_bad_matrices():
    lopsided = ChartMetricField(name="lopsided", components=lambda p: np.array([[1.0, 1.0], [0.0, 1.0]]), dim=2)
    with pytest.raises(DomainError):
        lopsided([0.0, 0.0])
    wrong_shape = ChartMetricField(name="wrong", components=lambda p: np.eye(3))
    with pytest.raises(DomainError):
        wrong_shape(np.zeros(4))
    with pytest.raises(DomainError):
        tensor_core.flat_metric_field()([0.0, math.nan, 0.0, 0.0])


def test_christoffel_of_round_sphere():
    gamma = tensor_core.christoffel(round_sphere_padded(), [0.7, 0.3, 0.0, 0.0], h=1e-4)
    assert gamma[0, 1, 1] == pytest.approx(-math.sin(0.7) * math.cos(0.7), abs=1e-6)
    assert gamma[1, 0, 1] == pytest.approx(1.0 / math.tan(0.7), abs=1e-6)
    assert gamma[1, 1, 0] == pytest.approx(gamma[1, 0, 1], abs=1e-12)
    assert np.max(np.abs(gamma[2:])) == 0.0


def test_ricci_of_round_sphere_is_the_metric():
    p = [0.9, 1.2, 0.0, 0.0]
    ric = tensor_core.ricci(round_sphere_padded(), p)
    expected = np.diag([1.0, math.sin(0.9) ** 2, 0.0, 0.0])
    assert np.max(np.abs(ric - expected)) <= 1e-5
    assert tensor_core.scalar_curvature(round_sphere_padded(), p) == pytest.approx(2.0, abs=1e-5)


def test_flat_curvature_vanishes():
    assert np.max(np.abs(tensor_core.ricci(tensor_core.flat_metric_field(), [0.1, 0.2, 0.3, 0.4]))) == 0.0


def test_singular_metric_has_no_inverse():
    field = ChartMetricField(name="degenerate", components=lambda p: np.diag([0.0, 1.0, 1.0, 1.0]))
    with pytest.raises(DegeneracyError):
        tensor_core.christoffel(field, np.zeros(4))


def test_jacobian_rejects_non_finite_values():
    with pytest.raises(NumericalError):
        tensor_core.jacobian(lambda p: np.full(2, np.nan), [0.0, 1.0])


def test_pullback_by_identity():
    pulled = tensor_core.pullback_metric(lambda p: p, tensor_core.flat_metric_field(), [0.3, 0.1, -0.2, 2.0])
    assert np.max(np.abs(pulled - tensor_core.FLAT_METRIC)) <= 1e-9


def test_pullback_is_functorial(rng):
    def f(p):
        return p + 0.1 * np.sin(p[::-1])

    def g(p):
        return np.array([p[0] + 0.2 * p[1] ** 2, p[1], p[2] + 0.1 * p[3] * p[0], p[3]])

    flat = tensor_core.flat_metric_field()
    via_g = ChartMetricField(name="pulled_by_g", components=lambda q: tensor_core.pullback_metric(g, flat, q))
    for p in rng.uniform(-1, 1, size=(10, 4)):
        direct = tensor_core.pullback_metric(lambda x: g(f(x)), flat, p)
        composed = tensor_core.pullback_metric(f, via_g, p)
        assert np.max(np.abs(direct - composed)) <= 1e-6


def test_contact_form_defect_in_three_dimensions():
    # dz + x dy: ω∧dω = dx∧dy∧dz
    omega = OneFormField(name="standard_contact", components=lambda p: np.array([0.0, p[0], 1.0]))
    assert tensor_core.frobenius_defect(omega, [0.4, -1.0, 2.0]) == pytest.approx(1.0, abs=1e-8)


def test_closed_forms_are_integrable():
    exact = OneFormField(name="dx", components=lambda p: np.array([1.0, 0.0, 0.0, 0.0]), dim=4)
    assert tensor_core.frobenius_defect(exact, [0.1, 0.2, 0.3, 0.4]) == 0.0
    pair = OneFormField(name="dt1_minus_dt2", components=lambda p: np.array([0.0, 1.0, -1.0]))
    assert tensor_core.frobenius_defect(pair, [0.0, 0.5, 1.5]) == 0.0


def test_vanishing_form_is_ill_conditioned():
    zero = OneFormField(name="zero", components=lambda p: np.zeros(3))
    with pytest.raises(IllConditionedError):
        tensor_core.frobenius_defect(zero, [0.0, 0.0, 0.0])


ALPHA = ((1.0, 0.0, 1.0, 0.0), (0.0, 1.0, 0.0, 1.0))
BETA = ((1.0, 0.0, 1.0, 0.0), (0.0, 1.0, 0.0, -1.0))
SPACELIKE = ((1.0, 0.0, 0.0, 0.0), (0.0, 1.0, 0.0, 0.0))


@pytest.mark.parametrize("span, label", [(ALPHA, "alpha"), (BETA, "beta"), (SPACELIKE, "not_totally_null")])
def test_classify_null_plane(span, label):
    plane = TangentPlane(base=np.zeros(4), span=span)
    assert tensor_core.classify_null_plane(plane, tensor_core.flat_metric_field()) == label


@pytest.mark.parametrize("span, label", [(ALPHA, "alpha"), (BETA, "beta")])
def test_classification_ignores_the_spanning_vectors(span, label, rng):
    u, v = (np.array(s) for s in span)
    for _ in range(20):
        m = rng.normal(size=(2, 2))
        if abs(np.linalg.det(m)) < 0.1:
            continue
        plane = TangentPlane(base=np.zeros(4), span=(m[0, 0] * u + m[0, 1] * v, m[1, 0] * u + m[1, 1] * v))
        assert tensor_core.classify_null_plane(plane, tensor_core.flat_metric_field()) == label


def test_dependent_span_is_rejected():
    with pytest.raises(ValueError):
        TangentPlane(base=np.zeros(4), span=((1.0, 0.0, 1.0, 0.0), (2.0, 0.0, 2.0, 0.0)))
