"""
Chart-based pseudo-Riemannian calculus in dimension <= 4.

Metric fields are callbacks on chart points (see core.models.ChartMetricField);
connection and curvature come from central finite differences of the components.
Everything here is a pure function of its inputs.
"""
import logging
from typing import Callable
import numpy as np

from core.errors import (
    ConsistencyError, DegeneracyError, DomainError, IllConditionedError, NumericalError,
)
from core.models import ChartMetricField, NullPlaneLabel, OneFormField, TangentPlane, as_point

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8
ZERO_BAND = 1e-10
FD_STEP = 1e-6
CURVATURE_STEP = 1e-3

FLAT_METRIC = np.diag([1.0, 1.0, -1.0, -1.0])

# Complex structures of R^{2,2}: J+ acts as i on (x1 + i x2) and on (x3 + i x4),
# J- as i on (x1 + i x2) and -i on (x3 + i x4).
J_PLUS = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])
J_MINUS = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, -1.0],
    [0.0, 0.0, 1.0, 0.0],
])


def flat_metric_field() -> ChartMetricField:
    return ChartMetricField(name="flat", components=lambda p: FLAT_METRIC.copy())


def null_cone_vector(t: float, s: float) -> np.ndarray:
    """Point of the null cone of R^{2,2} over the torus (t, s)."""
    return np.array([np.cos(t), np.sin(t), np.cos(s), np.sin(s)])


def metric_value(field: ChartMetricField, p, u, v) -> float:
    m = field(p)
    return float(as_point(u, field.dim) @ m @ as_point(v, field.dim))


def signature(matrix: np.ndarray, zero_band: float = ZERO_BAND) -> tuple[int, int, int]:
    """(positive, negative, zero) eigenvalue counts of a symmetric matrix."""
    eig = np.linalg.eigvalsh(0.5 * (matrix + matrix.T))
    scale = max(1.0, float(np.max(np.abs(eig))))
    pos = int(np.sum(eig > zero_band * scale))
    neg = int(np.sum(eig < -zero_band * scale))
    return pos, neg, len(eig) - pos - neg


def is_neutral(field: ChartMetricField, p) -> bool:
    return signature(field(p)) == (2, 2, 0)


def _checked(value: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(value)):
        raise NumericalError(f"Non-finite {what}")
    return value


# ── Derivatives ───────────────────────────────────────────────────────────────

def jacobian(fn: Callable[[np.ndarray], np.ndarray], p, h: float = FD_STEP) -> np.ndarray:
    """J[i, k] = d fn_i / d p_k by central differences."""
    p = as_point(p)
    cols = []
    for k in range(p.shape[0]):
        dp = np.zeros_like(p)
        dp[k] = h
        cols.append((np.asarray(fn(p + dp), dtype=float) - np.asarray(fn(p - dp), dtype=float)) / (2 * h))
    return _checked(np.column_stack(cols), "Jacobian")


def metric_derivatives(field: ChartMetricField, p, h: float) -> np.ndarray:
    """dg[k, i, j] = d_k g_ij."""
    p = as_point(p, field.dim)
    dg = np.empty((field.dim, field.dim, field.dim))
    for k in range(field.dim):
        dp = np.zeros(field.dim)
        dp[k] = h
        dg[k] = (field(p + dp) - field(p - dp)) / (2 * h)
    return dg


def inverse_metric(field: ChartMetricField, p) -> np.ndarray:
    g = field(p)
    if np.linalg.cond(g) > 1e12:
        raise DegeneracyError(f"Metric '{field.name}' is singular at {np.asarray(p)}")
    return np.linalg.inv(g)


def christoffel(field: ChartMetricField, p, h: float = CURVATURE_STEP) -> np.ndarray:
    """Gamma[i, j, k] = Γ^i_{jk}."""
    ginv = inverse_metric(field, p)
    dg = metric_derivatives(field, p, h)
    # Γ_{l jk} = ½ (∂_j g_lk + ∂_k g_lj − ∂_l g_jk)
    lowered = 0.5 * (np.einsum("jlk->ljk", dg) + np.einsum("klj->ljk", dg) - dg)
    gamma = np.einsum("il,ljk->ijk", ginv, lowered)
    return 0.5 * (gamma + np.swapaxes(gamma, 1, 2))


def _ricci_once(field: ChartMetricField, p: np.ndarray, h: float) -> np.ndarray:
    n = field.dim
    gamma = christoffel(field, p, h)
    d_gamma = np.empty((n, n, n, n))
    for a in range(n):
        dp = np.zeros(n)
        dp[a] = h
        d_gamma[a] = (christoffel(field, p + dp, h) - christoffel(field, p - dp, h)) / (2 * h)
    ric = (
        np.einsum("iijk->jk", d_gamma)
        - np.einsum("kiji->jk", d_gamma)
        + np.einsum("iip,pjk->jk", gamma, gamma)
        - np.einsum("ikp,pji->jk", gamma, gamma)
    )
    return 0.5 * (ric + ric.T)


def ricci(field: ChartMetricField, p, h: float = CURVATURE_STEP, richardson: bool = True) -> np.ndarray:
    p = as_point(p, field.dim)
    check_domain_margin(field, p, 4 * h)
    coarse = _ricci_once(field, p, h)
    if not richardson:
        return _checked(coarse, "Ricci tensor")
    fine = _ricci_once(field, p, h / 2)
    logger.debug("ricci(%s) Richardson correction %.3e", field.name, np.max(np.abs(fine - coarse)))
    return _checked((4.0 * fine - coarse) / 3.0, "Ricci tensor")


def scalar_curvature(field: ChartMetricField, p, h: float = CURVATURE_STEP) -> float:
    return float(np.einsum("jk,jk->", inverse_metric(field, p), ricci(field, p, h)))


def pullback_metric(fn: Callable[[np.ndarray], np.ndarray], ambient: ChartMetricField, p,
                    h: float = FD_STEP, jac: np.ndarray | None = None) -> np.ndarray:
    """JᵀM(f(p))J; rank deficiency is legal."""
    p = as_point(p)
    J = jacobian(fn, p, h) if jac is None else _checked(np.asarray(jac, dtype=float), "Jacobian")
    m = ambient(np.asarray(fn(p), dtype=float))
    out = J.T @ m @ J
    return 0.5 * (out + out.T)


def exterior_derivative(omega: OneFormField, p, h: float = FD_STEP) -> np.ndarray:
    """d omega as the antisymmetric matrix D[i, j] = ∂_i ω_j − ∂_j ω_i."""
    J = jacobian(omega, as_point(p, omega.dim), h)  # J[j, i] = ∂_i ω_j
    return J.T - J


def three_form_components(w: np.ndarray, dw: np.ndarray) -> dict[tuple[int, int, int], float]:
    n = w.shape[0]
    out = {}
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                out[(a, b, c)] = w[a] * dw[b, c] - w[b] * dw[a, c] + w[c] * dw[a, b]
    return out


def frobenius_defect(omega: OneFormField, p, h: float = FD_STEP, tol: float = DEFAULT_TOL) -> float:
    """
    ω∧dω against the chart volume form. In a 3-chart this is the single
    component on dx⁰∧dx¹∧dx²; in a 4-chart the norm of the four components.
    """
    p = as_point(p, omega.dim)
    w = omega(p)
    if np.linalg.norm(w) < tol:
        raise IllConditionedError(f"One-form '{omega.name}' vanishes at {p}")
    comps = three_form_components(w, exterior_derivative(omega, p, h))
    if omega.dim == 3:
        return float(comps[(0, 1, 2)])
    return float(np.linalg.norm(list(comps.values())))


# ── Null planes ───────────────────────────────────────────────────────────────

def _invariant(J: np.ndarray, basis: np.ndarray, tol: float) -> bool:
    images = J @ basis
    coeffs, *_ = np.linalg.lstsq(basis, images, rcond=None)
    return bool(np.max(np.abs(basis @ coeffs - images)) <= tol * max(1.0, np.max(np.abs(images))))


def classify_null_plane(plane: TangentPlane, metric: ChartMetricField, j_plus: np.ndarray = J_PLUS,
                        j_minus: np.ndarray = J_MINUS, tol: float = DEFAULT_TOL) -> NullPlaneLabel:
    # orthonormal basis of the span, so the label does not depend on the spanning vectors chosen
    basis, _ = np.linalg.qr(plane.matrix.T)
    g = metric(plane.base)
    gram = basis.T @ g @ basis
    if np.max(np.abs(gram)) > tol * max(1.0, np.max(np.abs(g))):
        return "not_totally_null"
    plus = _invariant(np.asarray(j_plus, dtype=float), basis, tol)
    minus = _invariant(np.asarray(j_minus, dtype=float), basis, tol)
    if plus and minus:
        raise ConsistencyError("Totally null plane is invariant under both complex structures")
    if plus:
        return "alpha"
    if minus:
        return "beta"
    raise ConsistencyError("Totally null plane is invariant under neither complex structure")


def check_domain_margin(field: ChartMetricField, p, margin: float) -> None:
    p = as_point(p, field.dim)
    for k in range(field.dim):
        for s in (-1.0, 1.0):
            q = p.copy()
            q[k] += s * margin
            if not field.contains(q):
                raise DomainError(f"Point {p} is closer than {margin} to the edge of '{field.name}'")
