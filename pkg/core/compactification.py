"""
Conformal compactification of R^{2,2} into the closed 4-ball of radius π/2.

Double polar coordinates x1 + i x2 = R1 e^{iθ1}, x3 + i x4 = R2 e^{iθ2} are sent to
tan p = R1 + R2, tan q = R1 − R2; the ball picture uses q = p cos ψ.
"""
import logging
import math
import numpy as np
from scipy.linalg import null_space
from scipy.spatial import cKDTree

from core import tensor_core
from core.errors import DomainError
from core.models import (
    BallPoint, ChartMetricField, CompactChartPoint, DoublePolarPoint, OneFormField, TangentPlane, as_point,
)

logger = logging.getLogger(__name__)

HALF_PI = math.pi / 2
HOPF_TOL = 1e-9
BOUNDARY_TOL = 1e-12
LINKING_SAMPLES = 512


def to_double_polar(x) -> DoublePolarPoint:
    x = as_point(x, 4)
    R1, R2 = math.hypot(x[0], x[1]), math.hypot(x[2], x[3])
    theta1 = math.atan2(x[1], x[0]) % (2 * math.pi) if R1 > 0 else 0.0
    theta2 = math.atan2(x[3], x[2]) % (2 * math.pi) if R2 > 0 else 0.0
    return DoublePolarPoint(R1=R1, R2=R2, theta1=theta1, theta2=theta2)


def to_compact(x) -> CompactChartPoint:
    d = to_double_polar(x)
    return CompactChartPoint(p=math.atan(d.R1 + d.R2), q=math.atan(d.R1 - d.R2), theta1=d.theta1, theta2=d.theta2)


def compact_coordinates(x) -> np.ndarray:
    return to_compact(x).as_array()


def compact_jacobian(x) -> np.ndarray:
    """Analytic Jacobian of (p, q, θ1, θ2) w.r.t. (x1..x4); needs R1, R2 > 0."""
    x = as_point(x, 4)
    R1, R2 = math.hypot(x[0], x[1]), math.hypot(x[2], x[3])
    if R1 == 0 or R2 == 0:
        raise DomainError("The angular chart is singular where R1 = 0 or R2 = 0")
    dR1 = np.array([x[0], x[1], 0.0, 0.0]) / R1
    dR2 = np.array([0.0, 0.0, x[2], x[3]]) / R2
    dth1 = np.array([-x[1], x[0], 0.0, 0.0]) / R1 ** 2
    dth2 = np.array([0.0, 0.0, -x[3], x[2]]) / R2 ** 2
    dp = (dR1 + dR2) / (1.0 + (R1 + R2) ** 2)
    dq = (dR1 - dR2) / (1.0 + (R1 - R2) ** 2)
    return np.vstack([dp, dq, dth1, dth2])


def to_ball(c: CompactChartPoint) -> BallPoint:
    if c.p == 0:
        return BallPoint(z1=0j, z2=0j, psi=HALF_PI)
    psi = math.acos(min(1.0, max(-1.0, c.q / c.p)))
    z1 = c.p * math.sin(psi / 2) * complex(math.cos(c.theta1), math.sin(c.theta1))
    z2 = c.p * math.cos(psi / 2) * complex(math.cos(c.theta2), math.sin(c.theta2))
    return BallPoint(z1=z1, z2=z2, psi=psi)


def conformal_factor(c: CompactChartPoint) -> float:
    if abs(c.p - HALF_PI) <= BOUNDARY_TOL:
        return 0.0
    return 2.0 * math.cos(c.p) * math.cos(c.q)


def _compact_domain(p: np.ndarray) -> bool:
    return -1e-6 <= p[0] <= HALF_PI + 1e-6 and abs(p[1]) <= p[0] + 1e-6


def _einstein_static(p: np.ndarray) -> np.ndarray:
    s_plus = math.sin(p[0] + p[1]) ** 2
    s_minus = math.sin(p[0] - p[1]) ** 2
    return np.array([
        [0.0, 0.5, 0.0, 0.0],
        [0.5, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.25 * s_plus, 0.0],
        [0.0, 0.0, 0.0, -0.25 * s_minus],
    ])


def einstein_static_metric() -> ChartMetricField:
    """dp dq + ¼ sin²(p+q) dθ1² − ¼ sin²(p−q) dθ2² on the (p, q, θ1, θ2) chart."""
    return ChartMetricField(name="einstein_static", components=_einstein_static, domain=_compact_domain)


def expected_pullback(c: CompactChartPoint) -> np.ndarray:
    # dp dq carries ½ in matrix form, so the pullback is (Ω/2)² times the flat metric
    return 0.25 * conformal_factor(c) ** 2 * tensor_core.FLAT_METRIC


def conformal_pullback_defect(x) -> float:
    """Relative Frobenius-norm error of the conformality identity at x."""
    x = as_point(x, 4)
    c = to_compact(x)
    pulled = tensor_core.pullback_metric(compact_coordinates, einstein_static_metric(), x, jac=compact_jacobian(x))
    expected = expected_pullback(c)
    return float(np.linalg.norm(pulled - expected) / np.linalg.norm(expected))


# ── Boundary ──────────────────────────────────────────────────────────────────

def boundary_metric_field() -> ChartMetricField:
    """Degenerate metric induced on p = π/2, chart (q, θ1, θ2)."""
    def components(b: np.ndarray) -> np.ndarray:
        c2 = 0.25 * math.cos(b[0]) ** 2
        return np.diag([0.0, c2, -c2])
    return ChartMetricField(name="einstein_static_boundary", components=components, dim=3,
                            degenerate_allowed=True, domain=lambda b: abs(b[0]) <= HALF_PI)


def boundary_inclusion(b: np.ndarray) -> np.ndarray:
    return np.array([HALF_PI, b[0], b[1], b[2]])


def boundary_pullback(q: float, theta1: float, theta2: float) -> np.ndarray:
    return tensor_core.pullback_metric(boundary_inclusion, einstein_static_metric(), np.array([q, theta1, theta2]))


def grad_omega_boundary_locus(c: CompactChartPoint) -> float:
    if abs(c.p - HALF_PI) > BOUNDARY_TOL:
        raise DomainError(f"Expected a boundary point (p = π/2), got p = {c.p}")
    d_p = -2.0 * math.sin(c.p) * math.cos(c.q)
    d_q = -2.0 * math.cos(c.p) * math.sin(c.q)
    return math.hypot(d_p, d_q)


def on_hopf_link(c: CompactChartPoint, tol: float = HOPF_TOL) -> bool:
    return abs(c.p - HALF_PI) <= BOUNDARY_TOL and abs(math.cos(c.q)) <= tol


def boundary_null_planes(q: float, theta1: float, theta2: float) -> tuple[tuple[TangentPlane, OneFormField],
                                                                           tuple[TangentPlane, OneFormField]]:
    """
    ((alpha plane, annihilator), (beta plane, annihilator)) at a boundary point.
    Spans are in the (p, q, θ1, θ2) chart with zero p-component; forms live on
    the boundary chart (q, θ1, θ2).
    """
    if abs(q) >= HALF_PI:
        raise DomainError(f"Need |q| < π/2, got {q}")
    base = np.array([HALF_PI, q, theta1, theta2])
    d_q = np.array([0.0, 1.0, 0.0, 0.0])
    alpha = TangentPlane(base=base, span=(d_q, np.array([0.0, 0.0, 1.0, 1.0])))
    beta = TangentPlane(base=base, span=(d_q, np.array([0.0, 0.0, 1.0, -1.0])))
    omega_alpha = OneFormField(name="omega_plus", components=lambda b: np.array([0.0, 1.0, -1.0]))
    omega_beta = OneFormField(name="omega_minus", components=lambda b: np.array([0.0, 1.0, 1.0]))
    return (alpha, omega_alpha), (beta, omega_beta)


def neutral_existence_parity(chi: int, tau: int) -> str:
    """Necessary condition for a closed 4-manifold to carry a neutral metric."""
    return "admits" if (chi + tau) % 4 == 0 and (chi - tau) % 4 == 0 else "obstructed"


# ── Hopf link ─────────────────────────────────────────────────────────────────

def hopf_link_circles(n: int = LINKING_SAMPLES) -> tuple[np.ndarray, np.ndarray]:
    """The circles ψ = 0 and ψ = π on the boundary sphere, as (n, 4) real arrays."""
    t = 2 * math.pi * np.arange(n) / n
    zeros = np.zeros(n)
    psi0 = np.column_stack([zeros, zeros, HALF_PI * np.cos(t), HALF_PI * np.sin(t)])
    psi_pi = np.column_stack([HALF_PI * np.cos(t), HALF_PI * np.sin(t), zeros, zeros])
    return psi0, psi_pi


def _stereographic(points: np.ndarray, pole: np.ndarray) -> np.ndarray:
    radius = np.linalg.norm(pole)
    n = pole / radius
    basis = null_space(n[None, :])
    if np.linalg.det(np.column_stack([basis, n])) < 0:
        basis[:, 0] = -basis[:, 0]
    u = points / radius
    along = u @ n
    return (u @ basis) / (1.0 - along)[:, None]


def _spectral_derivative(curve: np.ndarray) -> np.ndarray:
    # derivative w.r.t. a parameter of period 2π sampled uniformly
    n = curve.shape[0]
    k = np.fft.fftfreq(n, d=1.0 / n)
    if n % 2 == 0:
        k[n // 2] = 0.0
    return np.real(np.fft.ifft(1j * k[:, None] * np.fft.fft(curve, axis=0), axis=0))


def gauss_linking_number(a: np.ndarray, b: np.ndarray) -> float:
    """
    Linking number of two closed curves on a 3-sphere centred at the origin, each
    sampled uniformly in its parameter over one period. The curves are projected
    stereographically from a pole that lies on neither of them.
    """
    radius = float(np.linalg.norm(a[0]))
    pole = radius * np.array([1.0, 0.0, 1.0, 0.0]) / math.sqrt(2.0)
    ra, rb = _stereographic(a, pole), _stereographic(b, pole)
    da, db = _spectral_derivative(ra), _spectral_derivative(rb)
    diff = ra[:, None, :] - rb[None, :, :]
    cross = np.cross(da[:, None, :], db[None, :, :])
    integrand = np.einsum("ijk,ijk->ij", diff, cross) / np.linalg.norm(diff, axis=2) ** 3
    dt_a, dt_b = 2 * math.pi / a.shape[0], 2 * math.pi / b.shape[0]
    value = float(integrand.sum() * dt_a * dt_b / (4 * math.pi))
    logger.debug("Gauss linking integral %.6f", value)
    return value


def ball_injectivity_gap(xs: np.ndarray) -> float:
    """Smallest distance between images of distinct sample points under to_ball∘to_compact."""
    images = np.array([to_ball(to_compact(x)).as_real() for x in xs])
    tree = cKDTree(images)
    dist, _ = tree.query(images, k=2)
    return float(np.min(dist[:, 1]))
