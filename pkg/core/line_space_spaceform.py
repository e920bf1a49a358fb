"""
Oriented geodesics of the space forms S³_ε (ε = +1: the 3-sphere, ε = −1: hyperbolic space).

A geodesic is the bivector x∧y of a flag (see core.models.SpaceFormFlag) in
Λ²(R⁴) ≅ R⁶, components ordered by PAIRS. Tangent vectors at x∧y are the
bivectors x∧X + y∧Y with X, Y orthogonal to x and y.
"""
import logging
import math
from typing import Literal
import numpy as np
from scipy.linalg import null_space
from scipy.optimize import brentq

from core import tensor_core
from core.errors import ConsistencyError, ConvexityError, DomainError
from core.flows import MAX_DRIFT, integrate, integrate_conserving
from core.models import (
    ChartMetricField, OneFormField, SpaceFormFlag, SpaceFormLegendrianFlags, SpaceFormSign, SurfaceFramePoint,
    TangentPlane, eps_gram,
)
from core.surfaces import FramedSurface, frame_coframe

logger = logging.getLogger(__name__)

PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
TANGENCY_TOL = 1e-8
SPAN_TOL = 1e-10
SCAN_POINTS = 720


# ── Bivector algebra ──────────────────────────────────────────────────────────

def metric_eps(sign: SpaceFormSign) -> np.ndarray:
    return eps_gram(sign)


def inner4(u: np.ndarray, w: np.ndarray, sign: SpaceFormSign) -> float:
    return float(u @ eps_gram(sign) @ w)


def wedge(x, y) -> np.ndarray:
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return np.array([x[i] * y[j] - x[j] * y[i] for i, j in PAIRS])


def bivector_matrix(B: np.ndarray) -> np.ndarray:
    M = np.zeros((4, 4))
    for k, (i, j) in enumerate(PAIRS):
        M[i, j], M[j, i] = B[k], -B[k]
    return M


def inner_eps(a: np.ndarray, b: np.ndarray, sign: SpaceFormSign) -> float:
    """⟨⟨x₁∧y₁, x₂∧y₂⟩⟩ = ⟨x₁,x₂⟩⟨y₁,y₂⟩ − ⟨x₁,y₂⟩⟨y₁,x₂⟩ extended bilinearly."""
    g = np.diag(eps_gram(sign))
    weights = np.array([g[i] * g[j] for i, j in PAIRS])
    return float(np.sum(np.asarray(a) * np.asarray(b) * weights))


def contract(B: np.ndarray, w: np.ndarray, sign: SpaceFormSign) -> np.ndarray:
    """(a∧b)⌟w = a⟨b,w⟩ − b⟨a,w⟩."""
    return bivector_matrix(B) @ eps_gram(sign) @ np.asarray(w, dtype=float)


# ── Tangent space at a flag ───────────────────────────────────────────────────

def orthogonal_frame(flag: SpaceFormFlag) -> tuple[np.ndarray, np.ndarray]:
    """Oriented ε-orthonormal basis (f₁, f₂) of (x∧y)^⊥ with det[x, y, f₁, f₂] > 0."""
    g = eps_gram(flag.sign)
    basis = null_space(np.vstack([g @ flag.x, g @ flag.y]))
    f1 = basis[:, 0] / math.sqrt(flag.sign * (basis[:, 0] @ g @ basis[:, 0]))
    f2 = basis[:, 1] - flag.sign * (basis[:, 1] @ g @ f1) * f1
    f2 = f2 / math.sqrt(flag.sign * (f2 @ g @ f2))
    if np.linalg.det(np.column_stack([flag.x, flag.y, f1, f2])) < 0:
        f2 = -f2
    return f1, f2


def _project_out(flag: SpaceFormFlag, w: np.ndarray) -> np.ndarray:
    s = flag.sign
    return w - inner4(w, flag.x, s) * flag.x - s * inner4(w, flag.y, s) * flag.y


def decompose_tangent(flag: SpaceFormFlag, B: np.ndarray, tol: float = TANGENCY_TOL) -> tuple[np.ndarray, np.ndarray]:
    """(X, Y) with B = x∧X + y∧Y, X and Y orthogonal to the flag."""
    s = flag.sign
    B = np.asarray(B, dtype=float)
    X = _project_out(flag, -contract(B, flag.x, s))
    Y = _project_out(flag, -s * contract(B, flag.y, s))
    residual = np.linalg.norm(wedge(flag.x, X) + wedge(flag.y, Y) - B)
    if residual > tol * max(1.0, np.linalg.norm(B)):
        raise DomainError(f"Bivector is not tangent to the space of geodesics at the flag (residual {residual:.2e})")
    return X, Y


def tangent_basis(flag: SpaceFormFlag) -> np.ndarray:
    """(4, 6) array: x∧f₁, x∧f₂, y∧f₁, y∧f₂."""
    f1, f2 = orthogonal_frame(flag)
    return np.vstack([wedge(flag.x, f1), wedge(flag.x, f2), wedge(flag.y, f1), wedge(flag.y, f2)])


def _check_orthogonal(flag: SpaceFormFlag, *vectors: np.ndarray, tol: float = TANGENCY_TOL) -> None:
    for w in vectors:
        off = max(abs(inner4(w, flag.x, flag.sign)), abs(inner4(w, flag.y, flag.sign)))
        if off > tol * max(1.0, np.linalg.norm(w)):
            raise DomainError(f"Vector is not orthogonal to the flag (|<w, x>|, |<w, y>| up to {off:.2e})")


def apply_Jprime_vector(flag: SpaceFormFlag, w: np.ndarray) -> np.ndarray:
    """Rotation of (x∧y)^⊥: f₁ ↦ −f₂, f₂ ↦ f₁."""
    f1, f2 = orthogonal_frame(flag)
    s = flag.sign
    a, b = s * inner4(w, f1, s), s * inner4(w, f2, s)
    return -a * f2 + b * f1


def structures_J(flag: SpaceFormFlag, X, Y) -> tuple[np.ndarray, np.ndarray]:
    """(𝕁(x∧X + y∧Y), 𝕁′(x∧X + y∧Y))."""
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    _check_orthogonal(flag, X, Y)
    j_image = wedge(flag.y, X) - flag.sign * wedge(flag.x, Y)
    jp_image = wedge(flag.x, apply_Jprime_vector(flag, X)) + wedge(flag.y, apply_Jprime_vector(flag, Y))
    return j_image, jp_image


def apply_J(flag: SpaceFormFlag, B: np.ndarray) -> np.ndarray:
    return structures_J(flag, *decompose_tangent(flag, B))[0]


def apply_Jprime(flag: SpaceFormFlag, B: np.ndarray) -> np.ndarray:
    return structures_J(flag, *decompose_tangent(flag, B))[1]


def G_eps(flag: SpaceFormFlag, U: np.ndarray, V: np.ndarray) -> float:
    """𝔾_ε(U, V) = −⟨⟨U, 𝕁𝕁′V⟩⟩_ε."""
    decompose_tangent(flag, U)
    return -inner_eps(U, apply_J(flag, apply_Jprime(flag, V)), flag.sign)


def gram(flag: SpaceFormFlag, vectors) -> np.ndarray:
    vectors = list(vectors)
    return np.array([[G_eps(flag, u, w) for w in vectors] for u in vectors])


def operator_matrix(flag: SpaceFormFlag, op, basis: np.ndarray) -> np.ndarray:
    """Matrix of a tangent-space operator in the given basis (columns = images)."""
    images = np.array([op(flag, b) for b in basis])
    coeffs, *_ = np.linalg.lstsq(basis.T, images.T, rcond=None)
    return coeffs


def classify_plane(flag: SpaceFormFlag, span: tuple[np.ndarray, np.ndarray],
                   tol: float = tensor_core.DEFAULT_TOL):
    """α/β label of a tangent 2-plane via the chart classifier on tangent_basis coordinates."""
    basis = tangent_basis(flag)
    coords = [np.linalg.lstsq(basis.T, np.asarray(v), rcond=None)[0] for v in span]
    G = gram(flag, basis)
    G = 0.5 * (G + G.T)
    metric = ChartMetricField(name=f"G_eps({flag.sign:+d})", components=lambda p: G)
    plane = TangentPlane(base=np.zeros(4), span=tuple(coords))
    return tensor_core.classify_null_plane(
        plane, metric, j_plus=operator_matrix(flag, apply_Jprime, basis),
        j_minus=operator_matrix(flag, apply_J, basis), tol=tol,
    )


def in_span(basis: np.ndarray, B: np.ndarray, tol: float = SPAN_TOL) -> bool:
    basis = np.atleast_2d(basis)
    coeffs, *_ = np.linalg.lstsq(basis.T, B, rcond=None)
    return bool(np.linalg.norm(basis.T @ coeffs - B) <= tol * max(1.0, np.linalg.norm(B)))


# ── Tangent hypersurface of a surface ─────────────────────────────────────────

def _directions(fr: SurfaceFramePoint, theta: float) -> tuple[np.ndarray, np.ndarray, float, float]:
    c, s = math.cos(theta), math.sin(theta)
    return c * fr.e1 + s * fr.e2, -s * fr.e1 + c * fr.e2, c, s


def hypersurface_flag(fr: SurfaceFramePoint, theta: float) -> SpaceFormFlag:
    v, _, _, _ = _directions(fr, theta)
    return SpaceFormFlag(x=fr.phi, y=v, sign=fr.sign)


def tangent_hyp_frame(fr: SurfaceFramePoint, theta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Images (d1, d2, d0) of e₁, e₂ and ∂/∂θ under (x, θ) ↦ φ∧v."""
    v, vp, c, s = _directions(fr, theta)
    phi_vp, phi_N, v_vp = wedge(fr.phi, vp), wedge(fr.phi, fr.N), wedge(v, vp)
    d1 = fr.v1 * phi_vp + fr.k1 * c * phi_N + s * v_vp
    d2 = fr.v2 * phi_vp + fr.k2 * s * phi_N - c * v_vp
    return d1, d2, phi_vp


def null_planes_spaceform(fr: SurfaceFramePoint, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """(Π₊, Π₋) as (2, 6) spanning arrays; Π₊ = {φ∧v⊥, φ∧N}, Π₋ = {φ∧v⊥, v∧v⊥}."""
    v, vp, _, _ = _directions(fr, theta)
    e0 = wedge(fr.phi, vp)
    return np.vstack([e0, wedge(fr.phi, fr.N)]), np.vstack([e0, wedge(v, vp)])


def rho2(fr: SurfaceFramePoint, theta: float) -> np.ndarray:
    v, vp, c, s = _directions(fr, theta)
    k = fr.k1 * c * c + fr.k2 * s * s
    if abs(k) < 1e-12:
        raise ConvexityError("k1 cos²θ + k2 sin²θ vanishes")
    coeff = (2 * fr.k1 * fr.v2 * c * s + (fr.k1 * c * c - fr.k2 * s * s) * fr.v1) / k
    return coeff * wedge(fr.phi, vp) + fr.k1 * c * wedge(fr.phi, fr.N) - s * wedge(v, vp)


def null_pair(fr: SurfaceFramePoint, theta: float) -> tuple[np.ndarray, np.ndarray]:
    """(e₊, e₋) = ρ₁ ± ρ₂ with ρ₁ = d1."""
    d1, _, _ = tangent_hyp_frame(fr, theta)
    r2 = rho2(fr, theta)
    return d1 + r2, d1 - r2


def null_cone_scan(fr: SurfaceFramePoint, theta: float, n: int = SCAN_POINTS) -> list[np.ndarray]:
    """
    Totally null planes of the degenerate tangent space span{d0, d1, d2}, found by
    scanning directions cos β d1 + sin β d2 for sign changes of 𝔾. Each plane is
    returned as a (2, 6) span containing d0.
    """
    flag = hypersurface_flag(fr, theta)
    d1, d2, d0 = tangent_hyp_frame(fr, theta)
    Q = gram(flag, [d1, d2])

    def q(beta: float) -> float:
        w = np.array([math.cos(beta), math.sin(beta)])
        return float(w @ Q @ w)

    grid = math.pi * np.arange(n + 1) / n
    vals = np.array([q(b) for b in grid])
    roots = []
    for k in range(n):
        if vals[k] == 0.0:
            roots.append(grid[k])
        elif vals[k] * vals[k + 1] < 0:
            roots.append(brentq(q, grid[k], grid[k + 1], xtol=1e-14))
    return [np.vstack([d0, math.cos(b) * d1 + math.sin(b) * d2]) for b in roots]


# ── Contact structures ────────────────────────────────────────────────────────

def contact_coframe(fr: SurfaceFramePoint, theta: float) -> np.ndarray:
    """
    T[i, j] = ηⁱ(t_j) for tangent vectors t = (d1, d2, d0) and the frame
    η₁ = φ∧v⊥, η₂ = φ∧N, η₃ = v∧v⊥. Row i lists ηⁱ on (e₁, e₂, ∂/∂θ).
    """
    v, vp, _, _ = _directions(fr, theta)
    etas = np.vstack([wedge(fr.phi, vp), wedge(fr.phi, fr.N), wedge(v, vp)])
    tangents = np.vstack(tangent_hyp_frame(fr, theta))
    coeffs, *_ = np.linalg.lstsq(etas.T, tangents.T, rcond=None)
    if np.linalg.norm(etas.T @ coeffs - tangents.T) > 1e-9:
        raise ConsistencyError("Tangent hypersurface frame left span{φ∧v⊥, φ∧N, v∧v⊥}")
    return coeffs


def _require_convex(fr: SurfaceFramePoint) -> None:
    if fr.k1 * fr.k2 <= 0:
        raise ConvexityError(f"Surface is not convex at this point (k1 = {fr.k1:.6g}, k2 = {fr.k2:.6g})")


def contact_defects_spaceform(fr: SurfaceFramePoint, theta: float, h: float = 1e-5) -> tuple[float, float]:
    """
    (defect3, defect2): coefficients of η³∧dη³ and η²∧dη² against e¹∧e²∧dθ.
    For a form p(θ)e¹ + q(θ)e² the coefficient is q∂_θp − p∂_θq.
    """
    _require_convex(fr)

    def coefficient(row: int) -> float:
        p, q, _ = contact_coframe(fr, theta)[row]
        dp, dq, _ = (contact_coframe(fr, theta + h)[row] - contact_coframe(fr, theta - h)[row]) / (2 * h)
        return float(q * dp - p * dq)

    return coefficient(2), coefficient(1)


def contact_form_chart(surface: FramedSurface, row: Literal[1, 2]) -> OneFormField:
    """η² (row 1) or η³ (row 2) as a 1-form on the chart (a, b, θ)."""

    def components(p: np.ndarray) -> np.ndarray:
        a, b, theta = p
        fr = surface.frame(a, b)
        e_coeffs = contact_coframe(fr, theta)[row, :2]
        return np.append(e_coeffs @ frame_coframe(surface, a, b), 0.0)

    return OneFormField(name=f"eta{row + 1}", components=components)


def contact_defects_chart(surface: FramedSurface, a: float, b: float, theta: float,
                          h: float = tensor_core.FD_STEP) -> tuple[float, float]:
    """Chart oracle: ω∧dω against da∧db∧dθ divided by det of the coframe, for η³ and η²."""
    _require_convex(surface.frame(a, b))
    vol = np.linalg.det(frame_coframe(surface, a, b))
    p = [a, b, theta]
    return tuple(tensor_core.frobenius_defect(contact_form_chart(surface, row), p, h) / vol for row in (2, 1))


def constant_angle_nullity_spaceform(fr: SurfaceFramePoint, theta: float, angle: float) -> float:
    if not 0 < angle < math.pi / 2:
        raise DomainError(f"Angle must lie in (0, π/2), got {angle}")
    return (fr.k2 - fr.k1) * math.cos(angle) ** 2 * math.sin(2 * theta)


def constant_angle_flag(fr: SurfaceFramePoint, theta: float, angle: float) -> SpaceFormFlag:
    v, _, _, _ = _directions(fr, theta)
    return SpaceFormFlag(x=fr.phi, y=math.sin(angle) * v + math.cos(angle) * fr.N, sign=fr.sign)


def constant_angle_gram_det(surface: FramedSurface, a: float, b: float, theta: float, angle: float,
                            h: float = tensor_core.FD_STEP) -> float:
    """Determinant of 𝔾_ε pulled back to ℋₐ(S) on the chart (a, b, θ)."""
    def chart(p: np.ndarray) -> np.ndarray:
        fr = surface.frame(p[0], p[1])
        flag = constant_angle_flag(fr, p[2], angle)
        return wedge(flag.x, flag.y)

    flag = constant_angle_flag(surface.frame(a, b), theta, angle)
    J = tensor_core.jacobian(chart, [a, b, theta], h)
    return float(np.linalg.det(gram(flag, J.T)))


# ── Reeb field ────────────────────────────────────────────────────────────────

def reeb_field_spaceform(fr: SurfaceFramePoint, theta: float) -> np.ndarray:
    """Reeb field of η³: (k₁ − k₂) cosθ sinθ φ∧N + v∧v⊥."""
    _require_convex(fr)
    v, vp, c, s = _directions(fr, theta)
    return (fr.k1 - fr.k2) * c * s * wedge(fr.phi, fr.N) + wedge(v, vp)


def reeb_chart_velocity(surface: FramedSurface, state) -> np.ndarray:
    """Reeb field on the chart (a, b, θ): horizontal lift of −v⊥ with θ̇ = −(sinθ v₁ − cosθ v₂)."""
    a, b, theta = state
    fr = surface.frame(a, b)
    _require_convex(fr)
    c, s = math.cos(theta), math.sin(theta)
    ab_dot = np.linalg.solve(frame_coframe(surface, a, b), np.array([s, -c]))
    return np.append(ab_dot, -(s * fr.v1 - c * fr.v2))


def reeb_contract_residual_spaceform(surface: FramedSurface, a: float, b: float, theta: float,
                                     h: float = tensor_core.FD_STEP) -> tuple[float, float]:
    """(η³(X) − 1, |dη³(X, ·)|) in the chart."""
    p = np.array([a, b, theta])
    X = reeb_chart_velocity(surface, p)
    form = contact_form_chart(surface, 2)
    dw = tensor_core.exterior_derivative(form, p, h)
    return float(form(p) @ X - 1.0), float(np.linalg.norm(X @ dw))


def reeb_flow_spaceform(surface: FramedSurface, state0, step: float, n: int,
                        max_drift: float | None = MAX_DRIFT) -> np.ndarray:
    """(n + 1, 3) chart states (a, b, θ); drift-controlled when the surface has a clairaut_integral."""
    def field(st: np.ndarray) -> np.ndarray:
        return reeb_chart_velocity(surface, st)

    invariant = getattr(surface, "clairaut_integral", None)
    if invariant is None or max_drift is None:
        return integrate(field, state0, step, n)
    return integrate_conserving(field, state0, step, n, invariant, max_drift)


# ── Legendrian curves ─────────────────────────────────────────────────────────

def _derivative(values: np.ndarray, u: np.ndarray, closed: bool) -> np.ndarray:
    if not closed:
        return np.gradient(values, u, axis=0, edge_order=2)
    period = u[-1] - u[0]
    vals, uu = values[:-1], u[:-1]
    du = np.roll(uu, -1) - np.roll(uu, 1)
    du[0] += period
    du[-1] += period
    return (np.roll(vals, -1, axis=0) - np.roll(vals, 1, axis=0)) / du[:, None]


def legendrian_classify_spaceform(surface: FramedSurface, u, a, b, theta, closed: bool = False,
                                  tol: float = 1e-3) -> SpaceFormLegendrianFlags:
    """
    Flags of the curve u ↦ φ(a(u), b(u))∧v(θ(u)) in ℋ(S). The contact curve must be
    parametrized by arclength: ⟨φ̇, φ̇⟩_ε = ε.
    """
    u, a, b, theta = (np.asarray(arr, dtype=float) for arr in (u, a, b, theta))
    if np.any(np.diff(u) <= 0):
        raise DomainError("Curve parameter must be strictly increasing")
    sign = surface.sign
    frames = [surface.frame(ai, bi) for ai, bi in zip(a, b)]
    phis = np.array([fr.phi for fr in frames])
    curve = np.array([wedge(fr.phi, _directions(fr, th)[0]) for fr, th in zip(frames, theta)])
    phi_dot = _derivative(phis, u, closed)
    curve_dot = _derivative(curve, u, closed)
    count = len(phi_dot)

    alpha = beta = normal = curvature = True
    for fr, th, pd, cd in zip(frames[:count], theta[:count], phi_dot, curve_dot):
        speed = inner4(pd, pd, sign)
        if abs(speed - sign) > tol:
            raise DomainError(f"Contact curve is not parametrized by arclength (<φ', φ'> = {speed:.6g})")
        v, _, _, _ = _directions(fr, th)
        alpha &= min(np.linalg.norm(v - pd), np.linalg.norm(v + pd)) <= tol
        _, pi_minus = null_planes_spaceform(fr, th)
        beta &= in_span(pi_minus, cd, tol)
        normal &= abs(inner4(pd, v, sign)) <= tol
        umbilic = abs(fr.k1 - fr.k2) <= tol * max(abs(fr.k1), abs(fr.k2), 1.0)
        principal = abs(inner4(pd, fr.e1, sign) * inner4(pd, fr.e2, sign)) <= tol
        curvature &= umbilic or principal

    flags = SpaceFormLegendrianFlags(alpha=bool(alpha), beta=bool(beta), normal_to_c=bool(normal),
                                     curvature_line_or_umbilic=bool(curvature))
    if sum((flags.beta, flags.normal_to_c, flags.curvature_line_or_umbilic)) == 2:
        raise ConsistencyError(f"Two of beta / normal / curvature-line hold without the third: {flags}")
    logger.debug("legendrian_classify_spaceform: %s", flags)
    return flags
