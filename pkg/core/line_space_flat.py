"""
The space L(R³) of oriented lines in Euclidean 3-space.

A line is (ξ, η): ξ is the stereographic coordinate of its direction (chart
missing the south pole) and η the fibre coordinate of TS². The real chart used
throughout is (Re ξ, Im ξ, Re η, Im η); surfaces are given by support
functions r₀(ν) and the tangent hypersurface ℋ(S) is charted by (Re ν, Im ν, A).
"""
import cmath
import logging
import math
from typing import Callable, Literal
import numpy as np
from scipy.optimize import brentq

from core import tensor_core
from core.errors import ChartError, ConsistencyError, ConvexityError, DomainError
from core.flows import MAX_DRIFT, integrate, integrate_conserving
from core.models import (
    XI_MAX, ChartMetricField, ContactForms, HypersurfaceSample, LegendrianFlags, LineKnot, OneFormField,
    OrientedLineCoords, SupportSurface, SurfaceJet, Trajectory, as_point,
)

logger = logging.getLogger(__name__)

CHART_GUARD = 1e-9
SURFACE_STEP = 1e-5
SCAN_POINTS = 1440
LEGENDRIAN_TOL = 1e-3

# dξ and dη evaluated on the real chart basis (Re ξ, Im ξ, Re η, Im η)
_DXI = np.array([1.0, 1j, 0.0, 0.0])
_DETA = np.array([0.0, 0.0, 1.0, 1j])


def _line(xi: complex, eta: complex) -> OrientedLineCoords:
    if abs(xi) >= XI_MAX:
        raise ChartError(f"|xi| = {abs(xi):.3e} leaves the chart")
    return OrientedLineCoords(xi=xi, eta=eta)


def line_from_real(p) -> OrientedLineCoords:
    p = as_point(p, 4)
    return _line(complex(p[0], p[1]), complex(p[2], p[3]))


# ── Lines and points ──────────────────────────────────────────────────────────

def line_to_points(line: OrientedLineCoords, r: float) -> np.ndarray:
    """Point at signed parameter r along the line, r = 0 being the foot of the perpendicular from the origin."""
    xi, eta = line.xi, line.eta
    D = 1.0 + abs(xi) ** 2
    z = 2 * (eta - xi ** 2 * eta.conjugate()) / D ** 2 + 2 * xi * r / D
    t = -2 * (eta * xi.conjugate() + eta.conjugate() * xi).real / D ** 2 + (1 - abs(xi) ** 2) * r / D
    return np.array([z.real, z.imag, t])


def direction_to_xi(direction) -> complex:
    d = as_point(direction, 3)
    d = d / np.linalg.norm(d)
    if 1.0 + d[2] < 1.0 / XI_MAX:
        raise ChartError("Direction points to the south pole, outside the chart")
    return complex(d[0], d[1]) / (1.0 + d[2])


def xi_to_direction(xi: complex) -> np.ndarray:
    D = 1.0 + abs(xi) ** 2
    return np.array([2 * xi.real, 2 * xi.imag, 1 - abs(xi) ** 2]) / D


def line_direction(line: OrientedLineCoords) -> np.ndarray:
    return xi_to_direction(line.xi)


def incidence_eta(xi: complex, P) -> complex:
    """Fibre coordinate of the line with direction ξ through P."""
    P = as_point(P, 3)
    z = complex(P[0], P[1])
    return 0.5 * (z - 2 * P[2] * xi - z.conjugate() * xi ** 2)


def perpendicular_distance(line: OrientedLineCoords, center=(0.0, 0.0, 0.0)) -> float:
    eta = line.eta - incidence_eta(line.xi, center)
    return 2 * abs(eta) / (1 + abs(line.xi) ** 2)


def flip_orientation(line: OrientedLineCoords) -> OrientedLineCoords:
    if line.xi == 0:
        raise ChartError("Reversing a line with direction +e3 lands on the south pole")
    xb = line.xi.conjugate()
    return _line(-1.0 / xb, -line.eta.conjugate() / xb ** 2)


# ── Neutral metric and symplectic form ────────────────────────────────────────

def neutral_metric_L(line: OrientedLineCoords) -> np.ndarray:
    """𝔾 = 2D⁻² Im(dη̄ dξ + 2ξ̄η/D dξ dξ̄), D = 1 + |ξ|², in the real chart."""
    D = 1.0 + abs(line.xi) ** 2
    c = 2 * line.xi.conjugate() * line.eta / D
    a = np.outer(np.conj(_DETA), _DXI)
    q = np.real(np.outer(_DXI, np.conj(_DXI)))
    return 2.0 / D ** 2 * (np.imag(0.5 * (a + a.T)) + c.imag * q)


def symplectic_form_L(line: OrientedLineCoords) -> np.ndarray:
    """Ω = 2D⁻² Re(dη̄∧dξ − 2ξ̄η/D dξ∧dξ̄) as an antisymmetric matrix."""
    D = 1.0 + abs(line.xi) ** 2
    c = 2 * line.xi.conjugate() * line.eta / D
    a = np.outer(np.conj(_DETA), _DXI)
    b = np.outer(_DXI, np.conj(_DXI))
    return 2.0 / D ** 2 * np.real((a - a.T) - c * (b - b.T))


def line_space_metric_field() -> ChartMetricField:
    return ChartMetricField(name="line_space_flat", components=lambda p: neutral_metric_L(line_from_real(p)),
                            domain=lambda p: math.hypot(p[0], p[1]) < XI_MAX)


def lagrangian_defect(section: Callable[[complex], complex], nu: complex, h: float = tensor_core.FD_STEP) -> float:
    """
    λ with Ω|_Σ = 4λ D⁻² dx∧dy on the section Σ = {(ν, η(ν))}; zero iff Σ is
    Lagrangian at ν.
    """
    def chart(p: np.ndarray) -> np.ndarray:
        eta = section(complex(p[0], p[1]))
        return np.array([p[0], p[1], eta.real, eta.imag])

    p = np.array([nu.real, nu.imag])
    J = tensor_core.jacobian(chart, p, h)
    omega = J.T @ symplectic_form_L(_line(nu, section(nu))) @ J
    return float(omega[0, 1] * (1 + abs(nu) ** 2) ** 2 / 4)


# ── Support-function jets ─────────────────────────────────────────────────────

def _support_derivatives(S: SupportSurface, nu: complex, h: float) -> tuple[float, np.ndarray, np.ndarray]:
    r0 = float(S.r0(nu))
    if S.gradient is not None:
        grad = np.asarray(S.gradient(nu), dtype=float)
    else:
        grad = np.array([(S.r0(nu + h) - S.r0(nu - h)) / (2 * h),
                         (S.r0(nu + 1j * h) - S.r0(nu - 1j * h)) / (2 * h)])
    if S.hessian is not None:
        hess = np.asarray(S.hessian(nu), dtype=float)
    elif S.gradient is not None:
        gx = (np.asarray(S.gradient(nu + h)) - np.asarray(S.gradient(nu - h))) / (2 * h)
        gy = (np.asarray(S.gradient(nu + 1j * h)) - np.asarray(S.gradient(nu - 1j * h))) / (2 * h)
        hess = np.array([gx[0], 0.5 * (gx[1] + gy[0]), gy[1]])
    else:
        k = 10 * h
        r_xx = (S.r0(nu + k) - 2 * r0 + S.r0(nu - k)) / k ** 2
        r_yy = (S.r0(nu + 1j * k) - 2 * r0 + S.r0(nu - 1j * k)) / k ** 2
        r_xy = (S.r0(nu + k + 1j * k) - S.r0(nu + k - 1j * k)
                - S.r0(nu - k + 1j * k) + S.r0(nu - k - 1j * k)) / (4 * k * k)
        hess = np.array([r_xx, r_xy, r_yy])
    if not (np.isfinite(r0) and np.all(np.isfinite(grad)) and np.all(np.isfinite(hess))):
        raise DomainError(f"Support function of '{S.name}' is not finite near nu = {nu}")
    return r0, grad, hess


def surface_jet(S: SupportSurface, nu: complex, h: float = SURFACE_STEP) -> SurfaceJet:
    nu = complex(nu)
    if abs(nu) > S.domain_radius:
        raise DomainError(f"nu = {nu} is outside the domain of '{S.name}' (radius {S.domain_radius:g})")
    r0, (r_x, r_y), (r_xx, r_xy, r_yy) = _support_derivatives(S, nu, h)
    D = 1.0 + abs(nu) ** 2
    eta0 = 0.25 * D ** 2 * complex(r_x, r_y)
    psi0 = r0 + 0.125 * D ** 2 * (r_xx + r_yy)
    sigma0 = (-0.5 * D * nu.conjugate() * complex(r_x, -r_y)
              - 0.125 * D ** 2 * complex(r_xx - r_yy, -2 * r_xy))
    if psi0 ** 2 - abs(sigma0) ** 2 <= 0 or psi0 <= 0:
        raise ConvexityError(f"'{S.name}' is not strictly convex at nu = {nu}: psi0 = {psi0:.6g}, "
                             f"|sigma0| = {abs(sigma0):.6g}")
    return SurfaceJet(nu=nu, r0=r0, eta0=eta0, psi0=psi0, sigma0=sigma0)


def normal_line(jet: SurfaceJet) -> OrientedLineCoords:
    return _line(jet.nu, jet.eta0)


def support_point(jet: SurfaceJet) -> np.ndarray:
    """The point of S whose outward normal is ν."""
    return line_to_points(normal_line(jet), jet.r0)


# ── Tangent and constant-angle hypersurfaces ──────────────────────────────────

def tangent_hypersurface_point(jet: SurfaceJet, A: float, eps: float | None = None) -> OrientedLineCoords:
    """
    Line through the support point at angle a to the normal, eps = tan(a/2);
    eps=None is the tangent case a = π/2. A is the angle of the line in the tangent plane.
    """
    u = (1.0 if eps is None else float(eps)) * cmath.exp(1j * A)
    nu = jet.nu
    den = 1.0 - nu.conjugate() * u
    if abs(den) < CHART_GUARD:
        raise ChartError(f"Line at nu = {nu}, A = {A} leaves the chart (|1 − ν̄εe^(iA)| = {abs(den):.2e})")
    xi = (nu + u) / den
    eta = (jet.eta0 - u * u * jet.eta0.conjugate() - jet.D * u * jet.r0) / den ** 2
    return _line(xi, eta)


def hypersurface_sample(jet: SurfaceJet, A: float, eps: float | None = None) -> HypersurfaceSample:
    return HypersurfaceSample(nu=jet.nu, A=A % (2 * math.pi), line=tangent_hypersurface_point(jet, A, eps), eps=eps)


def hypersurface_chart_map(S: SupportSurface, eps: float | None = None,
                           h: float = SURFACE_STEP) -> Callable[[np.ndarray], np.ndarray]:
    """(Re ν, Im ν, A) ↦ real line coordinates on ℋ(S) or ℋₐ(S)."""
    def chart(p: np.ndarray) -> np.ndarray:
        jet = surface_jet(S, complex(p[0], p[1]), h)
        return tangent_hypersurface_point(jet, p[2], eps).as_real()
    return chart


def tangent_angle(nu: complex, direction) -> float:
    """Angle A in [0, 2π) of a unit direction orthogonal to the normal ν."""
    xi = direction_to_xi(direction)
    w = (xi - nu) / (1 + nu.conjugate() * xi)
    if abs(w) < 1e-12:
        raise DomainError("Direction is parallel to the normal")
    return cmath.phase(w) % (2 * math.pi)


def _jet_terms(jet: SurfaceJet, A: float) -> tuple[complex, float]:
    e2 = cmath.exp(2j * A)
    return jet.sigma0 + jet.psi0 / e2, (jet.sigma0 * e2).imag


def induced_metric_H(jet: SurfaceJet, A: float) -> np.ndarray:
    """−D⁻² Im[(σ₀ + ψ₀e^{−2iA})dν² + σ₀e^{2iA}|dν|²]; the A-row vanishes."""
    C, s = _jet_terms(jet, A)
    D2 = jet.D ** 2
    return np.array([
        [-(C.imag + s) / D2, -C.real / D2, 0.0],
        [-C.real / D2, (C.imag - s) / D2, 0.0],
        [0.0, 0.0, 0.0],
    ])


def null_direction_angles(jet: SurfaceJet, A: float) -> tuple[float, float]:
    w = jet.psi0 + jet.sigma0 * cmath.exp(2j * A)
    ratio = w.conjugate() / w
    b_alpha = A + (cmath.log(ratio) / 2j).real
    return b_alpha % (2 * math.pi), (A + math.pi / 2) % (2 * math.pi)


def null_direction_scan(jet: SurfaceJet, A: float, n: int = SCAN_POINTS) -> np.ndarray:
    """Null angles B in [0, π) of the horizontal direction e^{iB}, found by sign changes and brentq."""
    M = induced_metric_H(jet, A)[:2, :2]

    def f(B: float) -> float:
        v = np.array([math.cos(B), math.sin(B)])
        return float(v @ M @ v)

    grid = math.pi * np.arange(n + 1) / n
    vals = np.array([f(B) for B in grid])
    roots = []
    for k in range(n):
        if vals[k] == 0.0:
            roots.append(grid[k])
        elif vals[k] * vals[k + 1] < 0:
            roots.append(brentq(f, grid[k], grid[k + 1], xtol=1e-14))
    logger.debug("null_direction_scan: %d roots on %d cells", len(roots), n)
    return np.sort(np.mod(roots, math.pi))


# ── Contact structures ────────────────────────────────────────────────────────

def _omega_plus(jet: SurfaceJet, A: float) -> np.ndarray:
    F = (cmath.exp(-1j * A) * jet.psi0 + cmath.exp(1j * A) * jet.sigma0) / jet.D
    return np.array([-2 * F.imag, -2 * F.real, 0.0])


def _omega_minus(A: float) -> np.ndarray:
    return np.array([2 * math.cos(A), 2 * math.sin(A), 0.0])


def contact_forms_H(jet: SurfaceJet, A: float) -> ContactForms:
    return ContactForms(
        omega_plus=_omega_plus(jet, A),
        omega_minus=_omega_minus(A),
        defect_plus=-2 * jet.delta / jet.D ** 2,
        defect_minus=-2.0,
    )


def contact_form_field(S: SupportSurface, which: Literal["plus", "minus"], h: float = SURFACE_STEP) -> OneFormField:
    def components(p: np.ndarray) -> np.ndarray:
        if which == "minus":
            return _omega_minus(p[2])
        return _omega_plus(surface_jet(S, complex(p[0], p[1]), h), p[2])
    return OneFormField(name=f"omega_{which}", components=components)


def contact_defect_numeric(S: SupportSurface, nu: complex, A: float, which: Literal["plus", "minus"] = "plus",
                           h: float = tensor_core.FD_STEP) -> float:
    """Half the dx∧dy∧dA coefficient of ω∧dω, by finite-difference exterior differentiation."""
    return 0.5 * tensor_core.frobenius_defect(contact_form_field(S, which), [nu.real, nu.imag, A], h)


def constant_angle_nullity(jet: SurfaceJet, A: float, eps: float) -> float:
    """Determinant of the induced metric on ℋₐ(S) in (Re ν, Im ν, A)."""
    if not 0 < eps < 1:
        raise DomainError(f"Constant-angle parameter must lie in (0, 1), got {eps}")
    e2 = eps * eps
    num = -2 * e2 * (1 - e2) ** 2 * (jet.sigma0 * cmath.exp(2j * A)).imag * jet.delta
    return num / ((1 + e2) ** 4 * jet.D ** 4)


def constant_angle_pullback(S: SupportSurface, nu: complex, A: float, eps: float | None = None,
                            h: float = tensor_core.FD_STEP) -> np.ndarray:
    return tensor_core.pullback_metric(hypersurface_chart_map(S, eps), line_space_metric_field(),
                                       [nu.real, nu.imag, A], h)


# ── Legendrian knots ──────────────────────────────────────────────────────────

def _cyclic_derivative(values: np.ndarray, u: np.ndarray, period: float) -> np.ndarray:
    du = np.roll(u, -1) - np.roll(u, 1)
    du[0] += period
    du[-1] += period
    dv = np.roll(values, -1, axis=0) - np.roll(values, 1, axis=0)
    return dv / du.reshape((-1,) + (1,) * (values.ndim - 1))


def _knot_tangents(knot: LineKnot) -> tuple[slice, np.ndarray, np.ndarray]:
    """(samples used, ν̇, Ȧ); closed knots drop the repeated last sample and wrap."""
    if np.any(np.diff(knot.u) <= 0):
        raise DomainError("Knot parameter must be strictly increasing")
    steps = np.abs(np.diff(knot.nu)) + np.abs(np.diff(knot.A))
    if np.any(steps <= 1e-14):
        raise DomainError("Knot has repeated consecutive samples")
    if knot.closed:
        keep = slice(0, len(knot.u) - 1)
        u = knot.u[keep]
        period = knot.u[-1] - knot.u[0]
        nu_dot = _cyclic_derivative(knot.nu[keep], u, period)
        dA = np.roll(knot.A[keep], -1) - np.roll(knot.A[keep], 1)
        dA = (dA + math.pi) % (2 * math.pi) - math.pi
        du = np.roll(u, -1) - np.roll(u, 1)
        du[0] += period
        du[-1] += period
        return keep, nu_dot, dA / du
    keep = slice(0, len(knot.u))
    nu_dot = np.gradient(knot.nu, knot.u, edge_order=2)
    return keep, nu_dot, np.gradient(np.unwrap(knot.A), knot.u, edge_order=2)


def _curve_tangent(points: np.ndarray, knot: LineKnot) -> np.ndarray:
    if knot.closed:
        return _cyclic_derivative(points, knot.u[:-1], knot.u[-1] - knot.u[0])
    return np.gradient(points, knot.u, axis=0, edge_order=2)


def _small(ratio: float, tol: float) -> bool:
    return abs(ratio) <= tol


def legendrian_classify(knot: LineKnot, S: SupportSurface, tol: float = LEGENDRIAN_TOL,
                        h: float = SURFACE_STEP) -> LegendrianFlags:
    """
    Pointwise contact and incidence flags of a knot in ℋ(S). The contact curve c
    is the curve of support points; a flag holds if it holds at every sample.
    """
    keep, nu_dot, A_dot = _knot_tangents(knot)
    nus, As = knot.nu[keep], knot.A[keep]
    jets = [surface_jet(S, nu, h) for nu in nus]
    c_dot = _curve_tangent(np.array([support_point(j) for j in jets]), knot)

    alpha = beta = tangent = normal = curvature = True
    for jet, A, nd, ad, cd in zip(jets, As, nu_dot, A_dot, c_dot):
        t = np.array([nd.real, nd.imag, ad])
        t_norm = np.linalg.norm(t)
        c_norm = np.linalg.norm(cd)
        if c_norm <= 1e-12 * max(1.0, t_norm):
            raise DomainError(f"Contact curve is stationary at nu = {jet.nu}")
        forms = contact_forms_H(jet, A)
        alpha &= _small(forms.omega_plus @ t / (np.linalg.norm(forms.omega_plus) * t_norm), tol)
        beta &= _small(forms.omega_minus @ t / (np.linalg.norm(forms.omega_minus) * t_norm), tol)
        d = line_direction(tangent_hypersurface_point(jet, A))
        c_hat = cd / c_norm
        tangent &= bool(np.linalg.norm(np.cross(c_hat, d)) <= tol)
        normal &= _small(c_hat @ d, tol)
        sigma = abs(jet.sigma0)
        curvature &= (sigma <= tol * jet.psi0
                      or abs((jet.sigma0 * nd * nd).imag) <= tol * sigma * abs(nd) ** 2)

    flags = LegendrianFlags(alpha=bool(alpha), beta=bool(beta), tangent_to_c=bool(tangent),
                            normal_to_c=bool(normal), curvature_line_or_umbilic=bool(curvature))
    if flags.alpha != flags.tangent_to_c:
        raise ConsistencyError(f"alpha-Legendrian flag disagrees with tangency to the contact curve: {flags}")
    if sum((flags.beta, flags.normal_to_c, flags.curvature_line_or_umbilic)) == 2:
        raise ConsistencyError(f"Two of beta / normal / curvature-line hold without the third: {flags}")
    logger.debug("legendrian_classify(%s): %s", S.name, flags)
    return flags


def knot_along_curve(S: SupportSurface, nu_path, u, mode: Literal["tangent", "normal"],
                     closed: bool = False, h: float = SURFACE_STEP) -> LineKnot:
    """
    Lines through the support points of a Gauss-image path, tangent to the contact
    curve (mode "tangent") or normal to it inside the tangent plane (mode "normal").
    For closed paths the last sample must repeat the first.
    """
    nu_path = np.asarray(nu_path, dtype=complex)
    u = np.asarray(u, dtype=float)
    n = len(u) - 1 if closed else len(u)
    base_knot = LineKnot(u=u, nu=nu_path, A=np.zeros_like(u), closed=closed)
    points = np.array([support_point(surface_jet(S, nu, h)) for nu in nu_path[:n]])
    c_dot = _curve_tangent(points, base_knot)
    angles = []
    for nu, cd in zip(nu_path[:n], c_dot):
        d = cd / np.linalg.norm(cd)
        if mode == "normal":
            d = np.cross(xi_to_direction(nu), d)
        angles.append(tangent_angle(nu, d))
    if closed:
        angles.append(angles[0])
    return LineKnot(u=u, nu=nu_path, A=np.array(angles), closed=closed)


# ── Reeb and geodesic fields ──────────────────────────────────────────────────

def reeb_field_flat(jet: SurfaceJet, A: float) -> np.ndarray:
    """Reeb field of ω⁺ (normalized by ω⁺(X) = 1) as (Re ν̇, Im ν̇, Ȧ)."""
    e = cmath.exp(1j * A)
    psi, sigma, nu = jet.psi0, jet.sigma0, jet.nu
    nu_dot = -1j * jet.D * (psi * e - sigma.conjugate() / e) / (2 * jet.delta)
    a_dot = -((psi * nu.conjugate() - sigma * nu) * e).real / jet.delta
    return np.array([nu_dot.real, nu_dot.imag, a_dot])


def geodesic_field_flat(jet: SurfaceJet, A: float) -> np.ndarray:
    """Unit-speed geodesic flow on S lifted to (ν, A): the line is the geodesic's tangent."""
    e = cmath.exp(1j * A)
    psi, sigma, nu = jet.psi0, jet.sigma0, jet.nu
    nu_dot = jet.D * (psi * e + sigma.conjugate() / e) / (2 * jet.delta)
    a_dot = ((psi * nu.conjugate() - sigma * nu) * e).imag / jet.delta
    return np.array([nu_dot.real, nu_dot.imag, a_dot])


def reeb_contract_residual(S: SupportSurface, nu: complex, A: float,
                           h: float = tensor_core.FD_STEP) -> tuple[float, float]:
    """(ω⁺(X) − 1, |dω⁺(X, ·)|) with dω⁺ by finite differences."""
    X = reeb_field_flat(surface_jet(S, nu), A)
    field = contact_form_field(S, "plus")
    p = np.array([nu.real, nu.imag, A])
    dw = tensor_core.exterior_derivative(field, p, h)
    return float(field(p) @ X - 1.0), float(np.linalg.norm(X @ dw))


def _flow(S: SupportSurface, field, init: tuple[complex, float], step: float, n: int,
          h: float, label: str, tangent_shift: float, max_drift: float | None) -> Trajectory:
    def rhs(state: np.ndarray) -> np.ndarray:
        return field(surface_jet(S, complex(state[0], state[1]), h), state[2])

    def invariant(state: np.ndarray) -> float:
        jet = surface_jet(S, complex(state[0], state[1]), h)
        tangent = line_direction(tangent_hypersurface_point(jet, state[2] + tangent_shift))
        return S.geodesic_integral(jet.nu, tangent)

    nu0, A0 = init
    state0 = [nu0.real, nu0.imag, A0]
    try:
        if S.geodesic_integral is None or max_drift is None:
            states = integrate(rhs, state0, step, n)
        else:
            states = integrate_conserving(rhs, state0, step, n, invariant, max_drift)
    except ConvexityError:
        logger.warning("%s flow on '%s' aborted: surface lost strict convexity", label, S.name)
        raise
    return Trajectory(t=step * np.arange(n + 1), nu=states[:, 0] + 1j * states[:, 1], A=states[:, 2])


def reeb_flow(S: SupportSurface, init: tuple[complex, float], step: float, n: int,
              h: float = SURFACE_STEP, max_drift: float | None = MAX_DRIFT) -> Trajectory:
    """The contact curve is the geodesic whose tangent is the line at angle A − π/2."""
    return _flow(S, reeb_field_flat, init, step, n, h, "Reeb", -math.pi / 2, max_drift)


def geodesic_flow(S: SupportSurface, init: tuple[complex, float], step: float, n: int,
                  h: float = SURFACE_STEP, max_drift: float | None = MAX_DRIFT) -> Trajectory:
    """
    With a known geodesic integral on S the step is refined until its drift per unit
    time is at most max_drift; max_drift=None integrates at the given step.
    """
    return _flow(S, geodesic_field_flat, init, step, n, h, "geodesic", 0.0, max_drift)


def trajectory_points(S: SupportSurface, traj: Trajectory, h: float = SURFACE_STEP) -> np.ndarray:
    """Support points along a trajectory: the contact curve in R³."""
    return np.array([support_point(surface_jet(S, nu, h)) for nu in traj.nu])
