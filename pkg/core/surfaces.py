"""
Built-in surfaces.

Flat case: convex surfaces of R³ as support functions in the stereographic
chart ν of their Gauss map, with analytic gradient and Hessian.
Space-form case: surfaces of S³_ε with analytic adapted frames.
"""
import math
from typing import Protocol
import numpy as np
from scipy.linalg import eigh, null_space

from core.errors import DomainError
from core.models import SpaceFormSign, SupportSurface, SurfaceFramePoint, eps_gram


# ── Support functions ─────────────────────────────────────────────────────────

def _normal_jet(nu: complex) -> tuple[np.ndarray, list[np.ndarray], list[np.ndarray]]:
    """Unit normal n(ν) = (2x, 2y, 1 − x² − y²)/(1 + x² + y²) with its first and second derivatives."""
    x, y = nu.real, nu.imag
    u = 1.0 / (1.0 + x * x + y * y)
    u_x, u_y = -2 * x * u * u, -2 * y * u * u
    u_xx = -2 * u * u + 8 * x * x * u ** 3
    u_yy = -2 * u * u + 8 * y * y * u ** 3
    u_xy = 8 * x * y * u ** 3
    n = np.array([2 * x * u, 2 * y * u, 2 * u - 1])
    n_x = np.array([2 * u + 2 * x * u_x, 2 * y * u_x, 2 * u_x])
    n_y = np.array([2 * x * u_y, 2 * u + 2 * y * u_y, 2 * u_y])
    n_xx = np.array([4 * u_x + 2 * x * u_xx, 2 * y * u_xx, 2 * u_xx])
    n_xy = np.array([2 * u_y + 2 * x * u_xy, 2 * u_x + 2 * y * u_xy, 2 * u_xy])
    n_yy = np.array([2 * x * u_yy, 4 * u_y + 2 * y * u_yy, 2 * u_yy])
    return n, [n_x, n_y], [n_xx, n_xy, n_yy]


def ellipsoid_support(axes, center=(0.0, 0.0, 0.0), name: str | None = None) -> SupportSurface:
    """Support function √(nᵀQn) + ⟨c, n⟩ of an axis-aligned ellipsoid, Q = diag(a², b², c²)."""
    axes = np.asarray(axes, dtype=float)
    center = np.asarray(center, dtype=float)
    if axes.shape != (3,) or np.any(axes <= 0):
        raise DomainError(f"Ellipsoid semi-axes must be three positive numbers, got {axes}")
    Q = np.diag(axes ** 2)
    Q_inv = np.diag(axes ** -2.0)

    def r0(nu: complex) -> float:
        n, _, _ = _normal_jet(nu)
        return float(math.sqrt(n @ Q @ n) + center @ n)

    def gradient(nu: complex) -> np.ndarray:
        n, dn, _ = _normal_jet(nu)
        s = math.sqrt(n @ Q @ n)
        return np.array([(d @ Q @ n) / s + center @ d for d in dn])

    def hessian(nu: complex) -> np.ndarray:
        n, dn, ddn = _normal_jet(nu)
        s = math.sqrt(n @ Q @ n)
        f = [(d @ Q @ n) / s for d in dn]
        out = []
        for (i, j), second in zip(((0, 0), (0, 1), (1, 1)), ddn):
            val = (dn[i] @ Q @ dn[j] + n @ Q @ second) / s - f[i] * f[j] / s
            out.append(val + center @ second)
        return np.array(out)

    def joachimsthal(nu: complex, t: np.ndarray) -> float:
        # distance from the centre to the tangent plane times the semi-diameter along t
        n, _, _ = _normal_jet(nu)
        return float(math.sqrt((n @ Q @ n) / (t @ Q_inv @ t)))

    label = name or f"ellipsoid{tuple(float(a) for a in axes)}"
    return SupportSurface(name=label, r0=r0, gradient=gradient, hessian=hessian, geodesic_integral=joachimsthal)


def round_sphere_support(radius: float, center=(0.0, 0.0, 0.0)) -> SupportSurface:
    return ellipsoid_support((radius, radius, radius), center, name=f"sphere(r={radius:g})")


# ── Surfaces in S³_ε ──────────────────────────────────────────────────────────

class FramedSurface(Protocol):
    sign: SpaceFormSign

    def immersion(self, a: float, b: float) -> np.ndarray: ...

    def frame(self, a: float, b: float) -> SurfaceFramePoint: ...

    def coordinate_vectors(self, a: float, b: float) -> np.ndarray: ...


def _omega(a: float, b: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    w = np.array([math.sin(a) * math.cos(b), math.sin(a) * math.sin(b), math.cos(a)])
    w_a = np.array([math.cos(a) * math.cos(b), math.cos(a) * math.sin(b), -math.sin(a)])
    w_b = np.array([-math.sin(b), math.cos(b), 0.0])
    return w, w_a, w_b


class LatitudeSphere:
    """
    The umbilic sphere {x4 = cos ρ} of S³ (sign +1) or {x4 = cosh ρ} of H³ (sign −1),
    parametrized by spherical coordinates (a, b) on its Euclidean 3-block.
    """

    def __init__(self, rho: float, sign: SpaceFormSign = 1):
        if sign == 1 and not 0 < rho < math.pi:
            raise DomainError(f"Latitude radius must lie in (0, π), got {rho}")
        if sign == -1 and rho <= 0:
            raise DomainError(f"Latitude radius must be positive, got {rho}")
        self.rho = float(rho)
        self.sign: SpaceFormSign = sign
        if sign == 1:
            self.size, self.height = math.sin(rho), math.cos(rho)
            self.curvature = 1.0 / math.tan(rho)
        else:
            self.size, self.height = math.sinh(rho), math.cosh(rho)
            self.curvature = 1.0 / math.tanh(rho)

    def immersion(self, a: float, b: float) -> np.ndarray:
        w, _, _ = _omega(a, b)
        return np.append(self.size * w, self.height)

    def coordinate_vectors(self, a: float, b: float) -> np.ndarray:
        _, w_a, w_b = _omega(a, b)
        return np.vstack([np.append(self.size * w_a, 0.0), np.append(self.size * math.sin(a) * w_b, 0.0)])

    def frame(self, a: float, b: float) -> SurfaceFramePoint:
        if math.sin(a) < 1e-9:
            raise DomainError("Latitude frame is singular at the poles a = 0, π")
        w, w_a, w_b = _omega(a, b)
        if self.sign == 1:
            N = np.append(-math.cos(self.rho) * w, math.sin(self.rho))
        else:
            N = -np.append(math.cosh(self.rho) * w, math.sinh(self.rho))
        return SurfaceFramePoint(
            phi=self.immersion(a, b), e1=np.append(w_a, 0.0), e2=np.append(w_b, 0.0), N=N,
            k1=self.curvature, k2=self.curvature,
            v1=0.0, v2=math.cos(a) / (math.sin(a) * self.size), sign=self.sign,
        )

    def clairaut_integral(self, state) -> float:
        """|∂_b| times the parallel component of the contact direction; constant along the Reeb flow."""
        a, _, theta = state
        return self.size * math.sin(a) * math.cos(theta)


class CliffordTorus:
    """{|z1| = cos r, |z2| = sin r} ⊂ S³; principal curvatures −tan r and cot r."""

    sign: SpaceFormSign = 1

    def __init__(self, r: float):
        if not 0 < r < math.pi / 2:
            raise DomainError(f"Clifford torus parameter must lie in (0, π/2), got {r}")
        self.r = float(r)

    def immersion(self, a: float, b: float) -> np.ndarray:
        cr, sr = math.cos(self.r), math.sin(self.r)
        return np.array([cr * math.cos(a), cr * math.sin(a), sr * math.cos(b), sr * math.sin(b)])

    def coordinate_vectors(self, a: float, b: float) -> np.ndarray:
        cr, sr = math.cos(self.r), math.sin(self.r)
        return np.array([[-cr * math.sin(a), cr * math.cos(a), 0.0, 0.0],
                         [0.0, 0.0, -sr * math.sin(b), sr * math.cos(b)]])

    def frame(self, a: float, b: float) -> SurfaceFramePoint:
        cr, sr = math.cos(self.r), math.sin(self.r)
        return SurfaceFramePoint(
            phi=self.immersion(a, b),
            e1=np.array([-math.sin(a), math.cos(a), 0.0, 0.0]),
            e2=np.array([0.0, 0.0, -math.sin(b), math.cos(b)]),
            N=np.array([sr * math.cos(a), sr * math.sin(a), -cr * math.cos(b), -cr * math.sin(b)]),
            k1=-math.tan(self.r), k2=1.0 / math.tan(self.r), sign=1,
        )


def numeric_coordinate_vectors(surface: FramedSurface, a: float, b: float, h: float = 1e-6) -> np.ndarray:
    """(2, 4) array of ∂_a φ and ∂_b φ by central differences."""
    da = (surface.immersion(a + h, b) - surface.immersion(a - h, b)) / (2 * h)
    db = (surface.immersion(a, b + h) - surface.immersion(a, b - h)) / (2 * h)
    return np.vstack([da, db])


def frame_coframe(surface: FramedSurface, a: float, b: float) -> np.ndarray:
    """
    C[i, j] = e^i(∂_j): components of the dual coframe (e¹, e²) on the chart
    vectors (∂_a, ∂_b).
    """
    fr = surface.frame(a, b)
    g = eps_gram(fr.sign)
    tangents = surface.coordinate_vectors(a, b)
    return np.array([[(t @ g @ e) / (e @ g @ e) for t in tangents] for e in (fr.e1, fr.e2)])


def numeric_principal_curvatures(surface: FramedSurface, a: float, b: float, h: float = 1e-4) -> tuple[float, float]:
    """k_i = ε⟨∇_{e_i} e_i, N⟩ from second differences of the immersion."""
    fr = surface.frame(a, b)
    g = eps_gram(fr.sign)
    C = frame_coframe(surface, a, b)
    Cinv = np.linalg.inv(C)  # columns: chart components of e1, e2

    def second(direction: np.ndarray) -> np.ndarray:
        da, db = direction * h
        return (surface.immersion(a + da, b + db) - 2 * surface.immersion(a, b)
                + surface.immersion(a - da, b - db)) / h ** 2

    return tuple(float(fr.sign * (second(Cinv[:, i]) @ g @ fr.N)) for i in range(2))


def numeric_principal_frame(surface: FramedSurface, a: float, b: float,
                            h: float = 1e-4) -> tuple[np.ndarray, np.ndarray]:
    """
    Principal curvatures (ascending) and unit principal directions, shape (2, 4),
    from finite differences of the immersion alone.

    The unit normal is the ε-orthogonal complement of φ, ∂_a φ and ∂_b φ; only its
    sign is taken from frame(a, b).N. The curvatures solve II v = k I v with
    I, II the fundamental forms in the chart, signed like numeric_principal_curvatures.
    """
    sign = surface.sign
    g = eps_gram(sign)
    phi = surface.immersion(a, b)
    tangents = numeric_coordinate_vectors(surface, a, b)
    normal = null_space(np.vstack([phi, tangents]) @ g)
    if normal.shape[1] != 1:
        raise DomainError(f"Immersion is singular at (a, b) = ({a}, {b})")
    N = normal[:, 0] / math.sqrt(abs(normal[:, 0] @ g @ normal[:, 0]))
    if N @ g @ surface.frame(a, b).N < 0:
        N = -N

    def at(da: float, db: float) -> np.ndarray:
        return surface.immersion(a + da, b + db)

    second = [
        (at(h, 0) - 2 * phi + at(-h, 0)) / h ** 2,
        (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4 * h * h),
        (at(0, h) - 2 * phi + at(0, -h)) / h ** 2,
    ]
    first = tangents @ g @ tangents.T
    II = sign * np.array([[second[0] @ g @ N, second[1] @ g @ N],
                          [second[1] @ g @ N, second[2] @ g @ N]])
    curvatures, vectors = eigh(II, first)
    return curvatures, vectors.T @ tangents
