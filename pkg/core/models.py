import math
from typing import Callable, Literal
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from core.errors import DomainError

XI_MAX = 1e6
FLAG_TOL = 1e-10

NullPlaneLabel = Literal["alpha", "beta", "not_totally_null"]
IntersectionCase = Literal["empty", "circle", "torus", "two_tori"]
Branch = Literal["plus", "minus"]
SpaceFormSign = Literal[1, -1]


def as_point(value, dim: int | None = None) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.ndim != 1 or (dim is not None and arr.shape[0] != dim):
        raise DomainError(f"Expected a point with {dim or 'n'} coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"Non-finite coordinates: {arr}")
    return arr


def eps_gram(sign: int) -> np.ndarray:
    return np.diag([float(sign), float(sign), float(sign), 1.0])


# ── Chart fields ──────────────────────────────────────────────────────────────

class ChartMetricField(BaseModel):
    """
    Metric components as a callback on chart points.
    Callbacks must be re-entrant; fields are shared across threads.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    components: Callable[[np.ndarray], np.ndarray]
    domain: Callable[[np.ndarray], bool] | None = None
    dim: int = Field(default=4, ge=2, le=4)
    degenerate_allowed: bool = False

    def contains(self, p: np.ndarray) -> bool:
        return self.domain is None or bool(self.domain(p))

    def __call__(self, p) -> np.ndarray:
        p = as_point(p, self.dim)
        if not self.contains(p):
            raise DomainError(f"Point {p} is outside the domain of metric '{self.name}'")
        m = np.asarray(self.components(p), dtype=float)
        if m.shape != (self.dim, self.dim) or not np.all(np.isfinite(m)):
            raise DomainError(f"Metric '{self.name}' returned an invalid matrix at {p}")
        if np.max(np.abs(m - m.T)) > 1e-12 * (1.0 + np.max(np.abs(m))):
            raise DomainError(f"Metric '{self.name}' is not symmetric at {p}")
        return m


class OneFormField(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    components: Callable[[np.ndarray], np.ndarray]
    dim: Literal[3, 4] = 3

    def __call__(self, p) -> np.ndarray:
        p = as_point(p, self.dim)
        w = np.asarray(self.components(p), dtype=float)
        if w.shape != (self.dim,) or not np.all(np.isfinite(w)):
            raise DomainError(f"One-form '{self.name}' returned an invalid covector at {p}")
        return w


class TangentPlane(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    base: np.ndarray
    span: tuple[np.ndarray, np.ndarray]

    @field_validator("base", mode="before")
    @classmethod
    def _base(cls, v):
        return as_point(v)

    @field_validator("span", mode="before")
    @classmethod
    def _span(cls, v):
        a, b = v
        return as_point(a), as_point(b)

    @model_validator(mode="after")
    def _rank(self):
        m = np.vstack(self.span)
        if m.shape[1] != self.base.shape[0]:
            raise ValueError("Spanning vectors and base point have different dimensions")
        if np.linalg.matrix_rank(m, tol=1e-12 * max(1.0, np.max(np.abs(m)))) != 2:
            raise ValueError("Degenerate span: the two vectors are linearly dependent")
        return self

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack(self.span)


# ── Compactification points ───────────────────────────────────────────────────

class DoublePolarPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    R1: float = Field(ge=0)
    R2: float = Field(ge=0)
    theta1: float = 0.0
    theta2: float = 0.0


class CompactChartPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    p: float
    q: float
    theta1: float = 0.0
    theta2: float = 0.0

    @model_validator(mode="after")
    def _range(self):
        if not (-1e-12 <= self.p <= math.pi / 2 + 1e-12) or abs(self.q) > self.p + 1e-12:
            raise ValueError(f"Need 0 <= p <= pi/2 and |q| <= p, got p={self.p}, q={self.q}")
        return self

    def as_array(self) -> np.ndarray:
        return np.array([self.p, self.q, self.theta1, self.theta2])


class BallPoint(BaseModel):
    model_config = ConfigDict(frozen=True)

    z1: complex
    z2: complex
    psi: float = Field(ge=0, le=math.pi)

    @property
    def radius(self) -> float:
        return math.hypot(abs(self.z1), abs(self.z2))

    def as_real(self) -> np.ndarray:
        return np.array([self.z1.real, self.z1.imag, self.z2.real, self.z2.imag])


# ── Flat line space ───────────────────────────────────────────────────────────

class OrientedLineCoords(BaseModel):
    model_config = ConfigDict(frozen=True)

    xi: complex
    eta: complex

    @model_validator(mode="after")
    def _chart(self):
        if not (np.isfinite(self.xi) and np.isfinite(self.eta)):
            raise ValueError("Line coordinates must be finite")
        if abs(self.xi) >= XI_MAX:
            raise ValueError(f"|xi| = {abs(self.xi):.3e} leaves the chart (XI_MAX = {XI_MAX:g})")
        return self

    def as_real(self) -> np.ndarray:
        return np.array([self.xi.real, self.xi.imag, self.eta.real, self.eta.imag])


class SupportSurface(BaseModel):
    """
    Convex surface given by its support function r0(nu) in the stereographic chart
    of the Gauss map. gradient returns (r_x, r_y), hessian returns (r_xx, r_xy, r_yy)
    with nu = x + iy; both optional.

    geodesic_integral, when known, is a first integral of the geodesic flow as a
    function of the normal parameter nu and the unit tangent t in R³.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    name: str
    r0: Callable[[complex], float]
    gradient: Callable[[complex], np.ndarray] | None = None
    hessian: Callable[[complex], np.ndarray] | None = None
    domain_radius: float = Field(default=1e3, gt=0)
    geodesic_integral: Callable[[complex, np.ndarray], float] | None = None


class SurfaceJet(BaseModel):
    model_config = ConfigDict(frozen=True)

    nu: complex
    r0: float
    eta0: complex
    psi0: float
    sigma0: complex

    @model_validator(mode="after")
    def _radii(self):
        if self.psi0 < abs(self.sigma0) - 1e-12:
            raise ValueError(f"psi0 = {self.psi0} is smaller than |sigma0| = {abs(self.sigma0)}")
        return self

    @property
    def D(self) -> float:
        return 1.0 + abs(self.nu) ** 2

    @property
    def delta(self) -> float:
        return self.psi0 ** 2 - abs(self.sigma0) ** 2

    @property
    def curvature_radii(self) -> tuple[float, float]:
        return self.psi0 + abs(self.sigma0), self.psi0 - abs(self.sigma0)


class HypersurfaceSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    nu: complex
    A: float
    line: OrientedLineCoords
    eps: float | None = None


class LineKnot(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    u: np.ndarray
    nu: np.ndarray
    A: np.ndarray
    closed: bool = False

    @field_validator("u", "A", mode="before")
    @classmethod
    def _real(cls, v):
        return np.asarray(v, dtype=float)

    @field_validator("nu", mode="before")
    @classmethod
    def _complex(cls, v):
        return np.asarray(v, dtype=complex)

    @model_validator(mode="after")
    def _shape(self):
        n = self.u.shape[0]
        if self.u.ndim != 1 or self.nu.shape != (n,) or self.A.shape != (n,):
            raise ValueError("u, nu and A must be 1-d arrays of equal length")
        if n < 5:
            raise ValueError("A knot needs at least 5 samples")
        if not (np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.nu)) and np.all(np.isfinite(self.A))):
            raise ValueError("Knot samples must be finite")
        if self.closed and (abs(self.nu[0] - self.nu[-1]) > 1e-8
                            or abs(math.remainder(self.A[0] - self.A[-1], 2 * math.pi)) > 1e-8):
            raise ValueError("Closed knot: first and last samples differ")
        return self


class LegendrianFlags(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: bool
    beta: bool
    tangent_to_c: bool
    normal_to_c: bool
    curvature_line_or_umbilic: bool


class ContactForms(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    omega_plus: np.ndarray
    omega_minus: np.ndarray
    defect_plus: float
    defect_minus: float


class Trajectory(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    t: np.ndarray
    nu: np.ndarray
    A: np.ndarray


# ── Space forms ───────────────────────────────────────────────────────────────

class SpaceFormFlag(BaseModel):
    """Oriented geodesic x∧y of S³_ε: <x,x> = 1, <y,y> = ε, <x,y> = 0."""
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x: np.ndarray
    y: np.ndarray
    sign: SpaceFormSign = 1

    @field_validator("x", "y", mode="before")
    @classmethod
    def _vec(cls, v):
        return as_point(v, 4)

    @model_validator(mode="after")
    def _normalized(self):
        error = self.normalization_error()
        if error > FLAG_TOL:
            raise ValueError(f"Flag normalization violated by {error:.3g}")
        return self

    def normalization_error(self) -> float:
        g = eps_gram(self.sign)
        checks = (self.x @ g @ self.x - 1.0, self.y @ g @ self.y - self.sign, self.x @ g @ self.y)
        return float(max(abs(c) for c in checks))


class SurfaceFramePoint(BaseModel):
    """
    Adapted frame of a surface in S³_ε at one point. v1, v2 are the connection
    coefficients of the frame: the e2-component of the covariant derivative of e1
    along e1 and e2.
    """
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    phi: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    N: np.ndarray
    k1: float
    k2: float
    v1: float = 0.0
    v2: float = 0.0
    sign: SpaceFormSign = 1

    @field_validator("phi", "e1", "e2", "N", mode="before")
    @classmethod
    def _vec(cls, v):
        return as_point(v, 4)

    @model_validator(mode="after")
    def _orthonormal(self):
        frame = np.vstack([self.phi, self.e1, self.e2, self.N])
        gram = frame @ eps_gram(self.sign) @ frame.T
        expected = np.diag([1.0, self.sign, self.sign, self.sign])
        if np.max(np.abs(gram - expected)) > 1e-8:
            raise ValueError("Frame (phi, e1, e2, N) is not orthonormal")
        if np.linalg.det(frame) <= 0:
            raise ValueError("Frame (phi, e1, e2, N) is not positively oriented")
        return self


class SpaceFormLegendrianFlags(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: bool
    beta: bool
    normal_to_c: bool
    curvature_line_or_umbilic: bool


# ── Intersection tori ─────────────────────────────────────────────────────────

class IntersectionConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    r1: float = Field(gt=0)
    r2: float = Field(gt=0)
    l: float = Field(ge=0)

    @model_validator(mode="after")
    def _ordered(self):
        if self.r1 < self.r2:
            raise ValueError(f"Need r1 >= r2, got r1={self.r1}, r2={self.r2}")
        if self.l == 0 and self.r1 == self.r2:
            raise ValueError("Identical spheres (l = 0, r1 = r2) have no isolated intersection")
        return self


class TorusSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    phi: float
    theta: float
    branch: Branch
    line: OrientedLineCoords
    eta_phase: float


class TorusMetricCheck(BaseModel):
    model_config = ConfigDict(frozen=True)

    det_closed: float
    det_numeric: float
    complex_point: bool


class BruteForceResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    case: IntersectionCase
    components: int
    grid_n: int
    admissible_phi: np.ndarray
    points: np.ndarray  # rows: phi, theta, branch (+1/-1), Re xi, Im xi, Re eta, Im eta
