"""
Intersection of the tangent hypersurfaces of two round spheres in R³.

Sphere 1 has radius r1 and centre 0, sphere 2 radius r2 ≤ r1 and centre (0, 0, l).
Lines are sampled by the polar angle φ and azimuth θ of their direction,
ξ = tan(φ/2) e^{iθ}, and a branch choosing the sign of √(1 − K²).
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from core import tensor_core
from core.errors import ConsistencyError, DomainError, ExistenceError, PoleError
from core.line_space_flat import (
    flip_orientation, line_direction, line_space_metric_field, line_to_points, perpendicular_distance,
    surface_jet, tangent_hypersurface_point,
)
from core.models import (
    Branch, BruteForceResult, IntersectionCase, IntersectionConfig, OrientedLineCoords, TorusMetricCheck,
    TorusSample,
)
from core.surfaces import round_sphere_support

logger = logging.getLogger(__name__)

CASE_BAND = 1e-12
ROOT_TOL = 1e-6
MIN_GRID = 64
COMPLEX_POINT_TOL = 1e-8
BAND_ROWS = 4


def classify(cfg: IntersectionConfig) -> IntersectionCase:
    lo, hi = cfg.r1 - cfg.r2, cfg.r1 + cfg.r2
    band = CASE_BAND * max(cfg.l, cfg.r1)
    if abs(cfg.l - lo) <= band:
        return "circle"
    if cfg.l < lo:
        return "empty"
    if cfg.l <= hi + band:
        return "torus"
    return "two_tori"


def K_of_phi(cfg: IntersectionConfig, phi: float) -> float:
    s = math.sin(phi)
    if cfg.l == 0 or s <= 0:
        raise DomainError(f"K is undefined for l = {cfg.l}, phi = {phi}")
    return (cfg.r1 ** 2 - cfg.r2 ** 2 + cfg.l ** 2 * s * s) / (2 * cfg.l * cfg.r1 * s)


def in_existence_region(cfg: IntersectionConfig, phi: float) -> bool:
    x = cfg.l * math.sin(phi)
    return cfg.r1 - cfg.r2 <= x <= cfg.r1 + cfg.r2


def existence_phi_intervals(cfg: IntersectionConfig) -> list[tuple[float, float]]:
    """Closed φ-intervals in (0, π) on which |K| ≤ 1."""
    if cfg.l == 0 or cfg.l < cfg.r1 - cfg.r2:
        return []
    low = math.asin(min(1.0, (cfg.r1 - cfg.r2) / cfg.l))
    if cfg.l <= cfg.r1 + cfg.r2:
        return [(low, math.pi - low)]
    high = math.asin((cfg.r1 + cfg.r2) / cfg.l)
    return [(low, high), (math.pi - high, math.pi - low)]


def _unit_root(K: float, branch: Branch) -> complex:
    root = math.sqrt(max(0.0, 1.0 - K * K))
    return complex(-K, root if branch == "plus" else -root)


def torus_point(cfg: IntersectionConfig, phi: float, theta: float, branch: Branch) -> TorusSample:
    K = K_of_phi(cfg, phi)
    if abs(K) > 1.0 + 1e-12:
        raise ExistenceError(f"No tangent line at phi = {phi}: |K| = {abs(K):.6g} > 1")
    R = math.tan(phi / 2)
    rot = complex(math.cos(theta), math.sin(theta))
    u = _unit_root(min(1.0, max(-1.0, K)), branch)
    line = OrientedLineCoords(xi=R * rot, eta=0.5 * (1 + R * R) * cfg.r1 * u * rot)
    return TorusSample(phi=phi, theta=theta % (2 * math.pi), branch=branch, line=line,
                       eta_phase=math.atan2((u * rot).imag, (u * rot).real) % (2 * math.pi))


def _distance_residuals(cfg: IntersectionConfig, p0: np.ndarray, d: np.ndarray) -> tuple[float, float]:
    out = []
    for centre, radius in ((np.zeros(3), cfg.r1), (np.array([0.0, 0.0, cfg.l]), cfg.r2)):
        out.append(abs(float(np.linalg.norm(np.cross(centre - p0, d))) - radius))
    return out[0], out[1]


def tangency_residuals(cfg: IntersectionConfig, line: OrientedLineCoords) -> tuple[float, float]:
    """|distance(centre_i, line) − r_i| computed from points of the line in R³."""
    return _distance_residuals(cfg, line_to_points(line, 0.0), line_direction(line))


def flip_sample(cfg: IntersectionConfig, sample: TorusSample) -> TorusSample:
    """The same line with reversed orientation, as a torus sample (φ ↦ π − φ, θ ↦ θ + π, other branch)."""
    other: Branch = "minus" if sample.branch == "plus" else "plus"
    return torus_point(cfg, math.pi - sample.phi, sample.theta + math.pi, other)


def axis_lines(cfg: IntersectionConfig) -> list[tuple[np.ndarray, np.ndarray]]:
    """The two oriented lines normal to both spheres, as (point, direction): the centre axis."""
    if cfg.l == 0:
        raise DomainError("Concentric spheres share every normal line")
    origin = np.zeros(3)
    return [(origin, np.array([0.0, 0.0, 1.0])), (origin, np.array([0.0, 0.0, -1.0]))]


def axis_residuals(cfg: IntersectionConfig) -> list[tuple[float, float]]:
    """Tangency residuals of both axis lines; both entries are (r1, r2), so the axis is never a tangent line."""
    return [_distance_residuals(cfg, p, d) for p, d in axis_lines(cfg)]


# ── Induced metric ────────────────────────────────────────────────────────────

def sigma_lambda(cfg: IntersectionConfig, phi: float) -> tuple[float, float]:
    """(|σ|², λ) of the intersection torus at polar angle φ."""
    x2 = (cfg.l * math.sin(phi)) ** 2
    P = x2 - (cfg.r1 - cfg.r2) ** 2
    Q = (cfg.r1 + cfg.r2) ** 2 - x2
    if P <= 0 or Q <= 0:
        raise PoleError(f"phi = {phi} is on or outside the boundary of the existence region")
    c = math.cos(phi)
    sigma_sq = cfg.r1 ** 2 * cfg.r2 ** 2 * cfg.l ** 2 * c * c / (P * Q)
    lam = -cfg.l * (x2 - cfg.r1 ** 2 - cfg.r2 ** 2) * c / (2 * math.sqrt(P * Q))
    return sigma_sq, lam


def det_closed(cfg: IntersectionConfig, phi: float) -> float:
    return -0.25 * cfg.l ** 2 * math.cos(phi) ** 2


def torus_metric_check(cfg: IntersectionConfig, phi: float, theta: float, branch: Branch,
                       h: float = tensor_core.FD_STEP) -> TorusMetricCheck:
    """
    det_numeric is the determinant of the neutral metric pulled back to (φ, θ),
    divided by ¼ sin²φ so it is comparable with λ² − |σ|².
    """
    torus_point(cfg, phi, theta, branch)

    def chart(p: np.ndarray) -> np.ndarray:
        return torus_point(cfg, p[0], p[1], branch).line.as_real()

    pulled = tensor_core.pullback_metric(chart, line_space_metric_field(), [phi, theta], h)
    sigma_sq, _ = sigma_lambda(cfg, phi)
    return TorusMetricCheck(
        det_closed=det_closed(cfg, phi),
        det_numeric=float(np.linalg.det(pulled) / (0.25 * math.sin(phi) ** 2)),
        complex_point=math.sqrt(sigma_sq) <= COMPLEX_POINT_TOL,
    )


# ── Brute-force oracle ────────────────────────────────────────────────────────

def _row_roots(cfg: IntersectionConfig, phi: float) -> np.ndarray | None:
    """Unit-modulus roots of l r1 sinφ z² + (l² sin²φ + r1² − r2²) z + l r1 sinφ, ordered plus/minus."""
    s = math.sin(phi)
    a = cfg.l * cfg.r1 * s
    roots = np.roots([a, cfg.l ** 2 * s * s + cfg.r1 ** 2 - cfg.r2 ** 2, a])
    if len(roots) != 2 or np.any(np.abs(np.abs(roots) - 1.0) > ROOT_TOL):
        return None
    return roots[np.argsort(-roots.imag)]


def _row_phis(cfg: IntersectionConfig, n: int) -> np.ndarray:
    """Regular rows πi/n plus BAND_ROWS interior rows of every existence interval, sorted and deduplicated."""
    extra = [lo + (hi - lo) * m / (BAND_ROWS + 1)
             for lo, hi in existence_phi_intervals(cfg) for m in range(1, BAND_ROWS + 1)]
    return np.unique(np.concatenate([math.pi * np.arange(1, n) / n, extra]))


def brute_force_intersection(cfg: IntersectionConfig, grid_n: int = MIN_GRID, workers: int = 4) -> BruteForceResult:
    """
    Scans rows φ in (0, π), θ_j = 2πj/n, solves the tangency quadratic on every
    row and counts connected components of the solution set.

    Rows are the regular ones πi/n together with interior rows of each existence
    interval, so a band narrower than π/n is still seen. The two branches are glued
    on every admissible row whose neighbour is inadmissible or missing: past such a
    row either the roots merge or the band reaches a pole, where the plus branch at
    θ and the minus branch at θ + π describe the same line.
    """
    if grid_n < MIN_GRID or grid_n % 2:
        raise DomainError(f"grid_n must be an even integer >= {MIN_GRID}, got {grid_n}")
    n = grid_n
    phis = _row_phis(cfg, n)
    thetas = 2 * math.pi * np.arange(n) / n
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(lambda phi: _row_roots(cfg, phi), phis))

    admissible = [i for i, r in enumerate(rows) if r is not None]
    if not admissible:
        logger.debug("brute_force_intersection: no admissible rows among %d", len(phis))
        return BruteForceResult(case="empty", components=0, grid_n=n, admissible_phi=np.array([]),
                                points=np.empty((0, 7)))

    index = {i: k for k, i in enumerate(admissible)}

    def node(i: int, j: int, b: int) -> int:
        return (index[i] * n + j) * 2 + b

    src, dst = [], []
    for i in admissible:
        for j in range(n):
            for b in (0, 1):
                src.append(node(i, j, b))
                dst.append(node(i, (j + 1) % n, b))
                if i + 1 in index:
                    src.append(node(i, j, b))
                    dst.append(node(i + 1, j, b))
        if i - 1 not in index or i + 1 not in index:
            for j in range(n):
                src.append(node(i, j, 0))
                dst.append(node(i, j, 1))
    size = len(admissible) * n * 2
    graph = coo_matrix((np.ones(len(src)), (src, dst)), shape=(size, size)).tocsr()
    components, _ = connected_components(graph, directed=False)

    separations = [abs(rows[i][0] - rows[i][1]) for i in admissible]
    if components == 1:
        case: IntersectionCase = "circle" if max(separations) <= ROOT_TOL else "torus"
    elif components == 2:
        case = "two_tori"
    else:
        raise ConsistencyError(f"Brute-force intersection found {components} components")

    points = []
    for i in admissible:
        phi = phis[i]
        R = math.tan(phi / 2)
        for theta in thetas:
            rot = complex(math.cos(theta), math.sin(theta))
            for sign, z in zip((1.0, -1.0), rows[i]):
                xi = R * rot
                eta = 0.5 * (1 + R * R) * cfg.r1 * z * rot
                points.append([phi, theta, sign, xi.real, xi.imag, eta.real, eta.imag])
    logger.debug("brute_force_intersection: %d admissible rows, %d components -> %s",
                 len(admissible), components, case)
    return BruteForceResult(case=case, components=int(components), grid_n=n,
                            admissible_phi=phis[admissible], points=np.array(points))


# ── Constant-angle hypersurfaces of a round sphere ────────────────────────────

def effective_radius(radius: float, eps: float) -> float:
    """Radius of the concentric sphere whose tangent lines are the lines meeting the sphere at angle a, eps = tan(a/2)."""
    return 2 * eps * radius / (1 + eps * eps)


def constant_angle_effective_radius(radius: float, eps: float, n: int = 64, seed: int = 0) -> tuple[float, float]:
    """
    Fit the effective radius from the perpendicular distances of n random lines
    of the constant-angle hypersurface. Returns (mean distance, max deviation).
    """
    if not 0 < eps <= 1:
        raise DomainError(f"eps must lie in (0, 1], got {eps}")
    rng = np.random.default_rng(seed)
    S = round_sphere_support(radius)
    distances = []
    for _ in range(n):
        nu = complex(*rng.uniform(-0.6, 0.6, size=2))
        A = rng.uniform(0, 2 * math.pi)
        line = tangent_hypersurface_point(surface_jet(S, nu), A, eps)
        distances.append(perpendicular_distance(line))
    distances = np.array(distances)
    mean = float(distances.mean())
    return mean, float(np.max(np.abs(distances - mean)))


def flip_check(cfg: IntersectionConfig, sample: TorusSample) -> float:
    """Distance in line coordinates between the reversed line and the flipped torus sample."""
    flipped = flip_orientation(sample.line)
    target = flip_sample(cfg, sample).line
    return float(np.linalg.norm(flipped.as_real() - target.as_real()))
