"""
Subcommand bodies. Each takes the parsed arguments and the effective settings and
returns a RunReport; nothing here prints.
"""
import logging
import math
import numpy as np

from cli.report import RunReport, check
from core import compactification, intersection_tori, io, tensor_core
from core import line_space_flat as flat
from core import line_space_spaceform as sf
from core.errors import ConsistencyError, PoleError
from core.models import CompactChartPoint, IntersectionConfig, LineKnot
from core.settings import Settings
from core.surfaces import (
    CliffordTorus, LatitudeSphere, ellipsoid_support, numeric_principal_frame, round_sphere_support,
)

logger = logging.getLogger(__name__)

FD_CHECK_TOL = 1e-6
RICCI_TOL = 1e-4
REEB_TOL = 1e-7
LINKING_TOL = 1e-3
DEFAULT_GRID = 128


def _floor(settings: Settings, tol: float) -> float:
    # --tol can loosen a finite-difference check but never tighten it below its step error
    return max(tol, settings.tol)


def _report(command: str, args) -> RunReport:
    skip = {"func", "command", "env_file", "no_timestamp", "out"}
    inputs = {k: v for k, v in vars(args).items() if k not in skip}
    return RunReport(command=command, inputs=inputs)


def _angle_gap(a: float, b: float, period: float = math.pi) -> float:
    d = abs(a - b) % period
    return min(d, period - d)


# ── compactify ────────────────────────────────────────────────────────────────

def cmd_compactify(args, settings: Settings) -> RunReport:
    report = _report("compactify", args)
    rng = np.random.default_rng(settings.seed)
    xs = rng.uniform(-10.0, 10.0, size=(args.samples, 4))

    conformal = max(compactification.conformal_pullback_defect(x) for x in xs)
    report.checks.append(check("conformality_max_rel_defect", 0.0, conformal, _floor(settings, 1e-7)))

    qs = np.linspace(-math.pi / 2, math.pi / 2, 23)[1:-1]
    thetas = rng.uniform(0, 2 * math.pi, size=(len(qs), 2))
    good = sum(tensor_core.signature(compactification.boundary_pullback(q, *th)) == (1, 1, 1)
               for q, th in zip(qs, thetas))
    report.checks.append(check("boundary_signature_0_plus_minus", len(qs), good))

    half = math.pi / 2
    for label, q, expected in (("north", half, 0.0), ("equator", 0.0, 2.0), ("south", -half, 0.0)):
        value = compactification.grad_omega_boundary_locus(CompactChartPoint(p=half, q=q))
        report.checks.append(check(f"grad_omega_{label}", expected, value, settings.tol))

    link = compactification.gauss_linking_number(*compactification.hopf_link_circles())
    report.checks.append(check("hopf_linking_number", 1.0, abs(link), LINKING_TOL))

    gap = compactification.ball_injectivity_gap(xs)
    report.checks.append(check("ball_map_injective", True, gap > 0))

    q, t1, t2 = 0.3, 1.0, 2.0
    for (plane, form), label in zip(compactification.boundary_null_planes(q, t1, t2), ("alpha", "beta")):
        defect = tensor_core.frobenius_defect(form, [q, t1, t2], settings.fd_step)
        report.checks.append(check(f"boundary_{label}_integrable", 0.0, defect, settings.tol))

    report.results = {"max_conformal_defect": conformal, "linking_number": link, "injectivity_gap": gap}
    return report


# ── curvature ─────────────────────────────────────────────────────────────────

def cmd_curvature(args, settings: Settings) -> RunReport:
    report = _report("curvature", args)
    p, q, t1, t2 = args.at
    field = compactification.einstein_static_metric()
    point = [p, q, t1, t2]
    ric = tensor_core.ricci(field, point, settings.curvature_step)
    expected = {
        "R_pp": (0, 2.0), "R_qq": (1, 2.0),
        "R_theta1theta1": (2, math.sin(p + q) ** 2), "R_theta2theta2": (3, math.sin(p - q) ** 2),
    }
    for name, (k, value) in expected.items():
        report.checks.append(check(name, value, ric[k, k], _floor(settings, RICCI_TOL)))
    off = float(np.max(np.abs(ric - np.diag(np.diag(ric)))))
    report.checks.append(check("ricci_off_diagonal", 0.0, off, _floor(settings, RICCI_TOL)))
    scalar = tensor_core.scalar_curvature(field, point, settings.curvature_step)
    report.checks.append(check("scalar_curvature", 0.0, scalar, _floor(settings, RICCI_TOL)))

    det = float(np.linalg.det(field(point)))
    det_closed = math.sin(p + q) ** 2 * math.sin(p - q) ** 2 / 64.0
    report.checks.append(check("metric_determinant", det_closed, det, settings.tol))
    sig = tensor_core.signature(field(point))
    report.checks.append(check("signature", "2,2,0", ",".join(map(str, sig))))

    report.results = {"ricci": ric, "scalar_curvature": scalar, "determinant": det}
    return report


# ── parity ────────────────────────────────────────────────────────────────────

def cmd_parity(args, settings: Settings) -> RunReport:
    report = _report("parity", args)
    verdict = compactification.neutral_existence_parity(args.chi, args.tau)
    # χ even and χ ≡ τ (mod 4) is the same condition written differently
    independent = "admits" if args.chi % 2 == 0 and (args.chi - args.tau) % 4 == 0 else "obstructed"
    report.checks.append(check("parity_rule_consistent", independent, verdict))
    report.results = {"verdict": verdict}
    return report


# ── linespace ─────────────────────────────────────────────────────────────────

def _random_states(rng: np.random.Generator, n: int, radius: float = 0.8) -> list[tuple[complex, float]]:
    out = []
    while len(out) < n:
        x, y = rng.uniform(-radius, radius, size=2)
        if math.hypot(x, y) < radius:
            out.append((complex(x, y), rng.uniform(0, 2 * math.pi)))
    return out


def cmd_linespace(args, settings: Settings) -> RunReport:
    report = _report("linespace", args)
    S = ellipsoid_support(args.axes)
    rng = np.random.default_rng(settings.seed)
    chart = flat.hypersurface_chart_map(S, None, settings.surface_step)
    metric = flat.line_space_metric_field()

    def section(z: complex) -> complex:
        return flat.surface_jet(S, z, settings.surface_step).eta0

    metric_err = det_max = scan_err = lagrangian = 0.0
    scan_counts = set()
    for nu, A in _random_states(rng, args.samples):
        jet = flat.surface_jet(S, nu, settings.surface_step)
        closed = flat.induced_metric_H(jet, A)
        numeric = tensor_core.pullback_metric(chart, metric, [nu.real, nu.imag, A], settings.fd_step)
        metric_err = max(metric_err, float(np.max(np.abs(numeric - closed)) / max(1.0, np.max(np.abs(closed)))))
        det_max = max(det_max, abs(float(np.linalg.det(numeric))))

        roots = flat.null_direction_scan(jet, A)
        scan_counts.add(len(roots))
        expected = sorted(b % math.pi for b in flat.null_direction_angles(jet, A))
        if len(roots) == 2:
            same = max(_angle_gap(roots[0], expected[0]), _angle_gap(roots[1], expected[1]))
            swapped = max(_angle_gap(roots[0], expected[1]), _angle_gap(roots[1], expected[0]))
            scan_err = max(scan_err, min(same, swapped))

        lagrangian = max(lagrangian, abs(flat.lagrangian_defect(section, nu, settings.fd_step)))

    report.checks += [
        check("induced_metric_matches_pullback", 0.0, metric_err, _floor(settings, FD_CHECK_TOL)),
        check("tangent_hypersurface_null", 0.0, det_max, _floor(settings, 1e-8)),
        check("null_scan_root_count", "2", ",".join(str(c) for c in sorted(scan_counts))),
        check("null_scan_matches_angles", 0.0, scan_err, _floor(settings, 1e-8)),
        check("normal_congruence_lagrangian", 0.0, lagrangian, _floor(settings, FD_CHECK_TOL)),
    ]
    report.results = {"surface": S.name, "max_metric_defect": metric_err, "max_det": det_max,
                      "max_scan_mismatch": scan_err, "max_lagrangian_defect": lagrangian}
    return report


# ── contact ───────────────────────────────────────────────────────────────────

def cmd_contact(args, settings: Settings) -> RunReport:
    report = _report("contact", args)
    S = ellipsoid_support(args.axes)
    rng = np.random.default_rng(settings.seed)

    plus_err = minus_err = angle_err = 0.0
    for nu, A in _random_states(rng, args.samples):
        jet = flat.surface_jet(S, nu, settings.surface_step)
        forms = flat.contact_forms_H(jet, A)
        numeric = flat.contact_defect_numeric(S, nu, A, "plus", settings.fd_step)
        plus_err = max(plus_err, abs(numeric - forms.defect_plus) / abs(forms.defect_plus))
        numeric = flat.contact_defect_numeric(S, nu, A, "minus", settings.fd_step)
        minus_err = max(minus_err, abs(numeric - forms.defect_minus))
        pulled = flat.constant_angle_pullback(S, nu, A, args.eps, settings.fd_step)
        angle_err = max(angle_err, abs(np.linalg.det(pulled) - flat.constant_angle_nullity(jet, A, args.eps)))

    tol = _floor(settings, FD_CHECK_TOL)
    report.checks += [
        check("flat_defect_plus", 0.0, plus_err, tol),
        check("flat_defect_minus", 0.0, minus_err, tol),
        check("constant_angle_nullity", 0.0, angle_err, tol),
    ]

    frame_err = chart_err = 0.0
    for rho in np.linspace(0.3, 2.8, 10):
        for sign in (1, -1):
            sphere = LatitudeSphere(float(rho), sign)
            a, b, theta = rng.uniform(0.6, 2.5), rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)
            fr = sphere.frame(a, b)
            d3, d2 = sf.contact_defects_spaceform(fr, theta)
            frame_err = max(frame_err, abs(d3 + 1.0), abs(d2 + fr.k1 * fr.k2))
            if sign == 1:
                c3, c2 = sf.contact_defects_chart(sphere, a, b, theta, settings.fd_step)
                chart_err = max(chart_err, abs(c3 + 1.0), abs(c2 + fr.k1 * fr.k2))
    report.checks += [
        check("spaceform_defects_frame", 0.0, frame_err, tol),
        check("spaceform_defects_chart", 0.0, chart_err, _floor(settings, 1e-5)),
    ]
    report.results = {"surface": S.name, "max_defect_plus_rel_err": plus_err,
                      "max_spaceform_frame_err": frame_err, "max_spaceform_chart_err": chart_err}
    return report


# ── legendrian ────────────────────────────────────────────────────────────────

FLAT_FLAGS = ("alpha", "beta", "tangent_to_c", "normal_to_c", "curvature_line_or_umbilic")
SPACEFORM_FLAGS = ("alpha", "beta", "normal_to_c", "curvature_line_or_umbilic")


def _flag_string(flags, names) -> str:
    return ",".join(name for name in names if getattr(flags, name)) or "none"


def flat_legendrian_rows(axes=(1.0, 1.5, 2.0), n: int = 401) -> list[tuple[str, LineKnot, object, str]]:
    """(name, knot, surface, expected flags) rows covering the flat truth table."""
    E = ellipsoid_support(axes)
    sphere = round_sphere_support(1.0)
    s = np.linspace(-0.5, 0.5, n)
    diag = np.linspace(0.1, 0.5, n)
    diag_nu = diag * complex(math.cos(math.pi / 6), math.sin(math.pi / 6))
    u = 2 * math.pi * np.arange(n) / (n - 1)
    circle = 0.5 * np.exp(1j * u)
    circle[-1] = circle[0]
    const = np.ones(n)
    return [
        ("principal_section_A_half_pi", LineKnot(u=s, nu=s, A=const * math.pi / 2), E,
         "beta,normal_to_c,curvature_line_or_umbilic"),
        ("principal_section_A_zero", LineKnot(u=s, nu=s, A=0 * const), E,
         "alpha,tangent_to_c,curvature_line_or_umbilic"),
        ("principal_section_A_quarter_pi", LineKnot(u=s, nu=s, A=const * math.pi / 4), E,
         "curvature_line_or_umbilic"),
        ("diagonal_A_two_thirds_pi", LineKnot(u=diag, nu=diag_nu, A=const * 2 * math.pi / 3), E, "beta"),
        ("diagonal_normal", flat.knot_along_curve(E, diag_nu, diag, "normal"), E, "normal_to_c"),
        ("diagonal_A_zero", LineKnot(u=diag, nu=diag_nu, A=0 * const), E, "none"),
        ("sphere_latitude_tangent", flat.knot_along_curve(sphere, circle, u, "tangent", closed=True), sphere,
         "alpha,tangent_to_c,curvature_line_or_umbilic"),
        ("sphere_latitude_normal", flat.knot_along_curve(sphere, circle, u, "normal", closed=True), sphere,
         "beta,normal_to_c,curvature_line_or_umbilic"),
    ]


def spaceform_legendrian_rows(n: int = 401) -> list[tuple[str, object, tuple, str]]:
    """(name, surface, (u, a, b, theta), expected flags) rows for curves in S³."""
    sphere = LatitudeSphere(1.0)
    u = np.linspace(0.0, 1.0, n)
    meridian_a = 0.8 + u / sphere.size
    b0 = 0.4 * np.ones(n)
    r = 0.6
    torus = CliffordTorus(r)
    helix_theta = math.atan2(math.cos(r), -math.sin(r))
    rows = []
    for theta, expected in ((0.0, "alpha,curvature_line_or_umbilic"),
                            (math.pi / 2, "beta,normal_to_c,curvature_line_or_umbilic"),
                            (math.pi / 4, "curvature_line_or_umbilic")):
        rows.append((f"latitude_meridian_theta_{theta:.4f}", sphere, (u, meridian_a, b0, theta * np.ones(n)),
                     expected))
    rows.append(("clifford_circle_theta_half_pi", torus, (u, 0.2 + u / math.cos(r), b0, math.pi / 2 * np.ones(n)),
                 "beta,normal_to_c,curvature_line_or_umbilic"))
    rows.append(("clifford_helix", torus, (u, 0.2 + u, 0.4 + u, helix_theta * np.ones(n)), "normal_to_c"))
    return rows


def cmd_legendrian(args, settings: Settings) -> RunReport:
    report = _report("legendrian", args)
    tol = args.legendrian_tol
    violations = 0
    rows = {}

    if args.knot:
        S = ellipsoid_support(args.axes)
        knot = io.read_knot_csv(args.knot, closed=args.closed)
        try:
            flags = flat.legendrian_classify(knot, S, tol, settings.surface_step)
            rows["input_knot"] = _flag_string(flags, FLAT_FLAGS)
        except ConsistencyError as e:
            violations += 1
            rows["input_knot"] = str(e)
    else:
        for name, knot, S, expected in flat_legendrian_rows(args.axes):
            try:
                actual = _flag_string(flat.legendrian_classify(knot, S, tol, settings.surface_step), FLAT_FLAGS)
            except ConsistencyError as e:
                violations += 1
                actual = str(e)
            rows[name] = actual
            report.checks.append(check(f"flat_{name}", expected, actual))
        for name, surface, (u, a, b, theta), expected in spaceform_legendrian_rows():
            try:
                flags = sf.legendrian_classify_spaceform(surface, u, a, b, theta, tol=tol)
                actual = _flag_string(flags, SPACEFORM_FLAGS)
            except ConsistencyError as e:
                violations += 1
                actual = str(e)
            rows[name] = actual
            report.checks.append(check(f"spaceform_{name}", expected, actual))

    report.checks.append(check("triangle_violations", 0, violations))
    report.results = {"flags": rows}
    return report


# ── reeb ──────────────────────────────────────────────────────────────────────

def cmd_reeb(args, settings: Settings) -> RunReport:
    report = _report("reeb", args)
    rng = np.random.default_rng(settings.seed)
    E = ellipsoid_support(args.axes)

    norm_err = contract_err = 0.0
    for nu, A in _random_states(rng, args.samples):
        w, dw = flat.reeb_contract_residual(E, nu, A, settings.fd_step)
        norm_err, contract_err = max(norm_err, abs(w)), max(contract_err, dw)

    sphere = LatitudeSphere(args.rho)
    sf_norm = sf_contract = 0.0
    for _ in range(args.samples):
        a, b, theta = rng.uniform(0.6, 2.5), rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)
        w, dw = sf.reeb_contract_residual_spaceform(sphere, a, b, theta, settings.fd_step)
        sf_norm, sf_contract = max(sf_norm, abs(w)), max(sf_contract, dw)

    tol = _floor(settings, REEB_TOL)
    report.checks += [
        check("flat_reeb_normalized", 0.0, norm_err, tol),
        check("flat_reeb_kernel", 0.0, contract_err, tol),
        check("spaceform_reeb_normalized", 0.0, sf_norm, tol),
        check("spaceform_reeb_kernel", 0.0, sf_contract, tol),
    ]

    # the Reeb flow from (ν, A) is the geodesic flow from (ν, A − π/2)
    round_sphere = round_sphere_support(args.rho)
    nu0, A0 = complex(1.0, 0.0), math.pi / 2
    geo = flat.geodesic_flow(round_sphere, (nu0, A0), args.dt, args.steps, settings.surface_step)
    reeb = flat.reeb_flow(round_sphere, (nu0, A0 + math.pi / 2), args.dt, args.steps, settings.surface_step)
    flow_gap = float(max(np.max(np.abs(reeb.nu - geo.nu)), np.max(np.abs(reeb.A - geo.A - math.pi / 2))))
    equator = float(np.max(np.abs(np.abs(geo.nu) - 1.0)))
    report.checks += [
        check("reeb_equals_rotated_geodesic", 0.0, flow_gap, _floor(settings, FD_CHECK_TOL)),
        check("equator_geodesic_stays_on_equator", 0.0, equator, _floor(settings, FD_CHECK_TOL)),
    ]

    states = sf.reeb_flow_spaceform(sphere, [math.pi / 2, 0.3, 0.3], args.dt, args.steps)
    points = np.array([sphere.immersion(a, b)[:3] for a, b, _ in states])
    # a geodesic of the latitude sphere is a great circle: the 3-block points span a plane through 0
    planarity = float(np.linalg.svd(points, compute_uv=False)[-1] / math.sqrt(len(points)))
    report.checks.append(check("spaceform_contact_curve_geodesic", 0.0, planarity, _floor(settings, FD_CHECK_TOL)))

    if args.out:
        report.artifacts.append(io.write_trajectory_csv(args.out, reeb))
    report.results = {"flat_max_kernel_residual": contract_err, "spaceform_max_kernel_residual": sf_contract,
                      "flow_gap": flow_gap, "great_circle_residual": planarity,
                      "time": args.dt * args.steps}
    return report


# ── spaceform ─────────────────────────────────────────────────────────────────

def cmd_spaceform(args, settings: Settings) -> RunReport:
    report = _report("spaceform", args)
    rng = np.random.default_rng(settings.seed)
    surfaces = [("latitude", LatitudeSphere(args.rho, args.sign))]
    if args.sign == 1:
        surfaces.append(("clifford", CliffordTorus(args.r)))

    null_err = pair_err = principal_err = 0.0
    labels_ok = scan_ok = span_ok = True
    for label, surface in surfaces:
        fr = surface.frame(1.1, 0.7)
        curvatures, _ = numeric_principal_frame(surface, 1.1, 0.7)
        principal_err = max(principal_err, float(np.max(np.abs(curvatures - sorted((fr.k1, fr.k2))))))
        for _ in range(args.samples):
            a, b, theta = rng.uniform(0.6, 2.5), rng.uniform(0, 2 * math.pi), rng.uniform(0, 2 * math.pi)
            fr = surface.frame(a, b)
            if abs(fr.k1 * math.cos(theta) ** 2 + fr.k2 * math.sin(theta) ** 2) < 1e-3:
                continue
            flag = sf.hypersurface_flag(fr, theta)
            plus, minus = sf.null_planes_spaceform(fr, theta)
            null_err = max(null_err, float(np.max(np.abs(sf.gram(flag, plus)))),
                           float(np.max(np.abs(sf.gram(flag, minus)))))
            span_ok &= np.linalg.matrix_rank(np.vstack([plus, minus]), tol=1e-9) == 3
            labels_ok &= (sf.classify_plane(flag, tuple(plus)) == "alpha"
                          and sf.classify_plane(flag, tuple(minus)) == "beta")
            e_plus, e_minus = sf.null_pair(fr, theta)
            pair_err = max(pair_err, abs(sf.G_eps(flag, e_plus, e_plus)), abs(sf.G_eps(flag, e_minus, e_minus)))
            planes = sf.null_cone_scan(fr, theta)
            scan_ok &= len(planes) == 2 and all(
                sf.in_span(plus, P[1], 1e-6) or sf.in_span(minus, P[1], 1e-6) for P in planes)

    report.checks += [
        check("null_planes_totally_null", 0.0, null_err, _floor(settings, 1e-10)),
        check("null_planes_labels", True, bool(labels_ok)),
        check("null_pair_is_null", 0.0, pair_err, _floor(settings, 1e-10)),
        check("null_cone_scan_recovers_planes", True, bool(scan_ok)),
        check("null_planes_meet_in_a_line", True, bool(span_ok)),
        check("principal_frame_from_immersion", 0.0, principal_err, _floor(settings, 1e-5)),
    ]

    angle = args.angle
    a, b = 1.1, 0.7
    umbilic = sf.constant_angle_gram_det(surfaces[0][1], a, b, math.pi / 4, angle, settings.fd_step)
    report.checks.append(check("umbilic_constant_angle_null", 0.0, umbilic, _floor(settings, 1e-8)))
    results = {"umbilic_constant_angle_det": umbilic}
    if args.sign == 1:
        torus = surfaces[1][1]
        generic = sf.constant_angle_gram_det(torus, a, b, math.pi / 4, angle, settings.fd_step)
        principal = sf.constant_angle_gram_det(torus, a, b, 0.0, angle, settings.fd_step)
        report.checks += [
            check("clifford_constant_angle_non_null", True, abs(generic) > 1e-6),
            check("clifford_constant_angle_null_on_principal", 0.0, principal, _floor(settings, 1e-8)),
        ]
        results.update(clifford_generic_det=generic, clifford_principal_det=principal)
    report.results = {"max_null_gram": null_err, **results}
    return report


# ── intersect ─────────────────────────────────────────────────────────────────

def _interior_phis(intervals, m: int) -> list[float]:
    return [lo + (hi - lo) * k / (m + 1) for lo, hi in intervals for k in range(1, m + 1)]


def cmd_intersect(args, settings: Settings) -> RunReport:
    report = _report("intersect", args)
    cfg = IntersectionConfig(r1=args.r1, r2=args.r2, l=args.l)
    case = intersection_tori.classify(cfg)
    grid = args.grid or DEFAULT_GRID
    brute = intersection_tori.brute_force_intersection(cfg, grid, settings.workers)
    report.checks.append(check("brute_force_agrees", case, brute.case))

    intervals = intersection_tori.existence_phi_intervals(cfg)
    results = {"case": case, "brute_force_case": brute.case, "components": brute.components,
               "existence_intervals": intervals, "K_range": None, "det_formula_checked": False}

    if case == "circle":
        spread = float(np.max(np.abs(brute.admissible_phi - math.pi / 2))) if len(brute.admissible_phi) else math.inf
        report.checks.append(check("circle_at_equator", True, spread <= math.pi / grid))
    elif case in ("torus", "two_tori"):
        fine = _interior_phis(intervals, 101)
        Ks = [intersection_tori.K_of_phi(cfg, phi) for phi in fine]
        results["K_range"] = [min(Ks), max(Ks)]

        det_err = closed_err = tangency = flip = 0.0
        lorentz = True
        thetas = 2 * math.pi * np.arange(4) / 4 + 0.1
        for phi in _interior_phis(intervals, 4):
            for theta in thetas:
                for branch in ("plus", "minus"):
                    m = intersection_tori.torus_metric_check(cfg, phi, theta, branch)
                    det_err = max(det_err, abs(m.det_numeric - m.det_closed) / max(1.0, abs(m.det_closed)))
                    lorentz &= m.det_closed < 0
                    sample = intersection_tori.torus_point(cfg, phi, theta, branch)
                    tangency = max(tangency, *intersection_tori.tangency_residuals(cfg, sample.line))
                    flip = max(flip, intersection_tori.flip_check(cfg, sample))
            try:
                sigma_sq, lam = intersection_tori.sigma_lambda(cfg, phi)
                closed_err = max(closed_err, abs(lam ** 2 - sigma_sq - intersection_tori.det_closed(cfg, phi)))
            except PoleError:
                logger.debug("sigma_lambda skipped at the pole phi = %s", phi)
        axis_gap = min(min(r) for r in intersection_tori.axis_residuals(cfg))
        report.checks += [
            check("det_formula", 0.0, det_err, _floor(settings, FD_CHECK_TOL)),
            check("lambda_sigma_identity", 0.0, closed_err, _floor(settings, 1e-10)),
            check("tangent_to_both_spheres", 0.0, tangency, _floor(settings, 1e-10)),
            check("orientation_flip", 0.0, flip, _floor(settings, 1e-9)),
            check("axis_not_in_intersection", True, axis_gap > settings.tol),
        ]
        if case == "two_tori":
            report.checks.append(check("lorentz", True, bool(lorentz)))
        results["det_formula_checked"] = det_err <= _floor(settings, FD_CHECK_TOL)

    if args.out:
        report.artifacts.append(io.write_point_cloud_csv(args.out, brute.points))
    report.results = results
    return report


COMMANDS = {
    "compactify": cmd_compactify,
    "curvature": cmd_curvature,
    "linespace": cmd_linespace,
    "contact": cmd_contact,
    "legendrian": cmd_legendrian,
    "reeb": cmd_reeb,
    "spaceform": cmd_spaceform,
    "intersect": cmd_intersect,
    "parity": cmd_parity,
}
