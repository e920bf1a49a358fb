"""
CSV artifacts: knots, trajectories and intersection point clouds.
Plain numeric columns with a one-line header so numpy and spreadsheets both read them.
"""
import logging
import os
import numpy as np

from core.errors import DomainError
from core.models import LineKnot, Trajectory

logger = logging.getLogger(__name__)

KNOT_COLUMNS = ("u", "re_nu", "im_nu", "A")
TRAJECTORY_COLUMNS = ("t", "re_nu", "im_nu", "A")
POINT_CLOUD_COLUMNS = ("phi", "theta", "branch", "re_xi", "im_xi", "re_eta", "im_eta")


def _write(path: str, columns: tuple[str, ...], rows: np.ndarray) -> str:
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    np.savetxt(path, rows, delimiter=",", header=",".join(columns), comments="", fmt="%.17g")
    logger.debug("wrote %d rows to %s", len(rows), path)
    return path


def _read(path: str, columns: tuple[str, ...]) -> np.ndarray:
    if not os.path.isfile(path):
        raise DomainError(f"CSV file not found: {path}")
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
    if tuple(h.strip() for h in header) != columns:
        raise DomainError(f"{path}: expected columns {','.join(columns)}, got {','.join(header)}")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.shape[1] != len(columns):
        raise DomainError(f"{path}: rows must have {len(columns)} values")
    return data


def write_knot_csv(path: str, knot: LineKnot) -> str:
    return _write(path, KNOT_COLUMNS, np.column_stack([knot.u, knot.nu.real, knot.nu.imag, knot.A]))


def read_knot_csv(path: str, closed: bool = False) -> LineKnot:
    data = _read(path, KNOT_COLUMNS)
    try:
        return LineKnot(u=data[:, 0], nu=data[:, 1] + 1j * data[:, 2], A=data[:, 3], closed=closed)
    except ValueError as e:
        raise DomainError(f"{path}: {e}") from e


def write_trajectory_csv(path: str, traj: Trajectory) -> str:
    return _write(path, TRAJECTORY_COLUMNS, np.column_stack([traj.t, traj.nu.real, traj.nu.imag, traj.A]))


def read_trajectory_csv(path: str) -> Trajectory:
    data = _read(path, TRAJECTORY_COLUMNS)
    return Trajectory(t=data[:, 0], nu=data[:, 1] + 1j * data[:, 2], A=data[:, 3])


def write_point_cloud_csv(path: str, points: np.ndarray) -> str:
    points = np.asarray(points, dtype=float).reshape(-1, len(POINT_CLOUD_COLUMNS))
    return _write(path, POINT_CLOUD_COLUMNS, points)
