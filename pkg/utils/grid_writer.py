# utils/grid_writer.py
"""
Grid Writer - CSV and 16-bit PGM export of sweep maps, CSV trajectories
"""

from pathlib import Path
from typing import Dict, List, Union

import numpy as np
import pandas as pd

from core.dynamics import Trajectory
from core.errors import DomainError
from core.run_config import UNITS_LINE
from core.sweep import GridSpec, SweepGrid

FLOAT_FORMAT = '%.11e'
AXIS_HEADERS = ['dphi_dc', 'phi_rf']
TRAJECTORY_HEADERS = ['t_ns', 'p0', 'p1', 'p2', 'p3']
PGM_MAXVAL = 65535

PathLike = Union[str, Path]


def _prepare(path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def grid_frame(grid: SweepGrid) -> pd.DataFrame:
    """Long-format table of a map: phi_rf outer, dphi_dc inner"""
    phi_rf, dphi = np.meshgrid(grid.spec.phi_rf_axis(), grid.spec.dphi_axis(), indexing='ij')
    return pd.DataFrame({
        'dphi_dc': dphi.ravel(),
        'phi_rf': phi_rf.ravel(),
        grid.quantity: grid.values.ravel(),
    })


def write_grid_csv(grid: SweepGrid, path: PathLike) -> Path:
    """
    Write a map as CSV

    Layout: '# key = value' metadata lines (units first), the header
    'dphi_dc,phi_rf,<quantity>', then one row per grid node.
    """
    path = _prepare(path)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(f"# units = {UNITS_LINE}\n")
        for key, value in grid.metadata.items():
            f.write(f"# {key} = {value}\n")
        grid_frame(grid).to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return path


def _read_metadata(path: Path) -> Dict[str, str]:
    metadata: Dict[str, str] = {}
    with open(path, 'r', encoding='utf-8') as f:
        for line in f:
            if not line.startswith('#'):
                break
            key, _, value = line[1:].partition('=')
            metadata[key.strip()] = value.strip()
    metadata.pop('units', None)
    return metadata


def read_grid_csv(path: PathLike) -> SweepGrid:
    """
    Parse a CSV written by write_grid_csv back into a SweepGrid

    Raises:
        DomainError: metadata or table do not describe a complete grid
    """
    path = Path(path)
    metadata = _read_metadata(path)
    table = pd.read_csv(path, comment='#')

    columns: List[str] = list(table.columns)
    if len(columns) != 3 or columns[:2] != AXIS_HEADERS:
        raise DomainError(f"{path}: unexpected header {columns}")
    quantity = columns[2]

    try:
        spec = GridSpec(
            dphi_min=float(metadata['grid.dphi_min']),
            dphi_max=float(metadata['grid.dphi_max']),
            dphi_steps=int(metadata['grid.dphi_steps']),
            phi_rf_min=float(metadata['grid.phi_rf_min']),
            phi_rf_max=float(metadata['grid.phi_rf_max']),
            phi_rf_steps=int(metadata['grid.phi_rf_steps']),
        )
    except (KeyError, ValueError) as e:
        raise DomainError(f"{path}: incomplete grid metadata ({e})") from e

    if len(table) != spec.phi_rf_steps * spec.dphi_steps:
        raise DomainError(f"{path}: {len(table)} rows for a {spec.phi_rf_steps}x{spec.dphi_steps} grid")

    return SweepGrid(
        spec=spec,
        model=metadata.get('model', ''),
        values=table[quantity].to_numpy(dtype=float).reshape(spec.shape),
        metadata=metadata,
        quantity=quantity,
    )


def write_grid_pgm(grid: SweepGrid, path: PathLike, vmin: float = 0.0, vmax: float = 1.0) -> Path:
    """
    Write a map as binary 16-bit grayscale PGM (P5)

    Rows run from the largest phi_rf down; pixel values are
    round(65535 * clamp((v - vmin) / (vmax - vmin))), big-endian.
    """
    if not vmax > vmin:
        raise DomainError(f"vmax ({vmax}) must exceed vmin ({vmin})")

    scaled = np.clip((grid.values - vmin) / (vmax - vmin), 0.0, 1.0)
    pixels = np.rint(scaled[::-1, :] * PGM_MAXVAL).astype('>u2')
    height, width = pixels.shape
    header = f"P5\n{width} {height}\n{PGM_MAXVAL}\n".encode('ascii')

    path = _prepare(path)
    with open(path, 'wb') as f:
        f.write(header)
        f.write(pixels.tobytes())
    return path


def write_trajectory_csv(trajectory: Trajectory, path: PathLike) -> Path:
    """Write a trajectory with columns t_ns, p0..p3"""
    table = pd.DataFrame(
        np.column_stack([trajectory.times, trajectory.states]),
        columns=TRAJECTORY_HEADERS,
    )
    path = _prepare(path)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        table.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return path
