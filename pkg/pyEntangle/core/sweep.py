import json
import logging
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pandas as pd

from pyEntangle.core.hhl import DEFAULT_ROTATION_CONSTANT, HhlProblem, closed_form_tangles
from pyEntangle.core.rank2 import Rank2Family, rank2_characteristic, rank2_f, rank2_p_bounds, rank2_three_tangle
from pyEntangle.internal.errors import ValidationError
from pyEntangle.internal.utils import clamp

log = logging.getLogger('pyEntangle')
__all__ = ['SweepConfig', 'hhl_sweep', 'rank2_curve', 'write_table', 'write_meta', 'FIG4A_COLUMNS',
           'FIG4B_COLUMNS', 'RANK2_COLUMNS']

FIG4A_COLUMNS = ['b0_sq', 'tau3_psi1', 'tau3_rho2', 'tau3_rho3']
FIG4B_COLUMNS = ['b0_sq', 'pi3_psi1', 'pi3_rho2', 'pi3_rho3']
RANK2_COLUMNS = ['p', 'theta', 'tau3_Z', 'f_p', 'convex_hull', 'p_mark']

_SEPARATORS = {'csv': ',', 'tsv': '\t'}


class SweepConfig(object):
    """Settings shared by the sweeping commands.

    Attributes:
        grid_points: Number of b0^2 values, at least 2
        b0_squared_range: Closed interval swept by b0^2
        rotation_constant: C, in (0, 1]
        output_dir: Directory receiving data files
        format: 'csv' or 'tsv'
        workers: Threads used for the b0^2 sweep; results are merged in grid order

    """
    def __init__(self, grid_points=101, rotation_constant=DEFAULT_ROTATION_CONSTANT, output_dir='.', format='csv',
                 workers=1, b0_squared_range=(0.0, 1.0)):
        if int(grid_points) < 2:
            raise ValidationError('grid_points must be at least 2, received {}'.format(grid_points))
        if not 0.0 < rotation_constant <= 1.0:
            raise ValidationError('C must lie in (0, 1], received {}'.format(rotation_constant))
        if format not in _SEPARATORS:
            raise ValidationError('format must be csv or tsv, received {!r}'.format(format))
        if int(workers) < 1:
            raise ValidationError('workers must be at least 1, received {}'.format(workers))
        low, high = b0_squared_range
        if not 0.0 <= low <= high <= 1.0:
            raise ValidationError('b0^2 range must lie inside [0, 1], received {}'.format(b0_squared_range))

        self.grid_points = int(grid_points)
        self.rotation_constant = float(rotation_constant)
        self.output_dir = output_dir
        self.format = format
        self.workers = int(workers)
        self.b0_squared_range = (float(low), float(high))

    def __repr__(self):
        return 'SweepConfig(grid_points={}, C={}, format={})'.format(self.grid_points, self.rotation_constant,
                                                                      self.format)

    @classmethod
    def from_args(cls, args):
        """ Builds a config from parsed command-line flags, using defaults for flags the command lacks. """
        return cls(grid_points=getattr(args, 'grid_points', 101),
                   rotation_constant=getattr(args, 'c', DEFAULT_ROTATION_CONSTANT),
                   output_dir=getattr(args, 'output_dir', '.'),
                   format=getattr(args, 'format', 'csv'),
                   workers=getattr(args, 'workers', 1))

    @property
    def separator(self):
        return _SEPARATORS[self.format]

    @property
    def extension(self):
        return '.' + self.format

    def grid(self):
        return np.linspace(self.b0_squared_range[0], self.b0_squared_range[1], self.grid_points)

    def path(self, name):
        return os.path.join(self.output_dir, name + self.extension)

    def to_dict(self):
        return {'grid_points': self.grid_points, 'rotation_constant': self.rotation_constant,
                'format': self.format, 'workers': self.workers, 'b0_squared_range': list(self.b0_squared_range)}


def _sweep_row(b0_squared, rotation_constant):
    records = closed_form_tangles(HhlProblem.from_b0_squared(b0_squared, rotation_constant))
    log.debug('Sweep point b0^2={} done'.format(b0_squared))
    return ([b0_squared] + [clamp(record.three_tangle) for record in records],
            [b0_squared] + [clamp(record.pi_tangle) for record in records])


def hhl_sweep(config):
    """Closed-form three-tangles and pi-tangles of the three HHL stages over the b0^2 grid.

    Returns:
        A tuple of two DataFrames with columns :data:`FIG4A_COLUMNS` and :data:`FIG4B_COLUMNS`

    """
    grid = config.grid()
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            rows = list(pool.map(lambda value: _sweep_row(value, config.rotation_constant), grid))
    else:
        rows = [_sweep_row(value, config.rotation_constant) for value in grid]

    tangles = pd.DataFrame([row[0] for row in rows], columns=FIG4A_COLUMNS)
    pi_tangles = pd.DataFrame([row[1] for row in rows], columns=FIG4B_COLUMNS)
    return tangles, pi_tangles


def _p_mark(p, p_minus, p_plus):
    if p == p_minus and p == p_plus:
        return 'p-=p+'
    if p == p_minus:
        return 'p-'
    if p == p_plus:
        return 'p+'
    return ''


def rank2_curve(x1, theta_steps=629, p_steps=101):
    """Characteristic curves of the rank-2 family at fixed x1.

    One row per (p, theta). The p grid is ``linspace(0, 1, p_steps)`` with p- and p+ inserted; theta runs over
    ``linspace(0, 2 pi, theta_steps)``.

    Returns:
        A DataFrame with columns :data:`RANK2_COLUMNS`; ``p_mark`` flags the p- and p+ rows

    """
    if int(theta_steps) < 1 or int(p_steps) < 2:
        raise ValidationError('Need at least 1 theta step and 2 p steps')
    family = Rank2Family(x1, 0.0)
    p_minus, p_plus = rank2_p_bounds(family)
    p_grid = np.unique(np.concatenate([np.linspace(0, 1, int(p_steps)), [p_minus, p_plus]]))
    thetas = np.linspace(0, 2 * np.pi, int(theta_steps))

    rows = []
    for p in p_grid:
        member = family.with_p(p)
        characteristic = np.atleast_1d(rank2_characteristic(member, thetas))
        f_value, hull = clamp(rank2_f(member)), clamp(rank2_three_tangle(member))
        mark = _p_mark(p, p_minus, p_plus)
        rows.extend([p, theta, clamp(value), f_value, hull, mark] for theta, value in zip(thetas, characteristic))
    return pd.DataFrame(rows, columns=RANK2_COLUMNS)


def write_table(frame, config, name):
    """Writes a DataFrame with a one-line header, 17 significant digits and ``\\n`` line endings.

    Returns:
        The path written

    Raises:
        OSError: The output directory cannot be created or written

    """
    os.makedirs(config.output_dir, exist_ok=True)
    path = config.path(name)
    frame.to_csv(path, sep=config.separator, float_format='%.17g', lineterminator='\n', index=False)
    log.debug('Wrote {} rows to {}'.format(len(frame), path))
    return path


def write_meta(config, command, flags, version):
    """ Writes ``meta.json`` with sorted keys and no timestamps, so identical runs give identical files. """
    os.makedirs(config.output_dir, exist_ok=True)
    path = os.path.join(config.output_dir, 'meta.json')
    meta = {'command': command, 'flags': flags, 'config': config.to_dict(), 'version': version}
    with open(path, 'w', newline='\n') as handle:
        json.dump(meta, handle, sort_keys=True, indent=2)
        handle.write('\n')
    return path
