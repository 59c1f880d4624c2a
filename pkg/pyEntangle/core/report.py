import logging
from collections import OrderedDict

import numpy as np
import pandas as pd

log = logging.getLogger('pyEntangle')
__all__ = ['CheckResult', 'Report', 'CHECK_TOLERANCE']

CHECK_TOLERANCE = 1e-8


class CheckResult(object):
    """The largest discrepancy seen for one named check.

    Attributes:
        name: Identifier printed by ``verify``
        discrepancy: Largest observed deviation (NaN counts as failure)
        tolerance: Largest acceptable deviation
        note: Informational entries never fail a report
        detail: Free text shown next to the result

    """
    def __init__(self, name, discrepancy, tolerance=CHECK_TOLERANCE, note=False, detail=''):
        self.name = name  # type: str
        self.discrepancy = float(discrepancy)
        self.tolerance = float(tolerance)
        self.note = note
        self.detail = detail

    def __str__(self):
        line = '{:<34} {:>12.3e} {:>10.1e}  {}'.format(self.name, self.discrepancy, self.tolerance, self.status)
        return line + ('  ' + self.detail if self.detail else '')

    def __repr__(self):
        return 'CheckResult({}, {})'.format(self.name, self.status)

    @property
    def passed(self):
        return self.note or bool(self.discrepancy <= self.tolerance)

    @property
    def status(self):
        if self.note:
            return 'NOTE'
        return 'PASS' if self.passed else 'FAIL'


class Report(object):
    """ Named checks, keeping the worst discrepancy when the same check is recorded more than once. """
    def __init__(self):
        self._checks = OrderedDict()

    def __len__(self):
        return len(self._checks)

    def __iter__(self):
        return iter(self._checks.values())

    def __getitem__(self, name):
        return self._checks[name]

    def __contains__(self, name):
        return name in self._checks

    def add(self, name, discrepancy, tolerance=CHECK_TOLERANCE, note=False, detail=''):
        discrepancy = float(discrepancy)
        if np.isnan(discrepancy):
            discrepancy = np.inf
        existing = self._checks.get(name)
        if existing is None or discrepancy > existing.discrepancy:
            self._checks[name] = CheckResult(name, discrepancy, tolerance, note, detail or
                                             (existing.detail if existing else ''))
            if not self._checks[name].passed:
                log.warning('Check {} exceeded tolerance: {} > {}'.format(name, discrepancy, tolerance))
        return self._checks[name]

    def merge(self, other):
        for check in other:
            self.add(check.name, check.discrepancy, check.tolerance, check.note, check.detail)
        return self

    @property
    def passed(self):
        return all(check.passed for check in self)

    @property
    def failures(self):
        return [check for check in self if not check.passed]

    @property
    def max_discrepancy(self):
        """ Largest discrepancy over the non-informational checks. """
        values = [check.discrepancy for check in self if not check.note]
        return max(values) if values else 0.0

    def to_frame(self):
        return pd.DataFrame([[check.name, check.discrepancy, check.tolerance, check.status] for check in self],
                            columns=['check', 'discrepancy', 'tolerance', 'status'])

    def lines(self):
        return [str(check) for check in self]
