# Copyright (C) 2026 The crdyn Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#         http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Verdicts, property ids and analysis parameters"""

import collections
import fractions

from crdyn.exceptions import BadParams, UnknownProperty
from crdyn.interval import Interval, IntervalUnion, fmt, rat

HOLDS = 'holds'
REFUTED = 'refuted'
EXHAUSTED = 'exhausted'
STATUSES = (HOLDS, REFUTED, EXHAUSTED)

PLAIN = 'plain'
SUITABLE = 'suitable'
MODES = (PLAIN, SUITABLE)

PROPERTY_NAMES = ('TT', 'PT', 'SPtT', 'M', 'SM', 'ST', 'VST', 'WM', 'TM',
                  'EXACT', 'FEXACT', 'ET', 'SET', 'SPT', 'LEO')

DESCRIPTIONS = {
    'TT': 'topologically transitive',
    'PT': 'point transitive',
    'SPtT': 'strongly point transitive',
    'M': 'minimal',
    'SM': 'strongly minimal',
    'ST': 'strongly transitive',
    'VST': 'very strongly transitive',
    'WM': 'weakly mixing',
    'TM': 'topologically mixing',
    'EXACT': 'exact',
    'FEXACT': 'fully exact',
    'ET': 'exact transitive',
    'SET': 'strongly exact transitive',
    'SPT': 'strongly product transitive',
    'LEO': 'locally eventually onto',
}


class AnalysisParams(collections.namedtuple(
        'AnalysisParams', ['epsilon', 'horizon', 'arity', 'oracle_grid'])):
    """(test mesh epsilon = 1/m, horizon N, product arity k, oracle grid)."""

    __slots__ = ()

    def __new__(cls, epsilon=fractions.Fraction(1, 64), horizon=128, arity=3,
                oracle_grid=64):
        try:
            epsilon = rat(epsilon)
        except (ValueError, ZeroDivisionError):
            raise BadParams('epsilon %r' % (epsilon,))
        if epsilon <= 0 or epsilon.numerator != 1 or epsilon.denominator < 2:
            raise BadParams('epsilon must be 1/m with m >= 2, got %s' %
                            fmt(epsilon))
        horizon = int(horizon)
        arity = int(arity)
        oracle_grid = int(oracle_grid)
        if horizon < 1:
            raise BadParams('horizon must be >= 1')
        if arity < 2:
            raise BadParams('arity must be >= 2')
        if oracle_grid < 1:
            raise BadParams('oracle grid must be >= 1')
        return super(AnalysisParams, cls).__new__(cls, epsilon, horizon, arity,
                                                  oracle_grid)

    @property
    def m(self):
        return self.epsilon.denominator

    def to_json(self):
        return {'epsilon': fmt(self.epsilon), 'horizon': self.horizon,
                'arity': self.arity}


class PropertyId(collections.namedtuple('PropertyId', ['name', 'mode'])):
    __slots__ = ()

    def __new__(cls, name, mode=PLAIN):
        if name not in PROPERTY_NAMES:
            raise UnknownProperty('%s (valid ids: %s)' %
                                  (name, ', '.join(PROPERTY_NAMES)))
        if mode not in MODES:
            raise UnknownProperty('mode %s (valid modes: %s)' %
                                  (mode, ', '.join(MODES)))
        return super(PropertyId, cls).__new__(cls, name, mode)

    @classmethod
    def parse(cls, text):
        """"TM" or "TM:suitable"."""
        name, _, mode = text.partition(':')
        return cls(name, mode or PLAIN)

    @property
    def suitable(self):
        return self.mode == SUITABLE

    def __str__(self):
        if self.mode == PLAIN:
            return self.name
        return '%s:%s' % (self.name, self.mode)


def all_property_ids():
    return [PropertyId(n, m) for m in MODES for n in PROPERTY_NAMES]


def jsonable(obj):
    if isinstance(obj, fractions.Fraction):
        return fmt(obj)
    if isinstance(obj, IntervalUnion):
        return obj.to_json()
    if isinstance(obj, Interval):
        return [fmt(obj.lo), fmt(obj.hi)]
    if hasattr(obj, 'to_json'):
        return jsonable(obj.to_json())
    if isinstance(obj, dict):
        return dict((str(k), jsonable(v)) for k, v in obj.items())
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [jsonable(v) for v in items]
    return obj


class Verdict(object):
    """Three-valued semi-decision result.

    'witness' is a dict describing the certificate (holds/refuted) or the
    reason the search gave up (exhausted); 'reached' is the horizon that
    was actually examined.
    """

    def __init__(self, status, witness=None, params=None, reached=None,
                 notes=None):
        if status not in STATUSES:
            raise ValueError('bad status %r' % (status,))
        self.status = status
        self.witness = witness
        self.params = params
        self.reached = reached
        self.notes = list(notes or ())

    @property
    def holds(self):
        return self.status == HOLDS

    @property
    def refuted(self):
        return self.status == REFUTED

    @property
    def exhausted(self):
        return self.status == EXHAUSTED

    @property
    def definite(self):
        return self.status != EXHAUSTED

    def with_params(self, params):
        self.params = params
        return self

    def __repr__(self):
        return '<Verdict %s %r>' % (self.status, self.witness)

    def to_json(self):
        d = {'verdict': self.status, 'witness': jsonable(self.witness)}
        if self.reached is not None:
            d['reached'] = self.reached
        if self.notes:
            d['notes'] = list(self.notes)
        return d


def record(prop, params, verdict, elapsed_ms):
    """The stable JSON verdict record."""
    r = {
        'property': prop.name,
        'mode': prop.mode,
        'params': params.to_json(),
        'verdict': verdict.status,
        'witness': jsonable(verdict.witness),
        'elapsed_ms': int(elapsed_ms),
    }
    if verdict.reached is not None:
        r['reached'] = verdict.reached
    if verdict.notes:
        r['notes'] = list(verdict.notes)
    return r
