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

"""Exact rational intervals, interval unions and test meshes.

Every coordinate is a fractions.Fraction.  An IntervalUnion is a thin
immutable wrapper over a portion interval, so parts may have open or closed
ends; the sets produced by images of closed sets are always closed.
"""

import collections
import fractions
import math

import portion as P

from crdyn.exceptions import BadSetLiteral

Rat = fractions.Fraction


def rat(value):
    """Convert an int, Fraction or "p/q" string to a Fraction.

    Floats are refused; they would smuggle rounding into the geometry.
    """
    if isinstance(value, Rat):
        return value
    if isinstance(value, bool) or isinstance(value, float):
        raise ValueError('not an exact rational: %r' % (value,))
    if isinstance(value, int):
        return Rat(value)
    s = str(value).strip()
    if not s or any(c in s for c in '.eE'):
        raise ValueError('not an exact rational: %r' % (value,))
    return Rat(s)


def fmt(value):
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return '%d/%d' % (value.numerator, value.denominator)


class Interval(collections.namedtuple('Interval', ['lo', 'hi'])):
    """A closed interval [lo, hi]; lo == hi is a point."""

    __slots__ = ()

    def __new__(cls, lo, hi):
        lo = rat(lo)
        hi = rat(hi)
        if lo > hi:
            raise ValueError('empty interval [%s, %s]' % (fmt(lo), fmt(hi)))
        return super(Interval, cls).__new__(cls, lo, hi)

    @property
    def is_point(self):
        return self.lo == self.hi

    @property
    def length(self):
        return self.hi - self.lo

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def meets(self, other):
        return self.lo <= other.hi and other.lo <= self.hi

    def intersection(self, other):
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo > hi:
            return None
        return Interval(lo, hi)

    def to_portion(self):
        return P.closed(self.lo, self.hi)

    def __str__(self):
        if self.is_point:
            return '{%s}' % fmt(self.lo)
        return '[%s,%s]' % (fmt(self.lo), fmt(self.hi))


def _atoms(p):
    if p.empty:
        return ()
    return tuple((a.left == P.CLOSED, a.lower, a.upper, a.right == P.CLOSED)
                 for a in p)


def _atom(left_closed, lo, hi, right_closed):
    return P.Interval.from_atomic(P.CLOSED if left_closed else P.OPEN, lo, hi,
                                  P.CLOSED if right_closed else P.OPEN)


class IntervalUnion(object):
    """A normalized finite union of intervals.

    Parts are sorted and pairwise disjoint and non-touching (touching parts
    are merged whenever one of them owns the shared endpoint).  Instances
    are immutable and hashable.
    """

    __slots__ = ('_p', '_atoms')

    def __init__(self, parts=()):
        p = P.empty()
        for part in parts:
            if isinstance(part, P.Interval):
                p = p | part
            elif isinstance(part, IntervalUnion):
                p = p | part._p
            else:
                lo, hi = part
                p = p | P.closed(rat(lo), rat(hi))
        self._p = p
        self._atoms = _atoms(p)

    @classmethod
    def from_portion(cls, p):
        u = cls.__new__(cls)
        u._p = p
        u._atoms = _atoms(p)
        return u

    @classmethod
    def closed(cls, lo, hi):
        return cls.from_portion(P.closed(rat(lo), rat(hi)))

    @classmethod
    def open(cls, lo, hi):
        return cls.from_portion(P.open(rat(lo), rat(hi)))

    @classmethod
    def point(cls, x):
        return cls.from_portion(P.singleton(rat(x)))

    @classmethod
    def points(cls, xs):
        p = P.empty()
        for x in xs:
            p = p | P.singleton(rat(x))
        return cls.from_portion(p)

    @classmethod
    def empty(cls):
        return cls.from_portion(P.empty())

    @classmethod
    def from_atoms(cls, atoms):
        p = P.empty()
        for a in atoms:
            p = p | _atom(*a)
        return cls.from_portion(p)

    @property
    def portion(self):
        return self._p

    @property
    def atoms(self):
        """Tuple of (left_closed, lo, hi, right_closed)."""
        return self._atoms

    @property
    def parts(self):
        """The closures of the parts, as closed Intervals."""
        return [Interval(lo, hi) for (_, lo, hi, _) in self._atoms]

    def is_empty(self):
        return not self._atoms

    def __bool__(self):
        return bool(self._atoms)

    def __len__(self):
        return len(self._atoms)

    def __eq__(self, other):
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        return self._atoms == other._atoms

    def __ne__(self, other):
        r = self.__eq__(other)
        if r is NotImplemented:
            return r
        return not r

    def __hash__(self):
        return hash(self._atoms)

    def __or__(self, other):
        return IntervalUnion.from_portion(self._p | other._p)

    def __and__(self, other):
        return IntervalUnion.from_portion(self._p & other._p)

    def __sub__(self, other):
        return IntervalUnion.from_portion(self._p - other._p)

    def __le__(self, other):
        return (self._p - other._p).empty

    def __contains__(self, x):
        if isinstance(x, IntervalUnion):
            return x <= self
        return rat(x) in self._p

    def meets(self, other):
        return not (self._p & other._p).empty

    def is_closed(self):
        return all(l and r for (l, _, _, r) in self._atoms)

    def closure(self):
        if self.is_closed():
            return self
        return IntervalUnion.from_atoms((True, lo, hi, True)
                                        for (_, lo, hi, _) in self._atoms)

    def complement(self, within):
        return IntervalUnion.from_portion(within._p - self._p)

    def interior_nonempty(self):
        return any(lo < hi for (_, lo, hi, _) in self._atoms)

    def nondegenerate(self):
        """The union of the parts of positive length."""
        return IntervalUnion.from_atoms(a for a in self._atoms if a[1] < a[2])

    def isolated_points(self):
        return [lo for (_, lo, hi, _) in self._atoms if lo == hi]

    @property
    def lo(self):
        return self._atoms[0][1]

    @property
    def hi(self):
        return self._atoms[-1][2]

    def hull(self):
        return Interval(self.lo, self.hi)

    def affine(self, slope, intercept):
        """Image under x -> slope * x + intercept."""
        if slope == 0:
            if not self._atoms:
                return self
            return IntervalUnion.point(intercept)
        atoms = []
        for (l, lo, hi, r) in self._atoms:
            a = slope * lo + intercept
            b = slope * hi + intercept
            if slope > 0:
                atoms.append((l, a, b, r))
            else:
                atoms.append((r, b, a, l))
        return IntervalUnion.from_atoms(atoms)

    def __iter__(self):
        return iter(self.parts)

    def __str__(self):
        if not self._atoms:
            return '{}'
        out = []
        for (l, lo, hi, r) in self._atoms:
            if lo == hi:
                out.append('{%s}' % fmt(lo))
            else:
                out.append('%s%s,%s%s' % ('[' if l else '(', fmt(lo),
                                          fmt(hi), ']' if r else ')'))
        return ' u '.join(out)

    def __repr__(self):
        return 'IntervalUnion(%s)' % self

    def to_json(self):
        return [['[' if l else '(', fmt(lo), fmt(hi), ']' if r else ')']
                for (l, lo, hi, r) in self._atoms]


def parse_set(text):
    """Parse a set literal "lo,hi;lo,hi" into a closed IntervalUnion.

    A single value "x" denotes the point {x}.
    """
    parts = []
    for chunk in text.split(';'):
        chunk = chunk.strip()
        if not chunk:
            continue
        fields = [f.strip() for f in chunk.split(',')]
        try:
            if len(fields) == 1:
                lo = hi = rat(fields[0])
            elif len(fields) == 2:
                lo, hi = rat(fields[0]), rat(fields[1])
            else:
                raise ValueError(chunk)
            if lo > hi:
                raise ValueError(chunk)
        except (ValueError, ZeroDivisionError):
            raise BadSetLiteral(chunk)
        parts.append((lo, hi))
    if not parts:
        raise BadSetLiteral(repr(text))
    return IntervalUnion(parts)


class Mesh(object):
    """The test mesh of 'm' equal open cells over 'extent'.

    Sample points are all cell endpoints and midpoints, 2m+1 in total.
    """

    def __init__(self, extent, m):
        self.extent = extent
        self.m = m
        self.width = extent.length / m
        self.edges = [extent.lo + i * self.width for i in range(m + 1)]
        self.full_cells = (1 << m) - 1
        self.full_points = (1 << (2 * m + 1)) - 1
        self._cells = None

    @property
    def cells(self):
        if self._cells is None:
            self._cells = [IntervalUnion.open(self.edges[i], self.edges[i + 1])
                           for i in range(self.m)]
        return self._cells

    def cell(self, i):
        return self.cells[i]

    def closed_cell(self, i):
        return Interval(self.edges[i], self.edges[i + 1])

    @property
    def points(self):
        half = self.width / 2
        return [self.extent.lo + j * half for j in range(2 * self.m + 1)]

    def cell_of(self, x):
        """Index of the open cell holding 'x', or None on an edge."""
        t = (rat(x) - self.extent.lo) / self.width
        if t.denominator == 1 or t < 0 or t > self.m:
            return None
        return math.floor(t)

    def cell_mask(self, s):
        """Bitmask of the open cells that 's' meets."""
        mask = 0
        lo0, w = self.extent.lo, self.width
        for (_, lo, hi, _) in s.atoms:
            if lo == hi:
                i = self.cell_of(lo)
                if i is not None:
                    mask |= 1 << i
                continue
            start = max(0, math.floor((lo - lo0) / w))
            end = min(self.m - 1, math.ceil((hi - lo0) / w) - 1)
            if start <= end:
                mask |= (1 << (end + 1)) - (1 << start)
        return mask

    def point_mask(self, s):
        """Bitmask of the sample points that 's' contains."""
        mask = 0
        lo0, h = self.extent.lo, self.width / 2
        top = 2 * self.m
        for (l, lo, hi, r) in s.atoms:
            t = (lo - lo0) / h
            start = math.ceil(t)
            if start == t and not l:
                start += 1
            t = (hi - lo0) / h
            end = math.floor(t)
            if end == t and not r:
                end -= 1
            start = max(start, 0)
            end = min(end, top)
            if start <= end:
                mask |= (1 << (end + 1)) - (1 << start)
        return mask

    def cells_of_mask(self, mask):
        return [i for i in range(self.m) if mask >> i & 1]
