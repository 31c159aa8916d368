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

"""Closed relations on a compact interval.

A relation is a finite union of primitives: axis-parallel boxes (possibly
degenerate, which covers points and vertical or horizontal segments) and
sloped segments.  Relations are immutable and always held in canonical
form, so two relations are equal as sets exactly when their primitive
lists are equal.

Canonical form comes from a vertical sweep.  The x-axis is cut at every
primitive endpoint and every crossing, and each open slab between cuts is
described by its box cross-section and the sloped lines that run outside
it.  Neighbouring slabs with equal cross-sections are glued back together,
lines are glued by collinear extension, and whatever a cut carries beyond
the limits of its two neighbouring slabs is kept as a vertical piece.  None
of this depends on how the input was cut, only on the set it covers.
"""

import bisect
import collections
import logging

import portion as P

from crdyn import conf
from crdyn.exceptions import BudgetExhausted, OutsideExtent, SpaceMismatch
from crdyn.interval import Interval, IntervalUnion, fmt, rat
from crdyn.verdict import Verdict, HOLDS, REFUTED

logger = logging.getLogger(__name__)


class Space(collections.namedtuple('Space', ['extent'])):
    __slots__ = ()

    def __new__(cls, lo, hi=None):
        if hi is None:
            extent = lo
        else:
            extent = Interval(lo, hi)
        if extent.is_point:
            raise ValueError('degenerate space %s' % extent)
        return super(Space, cls).__new__(cls, extent)

    @property
    def lo(self):
        return self.extent.lo

    @property
    def hi(self):
        return self.extent.hi

    def whole(self):
        return IntervalUnion.closed(self.lo, self.hi)

    def identity(self):
        return Relation(self, [Seg(self.extent, 1, 0)])

    def full(self):
        return Relation(self, [Box(self.extent, self.extent)])

    def __str__(self):
        return 'space %s %s' % (fmt(self.lo), fmt(self.hi))


class Box(collections.namedtuple('Box', ['ix', 'iy'])):
    """ix x iy; either side may be a point."""

    __slots__ = ()
    kind = 'box'

    def __new__(cls, ix, iy):
        if not isinstance(ix, Interval):
            ix = Interval(*ix)
        if not isinstance(iy, Interval):
            iy = Interval(*iy)
        return super(Box, cls).__new__(cls, ix, iy)

    @classmethod
    def point(cls, x, y):
        return cls(Interval(x, x), Interval(y, y))

    @property
    def xrange(self):
        return self.ix

    @property
    def yrange(self):
        return self.iy

    def key(self):
        return (0, self.ix.lo, self.ix.hi, self.iy.lo, self.iy.hi, 0, 0)

    def contains(self, x, y):
        return x in self.ix and y in self.iy

    def image(self, a):
        if a.meets(_closed(self.ix)):
            return P.closed(self.iy.lo, self.iy.hi)
        return P.empty()

    def preimage(self, b):
        if b.meets(_closed(self.iy)):
            return P.closed(self.ix.lo, self.ix.hi)
        return P.empty()

    def swap(self):
        return Box(self.iy, self.ix)

    def __str__(self):
        if self.ix.is_point and self.iy.is_point:
            return 'point %s %s' % (fmt(self.ix.lo), fmt(self.iy.lo))
        return 'box %s %s %s %s' % (fmt(self.ix.lo), fmt(self.ix.hi),
                                    fmt(self.iy.lo), fmt(self.iy.hi))


class Seg(collections.namedtuple('Seg', ['dom', 'slope', 'intercept'])):
    """The graph of y = slope * x + intercept over dom."""

    __slots__ = ()
    kind = 'seg'

    def __new__(cls, dom, slope, intercept):
        if not isinstance(dom, Interval):
            dom = Interval(*dom)
        return super(Seg, cls).__new__(cls, dom, rat(slope), rat(intercept))

    def at(self, x):
        return self.slope * x + self.intercept

    @property
    def xrange(self):
        return self.dom

    @property
    def yrange(self):
        a = self.at(self.dom.lo)
        b = self.at(self.dom.hi)
        return Interval(min(a, b), max(a, b))

    @property
    def line(self):
        return (self.slope, self.intercept)

    def key(self):
        return (1, self.dom.lo, self.dom.hi, 0, 0, self.slope, self.intercept)

    def contains(self, x, y):
        return x in self.dom and self.at(x) == y

    def pull(self, b):
        """{x in dom : slope * x + intercept in b} as a portion interval."""
        if self.slope == 0:
            if self.intercept in b.portion:
                return P.closed(self.dom.lo, self.dom.hi)
            return P.empty()
        back = b.affine(1 / self.slope, -self.intercept / self.slope)
        return back.portion & P.closed(self.dom.lo, self.dom.hi)

    def image(self, a):
        part = IntervalUnion.from_portion(
            a.portion & P.closed(self.dom.lo, self.dom.hi))
        return part.affine(self.slope, self.intercept).portion

    def preimage(self, b):
        return self.pull(b)

    def swap(self):
        r = self.yrange
        return Seg(r, 1 / self.slope, -self.intercept / self.slope)

    def __str__(self):
        return 'seg %s %s %s %s' % (fmt(self.dom.lo), fmt(self.dom.hi),
                                    fmt(self.slope), fmt(self.intercept))


def _closed(iv):
    return IntervalUnion.closed(iv.lo, iv.hi)


def _prim_key(p):
    return p.key()


def _clip(p, extent):
    orig = p
    if isinstance(p, Seg):
        if p.slope == 0 or p.dom.is_point:
            y = p.at(p.dom.lo)
            p = Box(p.dom, Interval(y, y))
    for r in (p.xrange, p.yrange):
        if r.lo < extent.lo or r.hi > extent.hi:
            raise OutsideExtent(orig)
    return p


class _Sweep(object):
    """Vertical slab decomposition of a finite union of primitives.

    'xs' are the cuts; slab i is the open gap (xs[i], xs[i+1]) with
    cross-section 'boxes[i]' (an IntervalUnion) and 'lines[i]' (sorted
    (slope, intercept) pairs running outside boxes[i]); 'fibers[j]' is
    the full closed fiber over xs[j].
    """

    def __init__(self, prims):
        boxes = [p for p in prims if isinstance(p, Box)]
        segs = _merge_collinear([p for p in prims if isinstance(p, Seg)])
        self.xs = xs = self._cuts(boxes, segs)
        nslab = max(len(xs) - 1, 0)
        slab_iy = [[] for _ in range(nslab)]
        slab_segs = [[] for _ in range(nslab)]
        cut_pts = [[] for _ in xs]
        for b in boxes:
            i = bisect.bisect_left(xs, b.ix.lo)
            j = bisect.bisect_left(xs, b.ix.hi)
            iy = P.closed(b.iy.lo, b.iy.hi)
            for k in range(i, j):
                slab_iy[k].append(iy)
            for k in range(i, j + 1):
                cut_pts[k].append(iy)
        for s in segs:
            i = bisect.bisect_left(xs, s.dom.lo)
            j = bisect.bisect_left(xs, s.dom.hi)
            for k in range(i, j):
                slab_segs[k].append(s)
            for k in range(i, j + 1):
                cut_pts[k].append(P.singleton(s.at(xs[k])))
        self.boxes = []
        self.lines = []
        for k in range(nslab):
            cross = IntervalUnion.from_portion(P.Interval(*slab_iy[k]))
            mid = (xs[k] + xs[k + 1]) / 2
            lines = sorted(set(s.line for s in slab_segs[k]
                               if s.at(mid) not in cross.portion))
            self.boxes.append(cross)
            self.lines.append(tuple(lines))
        self.fibers = [IntervalUnion.from_portion(P.Interval(*pts))
                       for pts in cut_pts]

    @staticmethod
    def _cuts(boxes, segs):
        cuts = set()
        for b in boxes:
            cuts.add(b.ix.lo)
            cuts.add(b.ix.hi)
        for s in segs:
            cuts.add(s.dom.lo)
            cuts.add(s.dom.hi)
        # crossings between a line and a box edge or another line
        items = sorted(boxes + segs, key=lambda p: p.xrange.lo)
        for n, p in enumerate(items):
            hi = p.xrange.hi
            for q in items[n + 1:]:
                if q.xrange.lo > hi:
                    break
                cuts.update(_crossings(p, q))
        return sorted(cuts)

    def limit(self, k, side):
        """Limit of the fibers at cut k from the slab on 'side' (-1 or 1)."""
        slab = k - 1 if side < 0 else k
        if slab < 0 or slab >= len(self.boxes):
            return P.empty()
        x = self.xs[k]
        pts = [P.singleton(s * x + c) for (s, c) in self.lines[slab]]
        return P.Interval(self.boxes[slab].portion, *pts)

    def extras(self, k):
        """Components of the fiber at cut k beyond its one-sided limits."""
        lim = self.limit(k, -1) | self.limit(k, 1)
        return [a for a in self.fibers[k].parts
                if not P.closed(a.lo, a.hi) in lim]

    def canonical(self):
        xs = self.xs
        out = []
        k = 0
        n = len(self.boxes)
        while k < n:
            cross = self.boxes[k]
            j = k
            while j + 1 < n and self.boxes[j + 1] == cross:
                j += 1
            for part in cross.parts:
                out.append(Box(Interval(xs[k], xs[j + 1]), part))
            k = j + 1
        runs = collections.defaultdict(list)
        for k, lines in enumerate(self.lines):
            for line in lines:
                runs[line].append(P.closed(xs[k], xs[k + 1]))
        for (slope, icpt), doms in runs.items():
            for part in IntervalUnion.from_portion(P.Interval(*doms)).parts:
                out.append(Seg(part, slope, icpt))
        for k, x in enumerate(xs):
            for part in self.extras(k):
                out.append(Box(Interval(x, x), part))
        out.sort(key=_prim_key)
        return tuple(out)

    def single_valued(self):
        """The exact set of x whose fiber is one point, as an IntervalUnion,
        and a function giving the point on each piece.

        Returns (set, pieces) where pieces lists ('slab', k, y-or-line) and
        ('cut', k, y) entries.
        """
        xs = self.xs
        atoms = []
        pieces = []
        for k, cross in enumerate(self.boxes):
            lines = self.lines[k]
            if not cross and len(lines) == 1:
                pieces.append(('line', k, lines[0]))
            elif len(cross) == 1 and cross.lo == cross.hi and not lines:
                pieces.append(('flat', k, cross.lo))
            else:
                continue
            atoms.append((False, xs[k], xs[k + 1], False))
        for k, fiber in enumerate(self.fibers):
            if len(fiber) == 1 and fiber.lo == fiber.hi:
                atoms.append((True, xs[k], xs[k], True))
                pieces.append(('cut', k, fiber.lo))
        return IntervalUnion.from_atoms(atoms), pieces


def _merge_collinear(segs):
    doms = collections.defaultdict(list)
    for s in segs:
        doms[s.line].append(P.closed(s.dom.lo, s.dom.hi))
    out = []
    for (slope, icpt), parts in doms.items():
        for part in IntervalUnion.from_portion(P.Interval(*parts)).parts:
            out.append(Seg(part, slope, icpt))
    return out


def _crossings(p, q):
    lo = max(p.xrange.lo, q.xrange.lo)
    hi = min(p.xrange.hi, q.xrange.hi)
    if lo > hi:
        return ()
    if isinstance(p, Box) and isinstance(q, Box):
        return ()
    if isinstance(p, Box):
        p, q = q, p
    out = []
    if isinstance(q, Box):
        for y in (q.iy.lo, q.iy.hi):
            x = (y - p.intercept) / p.slope
            if lo <= x <= hi:
                out.append(x)
    elif p.slope != q.slope:
        x = (q.intercept - p.intercept) / (p.slope - q.slope)
        if lo <= x <= hi:
            out.append(x)
    return out


def normalize(prims, space):
    """Build the canonical Relation for the union of 'prims'.

    Raises OutsideExtent naming the first primitive that leaves
    extent x extent.
    """
    clipped = [_clip(p, space.extent) for p in prims]
    return Relation._from_canonical(space, _Sweep(clipped).canonical())


class Relation(object):
    """A closed relation G on a Space, in canonical form."""

    __slots__ = ('space', 'prims', 'total', '_sweep', '_by_x', '_cache')

    def __init__(self, space, prims):
        r = normalize(prims, space)
        self.space = space
        self.prims = r.prims
        self.total = r.total
        self._sweep = r._sweep
        self._by_x = None
        self._cache = {}

    @classmethod
    def _from_canonical(cls, space, prims):
        r = cls.__new__(cls)
        r.space = space
        r.prims = prims
        r._sweep = None
        r._by_x = None
        r._cache = {}
        r.total = r.projection_x() == space.whole()
        return r

    @property
    def sweep(self):
        if self._sweep is None:
            self._sweep = _Sweep(self.prims)
        return self._sweep

    def projection_x(self):
        return IntervalUnion.from_portion(P.Interval(
            *[P.closed(p.xrange.lo, p.xrange.hi) for p in self.prims]))

    def projection_y(self):
        return IntervalUnion.from_portion(P.Interval(
            *[P.closed(p.yrange.lo, p.yrange.hi) for p in self.prims]))

    def _indexed(self):
        if self._by_x is None:
            order = sorted(self.prims, key=lambda p: p.xrange.lo)
            self._by_x = ([p.xrange.lo for p in order], order,
                          max([p.xrange.length for p in order] or [0]))
        return self._by_x

    def prims_over(self, lo, hi):
        """Primitives whose x-range meets [lo, hi]."""
        los, order, widest = self._indexed()
        start = bisect.bisect_left(los, lo - widest)
        end = bisect.bisect_right(los, hi)
        return [p for p in order[start:end] if p.xrange.hi >= lo]

    def fiber(self, x):
        return image(self, IntervalUnion.point(x))

    def find(self, x, y):
        """Index in prims of a primitive holding (x, y), or None."""
        x = rat(x)
        y = rat(y)
        for n, p in enumerate(self.prims):
            if p.contains(x, y):
                return n
        return None

    def __contains__(self, xy):
        return self.find(*xy) is not None

    def __len__(self):
        return len(self.prims)

    def __iter__(self):
        return iter(self.prims)

    def __eq__(self, other):
        if not isinstance(other, Relation):
            return NotImplemented
        return self.space == other.space and self.prims == other.prims

    def __ne__(self, other):
        r = self.__eq__(other)
        if r is NotImplemented:
            return r
        return not r

    def __hash__(self):
        return hash((self.space, self.prims))

    def __repr__(self):
        return '<Relation %s, %d primitives%s>' % (
            self.space.extent, len(self.prims), '' if self.total else
            ', partial')

    def memo(self, key, compute):
        """Per-relation memo for derived values (suitability, one-set)."""
        try:
            return self._cache[key]
        except KeyError:
            value = compute()
            self._cache[key] = value
            return value


def _same_space(*rels):
    space = rels[0].space
    for r in rels[1:]:
        if r.space != space:
            raise SpaceMismatch('%s vs %s' % (space.extent, r.space.extent))
    return space


def _in_extent(space, a):
    if a and (a.lo < space.lo or a.hi > space.hi):
        raise OutsideExtent('set %s' % a)


def image(G, A):
    """G(A) = {y : (x, y) in G for some x in A}."""
    if not A:
        return IntervalUnion.empty()
    _in_extent(G.space, A)
    parts = []
    for p in G.prims_over(A.lo, A.hi):
        parts.append(p.image(A))
    return IntervalUnion.from_portion(P.Interval(*parts))


def preimage(G, B):
    """G^-1(B) = {x : G(x) meets B}."""
    if not B:
        return IntervalUnion.empty()
    _in_extent(G.space, B)
    parts = [p.preimage(B) for p in G.prims
             if p.yrange.lo <= B.hi and p.yrange.hi >= B.lo]
    return IntervalUnion.from_portion(P.Interval(*parts))


def inverse(G):
    return normalize([p.swap() for p in G.prims], G.space)


def _compose_pair(p, q):
    """q o p for a primitive p of the first relation and q of the second."""
    if isinstance(p, Box):
        if isinstance(q, Box):
            if p.iy.meets(q.ix):
                return Box(p.ix, q.iy)
            return None
        t = p.iy.intersection(q.dom)
        if t is None:
            return None
        a, b = q.at(t.lo), q.at(t.hi)
        return Box(p.ix, Interval(min(a, b), max(a, b)))
    xs = _pull_interval(p, q.xrange)
    if xs is None:
        return None
    if isinstance(q, Box):
        return Box(xs, q.iy)
    slope = p.slope * q.slope
    icpt = q.slope * p.intercept + q.intercept
    if xs.is_point:
        y = slope * xs.lo + icpt
        return Box(xs, Interval(y, y))
    return Seg(xs, slope, icpt)


def _pull_interval(s, iv):
    a = (iv.lo - s.intercept) / s.slope
    b = (iv.hi - s.intercept) / s.slope
    lo = max(min(a, b), s.dom.lo)
    hi = min(max(a, b), s.dom.hi)
    if lo > hi:
        return None
    return Interval(lo, hi)


def compose(G, F):
    """G o F = {(x, z) : z in G(y) for some y in F(x)}."""
    space = _same_space(G, F)
    out = []
    for p in F.prims:
        r = p.yrange
        for q in G.prims_over(r.lo, r.hi):
            c = _compose_pair(p, q)
            if c is not None:
                out.append(c)
    return normalize(out, space)


def iterate(G, n, budget=None):
    """G^n; G^0 is the identity.

    Raises BudgetExhausted (with the last power that fit) when a power
    has more than 'budget' primitives.
    """
    if n < 0:
        raise ValueError('negative power')
    if budget is None:
        budget = conf.budget()
    result = G.space.identity()
    for k in range(1, n + 1):
        nxt = G if k == 1 else compose(G, result)
        if len(nxt.prims) > budget:
            logger.info('iterate: %d primitives at power %d exceed budget %d',
                        len(nxt.prims), k, budget)
            raise BudgetExhausted('power %d has %d primitives' %
                                  (k, len(nxt.prims)), partial=result,
                                  reached=k - 1)
        result = nxt
    return result


def restrict(G, A):
    """G intersected with A x A."""
    A = A.closure()
    out = []
    for p in G.prims:
        for a in A.parts:
            for b in A.parts:
                c = _clip_to(p, a, b)
                if c is not None:
                    out.append(c)
    return normalize(out, G.space)


def restrict_domain(G, A):
    """G intersected with A x X."""
    full = G.space.extent
    out = []
    for p in G.prims:
        for a in A.closure().parts:
            c = _clip_to(p, a, full)
            if c is not None:
                out.append(c)
    return normalize(out, G.space)


def restrict_range(G, B):
    """G intersected with X x B."""
    full = G.space.extent
    out = []
    for p in G.prims:
        for b in B.closure().parts:
            c = _clip_to(p, full, b)
            if c is not None:
                out.append(c)
    return normalize(out, G.space)


def _clip_to(p, a, b):
    if isinstance(p, Box):
        ix = p.ix.intersection(a)
        iy = p.iy.intersection(b)
        if ix is None or iy is None:
            return None
        return Box(ix, iy)
    xs = p.dom.intersection(a)
    if xs is None:
        return None
    xs = _pull_interval(Seg(xs, p.slope, p.intercept), b)
    if xs is None:
        return None
    return Seg(xs, p.slope, p.intercept)


def equal(G, H):
    _same_space(G, H)
    return G.prims == H.prims


def is_surjective(G):
    return G.projection_y() == G.space.whole()


def interior_nonempty(A):
    return A.interior_nonempty()


class PLMap(object):
    """A single-valued total piecewise-linear map of a space into itself.

    Stored in breakpoint form: 'breaks' b_0 < ... < b_m span the extent,
    'pieces[i]' is the (slope, intercept) on the open gap (b_i, b_{i+1})
    and 'values[i]' the value at b_i.
    """

    def __init__(self, space, breaks, pieces, values):
        breaks = tuple(rat(b) for b in breaks)
        pieces = tuple((rat(s), rat(c)) for (s, c) in pieces)
        values = tuple(rat(v) for v in values)
        if breaks[0] != space.lo or breaks[-1] != space.hi:
            raise ValueError('breakpoints must span the extent')
        if any(a >= b for a, b in zip(breaks, breaks[1:])):
            raise ValueError('breakpoints must increase')
        if len(pieces) != len(breaks) - 1 or len(values) != len(breaks):
            raise ValueError('piece/break count mismatch')
        self.space = space
        self.breaks = breaks
        self.pieces = pieces
        self.values = values
        for p in self._segs():
            _clip(p, space.extent)
        for v in values:
            if v not in space.extent:
                raise OutsideExtent('value %s' % fmt(v))

    @classmethod
    def from_pieces(cls, space, segs, owners=None):
        """Build from Segs whose domains tile the extent in order.

        'owners[i]' is 'left' or 'right': which of the two pieces sharing
        breakpoint i+1 gives the value there.  Defaults to 'left'.
        """
        segs = sorted(segs, key=lambda s: s.dom.lo)
        for a, b in zip(segs, segs[1:]):
            if a.dom.hi != b.dom.lo:
                raise ValueError('pieces must tile the extent')
        if owners is None:
            owners = ['left'] * (len(segs) - 1)
        breaks = [segs[0].dom.lo] + [s.dom.hi for s in segs]
        values = [segs[0].at(segs[0].dom.lo)]
        for n, own in enumerate(owners):
            s = segs[n] if own == 'left' else segs[n + 1]
            values.append(s.at(breaks[n + 1]))
        values.append(segs[-1].at(segs[-1].dom.hi))
        return cls(space, breaks, [s.line for s in segs], values)

    @classmethod
    def identity(cls, space):
        return cls(space, [space.lo, space.hi], [(1, 0)], [space.lo, space.hi])

    def _segs(self):
        b = self.breaks
        return [Seg(Interval(b[i], b[i + 1]), s, c)
                for i, (s, c) in enumerate(self.pieces)]

    def __call__(self, x):
        x = rat(x)
        i = bisect.bisect_left(self.breaks, x)
        if i < len(self.breaks) and self.breaks[i] == x:
            return self.values[i]
        if i == 0 or i == len(self.breaks):
            raise OutsideExtent('point %s' % fmt(x))
        s, c = self.pieces[i - 1]
        return s * x + c

    def __len__(self):
        return len(self.pieces)

    def __eq__(self, other):
        return (isinstance(other, PLMap) and self.space == other.space and
                self.breaks == other.breaks and self.pieces == other.pieces
                and self.values == other.values)

    def __hash__(self):
        return hash((self.breaks, self.pieces, self.values))

    def closure(self):
        """The closure of the graph, as a Relation."""
        prims = self._segs()
        prims.extend(Box.point(x, v) for x, v in zip(self.breaks, self.values))
        return normalize(prims, self.space)

    def image(self):
        """The exact image f(X), which need not be closed."""
        parts = [P.singleton(v) for v in self.values]
        b = self.breaks
        for i, (s, c) in enumerate(self.pieces):
            gap = IntervalUnion.open(b[i], b[i + 1]).affine(s, c)
            parts.append(gap.portion)
        return IntervalUnion.from_portion(P.Interval(*parts))

    def is_surjective(self):
        return self.image() == self.space.whole()

    def then(self, f):
        """f o self, refined so every gap is affine."""
        g = self
        cuts = set(g.breaks)
        for i, (s, c) in enumerate(g.pieces):
            if s == 0:
                continue
            lo, hi = g.breaks[i], g.breaks[i + 1]
            for y in f.breaks:
                x = (y - c) / s
                if lo < x < hi:
                    cuts.add(x)
        breaks = sorted(cuts)
        pieces = []
        for lo, hi in zip(breaks, breaks[1:]):
            mid = (lo + hi) / 2
            i = bisect.bisect_right(g.breaks, mid) - 1
            s, c = g.pieces[i]
            if s == 0:
                pieces.append((0, f(c)))
                continue
            y = s * mid + c
            j = bisect.bisect_right(f.breaks, y) - 1
            p, q = f.pieces[j]
            pieces.append((p * s, p * c + q))
        values = [f(g(x)) for x in breaks]
        return _simplified(PLMap(self.space, breaks, pieces, values))

    def iterate(self, n, budget=None):
        if budget is None:
            budget = conf.budget()
        result = PLMap.identity(self.space)
        for k in range(n):
            nxt = result.then(self)
            if len(nxt) > budget:
                raise BudgetExhausted('f^%d has %d pieces' % (k + 1, len(nxt)),
                                      partial=result, reached=k)
            result = nxt
        return result


def _simplified(f):
    breaks = [f.breaks[0]]
    pieces = [f.pieces[0]]
    values = [f.values[0]]
    for i in range(1, len(f.breaks) - 1):
        x = f.breaks[i]
        s, c = f.pieces[i]
        if pieces[-1] == (s, c) and s * x + c == f.values[i]:
            continue
        breaks.append(x)
        pieces.append((s, c))
        values.append(f.values[i])
    breaks.append(f.breaks[-1])
    values.append(f.values[-1])
    return PLMap(f.space, breaks, pieces, values)


def semiconjugacy_check(h, G, F):
    """Decide h o G = F o h with h onto, for h a PLMap on the common space.

    Refuted witnesses name either the uncovered part of the space or the
    first primitive on which the two sides differ.
    """
    space = _same_space(G, F)
    if h.space != space:
        raise SpaceMismatch('map on %s, relations on %s' %
                            (h.space.extent, space.extent))
    covered = h.image()
    if covered != space.whole():
        gap = covered.complement(space.whole())
        return Verdict(REFUTED, witness={'reason': 'not surjective',
                                         'gap': gap.to_json()})
    H = h.closure()
    lhs = compose(H, G)
    rhs = compose(F, H)
    if lhs.prims == rhs.prims:
        return Verdict(HOLDS, witness={'primitives': len(lhs.prims)})
    only_lhs = [p for p in lhs.prims if p not in set(rhs.prims)]
    only_rhs = [p for p in rhs.prims if p not in set(lhs.prims)]
    side, prim = ('h o G', only_lhs[0]) if only_lhs else ('F o h', only_rhs[0])
    return Verdict(REFUTED, witness={'reason': 'compositions differ',
                                     'side': side, 'primitive': str(prim)})
