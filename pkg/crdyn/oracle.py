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

"""Finite digraph model of a relation, for cross-validation.

The extent is cut into k equal cells.  The coarse view is the k x k
closed-cell adjacency.  Verdicts are decided on the stratified graph of
2k+1 nodes, grid points at even indices and open cells at odd indices,
with an edge (u, v) whenever some primitive meets u x v.  For relations
made of boxes with grid endpoints every point of a stratum has the same
fiber, so reachability in this graph is reachability of the relation.
"""

import itertools
import logging

import networkx as nx
import numpy as np
import portion as P

from crdyn.analyzer import Analyzer
from crdyn.interval import IntervalUnion, Mesh
from crdyn.relcore import Box
from crdyn.verdict import (Verdict, PropertyId, HOLDS, REFUTED, EXHAUSTED,
                           PLAIN)

logger = logging.getLogger(__name__)

CROSS_CHECKED = ('TT', 'TM', 'ST', 'VST', 'M', 'LEO')


class GridGraph(object):
    """The grid model of a relation at resolution k."""

    def __init__(self, extent, k, strata, aligned):
        self.extent = extent
        self.k = k
        self.strata = strata
        self.aligned = aligned
        n = 2 * k + 1
        proj = np.zeros((k, n), dtype=np.int64)
        for i in range(k):
            proj[i, 2 * i:2 * i + 3] = 1
        self.adjacency = proj.dot(strata.astype(np.int64)).dot(proj.T) > 0
        self.graph = nx.DiGraph()
        self.graph.add_nodes_from(range(n))
        self.graph.add_edges_from(zip(*np.nonzero(strata)))
        self._powers = None

    @property
    def nodes(self):
        return 2 * self.k + 1

    @property
    def cells(self):
        """The open-cell nodes."""
        return list(range(1, self.nodes, 2))

    def stratum_set(self, nodes):
        """The subset of the extent covered by 'nodes'."""
        w = self.extent.length / self.k
        lo = self.extent.lo
        parts = []
        for s in nodes:
            t = s // 2
            if s % 2 == 0:
                parts.append(P.singleton(lo + t * w))
            else:
                parts.append(P.open(lo + t * w, lo + (t + 1) * w))
        return IntervalUnion.from_portion(P.Interval(*parts))

    def successors(self, s):
        return set(self.graph.successors(s))

    def reach(self, s):
        """Nodes at the end of some path of length >= 1 from s."""
        out = set()
        for t in self.graph.successors(s):
            out.add(t)
            out |= nx.descendants(self.graph, t)
        return out

    def is_surjective(self):
        return bool(self.strata.any(axis=0).all())

    def kernel(self, nodes):
        """The largest subset of 'nodes' whose members all have a
        successor inside it."""
        keep = set(nodes)
        changed = True
        while changed:
            changed = False
            for s in sorted(keep):
                if not self.successors(s) & keep:
                    keep.discard(s)
                    changed = True
        return keep

    def _step(self, M):
        return M.astype(np.int64).dot(self.strata.astype(np.int64)) > 0

    def powers(self):
        """(powers, first, period): B^1 ... B^(first+period) with
        B^(n) = B^(n - period) for n > first + period.

        The sequence of boolean powers is eventually periodic; Brent's
        method finds the period and the start of the cycle while holding
        two matrices, and only the powers before the first repeat are
        kept.
        """
        if self._powers is not None:
            return self._powers
        start = self.strata
        power = period = 1
        tortoise, hare = start, self._step(start)
        while not np.array_equal(tortoise, hare):
            if power == period:
                tortoise = hare
                power *= 2
                period = 0
            hare = self._step(hare)
            period += 1
        tortoise = hare = start
        for _ in range(period):
            hare = self._step(hare)
        first = 0
        while not np.array_equal(tortoise, hare):
            tortoise = self._step(tortoise)
            hare = self._step(hare)
            first += 1
        out = [start]
        for _ in range(first + period - 1):
            out.append(self._step(out[-1]))
        logger.debug('grid %d: powers cycle from %d with period %d',
                     self.k, first, period)
        self._powers = (out, first, period)
        return self._powers


def _strata_mask(mesh, s):
    """Bits over the 2k+1 strata that the set s meets."""
    pts = mesh.point_mask(s)
    mask = 0
    for t in range(mesh.m + 1):
        if pts >> (2 * t) & 1:
            mask |= 1 << (2 * t)
    for t in mesh.cells_of_mask(mesh.cell_mask(s)):
        mask |= 1 << (2 * t + 1)
    return mask


def _aligned(p, mesh):
    if not isinstance(p, Box):
        return False
    lo, w = mesh.extent.lo, mesh.width
    return all(((v - lo) / w).denominator == 1
               for v in (p.ix.lo, p.ix.hi, p.iy.lo, p.iy.hi))


def discretize(G, k):
    """The GridGraph of G at k cells."""
    mesh = Mesh(G.space.extent, k)
    n = 2 * k + 1
    strata = np.zeros((n, n), dtype=bool)
    w = mesh.width
    lo = mesh.extent.lo
    for p in G.prims:
        r = p.xrange
        first = max(0, 2 * int((r.lo - lo) // w) - 1)
        last = min(n - 1, 2 * int(-((lo - r.hi) // w)) + 1)
        for s in range(first, last + 1):
            u = (IntervalUnion.point(lo + (s // 2) * w) if s % 2 == 0 else
                 IntervalUnion.open(lo + (s // 2) * w,
                                    lo + (s // 2 + 1) * w))
            img = IntervalUnion.from_portion(p.image(u))
            if not img:
                continue
            bits = _strata_mask(mesh, img)
            while bits:
                v = (bits & -bits).bit_length() - 1
                strata[s, v] = True
                bits &= bits - 1
    aligned = all(_aligned(p, mesh) for p in G.prims)
    return GridGraph(G.space.extent, k, strata, aligned)


def _cell(g, s):
    return g.stratum_set([s])


def _sample(g, s):
    """The mesh sample point inside stratum s."""
    part = g.stratum_set([s])
    return (part.lo + part.hi) / 2


def graph_check(g, prop):
    """Decide 'prop' exactly on the finite model."""
    if not isinstance(prop, PropertyId):
        prop = PropertyId.parse(prop)
    if prop.suitable:
        return Verdict(EXHAUSTED, witness={'reason': 'suitable mode is not '
                                           'modeled on grids'},
                       notes=['oracle ignores suitable mode'])
    if prop.name not in ('EXACT', 'FEXACT') and not g.is_surjective():
        missing = [s for s in range(g.nodes) if not g.strata[:, s].any()]
        return Verdict(REFUTED, witness={'reason': 'not surjective',
                                         'gap': g.stratum_set(missing)})
    return _CHECKS[prop.name](g)


def _tt(g):
    cells = set(g.cells)
    for s in g.cells:
        miss = cells - g.reach(s)
        if miss:
            return Verdict(REFUTED, witness={'U': _cell(g, s),
                                             'V': _cell(g, min(miss))})
    return Verdict(HOLDS, witness={'grid': g.k})


def _depth(g, s):
    """The least n with every node on a path of length 1..n from s."""
    frontier = g.successors(s)
    seen = set(frontier)
    n = 1
    while len(seen) < g.nodes:
        frontier = set().union(*[g.successors(t) for t in frontier]) - seen
        if not frontier:
            return None
        seen |= frontier
        n += 1
    return n


def _st(g, uniform=False):
    bound = 0
    for s in g.cells:
        d = _depth(g, s)
        if d is None:
            missing = set(range(g.nodes)) - g.reach(s)
            return Verdict(REFUTED, witness={'U': _cell(g, s),
                                             'missing': g.stratum_set(missing)})
        bound = max(bound, d)
    if uniform:
        return Verdict(HOLDS, witness={'uniform_bound': bound})
    return Verdict(HOLDS, witness={'bound': bound})


def _pt(g, every):
    cells = set(g.cells)
    for s in range(g.nodes):
        miss = cells - g.reach(s)
        if not miss and not every:
            return Verdict(HOLDS, witness={'x': _sample(g, s)})
        if miss and every:
            return Verdict(REFUTED, witness={'node': s,
                                             'V': _cell(g, min(miss))})
    if every:
        return Verdict(HOLDS, witness={'grid': g.k})
    return Verdict(REFUTED, witness={'reason': 'no node reaches every cell'})


def _sptt(g):
    C = nx.condensation(g.graph)
    member = C.graph['mapping']
    targets = sorted(set(member[s] for s in g.cells),
                     key=list(nx.topological_sort(C)).index)
    for a, b in zip(targets, targets[1:]):
        if not nx.has_path(C, a, b):
            return Verdict(REFUTED, witness={'reason': 'cells in incomparable '
                                             'components'})
    return Verdict(HOLDS, witness={'components': len(targets)})


def _sm(g):
    for s in g.cells:
        K = g.kernel(set(range(g.nodes)) - {s})
        if K:
            return Verdict(REFUTED, witness={'U': _cell(g, s),
                                             'kernel': g.stratum_set(K)})
    return Verdict(HOLDS, witness={'grid': g.k})


def _tm(g):
    powers, first, period = g.powers()
    odd = np.array(g.cells)
    acc = np.ones((g.k, g.k), dtype=bool)
    for M in powers[first:first + period]:
        acc &= M[np.ix_(odd, odd)]
    if not acc.all():
        i, j = [int(a[0]) for a in np.nonzero(~acc)]
        return Verdict(REFUTED, witness={'U': _cell(g, odd[i]),
                                         'V': _cell(g, odd[j])})
    return Verdict(HOLDS, witness={'first': first + 1, 'period': period})


def _wm(g):
    powers = g.powers()[0]
    odd = np.array(g.cells)
    k = g.k
    cov = np.zeros((k, k, k, k), dtype=bool)
    for M in powers:
        m = M[np.ix_(odd, odd)]
        if m.all():
            return Verdict(HOLDS, witness={'grid': k})
        cov |= m[:, None, :, None] & m[None, :, None, :]
    if cov.all():
        return Verdict(HOLDS, witness={'grid': k})
    i1, i2, j1, j2 = [int(a[0]) for a in np.nonzero(~cov)]
    return Verdict(REFUTED, witness={'U1': _cell(g, odd[i1]),
                                     'U2': _cell(g, odd[i2]),
                                     'V1': _cell(g, odd[j1]),
                                     'V2': _cell(g, odd[j2])})


def _pairs(g, test):
    powers = g.powers()[0]
    for a, b in itertools.combinations_with_replacement(g.cells, 2):
        if not test([M[a] & M[b] for M in powers]):
            return Verdict(REFUTED, witness={'U': _cell(g, a),
                                             'V': _cell(g, b)})
    return Verdict(HOLDS, witness={'grid': g.k})


def _exact(g):
    return _pairs(g, lambda rows: any(r.any() for r in rows))


def _fexact(g):
    return _pairs(g, lambda rows: any(r[1::2].any() for r in rows))


def _et(g):
    return _pairs(g, lambda rows: np.logical_or.reduce(rows)[1::2].all())


def _set(g):
    return _pairs(g, lambda rows: np.logical_or.reduce(rows).all())


def _leo(g):
    powers = g.powers()[0]
    for s in g.cells:
        if not any(M[s].all() for M in powers):
            return Verdict(REFUTED, witness={'U': _cell(g, s)})
    return Verdict(HOLDS, witness={'grid': g.k})


def _spt(g, arity=3):
    powers = g.powers()[0]
    times = set()
    for s in g.cells:
        for x in range(g.nodes):
            t = 0
            for n, M in enumerate(powers):
                if M[s, x]:
                    t |= 1 << n
            if not t:
                return Verdict(REFUTED, witness={'U': _cell(g, s),
                                                 'node': x})
            times.add(t)
    minimal = []
    for t in sorted(times, key=lambda t: bin(t).count('1')):
        if not any(m & t == m for m in minimal):
            minimal.append(t)
    for combo in itertools.combinations_with_replacement(minimal, arity):
        acc = -1
        for t in combo:
            acc &= t
        if not acc:
            return Verdict(REFUTED, witness={'arity': arity})
    return Verdict(HOLDS, witness={'arity': arity})


_CHECKS = {
    'TT': _tt,
    'PT': lambda g: _pt(g, False),
    'SPtT': _sptt,
    'M': lambda g: _pt(g, True),
    'SM': _sm,
    'ST': _st,
    'VST': lambda g: _st(g, True),
    'WM': _wm,
    'TM': _tm,
    'EXACT': _exact,
    'FEXACT': _fexact,
    'ET': _et,
    'SET': _set,
    'SPT': _spt,
    'LEO': _leo,
}


def cross_validate(G, params, props=CROSS_CHECKED, analyzer=None):
    """Compare analyzer and oracle plain verdicts at grid k = 1/epsilon.

    Only definite analyzer verdicts can disagree; on relations that are
    not grid-aligned boxes the comparison is labeled heuristic.
    """
    g = discretize(G, params.m)
    if analyzer is None:
        analyzer = Analyzer(G, params)
    report = {'grid': g.k, 'aligned': g.aligned,
              'heuristic': not g.aligned, 'agreements': [],
              'disagreements': [], 'undecided': []}
    for name in props:
        prop = PropertyId(name, PLAIN)
        a = analyzer.check(prop)
        o = graph_check(g, prop)
        entry = {'property': name, 'analyzer': a.status, 'oracle': o.status}
        if a.exhausted or o.exhausted:
            report['undecided'].append(entry)
        elif a.status == o.status:
            report['agreements'].append(entry)
        else:
            report['disagreements'].append(entry)
    return report
