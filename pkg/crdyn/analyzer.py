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

"""Semi-decision checks for the transitivity spectrum.

Every check quantifies over the open cells of the test mesh and the mesh
sample points, and over powers n <= horizon.  A check answers 'holds'
when the finite statement is met, 'refuted' only with a finite
certificate (a reach set or profile known for every n, a converged
kernel, or a missing point of the image), and 'exhausted' otherwise.
"""

import concurrent.futures
import itertools
import logging
import threading
import time

from crdyn import conf
from crdyn import orbits
from crdyn import suitable
from crdyn.interval import IntervalUnion, Mesh, fmt
from crdyn.relcore import is_surjective
from crdyn.verdict import (Verdict, PropertyId, HOLDS, REFUTED, EXHAUSTED,
                           PLAIN, SUITABLE, PROPERTY_NAMES, record)

logger = logging.getLogger(__name__)

# (antecedent, consequent) within one mode
IMPLICATIONS = (
    ('TM', 'WM'), ('WM', 'TT'),
    ('SPtT', 'PT'), ('SPtT', 'TT'),
    ('SM', 'M'), ('M', 'SPtT'),
    ('VST', 'ST'), ('ST', 'TT'),
    ('SET', 'ET'), ('ET', 'TT'), ('ET', 'EXACT'),
    ('SET', 'FEXACT'), ('SET', 'ST'),
    ('SPT', 'SET'), ('LEO', 'SPT'), ('LEO', 'TM'),
)

SUITABLE_IMPLICATIONS = (('ET', 'WM'),)

OPEN_QUESTIONS = (
    'weak mixing of a non-suitable relation is not known to give '
    'transitivity of every finite product; product checks are evidence only',
    'suitable minimality is not known to imply suitable very strong '
    'transitivity; classifier output is evidence only',
)

# checks that are cheap enough to consult for inherited refutations
_CHEAP_FIRST = ('TT', 'M', 'ST', 'PT', 'EXACT', 'FEXACT', 'TM', 'WM', 'ET',
                'SET', 'VST', 'SPtT', 'SM', 'SPT', 'LEO')

_MAX_PROFILES = 256


def _edges(mode):
    edges = set((PropertyId(a, mode), PropertyId(b, mode))
                for (a, b) in IMPLICATIONS)
    if mode == SUITABLE:
        edges.update((PropertyId(a, SUITABLE), PropertyId(b, SUITABLE))
                     for (a, b) in SUITABLE_IMPLICATIONS)
        edges.update((PropertyId(n, SUITABLE), PropertyId(n, PLAIN))
                     for n in PROPERTY_NAMES)
    return edges


def implication_closure():
    """All (antecedent, consequent) PropertyId pairs, transitively."""
    edges = _edges(PLAIN) | _edges(SUITABLE)
    succ = {}
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
    closure = set()
    for a in list(succ):
        stack = list(succ[a])
        seen = set()
        while stack:
            b = stack.pop()
            if b in seen:
                continue
            seen.add(b)
            closure.add((a, b))
            stack.extend(succ.get(b, ()))
    return closure


_CLOSURE = implication_closure()


def consequents(prop):
    out = [b for (a, b) in _CLOSURE if a == prop]
    return sorted(out, key=lambda p: (p.mode != prop.mode,
                                      _CHEAP_FIRST.index(p.name)))


def _first_bit(mask):
    return (mask & -mask).bit_length() - 1


def _uncertified(witness):
    """The note kept on a suitable-mode refutation left undecided."""
    w = witness if isinstance(witness, dict) else {}
    if 'reason' in w:
        cause = w['reason']
    elif 'U' in w and 'V' in w:
        cause = 'a miss of %s from %s' % (w['V'], w['U'])
    elif 'U' in w:
        cause = 'the reach of %s' % (w['U'],)
    else:
        cause = 'its witness'
    return 'suitable-mode refutation by %s is not certified' % cause


class Analyzer(object):
    """Checks properties of one relation at one set of parameters.

    'tracer' is a method taking the analyzer, an operation string and a
    message; it is called for every property decided.  'workers' threads
    populate reach sequences.  'override' skips the suitability gate of
    suitable-mode checks.
    """

    def __init__(self, G, params=None, tracer=None, workers=None,
                 override=False):
        if params is None:
            params = conf.params()
        if workers is None:
            workers = conf.workers()
        self.G = G
        self.params = params
        self.tracer = tracer
        self.workers = workers
        self.override = override
        self.mesh = Mesh(G.space.extent, params.m)
        self.whole = G.space.whole()
        self._verdicts = {}
        self._lock = threading.RLock()
        self._memo = {}

    def _trace(self, op, msg):
        logger.debug('%s: %s', op, msg)
        if self.tracer is not None:
            self.tracer(self, op, msg)

    # reach sequences

    def _sequences(self, starts, mode):
        cache = orbits.reach_cache(self.G, mode)
        N = self.params.horizon
        if self.workers > 1 and len(starts) > 1:
            with concurrent.futures.ThreadPoolExecutor(
                    max_workers=self.workers) as pool:
                return list(pool.map(lambda s: cache.sequence(s, N), starts))
        return [cache.sequence(s, N) for s in starts]

    def cells(self, mode):
        key = ('cells', mode)
        if key not in self._memo:
            self._memo[key] = self._sequences(self.mesh.cells, mode)
            self._trace('reach', '%d cell sequences (%s)' %
                        (self.mesh.m, mode))
        return self._memo[key]

    def points(self, mode):
        key = ('points', mode)
        if key not in self._memo:
            starts = [IntervalUnion.point(x) for x in self.mesh.points]
            self._memo[key] = self._sequences(starts, mode)
            self._trace('reach', '%d point sequences (%s)' %
                        (len(starts), mode))
        return self._memo[key]

    # entry points

    def check(self, prop):
        """The Verdict for 'prop' (a PropertyId or "TM:suitable")."""
        if not isinstance(prop, PropertyId):
            prop = PropertyId.parse(prop)
        if prop.suitable:
            suitable.require_suitable(self.G, override=self.override,
                                      epsilon=self.params.epsilon)
        with self._lock:
            v = self._verdicts.get(prop)
            if v is None:
                start = time.time()
                v = self._decide(prop)
                v.with_params(self.params)
                v.elapsed_ms = (time.time() - start) * 1000
                self._verdicts[prop] = v
                self._trace('check', '%s %s' % (prop, v.status))
        return v

    def record(self, prop):
        if not isinstance(prop, PropertyId):
            prop = PropertyId.parse(prop)
        v = self.check(prop)
        return record(prop, self.params, v, v.elapsed_ms)

    def _decide(self, prop):
        name, mode = prop
        if name not in ('EXACT', 'FEXACT') and not is_surjective(self.G):
            gap = self.G.projection_y().complement(self.whole)
            return Verdict(REFUTED, witness={'reason': 'not surjective',
                                             'gap': gap})
        if mode == SUITABLE and name in ('SM', 'SPtT'):
            # G^{.1} = G, so both are statements about G itself
            plain = self.check(PropertyId(name))
            return Verdict(plain.status, plain.witness, reached=plain.reached,
                           notes=['same as plain mode'])
        v = getattr(self, '_check_' + name)(mode)
        if mode == SUITABLE and v.refuted:
            v = Verdict(EXHAUSTED, witness=v.witness, reached=v.reached,
                        notes=[_uncertified(v.witness)])
        if v.exhausted:
            for q in consequents(prop):
                w = self.check(q)
                if w.refuted:
                    logger.info('%s refuted through %s', prop, q)
                    return Verdict(REFUTED, witness={'implied': str(q),
                                                     'witness': w.witness},
                                   reached=v.reached, notes=v.notes)
        return v

    # helpers

    def _cell(self, i):
        return self.mesh.cell(i)

    def _horizon(self):
        return self.params.horizon

    def _pending(self, what, reached, notes=()):
        return Verdict(EXHAUSTED, witness=what, reached=reached, notes=notes)

    def _cover_times(self, mode, exact):
        """Per cell, the first n at which the cumulative reach meets every
        cell (exact=False) or equals the space (exact=True)."""
        key = ('cover', mode, exact)
        if key in self._memo:
            return self._memo[key]
        mesh = self.mesh
        full = mesh.full_cells
        N = self._horizon()
        times = []
        result = None
        pending = None
        for i, seq in enumerate(self.cells(mode)):
            acc = 0
            first = None
            for n in range(1, seq.horizon(N) + 1):
                acc |= seq.hit_mask(mesh, n)
                if acc == full and (not exact or seq.union(n) == self.whole):
                    first = n
                    break
            if first is None:
                if exact:
                    fin = seq.final_union()
                    if fin is not None and fin != self.whole:
                        result = Verdict(REFUTED, witness={
                            'U': self._cell(i), 'reach': fin,
                            'missing': fin.complement(self.whole)})
                        break
                else:
                    fin = seq.final_hit_mask(mesh)
                    if fin is not None and fin != full:
                        j = _first_bit(full & ~fin)
                        result = Verdict(REFUTED, witness={
                            'U': self._cell(i), 'V': self._cell(j),
                            'reach': seq.final_union()})
                        break
                if pending is None:
                    pending = {'U': self._cell(i),
                               'reached': seq.horizon(N)}
            times.append(first)
        if result is None:
            if pending is not None:
                result = self._pending(pending, N)
            else:
                bound = max(times)
                result = Verdict(HOLDS, witness={'cells': mesh.m,
                                                 'bound': bound},
                                 reached=bound)
        self._memo[key] = result
        return result

    # one method per property

    def _check_TT(self, mode):
        return self._cover_times(mode, False)

    def _check_ST(self, mode):
        return self._cover_times(mode, True)

    def _check_VST(self, mode):
        v = self._cover_times(mode, True)
        if v.holds:
            return Verdict(HOLDS, witness={'uniform_bound':
                                           v.witness['bound']},
                           reached=v.reached)
        return v

    def _point_cover(self, mode, every):
        mesh = self.mesh
        full = mesh.full_cells
        N = self._horizon()
        worst = 0
        pending = None
        for x, seq in zip(mesh.points, self.points(mode)):
            acc = 0
            first = None
            for n in range(1, seq.horizon(N) + 1):
                acc |= seq.hit_mask(mesh, n)
                if acc == full:
                    first = n
                    break
            if first is not None:
                if not every:
                    return Verdict(HOLDS, witness={'x': x, 'n': first},
                                   reached=first)
                worst = max(worst, first)
                continue
            if every:
                fin = seq.final_hit_mask(mesh)
                if fin is not None and fin != full:
                    j = _first_bit(full & ~fin)
                    return Verdict(REFUTED, witness={
                        'x': x, 'V': self._cell(j),
                        'orbit': seq.final_union()})
            if pending is None:
                pending = {'x': x, 'reached': seq.horizon(N)}
        if every and pending is None:
            return Verdict(HOLDS, witness={'points': len(mesh.points),
                                           'bound': worst}, reached=worst)
        return self._pending(pending, N)

    def _check_PT(self, mode):
        return self._point_cover(mode, False)

    def _check_M(self, mode):
        return self._point_cover(mode, True)

    def _check_SPtT(self, mode):
        N = self._horizon()
        first_refuted = None
        for x in self.mesh.points:
            v = orbits.dense_trajectory_search(self.G, x, self.params.epsilon,
                                               N)
            if v.holds:
                return Verdict(HOLDS, witness={'x': x, 'trajectory':
                                               v.witness}, reached=v.reached)
            if first_refuted is None and v.refuted:
                first_refuted = dict(v.witness, x=x)
        return self._pending(first_refuted or {'horizon': N}, N)

    def _check_SM(self, mode):
        maxiter = max(4 * self._horizon(), 512)
        # kernels that split finer than the mesh are left undecided
        parts = 8 * self.mesh.m
        pending = None
        for x, seq in zip(self.mesh.points, self.points(PLAIN)):
            # a closed forward orbit is weakly invariant
            orbit = seq.final_union()
            if orbit is not None and orbit != self.whole:
                return Verdict(REFUTED, witness={'x': x, 'kernel': orbit})
        for i, U in enumerate(self.mesh.cells):
            A = U.complement(self.whole)
            K, converged = orbits.weakly_invariant_kernel(self.G, A, maxiter,
                                                          parts)
            if converged and K:
                return Verdict(REFUTED, witness={'U': U, 'kernel': K})
            if not converged and pending is None:
                pending = {'U': U, 'kernel_parts': len(K)}
        if pending is not None:
            return self._pending(pending, maxiter)
        return Verdict(HOLDS, witness={'cells': self.mesh.m})

    def _check_TM(self, mode):
        mesh = self.mesh
        full = mesh.full_cells
        N = self._horizon()
        margin = N - N // 4
        worst = 0
        pending = None
        for i, seq in enumerate(self.cells(mode)):
            if seq.cycle is not None:
                j, p = seq.cycle
                acc = full
                for n in range(j + 1, j + p + 1):
                    acc &= seq.hit_mask(mesh, n)
                if acc != full:
                    k = _first_bit(full & ~acc)
                    return Verdict(REFUTED, witness={
                        'U': self._cell(i), 'V': self._cell(k),
                        'misses_with_period': p})
            n_max = seq.horizon(N)
            acc = full
            n0 = 1
            for n in range(n_max, 0, -1):
                acc &= seq.hit_mask(mesh, n)
                if acc != full:
                    n0 = n + 1
                    break
            if seq.cycle is None and (n_max < N or n0 > margin):
                if pending is None:
                    pending = {'U': self._cell(i), 'cofinite_from':
                               n0 if n0 <= n_max else None}
                continue
            worst = max(worst, n0)
        if pending is not None:
            return self._pending(pending, N)
        return Verdict(HOLDS, witness={'cofinite_from': worst}, reached=N)

    def _check_WM(self, mode):
        mesh = self.mesh
        full = mesh.full_cells
        N = self._horizon()
        seqs = self.cells(mode)
        n_max = min(s.horizon(N) for s in seqs)
        for n in range(1, n_max + 1):
            if all(s.hit_mask(mesh, n) == full for s in seqs):
                return Verdict(HOLDS, witness={'n': n}, reached=n)
        # one representative per distinct mask sequence
        groups = {}
        for i, s in enumerate(seqs):
            key = tuple(s.hit_mask(mesh, n) for n in range(1, n_max + 1))
            groups.setdefault(key, (i, s))
        reps = list(groups.items())
        full_at = {}
        for key, _ in reps:
            bits = 0
            for n, m in enumerate(key):
                if m == full:
                    bits |= 1 << n
            full_at[key] = bits
        pending = None
        for (ka, (ia, sa)), (kb, (ib, sb)) in itertools.product(reps, reps):
            if full_at[ka] & full_at[kb]:
                continue
            missing = self._pair_cover(ka, kb)
            if missing is None:
                continue
            if sa.cycle is not None and sb.cycle is not None:
                start = max(sa.cycle[0], sb.cycle[0]) + 1
                span = orbits._lcm(sa.cycle[1], sb.cycle[1])
                last = max(start + span - 1, n_max)
                ext_a = tuple(sa.hit_mask(mesh, n) for n in range(1, last + 1))
                ext_b = tuple(sb.hit_mask(mesh, n) for n in range(1, last + 1))
                missing = self._pair_cover(ext_a, ext_b)
                if missing is not None:
                    return Verdict(REFUTED, witness={
                        'U1': self._cell(ia), 'V1': self._cell(missing[0]),
                        'U2': self._cell(ib), 'V2': self._cell(missing[1])})
                continue
            if pending is None:
                pending = {'U1': self._cell(ia), 'V1': self._cell(missing[0]),
                           'U2': self._cell(ib), 'V2': self._cell(missing[1])}
        if pending is not None:
            return self._pending(pending, n_max)
        return Verdict(HOLDS, witness={'profiles': len(reps)}, reached=n_max)

    def _pair_cover(self, ka, kb):
        """(j1, j2) never hit at a common n, or None."""
        full = self.mesh.full_cells
        cov = {}
        for ma, mb in zip(ka, kb):
            if not mb:
                continue
            m = ma
            while m:
                j = _first_bit(m)
                cov[j] = cov.get(j, 0) | mb
                m &= m - 1
        for j1 in range(self.mesh.m):
            c = cov.get(j1, 0)
            if c != full:
                return j1, _first_bit(full & ~c)
        return None

    def _pairs(self, mode, test, cumulative):
        """Drive EXACT/FEXACT (test returns a bool per n) and ET/SET
        (test returns a set per n, accumulated)."""
        mesh = self.mesh
        full = mesh.full_cells
        N = self._horizon()
        seqs = self.cells(mode)
        worst = 0
        pending = None
        for ia, ib in itertools.combinations_with_replacement(
                range(len(seqs)), 2):
            sa, sb = seqs[ia], seqs[ib]
            n_max = min(sa.horizon(N), sb.horizon(N))
            last = n_max
            exact = sa.cycle is not None and sb.cycle is not None
            if exact:
                start = max(sa.cycle[0], sb.cycle[0]) + 1
                last = max(n_max, start +
                           orbits._lcm(sa.cycle[1], sb.cycle[1]) - 1)
            found = None
            acc = IntervalUnion.empty()
            for n in range(1, last + 1):
                a, b = sa.set(n), sb.set(n)
                if cumulative is None:
                    if test(a, b):
                        found = n
                        break
                    continue
                acc = acc | test(a, b)
                if mesh.cell_mask(acc) == full and (
                        cumulative == 'dense' or acc == self.whole):
                    found = n
                    break
            if found is not None and found <= n_max:
                worst = max(worst, found)
                continue
            if found is None and exact:
                return Verdict(REFUTED, witness={'U': self._cell(ia),
                                                 'V': self._cell(ib)})
            if pending is None:
                pending = {'U': self._cell(ia), 'V': self._cell(ib)}
        if pending is not None:
            return self._pending(pending, N)
        return Verdict(HOLDS, witness={'bound': worst}, reached=worst)

    def _check_EXACT(self, mode):
        return self._pairs(mode, lambda a, b: a.meets(b), None)

    def _check_FEXACT(self, mode):
        return self._pairs(mode, lambda a, b: (a & b).interior_nonempty(),
                           None)

    def _check_ET(self, mode):
        return self._pairs(mode, lambda a, b: a & b, 'dense')

    def _check_SET(self, mode):
        return self._pairs(mode, lambda a, b: a & b, 'equal')

    def _check_SPT(self, mode):
        mesh = self.mesh
        N = self._horizon()
        k = self.params.arity
        seqs = self.cells(mode)
        n_max = min(s.horizon(N) for s in seqs)
        fullp = mesh.full_points
        for n in range(1, n_max + 1):
            if all(s.point_mask(mesh, n) == fullp for s in seqs):
                return Verdict(HOLDS, witness={'arity': k, 'n': n},
                               reached=n)
        npts = len(mesh.points)
        times = []
        for i, s in enumerate(seqs):
            always = 0
            per = [0] * npts
            for n in range(1, n_max + 1):
                pm = s.point_mask(mesh, n)
                if pm == fullp:
                    always |= 1 << (n - 1)
                    continue
                while pm:
                    x = _first_bit(pm)
                    per[x] |= 1 << (n - 1)
                    pm &= pm - 1
            for x in range(npts):
                t = per[x] | always
                if not t:
                    if s.cycle is not None and not any(
                            mesh.point_mask(s.set(n)) >> x & 1
                            for n in range(1, sum(s.cycle) + 1)):
                        return Verdict(REFUTED, witness={
                            'U': self._cell(i), 'x': mesh.points[x]})
                    return self._pending({'U': self._cell(i),
                                          'x': mesh.points[x]}, n_max)
                times.append(t)
        minimal = []
        for t in sorted(set(times), key=lambda t: bin(t).count('1')):
            if not any(m & t == m for m in minimal):
                minimal.append(t)
        if len(minimal) > _MAX_PROFILES:
            return self._pending({'arity': k, 'profiles': len(minimal)},
                                 n_max, notes=['too many distinct profiles'])
        for combo in itertools.combinations_with_replacement(minimal, k):
            acc = -1
            for t in combo:
                acc &= t
            if not acc:
                return self._pending({'arity': k, 'profiles': len(minimal)},
                                     n_max)
        return Verdict(HOLDS, witness={'arity': k, 'profiles': len(minimal)},
                       reached=n_max)

    def _check_LEO(self, mode):
        mesh = self.mesh
        full = mesh.full_cells
        N = self._horizon()
        worst = 0
        for i, seq in enumerate(self.cells(mode)):
            found = None
            for n in range(1, seq.horizon(N) + 1):
                if (seq.hit_mask(mesh, n) == full and
                        seq.set(n) == self.whole):
                    found = n
                    break
            if found is None:
                if seq.cycle is not None:
                    return Verdict(REFUTED, witness={'U': self._cell(i)})
                return self._pending({'U': self._cell(i)}, N)
            worst = max(worst, found)
        return Verdict(HOLDS, witness={'bound': worst}, reached=worst)

    # reports

    def classify_all(self, props=None):
        """Verdicts for every applicable property, as a JSON-ready dict."""
        G = self.G
        s = suitable.is_suitable(G, self.params.epsilon)
        report = {
            'space': [fmt(G.space.lo), fmt(G.space.hi)],
            'primitives': len(G.prims),
            'surjective': is_surjective(G),
            'params': self.params.to_json(),
            'suitable': s.to_json(),
            'verdicts': [],
            'notes': list(OPEN_QUESTIONS),
        }
        if props is None:
            props = [PropertyId(n, m) for m in (PLAIN, SUITABLE)
                     for n in PROPERTY_NAMES]
        for prop in props:
            if prop.suitable and not (s.holds or self.override):
                continue
            report['verdicts'].append(self.record(prop))
        if not (s.holds or self.override):
            report['notes'].append('suitable mode skipped: surrogate check '
                                   'refuted')
        return report


def check(G, prop, params=None, **kwargs):
    return Analyzer(G, params, **kwargs).check(prop)


def classify_all(G, params=None, **kwargs):
    return Analyzer(G, params, **kwargs).classify_all()


def lattice_check(report):
    """Implications violated among the definite verdicts of 'report'.

    'report' is a classify_all dict or a list of verdict records; records
    at different params are never compared.
    """
    records = report['verdicts'] if isinstance(report, dict) else report
    status = {}
    for r in records:
        key = (PropertyId(r['property'], r.get('mode', PLAIN)),
               repr(sorted(r.get('params', {}).items())))
        status[key] = r['verdict']
    out = []
    for (prop, params), v in sorted(status.items(), key=lambda kv: (
            str(kv[0][0]), kv[0][1])):
        if v != HOLDS:
            continue
        for (a, b) in sorted(_CLOSURE, key=lambda e: (str(e[0]), str(e[1]))):
            if a != prop:
                continue
            if status.get((b, params)) == REFUTED:
                out.append({'antecedent': str(a), 'consequent': str(b),
                            'params': params})
    return out
