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

"""Reach sets, hitting profiles, trajectories and invariant kernels.

Forward reach from a start set is kept as a ReachSequence: the states
G^1(A), G^2(A), ... are computed on demand and hashed, so the first
repeated state fixes the whole infinite sequence.  Sequences are shared
per relation and mode through a ReachCache, which is what makes the
analyzer's thousands of (U, V) queries affordable.
"""

import collections
import logging
import math
import threading

import portion as P

from crdyn import conf
from crdyn import suitable
from crdyn.interval import IntervalUnion, Mesh, fmt, rat
from crdyn.relcore import image, preimage
from crdyn.verdict import Verdict, HOLDS, REFUTED, EXHAUSTED, PLAIN, SUITABLE

logger = logging.getLogger(__name__)

ORBITAL = 'orbital'
TRAJECTORIAL = 'trajectorial'

INVARIANCE_KINDS = ('plus', 'minus', 'weak')

_SET = 'set'
_THICK = 'thick'
_BRANCH = 'branch'


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def _is_point(A):
    return len(A) == 1 and A.lo == A.hi


class ReachSequence(object):
    """The forward states of one start set under one mode.

    'cycle' becomes (first, period) once a state repeats: for every
    0-based index i >= first the state at i equals the state at
    first + (i - first) % period.
    """

    def __init__(self, G, start, mode, budget, tracer=None, steps=None):
        self.G = G
        self.start = start
        self.mode = mode
        self.budget = budget
        self.tracer = tracer
        self.states = []
        self.unions = []
        self.cycle = None
        self.stable_at = None
        self.truncated = False
        self._seen = {}
        self._lock = threading.Lock()
        self._masks = {}
        # state -> next state, shared by the sequences of one cache
        self._steps = {} if steps is None else steps
        if mode == PLAIN:
            self.kind = _SET
            self._state = start
            self._skip = 0
        elif _is_point(start):
            self.kind = _BRANCH
            self._state = suitable.branch_start(G, start.lo)
            self._skip = 1
        else:
            self.kind = _THICK
            self._state = suitable.thick_start(start)
            self._skip = 0

    def __repr__(self):
        return '<ReachSequence %s %s from %s, %d states%s>' % (
            self.mode, self.kind, self.start, len(self.states),
            '' if self.cycle is None else ', cycle %d+%d' % self.cycle)

    def _step(self, state):
        key = (self.kind, state)
        nxt = self._steps.get(key)
        if nxt is None:
            G = self.G
            if self.kind == _SET:
                nxt = image(G, state)
            elif self.kind == _THICK:
                nxt = suitable.suitable_image(G, state)
            else:
                nxt = suitable.branch_step(G, *state)
            self._steps[key] = nxt
        return nxt

    def _size(self, state):
        if self.kind == _SET:
            return len(state)
        return len(state[0]) + len(state[1])

    def _set_of(self, i, state):
        if self.kind == _SET:
            return state
        if self.kind == _THICK:
            return suitable.thick_set(state)
        if i == 0:
            return self.G.fiber(self.start.lo)
        return suitable.branch_set(*state)

    @property
    def complete(self):
        """True when every later state is already known."""
        return self.cycle is not None

    def extend(self, N):
        """Make states 1..N available, unless a cycle or the budget ends
        the sequence first."""
        with self._lock:
            while (len(self.states) < N and self.cycle is None and
                   not self.truncated):
                i = len(self.states)
                state = self._step(self._state)
                if self._size(state) > self.budget:
                    self.truncated = True
                    logger.info('reach from %s: %d parts at step %d exceed '
                                'budget %d', self.start, self._size(state),
                                i + 1, self.budget)
                    break
                if i >= self._skip:
                    j = self._seen.get(state)
                    if j is not None:
                        self.cycle = (j, i - j)
                        logger.debug('reach from %s: cycle %d+%d',
                                     self.start, j, i - j)
                        if self.tracer is not None:
                            self.tracer(self, 'cycle',
                                        'first %d period %d' % self.cycle)
                        break
                    self._seen[state] = i
                s = self._set_of(i, state)
                if self.unions:
                    u = self.unions[-1] | s
                    if (self.kind == _SET and self.stable_at is None and
                            u == self.unions[-1]):
                        self.stable_at = i
                else:
                    u = s
                self.states.append(state)
                self.unions.append(u)
                self._state = state
        return self

    def horizon(self, N):
        """The largest n <= N whose state is known."""
        if self.cycle is not None:
            return N
        return min(N, len(self.states))

    def index(self, n):
        i = n - 1
        if i < len(self.states):
            return i
        if self.cycle is None:
            raise IndexError('state %d not computed' % n)
        j, p = self.cycle
        return j + (i - j) % p

    def state(self, n):
        return self.states[self.index(n)]

    def set(self, n):
        i = self.index(n)
        return self._set_of(i, self.states[i])

    def union(self, n):
        """G^1(A) u ... u G^n(A)."""
        if n - 1 < len(self.unions):
            return self.unions[n - 1]
        if self.cycle is None:
            raise IndexError('state %d not computed' % n)
        return self.unions[-1]

    def final_union(self):
        """The whole forward orbit of the start, when it is known."""
        if self.cycle is not None:
            return self.unions[-1]
        if self.stable_at is not None:
            return self.unions[self.stable_at]
        return None

    def hits(self, n, V):
        """The mode's hit test of the n-th state against V."""
        if self.kind == _THICK:
            return suitable.thick_hits(self.state(n), V)
        return self.set(n).meets(V)

    def _mask_lists(self, mesh):
        key = (mesh.extent, mesh.m)
        masks = self._masks.get(key)
        if masks is None:
            masks = ([], [])
            self._masks[key] = masks
        hit, pts = masks
        while len(hit) < len(self.states):
            i = len(hit)
            state = self.states[i]
            s = self._set_of(i, state)
            if self.kind == _THICK:
                hit.append(mesh.cell_mask(state.affine.nondegenerate()) |
                           mesh.cell_mask(state.collapsed))
            else:
                hit.append(mesh.cell_mask(s))
            pts.append(mesh.point_mask(s))
        return masks

    def hit_mask(self, mesh, n):
        """Bitmask of the mesh cells the n-th state hits."""
        return self._mask_lists(mesh)[0][self.index(n)]

    def point_mask(self, mesh, n):
        """Bitmask of the mesh sample points in the n-th set."""
        return self._mask_lists(mesh)[1][self.index(n)]

    def distinct_indices(self):
        return len(self.states)

    def final_hit_mask(self, mesh):
        """Every cell that any state will ever hit, when that is known."""
        if self.cycle is not None:
            mask = 0
            for m in self._mask_lists(mesh)[0]:
                mask |= m
            return mask
        if self.stable_at is not None:
            return mesh.cell_mask(self.unions[self.stable_at])
        return None


class ReachCache(object):
    """Reach sequences of one relation and mode, keyed by start set."""

    def __init__(self, G, mode=PLAIN, budget=None, tracer=None):
        if budget is None:
            budget = conf.budget()
        self.G = G
        self.mode = mode
        self.budget = budget
        self.tracer = tracer
        self._lock = threading.Lock()
        self._seqs = {}
        self._steps = {}

    def __len__(self):
        return len(self._seqs)

    def sequence(self, start, N):
        with self._lock:
            seq = self._seqs.get(start)
            if seq is None:
                seq = ReachSequence(self.G, start, self.mode, self.budget,
                                    self.tracer, self._steps)
                self._seqs[start] = seq
                if self.tracer is not None:
                    self.tracer(self, 'populate', 'start %s' % start)
        return seq.extend(N)


_cache_lock = threading.Lock()


def reach_cache(G, mode=PLAIN):
    """The shared ReachCache of G for 'mode'."""
    with _cache_lock:
        return G.memo(('reach', mode), lambda: ReachCache(G, mode))


def _check_mode(G, mode, override):
    if mode == SUITABLE:
        suitable.require_suitable(G, override=override)
    elif mode != PLAIN:
        raise ValueError('unknown mode %r' % (mode,))


Reach = collections.namedtuple('Reach', ['sets', 'complete', 'cycle'])


def forward_reach(G, A, N, mode=PLAIN, override=False):
    """G^1(A), ..., G^N(A), or the suitable powers in suitable mode.

    'complete' is False when the budget cut the list short; 'cycle' is the
    (first, period) of the eventually periodic sequence if it was found.
    """
    if not A:
        raise ValueError('empty start set')
    _check_mode(G, mode, override)
    seq = reach_cache(G, mode).sequence(A, N)
    n = seq.horizon(N)
    return Reach([seq.set(k) for k in range(1, n + 1)],
                 not seq.truncated, seq.cycle)


def backward_reach(G, A, N):
    """G^-1(A), ..., G^-N(A)."""
    out = []
    B = A
    for _ in range(N):
        B = preimage(G, B)
        out.append(B)
    return out


def reach_closure(G, A, maxiter=None):
    """The union of G^n(A) over n >= 1 as a fixpoint of R -> R u G(R).

    Returns (union, stabilized).
    """
    if maxiter is None:
        maxiter = _default_maxiter()
    R = image(G, A)
    for _ in range(maxiter):
        nxt = R | image(G, R)
        if nxt == R:
            return R, True
        R = nxt
    logger.info('reach closure of %s did not stabilize in %d steps',
                A, maxiter)
    return R, False


def _default_maxiter():
    return max(4 * conf.params().horizon, 512)


class ProfileClass(object):
    """Finite-prefix classification of a hitting profile."""

    def __init__(self, profile):
        N = profile.horizon
        hits = set(profile.hits)
        self.horizon = N
        self.nonempty = bool(hits)
        run = longest_miss = longest_hit = 0
        hit_run = 0
        for n in range(1, N + 1):
            if n in hits:
                run = 0
                hit_run += 1
                longest_hit = max(longest_hit, hit_run)
            else:
                hit_run = 0
                run += 1
                longest_miss = max(longest_miss, run)
        self.longest_run = longest_hit
        self.max_gap = longest_miss + 1 if hits else None
        self.cofinite_from = profile.cofinite_from()

    def syndetic_up_to(self, gap):
        """Every window of 'gap' consecutive n in [1..N] meets the hits."""
        return self.max_gap is not None and self.max_gap <= gap

    def thick_up_to(self, length):
        return self.longest_run >= length

    def to_json(self):
        return {'nonempty': self.nonempty, 'max_gap': self.max_gap,
                'longest_run': self.longest_run,
                'cofinite_from': self.cofinite_from}


class HittingProfile(collections.namedtuple(
        'HittingProfile', ['horizon', 'hits', 'mode', 'cycle'])):
    """The n in [1..horizon] at which a hit test succeeded.

    When 'cycle' is (start, pattern) the profile is known for every n:
    n >= start hits exactly when pattern[(n - start) % len(pattern)].
    """

    __slots__ = ()

    def __new__(cls, horizon, hits, mode=PLAIN, cycle=None):
        return super(HittingProfile, cls).__new__(cls, horizon,
                                                  tuple(sorted(hits)), mode,
                                                  cycle)

    def at(self, n):
        """True or False, or None if n is beyond what is known."""
        if n <= self.horizon:
            return n in self.hits
        if self.cycle is None:
            return None
        start, pattern = self.cycle
        return pattern[(n - start) % len(pattern)]

    @property
    def exact(self):
        return self.cycle is not None

    def never(self):
        """Certainly empty for every n."""
        return self.exact and not self.hits and not any(self.cycle[1])

    def always_eventually(self):
        return self.exact and all(self.cycle[1])

    def misses_infinitely(self):
        return self.exact and not all(self.cycle[1])

    def cofinite_from(self):
        """Least n0 with every n in [n0..horizon] a hit, or None."""
        if not self.hits or self.hits[-1] != self.horizon:
            if self.always_eventually():
                return self.cycle[0]
            return None
        n0 = self.horizon
        hits = set(self.hits)
        while n0 - 1 in hits:
            n0 -= 1
        if self.exact and not all(self.cycle[1]):
            return None
        return n0

    def classify(self):
        return ProfileClass(self)

    def __and__(self, other):
        N = min(self.horizon, other.horizon)
        hits = set(n for n in self.hits if n <= N) & set(other.hits)
        cycle = None
        if self.cycle is not None and other.cycle is not None:
            start = max(self.cycle[0], other.cycle[0])
            period = _lcm(len(self.cycle[1]), len(other.cycle[1]))
            if start <= N + 1:
                cycle = (start, tuple(
                    bool(self.at(n) and other.at(n))
                    for n in range(start, start + period)))
        return HittingProfile(N, hits, self.mode, cycle)

    def to_json(self):
        d = {'horizon': self.horizon, 'hits': list(self.hits),
             'mode': self.mode}
        if self.cycle is not None:
            d['cycle'] = {'start': self.cycle[0],
                          'pattern': [int(b) for b in self.cycle[1]]}
        return d


def _profile(seq, N, test, mode):
    n_max = seq.horizon(N)
    hits = [n for n in range(1, n_max + 1) if test(n)]
    cycle = None
    if seq.cycle is not None:
        j, p = seq.cycle
        start = j + 1
        if start <= n_max + 1:
            cycle = (start, tuple(bool(test(n))
                                  for n in range(start, start + p)))
    return HittingProfile(n_max, hits, mode, cycle)


def hitting_profile(G, U, V, N, mode=PLAIN, override=False):
    """N(U, V) = {n : G^n(U) meets V} up to N.

    In suitable mode a hit at n means interior(U & G^-n(V)) is nonempty.
    """
    if not U or not V:
        raise ValueError('empty set')
    _check_mode(G, mode, override)
    seq = reach_cache(G, mode).sequence(U, N)
    return _profile(seq, N, lambda n: seq.hits(n, V), mode)


def point_hitting_profile(G, U, x, N, mode=PLAIN, direction='into',
                          override=False):
    """N(U, x) = {n : x in G^n(U)}, or with direction='from' the reverse
    N(x, U) = {n : G^n(x) meets U}."""
    x = rat(x)
    _check_mode(G, mode, override)
    cache = reach_cache(G, mode)
    if direction == 'into':
        seq = cache.sequence(U, N)
        return _profile(seq, N, lambda n: x in seq.set(n), mode)
    if direction == 'from':
        seq = cache.sequence(IntervalUnion.point(x), N)
        return _profile(seq, N, lambda n: seq.set(n).meets(U), mode)
    raise ValueError('direction must be "into" or "from"')


def joint_hitting(G, pairs, N, mode=PLAIN, override=False):
    """The intersection of N(U_i, V_i) over 'pairs'."""
    if not pairs:
        raise ValueError('no pairs')
    result = None
    for (U, V) in pairs:
        p = hitting_profile(G, U, V, N, mode, override)
        result = p if result is None else result & p
    return result


def product_hitting(G, starts, targets, N, mode=PLAIN, override=False):
    """Joint hitting of the k-fold product: the n with G^n(U_i) meeting
    target i for every i.  A target is a set or a point."""
    if len(starts) != len(targets) or not starts:
        raise ValueError('starts and targets must pair up')
    result = None
    for U, t in zip(starts, targets):
        if isinstance(t, IntervalUnion):
            p = hitting_profile(G, U, t, N, mode, override)
        else:
            p = point_hitting_profile(G, U, t, N, mode, override=override)
        result = p if result is None else result & p
    return result


class Trajectory(collections.namedtuple('Trajectory',
                                        ['points', 'certificates'])):
    """x_0 ... x_m with, per step, the index of a primitive holding
    (x_i, x_i+1)."""

    __slots__ = ()

    def __len__(self):
        return len(self.certificates)

    def truncate(self, m):
        return Trajectory(self.points[:m + 1], self.certificates[:m])

    def to_json(self):
        return {'points': [fmt(x) for x in self.points],
                'certificates': list(self.certificates)}


def trajectory_check(G, pts):
    """Membership of 'pts' in the Mahavier product of G."""
    pts = [rat(x) for x in pts]
    certs = []
    for i, (x, y) in enumerate(zip(pts, pts[1:])):
        k = G.find(x, y)
        if k is None:
            return Verdict(REFUTED, witness={'index': i, 'pair': [x, y]})
        certs.append(k)
    return Verdict(HOLDS, witness=Trajectory(tuple(pts), tuple(certs)))


def _pick(S):
    """A point of the nonempty set S."""
    _, lo, hi, _ = S.atoms[0]
    return (lo + hi) / 2


def _bit(mesh, x):
    i = mesh.cell_of(x)
    return 0 if i is None else 1 << i


def _path_into(G, x, target, seq, k):
    """x_1 ... x_k with x_k in target, given G^k(x) meets target.

    Walks back through the forward states of x so that every backward
    set stays inside what x actually reaches.
    """
    back = [None] * (k + 1)
    back[k] = seq.set(k) & target
    for j in range(k - 1, 0, -1):
        back[j] = seq.set(j) & preimage(G, back[j + 1])
    pts = []
    y = x
    for j in range(1, k + 1):
        y = _pick(G.fiber(y) & back[j])
        pts.append(y)
    return pts


def _reached(seq, n):
    h = seq.horizon(n)
    return seq.union(h) if h else IntervalUnion.empty()


def _nearest(seq, mesh, untouched, limit):
    """(k, cells) for the least k <= limit whose state meets an untouched
    cell, or None."""
    for k in range(1, seq.horizon(limit) + 1):
        hit = [i for i in mesh.cells_of_mask(untouched)
               if seq.set(k).meets(mesh.cell(i))]
        if hit:
            return k, hit
    return None


def dense_trajectory_search(G, x0, epsilon, N):
    """Search for a trajectory from x0 of length <= N meeting every
    mesh cell.

    Breadth-first over the forward states G^k(x) of the current point:
    the nearest untouched cell is reached by an exact path, preferring
    landing points whose own orbit still meets the most untouched cells.
    Refuted when the orbit closure of x0 stabilizes away from a cell;
    exhausted otherwise, naming the cells no trajectory prefix reaches.
    """
    x0 = rat(x0)
    epsilon = rat(epsilon)
    mesh = Mesh(G.space.extent, epsilon.denominator)
    R, stabilized = reach_closure(G, IntervalUnion.point(x0))
    if stabilized:
        seen = mesh.cell_mask(R | IntervalUnion.point(x0))
        missing = mesh.full_cells & ~seen
        if missing:
            i = mesh.cells_of_mask(missing)[0]
            return Verdict(REFUTED, witness={'reason': 'orbit closure',
                                             'cell': mesh.cell(i),
                                             'reach': R})
    cache = reach_cache(G, PLAIN)
    untouched = mesh.full_cells & ~_bit(mesh, x0)
    pts = [x0]
    x = x0
    while untouched and len(pts) <= N:
        left = N - len(pts) + 1
        seq = cache.sequence(IntervalUnion.point(x), left)
        found = _nearest(seq, mesh, untouched, left)
        if found is None:
            break
        k, cells = found
        best = None
        for i in cells:
            path = _path_into(G, x, mesh.cell(i), seq, k)
            rest = untouched
            for y in path:
                rest &= ~_bit(mesh, y)
            look = max(min(left - k, 2 * mesh.m), 1)
            reach = _reached(cache.sequence(IntervalUnion.point(path[-1]),
                                            look), look)
            score = bin(mesh.cell_mask(reach) & rest).count('1')
            if best is None or score > best[0]:
                best = (score, path)
        for y in best[1]:
            untouched &= ~_bit(mesh, y)
        pts.extend(best[1])
        x = pts[-1]
    certs = tuple(G.find(a, b) for a, b in zip(pts, pts[1:]))
    t = Trajectory(tuple(pts), certs)
    if not untouched:
        return Verdict(HOLDS, witness=t, reached=len(t))
    prefix = cache.sequence(IntervalUnion.point(x0), N)
    ever = mesh.cell_mask(_reached(prefix, N)
                          | IntervalUnion.point(x0))
    unreached = mesh.full_cells & ~ever
    logger.debug('dense search from %s stopped after %d steps, %d cells '
                 'untouched', x0, len(t), bin(untouched).count('1'))
    return Verdict(EXHAUSTED, witness={
        'trajectory': t,
        'untouched': [mesh.cell(i) for i in mesh.cells_of_mask(untouched)],
        'unreached': [mesh.cell(i) for i in mesh.cells_of_mask(unreached)]},
        reached=len(t))


def invariance_check(G, A, kind):
    """plus: G(A) in A; minus: G^-1(A) in A; weak: A in G^-1(A)."""
    if kind == 'plus':
        extra = image(G, A) - A
    elif kind == 'minus':
        extra = preimage(G, A) - A
    elif kind == 'weak':
        extra = A - preimage(G, A)
    else:
        raise ValueError('kind must be one of %s' % ', '.join(INVARIANCE_KINDS))
    if extra:
        return Verdict(REFUTED, witness={'kind': kind, 'outside': extra})
    return Verdict(HOLDS, witness={'kind': kind, 'set': A})


def weakly_invariant_kernel(G, A, maxiter=None, budget=None):
    """The largest weakly invariant subset of the closed set A.

    Returns (kernel, converged); on non-convergence the last iterate,
    which still contains the kernel.  Iteration also stops once an
    iterate has more than 'budget' parts.
    """
    if maxiter is None:
        maxiter = _default_maxiter()
    if budget is None:
        budget = conf.budget()
    K = A
    for k in range(maxiter):
        nxt = K & preimage(G, K)
        if nxt == K:
            logger.debug('kernel of %s converged after %d steps', A, k)
            return K, True
        K = nxt
        if not K:
            return K, True
        if len(K) > budget:
            logger.info('kernel of %s: %d parts at step %d exceed budget %d',
                        A, len(K), k + 1, budget)
            return K, False
    logger.info('kernel of %s did not converge in %d steps', A, maxiter)
    return K, False


OmegaLimit = collections.namedtuple('OmegaLimit', ['set', 'exact'])


def omega_limit_approx(G, t, burn_in=None, epsilon=None):
    """Cluster set of a finite trajectory.

    Exact (the cycle points) when the tail after 'burn_in' is periodic,
    otherwise the closed mesh cells the tail visits.
    """
    pts = list(t.points)
    if burn_in is None:
        burn_in = len(pts) // 2
    tail = pts[burn_in:]
    if not tail:
        return OmegaLimit(IntervalUnion.empty(), False)
    for p in range(1, len(tail) // 2 + 1):
        if all(tail[i] == tail[i + p] for i in range(len(tail) - p)):
            return OmegaLimit(IntervalUnion.points(tail[:p]), True)
    if epsilon is None:
        epsilon = conf.params().epsilon
    mesh = Mesh(G.space.extent, rat(epsilon).denominator)
    parts = []
    for x in tail:
        i = mesh.cell_of(x)
        if i is None:
            parts.append(P.singleton(x))
        else:
            c = mesh.closed_cell(i)
            parts.append(P.closed(c.lo, c.hi))
    return OmegaLimit(IntervalUnion.from_portion(P.Interval(*parts)), False)


def _ball(S, epsilon):
    return IntervalUnion.from_portion(P.Interval(
        *[P.open(lo - epsilon, hi + epsilon) for (_, lo, hi, _) in S.atoms]))


def _return_trajectory(G, x, n):
    """A trajectory x = x_0, ..., x_n = x, given x in G^n(x)."""
    back = [IntervalUnion.point(x)]
    for _ in range(n - 1):
        back.append(preimage(G, back[-1]))
    pts = [x]
    for k in range(n - 1, 0, -1):
        options = G.fiber(pts[-1]) & back[k]
        _, lo, hi, _ = options.atoms[0]
        pts.append(lo)
    pts.append(x)
    return trajectory_check(G, pts).witness


def almost_periodic_check(G, x, epsilon, N, kind=ORBITAL):
    """Almost periodicity of x at scale 'epsilon', up to N.

    orbital: the smallest window K such that, for every n, the orbit of x
    lies within epsilon of G^n(x) u ... u G^(n+K)(x).  trajectorial: a
    periodic trajectory through x, reported with its period as the gap.
    Both are refuted when x is not in its own orbit closure.
    """
    x = rat(x)
    epsilon = rat(epsilon)
    seq = reach_cache(G, PLAIN).sequence(IntervalUnion.point(x), N)
    n_max = seq.horizon(N)
    orbit = seq.final_union()
    if orbit is not None and x not in orbit:
        return Verdict(REFUTED, witness={'reason': 'not recurrent',
                                         'orbit': orbit})
    if kind == TRAJECTORIAL:
        for n in range(1, n_max + 1):
            if x in seq.set(n):
                t = _return_trajectory(G, x, n)
                return Verdict(HOLDS, witness={'gap': n, 'trajectory': t},
                               reached=n)
        return Verdict(EXHAUSTED, witness={'horizon': n_max},
                       reached=n_max, notes=[
                           'syndetic returns need not imply trajectorial '
                           'almost periodicity'])
    if kind != ORBITAL:
        raise ValueError('kind must be orbital or trajectorial')
    whole = orbit if orbit is not None else seq.union(n_max)
    if seq.cycle is not None:
        last, k_cap = sum(seq.cycle), seq.cycle[1]
    else:
        last, k_cap = n_max // 2, n_max - n_max // 2 - 1
    balls = {}

    def ball(t):
        if t not in balls:
            balls[t] = _ball(seq.set(t), epsilon)
        return balls[t]

    K = 0
    for n in range(1, last + 1):
        cover = IntervalUnion.empty()
        for k in range(k_cap + 1):
            cover = cover | ball(n + k)
            if whole <= cover:
                K = max(K, k)
                break
        else:
            if seq.cycle is not None:
                return Verdict(REFUTED, witness={'reason': 'no window',
                                                 'n': n, 'epsilon': epsilon})
            return Verdict(EXHAUSTED, witness={'horizon': n_max},
                           reached=n_max)
    if last < 1:
        return Verdict(EXHAUSTED, witness={'horizon': n_max}, reached=n_max)
    return Verdict(HOLDS, witness={'K': K, 'epsilon': epsilon},
                   reached=n_max, notes=[] if seq.cycle is not None
                   else ['prefix'])
