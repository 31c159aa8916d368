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

import fractions
import random

import pytest

from crdyn import orbits
from crdyn.exceptions import NotSuitable
from crdyn.interval import IntervalUnion, Mesh
from crdyn.relcore import image, iterate
from crdyn.verdict import SUITABLE

from conftest import rel

F = fractions.Fraction


def closed(lo, hi):
    return IntervalUnion.closed(F(lo), F(hi))


def test_forward_reach_of_the_tent(corpus):
    r = orbits.forward_reach(corpus['tent'], closed(0, F(1, 4)), 4)
    assert r.sets == [closed(0, F(1, 2)), closed(0, 1), closed(0, 1),
                      closed(0, 1)]
    assert r.complete
    assert r.cycle == (1, 1)


def test_forward_reach_follows_cycles(corpus):
    r = orbits.forward_reach(corpus['composition'], closed(0, F(1, 4)), 5)
    # F(1/2) = {0, 1}, so the second state keeps the point 1
    assert r.cycle is not None and r.cycle[1] == 2
    assert r.sets[0] == closed(F(1, 2), F(3, 4))
    assert r.sets[1] == closed(0, F(1, 4)) | IntervalUnion.point(1)
    assert r.sets[3] == r.sets[1]
    assert r.sets[4] == closed(F(1, 2), F(3, 4))


@pytest.mark.parametrize('name', ['tent', 'composition', 'fan', 'irr',
                                  'ex2'])
def test_forward_reach_agrees_with_powers(corpus, name):
    g = corpus[name]
    lo, hi = g.space.lo, g.space.hi
    rnd = random.Random(name)
    for _ in range(4):
        a, b = sorted(lo + (hi - lo) * F(rnd.randint(0, 16), 16)
                      for _ in range(2))
        A = IntervalUnion.closed(a, b)
        r = orbits.forward_reach(g, A, 4)
        for n in range(1, 5):
            assert r.sets[n - 1] == image(iterate(g, n), A), (A, n)


def test_forward_reach_rejects_empty_starts(corpus):
    with pytest.raises(ValueError):
        orbits.forward_reach(corpus['tent'], IntervalUnion.empty(), 3)


def test_suitable_reach_of_a_point(corpus):
    g = corpus['tent_pm']
    r = orbits.forward_reach(g, IntervalUnion.point(0), 3, mode=SUITABLE)
    assert r.sets == [closed(-1, 1), IntervalUnion.point(0),
                      IntervalUnion.point(0)]
    plain = orbits.forward_reach(g, IntervalUnion.point(0), 3)
    assert plain.sets == [closed(-1, 1)] * 3


def test_suitable_reach_needs_suitability(corpus):
    g = corpus['everything']
    with pytest.raises(NotSuitable):
        orbits.forward_reach(g, closed(0, 1), 2, mode=SUITABLE)
    r = orbits.forward_reach(g, IntervalUnion.open(F(1, 2), 1), 2,
                             mode=SUITABLE, override=True)
    assert len(r.sets) == 2


def test_reach_cache_is_shared(corpus):
    g = rel('seg 0 1/2 2 0\nseg 1/2 1 -2 2')
    cache = orbits.reach_cache(g)
    assert orbits.reach_cache(g) is cache
    A = closed(0, F(1, 8))
    orbits.forward_reach(g, A, 3)
    orbits.forward_reach(g, A, 6)
    assert len(cache) == 1
    assert 'ReachSequence' in repr(cache.sequence(A, 1))


def test_reach_closure(corpus):
    R, stable = orbits.reach_closure(corpus['tent'], IntervalUnion.point(
        F(1, 2)))
    assert stable
    assert R == IntervalUnion.points([0, 1])
    R, stable = orbits.reach_closure(corpus['tent'], IntervalUnion.point(
        F(1, 5)), maxiter=1)
    assert not stable


def test_backward_reach(corpus):
    out = orbits.backward_reach(corpus['tent'], IntervalUnion.point(0), 2)
    assert out[0] == IntervalUnion.points([0, 1])
    assert out[1] == IntervalUnion.points([0, F(1, 2), 1])


def test_hitting_profile_of_a_rotation(corpus):
    g = corpus['composition']
    p = orbits.hitting_profile(g, IntervalUnion.open(0, F(1, 4)),
                               IntervalUnion.open(F(1, 2), 1), 10)
    assert p.hits == (1, 3, 5, 7, 9)
    assert p.exact
    assert p.cycle == (1, (True, False))
    assert p.at(101) is True
    assert p.at(100) is False
    assert p.misses_infinitely()
    assert p.cofinite_from() is None
    c = p.classify()
    assert c.max_gap == 2
    assert c.syndetic_up_to(2)
    assert not c.thick_up_to(2)


def test_hitting_profile_cofinite(corpus):
    g = corpus['tent']
    p = orbits.hitting_profile(g, IntervalUnion.open(0, F(1, 8)),
                               IntervalUnion.open(F(3, 4), 1), 12)
    assert p.hits[0] == 3
    assert p.cofinite_from() == 3
    assert p.always_eventually()
    assert p.to_json()['cycle']['pattern'] == [1]


def test_point_hitting_profile(corpus):
    g = corpus['tent']
    U = IntervalUnion.open(0, F(1, 8))
    p = orbits.point_hitting_profile(g, U, 1, 8)
    assert p.hits[0] == 4
    p = orbits.point_hitting_profile(g, closed(F(3, 4), 1),
                                     F(1, 2), 4, direction='from')
    assert p.hits == (1,)
    assert p.never() is False
    with pytest.raises(ValueError):
        orbits.point_hitting_profile(g, U, 1, 8, direction='sideways')


def test_product_hitting_of_opposite_phases(corpus):
    g = corpus['composition']
    V = IntervalUnion.open(F(1, 2), 1)
    p = orbits.product_hitting(g, [IntervalUnion.open(0, F(1, 4)),
                                   IntervalUnion.open(F(1, 2), F(3, 4))],
                               [V, V], 10)
    assert p.hits == ()
    assert p.never()
    with pytest.raises(ValueError):
        orbits.product_hitting(g, [V], [], 4)


def test_trajectory_check(corpus):
    g = corpus['tent']
    v = orbits.trajectory_check(g, [F(1, 4), F(1, 2), 1, 0, 0])
    assert v.holds
    assert len(v.witness) == 4
    assert v.witness.to_json()['points'] == ['1/4', '1/2', '1', '0', '0']
    v = orbits.trajectory_check(g, [F(1, 4), F(1, 3)])
    assert v.refuted
    assert v.witness['index'] == 0


def test_dense_trajectory_search():
    v = orbits.dense_trajectory_search(rel('box 0 1 0 1'), 0, F(1, 4), 20)
    assert v.holds
    assert v.reached == 4


def test_dense_trajectory_search_steers_through_fibers(corpus):
    g = corpus['everything']
    v = orbits.dense_trajectory_search(g, F(1, 4), F(1, 16), 128)
    assert v.holds
    t = v.witness
    assert len(t) <= 128
    assert orbits.trajectory_check(g, t.points).holds
    mesh = Mesh(g.space.extent, 16)
    assert mesh.cell_mask(IntervalUnion.points(t.points)) == mesh.full_cells
    assert list(t.certificates) == [g.find(x, y) for x, y in
                                    zip(t.points, t.points[1:])]


def test_dense_trajectory_search_refutes_finite_orbits(corpus):
    v = orbits.dense_trajectory_search(corpus['composition'], F(1, 8),
                                       F(1, 4), 20)
    assert v.refuted
    assert v.witness['reason'] == 'orbit closure'


def test_invariance(corpus):
    g = corpus['tent']
    assert orbits.invariance_check(g, closed(0, F(1, 2)), 'plus').refuted
    assert orbits.invariance_check(g, IntervalUnion.point(0), 'plus').holds
    v = orbits.invariance_check(g, IntervalUnion.point(0), 'minus')
    assert v.refuted
    assert v.witness['outside'] == IntervalUnion.point(1)
    assert orbits.invariance_check(g, closed(0, F(1, 2)), 'weak').refuted
    with pytest.raises(ValueError):
        orbits.invariance_check(g, closed(0, 1), 'sideways')


def test_weakly_invariant_kernel(corpus):
    K, converged = orbits.weakly_invariant_kernel(corpus['composition'],
                                                  closed(0, F(1, 2)))
    assert converged
    assert K == IntervalUnion.points([0, F(1, 2)])
    assert orbits.invariance_check(corpus['composition'], K, 'weak').holds


def test_weakly_invariant_kernel_stops_at_the_part_budget(corpus):
    # the tent kernel avoiding a cell is a Cantor set
    A = IntervalUnion.point(0) | closed(F(1, 16), 1)
    K, converged = orbits.weakly_invariant_kernel(corpus['tent'], A,
                                                  budget=64)
    assert not converged
    assert len(K) > 64
    assert 0 in K
    assert K <= A


def test_omega_limit_of_a_periodic_tail(corpus):
    t = orbits.trajectory_check(corpus['tent'],
                                [F(1, 4), F(1, 2), 1, 0, 0, 0, 0]).witness
    omega = orbits.omega_limit_approx(corpus['tent'], t)
    assert omega.exact
    assert omega.set == IntervalUnion.point(0)


def test_almost_periodic_rotation(corpus):
    g = corpus['composition']
    v = orbits.almost_periodic_check(g, F(1, 8), F(1, 16), 16)
    assert v.holds
    assert v.witness['K'] == 1
    v = orbits.almost_periodic_check(g, F(1, 8), F(1, 16), 16,
                                     kind=orbits.TRAJECTORIAL)
    assert v.holds
    assert v.witness['gap'] == 2
    assert v.witness['trajectory'].points == (F(1, 8), F(5, 8), F(1, 8))


def test_non_recurrent_point(corpus):
    v = orbits.almost_periodic_check(corpus['tent'], F(1, 2), F(1, 16), 16)
    assert v.refuted
    assert v.witness['reason'] == 'not recurrent'
