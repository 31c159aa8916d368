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

from crdyn import relcore
from crdyn.exceptions import BudgetExhausted, OutsideExtent, SpaceMismatch
from crdyn.interval import Interval, IntervalUnion
from crdyn.relcore import (Box, PLMap, Seg, Space, compose, image, inverse,
                           is_surjective, iterate, preimage, restrict,
                           restrict_domain, restrict_range)

from conftest import rel

F = fractions.Fraction

UNIT = Space(0, 1)

TENT = 'seg 0 1/2 2 0\nseg 1/2 1 -2 2'
HALF = 'seg 0 1/2 1 1/2\nseg 1/2 1 1 -1/2'


def closed(lo, hi):
    return IntervalUnion.closed(lo, hi)


def test_canonical_form_ignores_cutting():
    assert rel('box 0 1/2 0 1\nbox 1/2 1 0 1') == rel('box 0 1 0 1')
    assert rel('seg 0 1/3 1 0\nseg 1/4 1 1 0') == rel('seg 0 1 1 0')
    assert rel('box 0 1 0 1\nseg 0 1 1 0') == rel('box 0 1 0 1')
    assert rel('box 0 1 0 1\npoint 1/2 1/2') == UNIT.full()


def test_canonical_form_keeps_vertical_extras():
    g = rel('seg 0 1 1 0\nbox 1/2 1/2 0 1')
    assert Box(Interval(F(1, 2), F(1, 2)), Interval(0, 1)) in g.prims
    assert g.fiber(F(1, 2)) == closed(0, 1)
    assert g.fiber(F(1, 4)) == IntervalUnion.point(F(1, 4))


def test_flat_segment_becomes_box():
    g = rel('seg 0 1 0 1/2')
    assert g.prims == (Box(Interval(0, 1), Interval(F(1, 2), F(1, 2))),)


def test_outside_extent():
    with pytest.raises(OutsideExtent):
        relcore.Relation(UNIT, [Seg(Interval(0, 1), 2, 0)])


def test_membership_and_fibers():
    g = rel(TENT)
    assert (F(1, 4), F(1, 2)) in g
    assert (F(1, 4), F(1, 3)) not in g
    assert g.find(F(1, 2), 1) is not None
    assert g.fiber(F(3, 4)) == IntervalUnion.point(F(1, 2))
    assert g.total
    assert len(g) == 2


def test_image_and_preimage():
    g = rel(TENT)
    assert image(g, closed(0, F(1, 4))) == closed(0, F(1, 2))
    assert image(g, IntervalUnion.open(F(1, 4), F(1, 2))) == \
        IntervalUnion.open(F(1, 2), 1)
    assert preimage(g, IntervalUnion.point(1)) == \
        IntervalUnion.point(F(1, 2))
    assert preimage(g, closed(0, F(1, 2))) == \
        IntervalUnion([(0, F(1, 4)), (F(3, 4), 1)])
    assert image(g, IntervalUnion.empty()) == IntervalUnion.empty()


def test_image_outside_extent():
    with pytest.raises(OutsideExtent):
        image(rel(TENT), closed(0, 2))


def test_compose_of_half_rotation():
    f = rel(HALF)
    assert compose(f, f) == rel('seg 0 1 1 0\npoint 0 1\npoint 1 0')


def test_compose_order():
    # apply 'first' then 'second': second o first
    first = rel('box 0 1 0 1/3')
    second = rel('box 0 1/2 1 1\nbox 1/2 1 0 0')
    assert compose(second, first) == rel('box 0 1 1 1')
    assert compose(first, second) == rel('box 0 1 0 1/3')


def test_compose_space_mismatch():
    g = rel(TENT)
    h = relcore.Relation(Space(-1, 1), [Seg(Interval(-1, 1), 1, 0)])
    with pytest.raises(SpaceMismatch):
        compose(g, h)


def test_iterate():
    g = rel(TENT)
    assert iterate(g, 0) == UNIT.identity()
    assert iterate(g, 1) == g
    g2 = iterate(g, 2)
    assert len(g2.prims) == 4
    assert g2.fiber(F(1, 4)) == IntervalUnion.point(1)
    assert iterate(g, 3) == compose(g, g2)


def test_iterate_budget():
    with pytest.raises(BudgetExhausted) as info:
        iterate(rel(TENT), 3, budget=3)
    assert info.value.reached == 1
    assert info.value.partial == rel(TENT)


def test_iterate_refuses_negative_power():
    with pytest.raises(ValueError):
        iterate(rel(TENT), -1)


def test_inverse():
    g = rel(TENT)
    inv = inverse(g)
    assert inv.fiber(F(1, 2)) == IntervalUnion.points([F(1, 4), F(3, 4)])
    assert inverse(inv) == g
    assert inverse(UNIT.identity()) == UNIT.identity()


def test_inverse_is_an_involution_on_the_corpus(corpus):
    for name, g in corpus.items():
        assert inverse(inverse(g)) == g, name


def test_restrictions():
    g = rel(TENT)
    left = restrict_domain(g, closed(0, F(1, 2)))
    assert left.prims == (Seg(Interval(0, F(1, 2)), 2, 0),)
    low = restrict_range(g, closed(0, F(1, 2)))
    assert low.prims == (Seg(Interval(0, F(1, 4)), 2, 0),
                         Seg(Interval(F(3, 4), 1), -2, 2))
    square = restrict(g, closed(0, F(1, 2)))
    assert square.prims == (Seg(Interval(0, F(1, 4)), 2, 0),)


def test_is_surjective():
    assert is_surjective(rel(TENT))
    assert not is_surjective(rel('box 0 1 0 1/2'))
    assert relcore.equal(rel(TENT), rel(TENT))


def _random_prim(rnd, denom=6):
    def r():
        return F(rnd.randint(0, denom), denom)
    if rnd.random() < 0.4:
        x0, x1 = sorted((r(), r()))
        y0, y1 = sorted((r(), r()))
        return Box(Interval(x0, x1), Interval(y0, y1))
    x0 = r()
    x1 = r()
    while x1 == x0:
        x1 = r()
    x0, x1 = sorted((x0, x1))
    y0, y1 = r(), r()
    slope = (y1 - y0) / (x1 - x0)
    return Seg(Interval(x0, x1), slope, y0 - slope * x0)


def _random_relation(rnd):
    n = rnd.randint(1, 6)
    return relcore.Relation(UNIT, [_random_prim(rnd) for _ in range(n)])


@pytest.mark.parametrize('seed', range(200))
def test_composition_laws_on_random_relations(seed):
    rnd = random.Random(seed)
    f, g, h = (_random_relation(rnd) for _ in range(3))
    assert compose(h, compose(g, f)) == compose(compose(h, g), f)
    assert inverse(compose(g, f)) == compose(inverse(f), inverse(g))


def test_image_agrees_with_composition_on_random_relations():
    rnd = random.Random(7)
    for _ in range(50):
        f = _random_relation(rnd)
        g = _random_relation(rnd)
        a = closed(*sorted((F(rnd.randint(0, 6), 6),
                            F(rnd.randint(0, 6), 6))))
        assert image(compose(g, f), a) == image(g, image(f, a))


def test_plmap_from_pieces():
    f = PLMap.from_pieces(UNIT, [Seg(Interval(0, F(1, 2)), 1, F(1, 2)),
                                 Seg(Interval(F(1, 2), 1), 1, F(-1, 2))],
                          owners=['right'])
    assert f(F(1, 2)) == 0
    assert f(F(1, 4)) == F(3, 4)
    assert f(1) == F(1, 2)
    assert f.closure() == rel(HALF)
    # 1 is only a limit value
    assert not f.is_surjective()
    left = PLMap.from_pieces(UNIT, [Seg(Interval(0, F(1, 2)), 1, F(1, 2)),
                                    Seg(Interval(F(1, 2), 1), 1, F(-1, 2))])
    assert left(F(1, 2)) == 1
    assert left != f
    # 0 is now only a limit value
    assert not left.is_surjective()
    assert left.image() == IntervalUnion.from_atoms([(False, 0, 1, True)])


def test_plmap_rejects_bad_breaks():
    with pytest.raises(ValueError):
        PLMap(UNIT, [0, F(1, 2)], [(1, 0)], [0, F(1, 2)])
    with pytest.raises(ValueError):
        PLMap(UNIT, [0, 1], [(1, 0), (1, 0)], [0, 1])
    with pytest.raises(OutsideExtent):
        PLMap(UNIT, [0, 1], [(2, 0)], [0, 1])


def test_plmap_image_need_not_be_closed():
    f = PLMap(UNIT, [0, F(1, 2), 1], [(1, 0), (1, F(-1, 2))],
              [0, 0, 0])
    assert f.image() == IntervalUnion.from_atoms([(True, 0, F(1, 2), False)])
    assert not f.is_surjective()


def test_plmap_iterate_matches_relation_iterate():
    f = PLMap.from_pieces(UNIT, [Seg(Interval(0, F(1, 2)), 2, 0),
                                 Seg(Interval(F(1, 2), 1), -2, 2)])
    for n in range(1, 4):
        assert f.iterate(n).closure() == iterate(rel(TENT), n)
    assert f.iterate(2)(F(1, 8)) == F(1, 2)
    assert len(f.iterate(3)) == 8


def test_plmap_iterate_budget():
    f = PLMap.from_pieces(UNIT, [Seg(Interval(0, F(1, 2)), 2, 0),
                                 Seg(Interval(F(1, 2), 1), -2, 2)])
    with pytest.raises(BudgetExhausted) as info:
        f.iterate(4, budget=5)
    assert info.value.reached == 2


def test_semiconjugacy():
    tent = rel(TENT)
    ident = PLMap.identity(UNIT)
    assert relcore.semiconjugacy_check(ident, tent, tent).holds
    v = relcore.semiconjugacy_check(ident, tent, UNIT.identity())
    assert v.refuted
    assert v.witness['reason'] == 'compositions differ'
    flat = PLMap(UNIT, [0, 1], [(0, 0)], [0, 0])
    v = relcore.semiconjugacy_check(flat, tent, tent)
    assert v.refuted
    assert v.witness['reason'] == 'not surjective'


def test_semiconjugacy_by_a_flip():
    # x -> 1 - x conjugates the tent map to the flipped tent
    tent = rel(TENT)
    flipped = rel('seg 0 1/2 -2 1\nseg 1/2 1 2 -1')
    flip = PLMap(UNIT, [0, 1], [(-1, 1)], [1, 0])
    assert relcore.semiconjugacy_check(flip, tent, flipped).holds
