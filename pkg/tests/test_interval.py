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

import pytest

from crdyn.exceptions import BadSetLiteral
from crdyn.interval import Interval, IntervalUnion, Mesh, fmt, parse_set, rat

F = fractions.Fraction


def test_rat_accepts_exact_values():
    assert rat(3) == F(3)
    assert rat('2/6') == F(1, 3)
    assert rat(F(1, 7)) == F(1, 7)
    assert rat(' -1/2 ') == F(-1, 2)


@pytest.mark.parametrize('value', [0.5, '0.5', '1e3', True, ''])
def test_rat_refuses_inexact_values(value):
    with pytest.raises(ValueError):
        rat(value)


def test_fmt():
    assert fmt(F(4, 2)) == '2'
    assert fmt(F(-3, 9)) == '-1/3'


def test_interval():
    i = Interval(0, F(1, 2))
    assert F(1, 4) in i
    assert not i.is_point
    assert Interval(1, 1).is_point
    assert i.meets(Interval(F(1, 2), 1))
    assert i.intersection(Interval(F(1, 2), 1)) == Interval(F(1, 2), F(1, 2))
    assert i.intersection(Interval(F(3, 4), 1)) is None
    with pytest.raises(ValueError):
        Interval(1, 0)


def test_union_normalizes():
    u = IntervalUnion([(0, F(1, 4)), (F(1, 4), F(1, 2)), (F(3, 4), 1)])
    assert u.parts == [Interval(0, F(1, 2)), Interval(F(3, 4), 1)]
    assert len(u) == 2
    assert u == IntervalUnion([(F(3, 4), 1), (0, F(1, 2))])
    assert hash(u) == hash(IntervalUnion([(F(3, 4), 1), (0, F(1, 2))]))


def test_open_and_closed_ends():
    a = IntervalUnion.open(0, F(1, 2))
    b = IntervalUnion.closed(F(1, 2), 1)
    assert F(1, 2) not in a
    assert not a.meets(IntervalUnion.point(F(1, 2)))
    assert (a | b) == IntervalUnion.from_atoms([(False, 0, 1, True)])
    assert not (a | b).is_closed()
    assert (a | b).closure() == IntervalUnion.closed(0, 1)


def test_set_operations():
    whole = IntervalUnion.closed(0, 1)
    a = IntervalUnion.closed(0, F(1, 2))
    assert a.complement(whole) == IntervalUnion.from_atoms(
        [(False, F(1, 2), 1, True)])
    assert (whole - a) == a.complement(whole)
    assert a <= whole
    assert not whole <= a
    assert a in whole
    assert (a & IntervalUnion.point(F(1, 2))) == IntervalUnion.point(F(1, 2))
    assert not IntervalUnion.empty()


def test_interior_and_points():
    u = IntervalUnion.points([0, F(1, 3)]) | IntervalUnion.closed(F(1, 2), 1)
    assert u.interior_nonempty()
    assert u.isolated_points() == [0, F(1, 3)]
    assert u.nondegenerate() == IntervalUnion.closed(F(1, 2), 1)
    assert not IntervalUnion.points([0, 1]).interior_nonempty()
    assert u.hull() == Interval(0, 1)


def test_affine_image_flips_ends():
    u = IntervalUnion.from_atoms([(True, 0, F(1, 4), False)])
    assert u.affine(-2, 1) == IntervalUnion.from_atoms(
        [(False, F(1, 2), 1, True)])
    assert u.affine(0, F(1, 3)) == IntervalUnion.point(F(1, 3))


def test_parse_set():
    assert parse_set('0,1/2; 3/4,1') == IntervalUnion(
        [(0, F(1, 2)), (F(3, 4), 1)])
    assert parse_set('1/3') == IntervalUnion.point(F(1, 3))


@pytest.mark.parametrize('text', ['', '1,0', 'a,b', '0,1,2', '0.5,1'])
def test_parse_set_errors(text):
    with pytest.raises(BadSetLiteral):
        parse_set(text)


def test_mesh_cells_and_points():
    mesh = Mesh(Interval(0, 1), 4)
    assert mesh.width == F(1, 4)
    assert mesh.cell(1) == IntervalUnion.open(F(1, 4), F(1, 2))
    assert mesh.closed_cell(3) == Interval(F(3, 4), 1)
    assert len(mesh.points) == 9
    assert mesh.points[1] == F(1, 8)
    assert mesh.cell_of(F(3, 8)) == 1
    assert mesh.cell_of(F(1, 4)) is None


def test_mesh_masks():
    mesh = Mesh(Interval(0, 1), 4)
    assert mesh.cell_mask(IntervalUnion.closed(0, F(1, 4))) == 0b0001
    assert mesh.cell_mask(IntervalUnion.point(F(1, 2))) == 0
    assert mesh.cell_mask(IntervalUnion.point(F(5, 8))) == 0b0100
    assert mesh.cell_mask(IntervalUnion.closed(F(1, 8), 1)) == mesh.full_cells
    assert mesh.point_mask(IntervalUnion.closed(0, F(1, 4))) == 0b111
    assert mesh.point_mask(IntervalUnion.open(0, F(1, 4))) == 0b010
    assert mesh.cells_of_mask(0b1010) == [1, 3]


def test_mesh_on_shifted_extent():
    mesh = Mesh(Interval(-1, 1), 4)
    assert mesh.edges == [-1, F(-1, 2), 0, F(1, 2), 1]
    assert mesh.cell_of(F(-3, 4)) == 0
    assert mesh.cell_mask(IntervalUnion.closed(-1, 0)) == 0b0011
