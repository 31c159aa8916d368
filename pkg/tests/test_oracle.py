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

import numpy as np
import pytest

from crdyn import oracle
from crdyn.interval import IntervalUnion
from crdyn.verdict import AnalysisParams, EXHAUSTED

from conftest import aligned_boxes, rel

F = fractions.Fraction


def test_discretize_diagonal(corpus):
    g = oracle.discretize(corpus['diagonal'], 4)
    assert g.nodes == 9
    assert not g.aligned
    assert (g.strata == np.eye(9, dtype=bool)).all()
    assert g.adjacency[0, 0] and g.adjacency[0, 1]
    assert not g.adjacency[0, 2]
    assert oracle.graph_check(g, 'TT').refuted


def test_stratum_sets():
    g = oracle.discretize(rel('box 0 1 0 1'), 4)
    assert g.aligned
    assert g.cells == [1, 3, 5, 7]
    assert g.stratum_set([0, 1]) == IntervalUnion.closed(0, F(1, 4)) - \
        IntervalUnion.point(F(1, 4))
    assert g.reach(1) == set(range(9))


@pytest.mark.parametrize('prop', ['TT', 'TM', 'ST', 'VST', 'M', 'LEO'])
def test_full_box_has_everything(prop):
    g = oracle.discretize(rel('box 0 1 0 1'), 4)
    assert oracle.graph_check(g, prop).holds


def test_graph_check_surjectivity():
    g = oracle.discretize(rel('box 0 1 0 1/2'), 4)
    v = oracle.graph_check(g, 'TT')
    assert v.refuted
    assert v.witness['reason'] == 'not surjective'


def test_graph_check_ignores_suitable_mode():
    g = oracle.discretize(rel('box 0 1 0 1'), 4)
    assert oracle.graph_check(g, 'TT:suitable').status == EXHAUSTED


def test_kernel_and_powers(corpus):
    g = oracle.discretize(corpus['composition'], 2)
    assert g.kernel(range(g.nodes)) == set(range(5))
    powers, first, period = g.powers()
    assert period == 2


@pytest.mark.parametrize('name', ['composition', 'tent', 'fan', 'irr'])
def test_powers_stop_at_the_first_repeat(corpus, name):
    g = oracle.discretize(corpus[name], 8)
    powers, first, period = g.powers()
    assert len(powers) == first + period
    keys = [M.tobytes() for M in powers]
    assert len(set(keys)) == len(keys)
    nxt = powers[-1].astype(np.int64).dot(g.strata.astype(np.int64)) > 0
    assert (nxt == powers[first]).all()


def test_cross_validation_on_aligned_boxes():
    rnd = random.Random(1729)
    decided = 0
    for _ in range(50):
        k = rnd.choice([2, 3, 4, 5, 8, 16])
        params = AnalysisParams(epsilon=F(1, k), horizon=32, arity=2,
                                oracle_grid=k)
        G = aligned_boxes(rnd, k)
        report = oracle.cross_validate(G, params)
        assert report['aligned']
        assert report['grid'] == k
        assert report['disagreements'] == [], str(G)
        checked = report['agreements'] + report['undecided']
        assert sorted(e['property'] for e in checked) == \
            sorted(oracle.CROSS_CHECKED)
        decided += len(report['agreements'])
    assert decided > 0


def test_cross_validation_of_the_tent(corpus, small):
    report = oracle.cross_validate(corpus['tent'], small, props=('TT',))
    assert report['heuristic']
    assert report['agreements'] == [{'property': 'TT', 'analyzer': 'holds',
                                     'oracle': 'holds'}]
