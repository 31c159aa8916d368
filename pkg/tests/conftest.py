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

from crdyn import conf
from crdyn import crrel
from crdyn import fixtures
from crdyn.verdict import AnalysisParams

F = fractions.Fraction


@pytest.fixture(autouse=True)
def isolated_conf(monkeypatch, tmp_path):
    """Keep the user's crdyn.conf and environment out of every test."""
    monkeypatch.setenv('HOME', str(tmp_path))
    for name in ('CRDYN_CONF', 'CRDYN_BUDGET', 'CRDYN_WORKERS'):
        monkeypatch.delenv(name, raising=False)
    conf.reset()
    yield
    conf.reset()


@pytest.fixture
def small():
    return AnalysisParams(epsilon=F(1, 16), horizon=32, arity=2,
                          oracle_grid=16)


@pytest.fixture(scope='session')
def corpus():
    return dict((e.name, e.relation()) for e in fixtures.corpus())


def rel(text):
    """A relation from .crrel lines; 'space 0 1' is prepended if missing."""
    if not text.lstrip().startswith('space'):
        text = 'space 0 1\n' + text
    return crrel.loads(text)


def _box(k, x0, x1, y0, y1):
    return 'box %d/%d %d/%d %d/%d %d/%d' % (x0, k, x1, k, y0, k, y1, k)


def aligned_boxes(rnd, k):
    """At most ten boxes on the 1/k grid, with columns covering [0,1]."""
    cuts = sorted(rnd.sample(range(1, k), min(k - 1, rnd.randint(0, 6))))
    edges = [0] + cuts + [k]
    lines = []
    for x0, x1 in zip(edges, edges[1:]):
        a = rnd.randint(0, k - 1)
        b = rnd.randint(a + 1, k)
        lines.append(_box(k, x0, x1, a, b))
    for _ in range(rnd.randint(0, 10 - len(lines))):
        x0 = rnd.randint(0, k)
        x1 = rnd.randint(x0, k)
        a = rnd.randint(0, k)
        b = rnd.randint(a, k)
        lines.append(_box(k, x0, x1, a, b))
    return rel('\n'.join(lines))
