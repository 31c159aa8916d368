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

"""The shipped fixture corpus.

Each manifest entry names a .crrel file in this directory and the
statuses its checks are expected to produce at the default analysis
parameters.  A check is a property id ("TM", "TT:suitable") or the
word "suitable" for the suitability surrogate.
"""

import json
import logging
import os.path

from crdyn import crrel
from crdyn import suitable
from crdyn.analyzer import Analyzer
from crdyn.exceptions import NotSuitable, UnknownFixture
from crdyn.verdict import EXHAUSTED, PropertyId, jsonable

logger = logging.getLogger(__name__)

DIRECTORY = os.path.dirname(os.path.abspath(__file__))
MANIFEST = os.path.join(DIRECTORY, 'manifest.json')

SUITABLE_CHECK = 'suitable'

_corpus = None


class Entry(object):
    """One manifest entry."""

    def __init__(self, name, file, expected, description=None,
                 substitutions=None):
        self.name = name
        self.file = file
        self.description = description
        self.expected = list(expected)
        self.substitutions = list(substitutions or ())
        self._relation = None

    @property
    def path(self):
        return os.path.join(DIRECTORY, self.file)

    def relation(self):
        if self._relation is None:
            self._relation = crrel.load(self.path)
        return self._relation

    def to_json(self):
        d = {'name': self.name, 'file': self.file,
             'expected': self.expected}
        if self.description:
            d['description'] = self.description
        if self.substitutions:
            d['substitutions'] = self.substitutions
        return d


def corpus():
    """The manifest entries, in manifest order."""
    global _corpus
    if _corpus is None:
        with open(MANIFEST, 'r', encoding='utf-8') as f:
            data = json.load(f)
        _corpus = [Entry(**e) for e in data['fixtures']]
    return _corpus


def names():
    return [e.name for e in corpus()]


def get(name):
    for e in corpus():
        if e.name == name:
            return e
    raise UnknownFixture('%s (known: %s)' % (name, ', '.join(names())))


def load(name):
    """The Relation of fixture 'name'."""
    return get(name).relation()


def _run_check(G, analyzer, check):
    if check == SUITABLE_CHECK:
        return suitable.is_suitable(G, analyzer.params.epsilon)
    try:
        return analyzer.check(PropertyId.parse(check))
    except NotSuitable as e:
        logger.info('%s: %s', check, e)
        return None


def run_fixture(entry, params=None, report=False, **kwargs):
    """Run the expected checks of 'entry' (an Entry or a fixture name).

    Returns a dict with one result per expected check and 'matched',
    true when every actual status equals the expected one.  With
    'report' the full classify_all report is included as well.  Extra
    keyword arguments go to the Analyzer.
    """
    if not isinstance(entry, Entry):
        entry = get(entry)
    G = entry.relation()
    analyzer = Analyzer(G, params, **kwargs)
    results = []
    for exp in entry.expected:
        v = _run_check(G, analyzer, exp['check'])
        actual = v.status if v is not None else EXHAUSTED
        r = {'check': exp['check'], 'expected': exp['status'],
             'actual': actual, 'match': actual == exp['status'],
             'witness': jsonable(v.witness) if v is not None else None}
        if 'cite' in exp:
            r['cite'] = exp['cite']
        if not r['match']:
            logger.info('%s: %s expected %s, got %s', entry.name,
                        exp['check'], exp['status'], actual)
        results.append(r)
    out = {'name': entry.name, 'params': analyzer.params.to_json(),
           'results': results, 'matched': all(r['match'] for r in results)}
    if entry.substitutions:
        out['substitutions'] = entry.substitutions
    if report:
        out['report'] = analyzer.classify_all()
    return out


def run_all(params=None, **kwargs):
    return [run_fixture(e, params, **kwargs) for e in corpus()]
