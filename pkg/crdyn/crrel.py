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

"""The .crrel text format.

    # comment
    space <lo> <hi>                 exactly once, first
    box <x0> <x1> <y0> <y1>
    seg <d0> <d1> <slope> <intercept>
    point <x> <y>

Numbers are integers or "p/q" rationals; fields are whitespace separated.
"""

import io
import re

from crdyn import relcore
from crdyn.exceptions import BadSyntax, NotTotal, OutsideExtent
from crdyn.interval import Interval, fmt, rat

_token = re.compile(r'\S+')

_arity = {'space': 2, 'box': 4, 'seg': 4, 'point': 2}


def _fields(line):
    return [(m.group(0), m.start() + 1)
            for m in _token.finditer(line.split('#', 1)[0])]


def _number(text, lineno, col):
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError):
        raise BadSyntax('bad number %r' % text, lineno, col)


def _interval(a, b, lineno, col):
    if a > b:
        raise BadSyntax('interval bounds out of order', lineno, col)
    return Interval(a, b)


def loads(text, allow_partial=False):
    """Parse .crrel text into a Relation."""
    space = None
    prims = []
    where = {}
    for lineno, line in enumerate(io.StringIO(text), 1):
        fields = _fields(line)
        if not fields:
            continue
        keyword, col = fields[0]
        if keyword not in _arity:
            raise BadSyntax('unknown keyword %r' % keyword, lineno, col)
        if len(fields) - 1 != _arity[keyword]:
            raise BadSyntax('%s takes %d fields, got %d' %
                            (keyword, _arity[keyword], len(fields) - 1),
                            lineno, col)
        v = [_number(t, lineno, c) for (t, c) in fields[1:]]
        if keyword == 'space':
            if space is not None:
                raise BadSyntax('second space line', lineno, col)
            if v[0] >= v[1]:
                raise BadSyntax('degenerate space', lineno, fields[1][1])
            space = relcore.Space(v[0], v[1])
            continue
        if space is None:
            raise BadSyntax('space must come first', lineno, col)
        if keyword == 'box':
            p = relcore.Box(_interval(v[0], v[1], lineno, fields[1][1]),
                            _interval(v[2], v[3], lineno, fields[3][1]))
        elif keyword == 'seg':
            p = relcore.Seg(_interval(v[0], v[1], lineno, fields[1][1]),
                            v[2], v[3])
        else:
            p = relcore.Box.point(v[0], v[1])
        where[len(prims)] = (lineno, col)
        prims.append(p)
    if space is None:
        raise BadSyntax('missing space line', 1, 1)
    try:
        g = relcore.normalize(prims, space)
    except OutsideExtent as e:
        n = prims.index(e.primitive) if e.primitive in prims else None
        if n is None:
            raise
        lineno, col = where[n]
        raise BadSyntax('primitive outside extent: %s' % (e.primitive,),
                        lineno, col)
    if not g.total and not allow_partial:
        missing = g.projection_x().complement(space.whole())
        raise NotTotal('no fiber over %s' % missing)
    return g


def load(filename, allow_partial=False):
    with open(filename, 'r', encoding='utf-8') as f:
        return loads(f.read(), allow_partial=allow_partial)


def dumps(g, comment=None):
    """Canonical .crrel text for a Relation."""
    out = []
    if comment:
        for line in comment.splitlines():
            out.append('# ' + line)
    out.append('space %s %s' % (fmt(g.space.lo), fmt(g.space.hi)))
    for p in g.prims:
        out.append(str(p))
    return '\n'.join(out) + '\n'


def dump(g, filename, comment=None):
    with open(filename, 'w', encoding='utf-8') as f:
        f.write(dumps(g, comment))
