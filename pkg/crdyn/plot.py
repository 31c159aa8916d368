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

"""Static SVG pictures of relations."""

import io
import logging

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt  # noqa: E402
import matplotlib.patches as mpatches  # noqa: E402

from crdyn.interval import IntervalUnion, fmt  # noqa: E402

logger = logging.getLogger(__name__)

PRIMITIVE_COLOR = '#1f4e79'
REACH_COLOR = '#d95f02'

# a box with a degenerate side is drawn as a line of this width
_LINE_WIDTH = 1.6
_POINT_SIZE = 14


def _f(*values):
    return [float(v) for v in values]


def _draw_primitive(ax, p):
    ix, iy = p.xrange, p.yrange
    if p.kind == 'seg':
        ax.plot(_f(ix.lo, ix.hi), _f(p.at(ix.lo), p.at(ix.hi)),
                color=PRIMITIVE_COLOR, linewidth=_LINE_WIDTH)
    elif ix.is_point and iy.is_point:
        ax.scatter(_f(ix.lo), _f(iy.lo), s=_POINT_SIZE,
                   color=PRIMITIVE_COLOR, zorder=3)
    elif ix.is_point or iy.is_point:
        ax.plot(_f(ix.lo, ix.hi), _f(iy.lo, iy.hi), color=PRIMITIVE_COLOR,
                linewidth=_LINE_WIDTH)
    else:
        ax.add_patch(mpatches.Rectangle(
            tuple(_f(ix.lo, iy.lo)), float(ix.hi - ix.lo),
            float(iy.hi - iy.lo),
            facecolor=PRIMITIVE_COLOR, alpha=0.35, edgecolor=PRIMITIVE_COLOR,
            linewidth=0.8))


def _draw_reach(ax, sets, lo, hi):
    """Reach sets as horizontal bands, later powers drawn stronger."""
    n = len(sets)
    width = (hi - lo) / 40
    for k, s in enumerate(sets):
        alpha = 0.15 + 0.6 * (k + 1) / n
        x0 = hi + width * (1 + k % 8) / 8
        for part in s.parts:
            if part.is_point:
                ax.scatter(_f(x0), _f(part.lo), s=4, color=REACH_COLOR,
                           alpha=alpha)
            else:
                ax.plot(_f(x0, x0), _f(part.lo, part.hi), color=REACH_COLOR,
                        alpha=alpha, linewidth=1.2)
            ax.axhspan(float(part.lo), float(part.hi), color=REACH_COLOR,
                       alpha=alpha * 0.15, linewidth=0)


def render(relation, reach=None, title=None):
    """The SVG text of a picture of 'relation'.

    'reach' is an IntervalUnion or a sequence of them (for example the
    'sets' of a forward reach); each is overlaid as a band on the y axis.
    """
    lo, hi = relation.space.lo, relation.space.hi
    fig, ax = plt.subplots(figsize=(6, 6))
    try:
        ax.plot(_f(lo, hi), _f(lo, hi), color='#999999', linewidth=0.6,
                linestyle=':')
        for p in relation.prims:
            _draw_primitive(ax, p)
        margin = (hi - lo) / 40
        right = hi
        if reach is not None:
            if isinstance(reach, IntervalUnion):
                reach = [reach]
            reach = list(reach)
            if reach:
                _draw_reach(ax, reach, lo, hi)
                right = hi + 2 * margin
        ax.set_xlim(float(lo - margin), float(right + margin))
        ax.set_ylim(float(lo - margin), float(hi + margin))
        ax.set_aspect('equal')
        ax.set_xlabel('x')
        ax.set_ylabel('y')
        ax.set_title(title or 'G on [%s, %s], %d primitives' %
                     (fmt(lo), fmt(hi), len(relation.prims)))
        out = io.StringIO()
        fig.savefig(out, format='svg', bbox_inches='tight',
                    facecolor='white')
    finally:
        plt.close(fig)
    logger.debug('rendered %d primitives', len(relation.prims))
    return out.getvalue()


def save(relation, filename, reach=None, title=None):
    with open(filename, 'w', encoding='utf-8') as f:
        f.write(render(relation, reach=reach, title=title))
