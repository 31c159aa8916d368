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

"""The crdyn command.

A FILE argument is a path to a .crrel file, or the name of a shipped
fixture ("tent", "everything.crrel").  Exit status is 0 on success, 1
when 'analyze --expect' or 'fixtures run' sees an unexpected verdict,
and 2 on usage, parse and input errors.
"""

import json
import logging
import os.path
import sys

import click

from crdyn import conf
from crdyn import crrel
from crdyn import fixtures
from crdyn import oracle
from crdyn import orbits
from crdyn import plot
from crdyn import relcore
from crdyn import suitable
from crdyn.analyzer import Analyzer
from crdyn.exceptions import (BadSyntax, BadSetLiteral, CRDynException,
                              NotTotal, UnknownFixture, UnknownProperty)
from crdyn.interval import parse_set
from crdyn.verdict import PLAIN, STATUSES, SUITABLE, PropertyId, jsonable
from crdyn.version import version

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_USAGE = 2


class _Group(click.Group):

    def invoke(self, ctx):
        try:
            return super(_Group, self).invoke(ctx)
        except CRDynException as e:
            click.echo('crdyn: %s' % e, err=True)
            ctx.exit(EXIT_USAGE)


def _load_relation(ctx, param, value):
    if value is None:
        return None
    try:
        if os.path.exists(value):
            return crrel.load(value)
        name = os.path.basename(value)
        if name.endswith('.crrel'):
            name = name[:-len('.crrel')]
        logger.debug('%s is not a file, trying the fixture %s', value, name)
        return fixtures.load(name)
    except (BadSyntax, NotTotal) as e:
        raise click.BadParameter('%s: %s' % (value, e))
    except UnknownFixture:
        raise click.BadParameter('%s: no such file or fixture' % value)


def _set_literal(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_set(value)
    except BadSetLiteral as e:
        raise click.BadParameter(str(e))


def _property(ctx, param, value):
    if value is None:
        return None
    try:
        return PropertyId.parse(value)
    except UnknownProperty as e:
        raise click.BadParameter(str(e))


def _emit(obj):
    click.echo(json.dumps(jsonable(obj), indent=2, sort_keys=True))


def _write_relation(G, output, comment=None):
    if output is None:
        click.echo(crrel.dumps(G, comment), nl=False)
    else:
        crrel.dump(G, output, comment)


def _params(epsilon, horizon, arity, oracle_grid=None):
    return conf.params(epsilon=epsilon, horizon=horizon, arity=arity,
                       oracle_grid=oracle_grid)


relation_argument = click.argument('relation', metavar='FILE',
                                   callback=_load_relation)

epsilon_option = click.option('--epsilon', default=None,
                              help='test mesh width 1/m, e.g. 1/64')
horizon_option = click.option('--horizon', '-N', type=int, default=None,
                              help='largest power examined')
arity_option = click.option('--arity', '-k', type=int, default=None,
                            help='product arity for SPT')
suitable_flag = click.option('--suitable', 'use_suitable', is_flag=True,
                             help='use the suitable composition')
override_flag = click.option('--override', is_flag=True,
                             help='skip the suitability gate')
json_flag = click.option('--json', 'as_json', is_flag=True,
                         help='print JSON')


@click.group(cls=_Group)
@click.option('-v', '--verbose', count=True,
              help='log at INFO (-v) or DEBUG (-vv)')
@click.version_option('.'.join(str(x) for x in version), prog_name='crdyn')
def cli(verbose):
    """Closed relations on an interval and their dynamics."""
    level = logging.WARNING
    if verbose == 1:
        level = logging.INFO
    elif verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level,
                        format='%(levelname)s %(name)s: %(message)s')


@cli.command()
@relation_argument
@click.option('--set', 'start', required=True, callback=_set_literal,
              help='start set "lo,hi;lo,hi"')
@click.option('-n', 'n', type=click.IntRange(min=1), default=1,
              help='power')
@suitable_flag
@override_flag
@json_flag
def image(relation, start, n, use_suitable, override, as_json):
    """The image of a set under the n-th power."""
    mode = SUITABLE if use_suitable else PLAIN
    reach = orbits.forward_reach(relation, start, n, mode=mode,
                                 override=override)
    if len(reach.sets) < n:
        click.echo('crdyn: budget exhausted after power %d' %
                   len(reach.sets), err=True)
        sys.exit(EXIT_USAGE)
    result = reach.sets[n - 1]
    if as_json:
        _emit({'n': n, 'mode': mode, 'set': result})
    else:
        click.echo(str(result))


@cli.command()
@click.argument('first', metavar='FILE1', callback=_load_relation)
@click.argument('second', metavar='FILE2', callback=_load_relation)
@suitable_flag
@override_flag
@click.option('-o', '--output', default=None, help='write to this file')
def compose(first, second, use_suitable, override, output):
    """FILE1 o FILE2: apply FILE2, then FILE1."""
    if use_suitable:
        G = suitable.suitable_compose(first, second, override=override)
    else:
        G = relcore.compose(first, second)
    _write_relation(G, output)


@cli.command()
@relation_argument
@click.option('-n', 'n', type=click.IntRange(min=0), required=True,
              help='power')
@suitable_flag
@override_flag
@click.option('-o', '--output', default=None, help='write to this file')
def iterate(relation, n, use_suitable, override, output):
    """The n-th power of a relation."""
    if use_suitable:
        G = suitable.suitable_iterate(relation, n, override=override)
    else:
        G = relcore.iterate(relation, n)
    _write_relation(G, output)


@cli.command('one-set')
@relation_argument
@json_flag
def one_set(relation, as_json):
    """The points whose fiber is a single point."""
    s = suitable.one_set(relation)
    if as_json:
        _emit(s)
    else:
        click.echo(str(s))


@cli.command('suitable-check')
@relation_argument
@epsilon_option
@json_flag
def suitable_check(relation, epsilon, as_json):
    """The finite suitability surrogate at mesh EPSILON."""
    params = _params(epsilon, None, None)
    v = suitable.is_suitable(relation, params.epsilon)
    if as_json:
        _emit(v)
    else:
        click.echo('%s %s' % (v.status, json.dumps(jsonable(v.witness),
                                                    sort_keys=True)))


@cli.command()
@relation_argument
@click.option('--property', 'prop', required=True, callback=_property,
              help='property id, e.g. TM or TM:suitable')
@suitable_flag
@override_flag
@epsilon_option
@horizon_option
@arity_option
@click.option('--workers', type=click.IntRange(min=1), default=None,
              help='threads populating reach sequences')
@click.option('--expect', type=click.Choice(STATUSES), default=None,
              help='exit 1 unless the verdict is this')
@json_flag
def analyze(relation, prop, use_suitable, override, epsilon, horizon,
            arity, workers, expect, as_json):
    """Check one property."""
    if use_suitable:
        prop = PropertyId(prop.name, SUITABLE)
    params = _params(epsilon, horizon, arity)
    a = Analyzer(relation, params, workers=workers, override=override)
    r = a.record(prop)
    if as_json:
        _emit(r)
    else:
        click.echo('%s %s %s' % (prop, r['verdict'],
                                 json.dumps(r['witness'], sort_keys=True)))
    if expect is not None and r['verdict'] != expect:
        sys.exit(EXIT_UNEXPECTED)


@cli.command()
@relation_argument
@override_flag
@epsilon_option
@horizon_option
@arity_option
@click.option('--workers', type=click.IntRange(min=1), default=None,
              help='threads populating reach sequences')
@json_flag
def classify(relation, override, epsilon, horizon, arity, workers, as_json):
    """Check every property in both modes."""
    params = _params(epsilon, horizon, arity)
    report = Analyzer(relation, params, workers=workers,
                      override=override).classify_all()
    if as_json:
        _emit(report)
        return
    for r in report['verdicts']:
        prop = PropertyId(r['property'], r['mode'])
        click.echo('%-16s %s' % (prop, r['verdict']))
    for note in report['notes']:
        click.echo('note: %s' % note)


@cli.command('oracle')
@relation_argument
@click.option('--grid', type=click.IntRange(min=1), default=None,
              help='number of grid cells')
@click.option('--property', 'prop', callback=_property, default=None,
              help='decide only this property')
@click.option('--cross', is_flag=True,
              help='compare with the analyzer at epsilon = 1/grid')
@horizon_option
@json_flag
def oracle_command(relation, grid, prop, cross, horizon, as_json):
    """Decide properties on the finite grid model."""
    params = conf.params(horizon=horizon, oracle_grid=grid)
    k = params.oracle_grid
    if cross:
        report = oracle.cross_validate(
            relation, conf.params(epsilon='1/%d' % k, horizon=horizon))
        if as_json:
            _emit(report)
        else:
            for key in ('agreements', 'disagreements', 'undecided'):
                for e in report[key]:
                    click.echo('%-4s analyzer %-9s oracle %-9s %s' %
                               (e['property'], e['analyzer'], e['oracle'],
                                key))
        if report['disagreements']:
            sys.exit(EXIT_UNEXPECTED)
        return
    g = oracle.discretize(relation, k)
    props = [prop] if prop else [PropertyId(n) for n in
                                 oracle.CROSS_CHECKED]
    out = {'grid': k, 'aligned': g.aligned, 'verdicts': []}
    for p in props:
        v = oracle.graph_check(g, p)
        out['verdicts'].append(dict(v.to_json(), property=str(p)))
    if as_json:
        _emit(out)
    else:
        for v in out['verdicts']:
            click.echo('%-16s %s' % (v['property'], v['verdict']))


@cli.group('fixtures', cls=_Group)
def fixtures_group():
    """The shipped fixture corpus."""


@fixtures_group.command('list')
@json_flag
def fixtures_list(as_json):
    """Names, files and expected statuses."""
    if as_json:
        _emit([e.to_json() for e in fixtures.corpus()])
        return
    for e in fixtures.corpus():
        expected = ', '.join('%s=%s' % (x['check'], x['status'])
                             for x in e.expected)
        click.echo('%-14s %s' % (e.name, expected))


@fixtures_group.command('run')
@click.argument('names', nargs=-1)
@epsilon_option
@horizon_option
@arity_option
@json_flag
def fixtures_run(names, epsilon, horizon, arity, as_json):
    """Check expected statuses; exit 1 on any mismatch."""
    params = _params(epsilon, horizon, arity)
    entries = ([fixtures.get(n) for n in names] if names
               else fixtures.corpus())
    results = [fixtures.run_fixture(e, params) for e in entries]
    if as_json:
        _emit(results)
    else:
        for res in results:
            for r in res['results']:
                click.echo('%-14s %-14s %-9s %s' %
                           (res['name'], r['check'], r['actual'],
                            'ok' if r['match'] else
                            'EXPECTED %s' % r['expected']))
    if not all(res['matched'] for res in results):
        sys.exit(EXIT_UNEXPECTED)


@cli.command('plot')
@relation_argument
@click.option('-o', '--output', default=None, help='write the SVG here')
@click.option('--reach', 'start', default=None, callback=_set_literal,
              help='overlay the forward reach of this set')
@click.option('-n', 'n', type=click.IntRange(min=1), default=8,
              help='powers in the reach overlay')
@suitable_flag
@override_flag
def plot_command(relation, output, start, n, use_suitable, override):
    """A static SVG picture of a relation."""
    reach = None
    if start is not None:
        mode = SUITABLE if use_suitable else PLAIN
        reach = orbits.forward_reach(relation, start, n, mode=mode,
                                     override=override).sets
    svg = plot.render(relation, reach=reach)
    if output is None:
        click.echo(svg, nl=False)
    else:
        with open(output, 'w', encoding='utf-8') as f:
            f.write(svg)


def main(argv=None):
    return cli.main(args=argv, prog_name='crdyn')


if __name__ == '__main__':
    main()
