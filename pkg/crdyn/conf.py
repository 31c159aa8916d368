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

"""crdyn.conf Utilities

Analysis defaults are layered, lowest first: built-in values,
/etc/crdyn.conf, $HOME/.crdyn/crdyn.conf, $CRDYN_CONF, and finally
explicit arguments.  $CRDYN_BUDGET and $CRDYN_WORKERS override the
primitive-count budget and the analyzer thread count.
"""

import errno
import fractions
import os
import os.path
import re
import threading

from crdyn.exceptions import BadConf

DEFAULT_BUDGET = 50000

DEFAULTS = {
    'epsilon': '1/64',
    'horizon': '128',
    'arity': '3',
    'oracle_grid': '64',
    'budget': str(DEFAULT_BUDGET),
    'workers': '1',
}

_lock = threading.Lock()


def _parse_options(options_list):
    options = {}
    for item in options_list:
        fields = item.split('=', 1)
        try:
            (key, value) = fields
        except ValueError:
            raise BadConf('bad option: %s' % item)
        key = key.strip()
        if key not in DEFAULTS:
            raise BadConf('unknown key: %s' % key)
        options[key] = value.strip()
    return options


class Conf(dict):
    """crdyn.conf container

    A Conf object is a dictionary of option name to string value.
    """

    def __init__(self, filename=None):
        """Read a crdyn.conf format file from 'filename'.

        If a filename is not specified, the built-in defaults are merged
        with the contents of these files, in order:
            /etc/crdyn.conf
            $HOME/.crdyn/crdyn.conf
            $CRDYN_CONF
        """
        super(Conf, self).__init__()

        if filename is None:
            self.update(DEFAULTS)
            paths = ['/etc/crdyn.conf']
            paths.append(os.path.expanduser('~/.crdyn/crdyn.conf'))
            env_path = os.environ.get('CRDYN_CONF', None)
            if env_path:
                paths.append(env_path)

            for path in paths:
                try:
                    self.update(Conf(path))
                except IOError as e:
                    if e.args[0] not in (errno.ENOENT, errno.EPERM,
                                         errno.EACCES):
                        raise
            return

        ignore_pattern = re.compile(r'(#.*|\s*$)')
        with open(filename, 'r') as f:
            items = []
            for l in f:
                if ignore_pattern.match(l):
                    continue
                items.append(l.split('#', 1)[0].strip())
            self.update(_parse_options(items))


default_conf = None


def get():
    global default_conf
    with _lock:
        if default_conf is None:
            default_conf = Conf()
        return default_conf


def reset():
    """Forget the merged configuration; the next get() rereads it."""
    global default_conf
    with _lock:
        default_conf = None


def _int_setting(env_name, key):
    value = os.environ.get(env_name)
    if value is None:
        value = get()[key]
    try:
        n = int(value)
    except ValueError:
        raise BadConf('%s: not an integer: %s' % (key, value))
    if n < 1:
        raise BadConf('%s must be positive' % key)
    return n


def budget():
    """The primitive-count budget for iterates."""
    return _int_setting('CRDYN_BUDGET', 'budget')


def workers():
    return _int_setting('CRDYN_WORKERS', 'workers')


def params(**overrides):
    """AnalysisParams from the layered configuration and 'overrides'.

    Overrides whose value is None are ignored.
    """
    from crdyn.verdict import AnalysisParams
    c = get()
    try:
        values = {
            'epsilon': fractions.Fraction(c['epsilon']),
            'horizon': int(c['horizon']),
            'arity': int(c['arity']),
            'oracle_grid': int(c['oracle_grid']),
        }
    except (ValueError, ZeroDivisionError) as e:
        raise BadConf(str(e))
    for key, value in overrides.items():
        if value is not None:
            values[key] = value
    return AnalysisParams(**values)
