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
from crdyn.exceptions import BadConf, BadParams

F = fractions.Fraction


def test_defaults():
    p = conf.params()
    assert p.epsilon == F(1, 64)
    assert p.horizon == 128
    assert p.arity == 3
    assert p.oracle_grid == 64
    assert conf.budget() == conf.DEFAULT_BUDGET
    assert conf.workers() == 1


def test_conf_file_layers(tmp_path, monkeypatch):
    home = tmp_path / '.crdyn'
    home.mkdir()
    (home / 'crdyn.conf').write_text('# user defaults\n'
                                     'horizon = 64\n'
                                     'epsilon=1/32   # coarse\n\n')
    extra = tmp_path / 'extra.conf'
    extra.write_text('horizon=16\nworkers=4\n')
    monkeypatch.setenv('CRDYN_CONF', str(extra))
    conf.reset()
    p = conf.params()
    assert p.epsilon == F(1, 32)
    assert p.horizon == 16
    assert conf.workers() == 4
    assert conf.params(horizon=8, epsilon=None).horizon == 8


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv('CRDYN_BUDGET', '12')
    monkeypatch.setenv('CRDYN_WORKERS', '3')
    assert conf.budget() == 12
    assert conf.workers() == 3


@pytest.mark.parametrize('text', ['horizon\n', 'colour=blue\n'])
def test_malformed_files(tmp_path, text):
    path = tmp_path / 'bad.conf'
    path.write_text(text)
    with pytest.raises(BadConf):
        conf.Conf(str(path))


def test_bad_values(tmp_path, monkeypatch):
    path = tmp_path / 'bad.conf'
    path.write_text('horizon=many\n')
    monkeypatch.setenv('CRDYN_CONF', str(path))
    conf.reset()
    with pytest.raises(BadConf):
        conf.params()
    monkeypatch.setenv('CRDYN_BUDGET', '0')
    with pytest.raises(BadConf):
        conf.budget()


def test_missing_file_is_skipped(tmp_path, monkeypatch):
    monkeypatch.setenv('CRDYN_CONF', str(tmp_path / 'absent.conf'))
    conf.reset()
    assert conf.params().horizon == 128


def test_params_are_validated():
    with pytest.raises(BadParams):
        conf.params(epsilon=F(2, 3))
    with pytest.raises(BadParams):
        conf.params(horizon=0)
