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

try:
    from setuptools import setup
except ImportError:
    from distutils.core import setup

setup(
    name         = 'crdyn',
    version      = '0.3.0',
    description  = 'Dynamics of closed relations on an interval',
    long_description = '''crdyn is a toolkit for exact computation with closed relations on a compact interval built from boxes and segments, and for semi-deciding transitivity, mixing and minimality properties of the dynamical systems they generate.''',
    packages     = ['crdyn', 'crdyn.fixtures'],
    package_data = {
        'crdyn.fixtures': ['*.crrel', 'manifest.json'],
        'crdyn': ['schema/*.json'],
    },
    author       = 'The crdyn Authors',
    install_requires = [
        'portion >= 2.2',
        'networkx >= 2.6',
        'numpy >= 1.20',
        'click >= 7.0',
        'matplotlib >= 3.3',
    ],
    extras_require = {
        'tests': ['pytest >= 6', 'jsonschema >= 3.2'],
    },
    entry_points = {
        'console_scripts': ['crdyn = crdyn.cli:main'],
    },
    python_requires = '>=3.7',
    classifiers = [
        "Development Status :: 4 - Beta",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: Apache Software License",
        "Operating System :: POSIX",
        "Programming Language :: Python",
        "Topic :: Scientific/Engineering :: Mathematics",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],
    provides = ['crdyn'],
    zip_safe    = False,
    )
