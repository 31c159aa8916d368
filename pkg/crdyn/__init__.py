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

import crdyn.crrel
from crdyn.version import version


def load(filename, allow_partial=False):
    """Read a closed relation from a .crrel file.

    'allow_partial' accepts relations whose fibers are empty somewhere;
    by default such a file raises crdyn.exceptions.NotTotal.

    Returns a crdyn.relcore.Relation.
    """
    return crdyn.crrel.load(filename, allow_partial=allow_partial)


def loads(text, allow_partial=False):
    """Like load(), but from .crrel text."""
    return crdyn.crrel.loads(text, allow_partial=allow_partial)
