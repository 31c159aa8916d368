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

"""crdyn Exceptions"""


class CRDynException(Exception):
    _default_msg = ''
    _always_use_default_msg = True

    def __str__(self):
        s = super(CRDynException, self).__str__()
        if s:
            if self._always_use_default_msg:
                return self._default_msg + ': ' + s
            else:
                return s
        else:
            return self._default_msg


class OutsideExtent(CRDynException):
    """A primitive does not lie within extent x extent.
    """
    _default_msg = 'primitive outside extent'

    def __init__(self, primitive, *args):
        super(OutsideExtent, self).__init__(str(primitive), *args)
        self.primitive = primitive


class SpaceMismatch(CRDynException):
    """The operands live on different spaces."""
    _default_msg = 'space mismatch'


class NotTotal(CRDynException):
    """Some x in the extent has an empty fiber.
    """
    _default_msg = 'relation is not total'


class BadSyntax(CRDynException):
    """A .crrel file or a literal could not be parsed.
    """
    _default_msg = 'syntax error'

    def __init__(self, msg, line=None, column=None):
        if line is not None:
            msg = 'line %d, column %d: %s' % (line, column or 1, msg)
        super(BadSyntax, self).__init__(msg)
        self.line = line
        self.column = column


class BadSetLiteral(CRDynException):
    """A set literal is not of the form lo,hi;lo,hi
    """
    _default_msg = 'bad set literal'


class BadParams(CRDynException):
    """The analysis parameters are out of range.
    """
    _default_msg = 'bad analysis parameters'


class UnknownProperty(CRDynException):
    """The property id is not one of the known ids.
    """
    _default_msg = 'unknown property'


class NotSuitable(CRDynException):
    """Suitable-mode operation on a relation that failed the suitability
    surrogate, without override.
    """
    _default_msg = 'relation is not suitable'


class BudgetExhausted(CRDynException):
    """A primitive- or piece-count budget was exceeded.

    'partial' is the last result that fit in the budget and 'reached'
    the power it corresponds to.
    """
    _default_msg = 'budget exhausted'

    def __init__(self, msg, partial=None, reached=0):
        super(BudgetExhausted, self).__init__(msg)
        self.partial = partial
        self.reached = reached


class NotSurjective(CRDynException):
    """A map or relation does not cover its target.
    """
    _default_msg = 'not surjective'


class BadConf(CRDynException):
    """A crdyn.conf file is malformed.
    """
    _default_msg = 'crdyn.conf format error'


class UnknownFixture(CRDynException):
    """The name is not in the fixture manifest.
    """
    _default_msg = 'unknown fixture'
