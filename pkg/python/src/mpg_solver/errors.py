# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

__docformat__ = "epytext"

class SolverException(Exception):
  """
  Base class of every error raised by the solver library.

  Carries a message and an optional detail code, such as a line number, that
  is appended to the rendered message.
  """
  def __init__(self, message, code=None):
    Exception.__init__(self, message)
    self._message = message
    self._code = code

  def __str__(self):
    res = self._message or ""
    if self._code is not None:
      res += " (%s)" % (self._detail(),)
    return res

  def _detail(self):
    return self._code

  @property
  def code(self):
    return self._code

  @property
  def message(self):
    return self._message


class GameFormatException(SolverException):
  """
  A document could not be parsed. The code is the 1-based line number.
  """
  def __init__(self, message, line=None):
    SolverException.__init__(self, message, line)

  def _detail(self):
    return "line %s" % (self._code,)

  @property
  def line(self):
    return self._code


class QbfFormatException(GameFormatException):
  """Malformed QBF document: not prenex, not CNF or not closed."""
  pass


class GraphFormatException(GameFormatException):
  """Malformed vertex/edge document."""
  pass


class StrategyFormatException(GameFormatException):
  """Malformed strategy document."""
  pass


class GameValidationException(SolverException):
  """
  A game was well-formed but violates a game invariant: non-total transition
  relation, observations that do not partition the states, unknown ids.
  The code is the offending element.
  """
  def __init__(self, message, element=None):
    SolverException.__init__(self, message, element)

  @property
  def element(self):
    return self._code


class WeightOverflowException(SolverException):
  """A weight computation left the signed 64-bit range."""
  def __init__(self, message, value=None):
    SolverException.__init__(self, message, value)


class PreconditionException(SolverException):
  """An operation was called outside of its contract."""
  pass


class CapExceededException(SolverException):
  """
  A state space or node budget was exceeded. The code is the limit.
  """
  def __init__(self, message, limit=None):
    SolverException.__init__(self, message, limit)

  def _detail(self):
    return "limit %s" % (self._code,)

  @property
  def limit(self):
    return self._code


class StrategyDomainException(SolverException):
  """
  A strategy was queried on an input it is not defined for. The code is the
  offending input, e.g. a (memory, observation) pair.
  """
  def __init__(self, message, element=None):
    SolverException.__init__(self, message, element)

  @property
  def element(self):
    return self._code
