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

"""
Strategy files. The first statement names the kind:

  eve-machine                 adam-machine
  memory 0 1 2                memory 0 1 2
  init 0                      init 0
  out 0 o0 -> a               out 0 o12 a -> o0
  next 0 o0 -> 1              next 0 o12 a -> 1
  reset 1 o12                 reset 1 o12 b

  eve-positional              adam-positional
  o0 -> a                     o12 a -> o0

Observations are written by name, memories are integers.
"""

import logging

from mpg_solver.errors import GameValidationException, \
    StrategyFormatException
from mpg_solver.strategy import ADAM_MACHINE, ADAM_POSITIONAL, EVE_MACHINE, \
    EVE_POSITIONAL, AdamMemoryMachine, EveMemoryMachine, PositionalStrategy
from mpg_solver.types import ADAM, EVE

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

KINDS = (EVE_MACHINE, ADAM_MACHINE, EVE_POSITIONAL, ADAM_POSITIONAL)


class _Reader(object):
  def __init__(self, g, kind):
    self.g = g
    self.kind = kind
    self.adam = kind in (ADAM_MACHINE, ADAM_POSITIONAL)
    self.memories = None
    self.initial = None
    self.update = { }
    self.output = { }
    self.resets = set()
    self.mapping = { }

  def obs(self, name, lineno):
    try:
      return self.g.obs_by_name(name)
    except GameValidationException:
      raise StrategyFormatException("Unknown observation %s" % (name,), lineno)

  def action(self, a, lineno):
    if a not in self.g.actions:
      raise StrategyFormatException("Unknown action %s" % (a,), lineno)
    return a

  def memory(self, token, lineno):
    try:
      m = int(token)
    except ValueError:
      raise StrategyFormatException("Invalid memory %s" % (token,), lineno)
    if self.memories is not None and m not in self.memories:
      raise StrategyFormatException("Undeclared memory %s" % (token,), lineno)
    return m

  def key(self, tokens, lineno):
    """Decodes '<obs> [<action>]' into a table key suffix."""
    if self.adam:
      if len(tokens) != 2:
        raise StrategyFormatException("Expected: <obs> <action>", lineno)
      return (self.obs(tokens[0], lineno), self.action(tokens[1], lineno))
    if len(tokens) != 1:
      raise StrategyFormatException("Expected: <obs>", lineno)
    return (self.obs(tokens[0], lineno),)

  def arrow(self, tokens, lineno):
    if len(tokens) < 3 or tokens[-2] != '->':
      raise StrategyFormatException("Expected: ... -> <value>", lineno)
    return tokens[:-2], tokens[-1]

  def statement(self, tokens, lineno):
    if self.kind in (EVE_POSITIONAL, ADAM_POSITIONAL):
      lhs, rhs = self.arrow(tokens, lineno)
      key = self.key(lhs, lineno)
      if self.adam:
        self.mapping[key] = self.obs(rhs, lineno)
      else:
        self.mapping[key[0]] = self.action(rhs, lineno)
      return
    keyword = tokens[0]
    if keyword == 'memory':
      if len(tokens) < 2:
        raise StrategyFormatException("Expected: memory <id>...", lineno)
      self.memories = [ self.memory(t, lineno) for t in tokens[1:] ]
    elif keyword == 'init':
      self._require_memories(lineno)
      if len(tokens) != 2:
        raise StrategyFormatException("Expected: init <id>", lineno)
      self.initial = self.memory(tokens[1], lineno)
    elif keyword in ('out', 'next'):
      self._require_memories(lineno)
      lhs, rhs = self.arrow(tokens[1:], lineno)
      key = (self.memory(lhs[0], lineno),) + self.key(lhs[1:], lineno)
      if keyword == 'next':
        self.update[key] = self.memory(rhs, lineno)
      elif self.adam:
        self.output[key] = self.obs(rhs, lineno)
      else:
        self.output[key] = self.action(rhs, lineno)
    elif keyword == 'reset':
      self._require_memories(lineno)
      self.resets.add((self.memory(tokens[1], lineno),) +
          self.key(tokens[2:], lineno))
    else:
      raise StrategyFormatException("Unknown statement %s" % (keyword,),
          lineno)

  def _require_memories(self, lineno):
    if self.memories is None:
      raise StrategyFormatException("'memory' must come first", lineno)

  def build(self, lineno):
    if self.kind == EVE_POSITIONAL:
      return PositionalStrategy(EVE, self.mapping)
    if self.kind == ADAM_POSITIONAL:
      return PositionalStrategy(ADAM, self.mapping)
    if self.initial is None:
      raise StrategyFormatException("Missing 'init' statement", lineno)
    if set(self.update) != set(self.output):
      raise StrategyFormatException("'out' and 'next' tables differ", lineno)
    cls = AdamMemoryMachine if self.adam else EveMemoryMachine
    return cls(self.memories, self.initial, self.update, self.output,
        resets=self.resets)


def load_strategy(g, text):
  """
  Parses a strategy file against the game it plays on.

  @raise StrategyFormatException: with the offending line number.
  """
  reader = None
  lineno = 0
  for lineno, raw in enumerate(text.splitlines(), 1):
    line = raw.split('#', 1)[0].strip()
    if not line:
      continue
    tokens = line.split()
    if reader is None:
      if len(tokens) != 1 or tokens[0] not in KINDS:
        raise StrategyFormatException("Expected a strategy kind", lineno)
      reader = _Reader(g, tokens[0])
      continue
    reader.statement(tokens, lineno)
  if reader is None:
    raise StrategyFormatException("Empty strategy file", lineno)
  return reader.build(lineno)

def _render_key(g, key):
  res = [ g.obs_name(key[0]) ]
  res.extend(key[1:])
  return " ".join(res)

def dump_strategy(s, g):
  """Strategy file text of a machine or positional strategy."""
  lines = [ s.kind ]
  if s.kind in (EVE_POSITIONAL, ADAM_POSITIONAL):
    for key in sorted(s.mapping):
      value = s.mapping[key]
      if s.owner == EVE:
        lines.append("%s -> %s" % (g.obs_name(key), value))
      else:
        lines.append("%s -> %s" % (_render_key(g, key), g.obs_name(value)))
    return "\n".join(lines) + "\n"
  lines.append("memory %s" % (" ".join(str(m) for m in s.memories),))
  lines.append("init %d" % (s.initial,))
  for key in sorted(s.update):
    out = s.output[key]
    if s.owner == ADAM:
      out = g.obs_name(out)
    lines.append("out %d %s -> %s" % (key[0], _render_key(g, key[1:]), out))
    lines.append("next %d %s -> %d" % (key[0], _render_key(g, key[1:]),
        s.update[key]))
  for key in sorted(s.resets):
    lines.append("reset %d %s" % (key[0], _render_key(g, key[1:])))
  return "\n".join(lines) + "\n"
