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
Line-oriented game files.

  # comment
  game fig1
  states q0 q1 q2 q3
  initial q0
  actions a b
  obs o0 = q0
  obs o12 = q1 q2
  obs o3 = q3
  trans q0 * q1 -1
  trans q1 a q0 -1

'*' as the action of a trans line stands for every declared action.
"""

import logging

from mpg_solver.errors import GameFormatException
from mpg_solver.game import INT64_MAX, INT64_MIN, Game

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

ALL_ACTIONS = '*'


class _GameBuilder(object):
  def __init__(self):
    self.name = None
    self.states = None
    self.initial = None
    self.actions = None
    self.obs_names = [ ]
    self.observations = [ ]
    self.transitions = [ ]

  def _once(self, attr, value, lineno):
    if getattr(self, attr) is not None:
      raise GameFormatException("Duplicate %s statement" % (attr,), lineno)
    setattr(self, attr, value)

  def _require(self, attr, keyword, lineno):
    if getattr(self, attr) is None:
      raise GameFormatException("'%s' must come before '%s'" % (attr, keyword),
          lineno)

  def _state(self, q, lineno):
    if q not in self.states:
      raise GameFormatException("Unknown state %s" % (q,), lineno)
    return q

  def statement(self, tokens, lineno):
    keyword, args = tokens[0], tokens[1:]
    if keyword == 'game':
      if len(args) != 1:
        raise GameFormatException("Expected: game <name>", lineno)
      self._once('name', args[0], lineno)
    elif keyword == 'states':
      if not args:
        raise GameFormatException("Expected: states <id>...", lineno)
      self._once('states', args, lineno)
    elif keyword == 'actions':
      if not args:
        raise GameFormatException("Expected: actions <id>...", lineno)
      self._once('actions', args, lineno)
    elif keyword == 'initial':
      self._require('states', keyword, lineno)
      if len(args) != 1:
        raise GameFormatException("Expected: initial <state>", lineno)
      self._once('initial', self._state(args[0], lineno), lineno)
    elif keyword == 'obs':
      self._require('states', keyword, lineno)
      if len(args) < 3 or args[1] != '=':
        raise GameFormatException("Expected: obs <name> = <state>...", lineno)
      self.obs_names.append(args[0])
      self.observations.append([ self._state(q, lineno) for q in args[2:] ])
    elif keyword == 'trans':
      self._require('states', keyword, lineno)
      self._require('actions', keyword, lineno)
      if len(args) != 4:
        raise GameFormatException(
            "Expected: trans <src> <action> <dst> <weight>", lineno)
      src, action, dst, weight = args
      try:
        weight = int(weight)
      except ValueError:
        raise GameFormatException("Invalid weight %s" % (weight,), lineno)
      if weight < INT64_MIN or weight > INT64_MAX:
        raise GameFormatException("Weight out of range %s" % (weight,), lineno)
      if action == ALL_ACTIONS:
        actions = self.actions
      elif action in self.actions:
        actions = [ action ]
      else:
        raise GameFormatException("Unknown action %s" % (action,), lineno)
      for a in actions:
        self.transitions.append((self._state(src, lineno), a,
            self._state(dst, lineno), weight))
    else:
      raise GameFormatException("Unknown statement %s" % (keyword,), lineno)

  def build(self, lineno):
    for attr in ('name', 'states', 'initial', 'actions'):
      if getattr(self, attr) is None:
        raise GameFormatException("Missing '%s' statement" % (attr,), lineno)
    if not self.observations:
      raise GameFormatException("Missing 'obs' statement", lineno)
    return Game(self.name, self.states, self.initial, self.actions,
        self.transitions, self.observations, self.obs_names)


def load_game(text):
  """
  Parses a game file.

  @param text: File contents.
  @return: Game.
  @raise GameFormatException: on a syntax error, with its line number.
  @raise GameValidationException: if the game itself is invalid.
  """
  builder = _GameBuilder()
  lineno = 0
  for lineno, raw in enumerate(text.splitlines(), 1):
    line = raw.split('#', 1)[0].strip()
    if line:
      builder.statement(line.split(), lineno)
  g = builder.build(lineno)
  LOG.debug("Loaded %r", g)
  return g

def read_text(path):
  """
  Contents of a UTF-8 file.

  @raise GameFormatException: on invalid UTF-8, with the offending line.
  """
  with open(path, 'rb') as f:
    data = f.read()
  try:
    return data.decode('utf-8')
  except UnicodeDecodeError as e:
    raise GameFormatException("Invalid UTF-8 in %s" % (path,),
        data[:e.start].count(b'\n') + 1)

def load_game_file(path):
  return load_game(read_text(path))

def dump_game(g):
  """Game file text of g; load_game(dump_game(g)) == g."""
  lines = [ "game %s" % (g.name,),
            "states %s" % (" ".join(g.states),),
            "initial %s" % (g.initial,),
            "actions %s" % (" ".join(g.actions),) ]
  for i in range(len(g.observations)):
    lines.append("obs %s = %s" % (g.obs_name(i), " ".join(g.obs_states(i))))
  for q, a, q2, w in g.transitions:
    lines.append("trans %s %s %s %d" % (q, a, q2, w))
  return "\n".join(lines) + "\n"

def to_dot(g):
  """Graphviz rendering: one dashed cluster per observation."""
  lines = [ 'digraph "%s" {' % (g.name,), '  rankdir=LR;',
            '  "__init" [shape=point];' ]
  for i in range(len(g.observations)):
    lines.append('  subgraph "cluster_%d" {' % (i,))
    lines.append('    label="%s"; style=dashed;' % (g.obs_name(i),))
    for q in g.obs_states(i):
      lines.append('    "%s";' % (q,))
    lines.append('  }')
  lines.append('  "__init" -> "%s";' % (g.initial,))
  for q, a, q2, w in g.transitions:
    lines.append('  "%s" -> "%s" [label="%s,%d"];' % (q, q2, a, w))
  lines.append('}')
  return "\n".join(lines) + "\n"
