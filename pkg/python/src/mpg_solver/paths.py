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

from mpg_solver.errors import PreconditionException

__docformat__ = "epytext"

class AbstractPath(object):
  """
  An alternating sequence o0 a0 o1 a1 ... on of observations (state sets) and
  actions. A path with o0 == on is an abstract cycle.
  """

  def __init__(self, observations, actions=()):
    self.observations = tuple(frozenset(o) for o in observations)
    self.actions = tuple(actions)
    if len(self.observations) != len(self.actions) + 1:
      raise PreconditionException("Path needs one more observation than actions")

  def __len__(self):
    return len(self.actions)

  def __eq__(self, other):
    return isinstance(other, AbstractPath) and \
        self.observations == other.observations and \
        self.actions == other.actions

  def __ne__(self, other):
    return not self.__eq__(other)

  def __hash__(self):
    return hash((self.observations, self.actions))

  def __repr__(self):
    return "<AbstractPath>: %s" % (self.render(),)

  @property
  def first(self):
    return self.observations[0]

  @property
  def last(self):
    return self.observations[-1]

  def is_cycle(self):
    return self.first == self.last

  def steps(self):
    """(o_i, a_i, o_i+1) triples."""
    return [ (self.observations[i], self.actions[i], self.observations[i + 1])
             for i in range(len(self.actions)) ]

  def prefix(self, n):
    """The prefix with n actions."""
    return AbstractPath(self.observations[:n + 1], self.actions[:n])

  def concat(self, other):
    if self.last != other.first:
      raise PreconditionException("Paths do not share an endpoint")
    return AbstractPath(self.observations + other.observations[1:],
        self.actions + other.actions)

  def is_valid(self, g):
    """
    Every observation is a state set of g and every step is realized by some
    transition between the two sets.
    """
    for obs in self.observations:
      if not obs or not all(q in g.states for q in obs):
        return False
    for o, a, o2 in self.steps():
      if a not in g.actions:
        return False
      if not any(q2 in o2 for q in o for q2, w in g.successors(q, a)):
        return False
    return True

  def render(self, g=None):
    parts = [ ]
    for i, obs in enumerate(self.observations):
      if g is not None:
        states = g.sorted_states(obs)
      else:
        states = sorted(obs)
      parts.append("{%s}" % (",".join(states),))
      if i < len(self.actions):
        parts.append(self.actions[i])
    return " ".join(parts)


class ConcretePath(object):
  """An alternating sequence q0 a0 q1 a1 ... qn of states and actions."""

  def __init__(self, states, actions=()):
    self.states = tuple(states)
    self.actions = tuple(actions)
    if len(self.states) != len(self.actions) + 1:
      raise PreconditionException("Path needs one more state than actions")

  def __len__(self):
    return len(self.actions)

  def __eq__(self, other):
    return isinstance(other, ConcretePath) and \
        self.states == other.states and self.actions == other.actions

  def __ne__(self, other):
    return not self.__eq__(other)

  def __hash__(self):
    return hash((self.states, self.actions))

  def __repr__(self):
    return "<ConcretePath>: %s" % (self.render(),)

  @property
  def first(self):
    return self.states[0]

  @property
  def last(self):
    return self.states[-1]

  def steps(self):
    return [ (self.states[i], self.actions[i], self.states[i + 1])
             for i in range(len(self.actions)) ]

  def concat(self, other):
    if self.last != other.first:
      raise PreconditionException("Paths do not share an endpoint")
    return ConcretePath(self.states + other.states[1:],
        self.actions + other.actions)

  def is_valid(self, g):
    return all(g.has_transition(*step) for step in self.steps())

  def render(self):
    parts = [ self.states[0] ]
    for a, q in zip(self.actions, self.states[1:]):
      parts.append(a)
      parts.append(q)
    return " ".join(parts)


def gamma_enumerate(g, psi):
  """
  All concrete paths refining an abstract path, in state index order.

  @param g: Game.
  @param psi: AbstractPath.
  @return: list of ConcretePath, possibly empty.
  """
  paths = [ ((q,), ()) for q in g.sorted_states(psi.first) ]
  for o, a, o2 in psi.steps():
    ext = [ ]
    for states, actions in paths:
      for q2, w in g.successors(states[-1], a):
        if q2 in o2:
          ext.append((states + (q2,), actions + (a,)))
    paths = ext
  return [ ConcretePath(s, a) for s, a in paths ]

def _require_cycle(chi):
  if not chi.is_cycle():
    raise PreconditionException("Abstract path is not a cycle", chi.render())

def cyclic_permutations(chi):
  """
  All rotations of an abstract cycle, starting with the cycle itself. A
  cycle without actions has itself as only rotation.
  """
  _require_cycle(chi)
  n = len(chi)
  if n == 0:
    return [ chi ]
  obs = chi.observations
  res = [ ]
  for i in range(n):
    res.append(AbstractPath(obs[i:] + obs[1:i + 1],
        chi.actions[i:] + chi.actions[:i]))
  return res

def interleave(chi, chi2, i):
  """
  Splices the cycle chi2 into the cycle chi at position i.

  @raise PreconditionException: unless chi2 starts at the i-th observation of
                                chi.
  """
  _require_cycle(chi)
  _require_cycle(chi2)
  if i < 0 or i > len(chi) or chi2.first != chi.observations[i]:
    raise PreconditionException("Cycles do not share the anchor observation",
        i)
  return AbstractPath(
      chi.observations[:i] + chi2.observations + chi.observations[i + 1:],
      chi.actions[:i] + chi2.actions + chi.actions[i:])

def cycle_power(chi, k):
  """The cycle chi repeated k times."""
  _require_cycle(chi)
  if k < 0:
    raise PreconditionException("Negative cycle power", k)
  return AbstractPath(chi.observations[:1] + chi.observations[1:] * k,
      chi.actions * k)
