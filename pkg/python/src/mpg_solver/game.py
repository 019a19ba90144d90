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

import collections
import fractions
import logging

from mpg_solver.errors import GameValidationException, \
    PreconditionException, WeightOverflowException

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

INT64_MIN = -(1 << 63)
INT64_MAX = (1 << 63) - 1

def checked_add(a, b):
  """
  Adds two weights, raising WeightOverflowException when the result leaves
  the signed 64-bit range.
  """
  res = a + b
  if res < INT64_MIN or res > INT64_MAX:
    raise WeightOverflowException("Weight overflow in %s + %s" % (a, b), res)
  return res

def checked_mul(a, b):
  res = a * b
  if res < INT64_MIN or res > INT64_MAX:
    raise WeightOverflowException("Weight overflow in %s * %s" % (a, b), res)
  return res


class Game(object):
  """
  A finite mean-payoff game arena with an observation partition.

  States, actions and observations keep their declaration order, which is the
  index order used for every tie-break. Instances are immutable after
  construction.
  """

  def __init__(self, name, states, initial, actions, transitions,
      observations, obs_names=None):
    """
    Builds and validates a game.

    @param name: Game name.
    @param states: Sequence of state ids.
    @param initial: Initial state id.
    @param actions: Sequence of action ids.
    @param transitions: Sequence of (source, action, target, weight) tuples.
                        Exact duplicates are merged.
    @param observations: Sequence of state sets, in observation index order.
    @param obs_names: Optional observation names. Defaults to o0, o1, ...
    """
    self.name = name
    self.states = tuple(states)
    self.initial = initial
    self.actions = tuple(actions)
    if obs_names is None:
      obs_names = [ "o%d" % (i,) for i in range(len(observations)) ]
    self.obs_names = tuple(obs_names)

    self._state_index = self._index(self.states, "state")
    self._action_index = self._index(self.actions, "action")
    if not self.states:
      raise GameValidationException("Game has no states")
    if not self.actions:
      raise GameValidationException("Game has no actions")
    if initial not in self._state_index:
      raise GameValidationException("Unknown initial state", initial)

    self.observations = self._check_partition(observations)
    self._obs_index = dict((o, i) for i, o in enumerate(self.observations))
    self._obs_sorted = tuple(self.sorted_states(o) for o in self.observations)

    self._succ = collections.OrderedDict()
    self._weight = { }
    trans = [ ]
    for q, a, q2, w in transitions:
      for s in (q, q2):
        if s not in self._state_index:
          raise GameValidationException("Unknown state in transition", s)
      if a not in self._action_index:
        raise GameValidationException("Unknown action in transition", a)
      if not isinstance(w, int):
        raise GameValidationException("Weight is not an integer",
            (q, a, q2, w))
      checked_add(w, 0)
      key = (q, a, q2)
      if key in self._weight:
        if self._weight[key] != w:
          raise GameValidationException(
              "Conflicting weights for transition", key)
        continue
      self._weight[key] = w
      self._succ.setdefault((q, a), [ ]).append((q2, w))
      trans.append((q, a, q2, w))
    self.transitions = tuple(trans)

    for q in self.states:
      for a in self.actions:
        if (q, a) not in self._succ:
          raise GameValidationException("Transition relation is not total",
              "%s, %s" % (q, a))
    for key in list(self._succ):
      self._succ[key] = tuple(self._succ[key])

  @staticmethod
  def _index(ids, kind):
    index = { }
    for i, x in enumerate(ids):
      if x in index:
        raise GameValidationException("Duplicate %s" % (kind,), x)
      index[x] = i
    return index

  def _check_partition(self, observations):
    if len(self.obs_names) != len(observations):
      raise GameValidationException("Observation names do not match")
    self._index(self.obs_names, "observation")
    owner = { }
    res = [ ]
    for i, obs in enumerate(observations):
      obs = frozenset(obs)
      if not obs:
        raise GameValidationException("Empty observation", self.obs_names[i])
      for q in obs:
        if q not in self._state_index:
          raise GameValidationException("Unknown state in observation", q)
        if q in owner:
          raise GameValidationException(
              "State appears in observations %s and %s" %
              (self.obs_names[owner[q]], self.obs_names[i]), q)
        owner[q] = i
      res.append(obs)
    for q in self.states:
      if q not in owner:
        raise GameValidationException("State is not in any observation", q)
    self._owner = owner
    return tuple(res)

  def __repr__(self):
    return "<Game>: %s (%d states, %d observations)" % (self.name,
        len(self.states), len(self.observations))

  def __eq__(self, other):
    return isinstance(other, Game) and \
        self.states == other.states and \
        self.initial == other.initial and \
        self.actions == other.actions and \
        set(self.transitions) == set(other.transitions) and \
        set(self.observations) == set(other.observations)

  def __ne__(self, other):
    return not self.__eq__(other)

  def __hash__(self):
    return hash((self.states, self.initial, self.actions))

  def state_index(self, q):
    return self._state_index[q]

  def sorted_states(self, states):
    """Returns the given states as a tuple in state index order."""
    return tuple(sorted(states, key=self._state_index.__getitem__))

  def obs_of(self, q):
    """Index of the observation containing state q."""
    return self._owner[q]

  def obs_index(self, states):
    """
    Index of the observation equal to the given state set.
    @raise PreconditionException: if the set is not an observation.
    """
    try:
      return self._obs_index[frozenset(states)]
    except KeyError:
      raise PreconditionException("Not an observation",
          "{%s}" % (",".join(self.sorted_states(states)),))

  def obs_states(self, i):
    """States of observation i, in state index order."""
    return self._obs_sorted[i]

  def obs_name(self, i):
    return self.obs_names[i]

  def obs_by_name(self, name):
    try:
      return self.obs_names.index(name)
    except ValueError:
      raise GameValidationException("Unknown observation", name)

  @property
  def initial_obs(self):
    return self.obs_of(self.initial)

  def successors(self, q, a):
    """(target, weight) pairs of the a-transitions of q, in declaration order."""
    return self._succ[(q, a)]

  def weight(self, q, a, q2):
    return self._weight[(q, a, q2)]

  def has_transition(self, q, a, q2):
    return (q, a, q2) in self._weight

  def max_abs_weight(self):
    return max([ abs(t[3]) for t in self.transitions ] or [ 0 ])


def post_sigma(g, states, action):
  """
  The set of action-successors of a set of states.

  @param g: Game.
  @param states: Iterable of state ids.
  @param action: Action id.
  @return: frozenset of states.
  """
  if action not in g.actions:
    raise PreconditionException("Unknown action", action)
  res = set()
  for q in states:
    for q2, w in g.successors(q, action):
      res.add(q2)
  return frozenset(res)

def is_union_of_observations(g, states):
  states = frozenset(states)
  return all(g.observations[g.obs_of(q)] <= states for q in states)

def check_limited(g):
  """
  Checks the limited-observation conditions: {q_I} is an observation and the
  successors of every observation under every action are a union of
  observations.

  @return: (True, None), or (False, (observation, action)) for the first
           violation in index order. A missing {q_I} observation is reported
           as (observation of q_I, None).
  """
  init_obs = g.observations[g.initial_obs]
  if init_obs != frozenset([g.initial]):
    return False, (init_obs, None)
  for obs in g.observations:
    for a in g.actions:
      if not is_union_of_observations(g, post_sigma(g, obs, a)):
        return False, (obs, a)
  return True, None

def require_limited(g):
  """
  @raise PreconditionException: if the game is not limited-observation.
  """
  limited, witness = check_limited(g)
  if not limited:
    obs, a = witness
    raise PreconditionException("Game is not limited-observation",
        "{%s}, %s" % (",".join(g.sorted_states(obs)), a))

def admissible_observations(g, obs, action):
  """
  Indices of the observations contained in post_action(obs), in index order.
  """
  post = post_sigma(g, g.observations[obs], action)
  return [ i for i, o in enumerate(g.observations) if o <= post ]

def reachable_observations(g):
  """Indices of the observations reachable from the initial observation."""
  start = g.initial_obs
  seen = set([start])
  queue = collections.deque([start])
  while queue:
    obs = queue.popleft()
    for a in g.actions:
      post = post_sigma(g, g.observations[obs], a)
      for q in post:
        i = g.obs_of(q)
        if i not in seen:
          seen.add(i)
          queue.append(i)
  return sorted(seen)

def payoff_prefix(g, path):
  """
  Sum of the transition weights along a concrete path, with checked
  arithmetic.

  @param path: A ConcretePath.
  @raise PreconditionException: if the path uses a missing transition.
  """
  total = 0
  for q, a, q2 in path.steps():
    if not g.has_transition(q, a, q2):
      raise PreconditionException("Not a transition", (q, a, q2))
    total = checked_add(total, g.weight(q, a, q2))
  return total

def shift_threshold(g, nu):
  """
  Rescales the weights so that threshold nu = p/q becomes threshold 0:
  every weight w is replaced by q*w - p.

  @param nu: Threshold, anything fractions.Fraction accepts.
  @return: A new Game.
  """
  nu = fractions.Fraction(nu)
  p, q = nu.numerator, nu.denominator
  trans = [ (s, a, t, checked_add(checked_mul(q, w), -p))
            for s, a, t, w in g.transitions ]
  return Game(g.name, g.states, g.initial, g.actions, trans,
      g.observations, g.obs_names)

def transition_groups(g):
  """
  Groups the transitions by (source, target, weight).

  @return: list of ((source, target, weight), [actions]) in first-occurrence
           order.
  """
  groups = collections.OrderedDict()
  for q, a, q2, w in g.transitions:
    groups.setdefault((q, q2, w), [ ]).append(a)
  return list(groups.items())

def is_perfect_information(g):
  """True if every observation is a single state."""
  return all(len(o) == 1 for o in g.observations)
