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
Plays between Eve strategies and Adam adversaries.

The tracked function is the proper propagation of the initial function along
the abstract play: its value at q is the least weight of a consistent
concrete path ending in q.
"""

import fractions
import logging
import math
import random

from mpg_solver.cyclegame import initial_function
from mpg_solver.errors import CapExceededException, PreconditionException, \
    StrategyDomainException
from mpg_solver.game import admissible_observations, require_limited
from mpg_solver.types import ADAM, EVE, Trace, TraceStep
from mpg_solver.weights import propagate

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

EXHAUSTIVE_NODE_BUDGET = 10 ** 6

PERIODIC = 'periodic'
TRIANGULAR = 'triangular'

# Concrete adversary policies.
POLICY_FIRST = 'first'
POLICY_MIN_WEIGHT = 'min-weight'
POLICY_RANDOM = 'random'
POLICIES = (POLICY_FIRST, POLICY_MIN_WEIGHT, POLICY_RANDOM)


class ScriptedStrategy(object):
  """
  An Eve action stream that ignores observations: either u followed by v
  repeated forever, or the triangular stream a b a a b a a a b ... The memory
  is the step index.
  """
  owner = EVE

  def __init__(self, form=PERIODIC, prefix=(), period=(), a='a', b='b'):
    if form not in (PERIODIC, TRIANGULAR):
      raise PreconditionException("Unknown scripted form", form)
    if form == PERIODIC and not period:
      raise PreconditionException("Empty period")
    self.form = form
    self.prefix = tuple(prefix)
    self.period = tuple(period)
    self.a = a
    self.b = b

  @classmethod
  def periodic(cls, prefix, period):
    return cls(PERIODIC, prefix, period)

  @classmethod
  def triangular(cls, a='a', b='b'):
    return cls(TRIANGULAR, a=a, b=b)

  @property
  def kind(self):
    return 'scripted-' + self.form

  def initial_memory(self):
    return 0

  def step(self, m, o):
    return m + 1, scripted_next(self, m)

def scripted_next(s, i):
  """
  Action of a scripted strategy at index i (0-based). In the triangular
  stream the n-th b sits at index n(n+3)/2 - 1.
  """
  if i < 0:
    raise PreconditionException("Negative index", i)
  if s.form == TRIANGULAR:
    n = 8 * (i + 1) + 9
    return s.b if math.isqrt(n) ** 2 == n else s.a
  if i < len(s.prefix):
    return s.prefix[i]
  return s.period[(i - len(s.prefix)) % len(s.period)]

#
# Adversaries. choose() gets the Adam memory, the current observation, Eve's
# action, the tracked function and the (observation, successor) options, and
# returns (memory, observation, reset).
#

class StrategyAdversary(object):
  """Adam playing a positional strategy or a memory machine."""

  def __init__(self, strategy):
    if strategy.owner != ADAM:
      raise PreconditionException("Not an Adam strategy", strategy.kind)
    self.strategy = strategy

  def initial_memory(self):
    return self.strategy.initial_memory()

  def choose(self, m, o, action, f, options):
    if hasattr(self.strategy, 'transition'):
      m2, o2, reset = self.strategy.transition(m, o, action)
    else:
      m2, o2 = self.strategy.step(m, o, action)
      reset = False
    if o2 not in dict(options):
      raise StrategyDomainException("Adam output is not admissible",
          (m, o, action, o2))
    return m2, o2, reset


class RandomAdversary(object):
  """Uniform choice among the admissible observations, seeded."""

  def __init__(self, seed=None):
    self.seed = seed
    self.rng = random.Random(seed)

  def initial_memory(self):
    return 0

  def choose(self, m, o, action, f, options):
    return 0, self.rng.choice(options)[0], False


class GreedyMinAdversary(object):
  """Picks the observation whose successor has the least minimum value."""

  def initial_memory(self):
    return 0

  def choose(self, m, o, action, f, options):
    o2, f2 = min(options, key=lambda opt: (opt[1].min_value(), opt[0]))
    return 0, o2, False


class ConcreteAdversary(object):
  """
  Adam committing to concrete states and revealing their observations only.
  The memory is the current concrete state.
  """

  def __init__(self, g, policy=POLICY_FIRST, seed=None):
    if policy not in POLICIES:
      raise PreconditionException("Unknown concrete policy", policy)
    self.g = g
    self.policy = policy
    self.rng = random.Random(seed)

  def initial_memory(self):
    return self.g.initial

  def choose(self, m, o, action, f, options):
    succ = self.g.successors(m, action)
    if self.policy == POLICY_FIRST:
      q2 = succ[0][0]
    elif self.policy == POLICY_MIN_WEIGHT:
      q2 = min(succ, key=lambda s: (s[1], self.g.state_index(s[0])))[0]
    else:
      q2 = self.rng.choice(succ)[0]
    return q2, self.g.obs_of(q2), False


def _options(g, f, o, action):
  return [ (o2, propagate(g, f, action, g.obs_states(o2)))
           for o2 in admissible_observations(g, o, action) ]

def simulate(g, eve, adam, horizon):
  """
  Plays 'horizon' rounds. Each round Eve picks an action from the current
  observation, then Adam picks the next observation.

  @param eve: Eve strategy (machine, positional, scripted or clamped).
  @param adam: Adversary.
  @return: Trace.
  """
  if horizon < 1:
    raise PreconditionException("Horizon must be positive", horizon)
  require_limited(g)
  f = initial_function(g)
  o = g.initial_obs
  em = eve.initial_memory()
  am = adam.initial_memory()
  steps = [ ]
  functions = [ ]
  resets = 0
  for t in range(1, horizon + 1):
    reset = bool(getattr(eve, 'is_reset', None) and eve.is_reset(em, o))
    em, a = eve.step(em, o)
    options = _options(g, f, o, a)
    am, o, adam_reset = adam.choose(am, o, a, f, options)
    f = dict(options)[o]
    reset = reset or adam_reset
    if reset:
      resets += 1
    lo = f.min_value()
    steps.append(TraceStep(step=t, action=a, observation=g.obs_name(o),
        function=f.render(), min=lo, max=f.max_value(),
        mean=fractions.Fraction(lo, t), reset=reset))
    functions.append(f)
  LOG.debug("Simulated %d steps of %s, final mean %s", horizon, g.name,
      steps[-1].mean)
  return Trace(game=g.name, horizon=horizon, resets=resets, steps=steps,
      functions=functions)

def exhaustive_adversary_min(g, eve, horizon, budget=EXHAUSTIVE_NODE_BUDGET):
  """
  Least tracked value over every play of 'eve' against every sequence of
  admissible observations, up to 'horizon' rounds. Plays are merged when
  they reach the same function with the same Eve memory.

  @raise CapExceededException: if more than 'budget' nodes are explored.
  """
  require_limited(g)
  f0 = initial_function(g)
  layer = { (f0, eve.initial_memory()): g.initial_obs }
  best = 0
  explored = 0
  for t in range(horizon):
    nxt = { }
    for (f, em), o in layer.items():
      em2, a = eve.step(em, o)
      for o2, f2 in _options(g, f, o, a):
        explored += 1
        if explored > budget:
          LOG.warning("Exhaustive search of %s exceeds %d nodes", g.name,
              budget)
          raise CapExceededException("Exhaustive search too large", budget)
        best = min(best, f2.min_value())
        nxt[(f2, em2)] = o2
    layer = nxt
  return best

def eve_play_states(g, adam, horizon, budget=EXHAUSTIVE_NODE_BUDGET):
  """
  Every (step, function, Adam memory, resets) reached by some Eve action
  sequence against a deterministic adversary, up to 'horizon' rounds.
  """
  f0 = initial_function(g)
  layer = set([ (f0, adam.initial_memory(), 0) ])
  explored = 0
  for t in range(1, horizon + 1):
    nxt = set()
    for f, am, resets in layer:
      o = g.obs_index(f.support)
      for a in g.actions:
        options = _options(g, f, o, a)
        am2, o2, reset = adam.choose(am, o, a, f, options)
        explored += 1
        if explored > budget:
          LOG.warning("Exhaustive search of %s exceeds %d nodes", g.name,
              budget)
          raise CapExceededException("Exhaustive search too large", budget)
        nxt.add((dict(options)[o2], am2, resets + int(reset)))
    for state in nxt:
      yield (t,) + state
    layer = nxt

def exhaustive_eve_max(g, adam, horizon, budget=EXHAUSTIVE_NODE_BUDGET):
  """
  Greatest least tracked value at the horizon over every Eve action
  sequence against a deterministic adversary.
  """
  best = None
  for t, f, am, resets in eve_play_states(g, adam, horizon, budget):
    if t == horizon and (best is None or f.min_value() > best):
      best = f.min_value()
  return best
