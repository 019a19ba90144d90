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
The clamped-value safety game.

Functions take values in [-1, cap] or bottom, with cap = 2 * W * |Obs| where
W is the largest absolute weight. Sums are clamped from above at cap, and any
negative sum collapses to -1. Eve must avoid the functions with a -1 value.
"""

import collections
import logging

import networkx as nx

from mpg_solver.belief import build_belief_game
from mpg_solver.classifier import is_forcibly_fac
from mpg_solver.errors import CapExceededException, PreconditionException, \
    StrategyDomainException
from mpg_solver.game import check_limited, post_sigma, require_limited
from mpg_solver.types import ADAM, EVE, SafetyResult, Verdict
from mpg_solver.weights import BOTTOM, WeightFunction

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

SAFETY_STATE_CAP = 1000000

METHOD_SAFETY = 'safety'

def clamped_add(a, b, cap):
  """
  Clamped addition: bottom absorbs, a negative sum (or -1 + -1) is -1, other
  sums are capped at 'cap'.
  """
  if cap < 0:
    raise PreconditionException("Negative clamp", cap)
  if a is BOTTOM or b is BOTTOM:
    return BOTTOM
  if (a == -1 and b == -1) or a + b < 0:
    return -1
  return min(a + b, cap)

def clamp_bound(g):
  """2 * W * |Obs|."""
  return 2 * g.max_abs_weight() * len(g.observations)

def initial_clamped(g):
  """The function worth W * |Obs| on the initial state."""
  return WeightFunction(g, { g.initial: g.max_abs_weight() *
      len(g.observations) })

def is_negative(f):
  return any(v == -1 for v in f.values if v is not BOTTOM)

def clamped_restrict(g, f, action, obs, cap):
  """
  The clamped action-successor of f restricted to observation 'obs'.

  @return: WeightFunction, or None if some state of the observation is not
           reached.
  """
  post = { }
  for q, v in f.items():
    for q2, w in g.successors(q, action):
      val = clamped_add(v, w, cap)
      if q2 not in post or val < post[q2]:
        post[q2] = val
  states = g.obs_states(obs)
  if not all(q in post for q in states):
    return None
  return WeightFunction(g, dict((q, post[q]) for q in states))

def clamped_successors(g, f, action, cap):
  """Proper clamped action-successors of f, in observation index order."""
  post = post_sigma(g, f.support, action)
  res = [ ]
  for i, obs in enumerate(g.observations):
    if obs <= post:
      res.append(clamped_restrict(g, f, action, i, cap))
  return res

def _build_arena(g, cap, state_cap):
  """
  Reachable clamped functions. Eve nodes are functions, Adam nodes are
  (function, action) pairs. Negative functions are not expanded.
  """
  arena = nx.DiGraph()
  init = initial_clamped(g)
  arena.add_node(init)
  successor = collections.OrderedDict()
  queue = collections.deque([ init ])
  while queue:
    f = queue.popleft()
    if is_negative(f):
      continue
    for a in g.actions:
      succ = clamped_successors(g, f, a, cap)
      successor[(f, a)] = succ
      arena.add_edge(f, (f, a))
      for f2 in succ:
        if f2 not in arena:
          if arena.number_of_nodes() >= state_cap:
            LOG.warning("Safety arena of %s exceeds %d nodes", g.name,
                state_cap)
            raise CapExceededException("Safety arena too large", state_cap)
          queue.append(f2)
        arena.add_edge((f, a), f2)
  return arena, init, successor

def _adam_attractor(arena, targets):
  """
  Nodes from which Adam forces a visit to 'targets'. An Adam node is
  attracted by one attracted successor, an Eve node once all its successors
  are attracted.
  """
  attractor = set(targets)
  remaining = dict((n, arena.out_degree(n)) for n in arena
                   if not isinstance(n, tuple))
  queue = collections.deque(attractor)
  while queue:
    node = queue.popleft()
    for pred in arena.predecessors(node):
      if pred in attractor:
        continue
      if isinstance(pred, tuple):
        attractor.add(pred)
        queue.append(pred)
      else:
        remaining[pred] -= 1
        if remaining[pred] == 0:
          attractor.add(pred)
          queue.append(pred)
  return attractor

def solve_safety(g, check_forcibly=True, state_cap=SAFETY_STATE_CAP, jobs=1):
  """
  Solves the clamped-value safety game of a limited-observation game.

  An Eve result is sound. An Adam result is a win in the mean-payoff game
  only if the game is forcibly FAC, so it is flagged inconclusive when that
  check fails or is skipped.

  @param check_forcibly: Whether to run is_forcibly_fac() on an Adam result.
  @param state_cap: Maximum number of arena nodes.
  @return: SafetyResult. Its 'strategy' maps safe functions to Eve's action.
  """
  require_limited(g)
  cap = clamp_bound(g)
  arena, init, successor = _build_arena(g, cap, state_cap)
  functions = [ n for n in arena if not isinstance(n, tuple) ]
  attractor = _adam_attractor(arena, [ f for f in functions if is_negative(f) ])

  strategy = { }
  for f in functions:
    if f in attractor:
      continue
    for a in g.actions:
      if (f, a) not in attractor:
        strategy[f] = a
        break

  inconclusive = False
  if init in attractor:
    winner = ADAM
    if check_forcibly:
      inconclusive = not is_forcibly_fac(g, jobs=jobs)[0]
    else:
      inconclusive = True
  else:
    winner = EVE
  LOG.debug("Safety arena of %s: %d functions, %d attracted", g.name,
      len(functions), len([ f for f in functions if f in attractor ]))
  res = SafetyResult(winner=winner, inconclusive=inconclusive, cap=cap,
      arena_size=len(functions),
      attractor_size=len([ f for f in functions if f in attractor ]),
      strategy=strategy, initial=init, successor=successor)
  LOG.info("%s: %s", g.name, res)
  return res

def winner_partial(g, check=True, cap=None, jobs=1):
  """
  Winner of a partial-observation game: safety game on its belief game.

  @param check: Whether to check the belief game is forcibly FAC before
                trusting an Adam result.
  @param cap: Belief cap, see belief.belief_cap().
  @return: Verdict with the SafetyResult as witness.
  """
  target = g
  if not check_limited(g)[0]:
    target = build_belief_game(g, cap)
  res = solve_safety(target, check_forcibly=check, jobs=jobs)
  return Verdict(res.winner, METHOD_SAFETY, res, res.inconclusive)


class ClampedStrategy(object):
  """
  Eve's positional safety strategy, played on the clamped function tracked
  from the observations. The memory is (function, action) of the last step,
  None before the first observation.
  """
  owner = EVE
  kind = 'eve-clamped'

  def __init__(self, g, result):
    if result.winner != EVE:
      raise PreconditionException("Safety game is not won by Eve",
          result.winner)
    self.g = g
    self.result = result
    self.cap = result.cap

  def __len__(self):
    return len(self.result.strategy)

  def initial_memory(self):
    return None

  def step(self, m, o):
    if m is None:
      f = self.result.initial
      if o != self.g.obs_of(self.g.initial):
        raise StrategyDomainException("Not the initial observation", o)
    else:
      f = clamped_restrict(self.g, m[0], m[1], o, self.cap)
    if f not in self.result.strategy:
      raise StrategyDomainException("Clamped function outside the safe set",
          f.render() if f is not None else o)
    a = self.result.strategy[f]
    return (f, a), a
