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
Observation-based strategies.

Every Eve strategy offers initial_memory() and step(m, o) -> (m', action),
called once per observation, the initial one included. Every Adam strategy
offers initial_memory() and step(m, o, action) -> (m', observation), called
once per Eve action. Observations are observation indices of the game.
"""

import collections
import itertools
import logging

import networkx as nx

from mpg_solver.classifier import is_fac
from mpg_solver.errors import PreconditionException, SolverException, \
    StrategyDomainException
from mpg_solver.game import admissible_observations, reachable_observations, \
    require_limited
from mpg_solver.paths import AbstractPath, ConcretePath
from mpg_solver.types import ADAM, EVE
from mpg_solver.weights import BAD, GOOD, classify_cycle

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

EVE_MACHINE = 'eve-machine'
ADAM_MACHINE = 'adam-machine'
EVE_POSITIONAL = 'eve-positional'
ADAM_POSITIONAL = 'adam-positional'

# Memory of an Eve machine before the initial observation.
START = 0


class EveMemoryMachine(object):
  """
  Finite-memory Eve strategy. update and output are tables keyed by
  (memory, observation); the output is the action played on entering the
  updated memory.

  Machines extracted from a strategy tree also carry 'nodes', the tree node
  of every memory but START, and 'resets', the table keys whose update jumps
  back to a proper prefix.
  """
  kind = EVE_MACHINE
  owner = EVE

  def __init__(self, memories, initial, update, output, nodes=None,
      resets=None):
    self.memories = tuple(memories)
    self.initial = initial
    self.update = dict(update)
    self.output = dict(output)
    self.nodes = dict(nodes or { })
    self.resets = frozenset(resets or ())

  def __len__(self):
    return len(self.memories)

  def __repr__(self):
    return "<EveMemoryMachine>: %d memories" % (len(self),)

  def initial_memory(self):
    return self.initial

  def step(self, m, o):
    key = (m, o)
    if key not in self.update:
      raise StrategyDomainException("Eve machine is not defined", key)
    return self.update[key], self.output[key]

  def is_reset(self, m, o):
    return (m, o) in self.resets

  def beta(self):
    """Least finite value in the last function of a memory node."""
    return min(n.lastf.min_value() for n in self.nodes.values()
               if n.lastf.min_value() is not None)


class AdamMemoryMachine(object):
  """
  Finite-memory Adam strategy. update and output are tables keyed by
  (memory, observation, action).
  """
  kind = ADAM_MACHINE
  owner = ADAM

  def __init__(self, memories, initial, update, output, nodes=None,
      resets=None):
    self.memories = tuple(memories)
    self.initial = initial
    self.update = dict(update)
    self.output = dict(output)
    self.nodes = dict(nodes or { })
    self.resets = frozenset(resets or ())

  def __len__(self):
    return len(self.memories)

  def __repr__(self):
    return "<AdamMemoryMachine>: %d memories" % (len(self),)

  def initial_memory(self):
    return self.initial

  def transition(self, m, o, action):
    """
    @return: (m', observation, whether the update is a reset)
    """
    key = (m, o, action)
    if key not in self.update:
      raise StrategyDomainException("Adam machine is not defined", key)
    return self.update[key], self.output[key], key in self.resets

  def step(self, m, o, action):
    m2, o2, reset = self.transition(m, o, action)
    return m2, o2

  def ceiling(self):
    """Greatest finite value in the last function of a memory node."""
    return max(n.lastf.max_value() for n in self.nodes.values()
               if n.lastf.max_value() is not None)


class PositionalStrategy(object):
  """
  Memoryless strategy. The Eve form maps observations to actions, the Adam
  form maps (observation, action) pairs to observations.
  """

  def __init__(self, owner, mapping):
    if owner not in (EVE, ADAM):
      raise PreconditionException("Unknown player", owner)
    self.owner = owner
    self.mapping = dict(mapping)

  @property
  def kind(self):
    return EVE_POSITIONAL if self.owner == EVE else ADAM_POSITIONAL

  def __len__(self):
    return 1

  def __eq__(self, other):
    return isinstance(other, PositionalStrategy) and \
        self.owner == other.owner and self.mapping == other.mapping

  def __ne__(self, other):
    return not self.__eq__(other)

  def __repr__(self):
    return "<PositionalStrategy>: %s %s" % (self.owner, self.mapping)

  def initial_memory(self):
    return 0

  def step(self, m, o, action=None):
    key = o if self.owner == EVE else (o, action)
    if key not in self.mapping:
      raise StrategyDomainException("Positional strategy is not defined", key)
    return 0, self.mapping[key]


def _obs(g, node):
  return g.obs_index(node.lastf.support)

def _reset_target(tree, child, kind):
  t = child.terminality
  if t is None or t.kind != kind:
    raise PreconditionException("Malformed strategy tree leaf", child.render())
  return child.prefix(t.index)

def extract_eve_machine(g, tree):
  """
  Eve machine of a winning strategy tree: one memory per internal node plus
  START. Reaching a good leaf resets the memory to the prefix closing the
  relation (least index).
  """
  if tree.owner != EVE:
    raise PreconditionException("Not an Eve strategy tree", tree.owner)
  internal = tree.internal_nodes()
  ids = dict((n, i + 1) for i, n in enumerate(internal))
  update = { }
  output = { }
  resets = set()
  update[(START, _obs(g, tree.root))] = ids[tree.root]
  output[(START, _obs(g, tree.root))] = tree.choice[tree.root]
  for node in internal:
    m = ids[node]
    for c in tree.children[node]:
      o = _obs(g, c)
      if (m, o) in update:
        continue
      if tree.is_internal(c):
        target = c
      else:
        target = _reset_target(tree, c, GOOD)
        resets.add((m, o))
      if target not in ids:
        raise PreconditionException("Reset target is not in the tree",
            target.render())
      update[(m, o)] = ids[target]
      output[(m, o)] = tree.choice[target]
  machine = EveMemoryMachine([ START ] + [ ids[n] for n in internal ], START,
      update, output, dict((ids[n], n) for n in internal), resets)
  LOG.debug("Eve machine of %s has %d memories", g.name, len(machine))
  return machine

def extract_adam_machine(g, tree):
  """
  Adam machine of a winning strategy tree: one memory per internal node.
  Reaching a bad leaf resets the memory to the prefix closing the relation
  (least index).
  """
  if tree.owner != ADAM:
    raise PreconditionException("Not an Adam strategy tree", tree.owner)
  internal = tree.internal_nodes()
  ids = dict((n, i) for i, n in enumerate(internal))
  update = { }
  output = { }
  resets = set()
  for node in internal:
    m = ids[node]
    o = _obs(g, node)
    for a in g.actions:
      c = tree.children[(node, a)]
      if tree.is_internal(c):
        target = c
      else:
        target = _reset_target(tree, c, BAD)
        resets.add((m, o, a))
      if target not in ids:
        raise PreconditionException("Reset target is not in the tree",
            target.render())
      update[(m, o, a)] = ids[target]
      output[(m, o, a)] = _obs(g, c)
  machine = AdamMemoryMachine([ ids[n] for n in internal ], ids[tree.root],
      update, output, dict((ids[n], n) for n in internal), resets)
  LOG.debug("Adam machine of %s has %d memories", g.name, len(machine))
  return machine

def machine_step(machine, m, o, action=None):
  """One synchronous update/output step of any strategy object."""
  if machine.owner == ADAM:
    return machine.step(m, o, action)
  return machine.step(m, o)

#
# Verification.
#

def _verify_eve(g, strategy):
  """
  Builds the product of the game and the strategy memory reachable from the
  initial state, and looks for a negative cycle.
  """
  start = (g.initial, strategy.initial_memory())
  graph = nx.DiGraph()
  graph.add_node(start)
  queue = collections.deque([ start ])
  while queue:
    node = queue.popleft()
    q, m = node
    m2, a = strategy.step(m, g.obs_of(q))
    for q2, w in g.successors(q, a):
      node2 = (q2, m2)
      if node2 not in graph:
        queue.append(node2)
      graph.add_edge(node, node2, weight=w, action=a)

  cycle = None
  for u, v, w in graph.edges(data='weight'):
    if u == v and w < 0:
      cycle = [ u, u ]
      break
  if cycle is None:
    try:
      cycle = nx.find_negative_cycle(graph, start, weight='weight')
    except nx.NetworkXError:
      LOG.debug("No negative cycle in a product of %d nodes", len(graph))
      return True, None
  actions = [ graph.edges[u, v]['action'] for u, v in zip(cycle, cycle[1:]) ]
  return False, ConcretePath([ n[0] for n in cycle ], actions)

def _verify_adam(g, strategy):
  """
  Builds the observation graph restricted by the strategy, reachable from
  the initial observation, and checks that all its simple cycles are bad.
  """
  start = (g.initial_obs, strategy.initial_memory())
  graph = nx.DiGraph()
  graph.add_node(start)
  queue = collections.deque([ start ])
  while queue:
    node = queue.popleft()
    o, m = node
    for a in g.actions:
      m2, o2 = strategy.step(m, o, a)
      if o2 not in admissible_observations(g, o, a):
        raise StrategyDomainException("Adam output is not admissible",
            (o, a, o2))
      node2 = (o2, m2)
      if node2 not in graph:
        queue.append(node2)
      if graph.has_edge(node, node2):
        graph.edges[node, node2]['actions'].append(a)
      else:
        graph.add_edge(node, node2, actions=[ a ])

  cycles = [ ]
  for cycle in nx.simple_cycles(graph):
    i = cycle.index(min(cycle))
    cycles.append(cycle[i:] + cycle[:i])
  cycles.sort()
  LOG.debug("Checking %d simple cycles", len(cycles))
  for cycle in cycles:
    closed = cycle + cycle[:1]
    labels = [ graph.edges[u, v]['actions'] for u, v in zip(closed, closed[1:]) ]
    for actions in itertools.product(*labels):
      rho = AbstractPath([ g.observations[n[0]] for n in closed ], actions)
      if classify_cycle(g, rho) != BAD:
        return False, rho
  return True, None

def verify_positional(g, strategy):
  """
  Checks that a positional strategy is winning.

  The Eve form is accepted iff no negative cycle is reachable in the product
  of the game with the strategy; the counterexample is a ConcretePath cycle.
  The Adam form is accepted iff every simple cycle of the restricted
  observation graph is bad; the counterexample is an AbstractPath cycle.

  @return: (bool, counterexample or None)
  """
  require_limited(g)
  if strategy.owner == EVE:
    return _verify_eve(g, strategy)
  return _verify_adam(g, strategy)

def verify_machine(g, machine):
  """verify_positional() generalized to the memory product of a machine."""
  return verify_positional(g, machine)

def search_positional_fac(g):
  """
  First positional strategy that verifies: Eve maps first, then Adam maps,
  in index order over the reachable observations.

  @raise PreconditionException: if the game is not FAC.
  """
  fac, leaf = is_fac(g)
  if not fac:
    raise PreconditionException("Game is not FAC", leaf.render())
  observations = reachable_observations(g)
  for choice in itertools.product(g.actions, repeat=len(observations)):
    strategy = PositionalStrategy(EVE, zip(observations, choice))
    if verify_positional(g, strategy)[0]:
      return strategy
  pairs = [ (o, a) for o in observations for a in g.actions ]
  options = [ admissible_observations(g, o, a) for o, a in pairs ]
  for choice in itertools.product(*options):
    strategy = PositionalStrategy(ADAM, zip(pairs, choice))
    if verify_positional(g, strategy)[0]:
      return strategy
  raise SolverException("No positional strategy verifies", g.name)
