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
Weight functions map every state of a game to bottom (not in the support),
a finite integer or +inf. They track the least weight of the concrete paths
refining an observation history and are the positions of the cycle-forming
games.
"""

import fractions
import logging

import networkx as nx

from mpg_solver.errors import PreconditionException
from mpg_solver.game import checked_add

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

BOTTOM = None
INF = float('inf')

# Successor modes.
PROPER = 'proper'
MASKED = 'masked'
MODES = (PROPER, MASKED)

# Cycle classes.
GOOD = 'good'
BAD = 'bad'
NEITHER = 'neither'

def ext_add(a, b):
  """Adds two extended values; bottom absorbs, +inf absorbs finite values."""
  if a is BOTTOM or b is BOTTOM:
    return BOTTOM
  if a == INF or b == INF:
    return INF
  return checked_add(a, b)

def render_value(v):
  if v == INF:
    return "+inf"
  return str(v)


class WeightFunction(object):
  """
  An immutable map from the states of a game to extended values.

  Two functions of the same game are equal when their values are equal.
  """
  __slots__ = ('states', 'values', '_support')

  def __init__(self, g, mapping):
    """
    @param g: Game the function ranges over.
    @param mapping: dict state -> int or INF. Missing states are bottom.
    """
    values = [ BOTTOM ] * len(g.states)
    for q, v in mapping.items():
      values[g.state_index(q)] = v
    self.states = g.states
    self.values = tuple(values)
    self._support = None

  @classmethod
  def constant(cls, g, states, value):
    return cls(g, dict((q, value) for q in states))

  def __getitem__(self, q):
    return self.values[self.states.index(q)]

  def __eq__(self, other):
    return isinstance(other, WeightFunction) and self.values == other.values

  def __ne__(self, other):
    return not self.__eq__(other)

  def __hash__(self):
    return hash(self.values)

  def __repr__(self):
    return "<WeightFunction>: %s" % (self.render(),)

  def __getstate__(self):
    return (self.states, self.values)

  def __setstate__(self, state):
    self.states, self.values = state
    self._support = None

  @property
  def support(self):
    if self._support is None:
      self._support = frozenset(q for q, v in zip(self.states, self.values)
                                if v is not BOTTOM)
    return self._support

  def items(self):
    """(state, value) pairs of the support, in state index order."""
    return [ (q, v) for q, v in zip(self.states, self.values)
             if v is not BOTTOM ]

  def finite_values(self):
    return [ v for v in self.values if v is not BOTTOM and v != INF ]

  def is_finite_somewhere(self):
    return bool(self.finite_values())

  def min_value(self):
    """Least finite value of the support, or None."""
    return min(self.finite_values()) if self.finite_values() else None

  def max_value(self):
    """Greatest finite value of the support, or None."""
    return max(self.finite_values()) if self.finite_values() else None

  def shift(self, k):
    """The function with every finite value increased by k."""
    res = object.__new__(WeightFunction)
    res.states = self.states
    res.values = tuple(ext_add(v, k) for v in self.values)
    res._support = self._support
    return res

  def to_dict(self):
    return dict(self.items())

  def render(self):
    return "{%s}" % (", ".join("%s:%s" % (q, render_value(v))
        for q, v in self.items()),)


def preceq(k, f, f2):
  """
  f <=_k f2: equal supports and f(q) + k <= f2(q) on the support, where
  +inf + k = +inf.
  """
  if f.support != f2.support:
    return False
  for v, v2 in zip(f.values, f2.values):
    if v is BOTTOM:
      continue
    if v == INF:
      if v2 != INF:
        return False
    elif v + k > v2:
      return False
  return True

def _post_values(g, f, action):
  """Least value reaching each action-successor of supp(f)."""
  post = { }
  for q, v in f.items():
    for q2, w in g.successors(q, action):
      val = ext_add(v, w)
      if q2 not in post or val < post[q2]:
        post[q2] = val
  return post

def _masked_variants(g, states, values):
  """
  All variants of a restricted successor where a subset of coordinates is
  replaced by +inf. Bit j of the mask masks the j-th state in index order.
  Duplicates are dropped, keeping mask order.
  """
  res = [ ]
  seen = set()
  for mask in range(1 << len(states)):
    mapping = { }
    for j, q in enumerate(states):
      mapping[q] = INF if mask & (1 << j) else values[q]
    f = WeightFunction(g, mapping)
    if f not in seen:
      seen.add(f)
      res.append(f)
  return res

def successors(g, f, action, mode=PROPER):
  """
  The action-successors of f whose support is an observation contained in
  post_action(supp(f)).

  @param mode: PROPER for the pointwise least successor of every admissible
               observation, MASKED to add every +inf masking of it.
  @return: list of WeightFunction ordered by (observation index, mask).
  """
  if mode not in MODES:
    raise PreconditionException("Unknown successor mode", mode)
  post = _post_values(g, f, action)
  res = [ ]
  for i, obs in enumerate(g.observations):
    if not all(q in post for q in obs):
      continue
    states = g.obs_states(i)
    if mode == PROPER:
      res.append(WeightFunction(g, dict((q, post[q]) for q in states)))
    else:
      res.extend(_masked_variants(g, states, post))
  return res

def propagate(g, f, action, target):
  """
  The proper action-successor of f restricted to the target state set.

  @return: WeightFunction, or None if no state of the target is reached.
  """
  post = _post_values(g, f, action)
  mapping = dict((q, post[q]) for q in target if q in post)
  if not mapping:
    return None
  return WeightFunction(g, mapping)

def min_path_weights(g, psi, f0):
  """
  Propagates f0 along an abstract path with proper successors. Each value of
  the result is the least f0(first state) + weight over the concrete paths of
  psi ending in that state.

  @raise PreconditionException: if supp(f0) is not the first observation of
                                psi, or psi is not realizable.
  """
  if f0.support != psi.first:
    raise PreconditionException("Support does not match the path start",
        f0.render())
  f = f0
  for i, (o, a, o2) in enumerate(psi.steps()):
    f = propagate(g, f, a, o2)
    if f is None:
      raise PreconditionException("Abstract path is not realizable", i)
  return f

def cycle_matrix(g, rho):
  """
  One-traversal matrix of an abstract cycle: A[(p, q)] is the least weight
  of a concrete rho-path from p to q, both in the first observation. Pairs
  without a path are absent.

  @return: (states of the first observation in index order, dict)
  """
  if not rho.is_cycle() or len(rho) == 0:
    raise PreconditionException("Abstract path is not a cycle", rho.render(g))
  states = g.sorted_states(rho.first)
  matrix = { }
  for p in states:
    unit = dict((q, INF) for q in states)
    unit[p] = 0
    fn = min_path_weights(g, rho, WeightFunction(g, unit))
    for q in states:
      v = fn[q]
      if v is not BOTTOM and v != INF:
        matrix[(p, q)] = v
  return states, matrix

def karp_min_cycle_mean(nodes, edges):
  """
  Minimum mean weight of a cycle, by Karp's algorithm with every node as a
  source.

  @param nodes: Sequence of nodes.
  @param edges: dict (u, v) -> integer weight.
  @return: fractions.Fraction, or None if the graph is acyclic.
  """
  n = len(nodes)
  dist = [ dict((v, 0) for v in nodes) ]
  for k in range(1, n + 1):
    prev = dist[-1]
    cur = { }
    for (u, v), w in edges.items():
      if u in prev:
        val = prev[u] + w
        if v not in cur or val < cur[v]:
          cur[v] = val
    dist.append(cur)
  best = None
  for v in nodes:
    if v not in dist[n]:
      continue
    worst = None
    for k in range(n):
      if v in dist[k]:
        ratio = fractions.Fraction(dist[n][v] - dist[k][v], n - k)
        if worst is None or ratio > worst:
          worst = ratio
    if best is None or worst < best:
      best = worst
  return best

def min_cycle_mean(g, rho):
  """Minimum cycle mean of the one-traversal matrix of rho."""
  states, matrix = cycle_matrix(g, rho)
  return karp_min_cycle_mean(states, matrix)

def has_negative_cycle(nodes, edges):
  graph = nx.DiGraph()
  graph.add_nodes_from(nodes)
  for (u, v), w in edges.items():
    if u == v and w < 0:
      return True
    graph.add_edge(u, v, weight=w)
  return nx.negative_edge_cycle(graph, weight='weight')

def classify_cycle(g, rho):
  """
  Classifies an abstract cycle as GOOD, BAD or NEITHER.

  Good iff the one-traversal matrix has no negative cycle; bad iff its
  minimum cycle mean is at most -1.
  """
  states, matrix = cycle_matrix(g, rho)
  if not has_negative_cycle(states, matrix):
    return GOOD
  mean = karp_min_cycle_mean(states, matrix)
  LOG.debug("Cycle %s has minimum cycle mean %s", rho.render(g), mean)
  if mean is not None and mean <= -1:
    return BAD
  return NEITHER
