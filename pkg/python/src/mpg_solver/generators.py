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
Game generators: reductions from QBF and Hamiltonian cycle, and the built-in
sample games.
"""

import collections
import itertools
import logging

from mpg_solver.errors import GraphFormatException, PreconditionException
from mpg_solver.game import Game
from mpg_solver.gamefile import load_game
from mpg_solver.qbf import EXISTS, FORALL, Qbf

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

MEMBERSHIP = 'membership'
WINNER = 'winner'

SINK = 'SINK'
INIT = 'I'

#
# QBF reduction.
#
# One diamond gadget per variable: observation P_i (variable true) and N_i
# (variable false), both merging into B_i. Each gadget has two tracks (m and
# 0); the chosen side costs -1 on one track. The universal player picks the
# side of a forall variable, Eve the side of an exists variable by playing v
# or -v. After the last gadget Adam picks a clause, and Eve answers with one
# of its literals, which leads back into the gadget of that literal. Wrong
# actions lead to the sink.
#
# The winner variant adds 2n lane states to every observation but {q_I}.
# Lane y_k gains 1 when leaving P_k and loses 1 when a clause re-enters P_k
# (yn_k likewise for N_k). Adam may restart the game from lane y_k of P_k
# (yn_k of N_k), so answering a clause with a literal that disagrees with
# the chosen assignment closes a bad cycle. The sink loses 1 on every state.
#

def _lit(var, positive):
  return var if positive else '-' + var

def _qbf_observations(phi, variant):
  n = len(phi.prefix)
  obs = collections.OrderedDict()
  obs[INIT] = [ 'qI' ]
  for i in range(n):
    obs['P%d' % i] = [ 'x%d' % i, 'z%d' % i ]
    obs['N%d' % i] = [ 'xn%d' % i, 'zn%d' % i ]
    obs['B%d' % i] = [ 'bm%d' % i, 'b0%d' % i ]
  for j in range(len(phi.clauses)):
    obs['C%d' % j] = [ 'cm%d' % j, 'c0%d' % j ]
  obs[SINK] = [ 'sa', 'sb' ]
  base = collections.OrderedDict((k, list(v)) for k, v in obs.items())
  if variant == WINNER:
    for name in obs:
      if name == INIT:
        continue
      for k in range(n):
        obs[name].extend([ '%s.y%d' % (name, k), '%s.yn%d' % (name, k) ])
  return obs, base

def _lane_weight(src, dst, lane):
  if src == 'P%d' % lane[1] and lane[0] == 'y' and dst.startswith('B'):
    return 1
  if src == 'N%d' % lane[1] and lane[0] == 'yn' and dst.startswith('B'):
    return 1
  if src.startswith('C') and dst == 'P%d' % lane[1] and lane[0] == 'y':
    return -1
  if src.startswith('C') and dst == 'N%d' % lane[1] and lane[0] == 'yn':
    return -1
  return 0

def gen_qbf(phi, variant=MEMBERSHIP, name=None):
  """
  Game of a prenex CNF formula.

  Membership variant: phi is true iff the game is forcibly FAC (Eve wins the
  simple-support cycle-forming game); otherwise neither player wins it.
  Winner variant: the game is forcibly FAC, and Eve wins iff phi is true.

  @param phi: Qbf.
  @param variant: MEMBERSHIP or WINNER.
  @return: Limited-observation Game with 1 + 6n + 2m + 2 states, plus 2n
           lane states per observation but {q_I} in the winner variant.
  """
  if variant not in (MEMBERSHIP, WINNER):
    raise PreconditionException("Unknown QBF variant", variant)
  if not phi.clauses or not phi.prefix:
    raise PreconditionException("Formula must have variables and clauses")
  n = len(phi.prefix)
  obs, base = _qbf_observations(phi, variant)
  actions = [ ]
  for v in phi.variables:
    actions.extend([ _lit(v, True), _lit(v, False) ])

  trans = [ ]
  links = [ ]

  def all_to_all(src, a, dst, w):
    for q in base[src]:
      for q2 in base[dst]:
        trans.append((q, a, q2, w))
    links.append((src, a, dst))

  for i, (quant, v) in enumerate(phi.prefix):
    src, w = (INIT, 0) if i == 0 else ('B%d' % (i - 1), 1)
    for a in actions:
      if quant == FORALL:
        targets = [ 'P%d' % i, 'N%d' % i ]
      elif a == _lit(v, True):
        targets = [ 'P%d' % i ]
      elif a == _lit(v, False):
        targets = [ 'N%d' % i ]
      else:
        targets = [ SINK ]
      for dst in targets:
        all_to_all(src, a, dst, w)
    for a in actions:
      trans.extend([ ('x%d' % i, a, 'bm%d' % i, -1),
                     ('z%d' % i, a, 'b0%d' % i, 0),
                     ('xn%d' % i, a, 'bm%d' % i, 0),
                     ('zn%d' % i, a, 'b0%d' % i, -1) ])
      links.extend([ ('P%d' % i, a, 'B%d' % i), ('N%d' % i, a, 'B%d' % i) ])

  for a in actions:
    for j in range(len(phi.clauses)):
      all_to_all('B%d' % (n - 1), a, 'C%d' % j, 1)
  for j, clause in enumerate(phi.clauses):
    entries = dict((_lit(v, pos), '%s%d' % ('P' if pos else 'N', phi.index(v)))
                   for v, pos in clause)
    for a in actions:
      all_to_all('C%d' % j, a, entries.get(a, SINK), 0)
  for a in actions:
    trans.extend([ ('sa', a, 'sb', -1), ('sb', a, 'sa', 0) ])

  if variant == WINNER:
    lanes = [ (kind, k) for k in range(n) for kind in ('y', 'yn') ]
    for src, a, dst in links:
      if src == SINK:
        continue
      if src == INIT:
        for q2 in obs[dst][len(base[dst]):]:
          trans.append(('qI', a, q2, 0))
        continue
      for lane in lanes:
        trans.append(('%s.%s%d' % ((src,) + lane), a,
            '%s.%s%d' % ((dst,) + lane), _lane_weight(src, dst, lane)))
    for k in range(n):
      for a in actions:
        trans.append(('P%d.y%d' % (k, k), a, 'qI', 0))
        trans.append(('N%d.yn%d' % (k, k), a, 'qI', 0))
    for q in obs[SINK]:
      for a in actions:
        trans.append((q, a, q, -1))

  states = [ q for key in obs for q in obs[key] ]
  g = Game(name or "qbf-%s" % (variant,), states, 'qI', actions, trans,
      list(obs.values()), list(obs))
  LOG.debug("QBF %s game: %d states, %d observations", variant,
      len(g.states), len(g.observations))
  return g

def expmem_formula(n):
  """forall x1..xn exists y1..yn: AND_i (xi | -yi) & (-xi | yi)."""
  if n < 1:
    raise PreconditionException("n must be positive", n)
  prefix = [ (FORALL, 'x%d' % i) for i in range(1, n + 1) ] + \
      [ (EXISTS, 'y%d' % i) for i in range(1, n + 1) ]
  clauses = [ ]
  for i in range(1, n + 1):
    clauses.append([ ('x%d' % i, True), ('y%d' % i, False) ])
    clauses.append([ ('x%d' % i, False), ('y%d' % i, True) ])
  return Qbf(prefix, clauses)

def gen_expmem(n):
  """Winner-variant game of expmem_formula(n), won by Eve."""
  return gen_qbf(expmem_formula(n), WINNER, "expmem-%d" % (n,))

#
# Hamiltonian cycle reduction.
#

TAU = 'tau'
_RESERVED = ('qI', 'qplus', 'qminus', TAU)


class Graph(object):
  """A simple directed graph; vertex order is declaration order."""

  def __init__(self, vertices, edges):
    self.vertices = tuple(vertices)
    self.edges = tuple(edges)
    if len(set(self.vertices)) != len(self.vertices):
      raise PreconditionException("Duplicate vertex")
    seen = set()
    for u, v in self.edges:
      if u not in self.vertices or v not in self.vertices:
        raise PreconditionException("Unknown vertex in edge", (u, v))
      if u == v:
        raise PreconditionException("Self-loop", u)
      if (u, v) in seen:
        raise PreconditionException("Duplicate edge", (u, v))
      seen.add((u, v))
    self._edges = frozenset(seen)

  def __repr__(self):
    return "<Graph>: %d vertices, %d edges" % (len(self.vertices),
        len(self.edges))

  def has_edge(self, u, v):
    return (u, v) in self._edges


def load_graph(text):
  """
  Parses 'vertex <id>' and 'edge <id> <id>' lines.

  @raise GraphFormatException: with the offending line number.
  """
  vertices = [ ]
  edges = [ ]
  for lineno, raw in enumerate(text.splitlines(), 1):
    line = raw.split('#', 1)[0].strip()
    if not line:
      continue
    tokens = line.split()
    if tokens[0] == 'vertex' and len(tokens) == 2:
      if tokens[1] in vertices:
        raise GraphFormatException("Duplicate vertex %s" % (tokens[1],),
            lineno)
      vertices.append(tokens[1])
    elif tokens[0] == 'edge' and len(tokens) == 3:
      u, v = tokens[1:]
      for x in (u, v):
        if x not in vertices:
          raise GraphFormatException("Unknown vertex %s" % (x,), lineno)
      if u == v:
        raise GraphFormatException("Self-loop on %s" % (u,), lineno)
      if (u, v) in edges:
        raise GraphFormatException("Duplicate edge %s %s" % (u, v), lineno)
      edges.append((u, v))
    else:
      raise GraphFormatException("Expected: vertex <id> | edge <id> <id>",
          lineno)
  return Graph(vertices, edges)

def has_hamiltonian_cycle(graph):
  """Brute force over the vertex orders starting at the first vertex."""
  first = graph.vertices[0]
  for order in itertools.permutations(graph.vertices[1:]):
    cycle = (first,) + order + (first,)
    if all(graph.has_edge(u, v) for u, v in zip(cycle, cycle[1:])):
      return True
  return False

def gen_hamiltonian(graph):
  """
  Game that is FAC iff the graph has no Hamiltonian cycle.

  Eve names a vertex to visit next: an edge is taken with weight +1, a
  non-edge is a 0 self-loop. From q_I, Adam enters the first vertex through
  q+ or q- with weight 1 - |V|. Playing tau on a vertex with an edge back to
  the first vertex goes to q+ (weight 0) or q- (weight -1).
  """
  if len(graph.vertices) < 2:
    raise PreconditionException("Graph needs at least two vertices")
  for v in graph.vertices:
    if v in _RESERVED:
      raise PreconditionException("Reserved vertex name", v)
  start = graph.vertices[0]
  actions = list(graph.vertices) + [ TAU ]
  weight_in = 1 - len(graph.vertices)
  trans = [ ]
  for a in actions:
    trans.extend([ ('qI', a, 'qplus', 0), ('qI', a, 'qminus', 0),
                   ('qplus', a, start, weight_in),
                   ('qminus', a, start, weight_in) ])
  for v in graph.vertices:
    for u in graph.vertices:
      if graph.has_edge(v, u):
        trans.append((v, u, u, 1))
      else:
        trans.append((v, u, v, 0))
    if graph.has_edge(v, start):
      trans.extend([ (v, TAU, 'qplus', 0), (v, TAU, 'qminus', -1) ])
    else:
      trans.append((v, TAU, v, 0))
  states = [ 'qI', 'qplus', 'qminus' ] + list(graph.vertices)
  observations = [ [ 'qI' ], [ 'qplus', 'qminus' ] ] + \
      [ [ v ] for v in graph.vertices ]
  names = [ 'I', 'pm' ] + list(graph.vertices)
  return Game("hamiltonian", states, 'qI', actions, trans, observations,
      names)

#
# Built-in games.
#

FIG1 = """
game fig1
states q0 q1 q2 q3
initial q0
actions a b
obs o0 = q0
obs o12 = q1 q2
obs o3 = q3
trans q0 * q1 -1
trans q0 * q2 -1
trans q1 a q0 -1
trans q2 b q0 -1
trans q1 b q3 -1
trans q2 a q3 -1
trans q3 * q3 1
"""

FIG2 = """
game fig2
states q0 q1 q2 q3
initial q0
actions a b
obs o0 = q0
obs o12 = q1 q2
obs o3 = q3
trans q0 * q1 0
trans q0 * q2 0
trans q1 a q1 0
trans q1 b q1 -1
trans q1 b q2 -1
trans q2 a q2 -1
trans q2 b q3 0
trans q3 * q3 1
"""

ZEROLOOP = """
game zeroloop
states q
initial q
actions a
obs o = q
trans q a q 0
"""

BUILTIN_GAMES = collections.OrderedDict([
  ('fig1', FIG1),
  ('fig2', FIG2),
  ('zeroloop', ZEROLOOP),
])

def builtin_game(name):
  """
  @param name: One of BUILTIN_GAMES.
  @raise PreconditionException: on an unknown name.
  """
  if name not in BUILTIN_GAMES:
    raise PreconditionException("Unknown built-in game", name)
  return load_game(BUILTIN_GAMES[name])
