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
The cycle-forming reachability games played on sequences of weight functions.

A play starts at the function that is 0 on the initial state. Eve picks an
action and Adam picks one of its successors. A play stops as soon as its last
function closes a good relation (f_i <=_0 f_n: Eve wins) or a bad relation
(f_n <=_1 f_i with f_i finite somewhere: Adam wins) with an earlier function.
The simple-support variant also stops, with no winner, when the last support
repeats an earlier one without closing either relation.
"""

import collections
import logging
from concurrent import futures

from mpg_solver.errors import PreconditionException
from mpg_solver.game import require_limited
from mpg_solver.types import ADAM, EVE, NEITHER, UNKNOWN, Verdict
from mpg_solver.weights import BAD, GOOD, PROPER, WeightFunction, preceq, \
    successors

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

# Game variants.
GAMMA = 'gamma'
GAMMA_PRIME = 'gamma-prime'

METHOD_GAMMA_PRIME = 'gamma-prime'
METHOD_GAMMA_BOUNDED = 'gamma-bounded'

Terminality = collections.namedtuple('Terminality', ['kind', 'index'])

def initial_function(g):
  """The function that is 0 on the initial state and bottom elsewhere."""
  return WeightFunction(g, { g.initial: 0 })

def terminality(functions):
  """
  Terminality of a function sequence f0 ... fn.

  @return: Terminality(GOOD, i) for the least i < n with f_i <=_0 f_n, else
           Terminality(BAD, i) for the least i < n with f_n <=_1 f_i and f_i
           finite somewhere, else None.
  """
  last = functions[-1]
  for i in range(len(functions) - 1):
    if preceq(0, functions[i], last):
      return Terminality(GOOD, i)
  for i in range(len(functions) - 1):
    f = functions[i]
    if f.is_finite_somewhere() and preceq(1, last, f):
      return Terminality(BAD, i)
  return None


class PlayNode(object):
  """
  A node of the cycle-forming game: functions f0 ... fn and the actions
  between them. Terminality is computed once at creation.
  """
  __slots__ = ('functions', 'actions', 'terminality')

  def __init__(self, functions, actions=()):
    self.functions = tuple(functions)
    self.actions = tuple(actions)
    if len(self.functions) != len(self.actions) + 1:
      raise PreconditionException("Node needs one more function than actions")
    self.terminality = terminality(self.functions)

  def __getstate__(self):
    return (self.functions, self.actions, self.terminality)

  def __setstate__(self, state):
    self.functions, self.actions, self.terminality = state

  def __eq__(self, other):
    return isinstance(other, PlayNode) and \
        self.functions == other.functions and self.actions == other.actions

  def __ne__(self, other):
    return not self.__eq__(other)

  def __hash__(self):
    return hash((self.functions, self.actions))

  def __len__(self):
    return len(self.functions)

  def __repr__(self):
    return "<PlayNode>: %s" % (self.render(),)

  @property
  def lastf(self):
    return self.functions[-1]

  @property
  def key(self):
    return self.functions

  def support_repeated(self):
    """The last support equals the support of an earlier function."""
    last = self.lastf.support
    return any(f.support == last for f in self.functions[:-1])

  def child(self, action, f):
    return PlayNode(self.functions + (f,), self.actions + (action,))

  def prefix(self, i):
    """The node made of f0 ... fi."""
    return PlayNode(self.functions[:i + 1], self.actions[:i])

  def render(self):
    parts = [ self.functions[0].render() ]
    for a, f in zip(self.actions, self.functions[1:]):
      parts.append("-%s->" % (a,))
      parts.append(f.render())
    return " ".join(parts)


def is_terminal(node):
  """
  @return: Terminality(GOOD, i), Terminality(BAD, i) or None.
  """
  return node.terminality

def expand(g, node, action, variant=GAMMA, mode=PROPER):
  """
  The children of a non-terminal node under an action, one per successor of
  its last function, in successor order.
  """
  if node.terminality is not None:
    raise PreconditionException("Cannot expand a terminal node", node.render())
  if variant == GAMMA_PRIME and node.support_repeated():
    raise PreconditionException("Cannot expand a dead leaf", node.render())
  return [ node.child(action, f)
           for f in successors(g, node.lastf, action, mode) ]


class StrategyTree(object):
  """
  A winning strategy in a cycle-forming game, restricted to the nodes it
  reaches.

  For Eve, 'choice' maps every internal node to her action and 'children'
  maps it to the successors under that action. For Adam, 'children' maps
  every (internal node, action) pair to his chosen successor. Leaves are
  terminal nodes won by the owner.
  """

  def __init__(self, owner, root):
    self.owner = owner
    self.root = root
    self.choice = { }
    self.children = { }
    self.nodes = [ ]
    self._internal = set()

  def add_internal(self, node):
    self._internal.add(node)

  def is_internal(self, node):
    return node in self._internal

  def internal_nodes(self):
    return [ n for n in self.nodes if n in self._internal ]

  def leaves(self):
    return [ n for n in self.nodes if n not in self._internal ]

  @property
  def height(self):
    return max(len(n) for n in self.nodes)

  def render(self):
    return "%s strategy tree: %d nodes, %d leaves, height %d" % (self.owner,
        len(self.nodes), len(self.leaves()), self.height)

  def lines(self):
    """One line per node, indented by depth."""
    res = [ ]
    for n in self.nodes:
      text = "  " * (len(n) - 1)
      if n.actions:
        text += "-%s-> " % (n.actions[-1],)
      text += n.lastf.render()
      if n.terminality is not None:
        text += "  [%s %d]" % (n.terminality.kind, n.terminality.index)
      elif self.owner == EVE:
        text += "  play %s" % (self.choice[n],)
      res.append(text)
    return res


class _CycleGameSolver(object):
  """
  Three-valued backward induction over a cycle-forming game tree.

  Outcomes are memoized on the function sequence of a node: actions do not
  influence terminality nor the successors of a node.
  """

  def __init__(self, g, variant, mode, depth=None):
    self.g = g
    self.variant = variant
    self.mode = mode
    self.depth = depth
    self.memo = { }
    self.truncated = False
    self.explored = 0

  def is_dead(self, node):
    return self.variant == GAMMA_PRIME and node.support_repeated()

  def is_cut(self, node):
    return self.depth is not None and len(node) >= self.depth

  def expand(self, node, action):
    return expand(self.g, node, action, self.variant, self.mode)

  def outcome(self, node):
    res = self.memo.get(node.key)
    if res is None:
      res = self._evaluate(node)
      self.memo[node.key] = res
    return res

  def _evaluate(self, node):
    self.explored += 1
    t = node.terminality
    if t is not None:
      return EVE if t.kind == GOOD else ADAM
    if self.is_dead(node):
      return NEITHER
    if self.is_cut(node):
      self.truncated = True
      return NEITHER
    adam_everywhere = True
    for a in self.g.actions:
      all_eve = True
      refuted = False
      for c in self.expand(node, a):
        res = self.outcome(c)
        if res == ADAM:
          refuted = True
          break
        if res != EVE:
          all_eve = False
      if all_eve and not refuted:
        return EVE
      if not refuted:
        adam_everywhere = False
    return ADAM if adam_everywhere else NEITHER

  def eve_tree(self, root):
    tree = StrategyTree(EVE, root)
    stack = [ root ]
    while stack:
      node = stack.pop()
      tree.nodes.append(node)
      if node.terminality is not None:
        continue
      for a in self.g.actions:
        children = self.expand(node, a)
        if all(self.outcome(c) == EVE for c in children):
          break
      else:
        raise PreconditionException("Node is not won by Eve", node.render())
      tree.add_internal(node)
      tree.choice[node] = a
      tree.children[node] = children
      stack.extend(reversed(children))
    return tree

  def adam_tree(self, root):
    tree = StrategyTree(ADAM, root)
    stack = [ root ]
    while stack:
      node = stack.pop()
      tree.nodes.append(node)
      if node.terminality is not None:
        continue
      tree.add_internal(node)
      chosen = [ ]
      for a in self.g.actions:
        for c in self.expand(node, a):
          if self.outcome(c) == ADAM:
            break
        else:
          raise PreconditionException("Node is not won by Adam", node.render())
        tree.children[(node, a)] = c
        chosen.append(c)
      stack.extend(reversed(chosen))
    return tree

  def neither_witness(self, root):
    """
    Descends along Eve actions with no Adam-won child and children not won
    by Eve, down to a dead or truncated leaf.
    """
    node = root
    while node.terminality is None and not self.is_dead(node) and \
        not self.is_cut(node):
      for a in self.g.actions:
        children = self.expand(node, a)
        outcomes = [ self.outcome(c) for c in children ]
        if ADAM not in outcomes:
          node = children[[ o != EVE for o in outcomes ].index(True)]
          break
      else:
        raise PreconditionException("Node is won by Adam", node.render())
    return node

  def merge(self, memo, truncated, explored):
    self.memo.update(memo)
    self.truncated = self.truncated or truncated
    self.explored += explored


def _solve_subtree(args):
  g, variant, mode, depth, node = args
  solver = _CycleGameSolver(g, variant, mode, depth)
  solver.outcome(node)
  return solver.memo, solver.truncated, solver.explored

def _presolve_children(solver, root, jobs):
  """
  Solves the subtrees below the root in a process pool and merges their
  outcomes into the solver memo.
  """
  if root.terminality is not None:
    return
  todo = collections.OrderedDict()
  for a in solver.g.actions:
    for c in solver.expand(root, a):
      todo.setdefault(c.key, c)
  args = [ (solver.g, solver.variant, solver.mode, solver.depth, c)
           for c in todo.values() ]
  with futures.ProcessPoolExecutor(max_workers=jobs) as pool:
    for memo, truncated, explored in pool.map(_solve_subtree, args):
      solver.merge(memo, truncated, explored)

def _solve(g, variant, mode, depth, jobs, method):
  require_limited(g)
  solver = _CycleGameSolver(g, variant, mode, depth)
  root = PlayNode([ initial_function(g) ])
  if jobs and jobs > 1:
    _presolve_children(solver, root, jobs)
  res = solver.outcome(root)
  LOG.debug("%s solving of %s explored %d nodes", method, g.name,
      solver.explored)
  if res == EVE:
    verdict = Verdict(EVE, method, solver.eve_tree(root))
  elif res == ADAM:
    verdict = Verdict(ADAM, method, solver.adam_tree(root))
  else:
    tag = NEITHER
    if variant == GAMMA and solver.truncated:
      tag = UNKNOWN
    verdict = Verdict(tag, method, solver.neither_witness(root))
  LOG.info("%s: %s", g.name, verdict)
  return verdict

def solve_gamma_prime(g, mode=PROPER, jobs=1):
  """
  Solves the simple-support cycle-forming game.

  @param g: Limited-observation game.
  @param mode: Successor mode.
  @param jobs: Worker processes for the subtrees below the root.
  @return: Verdict with a StrategyTree witness for 'eve' and 'adam', and the
           dead leaf reached by the neither-witness descent for 'neither'.
  """
  return _solve(g, GAMMA_PRIME, mode, None, jobs, METHOD_GAMMA_PRIME)

def solve_gamma_bounded(g, depth, mode=PROPER, jobs=1):
  """
  Solves the cycle-forming game with plays cut at 'depth' functions. Cut
  nodes count as undecided; an undecided root is reported as 'unknown'.
  """
  if depth < 1:
    raise PreconditionException("Depth must be positive", depth)
  return _solve(g, GAMMA, mode, depth, jobs, METHOD_GAMMA_BOUNDED)
