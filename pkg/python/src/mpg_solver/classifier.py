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

import logging

from mpg_solver.belief import build_belief_game
from mpg_solver.cyclegame import GAMMA_PRIME, PlayNode, expand, \
    initial_function, solve_gamma_bounded, solve_gamma_prime
from mpg_solver.game import check_limited, require_limited
from mpg_solver.types import ADAM, EVE, Classification
from mpg_solver.weights import PROPER

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

def _find_dead_leaf(g, node, mode, seen):
  if node.terminality is not None:
    return None
  if node.support_repeated():
    return node
  for a in g.actions:
    for c in expand(g, node, a, GAMMA_PRIME, mode):
      if c.key in seen:
        continue
      seen.add(c.key)
      leaf = _find_dead_leaf(g, c, mode, seen)
      if leaf is not None:
        return leaf
  return None

def is_fac(g, mode=PROPER):
  """
  Checks that every leaf of the simple-support cycle-forming game is good or
  bad terminal.

  @return: (True, None), or (False, first dead leaf in depth-first order).
  """
  require_limited(g)
  leaf = _find_dead_leaf(g, PlayNode([ initial_function(g) ]), mode, set())
  if leaf is not None:
    LOG.debug("%s is not FAC: dead leaf %s", g.name, leaf.render())
    return False, leaf
  return True, None

def is_forcibly_fac(g, mode=PROPER, jobs=1):
  """
  @return: (bool, Verdict) where the bool says whether a player wins the
           simple-support cycle-forming game.
  """
  verdict = solve_gamma_prime(g, mode, jobs)
  return verdict.tag in (EVE, ADAM), verdict

def is_forcibly_terminating_bounded(g, depth, mode=PROPER, jobs=1):
  """
  @return: (True, Verdict) when a player wins the cycle-forming game within
           'depth' functions, (False, Verdict) with an 'unknown' tag otherwise.
  """
  verdict = solve_gamma_bounded(g, depth, mode, jobs)
  return verdict.tag in (EVE, ADAM), verdict

def is_visible_weights(g):
  """
  True iff all a-transitions between two given observations share one
  weight.
  """
  weights = { }
  for q, a, q2, w in g.transitions:
    key = (g.obs_of(q), a, g.obs_of(q2))
    if weights.setdefault(key, w) != w:
      return False
  return True

def is_fbc(g, mode=PROPER, cap=None):
  """is_fac() of the belief game of g."""
  return is_fac(build_belief_game(g, cap), mode)

def is_forcibly_fbc(g, mode=PROPER, cap=None, jobs=1):
  """is_forcibly_fac() of the belief game of g."""
  return is_forcibly_fac(build_belief_game(g, cap), mode, jobs)

def classify(g, mode=PROPER, depth=None, cap=None, jobs=1):
  """
  Evaluates every class predicate. Partial-observation games are classified
  through their belief game.

  @param depth: Bound of the forcibly-terminating check, defaults to the
                number of observations plus one.
  @return: Classification.
  """
  limited = check_limited(g)[0]
  target = g
  if not limited:
    target = build_belief_game(g, cap)
  if depth is None:
    depth = len(target.observations) + 1
  fac, leaf = is_fac(target, mode)
  forcibly, verdict = is_forcibly_fac(target, mode, jobs)
  terminating = is_forcibly_terminating_bounded(target, depth, mode, jobs)[0]
  return Classification(game=g.name, limited=limited, belief=not limited,
      visible_weights=is_visible_weights(g), fac=fac, fac_witness=leaf,
      forcibly_fac=forcibly, verdict=verdict, terminating=terminating,
      depth=depth)
