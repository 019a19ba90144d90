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

import itertools
import random

from mpg_solver.game import Game, admissible_observations
from mpg_solver.gamefile import load_game
from mpg_solver.generators import Graph, builtin_game, gen_hamiltonian, \
    gen_qbf, BUILTIN_GAMES
from mpg_solver.paths import AbstractPath, cycle_power, gamma_enumerate
from mpg_solver.qbf import load_qbf
from mpg_solver.weights import BAD, BOTTOM, GOOD, INF, NEITHER, WeightFunction

# A partial-observation game whose initial observation is not {q0}.
TWOVIEW = """
game twoview
states q0 q1 q2
initial q0
actions a
obs A = q0 q1
obs B = q2
trans q0 a q2 0
trans q1 a q2 0
trans q2 a q0 1
trans q2 a q1 -1
"""

# One observation {p,r} whose a-cycle has mean -1/2.
SWAP = """
game swap
states qI p r
initial qI
actions a
obs I = qI
obs O = p r
trans qI a p 0
trans qI a r 0
trans p a r 0
trans r a p -1
"""

# One observation {x,y} with four loops. Loops a and b are good, c and d are
# bad, and interleaving b into a (d into c) flips the class.
MIXER = """
game mixer
states q0 x y
initial q0
actions a b c d
obs I = q0
obs O = x y
trans q0 * x 0
trans q0 * y 0
trans x a x 0
trans y a y 0
trans y a x 0
trans x b y -5
trans y b x 5
trans x c x -1
trans y c y 10
trans x d y 0
trans y d x 0
trans y d y -1
"""

def _split(rng, items):
  """Random partition of a non-empty list into non-empty blocks."""
  items = list(items)
  rng.shuffle(items)
  cuts = sorted(rng.sample(range(1, len(items)), rng.randint(0,
      len(items) - 1))) if len(items) > 1 else [ ]
  bounds = [ 0 ] + cuts + [ len(items) ]
  return [ items[bounds[i]:bounds[i + 1]] for i in range(len(bounds) - 1) ]

def random_limited_game(rng, n_states=4, n_actions=2, max_weight=2,
    name='random'):
  """
  A random limited-observation game: {q0} is an observation, and every
  observation/action pair leads onto a random union of observations.
  """
  states = [ 'q%d' % i for i in range(n_states) ]
  actions = [ 'a', 'b', 'c' ][:n_actions]
  observations = [ [ 'q0' ] ] + _split(rng, states[1:])
  weights = { }
  for obs in observations:
    for a in actions:
      targets = rng.sample(range(len(observations)),
          rng.randint(1, min(2, len(observations))))
      dst = [ q for t in targets for q in observations[t] ]
      edges = [ (rng.choice(obs), q2) for q2 in dst ]
      for q in obs:
        if not any(e[0] == q for e in edges):
          edges.append((q, rng.choice(dst)))
      for q, q2 in edges:
        weights.setdefault((q, a, q2), rng.randint(-max_weight, max_weight))
  trans = [ k + (w,) for k, w in weights.items() ]
  return Game(name, states, 'q0', actions, trans, observations)

def random_partial_game(rng, n_states=4, n_actions=2, max_weight=2,
    visible=False, name='partial'):
  """
  A random game with an arbitrary observation partition. With 'visible',
  the weight of a transition only depends on the observations it links and
  its action.
  """
  states = [ 'q%d' % i for i in range(n_states) ]
  actions = [ 'a', 'b', 'c' ][:n_actions]
  observations = _split(rng, states)
  owner = dict((q, i) for i, o in enumerate(observations) for q in o)
  visible_weights = { }
  trans = [ ]
  for q in states:
    for a in actions:
      for q2 in rng.sample(states, rng.randint(1, 2)):
        if visible:
          w = visible_weights.setdefault((owner[q], a, owner[q2]),
              rng.randint(-max_weight, max_weight))
        else:
          w = rng.randint(-max_weight, max_weight)
        trans.append((q, a, q2, w))
  return Game(name, states, 'q0', actions, trans, observations)

def random_function(rng, g, obs, lo=-3, hi=3):
  return WeightFunction(g, dict((q, rng.randint(lo, hi))
      for q in g.obs_states(obs)))

def random_abstract_path(rng, g, length, start=None):
  """A random walk over admissible observations, or None if it gets stuck."""
  o = g.initial_obs if start is None else start
  observations = [ g.observations[o] ]
  actions = [ ]
  for i in range(length):
    a = rng.choice(g.actions)
    options = admissible_observations(g, o, a)
    if not options:
      return None
    o = rng.choice(options)
    observations.append(g.observations[o])
    actions.append(a)
  return AbstractPath(observations, actions)

def random_abstract_cycle(rng, g, max_length=4, attempts=50):
  """An abstract cycle over admissible observations, or None."""
  for i in range(attempts):
    start = rng.randrange(len(g.observations))
    length = rng.randint(0, max_length - 1)
    psi = random_abstract_path(rng, g, length, start)
    if psi is None:
      continue
    last = g.obs_index(psi.last)
    closing = [ a for a in g.actions
                if start in admissible_observations(g, last, a) ]
    if closing:
      a = rng.choice(closing)
      return AbstractPath(psi.observations + (g.observations[start],),
          psi.actions + (a,))
  return None

def path_weight(g, path):
  return sum(g.weight(*step) for step in path.steps())

def brute_min_path_weights(g, psi, f0):
  """Least f0 value plus path weight per end state, from gamma_enumerate."""
  best = { }
  for path in gamma_enumerate(g, psi):
    start = f0[path.first]
    if start == INF:
      val = INF
    else:
      val = start + path_weight(g, path)
    if path.last not in best or val < best[path.last]:
      best[path.last] = val
  return best

def brute_cycle_matrix(g, rho):
  """One-traversal least weights between the states of the first set."""
  matrix = { }
  for path in gamma_enumerate(g, rho):
    key = (path.first, path.last)
    val = path_weight(g, path)
    if key not in matrix or val < matrix[key]:
      matrix[key] = val
  return matrix

def brute_cycle_class(g, rho):
  """
  Cycle class from the concrete cycles refining rho^k for k up to |o0|: good
  when none is negative, bad when one of them weighs at most -k.
  """
  negative = False
  for k in range(1, len(rho.first) + 1):
    for path in gamma_enumerate(g, cycle_power(rho, k)):
      if path.first != path.last:
        continue
      w = path_weight(g, path)
      if w <= -k:
        return BAD
      if w < 0:
        negative = True
  if negative:
    return NEITHER
  return GOOD

def witness_search(states, matrix, k, finite_subsets):
  """
  Bounded search for a function f0 over 'states' with f0 <=_k fn (k = 0) or
  fn <=_k f0 (k = 1), where fn is one traversal of the matrix. With
  'finite_subsets', f0 may be +inf outside a non-empty subset.
  """
  spread = max([ abs(v) for v in matrix.values() ] or [ 0 ]) + 1
  bound = len(states) * spread
  if finite_subsets:
    subsets = [ s for n in range(1, len(states) + 1)
                for s in itertools.combinations(states, n) ]
  else:
    subsets = [ tuple(states) ]
  for subset in subsets:
    for values in itertools.product(range(bound + 1), repeat=len(subset)):
      f0 = dict((q, INF) for q in states)
      f0.update(zip(subset, values))
      ok = True
      for q in states:
        fn = min([ f0[p] + matrix[(p, q)] for p in states
                   if (p, q) in matrix ] or [ BOTTOM ])
        if fn is BOTTOM:
          ok = False
        elif k == 0 and f0[q] > fn:
          ok = False
        elif k == 1 and f0[q] != INF and (fn == INF or fn + 1 > f0[q]):
          ok = False
        if not ok:
          break
      if ok:
        return True
  return False

def game_from_text(text):
  return load_game(text)

def corpus():
  """Small games every solver should agree on."""
  games = [ builtin_game(name) for name in BUILTIN_GAMES ]
  games.append(game_from_text(SWAP))
  games.append(gen_qbf(load_qbf("exists x\nclause x\n"), name="qbf-true"))
  games.append(gen_qbf(load_qbf("forall x\nclause x\n"), name="qbf-false"))
  games.append(gen_hamiltonian(Graph([ 'u', 'v' ], [ ('u', 'v') ])))
  rng = random.Random(7)
  for i in range(6):
    games.append(random_limited_game(rng, n_states=4, max_weight=2,
        name='random-%d' % (i,)))
  return games
