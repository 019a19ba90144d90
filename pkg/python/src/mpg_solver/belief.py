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
import logging
import os

from mpg_solver.errors import CapExceededException, PreconditionException, \
    SolverException
from mpg_solver.game import Game, check_limited, post_sigma

__docformat__ = "epytext"

LOG = logging.getLogger(__name__)

DEFAULT_BELIEF_CAP = 4096
BELIEF_CAP_ENV = "MPG_BELIEF_CAP"

def belief_cap():
  """
  The configured cap on reachable belief states: MPG_BELIEF_CAP if set,
  DEFAULT_BELIEF_CAP otherwise.
  """
  value = os.environ.get(BELIEF_CAP_ENV, None)
  if not value:
    return DEFAULT_BELIEF_CAP
  try:
    cap = int(value)
  except ValueError:
    raise PreconditionException("Invalid %s" % (BELIEF_CAP_ENV,), value)
  if cap < 1:
    raise PreconditionException("Invalid %s" % (BELIEF_CAP_ENV,), value)
  return cap

def knowledge_name(g, knowledge):
  return "{%s}" % (",".join(g.sorted_states(knowledge)),)

def belief_state_name(g, q, knowledge):
  """Name of the belief state (q, K), e.g. q1@{q1,q2}."""
  return "%s@%s" % (q, knowledge_name(g, knowledge))


class BeliefState(collections.namedtuple('BeliefState', ['state', 'knowledge'])):
  """A base state together with the set of states Eve considers possible."""
  __slots__ = ()


def build_belief_game(g, cap=None):
  """
  Reachable part of the knowledge-set construction. The states are pairs
  (q, K) with q in K; K' = post_a(K) intersected with the observation of q'.
  Observations group the belief states by K.

  @param g: Game with partial observation.
  @param cap: Maximum number of belief states, defaults to belief_cap().
  @return: Limited-observation Game. Its 'beliefs' attribute maps state
           names to BeliefState tuples.
  """
  if cap is None:
    cap = belief_cap()
  init = BeliefState(g.initial, frozenset([g.initial]))
  seen = { init: None }
  queue = collections.deque([init])
  transitions = [ ]
  while queue:
    b = queue.popleft()
    for a in g.actions:
      post = post_sigma(g, b.knowledge, a)
      for q2, w in g.successors(b.state, a):
        k2 = post & g.observations[g.obs_of(q2)]
        b2 = BeliefState(q2, k2)
        if b2 not in seen:
          if len(seen) >= cap:
            LOG.warning("Belief construction of %s exceeds %d states",
                g.name, cap)
            raise CapExceededException("Too many belief states", cap)
          seen[b2] = None
          queue.append(b2)
        transitions.append((b, a, b2, w))

  def order(b):
    return (tuple(sorted(g.state_index(q) for q in b.knowledge)),
        g.state_index(b.state))

  beliefs = sorted(seen, key=order)
  names = dict((b, belief_state_name(g, b.state, b.knowledge))
               for b in beliefs)
  groups = collections.OrderedDict()
  for b in beliefs:
    groups.setdefault(b.knowledge, [ ]).append(names[b])

  res = Game("%s-belief" % (g.name,),
      [ names[b] for b in beliefs ],
      names[init],
      g.actions,
      [ (names[b], a, names[b2], w) for b, a, b2, w in transitions ],
      list(groups.values()),
      [ knowledge_name(g, k) for k in groups ])
  res.beliefs = dict((names[b], b) for b in beliefs)
  limited, witness = check_limited(res)
  if not limited:
    raise SolverException("Belief game is not limited-observation",
        witness[1])
  LOG.debug("Belief game of %s has %d states and %d observations", g.name,
      len(res.states), len(res.observations))
  return res
