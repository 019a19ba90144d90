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

import fractions
import random
import unittest

from mpg_solver.errors import PreconditionException
from mpg_solver.generators import builtin_game
from mpg_solver.paths import AbstractPath, cycle_power, cyclic_permutations, \
    gamma_enumerate, interleave
from mpg_solver.weights import *
from mpg_solver_tests import utils

class TestWeightFunction(unittest.TestCase):

  def setUp(self):
    self.fig1 = builtin_game('fig1')

  def test_values(self):
    g = self.fig1
    f = WeightFunction(g, { 'q2' : INF, 'q1' : -1 })
    self.assertEqual(frozenset([ 'q1', 'q2' ]), f.support)
    self.assertEqual([ ('q1', -1), ('q2', INF) ], f.items())
    self.assertEqual("{q1:-1, q2:+inf}", f.render())
    self.assertIsNone(f['q0'])
    self.assertEqual(-1, f.min_value())
    self.assertEqual(-1, f.max_value())
    self.assertTrue(f.is_finite_somewhere())
    self.assertEqual(WeightFunction(g, { 'q1' : 1, 'q2' : INF }), f.shift(2))
    self.assertEqual(f, WeightFunction(g, f.to_dict()))
    self.assertEqual(hash(f), hash(WeightFunction(g, f.to_dict())))

    masked = WeightFunction.constant(g, [ 'q1', 'q2' ], INF)
    self.assertFalse(masked.is_finite_somewhere())
    self.assertIsNone(masked.min_value())

  def test_ext_add(self):
    self.assertIsNone(ext_add(BOTTOM, 3))
    self.assertEqual(INF, ext_add(INF, -5))
    self.assertEqual(-2, ext_add(-1, -1))
    self.assertEqual("+inf", render_value(INF))

  def test_preceq(self):
    g = self.fig1
    f = WeightFunction(g, { 'q1' : 0, 'q2' : INF })
    self.assertTrue(preceq(0, f, f))
    self.assertFalse(preceq(1, f, f))
    self.assertTrue(preceq(1, f, WeightFunction(g, { 'q1' : 1, 'q2' : INF })))
    self.assertFalse(preceq(0, f, WeightFunction(g, { 'q1' : 0, 'q2' : 5 })))
    self.assertTrue(preceq(0, WeightFunction(g, { 'q1' : 0, 'q2' : 5 }), f))
    self.assertFalse(preceq(0, f, WeightFunction(g, { 'q1' : 0 })))

  def test_successors(self):
    g = self.fig1
    f0 = WeightFunction(g, { 'q0' : 0 })
    self.assertEqual([ WeightFunction(g, { 'q1' : -1, 'q2' : -1 }) ],
        successors(g, f0, 'a'))

    f1 = WeightFunction(g, { 'q1' : -1, 'q2' : 4 })
    self.assertEqual([ WeightFunction(g, { 'q0' : -2 }),
                       WeightFunction(g, { 'q3' : 3 }) ],
        successors(g, f1, 'a'))
    self.assertEqual([ WeightFunction(g, { 'q0' : -2 }),
                       WeightFunction(g, { 'q0' : INF }),
                       WeightFunction(g, { 'q3' : 3 }),
                       WeightFunction(g, { 'q3' : INF }) ],
        successors(g, f1, 'a', MASKED))
    self.assertEqual(4, len(successors(g, f0, 'a', MASKED)))
    self.assertRaises(PreconditionException, successors, g, f0, 'a', 'bogus')

    self.assertEqual(WeightFunction(g, { 'q3' : 3 }),
        propagate(g, f1, 'a', [ 'q3' ]))
    self.assertIsNone(propagate(g, f1, 'a', [ 'q1' ]))

  def test_min_path_weights(self):
    g = self.fig1
    psi = AbstractPath([ [ 'q0' ], [ 'q1', 'q2' ], [ 'q0' ] ], [ 'a', 'b' ])
    self.assertEqual(WeightFunction(g, { 'q0' : -2 }),
        min_path_weights(g, psi, WeightFunction(g, { 'q0' : 0 })))
    self.assertRaises(PreconditionException, min_path_weights, g, psi,
        WeightFunction(g, { 'q1' : 0 }))
    bad = AbstractPath([ [ 'q0' ], [ 'q3' ] ], [ 'a' ])
    self.assertRaises(PreconditionException, min_path_weights, g, bad,
        WeightFunction(g, { 'q0' : 0 }))

  def test_min_path_weights_random(self):
    rng = random.Random(11)
    checked = 0
    for i in range(100):
      g = utils.random_limited_game(rng, n_states=6, max_weight=4)
      for j in range(10):
        psi = utils.random_abstract_path(rng, g, rng.randint(0, 6),
            rng.randrange(len(g.observations)))
        if psi is None:
          continue
        f0 = utils.random_function(rng, g, g.obs_index(psi.first))
        expected = utils.brute_min_path_weights(g, psi, f0)
        self.assertEqual(WeightFunction(g, expected),
            min_path_weights(g, psi, f0))
        checked += 1
    self.assertTrue(checked >= 500)


class TestCycles(unittest.TestCase):

  def test_fixed_cycles(self):
    fig1 = builtin_game('fig1')
    fig2 = builtin_game('fig2')
    swap = utils.game_from_text(utils.SWAP)

    rho = AbstractPath([ [ 'q0' ], [ 'q1', 'q2' ], [ 'q0' ] ], [ 'a', 'a' ])
    self.assertEqual((('q0',), { ('q0', 'q0') : -2 }), cycle_matrix(fig1, rho))
    self.assertEqual(-2, min_cycle_mean(fig1, rho))
    self.assertEqual(BAD, classify_cycle(fig1, rho))

    rho = AbstractPath([ [ 'q3' ], [ 'q3' ] ], [ 'a' ])
    self.assertEqual(GOOD, classify_cycle(fig1, rho))

    rho = AbstractPath([ [ 'q1', 'q2' ], [ 'q1', 'q2' ] ], [ 'a' ])
    self.assertEqual({ ('q1', 'q1') : 0, ('q2', 'q2') : -1 },
        cycle_matrix(fig2, rho)[1])
    self.assertEqual(BAD, classify_cycle(fig2, rho))

    rho = AbstractPath([ [ 'p', 'r' ], [ 'p', 'r' ] ], [ 'a' ])
    self.assertEqual(fractions.Fraction(-1, 2), min_cycle_mean(swap, rho))
    self.assertEqual(NEITHER, classify_cycle(swap, rho))

    self.assertRaises(PreconditionException, cycle_matrix, fig1,
        AbstractPath([ [ 'q0' ], [ 'q1', 'q2' ] ], [ 'a' ]))

  def test_karp(self):
    nodes = [ 1, 2, 3 ]
    edges = { (1, 2) : 4, (2, 3) : -2, (3, 1) : 1, (2, 1) : -5 }
    self.assertEqual(fractions.Fraction(-1, 2),
        karp_min_cycle_mean(nodes, edges))
    self.assertTrue(has_negative_cycle(nodes, edges))
    self.assertIsNone(karp_min_cycle_mean(nodes, { (1, 2) : 1 }))
    self.assertFalse(has_negative_cycle(nodes, { (1, 2) : -1, (2, 1) : 1 }))
    self.assertTrue(has_negative_cycle([ 1 ], { (1, 1) : -1 }))

  def _check_against_witness_search(self, rng, n_states, max_weight):
    seen = set()
    checked = 0
    while checked < 200:
      g = utils.random_limited_game(rng, n_states=n_states,
          max_weight=max_weight)
      rho = utils.random_abstract_cycle(rng, g)
      if rho is None:
        continue
      states = g.sorted_states(rho.first)
      matrix = utils.brute_cycle_matrix(g, rho)
      self.assertEqual(matrix, cycle_matrix(g, rho)[1])
      if utils.witness_search(states, matrix, 0, False):
        expected = GOOD
      elif utils.witness_search(states, matrix, 1, True):
        expected = BAD
      else:
        expected = NEITHER
      self.assertEqual(expected, classify_cycle(g, rho), rho.render(g))
      seen.add(expected)
      checked += 1
    self.assertTrue(GOOD in seen)
    self.assertTrue(BAD in seen)

  def test_classify_against_witness_search(self):
    self._check_against_witness_search(random.Random(3), 4, 1)

  def test_classify_against_witness_search_wide_weights(self):
    # Observations of at most two states keep the search small.
    self._check_against_witness_search(random.Random(31), 3, 4)

  def test_classify_against_concrete_cycles(self):
    rng = random.Random(17)
    seen = set()
    checked = 0
    while checked < 200:
      g = utils.random_limited_game(rng, n_states=4, max_weight=4)
      rho = utils.random_abstract_cycle(rng, g, max_length=3)
      if rho is None:
        continue
      expected = utils.brute_cycle_class(g, rho)
      self.assertEqual(expected, classify_cycle(g, rho), rho.render(g))
      seen.add(expected)
      checked += 1
    self.assertTrue(GOOD in seen)
    self.assertTrue(BAD in seen)


class TestOrders(unittest.TestCase):

  def setUp(self):
    self.rng = random.Random(5)

  def _function(self, g):
    obs = self.rng.randrange(len(g.observations))
    return WeightFunction(g, dict((q, INF if self.rng.random() < 0.2 else
        self.rng.randint(-4, 4)) for q in g.obs_states(obs)))

  def _above(self, g, f, k):
    """A random function f2 with f <=_k f2."""
    mapping = { }
    for q, v in f.items():
      if v == INF or self.rng.random() < 0.2:
        mapping[q] = INF
      else:
        mapping[q] = v + k + self.rng.randint(0, 2)
    return WeightFunction(g, mapping)

  def test_weakening_and_transitivity(self):
    g = utils.random_limited_game(self.rng, n_states=6, max_weight=4)
    chained = 0
    for i in range(1000):
      f1 = self._function(g)
      k, k2 = self.rng.randint(0, 3), self.rng.randint(0, 3)
      f2 = self._above(g, f1, k)
      f3 = self._above(g, f2, k2)
      for j in range(k + 1):
        self.assertTrue(preceq(j, f1, f2))
      self.assertTrue(preceq(k + k2, f1, f3))

      # Unrelated functions on one support.
      h1, h2, h3 = [ WeightFunction(g, dict((q, self.rng.randint(-2, 2))
                                            for q in f1.support))
                     for n in range(3) ]
      if preceq(k, h1, h2):
        for j in range(k + 1):
          self.assertTrue(preceq(j, h1, h2))
        if preceq(k2, h2, h3):
          self.assertTrue(preceq(k + k2, h1, h3))
          chained += 1
    self.assertTrue(chained > 0)

  def test_successors_keep_order(self):
    checked = 0
    for i in range(100):
      g = utils.random_limited_game(self.rng, n_states=5, max_weight=4)
      for j in range(10):
        f1 = self._function(g)
        k = self.rng.randint(0, 3)
        f2 = self._above(g, f1, k)
        for a in g.actions:
          proper = successors(g, f1, a)
          for s2 in successors(g, f2, a, MASKED):
            for s1 in proper:
              if s1.support == s2.support:
                self.assertTrue(preceq(k, s1, s2), (f1.render(), f2.render()))
                checked += 1
    self.assertTrue(checked >= 1000)


class TestCycleClasses(unittest.TestCase):

  def _cycles(self):
    """Random cycles of the corpus games, plus a bad and a good fig1 cycle."""
    fig1 = builtin_game('fig1')
    res = [ (fig1, AbstractPath([ [ 'q0' ], [ 'q1', 'q2' ], [ 'q0' ] ],
                                [ 'a', 'a' ])),
            (fig1, AbstractPath([ [ 'q3' ], [ 'q3' ] ], [ 'a' ])) ]
    rng = random.Random(13)
    for g in utils.corpus():
      for i in range(15):
        rho = utils.random_abstract_cycle(rng, g, max_length=3)
        if rho is not None:
          res.append((g, rho))
    return res

  def test_powers(self):
    seen = set()
    for g, rho in self._cycles():
      kind = classify_cycle(g, rho)
      seen.add(kind)
      if kind == GOOD:
        for k in range(1, 4):
          for path in gamma_enumerate(g, cycle_power(rho, k)):
            if path.first == path.last:
              self.assertTrue(utils.path_weight(g, path) >= 0, rho.render(g))
      elif kind == BAD:
        weights = [ utils.path_weight(g, path)
                    for k in range(1, len(rho.first) + 1)
                    for path in gamma_enumerate(g, cycle_power(rho, k))
                    if path.first == path.last ]
        self.assertTrue(any(w < 0 for w in weights), rho.render(g))
    self.assertTrue(GOOD in seen)
    self.assertTrue(BAD in seen)

  def test_rotations(self):
    for g, rho in self._cycles():
      kind = classify_cycle(g, rho)
      for rot in cyclic_permutations(rho):
        self.assertEqual(kind, classify_cycle(g, rot), rot.render(g))

  def test_interleaving_own_rotations(self):
    # Splicing k copies of the i-th rotation in at i gives rho^(k+1).
    for g, rho in self._cycles():
      kind = classify_cycle(g, rho)
      for i, rot in enumerate(cyclic_permutations(rho)):
        for k in (1, 2):
          spliced = interleave(rho, cycle_power(rot, k), i)
          self.assertEqual(cycle_power(rho, k + 1), spliced)
          if kind != NEITHER:
            self.assertEqual(kind, classify_cycle(g, spliced))

  def test_interleaving_mixed_cycles(self):
    g = utils.game_from_text(utils.MIXER)
    loops = dict((a, AbstractPath([ [ 'x', 'y' ], [ 'x', 'y' ] ], [ a ]))
                 for a in g.actions)
    self.assertEqual([ GOOD, GOOD, BAD, BAD ],
        [ classify_cycle(g, loops[a]) for a in 'abcd' ])
    self.assertEqual(BAD,
        classify_cycle(g, interleave(loops['a'], loops['b'], 0)))
    self.assertEqual(GOOD,
        classify_cycle(g, interleave(loops['c'], loops['d'], 0)))
