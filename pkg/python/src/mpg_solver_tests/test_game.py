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
import os
import shutil
import tempfile
import unittest

from mpg_solver.errors import GameFormatException, GameValidationException, \
    PreconditionException, WeightOverflowException
from mpg_solver.game import *
from mpg_solver.gamefile import dump_game, load_game, load_game_file, \
    read_text, to_dot
from mpg_solver.generators import builtin_game
from mpg_solver.paths import ConcretePath
from mpg_solver_tests import utils

class TestGame(unittest.TestCase):

  def setUp(self):
    self.fig1 = builtin_game('fig1')

  def test_structure(self):
    g = self.fig1
    self.assertEqual(('q0', 'q1', 'q2', 'q3'), g.states)
    self.assertEqual(('a', 'b'), g.actions)
    self.assertEqual(('o0', 'o12', 'o3'), g.obs_names)
    self.assertEqual(1, g.obs_of('q2'))
    self.assertEqual(1, g.obs_index([ 'q2', 'q1' ]))
    self.assertEqual(('q1', 'q2'), g.obs_states(1))
    self.assertEqual(2, g.obs_by_name('o3'))
    self.assertEqual(0, g.initial_obs)
    self.assertEqual((('q0', -1),), g.successors('q1', 'a'))
    self.assertEqual(1, g.weight('q3', 'b', 'q3'))
    self.assertFalse(g.has_transition('q1', 'a', 'q3'))
    self.assertEqual(1, g.max_abs_weight())
    self.assertFalse(is_perfect_information(g))
    self.assertTrue(is_perfect_information(builtin_game('zeroloop')))

    with self.assertRaises(PreconditionException):
      g.obs_index([ 'q0', 'q1' ])
    with self.assertRaises(GameValidationException):
      g.obs_by_name('nope')

  def test_post_and_limited(self):
    g = self.fig1
    self.assertEqual(frozenset([ 'q0', 'q3' ]),
        post_sigma(g, [ 'q1', 'q2' ], 'a'))
    self.assertTrue(is_union_of_observations(g, [ 'q0', 'q1', 'q2' ]))
    self.assertFalse(is_union_of_observations(g, [ 'q0', 'q1' ]))
    self.assertEqual((True, None), check_limited(g))
    require_limited(g)
    self.assertEqual([ 0, 2 ], admissible_observations(g, 1, 'a'))
    self.assertEqual([ 1 ], admissible_observations(g, 0, 'b'))
    self.assertEqual([ 0, 1, 2 ], reachable_observations(g))
    with self.assertRaises(PreconditionException):
      post_sigma(g, [ 'q0' ], 'c')

  def test_not_limited(self):
    g = utils.game_from_text(utils.TWOVIEW)
    limited, witness = check_limited(g)
    self.assertFalse(limited)
    self.assertEqual((frozenset([ 'q0', 'q1' ]), None), witness)
    self.assertRaises(PreconditionException, require_limited, g)

    # {q0} is an observation, but q0 -a-> only reaches half of {q1,q2}.
    g = Game('half', [ 'q0', 'q1', 'q2' ], 'q0', [ 'a' ],
        [ ('q0', 'a', 'q1', 0), ('q1', 'a', 'q1', 0), ('q2', 'a', 'q2', 0) ],
        [ [ 'q0' ], [ 'q1', 'q2' ] ])
    self.assertEqual((False, (frozenset([ 'q0' ]), 'a')), check_limited(g))

  def test_validation(self):
    obs = [ [ 'q0' ], [ 'q1' ] ]
    good = [ ('q0', 'a', 'q1', 0), ('q1', 'a', 'q0', 0) ]
    Game('ok', [ 'q0', 'q1' ], 'q0', [ 'a' ], good, obs)

    cases = [
      # Not total.
      ([ 'q0', 'q1' ], 'q0', [ 'a' ], good[:1], obs),
      # Conflicting weights.
      ([ 'q0', 'q1' ], 'q0', [ 'a' ], good + [ ('q0', 'a', 'q1', 1) ], obs),
      # Duplicate state.
      ([ 'q0', 'q0' ], 'q0', [ 'a' ], good, obs),
      # State in two observations.
      ([ 'q0', 'q1' ], 'q0', [ 'a' ], good, [ [ 'q0', 'q1' ], [ 'q1' ] ]),
      # State in no observation.
      ([ 'q0', 'q1' ], 'q0', [ 'a' ], good, [ [ 'q0' ] ]),
      # Unknown initial state.
      ([ 'q0', 'q1' ], 'q9', [ 'a' ], good, obs),
      # Unknown action.
      ([ 'q0', 'q1' ], 'q0', [ 'a' ], good + [ ('q0', 'b', 'q1', 0) ], obs),
      # Non-integer weight.
      ([ 'q0', 'q1' ], 'q0', [ 'a' ], [ ('q0', 'a', 'q1', 0.5),
                                        ('q1', 'a', 'q0', 0) ], obs),
    ]
    for states, initial, actions, trans, observations in cases:
      self.assertRaises(GameValidationException, Game, 'bad', states,
          initial, actions, trans, observations)

    # Exact duplicates are merged.
    g = Game('dup', [ 'q0', 'q1' ], 'q0', [ 'a' ], good + good[:1], obs)
    self.assertEqual(2, len(g.transitions))

  def test_checked_arithmetic(self):
    self.assertEqual(INT64_MAX, checked_add(INT64_MAX - 1, 1))
    self.assertRaises(WeightOverflowException, checked_add, INT64_MAX, 1)
    self.assertRaises(WeightOverflowException, checked_mul, INT64_MIN, 2)
    self.assertRaises(WeightOverflowException, Game, 'big', [ 'q' ], 'q',
        [ 'a' ], [ ('q', 'a', 'q', INT64_MAX + 1) ], [ [ 'q' ] ])

  def test_payoff_prefix(self):
    g = self.fig1
    path = ConcretePath([ 'q0', 'q2', 'q3', 'q3' ], [ 'a', 'a', 'b' ])
    self.assertEqual(-1, payoff_prefix(g, path))
    self.assertEqual(0, payoff_prefix(g, ConcretePath([ 'q0' ])))
    self.assertRaises(PreconditionException, payoff_prefix, g,
        ConcretePath([ 'q0', 'q3' ], [ 'a' ]))

  def test_shift_threshold(self):
    g = shift_threshold(self.fig1, fractions.Fraction(1, 2))
    self.assertEqual(-3, g.weight('q0', 'a', 'q1'))
    self.assertEqual(1, g.weight('q3', 'a', 'q3'))
    g = shift_threshold(self.fig1, -1)
    self.assertEqual(0, g.weight('q1', 'a', 'q0'))
    self.assertEqual(2, g.weight('q3', 'a', 'q3'))
    self.assertEqual(self.fig1.observations, g.observations)

  def test_transition_groups(self):
    groups = transition_groups(self.fig1)
    self.assertEqual((('q0', 'q1', -1), [ 'a', 'b' ]), groups[0])
    self.assertEqual(7, len(groups))
    self.assertEqual(len(self.fig1.transitions),
        sum(len(actions) for key, actions in groups))


class TestGameFile(unittest.TestCase):

  def test_roundtrip(self):
    for g in utils.corpus():
      self.assertEqual(g, load_game(dump_game(g)))

  def test_files(self):
    tmpdir = tempfile.mkdtemp()
    try:
      path = os.path.join(tmpdir, 'fig1.game')
      text = "# f\u00efg 1\n" + dump_game(builtin_game('fig1'))
      with open(path, 'wb') as f:
        f.write(text.encode('utf-8'))
      self.assertEqual(builtin_game('fig1'), load_game_file(path))

      with open(path, 'wb') as f:
        f.write(b"game g\nstates q\n# \xff\n")
      try:
        read_text(path)
        self.fail("Expected a format error")
      except GameFormatException as e:
        self.assertEqual(3, e.line)
    finally:
      shutil.rmtree(tmpdir)

  def test_wildcard(self):
    g = builtin_game('fig1')
    self.assertEqual(-1, g.weight('q0', 'b', 'q2'))
    self.assertEqual('fig1', g.name)

  def test_errors(self):
    base = "game g\nstates q\ninitial q\nactions a\nobs o = q\n"
    cases = [
      (base + "trans q c q 0\n", 6),
      (base + "trans q a q x\n", 6),
      (base + "trans q a r 0\n", 6),
      (base + "trans q a q\n", 6),
      (base + "trans q a q 9223372036854775808\n", 6),
      (base + "bogus\n", 6),
      ("states q\ngame g\ngame h\n", 3),
      ("initial q\n", 1),
      ("game g\nstates q\nobs o q\n", 3),
      ("game g\nstates q\ninitial q\nactions a\n", 4),
    ]
    for text, line in cases:
      try:
        load_game(text)
        self.fail("Expected a format error: %r" % (text,))
      except GameFormatException as e:
        self.assertEqual(line, e.line)
        self.assertTrue(str(e).endswith("(line %d)" % (line,)))

    # Well-formed but invalid: the relation is not total.
    self.assertRaises(GameValidationException, load_game,
        "game g\nstates q r\ninitial q\nactions a\nobs o = q r\n"
        "trans q a r 0\n")

  def test_dot(self):
    dot = to_dot(builtin_game('fig1'))
    self.assertTrue(dot.startswith('digraph "fig1" {'))
    self.assertTrue('subgraph "cluster_1"' in dot)
    self.assertTrue('label="o12"; style=dashed;' in dot)
    self.assertTrue('"__init" -> "q0";' in dot)
    self.assertTrue('"q1" -> "q0" [label="a,-1"];' in dot)
