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

import io
import json
import os
import shutil
import tempfile
import unittest
from unittest import mock

from mpg_shell import mpgs
from mpg_solver.gamefile import load_game
from mpg_solver.generators import FIG1, FIG2, ZEROLOOP, builtin_game
from mpg_solver_tests import utils

PHI = "exists x\nclause x\n"

class TestMpgs(unittest.TestCase):

  def setUp(self):
    self.tmpdir = tempfile.mkdtemp()
    self.files = { }
    for name, text in (('fig1', FIG1), ('fig2', FIG2), ('zeroloop', ZEROLOOP),
                       ('twoview', utils.TWOVIEW), ('phi', PHI),
                       ('broken', "game g\nstates q\ninitial r\n")):
      self.files[name] = self._write(name, text)

  def tearDown(self):
    shutil.rmtree(self.tmpdir)

  def _write(self, name, text):
    path = os.path.join(self.tmpdir, name)
    with open(path, 'w') as f:
      f.write(text)
    return path

  def run_mpgs(self, *argv):
    """Runs the shell, returns (exit code, stdout, stderr)."""
    with mock.patch('sys.stdout', new_callable=io.StringIO) as out, \
        mock.patch('sys.stderr', new_callable=io.StringIO) as err:
      code = mpgs.main(list(argv))
    return code, out.getvalue(), err.getvalue()

  def test_validate(self):
    code, out, err = self.run_mpgs('validate', self.files['fig1'])
    self.assertEqual(mpgs.EXIT_OK, code)
    self.assertTrue("states: 4\n" in out)
    self.assertTrue("limited: true\n" in out)
    self.assertTrue("perfect-information: false\n" in out)

    code, out, err = self.run_mpgs('--json', 'validate',
        self.files['twoview'])
    data = json.loads(out)
    self.assertEqual('twoview', data['game'])
    self.assertFalse(data['limited'])
    self.assertFalse(data['perfect-information'])

    code, out, err = self.run_mpgs('--json', 'validate',
        self.files['zeroloop'])
    self.assertTrue(json.loads(out)['perfect-information'])

  def test_parse_errors(self):
    code, out, err = self.run_mpgs('validate', self.files['broken'])
    self.assertEqual(mpgs.EXIT_PARSE, code)
    self.assertEqual("error: Unknown state r (line 3)\n", err)

    path = self._write('huge', "game g\nstates q\ninitial q\nactions a\n" +
        "obs o = q\ntrans q a q 99999999999999999999\n")
    code, out, err = self.run_mpgs('validate', path)
    self.assertEqual(mpgs.EXIT_PARSE, code)
    self.assertTrue(err.endswith("(line 6)\n"))

    path = os.path.join(self.tmpdir, 'latin1')
    with open(path, 'wb') as f:
      f.write(b"game g\n# caf\xe9\n")
    code, out, err = self.run_mpgs('validate', path)
    self.assertEqual(mpgs.EXIT_PARSE, code)
    self.assertTrue(err.endswith("(line 2)\n"))

    code, out, err = self.run_mpgs('gen', 'expmem', 'many')
    self.assertEqual(mpgs.EXIT_INTERNAL, code)
    self.assertTrue(err.startswith("error: Expected an integer"))

  def test_solve(self):
    expected = [ ('fig1', mpgs.EXIT_ADAM), ('fig2', mpgs.EXIT_UNDECIDED),
                 ('zeroloop', mpgs.EXIT_OK), ('twoview', mpgs.EXIT_ADAM) ]
    for name, exit_code in expected:
      code, out, err = self.run_mpgs('solve', self.files[name])
      self.assertEqual(exit_code, code, name)

    code, out, err = self.run_mpgs('solve', self.files['fig1'])
    self.assertTrue("verdict: adam\n" in out)
    self.assertTrue("witness: adam strategy tree: 7 nodes" in out)

    code, out, err = self.run_mpgs('--json', 'solve', '--method', 'safety',
        self.files['fig2'])
    self.assertEqual(mpgs.EXIT_UNDECIDED, code)
    data = json.loads(out)
    self.assertEqual('adam', data['tag'])
    self.assertTrue(data['inconclusive'])
    self.assertEqual(6, data['witness']['cap'])

    code, out, err = self.run_mpgs('solve', '--method', 'gamma-bounded',
        '--depth', '2', self.files['fig1'])
    self.assertEqual(mpgs.EXIT_UNDECIDED, code)
    self.assertTrue("verdict: unknown\n" in out)

  def test_classify(self):
    code, out, err = self.run_mpgs('--json', 'classify', self.files['fig2'])
    self.assertEqual(mpgs.EXIT_UNDECIDED, code)
    data = json.loads(out)
    self.assertFalse(data['fac'])
    self.assertEqual("{q0:0} -a-> {q1:0, q2:0} -a-> {q1:0, q2:-1}",
        data['fac_witness'])

    code, out, err = self.run_mpgs('classify', self.files['twoview'])
    self.assertEqual(mpgs.EXIT_ADAM, code)
    self.assertTrue("belief: true\n" in out)

  def test_synth_and_verify(self):
    path = os.path.join(self.tmpdir, 'fig1.strategy')
    code, out, err = self.run_mpgs('synth', self.files['fig1'], '-o', path)
    self.assertEqual(mpgs.EXIT_ADAM, code)
    self.assertTrue("kind: adam-machine\n" in out)
    self.assertTrue("memory: 3\n" in out)

    code, out, err = self.run_mpgs('verify', self.files['fig1'], path)
    self.assertEqual(mpgs.EXIT_OK, code)
    self.assertTrue("valid: true\n" in out)

    code, out, err = self.run_mpgs('synth', '--positional',
        self.files['zeroloop'])
    self.assertEqual(mpgs.EXIT_OK, code)
    self.assertEqual("eve-positional\no -> a\n", out)

    code, out, err = self.run_mpgs('synth', self.files['fig2'])
    self.assertEqual(mpgs.EXIT_UNDECIDED, code)

    always_a = self._write('always-a',
        "eve-positional\no0 -> a\no12 -> a\no3 -> a\n")
    code, out, err = self.run_mpgs('verify', self.files['fig1'], always_a)
    self.assertEqual(mpgs.EXIT_UNDECIDED, code)
    self.assertTrue("valid: false\n" in out)

    broken = self._write('broken-strategy', "eve-positional\no9 -> a\n")
    code, out, err = self.run_mpgs('verify', self.files['fig1'], broken)
    self.assertEqual(mpgs.EXIT_PARSE, code)
    self.assertTrue("(line 2)" in err)

  def test_simulate(self):
    code, out, err = self.run_mpgs('--porcelain', 'simulate',
        self.files['fig2'], '--eve', 'triangular', '--adam', 'greedy',
        '--horizon', '20')
    self.assertEqual(mpgs.EXIT_OK, code)
    lines = out.splitlines()
    self.assertEqual(21, len(lines))
    self.assertEqual("20\tb\to3\t{q3:12}\t12\t3/5", lines[-1])

    code, out, err = self.run_mpgs('simulate', self.files['fig1'],
        '--eve', 'periodic::a', '--adam', 'synth', '--horizon', '6')
    self.assertEqual(mpgs.EXIT_OK, code)
    self.assertTrue("min: -6\n" in out)
    self.assertTrue("resets: 3\n" in out)

    code, out, err = self.run_mpgs('--json', 'simulate',
        self.files['zeroloop'], '--eve', 'safety', '--adam', 'random',
        '--horizon', '5')
    data = json.loads(out)
    self.assertEqual(5, len(data['steps']))
    self.assertEqual(0, data['steps'][-1]['mean'])

    code, out, err = self.run_mpgs('simulate', self.files['fig1'],
        '--eve', 'nope')
    self.assertEqual(mpgs.EXIT_INTERNAL, code)

  def test_gen(self):
    code, out, err = self.run_mpgs('gen', 'builtin', 'fig1')
    self.assertEqual(mpgs.EXIT_OK, code)
    self.assertEqual(builtin_game('fig1'), load_game(out))

    path = os.path.join(self.tmpdir, 'qbf.game')
    code, out, err = self.run_mpgs('gen', 'qbf', self.files['phi'],
        '--variant', 'winner', '-o', path)
    self.assertEqual(mpgs.EXIT_OK, code)
    code, out, err = self.run_mpgs('solve', path)
    self.assertEqual(mpgs.EXIT_OK, code)

    code, out, err = self.run_mpgs('gen', 'expmem', '1')
    self.assertEqual('expmem-1', load_game(out).name)

  def test_partial_game_pipeline(self):
    # synth, verify and simulate all work on the belief game.
    path = os.path.join(self.tmpdir, 'twoview.strategy')
    code, out, err = self.run_mpgs('synth', self.files['twoview'], '-o', path)
    self.assertEqual(mpgs.EXIT_ADAM, code)
    self.assertTrue("belief: true\n" in out)

    code, out, err = self.run_mpgs('verify', self.files['twoview'], path)
    self.assertEqual(mpgs.EXIT_OK, code, err)
    self.assertTrue("valid: true\n" in out)
    self.assertTrue("belief: true\n" in out)

    code, out, err = self.run_mpgs('--porcelain', 'simulate',
        self.files['twoview'], '--eve', 'periodic::a', '--adam', 'synth',
        '--horizon', '4')
    self.assertEqual(mpgs.EXIT_OK, code, err)
    lines = out.splitlines()
    self.assertEqual(5, len(lines))
    self.assertEqual("1\ta\t{q2}\t{q2@{q2}:0}\t0\t0", lines[1])

  def test_belief_and_dot(self):
    code, out, err = self.run_mpgs('belief', self.files['twoview'])
    self.assertEqual(mpgs.EXIT_OK, code)
    self.assertTrue("obs {q0,q1} = q0@{q0,q1} q1@{q0,q1}\n" in out)

    code, out, err = self.run_mpgs('dot', self.files['fig1'])
    self.assertTrue(out.startswith('digraph "fig1" {'))
