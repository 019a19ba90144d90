#!/usr/bin/env python
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

import argparse
import json
import logging
import sys

from prettytable import PrettyTable

from mpg_solver.belief import build_belief_game
from mpg_solver.classifier import classify
from mpg_solver.cyclegame import METHOD_GAMMA_BOUNDED, METHOD_GAMMA_PRIME, \
    solve_gamma_bounded, solve_gamma_prime
from mpg_solver.errors import GameFormatException, GameValidationException, \
    PreconditionException, WeightOverflowException
from mpg_solver.game import check_limited, is_perfect_information
from mpg_solver.gamefile import dump_game, load_game_file, read_text, to_dot
from mpg_solver.generators import BUILTIN_GAMES, MEMBERSHIP, WINNER, \
    builtin_game, gen_expmem, gen_hamiltonian, gen_qbf, load_graph
from mpg_solver.qbf import load_qbf
from mpg_solver.safety import METHOD_SAFETY, ClampedStrategy, solve_safety, \
    winner_partial
from mpg_solver.simulator import POLICY_FIRST, ConcreteAdversary, \
    GreedyMinAdversary, RandomAdversary, ScriptedStrategy, StrategyAdversary, \
    simulate
from mpg_solver.strategy import extract_adam_machine, extract_eve_machine, \
    search_positional_fac, verify_machine, verify_positional
from mpg_solver.strategyfile import dump_strategy, load_strategy
from mpg_solver.types import ADAM, EVE, NEITHER, UNKNOWN
from mpg_solver.weights import MODES, PROPER

# Config
CONFIG = {'output_type': 'table', 'jobs': 1}

# Exit codes
EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PARSE = 2
EXIT_ADAM = 10
EXIT_UNDECIDED = 20

VERDICT_EXITS = {
    EVE: EXIT_OK,
    ADAM: EXIT_ADAM,
    NEITHER: EXIT_UNDECIDED,
    UNKNOWN: EXIT_UNDECIDED,
}

LOG = logging.getLogger('mpgs')


def verdict_exit(verdict):
    if verdict.inconclusive:
        return EXIT_UNDECIDED
    return VERDICT_EXITS[verdict.tag]


def render(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if value is None:
        return '-'
    if hasattr(value, 'render'):
        return value.render()
    return str(value)


def generate_output(pairs, headers=None, rows=None, obj=None):
    """
    Prints 'key: value' lines, followed by a table in the default output
    mode. In json mode, prints the JSON encoding of 'obj' (or of the pairs).
    """
    if CONFIG['output_type'] == 'json':
        if obj is not None:
            data = obj.to_json_dict()
        else:
            data = dict((k, v if isinstance(v, (bool, int, type(None)))
                         else render(v)) for k, v in pairs)
        print(json.dumps(data, sort_keys=True))
        return

    for k, v in pairs:
        print("%s: %s" % (k, render(v)))

    if CONFIG['output_type'] == 'table' and headers:
        table = PrettyTable(headers)
        for h in headers:
            table.align[h] = 'l'
        for r in rows:
            table.add_row(r)
        print(table)


def write_output(text, path):
    if path:
        with open(path, 'w', encoding='utf-8') as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def limited_target(g):
    """The game itself if limited, its belief game otherwise."""
    if check_limited(g)[0]:
        return g, False
    return build_belief_game(g), True


def verdict_pairs(verdict):
    pairs = [('verdict', verdict.tag),
             ('method', verdict.method),
             ('inconclusive', bool(verdict.inconclusive))]
    if verdict.witness is not None and hasattr(verdict.witness, 'render'):
        pairs.append(('witness', verdict.witness.render()))
    return pairs


#
# Subcommands. Each returns the exit code.
#

def do_validate(args):
    g = load_game_file(args.game)
    limited = check_limited(g)[0]
    generate_output([('valid', True),
                     ('game', g.name),
                     ('states', len(g.states)),
                     ('actions', len(g.actions)),
                     ('observations', len(g.observations)),
                     ('limited', limited),
                     ('perfect-information', is_perfect_information(g))])
    return EXIT_OK


def do_belief(args):
    g = load_game_file(args.game)
    belief = build_belief_game(g)
    write_output(dump_game(belief), args.output)
    if args.output:
        generate_output([('states', len(belief.states)),
                         ('observations', len(belief.observations))])
    return EXIT_OK


def do_classify(args):
    g = load_game_file(args.game)
    res = classify(g, args.mode, args.depth, jobs=CONFIG['jobs'])
    generate_output([('limited', res.limited),
                     ('belief', res.belief),
                     ('visible-weights', res.visible_weights),
                     ('fac', res.fac),
                     ('fac-witness', res.fac_witness),
                     ('forcibly-fac', res.forcibly_fac),
                     ('verdict', res.verdict.tag),
                     ('terminating', res.terminating),
                     ('depth', res.depth)], obj=res)
    return verdict_exit(res.verdict)


def do_solve(args):
    g = load_game_file(args.game)
    if args.method == METHOD_SAFETY:
        verdict = winner_partial(g, check=not args.no_check,
                                 jobs=CONFIG['jobs'])
    else:
        target, belief = limited_target(g)
        if args.method == METHOD_GAMMA_BOUNDED:
            depth = args.depth or len(target.observations) + 1
            verdict = solve_gamma_bounded(target, depth, args.mode,
                                          CONFIG['jobs'])
        else:
            verdict = solve_gamma_prime(target, args.mode, CONFIG['jobs'])
    generate_output(verdict_pairs(verdict), obj=verdict)
    return verdict_exit(verdict)


def synthesize(g, positional=False):
    """
    A winning strategy of g, or None when neither player wins the
    simple-support cycle-forming game.
    """
    if positional:
        return search_positional_fac(g)
    verdict = solve_gamma_prime(g, PROPER, CONFIG['jobs'])
    if verdict.tag == EVE:
        return extract_eve_machine(g, verdict.witness)
    if verdict.tag == ADAM:
        return extract_adam_machine(g, verdict.witness)
    return None


def do_synth(args):
    g, belief = limited_target(load_game_file(args.game))
    strategy = synthesize(g, args.positional)
    if strategy is None:
        generate_output([('verdict', NEITHER), ('strategy', None)])
        return EXIT_UNDECIDED
    write_output(dump_strategy(strategy, g), args.output)
    if args.output:
        generate_output([('owner', strategy.owner),
                         ('kind', strategy.kind),
                         ('memory', len(strategy)),
                         ('belief', belief)])
    return VERDICT_EXITS[strategy.owner]


def do_verify(args):
    g, belief = limited_target(load_game_file(args.game))
    strategy = load_strategy(g, read_text(args.strategy))
    if strategy.kind.endswith('positional'):
        valid, counterexample = verify_positional(g, strategy)
    else:
        valid, counterexample = verify_machine(g, strategy)
    generate_output([('valid', valid),
                     ('owner', strategy.owner),
                     ('counterexample', counterexample),
                     ('belief', belief)])
    return EXIT_OK if valid else EXIT_UNDECIDED


def _actions(text):
    return [a for a in text.split(',') if a]


def make_eve(g, spec):
    kind, _, rest = spec.partition(':')
    if kind == 'triangular':
        if rest:
            a, b = _actions(rest)
            return ScriptedStrategy.triangular(a, b)
        return ScriptedStrategy.triangular(g.actions[0], g.actions[-1])
    if kind == 'periodic':
        prefix, _, period = rest.partition(':')
        return ScriptedStrategy.periodic(_actions(prefix), _actions(period))
    if kind == 'file':
        strategy = load_strategy(g, read_text(rest))
    elif kind == 'synth':
        strategy = synthesize(g)
    elif kind == 'safety':
        return ClampedStrategy(g, solve_safety(g, check_forcibly=False))
    else:
        raise PreconditionException("Unknown Eve strategy", spec)
    if strategy is None or strategy.owner != EVE:
        raise PreconditionException("Not an Eve strategy", spec)
    return strategy


def make_adam(g, spec, seed):
    kind, _, rest = spec.partition(':')
    if kind == 'greedy':
        return GreedyMinAdversary()
    if kind == 'random':
        return RandomAdversary(seed)
    if kind == 'concrete':
        return ConcreteAdversary(g, rest or POLICY_FIRST, seed)
    if kind == 'file':
        strategy = load_strategy(g, read_text(rest))
    elif kind == 'synth':
        strategy = synthesize(g)
    else:
        raise PreconditionException("Unknown Adam strategy", spec)
    if strategy is None or strategy.owner != ADAM:
        raise PreconditionException("Not an Adam strategy", spec)
    return StrategyAdversary(strategy)


def do_simulate(args):
    g, belief = limited_target(load_game_file(args.game))
    eve = make_eve(g, args.eve)
    adam = make_adam(g, args.adam, args.seed)
    trace = simulate(g, eve, adam, args.horizon)
    if CONFIG['output_type'] == 'porcelain':
        sys.stdout.write(trace.to_tsv())
        return EXIT_OK
    rows = [[s.step, s.action, s.observation, s.function, s.min, s.mean,
             'r' if s.reset else ''] for s in trace.steps]
    generate_output([('horizon', trace.horizon),
                     ('min', trace.min_value),
                     ('final-mean', trace.final_mean),
                     ('resets', trace.resets),
                     ('belief', belief)],
                    ['step', 'action', 'observation', 'function', 'min',
                     'mean', 'reset'], rows, obj=trace)
    return EXIT_OK


def do_gen(args):
    if args.kind == 'qbf':
        g = gen_qbf(load_qbf(read_text(args.arg)), args.variant)
    elif args.kind == 'hamilton':
        g = gen_hamiltonian(load_graph(read_text(args.arg)))
    elif args.kind == 'expmem':
        try:
            n = int(args.arg)
        except ValueError:
            raise PreconditionException("Expected an integer", args.arg)
        g = gen_expmem(n)
    else:
        g = builtin_game(args.arg)
    write_output(dump_game(g), args.output)
    return EXIT_OK


def do_dot(args):
    write_output(to_dot(load_game_file(args.game)), args.output)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog='mpgs',
        description='Mean-payoff games with partial observation')
    parser.add_argument('--porcelain', action='store_const',
                        dest='output_type', const='porcelain')
    parser.add_argument('--json', action='store_const', dest='output_type',
                        const='json')
    parser.add_argument('-j', '--jobs', action='store', dest='jobs', type=int,
                        default=1)
    parser.add_argument('-v', '--verbose', action='count', dest='verbose',
                        default=0)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    p = sub.add_parser('validate', help='check a game file')
    p.add_argument('game')
    p.set_defaults(func=do_validate)

    p = sub.add_parser('belief', help='write the belief game')
    p.add_argument('game')
    p.add_argument('-o', '--output', dest='output')
    p.set_defaults(func=do_belief)

    p = sub.add_parser('classify', help='class membership report')
    p.add_argument('game')
    p.add_argument('--mode', choices=MODES, default=PROPER)
    p.add_argument('--depth', type=int)
    p.set_defaults(func=do_classify)

    p = sub.add_parser('solve', help='decide the winner')
    p.add_argument('game')
    p.add_argument('--method', default=METHOD_GAMMA_PRIME,
                   choices=(METHOD_GAMMA_PRIME, METHOD_GAMMA_BOUNDED,
                            METHOD_SAFETY))
    p.add_argument('--mode', choices=MODES, default=PROPER)
    p.add_argument('--depth', type=int)
    p.add_argument('--no-check', action='store_true', dest='no_check')
    p.set_defaults(func=do_solve)

    p = sub.add_parser('synth', help='write a winning strategy')
    p.add_argument('game')
    p.add_argument('-o', '--output', dest='output')
    p.add_argument('--positional', action='store_true')
    p.set_defaults(func=do_synth)

    p = sub.add_parser('verify', help='check a strategy file')
    p.add_argument('game')
    p.add_argument('strategy')
    p.set_defaults(func=do_verify)

    p = sub.add_parser('simulate', help='play a strategy against Adam')
    p.add_argument('game')
    p.add_argument('--eve', required=True)
    p.add_argument('--adam', default='greedy')
    p.add_argument('--horizon', type=int, default=20)
    p.add_argument('--seed', type=int, default=0)
    p.set_defaults(func=do_simulate)

    p = sub.add_parser('gen', help='generate a game')
    p.add_argument('kind', choices=('qbf', 'hamilton', 'expmem', 'builtin'))
    p.add_argument('arg', help='formula file, graph file, n or ' +
                   '|'.join(BUILTIN_GAMES))
    p.add_argument('--variant', choices=(MEMBERSHIP, WINNER),
                   default=MEMBERSHIP)
    p.add_argument('-o', '--output', dest='output')
    p.set_defaults(func=do_gen)

    p = sub.add_parser('dot', help='Graphviz export')
    p.add_argument('game')
    p.add_argument('-o', '--output', dest='output')
    p.set_defaults(func=do_dot)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)

    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level,
                        format='%(levelname)s %(name)s: %(message)s')

    CONFIG['output_type'] = args.output_type or 'table'
    CONFIG['jobs'] = max(1, args.jobs)

    try:
        return args.func(args)
    except (GameFormatException, GameValidationException,
            WeightOverflowException) as e:
        sys.stderr.write("error: %s\n" % (e,))
        return EXIT_PARSE
    except Exception as e:
        LOG.debug("Command failed", exc_info=True)
        sys.stderr.write("error: %s\n" % (e,))
        return EXIT_INTERNAL

if __name__ == "__main__":
    sys.exit(main())
