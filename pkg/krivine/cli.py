# coding: utf-8

# Copyright 2018 LINE Corporation
#
# LINE Corporation licenses this file to you under the Apache License,
# version 2.0 (the "License"); you may not use this file except in compliance
# with the License. You may obtain a copy of the License at:
#
#   https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
# WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
# License for the specific language governing permissions and limitations
# under the License.

from __future__ import division, print_function, absolute_import

import argparse
import io
import logging
import sys
from logging import getLogger

from krivine.core.lambda_c import (Push, Process, ParseError, UnknownCombinator, combinator, free_vars, substitute,
                                   parse_term, parse_stack, parse_process)
from krivine.core.kam import reduce
from krivine.core.names import NameUniverse
from krivine.core.formulas import NameConst, constants, format_name_expr, parse_formula, parse_name_exprs
from krivine.core.algebra import (AlgebraError, BoolAlg, TauContext, tau, forcing_value, load_algebra,
                                  ba_delta_cc, algebra_delta_chain_condition, uniform_delta_chain_condition)
from krivine.verifier import Realizes, VerifierConfig, TRACE_ABBREVIATIONS
from krivine.corpus import CorpusError, PASS, parse_corpus, verify_corpus, read_corpus, load_shipped_corpus

logger = getLogger(__name__)

__all__ = ['run', 'main']


class UsageError(Exception):
    """ The command line does not parse or asks for something undefined. """
    pass


class _Parser(argparse.ArgumentParser):

    def error(self, message):
        raise UsageError(message)


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("not an integer: {}".format(text))
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive: {}".format(text))
    return value


def _expand(term):
    """Replace free identifiers naming library combinators; other free variables stay."""
    for name in sorted(free_vars(term)):
        try:
            value = combinator(name)
        except UnknownCombinator:
            continue
        term = substitute(term, name, value)
    return term


def _expand_stack(stack):
    if isinstance(stack, Push):
        return Push(_expand(stack.term), _expand_stack(stack.stack))
    return stack


def _read_expression(text):
    """A process, a stack or a term, tried in that order."""
    for parser in (parse_process, parse_stack):
        try:
            parsed = parser(text)
        except ParseError:
            continue
        if isinstance(parsed, Process):
            return Process(_expand(parsed.head), _expand_stack(parsed.stack))
        return _expand_stack(parsed)
    return _expand(parse_term(text))


def _config(args):
    return VerifierConfig(fuel=args.fuel, induction=not args.no_induction, kpi=not args.no_kpi,
                          nested_intro=args.nested_intro)


def _write(out, lines):
    for line in lines:
        out.write(line)
        out.write(u'\n')


def _cmd_reduce(args, out):
    process = Process(_expand(parse_term(args.term)), _expand_stack(parse_stack(args.stack)))
    trace = reduce(process, args.fuel)
    _write(out, trace.render(TRACE_ABBREVIATIONS if args.abbrev else None))
    _write(out, ['status: {}'.format(trace.status)])
    return 0


def _cmd_tau(args, out):
    ctx = TauContext.for_algebra(load_algebra(args.algebra))
    _write(out, [str(tau(_read_expression(args.expression), ctx))])
    return 0


def _universe(spec, phi):
    if spec is None:
        return None
    text = read_corpus(spec[1:]) if spec.startswith('@') else spec
    exprs = parse_name_exprs(text.strip())
    if not all(isinstance(expr, NameConst) for expr in exprs):
        raise UsageError("universe members must be closed names: {}".format(', '.join(format_name_expr(e) for e in exprs)))
    return NameUniverse.closure([expr.name for expr in exprs] + sorted(constants(phi), key=lambda name: name.key))


def _cmd_force(args, out):
    ctx = TauContext.for_algebra(load_algebra(args.algebra))
    phi = parse_formula(args.formula)
    _write(out, [str(forcing_value(phi, _universe(args.universe, phi), ctx))])
    return 0


def _braced(elements):
    return '{' + ','.join(elements) + '}'


def _cmd_chain_check(args, out):
    if (args.atoms is None) == (args.algebra is None):
        raise UsageError("give exactly one of --atoms and --algebra")
    algebra = BoolAlg.powerset(args.atoms) if args.atoms is not None else load_algebra(args.algebra)
    ctx = TauContext.for_algebra(algebra)
    lines = []
    for delta in args.delta:
        lines.append('delta {}'.format(delta))
        verdict = ba_delta_cc(algebra, delta)
        lines.append('delta-cc: PASS' if verdict.holds else 'delta-cc: FAIL witness={}'.format(_braced(verdict.witness)))
        verdict = algebra_delta_chain_condition(ctx, delta)
        if verdict.holds:
            lines.append('algebra-cc: PASS')
        else:
            context, sequence = verdict.witness
            lines.append('algebra-cc: FAIL c={} sequence={}'.format(context, _braced(sequence)))
        verdict = uniform_delta_chain_condition(ctx, delta)
        lines.append('uniform-cc: {}'.format('PASS' if verdict.holds else 'FAIL'))
    _write(out, lines)
    return 0


def _cmd_verify(args, out):
    config = _config(args)
    lemma_text = read_corpus(args.lemma_corpus) if args.lemma_corpus else u''
    lemma_goals = parse_corpus(lemma_text)
    ident = _fresh_ident(u'claim', set(goal.ident for goal in lemma_goals))
    block = [u'goal {} expect accept'.format(ident)]
    if args.universe:
        block.append(u'universe ' + args.universe)
    block.extend(u'hyp ' + hypothesis for hypothesis in args.hyp)
    block.append(u'claim ' + args.claim)
    cited = _accepted_lemmas(lemma_goals, config)
    if cited:
        block.append(u'using lemma ' + ', '.join(cited))
    if args.induction:
        block.append(u'using induction')
    report = verify_corpus(lemma_text + u'\n' + u'\n'.join(block), config)
    entry = report.entries[-1]
    _write(out, [u'{} {}'.format('accepted' if entry.accepted else 'rejected', entry.steps)])
    if entry.reason:
        _write(out, [u'reason: {}'.format(entry.reason)])
    if args.trace and entry.trace is not None:
        _write(out, entry.trace.lines())
    return 0 if entry.status == PASS else 1


def _accepted_lemmas(goals, config):
    """Idents of the ``realizes`` goals the corpus accepts, in file order."""
    if not goals:
        return []
    report = verify_corpus(goals, config)
    return [goal.ident for goal, entry in zip(goals, report.entries)
            if entry.accepted and isinstance(goal.goal.judgement, Realizes)]


def _fresh_ident(base, taken):
    ident, n = base, 0
    while ident in taken:
        n += 1
        ident = u'{}_{}'.format(base, n)
    return ident


def _cmd_corpus(args, out):
    text = read_corpus(args.file) if args.file else load_shipped_corpus()
    report = verify_corpus(text, _config(args))
    lines = report.trace_lines() if args.trace else report.lines()
    if args.output:
        with io.open(args.output, 'w', encoding='utf-8') as f:
            _write(f, lines)
    else:
        _write(out, lines)
    return 0 if report.success else 1


def _build_parser():
    common = _Parser(add_help=False)
    common.add_argument('--fuel', type=_positive, default=10000, help='machine steps per reduction or goal')
    common.add_argument('--verbose', action='store_true', help='log to stderr')

    search = _Parser(add_help=False)
    search.add_argument('--no-kpi', action='store_true', help='disable the continuation shortcut')
    search.add_argument('--no-induction', action='store_true', help='disable rank induction')
    search.add_argument('--nested-intro', action='store_true', help='re-introduce closed realizers met inside a proof')
    search.add_argument('--trace', action='store_true', help='print proof traces')

    parser = _Parser(prog='krivine', description='Classical realizability toolkit')
    commands = parser.add_subparsers(dest='command', parser_class=_Parser)
    commands.required = True

    reduce_ = commands.add_parser('reduce', parents=[common], help='run the machine')
    reduce_.add_argument('term')
    reduce_.add_argument('--stack', default='w_pi')
    reduce_.add_argument('--abbrev', action='store_true', help='print known combinators by name')
    reduce_.set_defaults(handler=_cmd_reduce)

    tau_ = commands.add_parser('tau', parents=[common], help='evaluate the tau map')
    tau_.add_argument('expression')
    tau_.add_argument('--algebra', required=True)
    tau_.set_defaults(handler=_cmd_tau)

    force = commands.add_parser('force', parents=[common], help='evaluate a forcing value')
    force.add_argument('formula')
    force.add_argument('--algebra', required=True)
    force.add_argument('--universe', help='comma separated names, or @FILE')
    force.set_defaults(handler=_cmd_force)

    chain = commands.add_parser('chain-check', parents=[common], help='decide chain conditions')
    chain.add_argument('--atoms', type=_positive)
    chain.add_argument('--algebra')
    chain.add_argument('--delta', type=int, nargs='+', required=True)
    chain.set_defaults(handler=_cmd_chain_check)

    verify = commands.add_parser('verify', parents=[common, search], help='check one claim')
    verify.add_argument('claim', help="e.g. 'realizes cc : ((A -> B) -> A) -> A'")
    verify.add_argument('--universe')
    verify.add_argument('--hyp', action='append', default=[], help="e.g. 'realizer u : A'")
    verify.add_argument('--lemma-corpus')
    verify.add_argument('--induction', action='store_true', help='prove by rank induction')
    verify.set_defaults(handler=_cmd_verify)

    corpus = commands.add_parser('corpus', parents=[common, search], help='check a corpus file')
    corpus.add_argument('file', nargs='?', help='the shipped corpus when omitted')
    corpus.add_argument('--output')
    corpus.set_defaults(handler=_cmd_corpus)
    return parser


def run(argv, out=None):
    """Run one command.

    :param list argv: arguments without the program name
    :param out: text stream for results, stdout when None
    :return: exit status: 0 on success, 1 when a goal misses its expectation, 2 on errors
    """
    out = out or sys.stdout
    try:
        args = _build_parser().parse_args(argv)
        if args.verbose:
            logging.basicConfig(level=logging.DEBUG, format='%(levelname)s %(name)s: %(message)s')
        return args.handler(args, out)
    except UsageError as error:
        _write(out, [u'usage error: {}'.format(error)])
    except (ParseError, CorpusError, AlgebraError) as error:
        _write(out, [u'parse error: {}'.format(error)])
    except (IOError, OSError) as error:
        _write(out, [u'io error: {}'.format(error)])
    except ValueError as error:
        _write(out, [u'usage error: {}'.format(error)])
    return 2


def main():
    sys.exit(run(sys.argv[1:]))
