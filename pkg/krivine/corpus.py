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

import io
import pkgutil
from dataclasses import dataclass, field, replace
from logging import getLogger

import pyparsing as pp

from krivine.core.lambda_c import (App, Abs, Kont, Push, Process,
                                   parse_term, parse_stack, parse_process, close_term)
from krivine.core.names import NameUniverse
from krivine.core.formulas import (NameConst, UnboundedQuantifier, UninterpretedAtom,
                                   constants, parse_formula, parse_name_expr, parse_name_exprs)
from krivine.verifier import (RealizerHyp, FalsityHyp, Lemma, SideCondition, Realizes, InPole, InFalsity,
                              Goal, VerifierConfig, MalformedGoal, prove)

logger = getLogger(__name__)

__all__ = [
    'CorpusError', 'CorpusGoal', 'CorpusEntry', 'CorpusReport',
    'parse_corpus', 'verify_corpus', 'read_corpus', 'load_shipped_corpus',
    'PASS', 'FAIL', 'FUEL',
]

PASS = 'PASS'
FAIL = 'FAIL'
FUEL = 'FUEL'


class CorpusError(ValueError):
    """ A corpus file is malformed; carries the line number and the directive. """

    def __init__(self, line, directive, message):
        super(CorpusError, self).__init__("line {}: {}: {}".format(line, directive, message))
        self.line = line
        self.directive = directive


@dataclass(frozen=True)
class CorpusGoal(object):
    """A parsed ``goal`` block.

    The verifier goal is complete except for its lemma store, which is filled from the
    goals accepted earlier in the same corpus.
    """
    ident: str
    expect: str
    line: int
    goal: Goal
    lemma_ids: tuple = ()
    uniform: bool = False
    fuel: int = None
    nested_intro: bool = False


@dataclass(frozen=True)
class CorpusEntry(object):
    ident: str
    expect: str
    status: str
    steps: int
    accepted: bool
    trace: object = None
    reason: str = None

    @property
    def truncated(self):
        return self.trace is not None and self.trace.truncated

    @property
    def extrapolated(self):
        return self.trace is not None and self.trace.extrapolated

    def line(self):
        text = '{} {} {}'.format(self.ident, self.status, self.steps)
        for flag in ('truncated', 'extrapolated'):
            if getattr(self, flag):
                text += ' ' + flag
        return text


@dataclass(frozen=True)
class CorpusReport(object):
    entries: tuple = field(default_factory=tuple)

    @property
    def success(self):
        """False iff some goal's outcome differs from its expectation."""
        return all(entry.status == PASS for entry in self.entries)

    def lines(self):
        return [entry.line() for entry in self.entries]

    def trace_lines(self):
        """The report with each goal's proof trace and failure reason below its line."""
        lines = []
        for entry in self.entries:
            lines.append(entry.line())
            if entry.reason:
                lines.append('  reason: {}'.format(entry.reason))
            if entry.trace is not None:
                lines.extend('  ' + line for line in entry.trace.lines())
        return lines

    def __len__(self):
        return len(self.entries)


def _build_directive_grammar():
    kw = pp.Keyword
    ident = pp.Regex(r"[A-Za-z_][\w'-]*")
    nat = pp.Regex(r'\d+').set_parse_action(lambda t: int(t[0]))
    colon = pp.Suppress(':')
    rest = pp.Regex(r'.+').set_parse_action(lambda t: t[0].strip())
    before_colon = pp.Regex(r'[^:]+').set_parse_action(lambda t: t[0].strip())
    offset = pp.Optional(pp.Suppress('+') + nat, default=0)
    return pp.MatchFirst([
        kw('let') + ident + pp.Suppress('=') + rest,
        kw('goal') + ident + pp.Suppress(kw('expect')) + (kw('accept') | kw('reject')),
        kw('universe') + rest,
        kw('hyp') + (kw('realizer') | kw('falsity')) + ident + colon + rest,
        kw('claim') + kw('realizes') + before_colon + colon + rest,
        kw('claim') + kw('inpole') + rest,
        kw('claim') + kw('infalsity') + before_colon + colon + rest,
        kw('using') + kw('lemma') + pp.Group(pp.DelimitedList(ident)),
        kw('using') + kw('induction'),
        kw('using') + kw('nested-intro'),
        kw('side') + ident + offset + pp.Suppress('<') + nat,
        kw('check') + kw('uniform'),
        kw('bound') + nat,
    ])


_DIRECTIVE = _build_directive_grammar()


class _Block(object):
    """The directives of one goal, collected before anything is resolved."""

    def __init__(self, ident, expect, line, names):
        self.ident = ident
        self.expect = expect
        self.line = line
        self.names = dict(names)
        self.universe = None
        self.hypotheses = []
        self.claim = None
        self.lemma_ids = []
        self.induction = False
        self.nested_intro = False
        self.side_conditions = []
        self.uniform = False
        self.fuel = None


def _close_kont(term, opaque_ids):
    if isinstance(term, App):
        return App(_close_kont(term.fun, opaque_ids), _close_kont(term.arg, opaque_ids))
    if isinstance(term, Abs):
        return Abs(term.var, _close_kont(term.body, opaque_ids))
    if isinstance(term, Kont):
        return Kont(_close_stack(term.stack, opaque_ids))
    return term


def _close(term, opaque_ids):
    return close_term(_close_kont(term, opaque_ids), opaque_ids)


def _close_stack(stack, opaque_ids):
    if isinstance(stack, Push):
        return Push(_close(stack.term, opaque_ids), _close_stack(stack.stack, opaque_ids))
    return stack


def _wrap(line, directive):
    """Run a parser callback, reporting syntax errors against the corpus line."""
    def call(func, *args):
        try:
            return func(*args)
        except CorpusError:
            raise
        except ValueError as error:
            raise CorpusError(line, directive, str(error))
    return call


def _finish(block, known):
    if block.claim is None:
        raise CorpusError(block.line, 'goal', "goal {} has no claim".format(block.ident))
    for ident in block.lemma_ids:
        if ident not in known:
            raise CorpusError(block.line, 'using lemma', "goal {} cites unknown goal {}".format(block.ident, ident))

    hypotheses = []
    for line, kind, ident, text in block.hypotheses:
        phi = _wrap(line, 'hyp')(parse_formula, text, block.names)
        hypotheses.append(RealizerHyp(ident, phi) if kind == 'realizer' else FalsityHyp(ident, phi))
    opaque_ids = [h.ident for h in hypotheses if isinstance(h, RealizerHyp)]

    line, kind, payload = block.claim
    call = _wrap(line, 'claim')
    formulas = [h.formula for h in hypotheses]
    if kind == 'realizes':
        term = call(_close, call(parse_term, payload[0]), opaque_ids)
        phi = call(parse_formula, payload[1], block.names)
        judgement = Realizes(term, phi, tuple(hypotheses))
        formulas.append(phi)
    elif kind == 'inpole':
        process = call(parse_process, payload[0])
        process = Process(call(_close, process.head, opaque_ids), call(_close_stack, process.stack, opaque_ids))
        judgement = InPole(process, tuple(hypotheses))
    else:
        stack = call(_close_stack, call(parse_stack, payload[0]), opaque_ids)
        phi = call(parse_formula, payload[1], block.names)
        judgement = InFalsity(stack, phi, tuple(hypotheses))
        formulas.append(phi)

    universe = None
    if block.universe is not None:
        names = set()
        for phi in formulas:
            names |= constants(phi)
        universe = NameUniverse.closure(list(block.universe) + sorted(names, key=lambda name: name.key))
    goal = Goal(block.ident, judgement, universe, tuple(block.side_conditions), (), block.induction)
    return CorpusGoal(block.ident, block.expect, block.line, goal, tuple(block.lemma_ids),
                      block.uniform, block.fuel, block.nested_intro)


def parse_corpus(text):
    """Read a corpus into :class:`CorpusGoal` values, in file order.

    A block starts at ``goal <id> expect accept|reject`` and runs to the next ``goal``.
    ``let`` bindings before the first goal are visible in every block.

    :raises CorpusError: on an unknown directive, a directive outside a goal, a
        malformed term, formula or name expression, or a citation of an unknown goal.
    """
    names = {}
    goals = []
    block = None
    for number, raw in enumerate(text.splitlines(), 1):
        code = raw.strip()
        if not code or code.startswith('#'):
            continue
        try:
            tokens = list(_DIRECTIVE.parse_string(code, parse_all=True))
        except pp.ParseBaseException as error:
            raise CorpusError(number, code.split()[0], "cannot read directive: {}".format(error.msg))
        directive = tokens[0]
        if directive == 'goal':
            if block is not None:
                goals.append(_finish(block, {goal.ident for goal in goals}))
            if tokens[1] in {goal.ident for goal in goals}:
                raise CorpusError(number, directive, "duplicate goal {}".format(tokens[1]))
            block = _Block(tokens[1], tokens[2], number, names)
            continue
        if directive == 'let':
            scope = names if block is None else block.names
            value = _wrap(number, directive)(parse_name_expr, tokens[2], scope)
            if not isinstance(value, NameConst):
                raise CorpusError(number, directive, "{} is not a closed name".format(tokens[2]))
            scope[tokens[1]] = value.name
            continue
        if block is None:
            raise CorpusError(number, directive, "directive outside a goal block")
        if directive == 'universe':
            exprs = _wrap(number, directive)(parse_name_exprs, tokens[1], block.names)
            if not all(isinstance(expr, NameConst) for expr in exprs):
                raise CorpusError(number, directive, "universe members must be closed names")
            block.universe = list(block.universe or []) + [expr.name for expr in exprs]
        elif directive == 'hyp':
            block.hypotheses.append((number, tokens[1], tokens[2], tokens[3]))
        elif directive == 'claim':
            if block.claim is not None:
                raise CorpusError(number, directive, "goal {} has two claims".format(block.ident))
            block.claim = (number, tokens[1], tokens[2:])
        elif directive == 'using':
            if tokens[1] == 'lemma':
                block.lemma_ids.extend(tokens[2])
            elif tokens[1] == 'induction':
                block.induction = True
            else:
                block.nested_intro = True
        elif directive == 'side':
            block.side_conditions.append(SideCondition(tokens[1], tokens[2], tokens[3]))
        elif directive == 'check':
            block.uniform = True
        elif directive == 'bound':
            if tokens[1] <= 0:
                raise CorpusError(number, directive, "bound must be positive")
            block.fuel = tokens[1]
    if block is not None:
        goals.append(_finish(block, {goal.ident for goal in goals}))
    return goals


def _status(corpus_goal, result):
    if result.exhausted:
        return FUEL
    expected = corpus_goal.expect == 'accept'
    return PASS if result.accepted == expected else FAIL


def _verify_goal(corpus_goal, config, lemmas):
    missing = [ident for ident in corpus_goal.lemma_ids if ident not in lemmas]
    if missing:
        reason = "cited goal not accepted: {}".format(', '.join(missing))
        status = PASS if corpus_goal.expect == 'reject' else FAIL
        return CorpusEntry(corpus_goal.ident, corpus_goal.expect, status, 0, False, None, reason)
    goal = replace(corpus_goal.goal, lemmas=tuple(lemmas[ident] for ident in corpus_goal.lemma_ids))
    if corpus_goal.fuel is not None:
        config = replace(config, fuel=corpus_goal.fuel)
    if corpus_goal.nested_intro:
        config = replace(config, nested_intro=True)
    try:
        result = prove(goal, config)
    except (MalformedGoal, UnboundedQuantifier, UninterpretedAtom) as error:
        raise CorpusError(corpus_goal.line, 'goal', str(error))
    status, reason = _status(corpus_goal, result), result.reason
    if result.accepted and corpus_goal.uniform and not result.trace.is_uniform():
        status, reason = FAIL, "case skeletons are not uniform"
    return CorpusEntry(corpus_goal.ident, corpus_goal.expect, status, result.steps, result.accepted, result.trace, reason)


def verify_corpus(source, config=None):
    """Check every goal of a corpus in file order.

    Accepted ``realizes`` goals join the lemma store and may be cited by later goals.

    :param source: corpus text, or :class:`CorpusGoal` values from :func:`parse_corpus`
    :param VerifierConfig config: defaults for every goal; ``bound`` and ``using`` override them
    :rtype: CorpusReport
    :raises CorpusError: on malformed input.

    Usage:
        >>> report = verify_corpus("goal peirce expect accept\\nclaim realizes cc : ((A -> B) -> A) -> A")
        >>> report.lines()
        ['peirce PASS 1']
    """
    config = config or VerifierConfig()
    goals = parse_corpus(source) if isinstance(source, str) else list(source)
    lemmas = {}
    entries = []
    for corpus_goal in goals:
        entry = _verify_goal(corpus_goal, config, lemmas)
        judgement = corpus_goal.goal.judgement
        if entry.accepted and isinstance(judgement, Realizes):
            lemmas[corpus_goal.ident] = Lemma(corpus_goal.ident, judgement.term, judgement.formula, corpus_goal.goal.universe)
        if entry.status == PASS:
            logger.info("%s %s (%s, %d steps)", entry.ident, entry.status, 'accepted' if entry.accepted else 'rejected', entry.steps)
        else:
            logger.warning("%s %s: %s", entry.ident, entry.status, entry.reason)
        entries.append(entry)
    return CorpusReport(tuple(entries))


def read_corpus(path):
    with io.open(path, encoding='utf-8') as f:
        return f.read()


def load_shipped_corpus():
    """The text of the shipped corpus."""
    return pkgutil.get_data('krivine', 'data/realizers.corpus').decode('utf-8')
