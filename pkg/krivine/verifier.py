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

from collections import namedtuple
from dataclasses import dataclass
from logging import getLogger

from cryptography.hazmat.backends import default_backend
from cryptography.hazmat.primitives import hashes

from krivine.core.lambda_c import (App, Abs, Kont, Opaque, Push, OpaqueTail, Process, Term, Stack,
                                   alpha_eq, process_alpha_eq, contains_kont, contains_opaque, free_vars,
                                   push_all, combinator, format_term, format_stack, format_process)
from krivine.core.kam import default_machine
from krivine.core.names import PrefixAll, Finite, SpecUnion
from krivine.core.formulas import (Formula, Imp, Forall, ForallGimel, ForallHat, ForallReishOrd, Quantifier, Bot,
                                   NameConst, Empty, Everything, Uninterpreted, ArrowShape, FamilyShape,
                                   falsity_shape, falsity_empty, falsity_full, falsity_included, match_formula,
                                   subst_name, instances, relation_formula, free_name_vars, format_formula)

logger = getLogger(__name__)

__all__ = [
    'RealizerHyp', 'FalsityHyp', 'Lemma', 'SideCondition',
    'Realizes', 'InPole', 'InFalsity', 'Goal', 'VerifierConfig',
    'ProofStep', 'LemmaUse', 'ProofTrace', 'ProofResult', 'FuelExhausted', 'MalformedGoal',
    'prove', 'replay', 'check_displayed_trace', 'TRACE_ABBREVIATIONS',
]


class FuelExhausted(Exception):
    """ The machine-step budget of a goal ran out before the search finished. """
    pass


class MalformedGoal(ValueError):
    """ A goal or its context is not well formed. """
    pass


@dataclass(frozen=True)
class RealizerHyp(object):
    """ The opaque term ``ident`` realizes ``formula``. """
    ident: str
    formula: Formula


@dataclass(frozen=True)
class FalsityHyp(object):
    """ The opaque stack ``ident`` lies in the falsity value of ``formula``. """
    ident: str
    formula: Formula


@dataclass(frozen=True)
class Lemma(object):
    """An accepted goal ``term ⊩ formula`` that later proofs may cite.

    :ivar universe: the :class:`NameUniverse` its unbounded quantifiers were checked over, None if it had none
    """
    ident: str
    term: Term
    formula: Formula
    universe: object = None


@dataclass(frozen=True)
class SideCondition(object):
    """ Enumerate the ordinal instance ``var = ⌐β`` or ``β̂`` only when ``β + offset < bound``. """
    var: str
    offset: int
    bound: int

    def admits(self, name):
        if name.ordinal is None:
            return True
        return name.ordinal[1] + self.offset < self.bound

    def __str__(self):
        offset = ' + {}'.format(self.offset) if self.offset else ''
        return '{}{} < {}'.format(self.var, offset, self.bound)


@dataclass(frozen=True)
class Realizes(object):
    term: Term
    formula: Formula
    hypotheses: tuple = ()


@dataclass(frozen=True)
class InPole(object):
    process: Process
    hypotheses: tuple = ()


@dataclass(frozen=True)
class InFalsity(object):
    stack: Stack
    formula: Formula
    hypotheses: tuple = ()


@dataclass(frozen=True)
class Goal(object):
    """A judgement together with everything needed to check it.

    :ivar judgement: :class:`Realizes`, :class:`InPole` or :class:`InFalsity`
    :ivar universe: range of unbounded quantifiers, a :class:`NameUniverse` or None
    :ivar tuple side_conditions: :class:`SideCondition` values
    :ivar tuple lemmas: :class:`Lemma` values that may be cited
    :ivar bool induction: prove a universally quantified claim by rank induction
    """
    ident: str
    judgement: object
    universe: object = None
    side_conditions: tuple = ()
    lemmas: tuple = ()
    induction: bool = False


@dataclass(frozen=True)
class VerifierConfig(object):
    """ Search limits and rule switches. """
    fuel: int = 10000
    induction: bool = True
    kpi: bool = True
    nested_intro: bool = False
    max_depth: int = 64

    def __post_init__(self):
        if self.fuel <= 0:
            raise ValueError("fuel must be positive, got {}".format(self.fuel))
        if self.max_depth <= 0:
            raise ValueError("max_depth must be positive, got {}".format(self.max_depth))


TRACE_ABBREVIATIONS = tuple((name, combinator(name)) for name in ('w0', 'w1', 'w2', 'w5', 'w6', 'I'))

ProofStep = namedtuple('ProofStep', ['rule', 'depth', 'subject'])

LemmaUse = namedtuple('LemmaUse', ['ident', 'outside', 'term', 'formula'])
LemmaUse.__doc__ = """ A cited lemma; ``outside`` lists instance names its own check never enumerated. """


def _render_subject(subject):
    if isinstance(subject, LemmaUse):
        outside = ''
        if subject.outside:
            outside = ' [outside universe: {}]'.format(', '.join(str(name) for name in subject.outside))
        return u'{}{}: {}'.format(subject.ident, outside, _render_subject((subject.term, subject.formula)))
    if isinstance(subject, Process):
        return format_process(subject, TRACE_ABBREVIATIONS)
    if isinstance(subject, tuple) and len(subject) == 2 and isinstance(subject[1], Formula):
        left, phi = subject
        if isinstance(left, Term):
            return u'{} ⊩ {}'.format(format_term(left, TRACE_ABBREVIATIONS), format_formula(phi))
        return u'{} ∈ ‖{}‖'.format(format_stack(left, TRACE_ABBREVIATIONS), format_formula(phi))
    return str(subject)


class ProofTrace(object):
    """The evidence of a proof search: the rule applications of the successful branches.

    :ivar Goal goal: the checked goal
    :ivar VerifierConfig config: limits the search ran with
    :ivar tuple steps: :class:`ProofStep` values in order
    :ivar bool accepted: outcome of the search
    :ivar bool truncated: some ordinal instance was dropped by a side condition
    """

    def __init__(self, goal, config, steps, accepted, truncated=False):
        self.goal = goal
        self.config = config
        self.steps = tuple(steps)
        self.accepted = accepted
        self.truncated = truncated

    def lines(self):
        return [u'{}{} {}'.format('  ' * step.depth, step.rule, _render_subject(step.subject)) for step in self.steps]

    def digest(self):
        """SHA-256 of the rendered lines, hex encoded."""
        digest = hashes.Hash(hashes.SHA256(), backend=default_backend())
        for line in self.lines():
            digest.update(line.encode('utf-8'))
            digest.update(b'\n')
        return digest.finalize().hex()

    def case_skeletons(self):
        """The ``(rule, relative depth)`` sequence of each outermost case."""
        cases = [index for index, step in enumerate(self.steps) if step.rule == 'CASE']
        if not cases:
            return []
        outer = min(self.steps[index].depth for index in cases)
        starts = [index for index in cases if self.steps[index].depth == outer]
        skeletons = []
        for position, start in enumerate(starts):
            end = starts[position + 1] if position + 1 < len(starts) else len(self.steps)
            body = [step for step in self.steps[start + 1:end] if step.depth > outer]
            skeletons.append(tuple((step.rule, step.depth - outer) for step in body))
        return skeletons

    def is_uniform(self):
        return len(set(self.case_skeletons())) <= 1

    @property
    def extrapolated(self):
        """Some cited lemma was used at a name outside the universe it was checked over."""
        return any(isinstance(step.subject, LemmaUse) and step.subject.outside for step in self.steps)

    def __len__(self):
        return len(self.steps)

    def __repr__(self):
        return "ProofTrace({}, {} steps, {})".format(self.goal.ident, len(self.steps), 'accepted' if self.accepted else 'rejected')


@dataclass(frozen=True)
class ProofResult(object):
    """ Outcome of :func:`prove`; ``steps`` counts machine steps. """
    accepted: bool
    trace: ProofTrace
    reason: str = None
    steps: int = 0
    exhausted: bool = False


class _Context(object):

    def __init__(self, realizers=None, falsities=None):
        self.realizers = dict(realizers or {})
        self.falsities = dict(falsities or {})

    def extend(self, realizers=None, falsities=None):
        merged = _Context(self.realizers, self.falsities)
        merged.realizers.update(realizers or {})
        merged.falsities.update(falsities or {})
        return merged


_Case = namedtuple('_Case', ['stack', 'realizers', 'falsities', 'labels'])
_Induction = namedtuple('_Induction', ['term', 'var', 'body', 'lower'])


class _Search(object):

    def __init__(self, goal, config):
        self.goal = goal
        self.config = config
        self.universe = goal.universe
        self.machine = default_machine
        self.steps = []
        self.machine_steps = 0
        self.truncated = False
        self.failure = None
        self.induction = None
        self._in_progress = []
        self._fresh_count = 0
        self._used = set()

    def fresh(self, prefix):
        while True:
            self._fresh_count += 1
            ident = '{}{}'.format(prefix, self._fresh_count)
            if ident not in self._used:
                self._used.add(ident)
                return ident

    def record(self, rule, depth, subject):
        self.steps.append(ProofStep(rule, depth, subject))
        logger.debug("%s%s", '  ' * depth, rule)

    def mark(self):
        return len(self.steps)

    def rollback(self, mark):
        del self.steps[mark:]

    def fail(self, reason):
        self.failure = reason
        return False

    def spend(self):
        self.machine_steps += 1
        if self.machine_steps > self.config.fuel:
            raise FuelExhausted("Fuel of {} machine steps exhausted".format(self.config.fuel))

    def admitted(self, phi, name):
        for condition in self.goal.side_conditions:
            if condition.var == phi.var and not condition.admits(name):
                self.truncated = True
                return False
        return True

    def tails(self, spec):
        """A fresh generic tail for Π or a prefixed Π, as ``[(stack, falsity hypotheses)]``."""
        rho = self.fresh('pi')
        prefix = spec.prefix if isinstance(spec, PrefixAll) else ()
        return [(push_all(prefix, OpaqueTail(rho)), {rho: Bot()})]

    def cases(self, phi, labels=()):
        """Symbolic members of ‖phi‖ built from fresh opaque atoms, one per shape."""
        shape = falsity_shape(phi, self.universe)
        if isinstance(shape, Empty):
            return []
        if isinstance(shape, (Everything, Uninterpreted)):
            rho = self.fresh('pi')
            return [_Case(OpaqueTail(rho), {}, {rho: phi}, labels)]
        if isinstance(shape, ArrowShape):
            ident = self.fresh('u')
            return [_Case(Push(Opaque(ident), case.stack), dict(case.realizers, **{ident: shape.premise}), case.falsities, case.labels)
                    for case in self.cases(shape.conclusion, labels)]
        if isinstance(shape, FamilyShape):
            result = []
            for prefix, name, member in shape.members:
                if not self.admitted(phi, name):
                    continue
                for case in self.cases(member, labels + ('{} := {}'.format(phi.var, name),)):
                    stack = case.stack if prefix is None else Push(prefix, case.stack)
                    result.append(case._replace(stack=stack))
            return result
        return self._atomic_cases(shape.descriptor, labels)

    def _atomic_cases(self, descriptor, labels):
        result = []
        if isinstance(descriptor, SpecUnion):
            for spec in descriptor.specs:
                for tail in self._spec_tails(spec):
                    result.append(_Case(tail[0], {}, tail[1], labels))
            return result
        for entry in descriptor.entries:
            slots = [(self.fresh('u'), relation_formula(*slot)) for slot in entry.slots]
            for stack, falsities in self._spec_tails(entry.tail):
                stack = push_all([Opaque(ident) for ident, _ in slots], stack)
                result.append(_Case(stack, dict(slots), falsities, labels))
        return result

    def _spec_tails(self, spec):
        if isinstance(spec, Finite):
            return [(stack, {}) for stack in spec.stacks]
        return self.tails(spec)

    def check_depth(self, depth):
        return depth <= self.config.max_depth

    def realizes(self, term, phi, ctx, depth, top=False):
        if not self.check_depth(depth):
            return self.fail("depth limit at {}".format(_render_subject((term, phi))))
        mark = self.mark()
        if isinstance(term, Opaque):
            hypothesis = ctx.realizers.get(term.name)
            if hypothesis is not None and falsity_included(phi, hypothesis, self.universe):
                self.record('HYP', depth, (term, phi))
                return True
        if falsity_empty(phi, self.universe):
            self.record('VACUOUS', depth, (term, phi))
            return True
        if self.config.kpi and isinstance(term, Kont) and isinstance(phi, Imp):
            self.record('KPI', depth, (term, phi))
            if self.in_falsity(term.stack, phi.premise, ctx, depth + 1):
                return True
            self.rollback(mark)
        for lemma in self.goal.lemmas:
            outside = self._lemma_instance(lemma, phi) if alpha_eq(term, lemma.term) else None
            if outside is not None:
                self.record('LEMMA', depth, LemmaUse(lemma.ident, outside, term, phi))
                return True
        if self.induction is not None and alpha_eq(term, self.induction.term) and self._induction_covers(phi):
            self.record('IH', depth, (term, phi))
            return True
        if isinstance(term, Opaque):
            return self.fail("no hypothesis gives {}".format(_render_subject((term, phi))))
        opaque_content = contains_opaque(term) or contains_kont(term)
        if not (top or opaque_content or self.config.nested_intro):
            return self.fail("closed realizer without lemma: {}".format(_render_subject((term, phi))))
        if not opaque_content and any(alpha_eq(term, other) for other in self._in_progress):
            return self.fail("realizer already under proof: {}".format(_render_subject((term, phi))))
        self._in_progress.append(term)
        try:
            if self.intro(term, phi, ctx, depth):
                return True
        finally:
            self._in_progress.pop()
        self.rollback(mark)
        return False

    def _lemma_instance(self, lemma, phi):
        """None when the lemma does not cover phi, else the instance names outside the lemma's universe."""
        if phi == lemma.formula:
            return ()
        if falsity_included(phi, lemma.formula, self.universe):
            return self._outside(lemma, self.universe or ())
        pattern, domains = lemma.formula, {}
        while isinstance(pattern, (Forall, ForallGimel, ForallReishOrd)):
            if isinstance(pattern, Forall):
                domains[pattern.var] = None
            else:
                domains[pattern.var] = frozenset(name for _, name, _ in instances(pattern))
            pattern = pattern.body
        binding = match_formula(pattern, phi, domains)
        if binding is None:
            return None
        for var, value in binding.items():
            if not isinstance(value, NameConst):
                return None
            if domains[var] is not None and value.name not in domains[var]:
                return None
        return self._outside(lemma, [binding[var].name for var in sorted(binding) if domains[var] is None])

    @staticmethod
    def _outside(lemma, names):
        if lemma.universe is None or not _has_unbounded(lemma.formula):
            return ()
        outside = []
        for name in names:
            if name not in lemma.universe and name not in outside:
                outside.append(name)
        return tuple(outside)

    def _induction_instances(self):
        hypothesis = self.induction
        return [subst_name(hypothesis.body, hypothesis.var, name) for name in hypothesis.lower]

    def _induction_covers(self, phi):
        candidates = self._induction_instances()
        if phi in candidates:
            return True
        return any(falsity_included(phi, candidate, self.universe) for candidate in candidates)

    def intro(self, term, phi, ctx, depth):
        if isinstance(phi, Imp):
            rule = 'IMP-INTRO'
        elif isinstance(phi, Quantifier):
            rule = 'FORALL-INTRO'
        else:
            rule = 'FALSITY-INTRO'
        self.record(rule, depth, (term, phi))
        for case in self.cases(phi):
            self.record('CASE', depth + 1, ', '.join(case.labels) or format_stack(case.stack))
            extended = ctx.extend(case.realizers, case.falsities)
            if not self.in_pole(Process(term, case.stack), extended, depth + 2):
                return False
        return True

    def in_falsity(self, stack, phi, ctx, depth):
        if not self.check_depth(depth):
            return self.fail("depth limit at {}".format(_render_subject((stack, phi))))
        mark = self.mark()
        self.record('FALSITY', depth, (stack, phi))
        if falsity_full(phi, self.universe):
            return True
        if isinstance(stack, OpaqueTail):
            hypothesis = ctx.falsities.get(stack.name)
            if hypothesis is not None and falsity_included(hypothesis, phi, self.universe):
                return True
        elif self._in_falsity_shape(stack, phi, ctx, depth):
            return True
        self.rollback(mark)
        return self.fail("stack outside falsity value: {}".format(_render_subject((stack, phi))))

    def _in_falsity_shape(self, stack, phi, ctx, depth):
        shape = falsity_shape(phi, self.universe)
        if isinstance(shape, Everything):
            return True
        if isinstance(shape, (Empty, Uninterpreted)):
            return False
        if isinstance(shape, ArrowShape):
            return (isinstance(stack, Push)
                    and self.realizes(stack.term, shape.premise, ctx, depth + 1)
                    and self.in_falsity(stack.stack, shape.conclusion, ctx, depth + 1))
        if isinstance(shape, FamilyShape):
            for prefix, name, member in shape.members:
                mark = self.mark()
                if prefix is None:
                    if self.in_falsity(stack, member, ctx, depth + 1):
                        return True
                elif isinstance(stack, Push) and stack.term == prefix:
                    if self.in_falsity(stack.stack, member, ctx, depth + 1):
                        return True
                self.rollback(mark)
            return False
        descriptor = shape.descriptor
        if isinstance(descriptor, SpecUnion):
            return descriptor.contains(stack)
        for entry in descriptor.entries:
            mark = self.mark()
            items, rest = [], stack
            while len(items) < len(entry.slots) and isinstance(rest, Push):
                items.append(rest.term)
                rest = rest.stack
            if len(items) < len(entry.slots) or not entry.tail.contains(rest):
                continue
            if all(self.realizes(item, relation_formula(*slot), ctx, depth + 1) for item, slot in zip(items, entry.slots)):
                return True
            self.rollback(mark)
        return False

    def in_pole(self, process, ctx, depth):
        """ANTI-EVAL: run the machine until a hypothesis, lemma or induction hypothesis closes the process."""
        if not self.check_depth(depth):
            return self.fail("depth limit at {}".format(_render_subject(process)))
        mark = self.mark()
        self.record('ANTI-EVAL', depth, process)
        current = process
        while True:
            if self._close(current, ctx, depth + 1):
                return True
            transition = self.machine.transition(current)
            if transition is None:
                if self._split_tail(current, ctx, depth + 1):
                    return True
                self.rollback(mark)
                return self.fail("stuck at {}".format(_render_subject(current)))
            self.spend()
            rule, current = transition
            self.record(rule, depth + 1, current)

    def _close(self, process, ctx, depth):
        head, stack = process.head, process.stack
        mark = self.mark()
        if isinstance(head, Opaque):
            hypothesis = ctx.realizers.get(head.name)
            if hypothesis is None:
                return False
            self.record('HYP-MATCH', depth, (head, hypothesis))
            if self.in_falsity(stack, hypothesis, ctx, depth + 1):
                return True
            self.rollback(mark)
            return False
        for lemma in self.goal.lemmas:
            if alpha_eq(head, lemma.term):
                outside = self._outside(lemma, self.universe or ())
                self.record('LEMMA', depth, LemmaUse(lemma.ident, outside, head, lemma.formula))
                if self.in_falsity(stack, lemma.formula, ctx, depth + 1):
                    return True
                self.rollback(mark)
        if self.induction is not None and alpha_eq(head, self.induction.term):
            for candidate in self._induction_instances():
                self.record('IH', depth, (head, candidate))
                if self.in_falsity(stack, candidate, ctx, depth + 1):
                    return True
                self.rollback(mark)
        return False

    def _split_tail(self, process, ctx, depth):
        """CASE-SPLIT: replace an opaque tail by the generic members of its falsity value."""
        stack = process.stack
        while isinstance(stack, Push):
            stack = stack.stack
        if not isinstance(stack, OpaqueTail):
            return False
        hypothesis = ctx.falsities.get(stack.name)
        if hypothesis is None or isinstance(falsity_shape(hypothesis, self.universe), (Everything, Uninterpreted)):
            return False
        mark = self.mark()
        self.record('CASE-SPLIT', depth, (stack, hypothesis))
        for case in self.cases(hypothesis):
            self.record('CASE', depth + 1, ', '.join(case.labels) or format_stack(case.stack))
            replaced = _replace_tail_in_process(process, stack.name, case.stack)
            if not self.in_pole(replaced, ctx.extend(case.realizers, case.falsities), depth + 2):
                self.rollback(mark)
                return False
        return True

    def prove_induction(self, term, phi, ctx):
        self.record('RANK-IND', 0, (term, phi))
        members = [(name, member) for _, name, member in instances(phi, self.universe) if self.admitted(phi, name)]
        for name, member in members:
            lower = tuple(other for other, _ in members if other.rank < name.rank)
            self.induction = _Induction(term, phi.var, phi.body, lower)
            self.record('CASE', 1, '{} := {}'.format(phi.var, name))
            if not self.realizes(term, member, ctx, 2, top=True):
                return False
        self.induction = None
        return True


def _has_unbounded(phi):
    if isinstance(phi, Forall):
        return True
    if isinstance(phi, Imp):
        return _has_unbounded(phi.premise) or _has_unbounded(phi.conclusion)
    if isinstance(phi, Quantifier):
        return _has_unbounded(phi.body)
    return False


def _replace_tail_in_term(term, ident, replacement):
    if isinstance(term, App):
        return App(_replace_tail_in_term(term.fun, ident, replacement), _replace_tail_in_term(term.arg, ident, replacement))
    if isinstance(term, Abs):
        return Abs(term.var, _replace_tail_in_term(term.body, ident, replacement))
    if isinstance(term, Kont):
        return Kont(_replace_tail(term.stack, ident, replacement))
    return term


def _replace_tail(stack, ident, replacement):
    if isinstance(stack, Push):
        return Push(_replace_tail_in_term(stack.term, ident, replacement), _replace_tail(stack.stack, ident, replacement))
    if isinstance(stack, OpaqueTail) and stack.name == ident:
        return replacement
    return stack


def _replace_tail_in_process(process, ident, replacement):
    return Process(_replace_tail_in_term(process.head, ident, replacement), _replace_tail(process.stack, ident, replacement))


def _opaque_ids(judgement):
    terms, stacks = [], []
    if isinstance(judgement, Realizes):
        terms.append(judgement.term)
    elif isinstance(judgement, InPole):
        terms.append(judgement.process.head)
        stacks.append(judgement.process.stack)
    else:
        stacks.append(judgement.stack)
    return terms, stacks


def _context(goal):
    ids = [hypothesis.ident for hypothesis in goal.judgement.hypotheses]
    if len(set(ids)) != len(ids):
        raise MalformedGoal("Duplicate hypothesis ids in goal {}: {}".format(goal.ident, ids))
    terms, stacks = _opaque_ids(goal.judgement)
    for term in terms:
        if free_vars(term):
            raise MalformedGoal("Goal {} has free variables {}".format(goal.ident, sorted(free_vars(term))))
    for phi in [getattr(goal.judgement, 'formula', None)] + [hypothesis.formula for hypothesis in goal.judgement.hypotheses]:
        if phi is not None and free_name_vars(phi):
            raise MalformedGoal("Goal {} has free name variables {}".format(goal.ident, sorted(free_name_vars(phi))))
    realizers = {h.ident: h.formula for h in goal.judgement.hypotheses if isinstance(h, RealizerHyp)}
    falsities = {h.ident: h.formula for h in goal.judgement.hypotheses if isinstance(h, FalsityHyp)}
    return _Context(realizers, falsities)


def prove(goal, config=None):
    """Check a goal.

    :param Goal goal: the goal and its context
    :param VerifierConfig config: limits, defaults when None
    :rtype: ProofResult
    :raises MalformedGoal: on duplicate hypothesis ids or free variables.

    Usage:
        >>> from krivine import parse_term, parse_formula
        >>> goal = Goal('peirce', Realizes(parse_term('cc'), parse_formula('((A -> B) -> A) -> A')))
        >>> prove(goal).accepted
        True
    """
    config = config or VerifierConfig()
    ctx = _context(goal)
    search = _Search(goal, config)
    search._used.update(ctx.realizers)
    search._used.update(ctx.falsities)
    judgement = goal.judgement
    exhausted = False
    try:
        if isinstance(judgement, Realizes):
            phi = judgement.formula
            if goal.induction and config.induction and isinstance(phi, Quantifier) and not isinstance(phi, ForallHat):
                accepted = search.prove_induction(judgement.term, phi, ctx)
            else:
                accepted = search.realizes(judgement.term, phi, ctx, 0, top=True)
        elif isinstance(judgement, InPole):
            accepted = search.in_pole(judgement.process, ctx, 0)
        elif isinstance(judgement, InFalsity):
            accepted = search.in_falsity(judgement.stack, judgement.formula, ctx, 0)
        else:
            raise MalformedGoal("Unknown judgement {!r}".format(judgement))
    except FuelExhausted as error:
        accepted, exhausted = False, True
        search.failure = str(error)
    trace = ProofTrace(goal, config, search.steps, accepted, search.truncated)
    reason = None if accepted else search.failure
    if accepted:
        logger.debug("goal %s accepted in %d machine steps", goal.ident, search.machine_steps)
    else:
        logger.debug("goal %s rejected: %s", goal.ident, reason)
    return ProofResult(accepted, trace, reason, search.machine_steps, exhausted)


def replay(trace, lemmas=None):
    """Re-run the goal of ``trace`` and compare outcome and digest.

    :param lemmas: replacement lemma store, the recorded one when None
    """
    goal = trace.goal
    if lemmas is not None:
        goal = Goal(goal.ident, goal.judgement, goal.universe, goal.side_conditions, tuple(lemmas), goal.induction)
    result = prove(goal, trace.config)
    return result.accepted == trace.accepted and result.trace.digest() == trace.digest()


def check_displayed_trace(process, expected, fuel, machine=None):
    """True iff the machine visits the ``expected`` processes in order, starting from ``process``.

    Intermediate processes may be skipped, as displayed reduction chains elide push steps.
    """
    if not expected:
        raise ValueError("expected must be nonempty")
    trace = (machine or default_machine).reduce(process, fuel)
    position = 0
    for visited in trace.steps:
        if process_alpha_eq(visited, expected[position]):
            position += 1
            if position == len(expected):
                return True
    return False
