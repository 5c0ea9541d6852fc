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
import itertools
import re
from collections import namedtuple
from logging import getLogger

import pyparsing as pp

from .lambda_c import (Var, App, Abs, Cc, Kont, Instr, EnumLit, Bottom, Push,
                       Process, Term, Stack, ParseError, combinator, push_all)
from .names import AllStacks, PrefixAll, Finite, NOT_EPS, NEQ, falsity_atomic
from .formulas import (Top, Bot, Relation, Imp, Atom, Forall, Quantifier, NameConst, relation_formula,
                       UninterpretedAtom, UnboundedQuantifier, PLAIN, constants, instances,
                       undefined_kind, format_formula)

logger = getLogger(__name__)

__all__ = [
    'BoolAlg', 'TauContext', 'PoleVerdict', 'ChainVerdict',
    'AlgebraError', 'TauError', 'NameOutsideUniverse',
    'tau', 'pole_decide', 'preorder_decide', 'spec_sup', 'forcing_value',
    'ba_delta_cc', 'algebra_delta_chain_condition', 'uniform_delta_chain_condition',
    'parse_algebra', 'load_algebra',
]


class AlgebraError(ValueError):
    """ A table is incomplete or violates a Boolean-algebra law. """
    pass


class TauError(ValueError):
    """ τ met an unmapped stack bottom or content without a τ clause. """
    pass


class NameOutsideUniverse(ValueError):
    """ A formula mentions a name its universe does not contain. """
    pass


class BoolAlg(object):
    """A finite Boolean algebra given by its operation tables.

    :param carrier: element ids, in the order searches enumerate them
    :param dict meet: ``(a, b) -> a ∧ b``
    :param dict join: ``(a, b) -> a ∨ b``
    :param dict neg: ``a -> ¬a``
    :param zero: bottom element
    :param one: top element
    :raises AlgebraError: when a table is incomplete or a law fails.
    """

    def __init__(self, carrier, meet, join, neg, zero, one, validate=True):
        self.carrier = tuple(carrier)
        self._meet = dict(meet)
        self._join = dict(join)
        self._neg = dict(neg)
        self.zero = zero
        self.one = one
        if validate:
            self.validate()

    @classmethod
    def powerset(cls, atoms):
        """The powerset algebra on ``atoms`` atoms.

        Elements are ordered by bitmask: ``0``, ``a1``, ``a2``, ``a1_a2``, ``a3``, ... and the full set is ``1``.
        """
        if atoms < 1:
            raise AlgebraError("A powerset algebra needs at least one atom, got {}".format(atoms))
        full = (1 << atoms) - 1

        def label(mask):
            if mask == 0:
                return '0'
            if mask == full:
                return '1'
            return '_'.join('a{}'.format(bit + 1) for bit in range(atoms) if mask & (1 << bit))

        masks = range(full + 1)
        meet = {(label(x), label(y)): label(x & y) for x in masks for y in masks}
        join = {(label(x), label(y)): label(x | y) for x in masks for y in masks}
        neg = {label(x): label(full & ~x) for x in masks}
        return cls([label(mask) for mask in masks], meet, join, neg, '0', '1', validate=False)

    def meet(self, a, b):
        return self._meet[(a, b)]

    def join(self, a, b):
        return self._join[(a, b)]

    def neg(self, a):
        return self._neg[a]

    def meet_all(self, elements):
        result = self.one
        for element in elements:
            result = self._meet[(result, element)]
        return result

    def join_all(self, elements):
        result = self.zero
        for element in elements:
            result = self._join[(result, element)]
        return result

    def leq(self, a, b):
        return self._meet[(a, b)] == a

    @property
    def nonzero(self):
        return tuple(element for element in self.carrier if element != self.zero)

    @property
    def atoms(self):
        return tuple(a for a in self.nonzero
                     if not any(b != a and self.leq(b, a) for b in self.nonzero))

    def validate(self):
        """Check the tables and the Boolean laws on every element combination."""
        carrier = self.carrier
        if len(set(carrier)) != len(carrier):
            raise AlgebraError("Duplicate elements in {}".format(carrier))
        for element in (self.zero, self.one):
            if element not in carrier:
                raise AlgebraError("{} is not an element".format(element))
        for a, b in itertools.product(carrier, repeat=2):
            for name, table in (('meet', self._meet), ('join', self._join)):
                value = table.get((a, b))
                if value not in carrier:
                    raise AlgebraError("{} {} {} is undefined or not an element".format(name, a, b))
        for a in carrier:
            if self._neg.get(a) not in carrier:
                raise AlgebraError("neg {} is undefined or not an element".format(a))

        def law(holds, text, *elements):
            if not holds:
                raise AlgebraError("{} fails at {}".format(text, ', '.join(elements)))

        m, j, n = self.meet, self.join, self.neg
        for a in carrier:
            law(m(a, n(a)) == self.zero, 'complement a ∧ ¬a = 0', a)
            law(j(a, n(a)) == self.one, 'complement a ∨ ¬a = 1', a)
            law(m(a, self.one) == a and j(a, self.zero) == a, 'identity', a)
            for b in carrier:
                law(m(a, b) == m(b, a) and j(a, b) == j(b, a), 'commutativity', a, b)
                law(m(a, j(a, b)) == a and j(a, m(a, b)) == a, 'absorption', a, b)
                for c in carrier:
                    law(m(a, m(b, c)) == m(m(a, b), c) and j(a, j(b, c)) == j(j(a, b), c), 'associativity', a, b, c)
                    law(m(a, j(b, c)) == j(m(a, b), m(a, c)), 'distributivity', a, b, c)

    def __len__(self):
        return len(self.carrier)

    def __repr__(self):
        return "BoolAlg({})".format(', '.join(self.carrier))


class TauContext(object):
    """The algebra 𝒜_ℬ: a Boolean algebra and the τ values of the stack bottoms.

    :param BoolAlg algebra: the algebra ℬ
    :param dict bottom_map: stack-bottom ident to element
    :param literal_value: element used as τ of enumeration literals and instructions, None to reject them
    """

    def __init__(self, algebra, bottom_map, literal_value=None):
        self.algebra = algebra
        self.bottom_map = dict(bottom_map)
        for bottom, element in self.bottom_map.items():
            if element not in algebra.carrier:
                raise AlgebraError("Bottom {} maps to {}, not an element".format(bottom, element))
        if algebra.one not in self.bottom_map.values():
            raise AlgebraError("Some stack bottom must map to {}".format(algebra.one))
        if literal_value is not None and literal_value not in algebra.carrier:
            raise AlgebraError("{} is not an element".format(literal_value))
        self.literal_value = literal_value

    @classmethod
    def for_algebra(cls, algebra, literal_value=None):
        """One bottom ``ω_e`` per element ``e``, plus ``ω_zero`` and ``ω_one``."""
        bottom_map = {element: element for element in algebra.carrier}
        bottom_map.update(zero=algebra.zero, one=algebra.one)
        return cls(algebra, bottom_map, literal_value)

    def with_literal_value(self, element):
        return TauContext(self.algebra, self.bottom_map, element)

    def bottom_for(self, element):
        """A bottom ident whose τ is ``element``."""
        if self.bottom_map.get(element) == element:
            return element
        for bottom in sorted(self.bottom_map):
            if self.bottom_map[bottom] == element:
                return bottom
        raise AlgebraError("No stack bottom has τ value {}".format(element))


PoleVerdict = namedtuple('PoleVerdict', ['in_pole', 'witness_value'])
PoleVerdict.__doc__ = """ Membership in the pole ``τ = 0``; ``witness_value`` is τ of the process. """

ChainVerdict = namedtuple('ChainVerdict', ['holds', 'witness'])
ChainVerdict.__doc__ = """ Outcome of a chain-condition check; ``witness`` is None when it holds. """


def _tau_term(term, ctx):
    algebra = ctx.algebra
    if isinstance(term, (Var, Cc)):
        return algebra.one
    if isinstance(term, App):
        return algebra.meet(_tau_term(term.fun, ctx), _tau_term(term.arg, ctx))
    if isinstance(term, Abs):
        return _tau_term(term.body, ctx)
    if isinstance(term, Kont):
        return _tau_stack(term.stack, ctx)
    if isinstance(term, (EnumLit, Instr)):
        if ctx.literal_value is None:
            raise TauError("τ is undefined on {}".format(term))
        return ctx.literal_value
    raise TauError("τ is undefined on opaque content {}".format(term))


def _tau_stack(stack, ctx):
    algebra = ctx.algebra
    value = algebra.one
    while isinstance(stack, Push):
        value = algebra.meet(value, _tau_term(stack.term, ctx))
        stack = stack.stack
    if isinstance(stack, Bottom):
        if stack.name not in ctx.bottom_map:
            raise TauError("Unmapped stack bottom w_{}".format(stack.name))
        return algebra.meet(value, ctx.bottom_map[stack.name])
    raise TauError("τ is undefined on opaque content {}".format(stack))


def tau(x, ctx):
    """The τ value of a term, stack or process.

    :raises TauError: on unmapped bottoms or opaque content.

    Usage:
        >>> ctx = TauContext.for_algebra(BoolAlg.powerset(2))
        >>> tau(Process(combinator('I'), Bottom('a1')), ctx)
        'a1'
    """
    if isinstance(x, Process):
        return ctx.algebra.meet(_tau_term(x.head, ctx), _tau_stack(x.stack, ctx))
    if isinstance(x, Term):
        return _tau_term(x, ctx)
    if isinstance(x, Stack):
        return _tau_stack(x, ctx)
    raise TypeError("tau expects a term, a stack or a process, got {!r}".format(x))


def pole_decide(process, ctx):
    value = tau(process, ctx)
    return PoleVerdict(value == ctx.algebra.zero, value)


def preorder_decide(p, q, ctx):
    """``p ≻ q``, i.e. ``τ(p) ≤ τ(q)``."""
    return ctx.algebra.leq(tau(p, ctx), tau(q, ctx))


def spec_sup(spec, ctx):
    """The supremum of τ over a stack specification."""
    algebra = ctx.algebra
    if isinstance(spec, AllStacks):
        return algebra.one
    if isinstance(spec, PrefixAll):
        return algebra.meet_all(_tau_term(term, ctx) for term in spec.prefix)
    if isinstance(spec, Finite):
        return algebra.join_all(_tau_stack(stack, ctx) for stack in spec.stacks)
    raise TypeError("Not a stack specification: {!r}".format(spec))


class _Forcing(object):

    def __init__(self, universe, ctx):
        self.universe = universe
        self.ctx = ctx
        self.algebra = ctx.algebra
        self._memo = {}

    def value(self, phi):
        cached = self._memo.get(phi)
        if cached is None:
            cached = self._memo[phi] = self._compute(phi)
        return cached

    def _atomic(self, relation, a, b):
        algebra = self.algebra
        if relation == NEQ:
            return algebra.zero if a != b else algebra.one
        descriptor = falsity_atomic(relation, a, b)
        if relation == NOT_EPS:
            return algebra.join_all(spec_sup(spec, self.ctx) for spec in descriptor.specs)
        terms = []
        for entry in descriptor.entries:
            value = spec_sup(entry.tail, self.ctx)
            for slot_relation, left, right in entry.slots:
                slot = relation_formula(slot_relation, left, right)
                value = algebra.meet(value, algebra.neg(self.value(slot)))
            terms.append(value)
        return algebra.join_all(terms)

    def _compute(self, phi):
        algebra = self.algebra
        if isinstance(phi, Top):
            return algebra.zero
        if isinstance(phi, Bot):
            return algebra.one
        if isinstance(phi, Relation):
            kind = undefined_kind(phi)
            if kind is not None:
                return algebra.one if kind == PLAIN else algebra.zero
            if not (isinstance(phi.left, NameConst) and isinstance(phi.right, NameConst)):
                raise ValueError("Open atom in forcing: {}".format(format_formula(phi)))
            return self._atomic(phi.relation, phi.left.name, phi.right.name)
        if isinstance(phi, Atom):
            raise UninterpretedAtom("No forcing value for the schematic atom {}".format(format_formula(phi)))
        if isinstance(phi, Imp):
            return algebra.meet(algebra.neg(self.value(phi.premise)), self.value(phi.conclusion))
        if isinstance(phi, Quantifier):
            if isinstance(phi, Forall) and self.universe is None:
                raise UnboundedQuantifier("Quantifier over {} needs a universe".format(phi.var))
            values = []
            for prefix, _, member in instances(phi, self.universe):
                value = self.value(member)
                if prefix is not None:
                    value = algebra.meet(_tau_term(prefix, self.ctx), value)
                values.append(value)
            return algebra.join_all(values)
        raise TypeError("Desugar before forcing: {!r}".format(phi))


def forcing_value(phi, universe, ctx):
    """``F(φ)``, the supremum of τ over ``‖φ‖``.

    Enumeration literals count as the top element unless ``ctx`` says otherwise.

    :param universe: the range of unbounded ∀, a :class:`NameUniverse` or None
    :raises NameOutsideUniverse: when a constant of ``phi`` is missing from ``universe``.
    """
    if universe is not None:
        outside = [name for name in constants(phi) if name not in universe]
        if outside:
            raise NameOutsideUniverse("Names outside the universe: {}".format(', '.join(sorted(str(name) for name in outside))))
    if ctx.literal_value is None:
        ctx = ctx.with_literal_value(ctx.algebra.one)
    return _Forcing(universe, ctx).value(phi)


def _check_delta(delta):
    if delta < 2:
        raise ValueError("delta must be at least 2, got {}".format(delta))


def _first_clique(candidates, size, compatible):
    """The lexicographically first ``size``-subset of ``candidates`` that is pairwise compatible."""
    chosen = []

    def extend(start):
        if len(chosen) == size:
            return True
        for index in range(start, len(candidates)):
            candidate = candidates[index]
            if all(compatible(previous, candidate) for previous in chosen):
                chosen.append(candidate)
                if extend(index + 1):
                    return True
                chosen.pop()
        return False

    return tuple(chosen) if extend(0) else None


def ba_delta_cc(ba, delta):
    """The δ-chain condition of a Boolean algebra: no antichain of ``delta`` nonzero elements.

    Usage:
        >>> ba_delta_cc(BoolAlg.powerset(3), 3)
        ChainVerdict(holds=False, witness=('a1', 'a2', 'a3'))
    """
    _check_delta(delta)
    antichain = _first_clique(ba.nonzero, delta, lambda a, b: ba.meet(a, b) == ba.zero)
    return ChainVerdict(antichain is None, antichain)


_IDENTITY = combinator('I')


def _in_pole(ctx, head, *stack):
    return pole_decide(Process(head, push_all(stack[:-1], stack[-1])), ctx).in_pole


def _chain_search(ctx, delta, symmetric):
    algebra = ctx.algebra
    for c in algebra.carrier:
        pi = Bottom(ctx.bottom_for(c))
        conts = {b: Kont(Bottom(ctx.bottom_for(b))) for b in algebra.carrier}
        # p = t = I; a candidate u_β whose p ⋆ t·u_β·π is already in the pole cannot be part of a counterexample
        candidates = [b for b in algebra.carrier if not _in_pole(ctx, _IDENTITY, _IDENTITY, conts[b], pi)]

        def compatible(earlier, later):
            forward = _in_pole(ctx, _IDENTITY, conts[earlier], conts[later], pi)
            if not symmetric:
                return forward
            return forward and _in_pole(ctx, _IDENTITY, conts[later], conts[earlier], pi)

        sequence = _first_clique(candidates, delta, compatible)
        if sequence is not None:
            return c, sequence
    return None


def algebra_delta_chain_condition(ctx, delta):
    """The δ-chain condition of 𝒜_ℬ decided on the τ-quotient.

    A counterexample is a context ``c = τ(π)`` and a sequence ``b_β = τ(u_β)`` with
    ``t ⋆ u_γ·u_β·π`` in the pole for γ < β while no ``p ⋆ t·u_β·π`` is.

    :rtype: ChainVerdict with witness ``(c, sequence)``
    """
    _check_delta(delta)
    found = _chain_search(ctx, delta, symmetric=False)
    logger.debug("algebra chain condition at delta %d: %s", delta, found)
    return ChainVerdict(found is None, found)


def uniform_delta_chain_condition(ctx, delta):
    """The uniform variant: the hypothesis is required for both orders of every pair."""
    _check_delta(delta)
    found = _chain_search(ctx, delta, symmetric=True)
    return ChainVerdict(found is None, found)


def _build_algebra_grammar():
    element = pp.Regex(r"[\w']+")
    eq = pp.Suppress('=')
    return pp.MatchFirst([
        pp.Keyword('atoms') + pp.Regex(r'\d+'),
        pp.Keyword('elem') + pp.OneOrMore(element),
        pp.Keyword('zero') + element,
        pp.Keyword('one') + element,
        pp.Keyword('meet') + element + element + eq + element,
        pp.Keyword('join') + element + element + eq + element,
        pp.Keyword('neg') + element + eq + element,
    ])


_STATEMENT = _build_algebra_grammar()


def _statements(text):
    offset = 0
    for line in text.splitlines(True):
        code = line.split('#', 1)[0]
        position = offset
        for chunk in code.split(';'):
            if chunk.strip():
                try:
                    yield list(_STATEMENT.parse_string(chunk, parse_all=True))
                except pp.ParseBaseException as error:
                    raise ParseError(text, position + error.loc, error.msg)
            position += len(chunk) + 1
        offset += len(line)


def parse_algebra(text):
    """Read an algebra file.

    Either ``atoms n`` for the powerset algebra, or explicit tables::

        elem 0 a b 1
        zero 0; one 1
        meet a b = 0
        join a b = 1
        neg a = b

    Meets and joins with ``0``, ``1`` and an element itself, and the symmetric entries,
    may be omitted.

    :raises ParseError: on malformed text.
    :raises AlgebraError: when the tables do not form a Boolean algebra.
    """
    statements = list(_statements(text))
    if not statements:
        raise AlgebraError("Empty algebra description")
    atoms = [statement for statement in statements if statement[0] == 'atoms']
    if atoms:
        if len(statements) != 1:
            raise AlgebraError("'atoms' cannot be combined with explicit tables")
        return BoolAlg.powerset(int(atoms[0][1]))

    carrier, meet, join, neg = [], {}, {}, {}
    zero = one = None
    for statement in statements:
        keyword, args = statement[0], statement[1:]
        if keyword == 'elem':
            carrier.extend(element for element in args if element not in carrier)
        elif keyword == 'zero':
            zero = args[0]
        elif keyword == 'one':
            one = args[0]
        elif keyword in ('meet', 'join'):
            table = meet if keyword == 'meet' else join
            a, b, value = args
            table[(a, b)] = table[(b, a)] = value
        else:
            neg[args[0]] = args[1]
    if zero is None or one is None:
        raise AlgebraError("Explicit algebras declare 'zero' and 'one'")
    for element in [zero, one] + list(neg) + list(neg.values()):
        if element not in carrier:
            carrier.append(element)
    for a in carrier:
        meet.setdefault((a, a), a)
        join.setdefault((a, a), a)
        for unit, absorbing, table in ((one, zero, meet), (zero, one, join)):
            table.setdefault((a, unit), a)
            table.setdefault((unit, a), a)
            table.setdefault((a, absorbing), absorbing)
            table.setdefault((absorbing, a), absorbing)
    neg.setdefault(zero, one)
    neg.setdefault(one, zero)
    return BoolAlg(carrier, meet, join, neg, zero, one)


_ATOMS_SHORTHAND = re.compile(r'^atoms(\d+)$')


def load_algebra(spec):
    """An algebra from the ``atomsN`` shorthand or from a file path."""
    match = _ATOMS_SHORTHAND.match(spec)
    if match:
        return BoolAlg.powerset(int(match.group(1)))
    with io.open(spec, encoding='utf-8') as f:
        return parse_algebra(f.read())
