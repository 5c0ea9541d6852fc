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

import functools
from collections import namedtuple
from dataclasses import dataclass
from logging import getLogger

from .lambda_c import (Term, Stack, Push, EnumLit, church, alpha_eq, stack_alpha_eq,
                       format_term, format_stack)

logger = getLogger(__name__)

__all__ = [
    'StackSpec', 'AllStacks', 'PrefixAll', 'Finite', 'ALL_STACKS',
    'Name', 'NameUniverse', 'BoundExceeded',
    'mk_gimel', 'mk_reish', 'mk_hat', 'sng', 'up', 'op', 'unpair',
    'lift', 'ordered_lift', 'apply_lift', 'h_apply', 'mk_h', 'lt_truth',
    'reish_ord_segment', 'dom', 'rank', 'ORDINAL_FUNCTIONS',
    'falsity_atomic', 'SpecUnion', 'EntryObligation', 'EntryObligations',
    'NOT_EPS', 'NEQ', 'NOT_IN', 'SUB',
]


class BoundExceeded(ValueError):
    """ An enumeration literal above the declared bound was requested. """
    pass


class StackSpec(object):
    """ A set of stacks of one of the shapes names are built from. """
    __slots__ = ()

    def contains(self, stack):
        raise NotImplementedError()


@dataclass(frozen=True)
class AllStacks(StackSpec):
    """ Every stack, Π. """

    def contains(self, stack):
        return True

    @property
    def key(self):
        return '*'


@dataclass(frozen=True)
class PrefixAll(StackSpec):
    """ ``{t1·…·tk·π | π ∈ Π}`` for the closed terms ``prefix``. """
    prefix: tuple

    def __post_init__(self):
        prefix = tuple(self.prefix)
        if not prefix:
            raise ValueError("PrefixAll needs a nonempty prefix")
        if not all(isinstance(term, Term) for term in prefix):
            raise TypeError("PrefixAll prefix must hold terms, got {!r}".format(prefix))
        object.__setattr__(self, 'prefix', prefix)

    def contains(self, stack):
        for term in self.prefix:
            if not isinstance(stack, Push) or not alpha_eq(stack.term, term):
                return False
            stack = stack.stack
        return True

    @property
    def key(self):
        return '.'.join(format_term(term) for term in self.prefix) + '.*'


@dataclass(frozen=True)
class Finite(StackSpec):
    """ An explicit finite set of stacks. """
    stacks: tuple

    def __post_init__(self):
        stacks = tuple(self.stacks)
        if not all(isinstance(stack, Stack) for stack in stacks):
            raise TypeError("Finite stack sets hold stacks, got {!r}".format(stacks))
        object.__setattr__(self, 'stacks', stacks)

    def contains(self, stack):
        return any(stack_alpha_eq(stack, member) for member in self.stacks)

    @property
    def key(self):
        return '[' + '|'.join(format_stack(stack) for stack in self.stacks) + ']'


ALL_STACKS = AllStacks()


def _label_arg(name):
    label = str(name)
    return '(' + label + ')' if ' ' in label else label


class Name(object):
    """A name: a finite set of ``(Name, StackSpec)`` entries.

    Equality is structural and ignores entry order. The display ``label`` and the ordinal
    tag (``('reish', n)`` or ``('hat', n)``) are carried along for printing and for
    side conditions but take no part in equality.

    :param entries: iterable of ``(Name, StackSpec)`` pairs
    :param str label: display label
    :param tuple ordinal: optional ``(kind, index)`` tag
    """
    __slots__ = ('entries', 'label', 'ordinal', 'rank', 'key', '_hash')

    def __init__(self, entries=(), label=None, ordinal=None):
        entries = frozenset(entries)
        for child, spec in entries:
            if not isinstance(child, Name) or not isinstance(spec, StackSpec):
                raise TypeError("Name entries are (Name, StackSpec) pairs, got {!r}".format((child, spec)))
        self.entries = entries
        self.rank = 1 + max(child.rank for child, _ in entries) if entries else 0
        self.key = '{' + ','.join(sorted('(' + child.key + ';' + spec.key + ')' for child, spec in entries)) + '}'
        self._hash = hash(self.key)
        self.label = label
        self.ordinal = ordinal

    def __eq__(self, other):
        return isinstance(other, Name) and self._hash == other._hash and self.key == other.key

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return self._hash

    def __str__(self):
        return self.label if self.label is not None else self.key

    def __repr__(self):
        return "Name({})".format(self)

    def sorted_entries(self):
        """Entries in a fixed order: by child rank, child key, then spec key."""
        return sorted(self.entries, key=lambda entry: (entry[0].rank, entry[0].key, entry[1].key))

    @property
    def children(self):
        return frozenset(child for child, _ in self.entries)

    def relabeled(self, label):
        """An equal name displayed as ``label``; the ordinal tag is dropped."""
        copy = Name.__new__(Name)
        copy.entries, copy.rank, copy.key, copy._hash = self.entries, self.rank, self.key, self._hash
        copy.label, copy.ordinal = label, None
        return copy


EMPTY_NAME = Name(label='reish 0', ordinal=('reish', 0))


def dom(a):
    """``dom(a) = {b | ∃π (b, π) ∈ a}``."""
    return a.children


def rank(a):
    return a.rank


def mk_gimel(xs):
    """``𝔤(x) = x × Π``.

    Usage:
        >>> mk_gimel([mk_reish(0)]) == mk_reish(1)
        True
    """
    xs = list(xs)
    label = 'gimel{' + ', '.join(sorted(str(x) for x in xs)) + '}'
    return Name([(x, ALL_STACKS) for x in xs], label=label)


@functools.lru_cache(maxsize=None)
def mk_reish(n):
    """``⌐n``, pairing each ``⌐m`` (m < n) with every stack."""
    if n < 0:
        raise ValueError("reish is defined on natural numbers, got {}".format(n))
    if n == 0:
        return EMPTY_NAME
    return Name([(mk_reish(m), ALL_STACKS) for m in range(n)], label='reish {}'.format(n), ordinal=('reish', n))


@functools.lru_cache(maxsize=None)
def _hat(n):
    return Name([(_hat(b), PrefixAll((EnumLit(b),))) for b in range(n)], label='hat {}'.format(n), ordinal=('hat', n))


def mk_hat(n, bound=None):
    """``α̂``, pairing each ``β̂`` (β < α) with the stacks starting with ``ν_β``.

    :param int bound: largest index the enumeration provides, unlimited when None
    :raises BoundExceeded: if ``n`` is above ``bound``.
    """
    if n < 0:
        raise ValueError("hat is defined on natural numbers, got {}".format(n))
    if bound is not None and n > bound:
        raise BoundExceeded("hat {} exceeds the enumeration bound {}".format(n, bound))
    return _hat(n)


_ZERO_PREFIX = PrefixAll((church(0),))
_ONE_PREFIX = PrefixAll((church(1),))


def sng(a):
    """``{a} × Π``."""
    return Name([(a, ALL_STACKS)], label='sng ' + _label_arg(a))


def up(a, b):
    """The unordered pair ``{(a, 0̲·π), (b, 1̲·π)}``."""
    return Name([(a, _ZERO_PREFIX), (b, _ONE_PREFIX)], label='up {} {}'.format(_label_arg(a), _label_arg(b)))


def op(a, b):
    """The ordered pair ``up(up(sng(a), ⌐0), sng(sng(b)))``."""
    return up(up(sng(a), mk_reish(0)), sng(sng(b))).relabeled('op {} {}'.format(_label_arg(a), _label_arg(b)))


def _up_parts(c):
    first = second = None
    for child, spec in c.entries:
        if spec == _ZERO_PREFIX and first is None:
            first = child
        elif spec == _ONE_PREFIX and second is None:
            second = child
        else:
            return None
    if first is None or second is None:
        return None
    return first, second


def _sng_part(c):
    if len(c.entries) != 1:
        return None
    child, spec = next(iter(c.entries))
    return child if spec == ALL_STACKS else None


def unpair(c):
    """Decode ``op(a, b)`` into ``(a, b)``; None for any other name."""
    halves = _up_parts(c)
    if halves is None:
        return None
    inner = _up_parts(halves[0])
    if inner is None or inner[1] != EMPTY_NAME:
        return None
    left = _sng_part(inner[0])
    wrapped = _sng_part(halves[1])
    right = _sng_part(wrapped) if wrapped is not None else None
    if left is None or right is None:
        return None
    return left, right


def _mapping_items(f):
    return list(f.items()) if hasattr(f, 'items') else list(f)


def lift(f, label=None):
    """``⌐f = {(op(c, f(c)), π) | c ∈ dom f}`` for a finite map of names.

    :param f: mapping or iterable of ``(Name, Name)`` pairs
    """
    items = _mapping_items(f)
    if label is None:
        label = 'lift{' + ', '.join(sorted('{} -> {}'.format(c, v) for c, v in items)) + '}'
    return Name([(op(c, v), ALL_STACKS) for c, v in items], label=label)


ORDINAL_FUNCTIONS = {
    'succ': lambda alpha: alpha + 1,
    'id': lambda alpha: alpha,
}


def ordered_lift(f, bound, label=None):
    """``f̂ = {(op(α̂, f(α)^), ν_α·π) | α < bound}``.

    :param f: callable on naturals, or a mapping that must be total on ``range(bound)``
    :raises ValueError: when a mapping misses an ordinal below ``bound``.
    """
    if hasattr(f, 'items'):
        missing = [alpha for alpha in range(bound) if alpha not in f]
        if missing:
            raise ValueError("Ordered lift is undefined below the bound {} at {}".format(bound, missing))
        values = [f[alpha] for alpha in range(bound)]
    else:
        values = [f(alpha) for alpha in range(bound)]
    entries = [(op(mk_hat(alpha), mk_hat(value)), PrefixAll((EnumLit(alpha),))) for alpha, value in enumerate(values)]
    return Name(entries, label=label or 'olift {}'.format(bound))


def apply_lift(f, x):
    """Ground application of a lift name: the ``b`` with ``op(x, b)`` in ``dom(f)``, else None."""
    for child in sorted(f.children, key=lambda name: name.key):
        pair = unpair(child)
        if pair is not None and pair[0] == x:
            return pair[1]
    return None


def h_apply(a, x):
    """``𝔥(a, x)``: ⌐0 for ``a = ⌐0``, ``x`` for ``a = ⌐1``, undefined (None) otherwise."""
    if a == mk_reish(0):
        return mk_reish(0)
    if a == mk_reish(1):
        return x
    return None


def mk_h(xs):
    """The lift of ``𝔥`` restricted to second arguments ``xs``, domain elements op-encoded."""
    mapping = {}
    for x in xs:
        mapping[op(mk_reish(0), x)] = mk_reish(0)
        mapping[op(mk_reish(1), x)] = x
    return lift(mapping, label='h{' + ', '.join(sorted(str(x) for x in xs)) + '}')


def lt_truth(x, y):
    """``⟨x < y⟩``: ⌐1 if ``x ∈ dom(y)`` literally, else ⌐0."""
    return mk_reish(1) if x in dom(y) else mk_reish(0)


class NameUniverse(object):
    """A finite dom-closed set of names.

    Members are closed under ``dom`` on construction and kept in (rank, key) order.

    :param names: generating names
    :param str class_marker: set when the universe stands in for a class such as ``⌐Ord``
    """

    def __init__(self, names=(), class_marker=None):
        closed = set()
        pending = list(names)
        while pending:
            name = pending.pop()
            if name in closed:
                continue
            closed.add(name)
            pending.extend(dom(name))
        self._members = tuple(sorted(closed, key=lambda name: (name.rank, name.key)))
        self._index = frozenset(self._members)
        self.class_marker = class_marker

    @classmethod
    def closure(cls, names):
        return cls(names)

    @property
    def members(self):
        return self._members

    def __iter__(self):
        return iter(self._members)

    def __len__(self):
        return len(self._members)

    def __contains__(self, name):
        return name in self._index

    def below_rank(self, bound):
        return tuple(name for name in self._members if name.rank < bound)

    def extend(self, names):
        return NameUniverse(list(self._members) + list(names), self.class_marker)

    def __repr__(self):
        return "NameUniverse({})".format(', '.join(str(name) for name in self._members))


def reish_ord_segment(bound):
    """The truncation ``{⌐α | α < bound}`` of ``⌐Ord``, marked as a class surrogate."""
    return NameUniverse([mk_reish(alpha) for alpha in range(bound)], class_marker='reish-ord')


NOT_EPS = 'neps'
NEQ = 'neq'
NOT_IN = 'nin'
SUB = 'sub'

_ATOM_ALIASES = {
    u'ε̸': NOT_EPS, '!eps': NOT_EPS, NOT_EPS: NOT_EPS,
    u'≠': NEQ, '!=': NEQ, NEQ: NEQ,
    u'∉': NOT_IN, '!in': NOT_IN, NOT_IN: NOT_IN,
    u'⊆': SUB, 'sub': SUB,
}


@dataclass(frozen=True)
class SpecUnion(object):
    """ A union of stack specifications. """
    specs: tuple

    @property
    def is_empty(self):
        return not self.specs

    @property
    def is_full(self):
        return any(isinstance(spec, AllStacks) for spec in self.specs)

    def contains(self, stack):
        return any(spec.contains(stack) for spec in self.specs)


EntryObligation = namedtuple('EntryObligation', ['child', 'slots', 'tail'])
EntryObligation.__doc__ = """ One entry of a ∉/⊆ falsity value.

:ivar Name child: the entry's name c
:ivar tuple slots: realizer obligations as ``(relation, left, right)`` triples, outermost first
:ivar StackSpec tail: the entry's stack specification σ
"""


@dataclass(frozen=True)
class EntryObligations(object):
    """ ``‖a ∉ b‖`` or ``‖a ⊆ b‖`` as the union over entries of ``slots·σ``. """
    relation: str
    entries: tuple

    @property
    def is_empty(self):
        return not self.entries


def falsity_atomic(atom, a, b):
    """Describe the falsity value of an atomic formula.

    :param str atom: ``ε̸``/``neps``, ``≠``/``neq``, ``∉``/``nin`` or ``⊆``/``sub``
    :rtype: SpecUnion or EntryObligations

    Usage:
        >>> falsity_atomic('neps', mk_reish(0), mk_reish(1)).specs
        (AllStacks(),)
        >>> falsity_atomic('neq', mk_reish(0), mk_reish(0)).is_full
        True
    """
    kind = _ATOM_ALIASES.get(atom)
    if kind is None:
        raise ValueError("Unknown atomic relation: {}".format(atom))
    if kind == NOT_EPS:
        specs = sorted((spec for child, spec in b.entries if child == a), key=lambda spec: spec.key)
        return SpecUnion(tuple(specs))
    if kind == NEQ:
        return SpecUnion(() if a != b else (ALL_STACKS,))
    if kind == NOT_IN:
        return EntryObligations(NOT_IN, tuple(
            EntryObligation(c, ((SUB, a, c), (SUB, c, a)), spec) for c, spec in b.sorted_entries()))
    return EntryObligations(SUB, tuple(
        EntryObligation(c, ((NOT_IN, c, b),), spec) for c, spec in a.sorted_entries()))
