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
from dataclasses import dataclass, replace
from logging import getLogger

import pyparsing as pp

from .lambda_c import EnumLit, ParseError, alpha_eq
from .names import (Name, AllStacks, PrefixAll, Finite, SpecUnion, EntryObligations,
                    NOT_EPS, NEQ, NOT_IN, SUB, ORDINAL_FUNCTIONS,
                    mk_gimel, mk_reish, mk_hat, sng, up, op, lift, ordered_lift, apply_lift,
                    h_apply, lt_truth, reish_ord_segment, falsity_atomic)

logger = getLogger(__name__)

__all__ = [
    'NameExpr', 'NameVar', 'NameConst', 'NameApply', 'Undefined', 'PLAIN', 'ORDERED', 'NAME_FUNCTIONS',
    'Formula', 'Top', 'Bot', 'Relation', 'NotEps', 'Neq', 'NotIn', 'Sub', 'Imp', 'Atom',
    'Quantifier', 'Forall', 'ForallGimel', 'ForallHat', 'ForallReishOrd',
    'Sugar', 'Eps', 'In', 'Eq', 'Equiv', 'NotEquiv', 'SubEps', 'And', 'Or', 'Iff', 'Not',
    'Exists', 'ForallEps', 'ExistsEps', 'Macro', 'MACROS',
    'UnboundedQuantifier', 'UninterpretedAtom',
    'Empty', 'Everything', 'Uninterpreted', 'AtomicShape', 'ArrowShape', 'FamilyShape',
    'desugar', 'subst_name', 'evaluate_name', 'free_name_vars', 'constants', 'instances',
    'relation_formula', 'undefined_kind', 'falsity_shape', 'falsity_empty', 'falsity_full', 'falsity_included', 'match_formula',
    'format_formula', 'format_name_expr', 'parse_formula', 'parse_sugared', 'parse_name_expr', 'parse_name_exprs',
]


class UnboundedQuantifier(ValueError):
    """ An unbounded quantifier was met without a universe to range over. """
    pass


class UninterpretedAtom(ValueError):
    """ A schematic atom has no falsity value outside hypotheses. """
    pass


PLAIN = 'plain'
ORDERED = 'ordered'


class NameExpr(object):
    __slots__ = ()

    def __str__(self):
        return format_name_expr(self)


@dataclass(frozen=True)
class NameVar(NameExpr):
    ident: str


@dataclass(frozen=True)
class NameConst(NameExpr):
    name: Name


@dataclass(frozen=True)
class NameApply(NameExpr):
    function: str
    args: tuple


@dataclass(frozen=True)
class Undefined(NameExpr):
    """ A lift applied outside its domain; ``kind`` is ``plain`` or ``ordered``. """
    kind: str


NameFunction = namedtuple('NameFunction', ['arity', 'compute', 'undefined'])

NAME_FUNCTIONS = {
    'sng': NameFunction(1, sng, None),
    'up': NameFunction(2, up, None),
    'op': NameFunction(2, op, None),
    'ltt': NameFunction(2, lt_truth, None),
    'hlift': NameFunction(2, h_apply, PLAIN),
    'app': NameFunction(2, apply_lift, PLAIN),
    'happ': NameFunction(2, apply_lift, ORDERED),
    'gimel': NameFunction(None, lambda *xs: mk_gimel(xs), None),
    'lift': NameFunction(None, lambda *xs: lift(list(zip(xs[::2], xs[1::2]))), None),
}


def evaluate_name(expr):
    """Evaluate every closed function application inside ``expr``."""
    if not isinstance(expr, NameApply):
        return expr
    args = tuple(evaluate_name(arg) for arg in expr.args)
    for arg in args:
        if isinstance(arg, Undefined):
            return arg
    if not all(isinstance(arg, NameConst) for arg in args):
        return NameApply(expr.function, args)
    function = NAME_FUNCTIONS[expr.function]
    result = function.compute(*[arg.name for arg in args])
    if result is None:
        return Undefined(function.undefined)
    return NameConst(result)


class Formula(object):
    __slots__ = ()

    def __str__(self):
        return format_formula(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


class Relation(Formula):
    """ Base of the four primitive binary relations. """
    __slots__ = ()
    relation = None
    symbol = None


@dataclass(frozen=True)
class NotEps(Relation):
    left: NameExpr
    right: NameExpr
    relation = NOT_EPS
    symbol = '!eps'


@dataclass(frozen=True)
class Neq(Relation):
    left: NameExpr
    right: NameExpr
    relation = NEQ
    symbol = '!='


@dataclass(frozen=True)
class NotIn(Relation):
    left: NameExpr
    right: NameExpr
    relation = NOT_IN
    symbol = '!in'


@dataclass(frozen=True)
class Sub(Relation):
    left: NameExpr
    right: NameExpr
    relation = SUB
    symbol = 'sub'


_RELATIONS = {NOT_EPS: NotEps, NEQ: Neq, NOT_IN: NotIn, SUB: Sub}


def relation_formula(relation, a, b):
    """The primitive atom ``a R b`` for a relation constant and two names."""
    return _RELATIONS[relation](NameConst(a), NameConst(b))


@dataclass(frozen=True)
class Imp(Formula):
    premise: Formula
    conclusion: Formula


@dataclass(frozen=True)
class Atom(Formula):
    """ A schematic predicate such as ``A`` or ``P(x)``. """
    ident: str
    args: tuple = ()


class Quantifier(Formula):
    __slots__ = ()


@dataclass(frozen=True)
class Forall(Quantifier):
    var: str
    body: Formula


@dataclass(frozen=True)
class ForallGimel(Quantifier):
    """ ``∀x^{𝔤(A)} φ`` for the finite set ``members`` = A. """
    var: str
    members: tuple
    body: Formula

    def __post_init__(self):
        members = tuple(sorted(set(self.members), key=lambda name: (name.rank, name.key)))
        object.__setattr__(self, 'members', members)


@dataclass(frozen=True)
class ForallHat(Quantifier):
    """ ``∀x^{α̂} φ``; each instance β̂ carries the stack prefix ``ν_β``. """
    var: str
    bound: int
    body: Formula


@dataclass(frozen=True)
class ForallReishOrd(Quantifier):
    """ ``∀x^{⌐Ord} φ`` truncated below ``bound``. """
    var: str
    bound: int
    body: Formula


class Sugar(Formula):
    """ Abbreviations removed by :func:`desugar`. """
    __slots__ = ()


@dataclass(frozen=True)
class Eps(Sugar):
    left: NameExpr
    right: NameExpr


@dataclass(frozen=True)
class In(Sugar):
    left: NameExpr
    right: NameExpr


@dataclass(frozen=True)
class Eq(Sugar):
    left: NameExpr
    right: NameExpr


@dataclass(frozen=True)
class Equiv(Sugar):
    left: NameExpr
    right: NameExpr


@dataclass(frozen=True)
class NotEquiv(Sugar):
    left: NameExpr
    right: NameExpr


@dataclass(frozen=True)
class SubEps(Sugar):
    left: NameExpr
    right: NameExpr


@dataclass(frozen=True)
class And(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Iff(Sugar):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Not(Sugar):
    body: Formula


@dataclass(frozen=True)
class Exists(Sugar):
    """ ``∃x φ``; ``binder`` is None or a bounded form ``('gimel', names)``, ``('hat', n)`` or ``('rord', n)``. """
    var: str
    body: Formula
    binder: tuple = None


@dataclass(frozen=True)
class ForallEps(Sugar):
    var: str
    set_expr: NameExpr
    body: Formula


@dataclass(frozen=True)
class ExistsEps(Sugar):
    var: str
    set_expr: NameExpr
    body: Formula


@dataclass(frozen=True)
class Macro(Sugar):
    name: str
    args: tuple = ()


def _bounded(var, binder, body):
    if binder is None:
        return Forall(var, body)
    kind, data = binder
    if kind == 'gimel':
        return ForallGimel(var, data, body)
    if kind == 'hat':
        return ForallHat(var, data, body)
    return ForallReishOrd(var, data, body)


class _Fresh(object):

    def __init__(self):
        self._count = 0

    def __call__(self):
        self._count += 1
        return '_{}'.format(self._count)


def _op(x, y):
    return NameApply('op', (x, y))


def _ext_fun(fresh, f, a):
    x1, x2, y1, y2 = [NameVar(fresh()) for _ in range(4)]
    core = Imp(Equiv(x1, x2), Imp(Eps(_op(x1, y1), f), Imp(Eps(_op(x2, y2), f), Imp(NotEquiv(y1, y2), Bot()))))
    return ForallEps(x1.ident, a, ForallEps(x2.ident, a, Forall(y1.ident, Forall(y2.ident, core))))


def _eps_fun(fresh, f, a):
    x, y, z = [NameVar(fresh()) for _ in range(3)]
    core = Imp(Eps(_op(x, y), f), Imp(Eps(_op(x, z), f), Imp(Neq(y, z), Bot())))
    return ForallEps(x.ident, a, Forall(y.ident, Forall(z.ident, core)))


def _eps_surj(fresh, f, a, b):
    x, y = [NameVar(fresh()) for _ in range(2)]
    inner = Forall(x.ident, Imp(Eps(_op(x, y), f), NotEps(x, a)))
    return Forall(y.ident, Imp(Eps(y, b), Imp(inner, Bot())))


def _eps_trans(fresh, a):
    x, y = [NameVar(fresh()) for _ in range(2)]
    return ForallEps(x.ident, a, ForallEps(y.ident, x, Eps(y, a)))


def _eps_ord(fresh, a):
    x = NameVar(fresh())
    return And(_eps_trans(fresh, a), ForallEps(x.ident, a, _eps_trans(fresh, x)))


def _eps_tod(fresh, a):
    b, c = [NameVar(fresh()) for _ in range(2)]
    trichotomy = Or(Eps(b, c), Or(Eps(c, b), Eq(b, c)))
    return And(_eps_trans(fresh, a), ForallEps(b.ident, a, ForallEps(c.ident, a, trichotomy)))


def _neac(fresh):
    r, f, x, y, z = [NameVar(fresh()) for _ in range(5)]
    functional = Forall(x.ident, Forall(y.ident, Forall(z.ident, Imp(And(Eps(_op(x, y), f), Eps(_op(x, z), f)), Eq(y, z)))))
    total = Forall(x.ident, Forall(y.ident, Exists(z.ident, Imp(Eps(_op(x, y), r), Eps(_op(x, z), f)))))
    return Forall(r.ident, Exists(f.ident, And(functional, And(SubEps(f, r), total))))


MACROS = {
    'ExtFun': (2, _ext_fun),
    'EpsFun': (2, _eps_fun),
    'EpsSurj': (3, _eps_surj),
    'EpsTrans': (1, _eps_trans),
    'EpsOrd': (1, _eps_ord),
    'EpsTOD': (1, _eps_tod),
    'NEAC': (0, _neac),
}


def desugar(phi, fresh=None):
    """Rewrite the abbreviations into ``⊤ ⊥ ε̸ ≠ ∉ ⊆ → ∀`` and the bounded quantifiers.

    Usage:
        >>> a, b = NameVar('a'), NameVar('b')
        >>> desugar(Eps(a, b)) == Imp(NotEps(a, b), Bot())
        True
    """
    fresh = fresh or _Fresh()
    again = functools.partial(desugar, fresh=fresh)
    if isinstance(phi, (Top, Bot, Relation, Atom)):
        return phi
    if isinstance(phi, Imp):
        return Imp(again(phi.premise), again(phi.conclusion))
    if isinstance(phi, Quantifier):
        return replace(phi, body=again(phi.body))
    if isinstance(phi, Eps):
        return Imp(NotEps(phi.left, phi.right), Bot())
    if isinstance(phi, In):
        return Imp(NotIn(phi.left, phi.right), Bot())
    if isinstance(phi, Eq):
        return Imp(Neq(phi.left, phi.right), Bot())
    if isinstance(phi, NotEquiv):
        return Imp(Sub(phi.left, phi.right), Imp(Sub(phi.right, phi.left), Bot()))
    if isinstance(phi, Equiv):
        return Imp(again(NotEquiv(phi.left, phi.right)), Bot())
    if isinstance(phi, Not):
        return Imp(again(phi.body), Bot())
    if isinstance(phi, And):
        return Imp(Imp(again(phi.left), Imp(again(phi.right), Bot())), Bot())
    if isinstance(phi, Or):
        return Imp(Imp(again(phi.left), Bot()), Imp(Imp(again(phi.right), Bot()), Bot()))
    if isinstance(phi, Iff):
        return again(And(Imp(phi.left, phi.right), Imp(phi.right, phi.left)))
    if isinstance(phi, Exists):
        return Imp(_bounded(phi.var, phi.binder, Imp(again(phi.body), Bot())), Bot())
    if isinstance(phi, ForallEps):
        return Forall(phi.var, Imp(again(Eps(NameVar(phi.var), phi.set_expr)), again(phi.body)))
    if isinstance(phi, ExistsEps):
        return Imp(Forall(phi.var, Imp(again(phi.body), NotEps(NameVar(phi.var), phi.set_expr))), Bot())
    if isinstance(phi, SubEps):
        x = NameVar(fresh())
        return again(Forall(x.ident, Imp(Eps(x, phi.left), Eps(x, phi.right))))
    if isinstance(phi, Macro):
        arity, template = MACROS[phi.name]
        if len(phi.args) != arity:
            raise ValueError("{} takes {} arguments, got {}".format(phi.name, arity, len(phi.args)))
        return again(template(fresh, *phi.args))
    raise TypeError("Not a formula: {!r}".format(phi))


def _subst_expr(expr, var, value):
    if isinstance(expr, NameVar):
        return value if expr.ident == var else expr
    if isinstance(expr, NameApply):
        return evaluate_name(NameApply(expr.function, tuple(_subst_expr(arg, var, value) for arg in expr.args)))
    return expr


def subst_name(phi, var, a):
    """``phi[a/var]``, evaluating name applications that become closed.

    :param a: a :class:`Name` or a name expression
    """
    value = a if isinstance(a, NameExpr) else NameConst(a)
    return _subst(phi, var, value)


def _subst(phi, var, value):
    if isinstance(phi, Relation):
        return type(phi)(_subst_expr(phi.left, var, value), _subst_expr(phi.right, var, value))
    if isinstance(phi, Atom):
        return Atom(phi.ident, tuple(_subst_expr(arg, var, value) for arg in phi.args))
    if isinstance(phi, Imp):
        return Imp(_subst(phi.premise, var, value), _subst(phi.conclusion, var, value))
    if isinstance(phi, Quantifier):
        if phi.var == var:
            return phi
        return replace(phi, body=_subst(phi.body, var, value))
    if isinstance(phi, Sugar):
        raise TypeError("Desugar before substituting: {!r}".format(phi))
    return phi


def _expr_vars(expr):
    if isinstance(expr, NameVar):
        return {expr.ident}
    if isinstance(expr, NameApply):
        return set().union(*[_expr_vars(arg) for arg in expr.args]) if expr.args else set()
    return set()


def free_name_vars(phi):
    if isinstance(phi, Relation):
        return frozenset(_expr_vars(phi.left) | _expr_vars(phi.right))
    if isinstance(phi, Atom):
        return frozenset(set().union(*[_expr_vars(arg) for arg in phi.args])) if phi.args else frozenset()
    if isinstance(phi, Imp):
        return free_name_vars(phi.premise) | free_name_vars(phi.conclusion)
    if isinstance(phi, Quantifier):
        return free_name_vars(phi.body) - {phi.var}
    return frozenset()


def _expr_constants(expr):
    if isinstance(expr, NameConst):
        return {expr.name}
    if isinstance(expr, NameApply):
        return set().union(*[_expr_constants(arg) for arg in expr.args]) if expr.args else set()
    return set()


def constants(phi):
    """Names occurring in ``phi``, including the ranges of gimel quantifiers."""
    if isinstance(phi, Relation):
        return frozenset(_expr_constants(phi.left) | _expr_constants(phi.right))
    if isinstance(phi, Atom):
        return frozenset(set().union(*[_expr_constants(arg) for arg in phi.args])) if phi.args else frozenset()
    if isinstance(phi, Imp):
        return constants(phi.premise) | constants(phi.conclusion)
    if isinstance(phi, ForallGimel):
        return constants(phi.body) | frozenset(phi.members)
    if isinstance(phi, Quantifier):
        return constants(phi.body)
    return frozenset()


def instances(phi, universe=None):
    """The instances of a quantifier as ``(prefix, name, formula)`` triples.

    ``prefix`` is the enumeration literal a hat quantifier puts in front of the stacks, or None.

    :raises UnboundedQuantifier: for a plain ∀ without ``universe``.
    """
    if isinstance(phi, Forall):
        if universe is None:
            raise UnboundedQuantifier("Quantifier over {} needs a universe".format(phi.var))
        members = list(universe)
        return [(None, member, subst_name(phi.body, phi.var, member)) for member in members]
    if isinstance(phi, ForallGimel):
        return [(None, member, subst_name(phi.body, phi.var, member)) for member in phi.members]
    if isinstance(phi, ForallHat):
        return [(EnumLit(beta), mk_hat(beta), subst_name(phi.body, phi.var, mk_hat(beta))) for beta in range(phi.bound)]
    if isinstance(phi, ForallReishOrd):
        return [(None, member, subst_name(phi.body, phi.var, member)) for member in reish_ord_segment(phi.bound)]
    raise TypeError("Not a quantifier: {!r}".format(phi))


@dataclass(frozen=True)
class Empty(object):
    """ ‖φ‖ = ∅. """


@dataclass(frozen=True)
class Everything(object):
    """ ‖φ‖ = Π. """


@dataclass(frozen=True)
class Uninterpreted(object):
    formula: Formula


@dataclass(frozen=True)
class AtomicShape(object):
    descriptor: object


@dataclass(frozen=True)
class ArrowShape(object):
    """ ``‖ψ → θ‖ = {t·π | t ⊩ ψ, π ∈ ‖θ‖}``. """
    premise: Formula
    conclusion: Formula


@dataclass(frozen=True)
class FamilyShape(object):
    """ A union over instances; each member is ``(prefix, name, formula)``. """
    members: tuple


def undefined_kind(phi):
    for expr in (phi.left, phi.right):
        if isinstance(expr, Undefined):
            return expr.kind
    return None


def _closed_names(phi):
    if not isinstance(phi.left, NameConst) or not isinstance(phi.right, NameConst):
        raise ValueError("Open or unevaluated atom: {}".format(format_formula(phi)))
    return phi.left.name, phi.right.name


def falsity_shape(phi, universe=None):
    """One level of the falsity value of a closed formula.

    :rtype: Empty, Everything, Uninterpreted, AtomicShape, ArrowShape or FamilyShape
    """
    if isinstance(phi, Top):
        return Empty()
    if isinstance(phi, Bot):
        return Everything()
    if isinstance(phi, Relation):
        kind = undefined_kind(phi)
        if kind is not None:
            return Everything() if kind == PLAIN else Empty()
        a, b = _closed_names(phi)
        return AtomicShape(falsity_atomic(phi.relation, a, b))
    if isinstance(phi, Atom):
        return Uninterpreted(phi)
    if isinstance(phi, Imp):
        return ArrowShape(phi.premise, phi.conclusion)
    if isinstance(phi, Quantifier):
        return FamilyShape(tuple(instances(phi, universe)))
    raise TypeError("Desugar before decomposing: {!r}".format(phi))


def falsity_empty(phi, universe=None):
    """True only if ‖phi‖ is certainly empty."""
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Relation):
        kind = undefined_kind(phi)
        if kind is not None:
            return kind == ORDERED
        if free_name_vars(phi):
            return False
        descriptor = falsity_atomic(phi.relation, *_closed_names(phi))
        if isinstance(descriptor, SpecUnion):
            return all(isinstance(spec, Finite) and not spec.stacks for spec in descriptor.specs)
        return all(isinstance(entry.tail, Finite) and not entry.tail.stacks for entry in descriptor.entries)
    if isinstance(phi, Imp):
        return falsity_empty(phi.conclusion, universe)
    if isinstance(phi, Quantifier):
        if isinstance(phi, Forall) and universe is None:
            return False
        return all(falsity_empty(member, universe) for _, _, member in instances(phi, universe))
    return False


def falsity_full(phi, universe=None):
    """True only if ‖phi‖ is certainly all of Π."""
    if isinstance(phi, Bot):
        return True
    if isinstance(phi, Relation):
        kind = undefined_kind(phi)
        if kind is not None:
            return kind == PLAIN
        if free_name_vars(phi) or isinstance(phi, (NotIn, Sub)):
            return False
        return falsity_atomic(phi.relation, *_closed_names(phi)).is_full
    if isinstance(phi, Quantifier) and not isinstance(phi, ForallHat):
        if isinstance(phi, Forall) and universe is None:
            return False
        return any(falsity_full(member, universe) for _, _, member in instances(phi, universe))
    return False


def _spec_included(spec, other):
    if isinstance(other, AllStacks):
        return True
    if isinstance(spec, Finite):
        return all(other.contains(stack) for stack in spec.stacks)
    if isinstance(spec, PrefixAll) and isinstance(other, PrefixAll):
        if len(other.prefix) > len(spec.prefix):
            return False
        return all(alpha_eq(mine, theirs) for mine, theirs in zip(spec.prefix, other.prefix))
    return False


def falsity_included(phi, psi, universe=None, _depth=0):
    """True only if ‖phi‖ ⊆ ‖psi‖ certainly holds.

    The check is syntactic: equal formulas, an empty left or full right side, instances of
    a quantified right side, all instances of a quantified left side, implications
    (premises contravariant) and unions of stack specifications.
    """
    if phi == psi:
        return True
    if _depth > 32:
        return False
    if falsity_full(psi, universe) or falsity_empty(phi, universe):
        return True
    deeper = _depth + 1
    if isinstance(psi, Quantifier) and not isinstance(psi, ForallHat) and not (isinstance(psi, Forall) and universe is None):
        if any(falsity_included(phi, member, universe, deeper) for _, _, member in instances(psi, universe)):
            return True
    if isinstance(phi, Quantifier) and not isinstance(phi, ForallHat) and not (isinstance(phi, Forall) and universe is None):
        if all(falsity_included(member, psi, universe, deeper) for _, _, member in instances(phi, universe)):
            return True
    if isinstance(phi, ForallHat) and isinstance(psi, ForallHat):
        shared = min(phi.bound, psi.bound)
        if phi.bound <= psi.bound:
            return all(falsity_included(subst_name(phi.body, phi.var, mk_hat(beta)),
                                        subst_name(psi.body, psi.var, mk_hat(beta)), universe, deeper)
                       for beta in range(shared))
        return False
    if isinstance(phi, Imp) and isinstance(psi, Imp):
        return (falsity_included(psi.premise, phi.premise, universe, deeper)
                and falsity_included(phi.conclusion, psi.conclusion, universe, deeper))
    if isinstance(phi, NotEps) and isinstance(psi, NotEps) and not (free_name_vars(phi) or free_name_vars(psi)):
        if undefined_kind(phi) or undefined_kind(psi):
            return False
        mine = falsity_atomic(NOT_EPS, *_closed_names(phi)).specs
        theirs = falsity_atomic(NOT_EPS, *_closed_names(psi)).specs
        return all(any(_spec_included(spec, other) for other in theirs) for spec in mine)
    return False


def _match_expr(pattern, target, variables, binding):
    if isinstance(pattern, NameVar) and pattern.ident in variables:
        if pattern.ident in binding:
            return binding[pattern.ident] == target
        binding[pattern.ident] = target
        return True
    if isinstance(pattern, NameApply) and isinstance(target, NameApply):
        return (pattern.function == target.function and len(pattern.args) == len(target.args)
                and all(_match_expr(p, t, variables, binding) for p, t in zip(pattern.args, target.args)))
    return pattern == target


def _match(pattern, target, variables, binding):
    if type(pattern) is not type(target):
        return False
    if isinstance(pattern, Relation):
        return (_match_expr(pattern.left, target.left, variables, binding)
                and _match_expr(pattern.right, target.right, variables, binding))
    if isinstance(pattern, Atom):
        return (pattern.ident == target.ident and len(pattern.args) == len(target.args)
                and all(_match_expr(p, t, variables, binding) for p, t in zip(pattern.args, target.args)))
    if isinstance(pattern, Imp):
        return (_match(pattern.premise, target.premise, variables, binding)
                and _match(pattern.conclusion, target.conclusion, variables, binding))
    if isinstance(pattern, Quantifier):
        if pattern.var != target.var or replace(pattern, body=Top()) != replace(target, body=Top()):
            return False
        return _match(pattern.body, target.body, variables - {pattern.var}, binding)
    return pattern == target


def match_formula(pattern, target, variables):
    """First-order matching of ``pattern`` against ``target``.

    :param variables: names of the pattern variables that may be bound
    :return: the binding as a dict of name expressions, or None
    """
    binding = {}
    if _match(pattern, target, frozenset(variables), binding):
        return binding
    return None


def format_name_expr(expr, nested=False):
    if isinstance(expr, NameVar):
        text = expr.ident
    elif isinstance(expr, NameConst):
        text = str(expr.name)
    elif isinstance(expr, Undefined):
        text = 'undefined'
    else:
        text = ' '.join([expr.function] + [format_name_expr(arg, nested=True) for arg in expr.args])
    if nested and ' ' in text and not (text.startswith('gimel{') or text.startswith('lift{')):
        return '(' + text + ')'
    return text


def _format_binder(phi):
    if isinstance(phi, Forall):
        return phi.var
    if isinstance(phi, ForallGimel):
        return '{}^gimel{{{}}}'.format(phi.var, ', '.join(str(name) for name in phi.members))
    if isinstance(phi, ForallHat):
        return '{}^hat({})'.format(phi.var, phi.bound)
    return '{}^rord({})'.format(phi.var, phi.bound)


def format_formula(phi):
    """Concrete syntax of a primitive formula.

    Usage:
        >>> format_formula(Imp(NotEps(NameVar('x'), NameConst(mk_reish(1))), Bot()))
        'x !eps reish 1 -> bot'
    """
    if isinstance(phi, Top):
        return 'top'
    if isinstance(phi, Bot):
        return 'bot'
    if isinstance(phi, Relation):
        return '{} {} {}'.format(format_name_expr(phi.left), phi.symbol, format_name_expr(phi.right))
    if isinstance(phi, Atom):
        if not phi.args:
            return phi.ident
        return '{}({})'.format(phi.ident, ', '.join(format_name_expr(arg) for arg in phi.args))
    if isinstance(phi, Imp):
        premise = format_formula(phi.premise)
        if isinstance(phi.premise, (Imp, Quantifier)):
            premise = '(' + premise + ')'
        return '{} -> {}'.format(premise, format_formula(phi.conclusion))
    if isinstance(phi, Quantifier):
        return 'all {}. {}'.format(_format_binder(phi), format_formula(phi.body))
    return repr(phi)


@dataclass(frozen=True)
class _Binder(object):
    kind: str
    data: object


_KEYWORDS = frozenset([
    'all', 'ex', 'not', 'top', 'bot', 'eps', 'in', 'sub', 'sub_eps',
    'reish', 'hat', 'rord', 'gimel', 'lift', 'olift', 'sng', 'up', 'op', 'ltt', 'hlift', 'app', 'happ',
])

_RELATION_BUILDERS = {
    '!eps': NotEps, '!=': Neq, '!in': NotIn, 'sub': Sub,
    'eps': Eps, 'in': In, '=': Eq, '~=': Equiv, '!~=': NotEquiv, 'sub_eps': SubEps,
}


def _closed(expr):
    value = evaluate_name(expr)
    if not isinstance(value, NameConst):
        raise pp.ParseFatalException('', 0, "Expected a closed name, got {}".format(format_name_expr(expr)))
    return value.name


def _rord_name(n):
    return mk_gimel([mk_reish(alpha) for alpha in range(n)]).relabeled('rord {}'.format(n))


def _olift(tokens):
    function, bound = tokens[0], tokens[1]
    if function not in ORDINAL_FUNCTIONS:
        raise pp.ParseFatalException('', 0, "Unknown ordinal function {}".format(function))
    return NameConst(ordered_lift(ORDINAL_FUNCTIONS[function], bound, label='olift {} {}'.format(function, bound)))


def _fold_left(builder):
    return lambda tokens: functools.reduce(builder, tokens)


def _build_grammar():
    kw = pp.Keyword
    nat = pp.Regex(r'\d+').set_parse_action(lambda t: int(t[0]))
    ident = pp.Regex(r"[a-z][\w']*").add_condition(lambda t: t[0] not in _KEYWORDS)
    lpar, rpar = pp.Suppress('('), pp.Suppress(')')
    lbrace, rbrace = pp.Suppress('{'), pp.Suppress('}')
    comma = pp.Suppress(',')

    name_expr = pp.Forward()
    name_atom = pp.Forward()
    name_list = name_expr + pp.ZeroOrMore(comma + name_expr)

    reish = (pp.Suppress(kw('reish')) + nat).set_parse_action(lambda t: NameConst(mk_reish(t[0])))
    hat = (pp.Suppress(kw('hat')) + nat).set_parse_action(lambda t: NameConst(mk_hat(t[0])))
    rord = (pp.Suppress(kw('rord')) + nat).set_parse_action(lambda t: NameConst(_rord_name(t[0])))
    gimel = (pp.Suppress(kw('gimel')) + lbrace + pp.Optional(name_list) + rbrace).set_parse_action(
        lambda t: evaluate_name(NameApply('gimel', tuple(t))))
    pair = name_expr + pp.Suppress('->') + name_expr
    lift_expr = (pp.Suppress(kw('lift')) + lbrace + pp.Optional(pair + pp.ZeroOrMore(comma + pair)) + rbrace).set_parse_action(
        lambda t: evaluate_name(NameApply('lift', tuple(t))))
    olift = (pp.Suppress(kw('olift')) + ident + nat).set_parse_action(_olift)
    variable = ident.copy().set_parse_action(lambda t: NameVar(t[0]))
    name_atom <<= reish | hat | rord | gimel | lift_expr | olift | (lpar + name_expr + rpar) | variable

    unary = (kw('sng') + name_atom).set_parse_action(lambda t: evaluate_name(NameApply(t[0], (t[1],))))
    binary = (pp.MatchFirst([kw(name) for name in ('up', 'op', 'ltt', 'hlift', 'app', 'happ')]) + name_atom + name_atom).set_parse_action(
        lambda t: evaluate_name(NameApply(t[0], (t[1], t[2]))))
    name_expr <<= unary | binary | name_atom

    formula = pp.Forward()
    relation_symbol = pp.Regex(r"!eps\b|!in\b|!~=|!=|~=|=|sub_eps\b|sub\b|eps\b|in\b")
    relation = (name_expr + relation_symbol + name_expr).set_parse_action(
        lambda t: _RELATION_BUILDERS[t[1]](t[0], t[2]))

    def _schematic(tokens):
        ident_, args = tokens[0], tuple(tokens[1:])
        if ident_ in MACROS:
            return Macro(ident_, args)
        return Atom(ident_, args)

    schematic = (pp.Regex(r"[A-Z][\w']*") + pp.Optional(lpar + pp.Optional(name_list) + rpar)).set_parse_action(_schematic)
    top = kw('top').set_parse_action(lambda: Top())
    bot = kw('bot').set_parse_action(lambda: Bot())
    primary = top | bot | relation | schematic | (lpar + formula + rpar)

    gimel_bound = (pp.Suppress(kw('gimel')) + lbrace + pp.Optional(name_list) + rbrace).set_parse_action(
        lambda t: _Binder('gimel', tuple(_closed(expr) for expr in t)))
    reish_bound = (pp.Suppress(kw('reish')) + lpar + nat + rpar).set_parse_action(
        lambda t: _Binder('gimel', tuple(mk_reish(alpha) for alpha in range(t[0]))))
    hat_bound = (pp.Suppress(kw('hat')) + lpar + nat + rpar).set_parse_action(lambda t: _Binder('hat', t[0]))
    rord_bound = (pp.Suppress(kw('rord')) + lpar + nat + rpar).set_parse_action(lambda t: _Binder('rord', t[0]))
    eps_bound = (pp.Suppress(kw('eps')) + name_expr).set_parse_action(lambda t: _Binder('eps', t[0]))
    binder = (pp.Suppress('^') + (gimel_bound | reish_bound | hat_bound | rord_bound)) | eps_bound

    def _quantifier(tokens):
        quantifier, var = tokens[0], tokens[1]
        bound = tokens[2] if len(tokens) == 4 else None
        body = tokens[-1]
        if bound is not None and bound.kind == 'eps':
            return (ForallEps if quantifier == 'all' else ExistsEps)(var, bound.data, body)
        if quantifier == 'ex':
            return Exists(var, body, None if bound is None else (bound.kind, bound.data))
        return _bounded(var, None if bound is None else (bound.kind, bound.data), body)

    quantified = ((kw('all') | kw('ex')) + ident + pp.Optional(binder) + pp.Suppress('.') + formula).set_parse_action(_quantifier)
    negated = pp.Forward()
    negated <<= (pp.Suppress(kw('not')) + negated).set_parse_action(lambda t: Not(t[0])) | quantified | primary
    conjunction = (negated + pp.ZeroOrMore(pp.Suppress('/\\') + negated)).set_parse_action(_fold_left(And))
    disjunction = (conjunction + pp.ZeroOrMore(pp.Suppress('\\/') + conjunction)).set_parse_action(_fold_left(Or))
    implication = pp.Forward()
    implication <<= (disjunction + pp.Optional(pp.Suppress('->') + implication)).set_parse_action(
        lambda t: Imp(t[0], t[1]) if len(t) == 2 else t[0])
    formula <<= (implication + pp.Optional(pp.Suppress('<->') + implication)).set_parse_action(
        lambda t: Iff(t[0], t[1]) if len(t) == 2 else t[0])
    return name_expr, formula


pp.ParserElement.enable_packrat()
_NAME_EXPR, _FORMULA = _build_grammar()
_NAME_LIST = pp.DelimitedList(_NAME_EXPR)


def _parse(element, text):
    try:
        return element.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as error:
        raise ParseError(text, error.loc, error.msg)


def parse_name_expr(text, names=None):
    """Read a name expression such as ``op (reish 0) (hat 1)``.

    :param dict names: values for free identifiers
    """
    expr = _parse(_NAME_EXPR, text)
    for ident, value in sorted((names or {}).items()):
        expr = _subst_expr(expr, ident, value if isinstance(value, NameExpr) else NameConst(value))
    return evaluate_name(expr)


def parse_name_exprs(text, names=None):
    """Read a comma separated list of name expressions."""
    try:
        exprs = list(_NAME_LIST.parse_string(text, parse_all=True))
    except pp.ParseBaseException as error:
        raise ParseError(text, error.loc, error.msg)
    result = []
    for expr in exprs:
        for ident, value in sorted((names or {}).items()):
            expr = _subst_expr(expr, ident, value if isinstance(value, NameExpr) else NameConst(value))
        result.append(evaluate_name(expr))
    return result


def parse_sugared(text):
    return _parse(_FORMULA, text)


def parse_formula(text, names=None):
    """Read and desugar a formula.

    :param dict names: values for identifiers not bound by a quantifier
    :raises ParseError: on malformed input.

    Usage:
        >>> format_formula(parse_formula("all x^reish(2). x eps reish 2"))
        'all x^gimel{reish 0, reish 1}. x !eps reish 2 -> bot'
    """
    phi = desugar(parse_sugared(text))
    for ident, value in sorted((names or {}).items()):
        if ident in free_name_vars(phi):
            phi = subst_name(phi, ident, value)
    return phi
