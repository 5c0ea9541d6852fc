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
from dataclasses import dataclass
from logging import getLogger

import pyparsing as pp

logger = getLogger(__name__)

__all__ = [
    'Term', 'Var', 'App', 'Abs', 'Cc', 'Kont', 'Instr', 'EnumLit', 'Opaque',
    'Stack', 'Bottom', 'Push', 'OpaqueTail', 'Process',
    'ParseError', 'OutOfFuel', 'UnknownCombinator',
    'parse_term', 'parse_stack', 'parse_process',
    'free_vars', 'is_closed', 'contains_kont', 'contains_opaque', 'is_realizer',
    'substitute', 'alpha_eq', 'stack_alpha_eq', 'process_alpha_eq', 'push_all',
    'church', 'combinator', 'combinator_names', 'close_term', 'beta_normalize',
    'format_term', 'format_stack', 'format_process',
]


class ParseError(ValueError):
    """ Concrete syntax could not be read. """

    def __init__(self, text, position, message=None):
        self.text = text
        self.position = position
        self.line = pp.lineno(position, text) if text else 1
        self.column = pp.col(position, text) if text else 1
        super(ParseError, self).__init__(
            "{} at line {}, column {}: {!r}".format(message or 'Syntax error', self.line, self.column, text))


class OutOfFuel(Exception):
    """ Normalisation did not finish within the given number of steps. """
    pass


class UnknownCombinator(KeyError):
    """ The combinator library has no term under this id. """
    pass


class Term(object):
    """ Base class of λc-terms.

    Terms are immutable and hashable. Structural equality (``==``) compares bound
    names literally; use :func:`alpha_eq` for equality up to renaming.
    """
    __slots__ = ()

    def __str__(self):
        return format_term(self)


class Stack(object):
    """ Base class of stacks: a bottom, an opaque tail or a pushed term. """
    __slots__ = ()

    def __str__(self):
        return format_stack(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Abs(Term):
    var: str
    body: Term


@dataclass(frozen=True)
class Cc(Term):
    pass


@dataclass(frozen=True)
class Kont(Term):
    """ The continuation constant ``k_π`` capturing the stack ``π``. """
    stack: Stack

    def __post_init__(self):
        if not isinstance(self.stack, Stack):
            raise TypeError("Continuation payload must be a stack, got {!r}".format(self.stack))


@dataclass(frozen=True)
class Instr(Term):
    name: str


@dataclass(frozen=True)
class EnumLit(Term):
    """ The enumeration literal ``ν_α``; ``index`` is α. """
    index: int

    def __post_init__(self):
        if not isinstance(self.index, int) or self.index < 0:
            raise ValueError("Enumeration index must be a natural number, got {!r}".format(self.index))


@dataclass(frozen=True)
class Opaque(Term):
    """ A term known only through a hypothesis of the verifier. """
    name: str


@dataclass(frozen=True)
class Bottom(Stack):
    name: str


@dataclass(frozen=True)
class Push(Stack):
    term: Term
    stack: Stack


@dataclass(frozen=True)
class OpaqueTail(Stack):
    """ A stack known only through a hypothesis of the verifier. """
    name: str


@dataclass(frozen=True)
class Process(object):
    """ A machine state ``head ⋆ stack``. """
    head: Term
    stack: Stack

    def __str__(self):
        return format_process(self)


def push_all(terms, tail):
    """Build the stack ``t1·t2·…·tn·tail``.

    :param terms: terms, outermost first
    :param Stack tail: the stack below them
    :rtype: Stack
    """
    stack = tail
    for term in reversed(list(terms)):
        stack = Push(term, stack)
    return stack


def _stack_items(stack):
    items = []
    while isinstance(stack, Push):
        items.append(stack.term)
        stack = stack.stack
    return items, stack


def free_vars(term):
    """Free variables of a term. Continuation payloads hold closed terms only."""
    if isinstance(term, Var):
        return frozenset([term.name])
    if isinstance(term, App):
        return free_vars(term.fun) | free_vars(term.arg)
    if isinstance(term, Abs):
        return free_vars(term.body) - {term.var}
    return frozenset()


def is_closed(term):
    return not free_vars(term)


def _walk(term):
    pending = [term]
    while pending:
        current = pending.pop()
        yield current
        if isinstance(current, App):
            pending.append(current.fun)
            pending.append(current.arg)
        elif isinstance(current, Abs):
            pending.append(current.body)
        elif isinstance(current, Kont):
            items, tail = _stack_items(current.stack)
            pending.extend(items)
            if isinstance(tail, OpaqueTail):
                yield tail


def contains_kont(term):
    return any(isinstance(sub, Kont) for sub in _walk(term))


def contains_opaque(term):
    return any(isinstance(sub, (Opaque, OpaqueTail)) for sub in _walk(term))


def is_realizer(term):
    """True iff ``term`` is closed and holds neither continuation constants nor opaque atoms.

    Usage:
        >>> is_realizer(parse_term(r"\\u.u"))
        True
        >>> is_realizer(Kont(Bottom('b')))
        False
    """
    return is_closed(term) and not contains_kont(term) and not contains_opaque(term)


def _fresh(name, avoid):
    candidate = name + "'"
    while candidate in avoid:
        candidate += "'"
    return candidate


def substitute(body, var, value):
    """Capture-avoiding substitution ``body[var := value]``.

    When ``value`` is closed (the machine case) no renaming ever happens.
    """
    return _substitute(body, var, value, free_vars(value))


def _substitute(term, var, value, value_fv):
    if isinstance(term, Var):
        return value if term.name == var else term
    if isinstance(term, App):
        return App(_substitute(term.fun, var, value, value_fv), _substitute(term.arg, var, value, value_fv))
    if isinstance(term, Abs):
        if term.var == var:
            return term
        if term.var in value_fv:
            body_fv = free_vars(term.body)
            if var not in body_fv:
                return term
            fresh = _fresh(term.var, value_fv | body_fv | {var})
            renamed = _substitute(term.body, term.var, Var(fresh), frozenset([fresh]))
            return Abs(fresh, _substitute(renamed, var, value, value_fv))
        return Abs(term.var, _substitute(term.body, var, value, value_fv))
    return term


def alpha_eq(a, b):
    """Equality up to renaming of bound variables.

    Bound occurrences are compared by binder depth (locally nameless), free ones by name.
    """
    return _alpha_eq(a, b, {}, {}, 0)


def _alpha_eq(a, b, env_a, env_b, depth):
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        level_a = env_a.get(a.name)
        level_b = env_b.get(b.name)
        if level_a is None and level_b is None:
            return a.name == b.name
        return level_a == level_b
    if isinstance(a, App):
        return _alpha_eq(a.fun, b.fun, env_a, env_b, depth) and _alpha_eq(a.arg, b.arg, env_a, env_b, depth)
    if isinstance(a, Abs):
        inner_a = dict(env_a)
        inner_a[a.var] = depth
        inner_b = dict(env_b)
        inner_b[b.var] = depth
        return _alpha_eq(a.body, b.body, inner_a, inner_b, depth + 1)
    if isinstance(a, Kont):
        return stack_alpha_eq(a.stack, b.stack)
    return a == b


def stack_alpha_eq(s, t):
    items_s, tail_s = _stack_items(s)
    items_t, tail_t = _stack_items(t)
    if len(items_s) != len(items_t) or tail_s != tail_t:
        return False
    return all(alpha_eq(x, y) for x, y in zip(items_s, items_t))


def process_alpha_eq(p, q):
    return alpha_eq(p.head, q.head) and stack_alpha_eq(p.stack, q.stack)


@functools.lru_cache(maxsize=None)
def church(n):
    """The Church numeral n̲.

    ``0̲ = λu.λv.v``, ``1̲ = λu.λv.u v`` and ``(n+1)̲ = λu.λv.(n̲ u)(u v)`` for n ≥ 1.
    """
    if n < 0:
        raise ValueError("Church numerals are defined for natural numbers, got {}".format(n))
    if n == 0:
        return Abs('u', Abs('v', Var('v')))
    if n == 1:
        return Abs('u', Abs('v', App(Var('u'), Var('v'))))
    return Abs('u', Abs('v', App(App(church(n - 1), Var('u')), App(Var('u'), Var('v')))))


# Displayed sources; later entries may mention earlier ones.
_COMBINATOR_SOURCES = (
    ('I', r"\u.u"),
    ('theta', r"\u.\v.v (u u) (u u)"),
    ('w0', r"theta theta"),
    ('w1', r"\u.u w0 w0"),
    ("theta'", r"\u.\v.\w.v (u u)"),
    ('w2', r"theta' theta'"),
    ('w5', r"\u.\v.v u"),
    ('w6', r"\f.\g.g w2"),
    ('s_succ', r"\n.\u.\v.n u (u v)"),
)

_COMBINATOR_ALIASES = {u'θ': 'theta', u"θ'": "theta'"}

# No closed terms are displayed for these; they enter proofs as lemmas only.
_UNDISPLAYED = ('w3', 'w4')

_combinators = {}


def _combinator_table():
    if not _combinators:
        for name, source in _COMBINATOR_SOURCES:
            term = parse_term(source)
            for known in sorted(free_vars(term)):
                term = substitute(term, known, _combinators[known])
            _combinators[name] = term
    return _combinators


def combinator_names():
    return tuple(name for name, _ in _COMBINATOR_SOURCES)


def combinator(name):
    """Look up a combinator of the library.

    :param str name: one of ``I``, ``θ``/``theta``, ``w0``, ``w1``, ``θ'``/``theta'``, ``w2``, ``w5``, ``w6``, ``s_succ``
    :rtype: Term
    :raises UnknownCombinator: for any other id, including ``w3`` and ``w4``.

    Usage:
        >>> format_term(combinator('w5'))
        '\\\\u.\\\\v.v u'
    """
    name = _COMBINATOR_ALIASES.get(name, name)
    if name in _UNDISPLAYED:
        raise UnknownCombinator("Combinator {} has no closed term; cite it as a lemma instead".format(name))
    table = _combinator_table()
    if name not in table:
        raise UnknownCombinator("Unknown combinator: {}".format(name))
    return table[name]


def close_term(term, opaque_ids=()):
    """Close a parsed term.

    Free identifiers naming library combinators are replaced by their terms, identifiers in
    ``opaque_ids`` become :class:`Opaque` atoms.

    :raises ValueError: if a free identifier is neither.
    """
    opaque_ids = frozenset(opaque_ids)
    table = _combinator_table()
    for name in sorted(free_vars(term)):
        if name in opaque_ids:
            replacement = Opaque(name)
        elif _COMBINATOR_ALIASES.get(name, name) in table:
            replacement = table[_COMBINATOR_ALIASES.get(name, name)]
        else:
            raise ValueError("Free variable {} is neither a combinator nor a declared hypothesis".format(name))
        term = substitute(term, name, replacement)
    return term


def _normal_order_step(term):
    if isinstance(term, App):
        if isinstance(term.fun, Abs):
            return substitute(term.fun.body, term.fun.var, term.arg)
        reduced = _normal_order_step(term.fun)
        if reduced is not None:
            return App(reduced, term.arg)
        reduced = _normal_order_step(term.arg)
        if reduced is not None:
            return App(term.fun, reduced)
        return None
    if isinstance(term, Abs):
        reduced = _normal_order_step(term.body)
        return None if reduced is None else Abs(term.var, reduced)
    return None


def beta_normalize(term, fuel):
    """Normal-order β-normal form of ``term``.

    ``cc``, continuations, instructions and literals behave as constants.

    :param int fuel: maximal number of β-steps
    :raises OutOfFuel: when no normal form is reached within ``fuel`` steps.
    """
    current = term
    for _ in range(fuel):
        reduced = _normal_order_step(current)
        if reduced is None:
            return current
        current = reduced
    if _normal_order_step(current) is None:
        return current
    logger.debug("beta normalisation ran out of fuel after %d steps", fuel)
    raise OutOfFuel("No normal form within {} steps".format(fuel))


def format_term(term, abbreviations=None):
    """Print a term with minimal parentheses.

    :param abbreviations: optional sequence of ``(label, term)``; subterms α-equal to an entry print as its label.
    """
    return _format(term, tuple(abbreviations or ()))[0]


def _format(term, abbreviations):
    """Return ``(text, atomic)``."""
    for label, known in abbreviations:
        if alpha_eq(term, known):
            return label, True
    if isinstance(term, (Var, Opaque)):
        return term.name, True
    if isinstance(term, Cc):
        return 'cc', True
    if isinstance(term, Instr):
        return '#' + term.name, True
    if isinstance(term, EnumLit):
        return 'nu{}'.format(term.index), True
    if isinstance(term, Kont):
        return 'k[{}]'.format(_format_stack(term.stack, abbreviations)), True
    if isinstance(term, Abs):
        return '\\{}.{}'.format(term.var, _format(term.body, abbreviations)[0]), False
    fun_text, fun_atomic = _format(term.fun, abbreviations)
    if not fun_atomic and not isinstance(term.fun, App):
        fun_text = '(' + fun_text + ')'
    arg_text, arg_atomic = _format(term.arg, abbreviations)
    if not arg_atomic:
        arg_text = '(' + arg_text + ')'
    return fun_text + ' ' + arg_text, False


def _format_stack(stack, abbreviations):
    items, tail = _stack_items(stack)
    parts = [_format(item, abbreviations)[0] for item in items]
    if isinstance(tail, Bottom):
        parts.append('w_' + tail.name)
    else:
        parts.append('?' + tail.name)
    return '.'.join(parts)


def format_stack(stack, abbreviations=None):
    return _format_stack(stack, tuple(abbreviations or ()))


def format_process(process, abbreviations=None):
    """Render ``head ⋆ stack`` in the display style of reduction chains."""
    abbreviations = tuple(abbreviations or ())
    return u'{} ⋆ {}'.format(_format(process.head, abbreviations)[0], _format_stack(process.stack, abbreviations))


def _build_grammar():
    term = pp.Forward()
    stack = pp.Forward()

    ident = pp.Regex(r"(?!cc(?![\w'])|nu\d|w_)[A-Za-z_][\w']*")
    lam = pp.Suppress(pp.Literal('\\') | pp.Literal(u'λ'))
    dot = pp.Suppress('.')

    cc = pp.Regex(r"cc(?![\w'])").set_parse_action(lambda: Cc())
    instr = pp.Regex(r"#[A-Za-z_][\w']*").set_parse_action(lambda t: Instr(t[0][1:]))
    enum = pp.Regex(r"nu\d+").set_parse_action(lambda t: EnumLit(int(t[0][2:])))
    var = ident.copy().set_parse_action(lambda t: Var(t[0]))
    kont = (pp.Suppress(pp.Literal('k[')) + stack + pp.Suppress(']')).set_parse_action(lambda t: Kont(t[0]))
    group = pp.Suppress('(') + term + pp.Suppress(')')

    abstraction = (lam + ident + dot + term).set_parse_action(lambda t: Abs(t[0], t[1]))
    atom = kont | cc | instr | enum | var | group
    application = (pp.OneOrMore(atom) + pp.Optional(abstraction)).set_parse_action(lambda t: functools.reduce(App, t))
    term <<= abstraction | application

    bottom = pp.Regex(r"w_[\w']+").set_parse_action(lambda t: Bottom(t[0][2:]))
    tail = pp.Regex(r"\?[A-Za-z_][\w']*").set_parse_action(lambda t: OpaqueTail(t[0][1:]))
    separator = pp.Suppress(pp.Literal('.') | pp.Literal(u'·'))
    pushed = (term + separator + stack).set_parse_action(lambda t: Push(t[0], t[1]))
    stack <<= bottom | tail | pushed

    star = pp.Suppress(pp.Literal(u'⋆') | pp.Literal('*'))
    process = (term + star + stack).set_parse_action(lambda t: Process(t[0], t[1]))
    return term, stack, process


_TERM, _STACK, _PROCESS = _build_grammar()


def _parse(element, text):
    try:
        return element.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as error:
        raise ParseError(text, error.loc, error.msg)


def parse_term(text):
    """Read a term.

    Application groups to the left and an abstraction body extends as far right as possible.

    :raises ParseError: with the position of the first offending character.

    Usage:
        >>> parse_term(r"\\u.\\v. v u")
        Abs(var='u', body=Abs(var='v', body=App(fun=Var(name='v'), arg=Var(name='u'))))
    """
    return _parse(_TERM, text)


def parse_stack(text):
    return _parse(_STACK, text)


def parse_process(text):
    return _parse(_PROCESS, text)
