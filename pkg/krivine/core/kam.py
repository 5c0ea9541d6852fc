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

from logging import getLogger

from .lambda_c import (App, Abs, Cc, Kont, Instr, EnumLit, Opaque, Push, OpaqueTail, Process,
                       substitute, format_process)

logger = getLogger(__name__)

__all__ = ['Machine', 'Trace', 'default_machine', 'step', 'reduce',
           'REACHED_NORMAL', 'STUCK_ON_OPAQUE', 'OUT_OF_FUEL']

REACHED_NORMAL = 'reached-normal'
STUCK_ON_OPAQUE = 'stuck-on-opaque'
OUT_OF_FUEL = 'out-of-fuel'


class Trace(object):
    """ The processes visited by :meth:`Machine.reduce`.

    :ivar tuple steps: visited processes, the input first.
    :ivar tuple rules: name of the rule leading to each following process; one shorter than ``steps``.
    :ivar str status: ``reached-normal``, ``stuck-on-opaque`` or ``out-of-fuel``.
    """

    def __init__(self, steps, rules, status):
        self.steps = tuple(steps)
        self.rules = tuple(rules)
        self.status = status

    @property
    def final(self):
        return self.steps[-1]

    def __len__(self):
        return len(self.steps)

    def __iter__(self):
        return iter(self.steps)

    def render(self, abbreviations=None):
        """One ``head ⋆ stack`` line per visited process.

        :rtype: list
        """
        return [format_process(process, abbreviations) for process in self.steps]

    def __repr__(self):
        return "Trace: {} steps, {}".format(len(self.rules), self.status)


class Machine(object):
    """The Krivine abstract machine with a registry of special instructions.

    The four rules push, grab, save and restore are built in. Instruction rules receive the
    stack below the instruction and return the next process, or None when they do not apply.

    Usage:
        >>> machine = Machine()
        >>> @machine.instruction('skip')
        ... def skip(stack):
        ...     if isinstance(stack, Push):
        ...         return Process(stack.term, stack.stack)
    """

    def __init__(self):
        self._instructions = {}

    def instruction(self, name):
        """Register the evaluation rule of ``#name``.

        :param str name: instruction name without ``#``
        """
        def _rule(func):
            self._instructions[name] = func
            return func
        return _rule

    @property
    def instructions(self):
        return tuple(sorted(self._instructions))

    def transition(self, process):
        """The rule applicable to ``process`` and its result.

        :return: ``(rule_name, next_process)`` or None when the process is stuck.
        """
        head, stack = process.head, process.stack
        if isinstance(head, App):
            return 'push', Process(head.fun, Push(head.arg, stack))
        if isinstance(head, Instr):
            rule = self._instructions.get(head.name)
            if rule is None:
                return None
            following = rule(stack)
            return None if following is None else (head.name, following)
        if not isinstance(stack, Push):
            return None
        if isinstance(head, Abs):
            return 'grab', Process(substitute(head.body, head.var, stack.term), stack.stack)
        if isinstance(head, Cc):
            return 'save', Process(stack.term, Push(Kont(stack.stack), stack.stack))
        if isinstance(head, Kont):
            return 'restore', Process(stack.term, head.stack)
        return None

    def step(self, process):
        """One machine step, or None when stuck."""
        transition = self.transition(process)
        return None if transition is None else transition[1]

    def stuck_status(self, process):
        """Classify a stuck process.

        It is stuck on an opaque atom when the head is opaque, or when the head waits for
        arguments that an opaque tail hides.
        """
        head = process.head
        if isinstance(head, Opaque):
            return STUCK_ON_OPAQUE
        if isinstance(head, (Abs, Cc, Kont)) and isinstance(process.stack, OpaqueTail):
            return STUCK_ON_OPAQUE
        if isinstance(head, Instr) and head.name in self._instructions:
            stack = process.stack
            while isinstance(stack, Push):
                if isinstance(stack.term, Opaque):
                    return STUCK_ON_OPAQUE
                stack = stack.stack
            if isinstance(stack, OpaqueTail):
                return STUCK_ON_OPAQUE
        return REACHED_NORMAL

    def reduce(self, process, fuel):
        """Run the machine for at most ``fuel`` steps.

        :param Process process: initial state
        :param int fuel: step budget, non-negative
        :rtype: Trace
        """
        if fuel < 0:
            raise ValueError("Fuel must be non-negative, got {}".format(fuel))
        steps = [process]
        rules = []
        current = process
        for _ in range(fuel):
            transition = self.transition(current)
            if transition is None:
                return Trace(steps, rules, self.stuck_status(current))
            rules.append(transition[0])
            current = transition[1]
            steps.append(current)
        if self.transition(current) is None:
            return Trace(steps, rules, self.stuck_status(current))
        logger.debug("reduction ran out of fuel after %d steps", fuel)
        return Trace(steps, rules, OUT_OF_FUEL)


default_machine = Machine()


@default_machine.instruction('chi')
def chi(stack):
    """``χ ⋆ ν_α·ν_β·t·s·r·π`` continues with t, s or r as α <, = or > β."""
    arguments = []
    while len(arguments) < 5:
        if not isinstance(stack, Push):
            return None
        arguments.append(stack.term)
        stack = stack.stack
    alpha, beta, lower, equal, greater = arguments
    if not (isinstance(alpha, EnumLit) and isinstance(beta, EnumLit)):
        return None
    if alpha.index < beta.index:
        return Process(lower, stack)
    if alpha.index == beta.index:
        return Process(equal, stack)
    return Process(greater, stack)


def step(process, machine=None):
    return (machine or default_machine).step(process)


def reduce(process, fuel, machine=None):
    """Reduce with the default machine unless another one is given.

    Usage:
        >>> from krivine import parse_process
        >>> trace = reduce(parse_process("cc * k[w_a].w_b"), 10)
        >>> trace.render()[-1]
        'k[w_b] ⋆ w_a'
        >>> trace.status
        'reached-normal'
    """
    return (machine or default_machine).reduce(process, fuel)
