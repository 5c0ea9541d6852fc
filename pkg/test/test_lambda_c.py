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

import unittest

import hypothesis

import krivine
from krivine import (Var, App, Abs, Cc, Kont, Instr, EnumLit, Opaque, Bottom, Push, Process,
                     parse_term, parse_stack, parse_process, format_term, format_process, push_all)
from data.strategies import s_open_terms


class Test_Parse(unittest.TestCase):

    def test_abstraction_extends_right(self):
        term = parse_term(r"\u.\v. v u")

        self.assertEqual(term, Abs('u', Abs('v', App(Var('v'), Var('u')))))

    def test_application_groups_left(self):
        self.assertEqual(parse_term("a b c"), App(App(Var('a'), Var('b')), Var('c')))
        self.assertEqual(parse_term(r"a \u. u b"), App(Var('a'), Abs('u', App(Var('u'), Var('b')))))

    def test_constants(self):
        self.assertEqual(parse_term("cc"), Cc())
        self.assertEqual(parse_term("nu3"), EnumLit(3))
        self.assertEqual(parse_term("#chi"), Instr('chi'))
        self.assertEqual(parse_term("k[w_a]"), Kont(Bottom('a')))
        self.assertEqual(parse_term(u"λu.u"), parse_term(r"\u.u"))

    def test_stack_and_process(self):
        stack = parse_stack("t.s.w_pi")
        self.assertEqual(stack, push_all([Var('t'), Var('s')], Bottom('pi')))

        process = parse_process(u"cc ⋆ t·?pi")
        self.assertEqual(process.head, Cc())
        self.assertEqual(process.stack, Push(Var('t'), krivine.OpaqueTail('pi')))
        self.assertEqual(parse_process("cc * t.?pi"), process)

    def test_parse_error(self):
        with self.assertRaises(krivine.ParseError) as raised:
            parse_term(r"\u. (u")
        self.assertIsInstance(raised.exception, ValueError)
        self.assertEqual(raised.exception.line, 1)
        self.assertIsInstance(raised.exception.position, int)

        with self.assertRaises(krivine.ParseError):
            parse_process("cc")

    @hypothesis.given(s_open_terms)
    def test_format_parse(self, term):
        self.assertTrue(krivine.alpha_eq(parse_term(format_term(term)), term))


class Test_Terms(unittest.TestCase):

    def test_substitute_shadowed(self):
        term = Abs('u', Var('u'))

        self.assertEqual(krivine.substitute(term, 'u', Var('z')), term)

    def test_substitute_renames_binder(self):
        term = Abs('v', App(Var('u'), Var('v')))

        result = krivine.substitute(term, 'u', Var('v'))

        self.assertEqual(result, Abs("v'", App(Var('v'), Var("v'"))))
        self.assertEqual(krivine.free_vars(result), frozenset(['v']))

    def test_alpha_eq(self):
        self.assertTrue(krivine.alpha_eq(parse_term(r"\u.u"), parse_term(r"\v.v")))
        self.assertTrue(krivine.alpha_eq(parse_term(r"\u.\v.u v"), parse_term(r"\a.\b.a b")))
        self.assertFalse(krivine.alpha_eq(parse_term(r"\u.\v.u"), parse_term(r"\u.\v.v")))
        self.assertFalse(krivine.alpha_eq(Var('a'), Var('b')))
        self.assertFalse(krivine.alpha_eq(parse_term(r"\u.a"), parse_term(r"\u.u")))

    def test_is_realizer(self):
        self.assertTrue(krivine.is_realizer(parse_term(r"\u.u")))
        self.assertTrue(krivine.is_realizer(Cc()))
        self.assertFalse(krivine.is_realizer(Var('u')))
        self.assertFalse(krivine.is_realizer(Kont(Bottom('b'))))
        self.assertFalse(krivine.is_realizer(App(Opaque('p'), krivine.combinator('I'))))
        self.assertFalse(krivine.is_realizer(Abs('u', Kont(krivine.OpaqueTail('pi')))))

    def test_format(self):
        self.assertEqual(format_term(parse_term(r"(\u.u) v")), r"(\u.u) v")
        self.assertEqual(format_term(App(Var('a'), App(Var('b'), Var('c')))), "a (b c)")
        self.assertEqual(format_term(EnumLit(2)), "nu2")
        self.assertEqual(format_process(Process(Cc(), push_all([Var('t')], Bottom('pi')))), u"cc ⋆ t.w_pi")

    def test_format_abbreviations(self):
        w0 = krivine.combinator('w0')
        process = Process(Var('t'), push_all([w0, w0], Bottom('pi')))

        self.assertEqual(format_process(process, krivine.TRACE_ABBREVIATIONS), u"t ⋆ w0.w0.w_pi")


class Test_Church(unittest.TestCase):

    def test_small_numerals(self):
        self.assertTrue(krivine.alpha_eq(krivine.church(0), parse_term(r"\u.\v.v")))
        self.assertTrue(krivine.alpha_eq(krivine.church(1), parse_term(r"\u.\v.u v")))
        two = krivine.beta_normalize(krivine.church(2), 100)
        self.assertTrue(krivine.alpha_eq(two, parse_term(r"\u.\v.u (u v)")))

    def test_numerals_are_realizers(self):
        for n in range(65):
            self.assertTrue(krivine.is_realizer(krivine.church(n)), n)

    def test_negative(self):
        with self.assertRaises(ValueError):
            krivine.church(-1)

    def test_successor(self):
        s_succ = krivine.combinator('s_succ')
        self.assertTrue(krivine.alpha_eq(krivine.beta_normalize(App(s_succ, krivine.church(0)), 100),
                                         krivine.church(1)))
        for n in range(17):
            successor = krivine.beta_normalize(App(s_succ, krivine.church(n)), 10000)
            expected = krivine.beta_normalize(krivine.church(n + 1), 10000)
            self.assertTrue(krivine.alpha_eq(successor, expected), n)

    def test_out_of_fuel(self):
        with self.assertRaises(krivine.OutOfFuel):
            krivine.beta_normalize(krivine.combinator('w0'), 50)


class Test_Combinators(unittest.TestCase):

    def test_library(self):
        self.assertTrue(krivine.alpha_eq(krivine.combinator('I'), parse_term(r"\u.u")))
        self.assertTrue(krivine.alpha_eq(krivine.combinator('w6'),
                                         Abs('f', Abs('g', App(Var('g'), krivine.combinator('w2'))))))
        self.assertEqual(krivine.combinator(u'θ'), krivine.combinator('theta'))
        for name in krivine.combinator_names():
            self.assertTrue(krivine.is_realizer(krivine.combinator(name)), name)

    def test_unknown(self):
        for name in ['w3', 'w4', 'omega']:
            with self.assertRaises(krivine.UnknownCombinator):
                krivine.combinator(name)

    def test_close_term(self):
        term = krivine.close_term(parse_term("p w5"), ['p'])

        self.assertEqual(term, App(Opaque('p'), krivine.combinator('w5')))
        with self.assertRaises(ValueError):
            krivine.close_term(parse_term("q"))


if __name__ == '__main__':
    unittest.main()
