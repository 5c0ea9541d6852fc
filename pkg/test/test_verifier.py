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

import krivine
from krivine import (Goal, Realizes, InPole, InFalsity, RealizerHyp, FalsityHyp, VerifierConfig,
                     Atom, Bot, Top, Imp, Var, Kont, Opaque, OpaqueTail, Push, Process, Bottom, NameUniverse,
                     BoolAlg, TauContext, mk_reish, push_all, combinator, parse_term, parse_formula, prove)
from data.displays import CHAIN_REALIZER, OPAQUE, V_CHAIN, U_CHAIN, U_CHAIN_LAST, displayed

A, B = Atom('A'), Atom('B')

PEIRCE_TRACE = [
    u'IMP-INTRO cc ⊩ ((A -> B) -> A) -> A',
    u'  CASE u1.?pi2',
    u'    ANTI-EVAL cc ⋆ u1.?pi2',
    u'      save u1 ⋆ k[?pi2].?pi2',
    u'      HYP-MATCH u1 ⊩ (A -> B) -> A',
    u'        FALSITY k[?pi2].?pi2 ∈ ‖(A -> B) -> A‖',
    u'          KPI k[?pi2] ⊩ A -> B',
    u'            FALSITY ?pi2 ∈ ‖A‖',
    u'          FALSITY ?pi2 ∈ ‖A‖',
]


def realizes(term, formula, *hypotheses):
    if isinstance(term, str):
        term = krivine.close_term(parse_term(term))
    return Realizes(term, parse_formula(formula), hypotheses)


class Test_Prove(unittest.TestCase):

    def test_peirce(self):
        result = prove(Goal('peirce', realizes('cc', '((A -> B) -> A) -> A')))

        self.assertTrue(result.accepted)
        self.assertIsNone(result.reason)
        self.assertEqual(result.steps, 1)
        self.assertEqual(result.trace.lines(), PEIRCE_TRACE)

    def test_digest_and_replay(self):
        result = prove(Goal('peirce', realizes('cc', '((A -> B) -> A) -> A')))

        digest = result.trace.digest()
        self.assertEqual(len(digest), 64)
        self.assertEqual(digest, prove(Goal('peirce', realizes('cc', '((A -> B) -> A) -> A'))).trace.digest())
        self.assertTrue(krivine.replay(result.trace))

    def test_swap(self):
        result = prove(Goal('w5', realizes(combinator('w5'), 'A -> (A -> bot) -> bot')))

        self.assertTrue(result.accepted)
        self.assertEqual(result.steps, 3)

    def test_identity_does_not_realize_bot(self):
        result = prove(Goal('identity_bot', realizes('I', 'bot')))

        self.assertFalse(result.accepted)
        self.assertEqual(result.reason, u'stuck at I ⋆ ?pi1')
        self.assertEqual(result.steps, 0)
        self.assertTrue(krivine.replay(result.trace))

    def test_kpi_by_evaluation(self):
        process = Process(Kont(OpaqueTail('pi')), Push(Opaque('u'), OpaqueTail('rho')))
        hypotheses = (FalsityHyp('pi', A), RealizerHyp('u', A), FalsityHyp('rho', B))

        result = prove(Goal('kpi', InPole(process, hypotheses)), VerifierConfig(kpi=False))

        self.assertTrue(result.accepted)
        self.assertEqual(result.steps, 1)
        self.assertEqual([line.split()[0] for line in result.trace.lines()], ['ANTI-EVAL', 'restore', 'HYP-MATCH', 'FALSITY'])

    def test_kpi_shortcut(self):
        goal = Goal('kpi', Realizes(Kont(OpaqueTail('pi')), Imp(A, B), (FalsityHyp('pi', A),)))

        self.assertTrue(prove(goal).accepted)
        self.assertEqual(prove(goal).trace.lines()[0], u'KPI k[?pi] ⊩ A -> B')

    def test_falsity_membership(self):
        stack = push_all([krivine.EnumLit(1)], OpaqueTail('pi'))
        goal = Goal('hat', InFalsity(stack, parse_formula('hat 1 !eps hat 3'), (FalsityHyp('pi', Bot()),)))

        self.assertTrue(prove(goal).accepted)
        wrong = Goal('hat', InFalsity(OpaqueTail('pi'), parse_formula('hat 1 !eps hat 3'), (FalsityHyp('pi', Bot()),)))
        self.assertFalse(prove(wrong).accepted)

    def test_hypothesis(self):
        goal = Goal('hyp', Realizes(Opaque('u'), A, (RealizerHyp('u', A),)))

        result = prove(goal)

        self.assertTrue(result.accepted)
        self.assertEqual(result.trace.lines(), [u'HYP u ⊩ A'])

    def test_vacuous(self):
        result = prove(Goal('top', realizes('I', 'top')))

        self.assertTrue(result.accepted)
        self.assertEqual(result.trace.lines(), [u'VACUOUS I ⊩ top'])


class Test_Induction(unittest.TestCase):

    def setUp(self):
        self.universe = NameUniverse.closure([mk_reish(2)])
        self.judgement = realizes(combinator('w0'), 'all x. x sub x')

    def test_accepted_by_induction(self):
        result = prove(Goal('w0', self.judgement, self.universe, induction=True))

        self.assertTrue(result.accepted)
        self.assertEqual(result.trace.lines()[0], u'RANK-IND w0 ⊩ all x. x sub x')
        self.assertIn(u'IH', [line.split()[0] for line in result.trace.lines()])

    def test_rejected_without_induction(self):
        goal = Goal('w0', self.judgement, self.universe, induction=True)

        result = prove(goal, VerifierConfig(induction=False))

        self.assertFalse(result.accepted)
        self.assertIsNotNone(result.reason)

    def test_lemma(self):
        lemma = krivine.Lemma('w0', combinator('w0'), parse_formula('all x. x sub x'))
        goal = Goal('inclusion', realizes(r'\u. u w0 w0', 'hat 2 sub hat 3'), lemmas=(lemma,))

        self.assertTrue(prove(goal).accepted)
        self.assertFalse(prove(Goal('inclusion', goal.judgement)).accepted)

    def test_lemma_outside_its_universe(self):
        judgement = realizes(r'\u. u w0 w0', 'hat 2 sub hat 3')
        formula = parse_formula('all x. x sub x')

        narrow = krivine.Lemma('w0', combinator('w0'), formula, self.universe)
        result = prove(Goal('inclusion', judgement, lemmas=(narrow,)))

        self.assertTrue(result.accepted)
        self.assertTrue(result.trace.extrapolated)
        lemma_lines = [line.strip() for line in result.trace.lines() if line.strip().startswith('LEMMA')]
        self.assertTrue(any(u'w0 [outside universe: ' in line for line in lemma_lines), lemma_lines)

        wide = krivine.Lemma('w0', combinator('w0'), formula, NameUniverse.closure([krivine.mk_hat(3)]))
        result = prove(Goal('inclusion', judgement, lemmas=(wide,)))

        self.assertTrue(result.accepted)
        self.assertFalse(result.trace.extrapolated)


class Test_Limits(unittest.TestCase):

    def test_fuel(self):
        result = prove(Goal('w5', realizes(combinator('w5'), 'A -> (A -> bot) -> bot')), VerifierConfig(fuel=2))

        self.assertFalse(result.accepted)
        self.assertTrue(result.exhausted)
        self.assertIn('exhausted', result.reason)

    def test_config(self):
        with self.assertRaises(ValueError):
            VerifierConfig(fuel=0)
        with self.assertRaises(ValueError):
            VerifierConfig(max_depth=0)

    def test_malformed(self):
        process = Process(Kont(OpaqueTail('pi')), OpaqueTail('pi'))
        duplicate = Goal('dup', InPole(process, (FalsityHyp('pi', A), FalsityHyp('pi', B))))

        with self.assertRaises(krivine.MalformedGoal):
            prove(duplicate)
        with self.assertRaises(krivine.MalformedGoal):
            prove(Goal('open', Realizes(Var('x'), Top())))
        with self.assertRaises(krivine.MalformedGoal):
            prove(Goal('open', Realizes(combinator('I'), parse_formula('x sub x'))))


class Test_DisplayedTraces(unittest.TestCase):

    def test_continuation_chain(self):
        start = displayed(V_CHAIN[0])

        self.assertEqual(start.head, krivine.close_term(parse_term(CHAIN_REALIZER), OPAQUE))
        self.assertTrue(krivine.check_displayed_trace(start, [displayed(text) for text in V_CHAIN], 50))

    def test_resumed_chain(self):
        start = displayed(U_CHAIN[0])

        self.assertTrue(krivine.check_displayed_trace(start, [displayed(text) for text in U_CHAIN], 50))
        final = krivine.reduce(start, 50).final
        self.assertEqual(krivine.format_process(final, krivine.TRACE_ABBREVIATIONS), U_CHAIN_LAST)

    def test_final_line(self):
        w0 = combinator('w0')
        start = Process(w0, Push(Opaque('t'), Bottom('pi')))

        self.assertTrue(krivine.check_displayed_trace(start, [Process(Opaque('t'), push_all([w0, w0], Bottom('pi')))], 10))
        self.assertFalse(krivine.check_displayed_trace(start, [Process(krivine.Cc(), Bottom('pi'))], 10))
        with self.assertRaises(ValueError):
            krivine.check_displayed_trace(start, [], 10)


class Test_Soundness(unittest.TestCase):

    def test_accepted_realizers_force_zero(self):
        goals = krivine.parse_corpus(krivine.load_shipped_corpus())
        report = krivine.verify_corpus(goals)
        checked = 0
        for corpus_goal, entry in zip(goals, report.entries):
            judgement = corpus_goal.goal.judgement
            if not (entry.accepted and isinstance(judgement, Realizes)) or judgement.hypotheses or entry.truncated:
                continue
            if not krivine.is_realizer(judgement.term):
                continue
            for atoms in (1, 2, 3):
                ctx = TauContext.for_algebra(BoolAlg.powerset(atoms))
                try:
                    value = krivine.forcing_value(judgement.formula, corpus_goal.goal.universe, ctx)
                except (krivine.UninterpretedAtom, krivine.UnboundedQuantifier):
                    break
                self.assertEqual(value, '0', corpus_goal.ident)
                checked += 1
        self.assertGreater(checked, 0)


if __name__ == '__main__':
    unittest.main()
