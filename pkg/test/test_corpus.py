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

import itertools
import unittest

import krivine
from krivine import CorpusError, parse_corpus, verify_corpus, VerifierConfig
from data.corpora import (PEIRCE_CORPUS, WRONG_EXPECTATION_CORPUS, LEMMA_CORPUS, CITES_REJECTED_CORPUS,
                          TRUNCATED_CORPUS, FUEL_CORPUS, DUPLICATE_GOAL_CORPUS, OUTSIDE_GOAL_CORPUS,
                          UNKNOWN_LEMMA_CORPUS, UNBOUNDED_CORPUS, BAD_TERM_CORPUS)


class Test_ParseCorpus(unittest.TestCase):

    def test_blocks(self):
        goals = parse_corpus(LEMMA_CORPUS)

        self.assertEqual([goal.ident for goal in goals], ['w2', 'w6'])
        w2, w6 = goals
        self.assertEqual(w2.line, 4)
        self.assertTrue(w2.goal.induction)
        self.assertEqual(len(w2.goal.universe), 4)
        self.assertIn(krivine.mk_reish(2), w2.goal.universe)
        self.assertIsNone(w6.goal.universe)
        self.assertEqual(w6.lemma_ids, ('w2',))
        self.assertEqual(w6.goal.lemmas, ())

    def test_directives(self):
        goals = parse_corpus(u"""
goal kpi expect accept
  # a comment inside a block
  hyp falsity pi : A
  claim realizes k[?pi] : A -> B
  check uniform
  bound 7
  using nested-intro

goal chi expect reject
  claim inpole #chi * nu0.nu1.w_pi
  side x + 1 < 5
""")

        kpi, chi = goals
        self.assertTrue(kpi.uniform)
        self.assertEqual(kpi.fuel, 7)
        self.assertTrue(kpi.nested_intro)
        self.assertEqual(kpi.goal.judgement.hypotheses, (krivine.FalsityHyp('pi', krivine.Atom('A')),))
        self.assertEqual(chi.goal.judgement.process.head, krivine.Instr('chi'))
        self.assertEqual(chi.goal.side_conditions, (krivine.SideCondition('x', 1, 5),))
        self.assertEqual(chi.expect, 'reject')

    def test_hypotheses_become_opaque(self):
        goal = parse_corpus(u"""
goal hyp expect accept
  hyp realizer u : A
  claim realizes \\v. u : B -> A
""")[0].goal

        self.assertEqual(goal.judgement.term, krivine.Abs('v', krivine.Opaque('u')))
        self.assertTrue(krivine.prove(goal).accepted)

    def test_errors(self):
        cases = [
            (DUPLICATE_GOAL_CORPUS, 4, 'goal', 'duplicate goal peirce'),
            (OUTSIDE_GOAL_CORPUS, 2, 'universe', 'directive outside a goal block'),
            (UNKNOWN_LEMMA_CORPUS, 2, 'using lemma', 'goal w1 cites unknown goal w0'),
            (BAD_TERM_CORPUS, 3, 'claim', None),
            (u"goal empty expect accept\n", 1, 'goal', 'goal empty has no claim'),
            (u"goal b expect accept\n  claim realizes I : top\n  bound 0\n", 3, 'bound', 'bound must be positive'),
            (u"goal f expect accept\n  frobnicate\n", 2, 'frobnicate', None),
            (u"goal u expect accept\n  claim realizes I : top\n  universe x\n", 3, 'universe', None),
        ]
        for text, line, directive, message in cases:
            with self.assertRaises(CorpusError) as raised:
                parse_corpus(text)
            self.assertEqual(raised.exception.line, line, text)
            self.assertEqual(raised.exception.directive, directive, text)
            if message is not None:
                self.assertEqual(str(raised.exception), 'line {}: {}: {}'.format(line, directive, message))


class Test_VerifyCorpus(unittest.TestCase):

    def test_peirce(self):
        report = verify_corpus(PEIRCE_CORPUS)

        self.assertEqual(report.lines(), ['peirce PASS 1', 'identity_bot PASS 0'])
        self.assertTrue(report.success)
        self.assertEqual(len(report), 2)

    def test_wrong_expectation(self):
        report = verify_corpus(WRONG_EXPECTATION_CORPUS)

        self.assertEqual(report.lines(), ['identity_bot FAIL 0'])
        self.assertFalse(report.success)
        self.assertEqual(report.entries[0].reason, u'stuck at I ⋆ ?pi1')

    def test_lemmas(self):
        report = verify_corpus(LEMMA_CORPUS)

        self.assertTrue(report.success, report.lines())
        self.assertEqual([entry.status for entry in report.entries], ['PASS', 'PASS'])
        self.assertIn(u'LEMMA', [line.split()[0] for line in report.entries[1].trace.lines()])

    def test_cites_rejected(self):
        report = verify_corpus(CITES_REJECTED_CORPUS)

        self.assertEqual(report.lines(), ['identity_bot PASS 0', 'cites FAIL 0'])
        self.assertEqual(report.entries[1].reason, 'cited goal not accepted: identity_bot')

    def test_truncated(self):
        report = verify_corpus(TRUNCATED_CORPUS)

        self.assertEqual(report.lines(), ['limit PASS 4 truncated'])
        self.assertTrue(report.entries[0].truncated)

    def test_fuel(self):
        report = verify_corpus(FUEL_CORPUS)

        self.assertEqual(report.lines(), ['w0 FUEL 2'])
        self.assertFalse(report.success)

    def test_config_fuel(self):
        report = verify_corpus(PEIRCE_CORPUS, VerifierConfig(fuel=1))

        self.assertTrue(report.success)

    def test_unbounded(self):
        with self.assertRaises(CorpusError) as raised:
            verify_corpus(UNBOUNDED_CORPUS)
        self.assertEqual(raised.exception.line, 2)

    def test_empty(self):
        report = verify_corpus(u"# nothing to check\n")

        self.assertEqual(report.lines(), [])
        self.assertTrue(report.success)

    def test_trace_lines(self):
        lines = verify_corpus(WRONG_EXPECTATION_CORPUS).trace_lines()

        self.assertEqual(lines[0], 'identity_bot FAIL 0')
        self.assertEqual(lines[1], u'  reason: stuck at I ⋆ ?pi1')

    def test_parsed_goals(self):
        report = verify_corpus(parse_corpus(PEIRCE_CORPUS))

        self.assertEqual(report.lines(), ['peirce PASS 1', 'identity_bot PASS 0'])


class Test_ShippedCorpus(unittest.TestCase):

    def test_all_goals_meet_expectations(self):
        report = verify_corpus(krivine.load_shipped_corpus())

        failures = [(entry.line(), entry.reason) for entry in report.entries if entry.status != krivine.PASS]
        self.assertEqual(failures, [])
        self.assertTrue(report.success)

    def test_rejections(self):
        report = verify_corpus(krivine.load_shipped_corpus())
        rejected = [entry.ident for entry in report.entries if not entry.accepted]

        self.assertEqual(rejected, ['identity_bot', 'hat_bounded_converse_plain_cc', 'w0_without_induction'])

    def test_uniform_checks(self):
        goals = parse_corpus(krivine.load_shipped_corpus())
        uniform = [goal.ident for goal in goals if goal.uniform]

        self.assertIn('hat_bounded_converse', uniform)
        self.assertIn('reish_limit', uniform)

    def test_lemma_outside_its_universe(self):
        report = verify_corpus(krivine.load_shipped_corpus())
        entries = {entry.ident: entry for entry in report.entries}

        self.assertTrue(entries['hat_inclusion'].extrapolated)
        self.assertTrue(entries['hat_inclusion'].line().endswith(' extrapolated'))
        self.assertFalse(entries['peirce'].extrapolated)


RANK_THREE = ('reish 0', 'reish 1', 'gimel{reish 1}', 'reish 2')
RANK_THREE_FUEL = 200000


def goal_block(ident, claim, universe=None, using=(), bound=None):
    lines = ['goal {} expect accept'.format(ident)]
    if universe:
        lines.append('  universe ' + universe)
    lines.append('  claim realizes ' + claim)
    lines.extend('  using ' + directive for directive in using)
    if bound:
        lines.append('  bound {}'.format(bound))
    return '\n'.join(lines) + '\n'


def gimel_bounded(size):
    members = ', '.join(['reish 1', 'reish 0', 'up (reish 0) (reish 1)'][:size])
    universe = 'reish 2, up (reish 0) (reish 1)'
    forward = goal_block('gimel_bounded_{}'.format(size),
                         r'\u.\v. v u : (all x^gimel{%s}. P(x)) -> all x. (P(x) -> bot) -> x !eps gimel{%s}' % (members, members),
                         universe)
    converse = goal_block('gimel_bounded_converse_{}'.format(size),
                          r'\u. cc (\k. u k) : (all x. (P(x) -> bot) -> x !eps gimel{%s}) -> all x^gimel{%s}. P(x)' % (members, members),
                          universe)
    return forward + converse


def rank_three_universe():
    subsets = itertools.chain.from_iterable(itertools.combinations(RANK_THREE, k) for k in range(1, len(RANK_THREE) + 1))
    names = ['gimel{%s}' % ', '.join(subset) for subset in subsets]
    return ', '.join(names + ['up (reish 0) (reish 1)', 'op (reish 0) (reish 0)'])


class Test_Ranges(unittest.TestCase):

    def assertAllPass(self, text):
        report = verify_corpus(text)
        failures = [(entry.line(), entry.reason) for entry in report.entries if entry.status != krivine.PASS]
        self.assertEqual(failures, [])
        return report

    def test_reish_transitive(self):
        for n in range(1, 6):
            with self.subTest(n=n):
                self.assertAllPass(goal_block('reish_transitive', 'I : all x^reish(%d). all y. y !eps reish %d -> y !eps x' % (n, n),
                                              'reish {}'.format(n)))

    def test_hat_transitive(self):
        for n in range(1, 6):
            with self.subTest(n=n):
                self.assertAllPass(goal_block('hat_transitive', r'\u.\w. w : all x^hat(%d). all y. y !eps hat %d -> y !eps x' % (n, n),
                                              'hat {}'.format(n)))

    def test_hat_membership(self):
        blocks = [goal_block('hat_membership_{}_{}'.format(beta, alpha), r'\u. u nu%d : hat %d eps hat %d' % (beta, beta, alpha))
                  for alpha in range(1, 5) for beta in range(alpha)]

        report = self.assertAllPass(''.join(blocks))

        self.assertEqual(len(report.entries), 10)

    def test_hat_successor(self):
        w0 = goal_block('w0', 'w0 : all x. x sub x', 'reish 3, up (reish 0) (reish 1)', ['induction'])
        for n in range(1, 6):
            with self.subTest(n=n):
                claim = r'\v.\w. w (\u. u w0 w0) : all x^hat(%d). all y. (y sub x -> bot) -> y !eps happ hat_succ x' % n
                successor = goal_block('hat_successor', claim, 'hat {}'.format(n), ['lemma w0', 'nested-intro'])
                self.assertAllPass('let hat_succ = olift succ %d\n' % n + w0 + successor)

    def test_gimel_bounded(self):
        for size in (1, 2, 3):
            with self.subTest(size=size):
                report = self.assertAllPass(gimel_bounded(size))
                self.assertTrue(all(entry.accepted for entry in report.entries))

    def test_rank_three_universe(self):
        universe = rank_three_universe()

        report = self.assertAllPass(goal_block('w0', 'w0 : all x. x sub x', universe, ['induction'], RANK_THREE_FUEL)
                                    + goal_block('w2', 'w2 : all x. x !in x', universe, ['induction'], RANK_THREE_FUEL))

        self.assertEqual([entry.ident for entry in report.entries if entry.accepted], ['w0', 'w2'])


if __name__ == '__main__':
    unittest.main()
