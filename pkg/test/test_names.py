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
from krivine import (Name, NameUniverse, PrefixAll, Finite, EnumLit, Bottom, Push, church,
                     mk_reish, mk_hat, mk_gimel, sng, up, op, unpair, rank, dom)


class Test_Names(unittest.TestCase):

    def test_reish(self):
        self.assertEqual(mk_reish(0), Name())
        self.assertEqual(rank(mk_reish(3)), 3)
        self.assertEqual(dom(mk_reish(2)), frozenset([mk_reish(0), mk_reish(1)]))
        self.assertEqual(str(mk_reish(2)), 'reish 2')
        with self.assertRaises(ValueError):
            mk_reish(-1)

    def test_gimel(self):
        self.assertEqual(mk_gimel([mk_reish(0)]), mk_reish(1))
        self.assertEqual(mk_gimel([]), mk_reish(0))
        self.assertEqual(mk_gimel([mk_reish(0), mk_reish(1)]), mk_reish(2))

    def test_hat(self):
        self.assertEqual(mk_hat(0), mk_reish(0))
        self.assertNotEqual(mk_hat(1), mk_reish(1))
        self.assertEqual(rank(mk_hat(4)), 4)
        spec = dict(mk_hat(2).entries)[mk_hat(1)]
        self.assertTrue(spec.contains(Push(EnumLit(1), Bottom('pi'))))
        self.assertFalse(spec.contains(Push(EnumLit(0), Bottom('pi'))))
        self.assertFalse(spec.contains(Bottom('pi')))

    def test_hat_bound(self):
        self.assertEqual(mk_hat(4, bound=4), mk_hat(4))
        with self.assertRaises(krivine.BoundExceeded):
            mk_hat(5, bound=4)

    def test_equality_ignores_labels(self):
        relabelled = Name(mk_reish(2).entries, label='two')

        self.assertEqual(relabelled, mk_reish(2))
        self.assertEqual(hash(relabelled), hash(mk_reish(2)))
        self.assertEqual(len({relabelled, mk_reish(2)}), 1)

    def test_relabeled_leaves_original(self):
        two = mk_reish(2).relabeled('two')

        self.assertEqual(two, mk_reish(2))
        self.assertEqual(str(two), 'two')
        self.assertEqual(str(mk_reish(2)), 'reish 2')
        self.assertEqual(mk_reish(2).ordinal, ('reish', 2))

    def test_op_keeps_shared_labels(self):
        pair = op(mk_reish(0), mk_reish(1))

        self.assertEqual(str(pair), 'op (reish 0) (reish 1)')
        self.assertEqual(str(mk_reish(0)), 'reish 0')
        self.assertEqual(str(mk_reish(1)), 'reish 1')

    def test_pairs(self):
        a, b = mk_reish(1), mk_hat(2)

        self.assertEqual(rank(op(mk_reish(0), mk_reish(0))), 3)
        self.assertEqual(unpair(op(a, b)), (a, b))
        self.assertIsNone(unpair(up(a, b)))
        self.assertIsNone(unpair(mk_reish(3)))
        self.assertNotEqual(up(a, b), up(b, a))
        self.assertEqual(dom(sng(a)), frozenset([a]))

    def test_lift(self):
        f = krivine.lift({mk_reish(0): mk_reish(1), mk_reish(1): mk_reish(2)})

        self.assertEqual(krivine.apply_lift(f, mk_reish(1)), mk_reish(2))
        self.assertIsNone(krivine.apply_lift(f, mk_reish(2)))

    def test_ordered_lift(self):
        f = krivine.ordered_lift(krivine.ORDINAL_FUNCTIONS['succ'], 4)

        self.assertEqual(krivine.apply_lift(f, mk_hat(2)), mk_hat(3))
        self.assertIsNone(krivine.apply_lift(f, mk_hat(4)))
        specs = set(spec for _, spec in f.entries)
        self.assertEqual(specs, set(PrefixAll((EnumLit(alpha),)) for alpha in range(4)))
        with self.assertRaises(ValueError):
            krivine.ordered_lift({0: 1}, 2)

    def test_h(self):
        x = mk_hat(2)

        self.assertEqual(krivine.h_apply(mk_reish(0), x), mk_reish(0))
        self.assertEqual(krivine.h_apply(mk_reish(1), x), x)
        self.assertIsNone(krivine.h_apply(mk_reish(2), x))
        h = krivine.mk_h([x])
        self.assertEqual(krivine.apply_lift(h, op(mk_reish(1), x)), x)
        self.assertEqual(krivine.apply_lift(h, op(mk_reish(0), x)), mk_reish(0))

    def test_lt_truth(self):
        self.assertEqual(krivine.lt_truth(mk_reish(0), mk_reish(2)), mk_reish(1))
        self.assertEqual(krivine.lt_truth(mk_reish(2), mk_reish(2)), mk_reish(0))
        self.assertEqual(krivine.lt_truth(mk_hat(1), mk_hat(3)), mk_reish(1))


class Test_NameUniverse(unittest.TestCase):

    def test_closure(self):
        universe = NameUniverse.closure([mk_reish(3)])

        self.assertEqual(len(universe), 4)
        self.assertEqual(universe.members, tuple(mk_reish(n) for n in range(4)))
        self.assertEqual(universe.below_rank(2), (mk_reish(0), mk_reish(1)))
        self.assertIn(mk_reish(2), universe)
        self.assertNotIn(mk_hat(1), universe)

    def test_extend(self):
        universe = NameUniverse.closure([mk_reish(1)]).extend([up(mk_reish(0), mk_reish(1))])

        self.assertEqual(len(universe), 3)
        self.assertEqual(universe.members[-1], up(mk_reish(0), mk_reish(1)))

    def test_reish_ord_segment(self):
        segment = krivine.reish_ord_segment(3)

        self.assertEqual(segment.class_marker, 'reish-ord')
        self.assertEqual(len(segment), 3)
        self.assertNotIn(mk_reish(3), segment)


class Test_Falsity(unittest.TestCase):

    def test_not_eps(self):
        value = krivine.falsity_atomic('neps', mk_hat(1), mk_hat(3))

        self.assertEqual(value.specs, (PrefixAll((EnumLit(1),)),))
        self.assertFalse(value.is_full)
        self.assertTrue(krivine.falsity_atomic(u'ε̸', mk_reish(0), mk_reish(1)).is_full)
        self.assertTrue(krivine.falsity_atomic('!eps', mk_reish(1), mk_reish(1)).is_empty)

    def test_neq(self):
        self.assertTrue(krivine.falsity_atomic('!=', mk_hat(1), mk_hat(1)).is_full)
        self.assertTrue(krivine.falsity_atomic('neq', mk_hat(1), mk_reish(1)).is_empty)

    def test_not_in(self):
        value = krivine.falsity_atomic('!in', mk_reish(0), mk_reish(2))

        self.assertEqual(value.relation, krivine.NOT_IN)
        self.assertEqual([entry.child for entry in value.entries], [mk_reish(0), mk_reish(1)])
        first = value.entries[0]
        self.assertEqual(first.slots, ((krivine.SUB, mk_reish(0), mk_reish(0)),
                                       (krivine.SUB, mk_reish(0), mk_reish(0))))
        self.assertEqual(first.tail, krivine.ALL_STACKS)

    def test_sub(self):
        value = krivine.falsity_atomic(u'⊆', mk_reish(1), mk_reish(0))

        self.assertEqual(value.relation, krivine.SUB)
        self.assertEqual(len(value.entries), 1)
        self.assertEqual(value.entries[0].slots, ((krivine.NOT_IN, mk_reish(0), mk_reish(0)),))
        self.assertTrue(krivine.falsity_atomic('sub', mk_reish(0), mk_reish(3)).is_empty)

    def test_unknown_relation(self):
        with self.assertRaises(ValueError):
            krivine.falsity_atomic('eps', mk_reish(0), mk_reish(1))

    def test_stack_specs(self):
        finite = Finite((Bottom('a'), Push(church(0), Bottom('b'))))

        self.assertTrue(finite.contains(Bottom('a')))
        self.assertFalse(finite.contains(Bottom('b')))
        self.assertTrue(PrefixAll((church(0),)).contains(Push(church(0), Bottom('b'))))
        with self.assertRaises(ValueError):
            PrefixAll(())


if __name__ == '__main__':
    unittest.main()
