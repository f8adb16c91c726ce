"""Reduced words in free products and the kernel-word machinery.

The fast kernel-word engine and the definitional enumerator are
independent routes to the same sets; their agreement is asserted here on
fixed instances, together with frozen counts for the bundled worked
example (two order-2 subgroups and the full group inside S3).
"""

import itertools

import numpy as np
import pytest

from commwb._kernel_search import (iter_word_records, ternary_kernel_elements,
                                   ternary_kernel_words)
from commwb.core import Subuniverse, check_hom
from commwb.freeprod import (cosmash_kernel_words, delete_factor, evaluate,
                             identity_word, make_word, word_inverse,
                             word_multiply)
from commwb.varieties import cyclic_group, symmetric_group


def _c2_c2_s3():
    """The bundled instance: two copies of <(12)> and all of S3."""
    s3 = symmetric_group(3)
    c2 = Subuniverse(s3, (0, 2))
    full = Subuniverse(s3, tuple(range(6)))
    return s3, (c2, c2, full)


def _record_pairs(buf):
    """Syllable tuples of every record in an engine buffer."""
    out = set()
    for length, flat in iter_word_records(buf):
        out.add(tuple((int(flat[2 * i]), int(flat[2 * i + 1]))
                      for i in range(length)))
    return out


# ---------------------------------------------------------------------------
# reduced-word algebra


def test_make_word_reduces_cancellations():
    z4 = cyclic_group(4)
    z2 = cyclic_group(2)
    factors = (z4, z2)
    w = make_word(factors, [(0, 1), (0, 3)])     # 1 + 3 = 0 in Z4
    assert w.syllables == ()
    w = make_word(factors, [(0, 1), (0, 1)])     # merges to (0, 2)
    assert w.syllables == ((0, 2),)
    w = make_word(factors, [(0, 1), (1, 1), (1, 1)])  # Z2 part cancels
    assert w.syllables == ((0, 1),)


def test_words_alternate_factors_and_skip_identities():
    z4, z2 = cyclic_group(4), cyclic_group(2)
    w = make_word((z4, z2), [(0, 1), (1, 1), (0, 2), (0, 1), (1, 1)])
    assert w.syllables == ((0, 1), (1, 1), (0, 3), (1, 1))
    for (f1, x1), (f2, _) in zip(w.syllables, w.syllables[1:]):
        assert f1 != f2
        assert x1 != 0


def test_group_laws_on_reduced_words():
    z4, z3 = cyclic_group(4), cyclic_group(3)
    factors = (z4, z3)
    samples = [make_word(factors, s) for s in (
        [], [(0, 1)], [(1, 2)], [(0, 3), (1, 1)], [(1, 2), (0, 2), (1, 1)],
        [(0, 1), (1, 1), (0, 1), (1, 2)])]
    e = identity_word(factors)
    for u in samples:
        assert word_multiply(u, e).syllables == u.syllables
        assert word_multiply(e, u).syllables == u.syllables
        assert word_multiply(u, word_inverse(u)).syllables == ()
        assert word_multiply(word_inverse(u), u).syllables == ()
    for u, v, w in itertools.product(samples, repeat=3):
        left = word_multiply(word_multiply(u, v), w)
        right = word_multiply(u, word_multiply(v, w))
        assert left.syllables == right.syllables


def test_evaluation_is_a_homomorphism():
    z4, z3 = cyclic_group(4), cyclic_group(3)
    s3 = symmetric_group(3)
    homs = (check_hom(z4, s3, [0, 2, 0, 2]),
            check_hom(z3, s3, [0, 3, 4]))
    factors = (z4, z3)
    mul = s3.tables["mul"]
    samples = [make_word(factors, s) for s in (
        [], [(0, 1)], [(1, 1)], [(0, 1), (1, 2)], [(1, 2), (0, 3), (1, 1)])]
    for u, v in itertools.product(samples, repeat=2):
        got = evaluate(word_multiply(u, v), homs)
        want = int(mul[evaluate(u, homs), evaluate(v, homs)])
        assert got == want


def test_delete_factor_is_multiplicative_and_kills_its_factor():
    z4, z3 = cyclic_group(4), cyclic_group(3)
    factors = (z4, z3)
    u = make_word(factors, [(0, 1), (1, 2), (0, 2)])
    v = make_word(factors, [(0, 2), (1, 1)])
    for i in range(2):
        left = delete_factor(word_multiply(u, v), i)
        right = word_multiply(delete_factor(u, i), delete_factor(v, i))
        assert left.syllables == right.syllables
        assert all(f != i for f, _ in delete_factor(u, i).syllables)


# ---------------------------------------------------------------------------
# kernel words: dual routes agree, frozen counts hold


def test_cosmash_kernel_words_die_under_every_deletion():
    _, subs = _c2_c2_s3()
    factors = tuple(s.as_algebra().algebra for s in subs)
    for w in cosmash_kernel_words(factors, max_len=6):
        for i in range(3):
            assert delete_factor(w, i).syllables == ()


def test_engine_agrees_with_definitional_enumerator():
    _, subs = _c2_c2_s3()
    fast = _record_pairs(ternary_kernel_words(subs, max_len=10))
    factors = tuple(s.as_algebra().algebra for s in subs)
    slow = {w.syllables for w in cosmash_kernel_words(factors, max_len=10)}
    # the enumerator also yields the empty word; the engine emits only
    # nonempty ones
    assert () in slow
    assert fast | {()} == slow
    assert len(fast) == 150


def test_engine_counts_frozen_across_bounds():
    s3, subs = _c2_c2_s3()
    assert len(_record_pairs(ternary_kernel_words(subs, max_len=9))) == 0
    assert len(_record_pairs(ternary_kernel_words(subs, max_len=10))) == 150
    z8 = cyclic_group(8)
    two = Subuniverse(z8, (0, 4))
    assert len(_record_pairs(
        ternary_kernel_words((two, two, two), max_len=10))) == 30
    z4 = cyclic_group(4)
    full4 = Subuniverse(z4, (0, 1, 2, 3))
    assert len(_record_pairs(
        ternary_kernel_words((full4, full4, full4), max_len=8))) == 0
    assert len(_record_pairs(
        ternary_kernel_words((full4, full4, full4), max_len=10))) == 810


def test_kernel_word_evaluations_reach_a3():
    s3, subs = _c2_c2_s3()
    got = ternary_kernel_elements(s3, subs, max_len=10)
    assert got == {0, 3, 4}
    # the definitional route lands on the same values
    views = tuple(s.as_algebra() for s in subs)
    factors = tuple(v.algebra for v in views)
    homs = tuple(check_hom(v.algebra, s3, v.to_parent) for v in views)
    values = {0}
    for w in cosmash_kernel_words(factors, max_len=10):
        values.add(evaluate(w, homs))
    assert values == {0, 3, 4}


def test_engine_words_really_lie_in_the_kernel():
    _, subs = _c2_c2_s3()
    factors = tuple(s.as_algebra().algebra for s in subs)
    words = ternary_kernel_words(subs, max_len=10)
    for pairs in itertools.islice(sorted(_record_pairs(words)), 25):
        w = make_word(factors, pairs)
        assert w.syllables == pairs
        for i in range(3):
            assert delete_factor(w, i).syllables == ()
