import numpy as np
import pytest

from hyptiles.coxeter import (
    enumerate_elements,
    enumerate_reflections,
    reduce_word,
)
from hyptiles.reflength import (
    ReflectionLengthTable,
    reflection_length,
    reflection_length_bfs,
    step_pair,
)


def test_identity_is_zero(tri344):
    assert reflection_length(tri344, tri344.identity) == 0


def test_generator_is_one(tri344):
    for i in range(3):
        assert reflection_length(tri344, tri344.generator(i)) == 1


def test_nested_conjugate_is_one(tri344):
    w = reduce_word(tri344, (0, 1, 0))
    assert len(w.word) == 3
    assert reflection_length(tri344, w) == 1


def test_rotation_is_two(tri344):
    w = reduce_word(tri344, (0, 1))
    assert reflection_length(tri344, w) == 2


def test_parity(tri344):
    for el in enumerate_elements(tri344, 5):
        assert reflection_length(tri344, el) % 2 == len(el.word) % 2


def test_bounds(tri23inf):
    for el in enumerate_elements(tri23inf, 5):
        lr = reflection_length(tri23inf, el)
        assert 0 <= lr <= len(el.word)
        assert (lr == 0) == (len(el.word) == 0)


def test_oracle_matches_deletion_small(tri344):
    table = ReflectionLengthTable(tri344, 5)
    for el in enumerate_elements(tri344, 5):
        assert table.length(el) == reflection_length(tri344, el)


def test_oracle_matches_deletion_small_tangent(tri23inf):
    table = ReflectionLengthTable(tri23inf, 5)
    for el in enumerate_elements(tri23inf, 5):
        assert table.length(el) == reflection_length(tri23inf, el)


def test_oracle_single_element(tri344):
    w = reduce_word(tri344, (0, 1, 2, 0, 1))
    assert reflection_length_bfs(tri344, w) == reflection_length(tri344, w)


def test_oracle_on_long_reflection(tri344):
    # a reflection of length 5 has oracle distance one
    refls = enumerate_reflections(tri344, 2)
    long_refl = next(r for r in refls if len(r.element.word) == 5)
    assert reflection_length_bfs(tri344, long_refl.element) == 1
    assert reflection_length(tri344, long_refl.element) == 1


def test_step_property_trivial(tri344):
    refls = enumerate_reflections(tri344, 0)
    before, after = step_pair(tri344, tri344.identity, refls[0])
    assert (before, after) == (0, 1)
    before, after = step_pair(tri344, refls[0].element, refls[0])
    assert (before, after) == (1, 0)


def test_step_property_random(tri344, rng):
    elements = [e for e in enumerate_elements(tri344, 6)]
    refls = enumerate_reflections(tri344, 2)
    for _ in range(60):
        el = elements[rng.integers(0, len(elements))]
        r = refls[rng.integers(0, len(refls))]
        before, after = step_pair(tri344, el, r)
        assert abs(after - before) == 1


def test_conjugation_invariance(tri344, rng):
    elements = enumerate_elements(tri344, 4)
    for _ in range(25):
        w = elements[rng.integers(0, len(elements))]
        v = elements[rng.integers(0, len(elements))]
        conj = reduce_word(tri344, v.word + w.word + v.word[::-1])
        assert reflection_length(tri344, conj) == reflection_length(tri344, w)


def test_unboundedness_probe(tri344):
    max_by_depth = {}
    for depth in (2, 10):
        elems = enumerate_elements(tri344, depth)
        max_by_depth[depth] = max(reflection_length(tri344, e) for e in elems)
    assert max_by_depth[2] == 2
    assert max_by_depth[10] > 2
