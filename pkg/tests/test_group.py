import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from diffam.errors import InputError, PreconditionError
from diffam.group import (
    Group,
    Halving,
    canonical_halving,
    coset_reps,
    crt_map,
    cyclic,
    direct_product,
    field_additive,
    make_group,
    subgroup,
)


def test_make_group_orders():
    assert make_group("cyclic", [11]).order == 11
    G = make_group("product", [11, 13])
    assert G.order == 143
    Z, images = crt_map(G)
    assert Z.order == 143
    # CRT image: x -> (x mod 11, x mod 13)
    for x in range(143):
        assert images[G.encode((x % 11, x % 13))] == x


@pytest.mark.parametrize("kind, moduli", [("cyclic", [1]), ("product", []), ("cyclic", [0]), ("ring", [5])])
def test_make_group_rejects(kind, moduli):
    with pytest.raises(InputError):
        make_group(kind, moduli)


def test_small_arithmetic():
    G = cyclic(11)
    assert G.add(4, 9) == 2
    assert G.order_of(0) == 1
    assert G.order_of(5) == 11
    with pytest.raises(InputError):
        G.add(11, 0)


def test_encoding_is_mixed_radix_first_coordinate_major():
    G = direct_product(3, 5)
    assert [G.decode(c) for c in range(6)] == [(0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (1, 0)]
    assert list(G.elements()) == sorted(itertools.product(range(3), range(5)))


SMALL_GROUPS = [cyclic(n) for n in (2, 7, 12, 30)] + [
    direct_product(2, 4), direct_product(3, 3, 3), direct_product(5, 7), field_additive(2, 4),
]


@pytest.mark.parametrize("G", SMALL_GROUPS, ids=repr)
def test_group_axioms_exhaustive(G: Group):
    v = G.order
    codes = np.arange(v)
    a, b = np.meshgrid(codes, codes, indexing="ij")
    table = G.add_codes(a.ravel(), b.ravel()).reshape(v, v)
    # oracle: coordinate-wise arithmetic on decoded tuples
    for x in range(v):
        for y in range(v):
            want = G.encode(tuple((p + q) % m for p, q, m in zip(G.decode(x), G.decode(y), G.moduli)))
            assert table[x, y] == want
    assert np.array_equal(table, table.T)
    assert all(table[x, G.neg(x)] == 0 for x in range(v))
    assoc = G.add_codes(table[a.ravel(), b.ravel()], 1 % v)
    assert np.array_equal(assoc, G.add_codes(a.ravel(), G.add_codes(b.ravel(), 1 % v)))
    for x in range(v):
        assert v % G.order_of(x) == 0


@given(st.integers(2, 200), st.data())
def test_cyclic_axioms_random(n, data):
    G = cyclic(n)
    x, y, z = (data.draw(st.integers(0, n - 1)) for _ in range(3))
    assert G.add(x, y) == (x + y) % n
    assert G.add(G.add(x, y), z) == G.add(x, G.add(y, z))
    assert G.add(x, G.neg(x)) == 0
    # brute-force order
    k = next(k for k in range(1, n + 1) if (k * x) % n == 0)
    assert G.order_of(x) == k == n // math.gcd(n, x)


def test_coset_reps_examples():
    H, reps = coset_reps(cyclic(63), 3)
    assert H == frozenset(range(0, 63, 3))
    assert reps == [0, 1, 2]
    H, reps = coset_reps(cyclic(11), 1)
    assert H == frozenset(range(11)) and reps == [0]
    with pytest.raises(InputError):
        coset_reps(cyclic(11), 2)


@pytest.mark.parametrize("G, spec", [
    (cyclic(63), 9), (cyclic(60), 4), (direct_product(11, 13), 11), (direct_product(11, 13), 13),
    (direct_product(4, 6), (2, 3)), (field_additive(3, 2), (3, 1)),
])
def test_cosets_enumerate_group_once(G, spec):
    H, reps = coset_reps(G, spec)
    assert reps[0] == 0
    hit = sorted(G.add(h, r) for h in H for r in reps)
    assert hit == list(range(G.order))
    assert len(H) * len(reps) == G.order


def test_subgroup_roundtrip_and_ambiguity():
    sub = subgroup(direct_product(11, 13), 13)
    assert sub.group.order == 11
    assert np.array_equal(sub.from_sub(sub.to_sub(list(sub.members))), list(sub.members))
    with pytest.raises(InputError):
        subgroup(direct_product(2, 4), 2)


def test_canonical_halving_examples():
    h = canonical_halving(cyclic(7))
    assert h.h1 == {1, 2, 3} and h.h2 == {4, 5, 6}
    h = canonical_halving(cyclic(11))
    assert h.h1 == set(range(1, 6)) and h.h2 == set(range(6, 11))
    with pytest.raises(PreconditionError):
        canonical_halving(cyclic(16))


@pytest.mark.parametrize("G", [cyclic(3), cyclic(15), direct_product(3, 5), direct_product(3, 3), field_additive(5, 2)],
                         ids=repr)
def test_halving_partitions(G):
    h = canonical_halving(G)
    assert h.h1 | h.h2 | {0} == set(range(G.order))
    assert not h.h1 & h.h2
    assert {G.neg(x) for x in h.h1} == h.h2


def test_bad_halving_rejected():
    with pytest.raises(InputError):
        Halving.from_h1(cyclic(7), [1, 6, 2])


def test_descriptor_roundtrip():
    for G in (cyclic(63), direct_product(11, 13), field_additive(13, 1), field_additive(2, 6)):
        assert Group.from_descriptor(G.descriptor()) == G
    assert cyclic(63).descriptor() == {"kind": "cyclic", "order": 63}
    assert direct_product(11, 13).descriptor() == {"kind": "product", "moduli": [11, 13]}
    assert field_additive(13, 1).descriptor() == {"kind": "field_additive", "p": 13, "m": 1}
