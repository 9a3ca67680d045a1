import math

import numpy as np
import pytest
from sympy import isprime

from diffam.catalog import (
    FAMILIES,
    all_difference_sets,
    biquadratic_ds,
    build_ds,
    complement_ds,
    cyclotomic_ddf,
    octic_ds,
    paley_qr_ds,
    prime_power,
    qr_ads,
    qr_complement_zero_ds,
    singer_ds,
    singer_trace_zero_indices,
    to_cyclic,
    twin_prime_ds,
)
from diffam.errors import InputError, PreconditionError


def naive_lambda_values(ds):
    # coordinate-wise differences of decoded tuples, re-encoded by hand
    G = ds.group
    coords = np.array([G.decode(x) for x in ds.elements], dtype=np.int64)
    moduli = np.array(G.moduli, dtype=np.int64)
    diff = (coords[:, None, :] - coords[None, :, :]) % moduli
    weights = np.array([math.prod(G.moduli[i + 1:]) for i in range(len(G.moduli))], dtype=np.int64)
    codes = (diff * weights).sum(axis=2)[~np.eye(len(coords), dtype=bool)]
    counts = np.bincount(codes, minlength=G.order)
    return set(counts[1:].tolist())


def test_singer_examples():
    assert singer_ds(2, 4).params() == (15, 7, 3)
    assert singer_ds(2, 6).params() == (63, 31, 15)
    with pytest.raises(PreconditionError):
        singer_ds(4, 3)


@pytest.mark.parametrize("q, m", [(q, m) for q in (2, 3, 4, 5, 7, 8, 9) for m in (3, 4, 5, 6) if q**m <= 20000])
def test_singer_size_iff_gcd(q, m):
    _, D = singer_trace_zero_indices(q, m)
    expected = (q ** (m - 1) - 1) // (q - 1)
    assert (len(D) == expected) == (math.gcd(q - 1, m) == 1)


@pytest.mark.parametrize("q, m", [(2, 3), (2, 5), (3, 3), (4, 5), (5, 3), (8, 3)])
def test_singer_parameters(q, m):
    ds = singer_ds(q, m)
    assert ds.params() == ((q**m - 1) // (q - 1), (q ** (m - 1) - 1) // (q - 1), (q ** (m - 2) - 1) // (q - 1))
    assert naive_lambda_values(ds) == {ds.lam}


def test_paley_examples():
    assert paley_qr_ds(11).elements == (1, 3, 4, 5, 9)
    assert paley_qr_ds(11).params() == (11, 5, 2)
    assert paley_qr_ds(7).elements == (1, 2, 4)
    with pytest.raises(PreconditionError):
        paley_qr_ds(13)
    with pytest.raises(InputError):
        paley_qr_ds(15)


@pytest.mark.parametrize("q", [q for q in range(3, 300) if q % 4 == 3 and prime_power(q)])
def test_paley_is_skew(q):
    ds = paley_qr_ds(q)
    G, D = ds.group, set(ds.elements)
    neg = {G.neg(x) for x in D}
    assert not D & neg
    assert D | neg | {0} == set(range(q))
    assert ds.params() == (q, (q - 1) // 2, (q - 3) // 4)


def test_complement_zero_examples():
    ds = qr_complement_zero_ds(11)
    assert ds.params() == (11, 6, 3) and 0 in ds.elements
    assert qr_complement_zero_ds(7).params() == (7, 4, 2)
    with pytest.raises(PreconditionError):
        qr_complement_zero_ds(5)


def test_biquadratic_and_octic_examples():
    assert biquadratic_ds(37).params() == (37, 9, 2)
    assert biquadratic_ds(13, with_zero=True).params() == (13, 4, 1)
    with pytest.raises(PreconditionError):
        biquadratic_ds(17)
    assert octic_ds(73).params() == (73, 9, 1)
    with pytest.raises(PreconditionError):
        octic_ds(41)
    with pytest.raises(PreconditionError):
        octic_ds(9)


def test_biquadratic_elements_are_fourth_powers():
    ds = biquadratic_ds(37)
    assert set(ds.elements) == {pow(x, 4, 37) for x in range(1, 37)}


def test_twin_prime_examples():
    assert twin_prime_ds(3).params() == (15, 7, 3)
    assert twin_prime_ds(11).params() == (143, 71, 35)
    with pytest.raises(PreconditionError):
        twin_prime_ds(7)


@pytest.mark.parametrize("q", [3, 5, 11, 17])
def test_twin_prime_crt_image(q):
    ds = twin_prime_ds(q)
    cyc = to_cyclic(ds)
    assert cyc.params() == ds.params()
    assert cyc.group.rank == 1
    D = set(ds.elements)
    assert set(cyc.elements) == {z for z in range(ds.v) if ds.group.encode((z % q, z % (q + 2))) in D}
    assert naive_lambda_values(cyc) == {ds.lam}


def test_qr_ads_examples():
    a = qr_ads(13)
    assert (a.v, a.k, a.lam, a.t) == (13, 6, 2, 6)
    assert set(a.T) == set(a.elements) == {x * x % 13 for x in range(1, 13)}
    a = qr_ads(5)
    assert (a.v, a.k, a.lam, a.t) == (5, 2, 0, 2)
    with pytest.raises(PreconditionError):
        qr_ads(11)


def test_cyclotomic_ddf_examples():
    d = cyclotomic_ddf(13, 4)
    assert (d.v, d.k, d.lam, len(d.blocks)) == (13, 3, 2, 4)
    assert d.blocks[0] == (1, 3, 9)
    d = cyclotomic_ddf(7, 2)
    assert (d.v, d.k, d.lam, len(d.blocks)) == (7, 3, 2, 2)
    with pytest.raises(InputError):
        cyclotomic_ddf(13, 5)


def test_complement_examples():
    assert complement_ds(paley_qr_ds(7)).params() == (7, 4, 2)
    assert complement_ds(paley_qr_ds(11)).params() == (11, 6, 3)
    assert complement_ds(singer_ds(2, 4)).params() == (15, 8, 4)


def test_build_ds_registry():
    assert build_ds("singer", q=2, m=6).params() == (63, 31, 15)
    with pytest.raises(InputError):
        build_ds("hadamard", q=3)
    with pytest.raises(InputError):
        build_ds("singer", q=2)
    assert set(FAMILIES) >= {"singer", "paley", "twinprime", "qr_ads", "cyclotomic_ddf"}


def test_full_catalog_is_sound():
    sets = all_difference_sets(500)
    assert len({(d.name, d.params()) for d in sets}) == len(sets)
    for ds in sets:
        v, k, lam = ds.params()
        assert len(ds.elements) == k and k * (k - 1) == lam * (v - 1)
        assert naive_lambda_values(ds) == {lam}
    # every twin prime pair below the bound is present
    twins = [q for q in range(3, 23) if isprime(q) and isprime(q + 2) and q * (q + 2) <= 500]
    assert sorted(d.source["q"] for d in sets if d.source.get("family") == "twinprime") == twins
