import pytest
from hypothesis import given, strategies as st

import oracles
from boolnorm import Flat, Subspace, enumerate_flats, enumerate_subspaces, gaussian_binomial, gf2
from boolnorm.exceptions import DomainError, InvalidFlatError, ParseError
from boolnorm.spaces import parse_flat, format_flat, pivot_patterns
from fixtures import random_boolfun


def test_gaussian_binomial():
    assert gaussian_binomial(5, 3) == 155
    assert gaussian_binomial(8, 3) == 97155
    assert gaussian_binomial(8, 3) * 2 ** 5 == 3108960
    assert all(gaussian_binomial(m, 0) == 1 for m in range(9))
    assert all(gaussian_binomial(m, r) == gaussian_binomial(m, m - r) for m in range(9) for r in range(m + 1))
    with pytest.raises(DomainError):
        gaussian_binomial(3, 4)


def test_subspace_counts():
    subs = list(enumerate_subspaces(3, 1))
    assert len(subs) == 7 and sorted(s.basis[0] for s in subs) == list(range(1, 8))
    assert sum(1 for _ in enumerate_subspaces(7, 3)) == 11811
    assert sum(1 for _ in enumerate_subspaces(7, 4)) == 11811


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_enumeration_complete(m):
    for r in range(m + 1):
        got = [frozenset(s.points().tolist()) for s in enumerate_subspaces(m, r)]
        assert len(got) == len(set(got)) == gaussian_binomial(m, r)
        assert set(got) == oracles.subspaces(m, r)
        assert all(s.is_canonical() for s in enumerate_subspaces(m, r))


def test_flats_are_canonical_and_distinct():
    fl = list(enumerate_flats(4, 2))
    assert len(fl) == gaussian_binomial(4, 2) * 4
    assert len({frozenset(f.points().tolist()) for f in fl}) == len(fl)
    for f in fl:
        assert f.translate & f.subspace.pivot_mask == 0


def test_pivot_patterns_partition():
    pats = pivot_patterns(6, 3)
    assert len(pats) == len(set(pats)) == 20


def test_orthogonal():
    v = Subspace.from_rows([0b0001, 0b0100], 4)
    assert set(v.orthogonal().points().tolist()) == set(oracles.span([0b0010, 0b1000]))
    assert Subspace.full(4).orthogonal().dim == 0


@given(st.integers(1, 7), st.data())
def test_orthogonal_duality(m, data):
    rows = data.draw(st.lists(st.integers(0, (1 << m) - 1), max_size=m))
    v = Subspace.from_rows(rows, m)
    perp = v.orthogonal()
    assert v.dim + perp.dim == m
    assert perp.orthogonal() == v
    assert all(gf2.dot(a, x) == 0 for a in perp.basis for x in v.basis)


def test_lift_data_identity_flat():
    flat = Subspace.full(4).flat()
    ld = flat.lift_data()
    assert ld.functionals == (1, 2, 4, 8) and ld.offsets == (0, 0, 0, 0)
    assert ld.orthogonal == ()


def test_lift_data_duality(rng):
    for _ in range(30):
        rows, a = oracles.random_affine(6, rng)
        r = int(rng.integers(1, 7))
        flat = Flat(6, tuple(rows[:r]), a)
        ld = flat.lift_data()
        for i, u in enumerate(ld.functionals):
            assert [gf2.dot(u, b) for b in flat.basis] == [int(i == j) for j in range(r)]
        for t in range(1 << r):
            assert ld.coordinates(int(flat.points()[t])) == t
        assert all(gf2.dot(w, b) == 0 for w in ld.orthogonal for b in flat.basis)


def test_flat_text_round_trip():
    flat = Flat(5, (0b00100, 0b01000, 0b10000), 0b10011)
    text = format_flat(flat)
    assert text == "basis=4,8,10;a=13"
    assert parse_flat(text, 5) == flat
    with pytest.raises(ParseError):
        parse_flat("basis=1;b=0", 5)
    with pytest.raises(InvalidFlatError):
        parse_flat("basis=1,1;a=0", 5)


def test_invalid_flat():
    with pytest.raises(InvalidFlatError):
        Flat(3, (1, 2, 3), 0).check()
    with pytest.raises(InvalidFlatError):
        Flat(3, (8,), 0).check()


def test_poisson_summation(rng):
    # the character on V + b picks up (-1)^(a.b) inside the sum; the global
    # sign (-1)^(b.c) factors out
    for _ in range(300):
        m = int(rng.integers(1, 9))
        f = random_boolfun(rng, m)
        v = Subspace.from_rows(rng.integers(0, 1 << m, int(rng.integers(0, m + 1))).tolist(), m)
        b, c = (int(x) for x in rng.integers(0, 1 << m, 2))
        w = f.walsh().values
        lhs = sum((-1) ** (int(f.table[x ^ b]) ^ gf2.dot(c, x)) for x in v.points().tolist())
        perp = v.orthogonal().points().tolist()
        rhs = sum(int(w[a ^ c]) * (-1) ** gf2.dot(a, b) for a in perp) * (-1) ** gf2.dot(b, c)
        assert lhs * len(perp) == rhs


def test_gf2_helpers():
    assert gf2.rank([1, 2, 3]) == 2
    assert gf2.rref([3, 1]) == gf2.rref([1, 2])
    inv = gf2.inverse([0b011, 0b010, 0b100], 3)
    for x in range(8):
        assert gf2.vec_mat(gf2.vec_mat(x, [0b011, 0b010, 0b100]), inv) == x
    ns = gf2.nullspace([0b01, 0b01, 0b10])
    assert len(ns) == 1
    for v in ns:
        img = 0
        for i, row in enumerate([0b01, 0b01, 0b10]):
            if v >> i & 1:
                img ^= row
        assert img == 0


@given(st.lists(st.integers(0, 255), max_size=10))
def test_rank_nullity(rows):
    assert gf2.rank(rows) + len(gf2.nullspace(rows)) == len(rows)
    assert gf2.rank(rows) == len(oracles.span(rows)).bit_length() - 1
