import numpy as np
import pytest

import oracles
from boolnorm import BoolFun, Flat, Subspace, enumerate_flats, enumerate_subspaces
from boolnorm.exceptions import CapacityError, DomainError
from boolnorm.normality import batch_is_abnormal, is_abnormal, relative_degree
from boolnorm.sieve import (
    QSet,
    QuadForm,
    abnormal_perturbations,
    coset_members,
    iter_eliminations,
    kernel_basis,
    n_pairs,
    quad_lift,
    quad_restriction,
    sieving,
)
from fixtures import QUARTIC7_SIEVE, SIEVE_Q, random_boolfun


def cubic_plus(rng, m):
    while True:
        f = random_boolfun(rng, m)
        if f.degree >= 3:
            return f


def test_quadform_basics():
    q = QuadForm.from_pairs(4, [(1, 2), (3, 4)])
    assert q.to_boolfun() == BoolFun.from_anf("x1*x2 + x3*x4", 4)
    assert QuadForm.from_anf("x1*x2 + x3*x4", 4) == q
    assert q.index == 0b100001
    assert str(QuadForm.from_anf(SIEVE_Q, 7)) == SIEVE_Q
    assert str(QuadForm(3, 0)) == "0"
    assert (q + q).index == 0
    with pytest.raises(DomainError):
        QuadForm.from_anf("x1*x2 + x3", 4)
    with pytest.raises(DomainError):
        QuadForm(3, 8)


def test_quad_restriction_examples(rng):
    q, deg = quad_restriction(BoolFun.zero(5), Flat(5, (1, 2, 4), 0))
    assert q.index == 0 and deg == 0
    f = BoolFun.from_anf(QUARTIC7_SIEVE, 7)
    for flat in enumerate_flats(7, 4):
        rho, deg = quad_restriction(f, flat)
        if deg == 4:
            assert deg == relative_degree(f, flat)
            break
    else:
        pytest.fail("no degree-4 flat found")
    for _ in range(20):
        quad = QuadForm(6, int(rng.integers(0, 1 << 15))).to_boolfun()
        rows, a = oracles.random_affine(6, rng)
        _, deg = quad_restriction(quad, Flat(6, tuple(rows[:3]), a))
        assert deg <= 2


def test_quad_lift_round_trip(rng):
    assert quad_lift(QuadForm(4, 0), Flat(7, (1, 2, 4, 8), 5)).index == 0
    full = Flat(5, tuple(1 << i for i in range(5)), 0)
    for idx in range(0, 1 << 10, 37):
        assert quad_lift(QuadForm(5, idx), full).index == idx
    for _ in range(4):
        rows, a = oracles.random_affine(7, rng)
        flat = Flat(7, tuple(rows[:4]), a)
        for idx in range(1 << 6):
            q0 = quad_lift(QuadForm(4, idx), flat)
            assert quad_restriction(q0.to_boolfun(), flat)[0].index == idx


def test_kernel_dimensions():
    v = next(iter(enumerate_subspaces(7, 4)))
    assert kernel_basis(v).dim == 21 - 6
    assert kernel_basis(Subspace.full(5)).dim == 0
    for v in enumerate_subspaces(5, 2):
        assert kernel_basis(v).dim == 9


def test_kernel_translation_independent(rng):
    for _ in range(10):
        rows, _ = oracles.random_affine(6, rng)
        v = Subspace.from_rows(rows[:3], 6)
        kern = kernel_basis(v)
        for q in kern.basis:
            for a in range(0, 64, 7):
                rho, _ = quad_restriction(q.to_boolfun(), v.flat(a))
                assert rho.index == 0


def test_sieve_example():
    f = BoolFun.from_anf(QUARTIC7_SIEVE, 7)
    qset = sieving(f)
    assert len(qset) == 1
    (q,) = list(qset)
    assert q == QuadForm.from_anf(SIEVE_Q, 7)
    assert is_abnormal(f + q.to_boolfun())
    assert abnormal_perturbations(f, qset) == [f + q.to_boolfun()]


def test_sieve_zero_function():
    assert len(sieving(BoolFun.zero(7))) == 0


def test_sieve_limits():
    with pytest.raises(CapacityError):
        sieving(BoolFun.zero(9))
    with pytest.raises(DomainError):
        sieving(BoolFun.zero(1))


@pytest.mark.parametrize("m", [3, 4, 5])
def test_sieve_matches_brute_force(m, rng):
    quads = oracles.quadratic_tables(m)
    bank = oracles.FlatBank(m, (m + 1) // 2)
    for _ in range(8):
        f = cubic_plus(rng, m)
        perturbed = quads ^ f.table
        brute = np.flatnonzero(bank.min_degree(perturbed) >= 2)
        assert np.flatnonzero(batch_is_abnormal(perturbed)).tolist() == brute.tolist()
        assert sieving(f).indices().tolist() == brute.tolist()


def test_reference_walk_agrees(rng):
    for _ in range(3):
        f = cubic_plus(rng, 5)
        survivors = set(range(1 << n_pairs(5)))
        for flat, q0, kern in iter_eliminations(f):
            survivors -= {q.index for q in coset_members(q0, kern)}
        assert sorted(survivors) == sieving(f).indices().tolist()


def test_eliminated_cosets_are_flat_witnesses(rng):
    f = cubic_plus(rng, 6)
    for n, (flat, q0, kern) in enumerate(iter_eliminations(f)):
        if n % 50:
            continue
        members = list(coset_members(q0, kern))
        for i in rng.choice(len(members), 5):
            assert relative_degree(f + members[i].to_boolfun(), flat) <= 1


def test_survivors_sampled(rng):
    f = BoolFun.from_anf(QUARTIC7_SIEVE, 7)
    qset = sieving(f)
    for idx in rng.integers(0, 1 << 21, 100):
        q = QuadForm(7, int(idx))
        assert (q in qset) == is_abnormal(f + q.to_boolfun())


def test_workers_do_not_change_result(rng):
    f = cubic_plus(rng, 6)
    assert sieving(f, workers=1) == sieving(f, workers=3)


def test_qset_container():
    full = QSet.full(4)
    assert len(full) == 64 and QuadForm(4, 5) in full
    assert list(full)[:2] == [QuadForm(4, 0), QuadForm(4, 1)]
