import numpy as np
import pytest

import oracles
from boolnorm import BoolFun, dual, is_abnormal
from boolnorm.bent import are_complementary, is_bent, is_near_bent
from boolnorm.exceptions import BudgetExceededError, DomainError, SpectralError
from boolnorm.expand import (
    admissible_set,
    expansion,
    expansion_report,
    key,
    normalize_prefix,
    w_set,
    zero_indicator,
)
from fixtures import G5_SPECTRUM, random_mm_bent

# near-bent inputs on 5 variables with oracle-checked expansion counts
M6_CASES = {
    "x1*x4 + x2*x4 + x3*x4 + x2*x3*x4 + x2*x5 + x3*x5 + x1*x3*x5": 384,
    "x1*x2 + x3*x4 + x5": 896,
    "x1*x2*x3 + x1*x4 + x2*x5": 384,
}


def blocks(table: np.ndarray, r: int) -> dict[str, np.ndarray]:
    """Blocks of a truth table by the values of the top ``r`` variables, written top variable first."""
    parts = table.reshape(1 << r, -1)
    return {format(i, f"0{r}b"): parts[i] for i in range(1 << r)}


def bent_from_half(rng, m):
    f = random_mm_bent(rng, m)
    rows, b = oracles.random_affine(m, rng)
    f = BoolFun(m, f.table[oracles.affine_points(rows, b)])
    return f, BoolFun(m - 1, f.table[: 1 << (m - 1)])


def test_w_set():
    assert w_set(8, 1) == {16, 0, -16}
    assert w_set(8, 3) == {16, 12, 8, 4, 0, -4, -8, -12, -16}
    with pytest.raises(DomainError):
        w_set(4, 4)


def test_zero_indicator(g5):
    zi = zero_indicator(g5)
    assert zi.m == 6 and zi.zeta.weight == 16
    assert np.flatnonzero(zi.zeta.table).tolist() == [i for i, v in enumerate(G5_SPECTRUM) if v == 0]
    assert zi.count("00") + zi.count("01") == 16
    assert zi.count("0") == zi.count("1") == 16
    assert sum(zi.count(format(i, "03b")) for i in range(4)) == 16
    with pytest.raises(SpectralError):
        zero_indicator(BoolFun.from_anf("x1*x2 + x3*x4", 4))


def test_normalize_prefix(g5):
    assert normalize_prefix(g5) == g5
    g = BoolFun.from_anf("x1*x2 + x3*x4 + x5", 5)
    zi = zero_indicator(g)
    assert zi.count("00") > 8
    h = normalize_prefix(g)
    assert h == g + BoolFun.linear(5, 16)
    zh = zero_indicator(h)
    assert zh.count("00") <= 8 and zh.zeta.weight == zi.zeta.weight
    # adding a linear function translates the spectrum
    assert (np.abs(h.walsh().values) == np.abs(g.walsh().values[np.arange(32) ^ 16])).all()


def test_normalize_prefix_bound_m8(rng):
    for _ in range(20):
        _, g = bent_from_half(rng, 8)
        assert zero_indicator(normalize_prefix(g)).count("00") <= 32


def test_admissible_members_satisfy_spectrum(g5):
    zi = zero_indicator(g5)
    top = 8
    for r in (1, 2, 3):
        allowed = w_set(6, r)
        for i in range(1 << r):
            lam = format(i, f"0{r}b")
            s = admissible_set(g5, lam)
            block = g5.walsh().values.reshape(1 << (r - 1), -1)[int(lam[1:] or "0", 2)]
            for c, spec, alt in zip(s.members, s.spectra, s.alt_spectra):
                assert set(c.phi.walsh().values.tolist()) <= allowed
                assert (spec == c.phi.walsh().values).all()
                partner = BoolFun(c.phi.m, c.phi.table ^ zi.block(lam))
                assert (alt == partner.walsh().values).all()
                assert set(alt.tolist()) <= allowed
                assert (c.phi.table[block == top] == 0).all() and (c.phi.table[block == -top] == 1).all()
            assert len(s) <= 1 << zi.count(lam)


def test_fully_forced_block():
    g = BoolFun.from_anf("x1*x2 + x3*x4 + x5", 5)
    zi = zero_indicator(g)
    lam = next(l for l, c in zi.counts.items() if c == 0)
    assert len(admissible_set(g, lam)) <= 1


def test_admissible_contains_dual_blocks(rng):
    for m in (4, 6):
        for _ in range(10):
            f, g = bent_from_half(rng, m)
            phi = dual(f).table
            for r in (1, 2, 3):
                if m - r < 1:
                    continue
                for lam, part in blocks(phi, r).items():
                    s = admissible_set(g, lam)
                    assert any((t == part).all() for t in s.tables)


def test_admissible_contains_dual_blocks_m8(rng):
    for _ in range(3):
        f, g = bent_from_half(rng, 8)
        phi = dual(f).table
        for lam, part in blocks(phi, 3).items():
            s = admissible_set(g, lam)
            assert any((t == part).all() for t in s.tables)


def test_admissible_budget(g5):
    with pytest.raises(BudgetExceededError) as err:
        admissible_set(g5, "0", budget=10)
    assert err.value.budget == 10 and err.value.count > 10
    with pytest.raises(DomainError):
        admissible_set(g5, "0101")


def test_key_examples(rng):
    phi = random_mm_bent(rng, 6)
    assert key(phi).mask == (1 << 64) - 1
    four = random_mm_bent(rng, 4)
    padded = BoolFun(6, np.tile(four.table, 4))
    assert key(padded).mask == 0
    assert key(BoolFun.from_anf("x1*x2", 2)).positions() == [0, 1, 2, 3]
    with pytest.raises(DomainError):
        key(BoolFun.zero(3))


def test_key_agreement_on_duals(rng):
    # the two halves of each dual block 0 share their key
    for m in (6, 8):
        for _ in range(20):
            f = random_mm_bent(rng, m)
            rows, b = oracles.random_affine(m, rng)
            f = BoolFun(m, f.table[oracles.affine_points(rows, b)])
            parts = blocks(dual(f).table, 2)
            for left, right in (("00", "01"), ("10", "11")):
                assert key(BoolFun(m - 2, parts[left])) == key(BoolFun(m - 2, parts[right]))


@pytest.mark.parametrize("anf", list(M6_CASES))
def test_expansion_matches_oracle(anf):
    g = BoolFun.from_anf(anf, 5)
    out = expansion(g)
    ints = [f.to_int() for f in out]
    assert ints == sorted(set(ints))
    assert set(ints) == oracles.bent_expansions(g.table)
    assert len(out) == M6_CASES[anf]
    for f in out:
        assert is_bent(f) and (f.table[:32] == g.table).all()
        assert are_complementary(g, BoolFun(5, f.table[32:]))


def test_expansion_m4():
    for anf in ("x1*x2 + x3", "x1*x2", "x1*x3 + x2", "x1*x2 + x1 + x3"):
        g = BoolFun.from_anf(anf, 3)
        assert is_near_bent(g)
        assert {f.to_int() for f in expansion(g)} == oracles.bent_expansions(g.table)


def test_expansion_random_restrictions(rng):
    for _ in range(5):
        f, g = bent_from_half(rng, 6)
        out = expansion(g)
        assert f in out
        assert {h.to_int() for h in out} == oracles.bent_expansions(g.table)


def test_key_filter_is_complete(rng):
    cases = [BoolFun.from_anf(a, 5) for a in M6_CASES] + [bent_from_half(rng, 6)[1] for _ in range(3)]
    for g in cases:
        assert expansion(g, use_key=False) == expansion(g)


def test_dual_blocks_consistency(g5):
    zeros = np.array(G5_SPECTRUM) == 0
    for f in expansion(g5):
        phi = dual(f).table
        phi0, phi1 = phi[:32], phi[32:]
        assert (phi1[~zeros] == phi0[~zeros]).all()
        assert (phi1[zeros] == 1 - phi0[zeros]).all()
        assert (phi0[np.array(G5_SPECTRUM) == 8] == 0).all()
        assert (phi0[np.array(G5_SPECTRUM) == -8] == 1).all()


def test_expansions_of_normal_input_are_not_abnormal(g5):
    assert not is_abnormal(g5)
    for f in expansion(g5)[::16]:
        assert not is_abnormal(f)


def test_report_and_shift():
    g = BoolFun.from_anf("x1*x2 + x3*x4 + x5", 5)
    rep = expansion_report(g)
    assert rep.shifted and len(rep.expansions) == 896
    assert all((f.table[:32] == g.table).all() for f in rep.expansions)
    assert not expansion_report(BoolFun.from_anf(list(M6_CASES)[0], 5)).shifted


def test_expansion_errors(rng):
    with pytest.raises(SpectralError):
        expansion(BoolFun.from_anf("x1*x2 + x3*x4", 4))
    with pytest.raises(SpectralError):
        expansion(BoolFun.from_anf("x1", 5))
    with pytest.raises(BudgetExceededError):
        expansion(BoolFun.from_anf(list(M6_CASES)[0], 5), budget=4)


def test_expansion_m8_budget(rng):
    _, g = bent_from_half(rng, 8)
    with pytest.raises(BudgetExceededError):
        expansion(g, budget=1000)


def test_workers_do_not_change_output(g5):
    assert expansion(g5, workers=1) == expansion(g5, workers=2)
