import math

import pytest

from waring.errors import Disconnected, NotCoprime, NotNormalized, NotPrime
from waring.formulas import (
    EXACT_RULES,
    ExactPrediction,
    _least_int_root_bound,
    bounds,
    family_rules,
    cox_pairs,
    katz_kurlberg,
    predict_exact,
    prop71_lower,
    waring_pair_for_b,
    winterhof_s,
)
from waring.gp_graph import gp_graph, is_connected, waring_number_bfs
from waring.number_theory import divisors, hamming_condition, is_prime, psi
from waring.suites import prime_powers


def rules(p, m, k):
    return {e.rule: e.value for e in predict_exact(p, m, k)}


def bfs(p, m, k):
    return waring_number_bfs(gp_graph(p, m, k)).g


def test_predict_examples():
    r = rules(2, 6, 7)
    assert r["Thm4.2"] == 3
    thm = [e for e in predict_exact(2, 6, 7) if e.rule == "Thm4.2"][0]
    assert any("psi(p^2, 3)" in h for h, _ in thm.hypotheses)
    assert rules(7, 1, 3)["Cauchy1813"] == 3
    assert rules(7, 1, 3)["Small1977-g3"] == 3
    assert rules(2, 20, 13981)["Thm4.2"] == 5
    assert rules(13, 1, 3)["Cox-n4"] == 2
    assert rules(3, 2, 2)["Cor6.2"] == 2
    assert rules(2, 1, 1) == {"Cauchy1813": 1}


def test_prediction_records():
    for e in predict_exact(2, 18, 9709):
        assert isinstance(e, ExactPrediction)
        assert e.value >= 1 and all(h for _, h in e.hypotheses)
        assert e.k == 9709 and e.q == 2**18


def test_normalization_and_errors():
    assert rules(7, 1, 9) == rules(7, 1, 3)
    with pytest.raises(NotNormalized):
        predict_exact(7, 1, 4, normalize=False)
    with pytest.raises(NotPrime):
        predict_exact(8, 1, 1)
    assert predict_exact(3, 2, 4) == []


def test_small_trichotomy():
    assert rules(7, 1, 3)["Small1977-g3"] == 3
    assert rules(13, 1, 3)["Small1977-g3"] == 2
    assert rules(11, 1, 3)["Small1977-g3"] == 1  # gcd(3, 10) = 1
    assert bfs(11, 1, 3) == 1


def test_mc2008_abstains_when_s_is_one():
    assert "MC2008" not in rules(2, 2, 3)
    assert rules(2, 4, 3)["MC2008"] == 2
    assert rules(3, 4, 4)["MC2008"] == 2


def test_katz_kurlberg():
    (e,) = katz_kurlberg(2, 3, 1)
    assert (e.k, e.q, e.value) == (1, 4, 1)
    e1, e2 = katz_kurlberg(3, 5, 1)
    assert (e1.k, e1.q, e1.value) == (16, 81, 4)
    assert (e2.k, e2.q, e2.value) == (8, 81, 3)
    assert bfs(3, 4, 16) == 4 and bfs(3, 4, 8) == 3
    assert katz_kurlberg(2, 7, 1) is None  # ord_7(2) = 3
    with pytest.raises(NotPrime):
        katz_kurlberg(7, 4, 1)


def test_katz_kurlberg_prime_power_modulus():
    # 2 is a primitive root mod 9, phi(9) = 6
    (e,) = katz_kurlberg(2, 3, 2)
    assert (e.k, e.q, e.value) == (7, 64, 3)
    assert bfs(2, 6, 7) == 3


def test_cox_uniqueness():
    for p in range(5, 10_000):
        if not is_prime(p):
            continue
        hex_pairs = cox_pairs(p, "hex")
        sq_pairs = cox_pairs(p, "square")
        assert len(hex_pairs) == (1 if p % 3 == 1 else 0)
        assert len(sq_pairs) == (1 if p % 4 == 1 else 0)
    assert cox_pairs(13, "square") == [(3, 2)]
    assert cox_pairs(37, "hex") == [(4, 3)]


def test_example_bounds():
    b = bounds(37, 1, 9)
    low = {x.rule: x.integer for x in b.lower}
    up = {x.rule: x.integer for x in b.upper}
    assert low["Prop7.1-circulant"] == 3 and up["Cauchy1813"] == 9
    assert math.ceil((math.sqrt(2 * 37) - 3) / 2) == 3
    b = bounds(37, 1, 6)
    low = {x.rule: x.integer for x in b.lower}
    up = {x.rule: x.integer for x in b.upper}
    assert low["Prop7.1-circulant"] == 2 and up["Cauchy1813"] == 6
    assert b.best_lower <= bfs(37, 1, 6) <= b.best_upper


def test_bounds_h_equals_one():
    for p in (5, 7, 11, 101):
        b = prop71_lower(p, 1)
        assert b.value == pytest.approx(p / 2 - 1)


def test_bounds_trivial_case_and_descriptive_rule():
    b = bounds(11, 1, 1)
    assert b.best_lower == 1 and b.best_upper == 1
    gs = [x for x in b.lower if x.rule == "GS1993-Eq2.3"]
    assert gs and gs[0].value is None and gs[0].integer is None


def test_bounds_disconnected():
    with pytest.raises(Disconnected):
        bounds(3, 2, 4)


def test_prop71_integer_form_needs_hypothesis():
    # h = 3, p = 7: 3! * 7 = 42 < 4^3, so only the real value is reported
    b = prop71_lower(7, 3)
    assert b.integer is None and b.value < 0


def test_least_int_root_bound_exact():
    for target in range(1, 3000, 7):
        for h in (1, 2, 3, 5):
            for off in (1, 3, 4):
                c = _least_int_root_bound(target, h, off)
                assert (2 * c + off) ** h >= target
                assert 2 * (c - 1) + off < 0 or (2 * (c - 1) + off) ** h < target


def test_winterhof_s_is_minimal():
    for q, k in [(2**10, 3), (3**6, 5), (5**4, 2), (2**12, 5), (7**3, 3)]:
        s = winterhof_s(q, k)
        assert q ** (s - 1) > (k - 1) ** (2 * s)
        assert s == 1 or not q ** (s - 2) > (k - 1) ** (2 * (s - 1))
    assert winterhof_s(16, 5) is None


def test_cp2008_not_emitted_at_n_equal_two():
    b = bounds(14009, 1, 7004)
    assert "CP2008" not in {x.rule for x in b.upper}


def test_catalog_consistency_and_bfs_small():
    for p, m in prime_powers(1 << 11):
        for k in divisors(p**m - 1):
            preds = predict_exact(p, m, k)
            if not preds:
                continue
            assert len({e.value for e in preds}) == 1
            assert all(e.rule in EXACT_RULES for e in preds)
            assert preds[0].value == bfs(p, m, k)


def test_bound_sandwich_small():
    for p, m in prime_powers(1 << 10):
        for k in divisors(p**m - 1):
            if not is_connected(p, m, k):
                continue
            g = bfs(p, m, k)
            rep = bounds(p, m, k)
            for x in rep.lower:
                assert x.integer is None or x.integer <= g, (x, p, m, k, g)
            for x in rep.upper:
                assert x.integer is None or g <= x.integer, (x, p, m, k, g)


def test_cor62_family():
    for p in (3, 5, 7, 11, 13):
        for a in (1, 2):
            if p ** (2 * a) > 1 << 16:
                continue
            k = (p**a + 1) // 2
            assert rules(p, 2 * a, k)["Cor6.2"] == 2
            assert bfs(p, 2 * a, k) == 2


@pytest.mark.parametrize(
    "rule,p,m,k,g",
    [
        ("Cor6.7", 2, 21, 42799, 7),
        ("Cor6.8", 7, 6, 3268, 6),
        ("Cor6.4", 11, 5, 3221, 5),
        ("Cor6.3", 2, 6, 7, 3),
    ],
)
def test_rules_beyond_the_small_sweep(rule, p, m, k, g):
    assert rules(p, m, k)[rule] == g
    assert bfs(p, m, k) == g


def test_family_hypotheses_imply_divisibility():
    for p in [q for q in range(2, 60) if is_prime(q)]:
        for b in (2, 3, 5, 6, 7, 9, 10, 15, 21, 8, 25, 12):
            if b % p == 0:
                continue
            for a in range(1, 13):
                fired = family_rules(p, a, b)
                if fired:
                    assert hamming_condition(p, a, b).holds, (p, a, b, fired)
                    assert psi(p**a, b) % b == 0


def test_hamming_rule_abstains_when_disconnected():
    # 6 | psi(5, 6) but R_651 equals GF(25)* inside GF(5^6)
    assert psi(5, 6) % 6 == 0
    assert not is_connected(5, 6, 651)
    assert predict_exact(5, 6, 651) == []


def test_waring_pairs():
    expected = {1: (1, 2, 1), 2: (2, 3, 2), 3: (7, 2, 6), 4: (205, 3, 8), 5: (13981, 2, 20), 9: (9709, 2, 18)}
    for b, triple in expected.items():
        assert tuple(waring_pair_for_b(b)) == triple
    assert waring_pair_for_b(6) == (1695421, 5, 12)
    assert waring_pair_for_b(5, 2).k == 13981
    assert waring_pair_for_b(4, 5) == (39, 5, 4)
    with pytest.raises(NotCoprime):
        waring_pair_for_b(6, 3)
    for b in range(1, 80):
        k, p, m = waring_pair_for_b(b)
        assert is_connected(p, m, k)
        assert b in {e.value for e in predict_exact(p, m, k)} or b == 1


def test_waring_pairs_by_bfs():
    for b in (1, 2, 3, 4):
        k, p, m = waring_pair_for_b(b)
        assert p**m <= 1 << 20
        assert bfs(p, m, k) == b
