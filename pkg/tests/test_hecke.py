import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from etacong.etaq import EtaQuotient
from etacong.hecke import (
    HeckeContext,
    apply_Tp,
    eigen_residual,
    eligible_primes_mod8,
    family_index_mod2,
    family_index_mod8,
    fj_form,
    fj_structure_check,
    mod8_eligibility_index,
    verify_family,
)
from etacong.qseries import EXACT, Series, add, mod_domain, named_series, scale


@pytest.fixture(scope="module")
def eta8():
    return named_series("eta8_3z", 2000)


# ---------------------------------------------------------------------------
# apply_Tp


def test_Tp_annihilates_eta8_at_5(eta8):
    ctx = HeckeContext(p=5, weight=4)
    out = apply_Tp(Series(EXACT, eta8.coeffs[:51]), ctx)
    assert out.truncation == 10
    assert out.is_zero()


def test_Tp_eigen_multiple_at_7(eta8):
    ctx = HeckeContext(p=7, weight=4)
    f = Series(EXACT, eta8.coeffs[:50])
    out = apply_Tp(f, ctx)
    assert out.coeffs == tuple(20 * f[n] for n in range(8))


def test_Tp_zero_series():
    ctx = HeckeContext(p=5, weight=4)
    assert apply_Tp(Series.zero(EXACT, 100), ctx).is_zero()


def test_Tp_rejects_small_truncation():
    ctx = HeckeContext(p=11, weight=4)
    with pytest.raises(ValueError):
        apply_Tp(Series(EXACT, [0, 1, 0, 0]), ctx)


def test_Tp_rejects_modular_information_loss(eta8):
    f = Series(mod_domain(10), [c % 10 for c in eta8.coeffs[:100]])
    with pytest.raises(ValueError):
        apply_Tp(f, HeckeContext(p=5, weight=4))
    # weight 1 makes p^{weight-1} = 1, no loss
    apply_Tp(f, HeckeContext(p=5, weight=1))


def test_context_validation():
    with pytest.raises(ValueError):
        HeckeContext(p=6, weight=2)
    with pytest.raises(ValueError):
        HeckeContext(p=5, weight=0)
    with pytest.raises(ValueError):
        HeckeContext(p=5, weight=2, chi_p=2)
    ctx = HeckeContext.for_eta_quotient(EtaQuotient(9, {3: 8}), 7)
    assert ctx.weight == 4 and ctx.chi_p == 1


@settings(max_examples=25)
@given(
    st.lists(st.integers(-9, 9), min_size=30, max_size=30),
    st.lists(st.integers(-9, 9), min_size=30, max_size=30),
    st.sampled_from([2, 3, 5]),
)
def test_Tp_linearity(a_coeffs, b_coeffs, p):
    ctx = HeckeContext(p=p, weight=3)
    a, b = Series(EXACT, a_coeffs), Series(EXACT, b_coeffs)
    assert apply_Tp(add(a, b), ctx) == add(apply_Tp(a, ctx), apply_Tp(b, ctx))


# ---------------------------------------------------------------------------
# eigen residual


def test_eigen_reports(eta8):
    for p, lam in ((5, 0), (7, 20), (11, 0), (13, -70)):
        report = eigen_residual(eta8, HeckeContext(p=p, weight=4))
        assert report.ok
        assert report.lam == lam
        assert report.checked_to == 2000 // p
    assert eta8[25] == -125


def test_eigen_requires_normalization(eta8):
    with pytest.raises(ValueError):
        eigen_residual(scale(eta8, 2), HeckeContext(p=5, weight=4))
    with pytest.raises(ValueError):
        eigen_residual(Series.zero(EXACT, 100), HeckeContext(p=5, weight=4))


def test_eigen_detects_mismatch(eta8):
    coeffs = list(eta8.coeffs[:301])
    coeffs[35] += 1  # 35 = 5 * 7, breaks the p=5 identity at n=7
    tampered = Series(EXACT, coeffs)
    report = eigen_residual(tampered, HeckeContext(p=5, weight=4))
    assert not report.ok
    assert report.status == "mismatch"
    assert report.mismatch_at == 7
    assert report.checked_to == 6


def test_eigen_report_json(eta8):
    report = eigen_residual(eta8, HeckeContext(p=13, weight=4))
    obj = json.loads(json.dumps(report.to_json()))
    assert obj["lambda"] == "-70"
    assert obj["status"] == "exact-match"


def test_prime_square_vanishing(eta8):
    # a(p^2 n + p r) = 0 whenever p does not divide r, for p = 5 and 11
    for p in (5, 11):
        for idx in range(p, eta8.truncation + 1, p):
            if (idx // p) % p != 0:
                assert eta8[idx] == 0


# ---------------------------------------------------------------------------
# congruence families


def test_family_index_mod2_values():
    assert family_index_mod2([5], 1, 0) == 13
    assert family_index_mod2([5], 2, 3) == 93
    assert family_index_mod2([5, 5], 1, 0) == 333


def test_family_index_mod8_values():
    assert family_index_mod8([1009], 1, 0) == 6455918
    assert family_index_mod8([1009], 1, 1) == 8144648 + 8072 + 6447846
    assert mod8_eligibility_index(1009) == 6390


def test_family_validation():
    with pytest.raises(ValueError):
        family_index_mod2([7], 1, 0)  # 7 == 1 mod 3
    with pytest.raises(ValueError):
        family_index_mod2([5], 5, 0)  # j divisible by the last prime
    with pytest.raises(ValueError):
        family_index_mod2([4], 1, 0)  # not prime
    with pytest.raises(ValueError):
        family_index_mod8([5], 1, 0)  # 5 != 1 mod 24
    with pytest.raises(ValueError):
        family_index_mod2([5], 1, -1)


def test_verify_family_mod2_small(eobar_mod2):
    report = verify_family([5], [1, 2, 3, 4], range(100), mod8=False, series=eobar_mod2)
    assert report.ok
    assert report.checked == 400
    assert json.loads(json.dumps(report.to_json()))["ok"] is True


def test_verify_family_detects_failures():
    # j = 5 is excluded by the theorem; j = 10 likewise; use a fake series of ones
    ones = Series(mod_domain(2), [1] * 1000)
    report = verify_family([5], [1], [0], mod8=False, series=ones)
    assert not report.ok
    assert report.failures[0][0].index == 13
    assert report.failures[0][1] == 1


def test_eligible_primes():
    assert eligible_primes_mod8(20) == []
    found = eligible_primes_mod8(1009)
    assert 1009 in found
    assert all(p % 24 == 1 for p in found)


def test_eligibility_gate_raises():
    # a series of ones fails the eligibility check for any candidate prime
    ones = Series(mod_domain(8), [1] * 10**4)
    with pytest.raises(ValueError):
        verify_family([73], [1], [0], mod8=True, series=ones)


# ---------------------------------------------------------------------------
# the four class forms


def test_fj_leading_terms():
    f1 = fj_form(1, 200)
    assert f1.valuation() == 1 and f1[1] == 1
    f19 = fj_form(19, 200)
    offs, _ = f19.nonzeros()
    assert offs[:3] == [19, 43, 67]


def test_fj_structure():
    report = fj_structure_check(600)
    assert report.ok
    assert set(report.support_ok) == {1, 7, 13, 19}
    assert all(report.annihilated[(j, p)] for j in (1, 7, 13, 19) for p in (5, 11, 17, 23))
    # T_13 maps class 7 to class 13*7 mod 24 = 19
    assert report.mapped[(7, 13)][0] == 19


def test_fj_structure_validation():
    with pytest.raises(ValueError):
        fj_structure_check(100)
    with pytest.raises(ValueError):
        fj_structure_check(600, annihilation_primes=(7,))
    with pytest.raises(ValueError):
        fj_form(5, 100)


# ---------------------------------------------------------------------------
# mod-2 self-similarity: EObar(25n + 8) == EObar(n) mod 2


def test_mod2_self_similarity(eobar_mod2):
    T = eobar_mod2.truncation
    for n in range((T - 8) // 25 + 1):
        assert eobar_mod2[25 * n + 8] == eobar_mod2[n]


# ---------------------------------------------------------------------------
# long-running residual checks at the smallest eligible prime


@pytest.mark.slow
def test_thm2_form_recurrences_at_smallest_eligible_prime():
    p = eligible_primes_mod8(100)[0]  # 73
    assert p == 73
    T = 40_000
    f = named_series("thm2_form", T)
    lam = f[19 * p]
    # a(p^2 n + p r) = a(19p) a(p n + r) for p not dividing r
    for r in range(1, p):
        n = 0
        while p * p * n + p * r <= T:
            assert f[p * p * n + p * r] == lam * f[p * n + r]
            n += 1
    # a(p^2 n) + a(n) == a(19p) a(p n)  (mod 2)
    n = 1
    while p * p * n <= T:
        assert (f[p * p * n] + f[n] - lam * f[p * n]) % 2 == 0
        n += 1
