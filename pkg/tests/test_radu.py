import json
from fractions import Fraction

import pytest

from etacong.oracle import count_EObar
from etacong.radu import (
    CongruenceClaim,
    CosetRep,
    RaduTuple,
    UnsupportedLevelError,
    compute_P,
    coset_reps,
    delta_star_check,
    load_claim,
    lower_bound_pmr,
    nu_bound,
    p_star,
    verify_claim,
)

THEOREM_TUPLE = RaduTuple(m=50, M=8, N=10, r={1: 0, 2: 2, 4: 1, 8: 0}, t=18)
PENTA_TUPLE = RaduTuple(m=5, M=1, N=5, r={1: -1}, t=4)


def test_tuple_validation():
    with pytest.raises(ValueError):
        RaduTuple(m=50, M=8, N=10, r={3: 1}, t=18)  # 3 does not divide 8
    with pytest.raises(ValueError):
        RaduTuple(m=50, M=8, N=10, r={2: 2}, t=50)  # t out of range
    with pytest.raises(ValueError):
        RaduTuple(m=0, M=1, N=1, r={}, t=0)


def test_derived_quantities():
    assert THEOREM_TUPLE.k == 3
    assert THEOREM_TUPLE.two_adic_split() == (4, 1)  # 2^2 * 4 = 16
    assert PENTA_TUPLE.k == 24
    assert PENTA_TUPLE.two_adic_split() == (0, 1)
    assert THEOREM_TUPLE.weighted_exponent_sum() == 8


# ---------------------------------------------------------------------------
# delta-star


def test_delta_star_theorem_tuple_passes_all_six():
    result = delta_star_check(THEOREM_TUPLE)
    assert result.passed
    assert result.conditions == (True,) * 6


def test_delta_star_prime_divisor_failure():
    bad = RaduTuple(m=50, M=8, N=7, r={2: 2, 4: 1}, t=18)
    result = delta_star_check(bad)
    assert not result.passed
    assert 1 in result.failed()


def test_delta_star_penta_tuple():
    result = delta_star_check(PENTA_TUPLE)
    assert result.passed


# ---------------------------------------------------------------------------
# progression sets


def test_P_theorem_tuple():
    assert sorted(compute_P(THEOREM_TUPLE)) == [18, 28, 38, 48]


def test_P_penta_tuple():
    assert compute_P(PENTA_TUPLE) == frozenset({4})


def test_P_contains_t_and_is_closed():
    for tup in (THEOREM_TUPLE, PENTA_TUPLE, RaduTuple(m=12, M=6, N=6, r={2: 3, 3: -1}, t=7)):
        P = compute_P(tup)
        assert tup.t in P
        # recomputation from any member reproduces the same orbit
        for tprime in P:
            moved = RaduTuple(m=tup.m, M=tup.M, N=tup.N, r=tup.r, t=tprime)
            assert compute_P(moved) == P


def test_P_size_divides_multiplier_count():
    from etacong.radu import _multiplier_set

    for tup in (THEOREM_TUPLE, PENTA_TUPLE):
        assert len(_multiplier_set(tup.m)) % len(compute_P(tup)) == 0


# ---------------------------------------------------------------------------
# coset representatives


def test_coset_reps_level_10():
    reps = coset_reps(10)
    assert [rep.c for rep in reps] == [1, 2, 5, 10]
    assert all(rep.a * rep.d - rep.b * rep.c == 1 for rep in reps)


def test_coset_reps_level_1_and_2():
    assert [rep.c for rep in coset_reps(1)] == [1]
    assert [rep.c for rep in coset_reps(2)] == [1, 2]


def test_coset_reps_unsupported_level():
    with pytest.raises(UnsupportedLevelError):
        coset_reps(8)


def test_coset_rep_validation():
    with pytest.raises(ValueError):
        CosetRep(1, 1, 1, 1)


# ---------------------------------------------------------------------------
# cusp bounds


def test_lower_bound_zero_exponents():
    tup = RaduTuple(m=4, M=1, N=2, r={}, t=0)
    assert lower_bound_pmr(CosetRep.lower_triangular(1), tup) == 0


def test_lower_bound_penta_tuple():
    assert lower_bound_pmr(CosetRep.lower_triangular(5), PENTA_TUPLE) == Fraction(-1, 120)


def test_theorem_tuple_nonnegativity():
    # p_{m,r} + p* at the four representatives, with r' = 0
    expected = {1: Fraction(1, 240), 2: Fraction(1, 150), 5: Fraction(1, 240), 10: Fraction(1, 150)}
    for rep in coset_reps(10):
        value = lower_bound_pmr(rep, THEOREM_TUPLE) + p_star(rep, {})
        assert value == expected[rep.c]
        assert value >= 0


def test_p_star_values():
    gamma = CosetRep.lower_triangular(1)
    assert p_star(gamma, {}) == 0
    assert p_star(gamma, {1: 1}) == Fraction(1, 24)
    # r' concentrated at delta = N with exponent 24, evaluated at c = N
    N = 6
    gamma_N = CosetRep.lower_triangular(N)
    assert p_star(gamma_N, {N: 24}) == N


# ---------------------------------------------------------------------------
# nu bound


def test_nu_theorem_tuple():
    nu = nu_bound(THEOREM_TUPLE, {})
    assert nu == Fraction(113, 60)
    assert nu.__floor__() == 1


def test_nu_trivial_zero():
    tup = RaduTuple(m=1, M=1, N=1, r={}, t=0)
    assert nu_bound(tup, {}) == 0


def test_nu_penta_tuple_negative():
    # (1/24)(-6) + (1/120) - 4/5; a negative bound, and indeed this r' = 0
    # fails the cusp nonnegativity precondition at c = 5
    assert nu_bound(PENTA_TUPLE, {}) == Fraction(-25, 24)


# ---------------------------------------------------------------------------
# claims and the full pipeline


def theorem_claim(u=4):
    return CongruenceClaim(tup=THEOREM_TUPLE, rprime={}, u=u)


def test_verify_theorem_claim():
    report = verify_claim(theorem_claim(), spot_margin=500)
    assert report.verdict == "verified-for-all-n"
    assert sorted(report.P) == [18, 28, 38, 48]
    assert report.nu == Fraction(113, 60)
    assert report.checked_n_max == 1
    assert report.spot_checked_to == 501


def test_verify_mod8_counterexample():
    report = verify_claim(theorem_claim(u=8))
    assert report.verdict == "counterexample"
    assert report.witness == (0, 18, 4)
    assert count_EObar(18) % 8 == 4
    assert report.failed_stage == "initial-cases"


def test_verify_mod1_trivial():
    report = verify_claim(theorem_claim(u=1))
    assert report.verdict == "verified-for-all-n"


def test_verify_precondition_failed_delta_star():
    bad = CongruenceClaim(tup=RaduTuple(m=50, M=8, N=7, r={2: 2, 4: 1}, t=18), rprime={}, u=4)
    report = verify_claim(bad)
    assert report.verdict == "precondition-failed"
    assert report.failed_stage.startswith("delta-star")


def test_verify_precondition_failed_coset_level():
    # passes delta-star but needs representatives at level 8
    tup = RaduTuple(m=1, M=1, N=8, r={1: 24}, t=0)
    assert delta_star_check(tup).passed
    report = verify_claim(CongruenceClaim(tup=tup, rprime={}, u=2))
    assert report.verdict == "precondition-failed"
    assert report.failed_stage.startswith("coset-representatives")


def test_verify_precondition_failed_cusp_bound():
    # the penta tuple with r' = 0 fails nonnegativity at the c = 5 representative
    report = verify_claim(CongruenceClaim(tup=PENTA_TUPLE, rprime={}, u=5))
    assert report.verdict == "precondition-failed"
    assert report.failed_stage.startswith("cusp-lower-bound")


def test_verify_penta_tuple_with_good_rprime():
    # r' = (5, 0) on level 5 restores nonnegativity, gives nu = 0, and the
    # single initial case p(4) = 5 proves the mod-5 congruence on 5n + 4
    claim = CongruenceClaim(tup=PENTA_TUPLE, rprime={1: 5}, u=5)
    for rep in coset_reps(5):
        assert lower_bound_pmr(rep, PENTA_TUPLE) + p_star(rep, {1: 5}) >= 0
    assert nu_bound(PENTA_TUPLE, {1: 5}) == 0
    report = verify_claim(claim)
    assert report.verdict == "verified-for-all-n"
    assert report.P == (4,)


def test_claim_validation():
    with pytest.raises(ValueError):
        CongruenceClaim(tup=THEOREM_TUPLE, rprime={3: 1}, u=4)  # 3 does not divide 10
    with pytest.raises(ValueError):
        CongruenceClaim(tup=THEOREM_TUPLE, rprime={}, u=0)


def test_claim_json_and_report_json(tmp_path):
    obj = {
        "kind": "radu",
        "m": 50,
        "M": 8,
        "N": 10,
        "r": {"2": 2, "4": 1},
        "t": 18,
        "rprime": {},
        "u": 4,
    }
    path = tmp_path / "claim.json"
    path.write_text(json.dumps(obj))
    claim = load_claim(path)
    assert claim.tup == THEOREM_TUPLE or claim.tup.r == {2: 2, 4: 1}
    assert claim.progression_set == frozenset({18, 28, 38, 48})
    report = verify_claim(claim, spot_margin=100)
    out = json.loads(json.dumps(report.to_json()))
    assert out["verdict"] == "verified-for-all-n"
    assert out["nu"] == "113/60"
    assert out["floor_nu"] == "1"
    assert out["P"] == ["18", "28", "38", "48"]
    assert out["checked"] == ["0", "1"]


def test_spot_check_never_contradicts_verdict():
    report = verify_claim(theorem_claim(), spot_margin=600)
    assert report.verdict == "verified-for-all-n"
    assert report.spot_checked_to == 601
