from fractions import Fraction as F

import pytest

from degderange.exactcore import factorial
from degderange.identities import (
    IdentityCase,
    IdentityId,
    certify,
    identity_uses_r,
    identity_uses_x,
    verify,
    verify_grid,
)

SMALL_LAM = [F(0), F(1, 2), F(-1, 3)]
SMALL_X = [F(0), F(1), F(3, 4)]


def _case(ident, n, lam, x=None, r=None):
    if identity_uses_x(ident) and x is None:
        x = F(0)
    if identity_uses_r(ident) and r is None:
        r = 1
    return IdentityCase(ident, n, F(lam), x, r)


def test_rec_identity_worked_example():
    lhs, rhs, ok = verify(_case(IdentityId.THM2_REC, 4, F(1, 2), F(0)))
    assert ok
    assert lhs == rhs == F(15, 2)


def test_first_kind_connection_at_n_zero():
    for lam in SMALL_LAM:
        lhs, rhs, ok = verify(_case(IdentityId.THM5, 0, lam, F(2, 3)))
        assert ok and lhs == rhs == 1


def test_bell_connection_worked_example():
    lhs, rhs, ok = verify(_case(IdentityId.THM7_B, 2, F(1, 2)))
    assert ok and lhs == rhs == 1


def test_every_identity_on_small_grid():
    report = verify_grid(
        n_max=10, lam_grid=SMALL_LAM, x_grid=SMALL_X, r_max=3
    )
    assert report.cases_run > 0
    assert report.ok, report.failures[:3]


def test_empty_id_set():
    report = verify_grid(ids=[], n_max=8, lam_grid=SMALL_LAM, x_grid=SMALL_X, r_max=2)
    assert report.cases_run == 0
    assert report.ok


def test_x_independence_of_shifted_convolution():
    # the x-dependent expression must agree with the x-free ones and with n!
    for lam in SMALL_LAM:
        for n in range(9):
            vals = set()
            for x in (F(0), F(1), F(-2), F(3, 4)):
                lhs, rhs, ok = verify(_case(IdentityId.THM5, n, lam, x))
                assert ok
                vals.add(rhs)
            assert vals == {F(factorial(n))}


def test_every_mutation_detected():
    for ident in IdentityId:
        report = verify_grid(
            ids=[ident],
            n_max=6,
            lam_grid=SMALL_LAM,
            x_grid=SMALL_X,
            r_max=2,
            mutate=True,
        )
        assert report.failures, f"mutated {ident.value} passed everywhere"


def test_jobs_parallel_matches_serial():
    kwargs = dict(n_max=6, lam_grid=SMALL_LAM, x_grid=SMALL_X, r_max=2)
    serial = verify_grid(**kwargs)
    parallel = verify_grid(jobs=2, **kwargs)
    assert serial.cases_run == parallel.cases_run
    assert serial.failures == parallel.failures


def test_certify_small():
    pts4 = [F(i, 5) for i in range(4)]
    assert certify(IdentityId.THM2_REC, 3, pts4, pts4)
    assert certify(IdentityId.THM7_B, 0, [F(1, 2)])


def test_certify_negative_control():
    pts = [F(i, 6) for i in range(5)]
    assert certify(IdentityId.THM2_REC, 4, pts, pts, mutate=True) is False


def test_certify_insufficient_points():
    with pytest.raises(ValueError):
        certify(IdentityId.THM2_REC, 3, [F(0), F(1)], [F(0), F(1), F(2), F(3)])
    with pytest.raises(ValueError):
        certify(IdentityId.THM2_REC, 3, [F(0), F(1), F(2), F(2)], [F(0)])
    with pytest.raises(ValueError):
        certify(IdentityId.THM2_REC, 2, [F(0), F(1), F(2)], None)


def test_certify_ignores_x_for_x_free_identities():
    assert certify(IdentityId.THM8_B, 2, [F(0), F(1, 5), F(2, 5)])


def test_verify_parameter_validation():
    with pytest.raises(ValueError):
        verify(IdentityCase(IdentityId.THM2_REC, 0, F(1, 2), F(0)))  # n below range
    with pytest.raises(ValueError):
        verify(IdentityCase(IdentityId.THM2_REC, 3, F(1, 2)))  # missing x
    with pytest.raises(ValueError):
        verify(IdentityCase(IdentityId.THM7_B, 3, F(1, 2), F(0)))  # spurious x
    with pytest.raises(ValueError):
        verify(IdentityCase(IdentityId.THM9_VS_SERIES, 3, F(1, 2), F(0)))  # missing r
    with pytest.raises(ValueError):
        verify(IdentityCase(IdentityId.THM9_VS_SERIES, 3, F(1, 2), F(0), 0))  # r < 1
    with pytest.raises(ValueError):
        verify(IdentityCase(IdentityId.THM5, 300, F(1, 2), F(0)))  # beyond hard cap


def test_report_is_deterministically_sorted():
    report = verify_grid(
        ids=[IdentityId.THM2_CONV, IdentityId.THM7_A],
        n_max=5,
        lam_grid=SMALL_LAM,
        x_grid=SMALL_X,
        r_max=1,
        mutate=True,
    )
    keys = [case.sort_key() for case, _, _ in report.failures]
    assert keys == sorted(keys)
