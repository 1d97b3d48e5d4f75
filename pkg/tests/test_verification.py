import pytest

from penalty_lab.verification import (
    check_curves,
    check_dse,
    check_examples,
    check_first_best,
    check_gcsp_has_no_dominant_bid,
    check_lambert,
    example_economies,
    run_suite,
)


def _failures(results):
    return [f"{r.name}: {r.detail}" for r in results if not r.passed]


def test_examples_pass():
    results = check_examples()
    assert not _failures(results)
    assert {'example4.2bpb.welfare', 'example7.2bpb.utilization', 'example8.mplus1.welfare'} <= {
        r.name for r in results
    }


def test_example_economies_are_single_resource():
    for e in example_economies().values():
        assert e.m == 1 and e.n == 2


def test_gcsp_certificate():
    assert check_gcsp_has_no_dominant_bid().passed


def test_lambert_sweep():
    assert not _failures(check_lambert(points=2_000))


def test_curves_suite_small():
    results = check_curves(samples=5, seed=1)
    # Three models times six bias regimes, curves and zero crossings each.
    assert len(results) == 36
    assert not _failures(results)


def test_first_best_suite_small():
    assert not _failures(check_first_best(samples=5, seed=2))


@pytest.mark.slow
def test_dse_suite_small():
    assert not _failures(check_dse(samples=3, seed=3))


def test_run_suite_rejects_unknown_names():
    with pytest.raises(ValueError):
        run_suite('everything')
    with pytest.raises(ValueError):
        run_suite('curves', samples=0)
