import math

import pytest
from hypothesis import given, strategies as st

from blockwake import (
    CacheCapacityError,
    CombinedValue,
    ConfigError,
    DomainError,
    EvaluationError,
    MemoCache,
    ObjectiveSpec,
    Parameter,
    combine_bi_objective,
    evaluate,
    point_from_str,
    point_to_str,
    uniform_space,
)


class CountingLandscape:
    """Wraps a callable and counts how often it is actually invoked."""

    def __init__(self, fn):
        self.fn = fn
        self.calls = 0

    def value(self, point):
        self.calls += 1
        return self.fn(point)


def test_parameter_invariants():
    with pytest.raises(ConfigError):
        Parameter(0, "empty", ())
    with pytest.raises(ConfigError):
        Parameter(0, "dup", ("a", "a"))
    assert Parameter(0, "ok", ("a", "b", "c")).cardinality == 3


def test_space_size_is_exact():
    space = uniform_space(40, 3)
    assert space.size == 3**40  # exceeds 2^63; must stay exact


def test_validate_point():
    space = uniform_space(2, 3)
    space.validate_point((0, 2))
    with pytest.raises(DomainError):
        space.validate_point((0, 3))
    with pytest.raises(DomainError):
        space.validate_point((0,))


def test_point_serialization_roundtrip():
    assert point_to_str((1, 0, 2)) == "1,0,2"
    assert point_from_str("1,0,2") == (1, 0, 2)


def test_evaluate_memoizes_repeat_requests():
    space = uniform_space(1, 3)
    ls = CountingLandscape(lambda p: float(p[0]))
    cache = MemoCache()
    v1 = evaluate(space, ls, (1,), cache)
    v2 = evaluate(space, ls, (1,), cache)
    assert v1 == v2 == 1.0
    assert cache.misses == 1 and cache.hits == 1
    assert ls.calls == 1  # second request never reached the landscape


def test_evaluate_exhaustive_tiny_case():
    space = uniform_space(1, 3)
    ls = CountingLandscape(lambda p: float(p[0]))
    cache = MemoCache()
    for point in space.iter_points():
        evaluate(space, ls, point, cache)
    assert cache.misses == 3
    assert len(cache.entries) == 3


def test_evaluate_full_sweep_of_3_pow_10_grid():
    space = uniform_space(10, 3)
    ls = CountingLandscape(lambda p: float(sum(p)))
    cache = MemoCache()
    for point in space.iter_points():
        evaluate(space, ls, point, cache)
    assert cache.misses == 59049
    assert ls.calls == 59049


def test_evaluate_rejects_invalid_point():
    space = uniform_space(2, 3)
    with pytest.raises(DomainError):
        evaluate(space, CountingLandscape(lambda p: 0.0), (0, 5), MemoCache())


def test_evaluate_rejects_non_finite_value():
    space = uniform_space(1, 3)
    with pytest.raises(EvaluationError) as err:
        evaluate(space, CountingLandscape(lambda p: math.nan), (1,), MemoCache())
    assert err.value.point == (1,)


def test_cache_capacity_rejects_instead_of_evicting():
    space = uniform_space(1, 3)
    ls = CountingLandscape(lambda p: float(p[0]))
    cache = MemoCache(capacity=2)
    evaluate(space, ls, (0,), cache)
    evaluate(space, ls, (1,), cache)
    evaluate(space, ls, (1,), cache)  # hit: allowed at capacity
    with pytest.raises(CacheCapacityError):
        evaluate(space, ls, (2,), cache)
    assert set(cache.entries) == {(0,), (1,)}


def test_cache_dump_csv(tmp_path):
    space = uniform_space(2, 2)
    ls = CountingLandscape(lambda p: float(p[0] + p[1]))
    cache = MemoCache()
    for point in space.iter_points():
        evaluate(space, ls, point, cache)
    out = tmp_path / "cache.csv"
    cache.dump_csv(out)
    lines = out.read_text().splitlines()
    assert lines[0] == "coords,value"
    assert lines[1] == '"0,0",0.0'
    assert len(lines) == 5


BI_SPEC = ObjectiveSpec(kind="bi", bounds=((2.0, 6.0), (10.0, 30.0)))


def test_combine_examples():
    assert combine_bi_objective(2.0, 10.0, BI_SPEC) == CombinedValue(0.0, False)
    assert combine_bi_objective(6.0, 10.0, BI_SPEC) == CombinedValue(0.5, False)
    assert combine_bi_objective(4.0, 20.0, BI_SPEC) == CombinedValue(0.5, False)


def test_combine_clamps_and_flags():
    value, clamped = combine_bi_objective(1.0, 40.0, BI_SPEC)
    assert clamped
    assert value == 0.5  # low side clamps to 0, high side to 1


def test_combine_rejects_degenerate_bounds():
    with pytest.raises(ConfigError):
        ObjectiveSpec(kind="bi", bounds=((1.0, 1.0), (0.0, 1.0)))


def test_combine_requires_bi_spec():
    with pytest.raises(ConfigError):
        combine_bi_objective(0.0, 0.0, ObjectiveSpec(kind="single"))


@given(
    f1a=st.floats(2.0, 6.0),
    f1b=st.floats(2.0, 6.0),
    f2=st.floats(10.0, 30.0),
)
def test_combine_monotone_in_each_objective(f1a, f1b, f2):
    lo, hi = sorted((f1a, f1b))
    v_lo = combine_bi_objective(lo, f2, BI_SPEC).value
    v_hi = combine_bi_objective(hi, f2, BI_SPEC).value
    assert v_lo <= v_hi
    assert 0.0 <= v_lo <= 1.0


@given(
    f1=st.floats(-5.0, 10.0),
    f2=st.floats(-5.0, 50.0),
)
def test_combine_stays_in_unit_interval_even_outside_bounds(f1, f2):
    value, _ = combine_bi_objective(f1, f2, BI_SPEC)
    assert 0.0 <= value <= 1.0
