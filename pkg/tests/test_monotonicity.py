import numpy as np
import pytest

from shapesuite.validation import monotonicity
from shapesuite.validation.monotonicity import condition_a, condition_b, find_nonmonotone_triple


def _brute_force(x, y):
    n = len(x)
    for r in range(n):
        for e1 in range(n):
            for e2 in range(n):
                if len({r, e1, e2}) < 3:
                    continue
                if condition_a(x, y, r, e1, e2):
                    return (r, e1, e2), 'A'
                if condition_b(x, y, r, e1, e2):
                    return (r, e1, e2), 'B'
    return None, None


def test_small_witness():
    x, y = [1, 2, 3], [1, 3, 2]
    witness = find_nonmonotone_triple(x, y)
    assert witness.found
    assert witness.indices == (1, 0, 2)
    assert witness.condition == 'B'
    r, e1, e2 = witness.indices
    assert condition_b(x, y, r, e1, e2)
    assert not witness.capped


@pytest.mark.parametrize('sign', [1, -1])
def test_monotone_data_has_no_witness(sign):
    x = np.arange(30, dtype=np.float64)
    witness = find_nonmonotone_triple(x, sign * x ** 2)
    assert not witness.found
    assert witness.examined == 30 * 29 * 28
    assert not witness.capped


def test_matches_brute_force():
    rng = np.random.default_rng(5)
    for n in (3, 4, 8, 20, 50):
        for _ in range(10):
            x = rng.integers(0, 6, size=n).astype(np.float64)
            y = x + rng.integers(0, 2, size=n)
            witness = find_nonmonotone_triple(x, y)
            indices, condition = _brute_force(x, y)
            assert witness.indices == indices
            assert witness.condition == condition


def test_search_stops_at_cap():
    x = np.arange(10, dtype=np.float64)
    witness = find_nonmonotone_triple(x, x, max_triples=100)
    assert not witness.found
    assert witness.capped
    assert witness.examined == 72
    # 第一个R总是被检查
    first = find_nonmonotone_triple(x, x, max_triples=1)
    assert first.examined == 72
    assert first.capped


def test_capped_search_logs_warning(monkeypatch):
    messages = []
    monkeypatch.setattr(monotonicity.logger, 'warning', lambda msg, *args: messages.append(msg % args))
    x = np.arange(10, dtype=np.float64)
    find_nonmonotone_triple(x, x, max_triples=100)
    assert len(messages) == 1
    assert '100' in messages[0]
    find_nonmonotone_triple(x, x)
    assert len(messages) == 1


def test_witness_found_before_cap():
    x = np.array([2.0, 1.0, 3.0, 4.0, 5.0])
    y = np.array([2.0, 3.0, 1.0, 4.0, 5.0])
    witness = find_nonmonotone_triple(x, y, max_triples=1)
    assert witness.found
    assert not witness.capped
    assert witness.indices[0] == 0


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        find_nonmonotone_triple([1, 2], [1, 2])
    with pytest.raises(ValueError):
        find_nonmonotone_triple([1, 2, 3], [1, 2])
    with pytest.raises(ValueError):
        find_nonmonotone_triple([1, 2, 3], [1, 2, 3], max_triples=0)
