import threading

import pytest

from scatpoles.solver.pool import WorkerPool


def test_map_preserves_order():
    with WorkerPool(threads=4) as pool:
        assert pool.map(lambda x: x * 10, range(20)) == [x * 10 for x in range(20)]


def test_single_thread_runs_inline():
    pool = WorkerPool()
    assert pool.map(lambda _: threading.current_thread() is threading.main_thread(), [1, 2]) == [True, True]
    assert pool._executor is None


def test_close_shuts_down_executor():
    pool = WorkerPool(threads=2)
    pool.map(abs, [-1, -2, -3])
    assert pool._executor is not None
    pool.close()
    assert pool._executor is None
    assert pool.map(abs, [-4, -5]) == [4, 5]
    pool.close()


def test_errors_propagate():
    def boom(x):
        raise ValueError(f"bad {x}")

    with WorkerPool(threads=2) as pool:
        with pytest.raises(ValueError):
            pool.map(boom, [1, 2])


def test_invalid_thread_count():
    with pytest.raises(ValueError):
        WorkerPool(threads=0)
