import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import fld
from fflseries import _pykernels, kernels
from fflseries.rings import monic_enumerate

try:
    from fflseries import _ckernels
except ImportError:  # extension not built
    _ckernels = None

needs_c = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def _naive_outer(f, e, beta, j):
    """Σ a(θ)^j ⊗ a(t)^β by direct polynomial arithmetic."""
    acc = np.zeros((j * e + 1, beta * e + 1), dtype=np.int64)
    for a in monic_enumerate(f, e):
        aj = a**j
        ab = a**beta
        for i, ci in enumerate(aj.to_list()):
            for k, ck in enumerate(ab.to_list()):
                acc[i, k] = f.add(int(acc[i, k]), f.mul(ci, ck))
    return acc


@pytest.mark.parametrize("q", [2, 3, 4, 5])
@pytest.mark.parametrize("e,beta,j", [(0, 1, 1), (1, 1, 2), (2, 2, 1), (2, 0, 3), (3, 1, 1)])
def test_python_kernel_matches_naive(q, e, beta, j):
    f = fld(q)
    got = _pykernels.monic_outer_sum(q, e, beta, j, 0, q**e, f.add_table, f.mul_table)
    want = _naive_outer(f, e, beta, j)
    assert np.array_equal(np.asarray(got)[: want.shape[0], : want.shape[1]], want)


@needs_c
@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
@pytest.mark.parametrize("e,beta,j", [(1, 1, 2), (2, 2, 1), (3, 1, 3), (2, 0, 4)])
def test_backends_agree_on_outer_sums(q, e, beta, j):
    f = fld(q)
    size = q**e
    for start, stop in [(0, size), (1, size // 2 + 1)]:
        a = _pykernels.monic_outer_sum(q, e, beta, j, start, stop, f.add_table, f.mul_table)
        b = _ckernels.monic_outer_sum(q, e, beta, j, start, stop, f.add_table, f.mul_table)
        assert np.array_equal(np.asarray(a), np.asarray(b))


@needs_c
@settings(max_examples=80, deadline=None)
@given(
    st.sampled_from([2, 3, 4, 5, 9]),
    st.lists(st.integers(0, 100), min_size=0, max_size=12),
    st.lists(st.integers(0, 100), min_size=0, max_size=12),
    st.integers(-1, 15),
)
def test_backends_agree_on_conv(q, a, b, n):
    f = fld(q)
    a = np.array([x % q for x in a], dtype=np.int64)
    b = np.array([x % q for x in b], dtype=np.int64)
    x = np.asarray(_pykernels.conv(a, b, n, f.add_table, f.mul_table))
    y = np.asarray(_ckernels.conv(a, b, n, f.add_table, f.mul_table))
    assert np.array_equal(x, y)


def test_block_split_is_additive(F3):
    full = kernels.monic_outer_sum(F3, 3, 2, 2)
    parts = [kernels.monic_outer_sum(F3, 3, 2, 2, s, s + 9) for s in range(0, 27, 9)]
    acc = parts[0]
    for p in parts[1:]:
        acc = F3.vadd(acc, p)
    assert np.array_equal(full, acc)


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "python")


def test_pure_python_switch(tmp_path):
    import subprocess
    import sys

    code = "import fflseries.kernels as k; print(k.BACKEND)"
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env={"FFLSERIES_PURE_PYTHON": "1", "PATH": ""}
    )
    assert out.stdout.strip() == "python"
