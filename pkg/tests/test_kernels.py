import os
import subprocess
import sys

import numpy as np
import pytest

from zomekit import _kernels as K
from zomekit.zome import default_catalog


@pytest.fixture
def both():
    """Run a callable under each backend and hand back both results."""
    saved = K.USE_NUMBA

    def run(fn, *args):
        out = []
        for flag in (True, False):
            K.set_backend(flag)
            out.append(fn(*args))
        return out

    yield run
    K.set_backend(saved)


def test_golden_matvec_parity(both):
    rng = np.random.default_rng(1)
    M = rng.integers(-5, 6, size=(3, 4, 2)).astype(np.int64)
    X = rng.integers(-50, 51, size=(300, 4, 2)).astype(np.int64)
    a, b = both(K.golden_matvec, M, X)
    assert np.array_equal(a, b)


def test_golden_matvec_product_rule():
    # (1 + phi)(2 + 3 phi) = 5 + 8 phi
    M = np.array([[[1, 1]]], dtype=np.int64)
    X = np.array([[[2, 3]]], dtype=np.int64)
    assert K.golden_matvec(M, X).tolist() == [[[5, 8]]]


def test_fits_int64():
    M = np.ones((3, 4, 2), dtype=np.int64)
    assert K.fits_int64(M, M)
    assert not K.fits_int64(M, np.full((1, 4, 2), 2**61, dtype=np.int64))
    assert not K.fits_int64(M.astype(object), M)


def test_jacobi_parity_and_numpy_agreement(both):
    rng = np.random.default_rng(2)
    S = rng.normal(size=(12, 12))
    S = S + S.T
    (wa, Va), (wb, Vb) = both(K.jacobi_eigh, S)
    assert np.allclose(wa, wb, atol=1e-10)
    assert np.allclose(wa, np.sort(np.linalg.eigvalsh(S))[::-1], atol=1e-10)
    for V, w in ((Va, wa), (Vb, wb)):
        assert np.allclose(S @ V, V * w, atol=1e-9)


def test_max_nearest_parity(both):
    rng = np.random.default_rng(3)
    A, B = rng.normal(size=(700, 2)), rng.normal(size=(650, 2))
    a, b = both(K.max_nearest_distance, A, B)
    assert a == pytest.approx(b, abs=1e-12)
    assert K.max_nearest_distance(A, A) == 0.0
    assert K.max_nearest_distance(np.zeros((0, 2)), B) == 0.0


def test_best_lines_parity(both):
    rng = np.random.default_rng(4)
    E = rng.normal(size=(500, 3))
    L = default_catalog().float_units
    (ia, ca), (ib, cb) = both(K.best_lines, E, L)
    assert np.array_equal(ia, ib)
    assert np.allclose(ca, cb, atol=1e-12)


def test_best_lines_finds_catalog_lines():
    L = default_catalog().float_units
    idx, cos = K.best_lines(-2.5 * L, L)
    assert idx.tolist() == list(range(len(L)))
    assert np.allclose(cos, 1)


def test_environment_switch():
    env = dict(os.environ, ZOMEKIT_NUMBA="0")
    out = subprocess.run(
        [sys.executable, "-c", "from zomekit import _kernels as K; print(K.backend())"],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"
