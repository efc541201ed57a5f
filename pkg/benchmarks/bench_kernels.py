"""Time the numba kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--full]

Inputs are realistic shapes: the 14400-vertex omnitruncated 120-cell as a
golden-integer lattice, its edge directions against the 31 strut lines, and
a pair of 2D point clouds the size of a Coxeter-plane image.  ``--full``
also times the whole omnitruncated projection and parts list once per
backend.  Each kernel is warmed up (jit compile) before timing, and both
backends must agree before any number is printed.
"""

import argparse
import time

import numpy as np

from zomekit import _kernels as K


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def make_inputs(seed=0):
    from zomekit import build_polytope
    from zomekit.zome import default_catalog

    rng = np.random.default_rng(seed)
    poly = build_polytope("H4 all-active")
    num, _den = poly.lattice
    X = np.ascontiguousarray(num.astype(np.int64))
    M = rng.integers(-3, 4, size=(3, X.shape[1], 2)).astype(np.int64)
    F = poly.float_vertices()
    E = F[rng.integers(0, len(F), 20000)] - F[rng.integers(0, len(F), 20000)]
    E = E[:, :3]
    E = E[np.linalg.norm(E, axis=1) > 1e-9]
    L = default_catalog().float_units
    P = rng.normal(size=(4000, 2))
    c, s = np.cos(2 * np.pi / 30), np.sin(2 * np.pi / 30)
    Q = P @ np.array([[c, -s], [s, c]]).T
    S = rng.normal(size=(40, 40))
    return {
        "golden_matvec": (K.golden_matvec, (M, X), "3x4 golden matrix on 14400 lattice points"),
        "best_lines": (K.best_lines, (E, L), f"{len(E)} directions against 31 lines"),
        "max_nearest_distance": (K.max_nearest_distance, (P, Q), "4000 vs 4000 planar points"),
        "jacobi_eigh": (K.jacobi_eigh, (S + S.T,), "symmetric 40x40"),
    }, poly


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    return np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), atol=1e-9)


def full_pipeline(poly):
    from zomekit import complete_basis, element_first_axis, orthogonal_project
    from zomekit.zome import build_model, parts_list

    shadow = orthogonal_project(poly, complete_basis(element_first_axis(poly, 3, 0)))
    model, _ = build_model(shadow)
    return parts_list(model).render()


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--full", action="store_true", help="also time the omnitruncated parts pipeline")
    args = ap.parse_args()
    if not K._HAVE_NUMBA:
        raise SystemExit("numba is not importable; nothing to compare")

    cases, poly = make_inputs()
    print(f"{'kernel':22s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}  input")
    for name, (fn, inputs, what) in cases.items():
        K.set_backend(True)
        ref = fn(*inputs)  # compile
        t_nb = best_of(lambda: fn(*inputs), args.repeat)
        K.set_backend(False)
        out = fn(*inputs)
        if name == "jacobi_eigh":
            # eigenvectors are defined up to sign; compare eigenvalues only
            ok = same(ref[0], out[0])
        else:
            ok = same(ref, out)
        if not ok:
            raise SystemExit(f"{name}: numba and numpy disagree")
        t_np = best_of(lambda: fn(*inputs), args.repeat)
        print(f"{name:22s} {t_nb * 1e3:10.2f} {t_np * 1e3:10.2f} {t_np / t_nb:7.1f}x  {what}")

    if args.full:
        for flag in (True, False):
            K.set_backend(flag)
            t0 = time.perf_counter()
            text = full_pipeline(poly)
            print(f"omnitruncated parts, {K.backend():5s}: {time.perf_counter() - t0:.2f} s")
        print(text, end="")
    K.set_backend(True)


if __name__ == "__main__":
    main()
