import numpy as np
import pytest

from efron_dual import _fallback, kernels
from efron_dual.geometry import PRESETS, convex_hull, parse_body


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_bit_identical_simulation(compiled, name):
    body = parse_body(name)
    npts = body.dimension + 5
    pre = [1, body.dimension + 1, npts]
    a = kernels.simulate(body, npts, pre, 99, 300, backend="cython")
    b = kernels.simulate(body, npts, pre, 99, 300, backend="python")
    assert np.array_equal(a.volumes, b.volumes)
    assert np.array_equal(a.counts, b.counts)
    assert np.array_equal(a.lead, b.lead)


@pytest.mark.parametrize("name", ["hexagon", "ball3", "tetrahedron"])
def test_bit_identical_points(compiled, name):
    body = parse_body(name)
    prm = np.asarray(body.params, dtype=np.float64)
    for rep in (0, 1, 2**40):
        a = np.asarray(compiled.sample_points(body.code, prm, body.dimension, 17, 5, rep))
        b = _fallback.sample_points(body.code, prm, body.dimension, 17, 5, rep)
        assert np.array_equal(a, b)


def test_compiled_hull_matches_reference(compiled):
    rng = np.random.default_rng(12)
    for dim in (1, 2, 3):
        for _ in range(100):
            P = rng.random((int(rng.integers(1, 30)), dim))
            vol, cnt, mask, flag = compiled.hull_points(P)
            h = convex_hull(P, dim)
            assert not flag
            assert cnt == h.vertex_count
            assert set(np.flatnonzero(np.asarray(mask)).tolist()) == h.vertex_indices
            assert vol == pytest.approx(h.volume, rel=1e-12, abs=1e-15)


def test_degenerate_input_is_flagged(compiled):
    grid = np.array([(x, y, z) for x in (0, .5, 1) for y in (0, .5, 1) for z in (0, .5, 1)], dtype=float)
    _, _, _, flag = compiled.hull_points(grid)
    assert flag
    vol, cnt, _, flag = _fallback.hull_points(grid)
    assert (vol, cnt, flag) == (1.0, 8, 0)


def test_chunking_and_workers_do_not_change_results(monkeypatch):
    body = parse_body("square")
    ref = kernels.simulate(body, 5, [3, 5], 7, 1000)
    monkeypatch.setattr(kernels, "CHUNK", 64)
    for w in (1, 3):
        b = kernels.simulate(body, 5, [3, 5], 7, 1000, workers=w)
        assert np.array_equal(b.volumes, ref.volumes) and np.array_equal(b.counts, ref.counts)


def test_backend_selection():
    assert kernels.DEFAULT_BACKEND in kernels.BACKENDS
    assert kernels.get_backend("python") is _fallback
    with pytest.raises(KeyError):
        kernels.get_backend("fortran")


def test_simulate_contract():
    body = parse_body("square")
    with pytest.raises(ValueError):
        kernels.simulate(body, 3, [4], 0, 10)
    with pytest.raises(ValueError):
        kernels.simulate(body, 3, [0], 0, 10)


def test_flagged_replications_are_redone_exactly(compiled, monkeypatch):
    import types

    def noisy(*args):
        v, c, l, f = (np.array(x) for x in compiled.simulate(*args))
        v[::3] = -1.0
        c[::3] = -1
        f[::3] = 1
        return v, c, l, f

    monkeypatch.setitem(kernels.BACKENDS, "cython", types.SimpleNamespace(simulate=noisy))
    body = parse_body("cube3")
    got = kernels.simulate(body, 6, [4, 6], 3, 200, backend="cython")
    ref = kernels.simulate(body, 6, [4, 6], 3, 200, backend="python")
    assert got.redone == 67
    assert np.array_equal(got.volumes, ref.volumes) and np.array_equal(got.counts, ref.counts)


def test_env_forces_backend():
    import os
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c", "from efron_dual import kernels; print(kernels.DEFAULT_BACKEND)"],
        env={**os.environ, "EFRON_DUAL_BACKEND": "python"}, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
