import json
import math

import numpy as np
import pytest

import lpcalc


def plateau_mode():
    # mode 143 on L = 64 sits inside the plateau of phi_4
    grid = lpcalc.Grid(1, 4096, 64.0)
    x = np.arange(4096) * grid.spacing
    return grid, lpcalc.GridFunction(grid, np.exp(1j * 2 * np.pi * 143 / 64.0 * x))


def test_round_trip_through_spectrum():
    grid = lpcalc.Grid(1, 64, 2 * math.pi)
    f = lpcalc.random_band_limited(grid, 3, seed=1)
    g = lpcalc.GridFunction.from_spectrum(grid, f.spectrum())
    assert np.max(np.abs(g.samples() - f.samples())) <= 1e-13
    assert np.max(np.abs(f.samples().imag)) <= 1e-14


def test_single_block_norms():
    grid, f = plateau_mode()
    R = lpcalc.build_resolution(6, grid)
    for p in (1.0, 2.0):
        got = lpcalc.besov_norm(f, lpcalc.SpaceSpec(s=0.5, p=p, q=2.0), R)
        assert got == pytest.approx(2 ** 2 * 64 ** (1 / p), rel=1e-10)
    w = lpcalc.AdmissibleWeight.prototype(1.0)
    got = lpcalc.triebel_lizorkin_norm(f, lpcalc.SpaceSpec(0.0, 2.0, 2.0, w), R)
    assert got == pytest.approx((1 + 4 * math.log(2)) * 8.0, rel=1e-10)
    cubes = lpcalc.DyadicCubeSet(grid)
    c = lpcalc.GridFunction(grid, np.full(4096, 2.0 + 0j))
    assert lpcalc.bmo_norm(c, cubes) == pytest.approx(2.0)
    assert lpcalc.xw_norm(c, w, cubes) == pytest.approx(2.0)


def test_partition_identity():
    grid = lpcalc.Grid(1, 4096, 64.0)
    R = lpcalc.build_resolution(6, grid)
    rep = lpcalc.check_partition(R, 2 * math.pi / 64.0)
    assert rep["partition_residual"] <= 1e-12
    with pytest.raises(lpcalc.NyquistViolation):
        lpcalc.build_resolution(7, lpcalc.Grid(1, 1024, 64.0))


def test_unit_symbol_is_the_product():
    grid = lpcalc.Grid(1, 128, 2 * math.pi)
    f = lpcalc.random_band_limited(grid, 3, seed=2)
    g = lpcalc.random_band_limited(grid, 3, seed=3)
    h = lpcalc.apply_bilinear(lpcalc.builtin_symbol("one"), f, g)
    assert np.max(np.abs(h.samples() - f.samples() * g.samples())) <= 1e-12


def test_gate_and_errors():
    with pytest.raises(lpcalc.GateViolation):
        lpcalc.product_gate(2.0, 0.5)
    with pytest.raises(lpcalc.LpcalcError):
        lpcalc.Grid(1, 12, 1.0)
    with pytest.raises(lpcalc.LpcalcError):
        lpcalc.GridFunction(lpcalc.Grid(1, 16, 1.0), np.zeros(8, dtype=complex))


def test_picard_small_data():
    grid = lpcalc.Grid(1, 256, 2 * math.pi)
    R = lpcalc.build_resolution(6, grid)
    u = lpcalc.random_band_limited(grid, 4)
    size = lpcalc.triebel_lizorkin_norm(u, lpcalc.SpaceSpec(0.5, 2.0, 2.0), R)
    u0 = lpcalc.GridFunction(grid, u.samples() * (0.01 / size))
    st = lpcalc.picard_solve(u0, R)
    assert st["converged"]
    assert st["residual"] <= 1e-8
    assert len(st["trajectory"]) == 33


def test_lpgf_round_trip(tmp_path):
    grid = lpcalc.Grid(2, 16, 3.0)
    f = lpcalc.GridFunction(grid, np.arange(256, dtype=complex).reshape(16, 16))
    path = tmp_path / "f.lpgf"
    lpcalc.write_lpgf(f, path)
    assert np.array_equal(lpcalc.read_lpgf(path).samples(), f.samples())


def test_cli_is_deterministic():
    args = ["embed-check", "--count", "8", "--levels", "4,5"]
    code, report, _ = lpcalc.run_cli(args)
    assert code == 0
    assert json.loads(report)["command"] == "embed-check"
    assert lpcalc.strip_timestamp(report) == lpcalc.strip_timestamp(lpcalc.run_cli(args)[1])
    assert lpcalc.run_cli(["partition-check", "--nope"])[0] == 2
