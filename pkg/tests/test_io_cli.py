import json

import numpy as np
import pytest

from conftest import max_abs, random_series, random_signal
from volterra import io
from volterra.cli import main
from volterra.evaluation import eval_time
from volterra.kernels import zero_pad
from volterra.morphisms import catalog
from volterra.tfd import PolynomialPhase, chirp


def test_signal_csv_round_trip(tmp_path, rng):
    s = random_signal(16, rng)
    path = tmp_path / "s.csv"
    io.write_signal_csv(path, s)
    assert np.array_equal(io.read_signal_csv(path), s)


def test_series_round_trip_bit_exact(tmp_path, rng):
    series = random_series(3, 3, rng, constant=0.25 - 1.5j)
    path = tmp_path / "v.vk"
    io.save_series(path, series)
    loaded = io.load_series(path)
    assert set(loaded.kernels) == set(series.kernels)
    for index, kernel in series.kernels.items():
        padded = zero_pad(kernel, series.memory) if kernel.order else kernel
        assert np.array_equal(loaded.kernels[index].data, padded.data)


def test_morphism_round_trip_bit_exact(tmp_path, rng):
    V = random_series(2, 3, rng)
    _, m = catalog("identity", V, 12)
    path = tmp_path / "m.vm"
    io.save_morphism(path, m)
    loaded = io.load_morphism(path)
    assert loaded.index_map == m.index_map
    for i in m.index_map:
        assert np.array_equal(loaded.matrices[i], m.matrices[i])
        assert np.array_equal(loaded.masks[i], m.masks[i])


def test_grid_csv_real_and_complex(tmp_path, rng):
    real_grid = rng.standard_normal((4, 6))
    path = tmp_path / "g.csv"
    io.write_grid_csv(path, real_grid)
    assert np.allclose(io.read_grid_csv(path), real_grid, atol=0)
    cplx = real_grid + 1j * rng.standard_normal((4, 6))
    io.write_grid_csv(path, cplx)
    raw = io.read_grid_csv(path)
    assert raw.shape == (4, 12)  # interleaved re, im columns


def test_pgm_header_and_payload(tmp_path, rng):
    grid = rng.random((5, 9))
    path = tmp_path / "g.pgm"
    io.write_pgm(path, grid)
    blob = path.read_bytes()
    assert blob.startswith(b"P5\n9 5\n255\n")
    pixels = np.frombuffer(blob.split(b"255\n", 1)[1], dtype=np.uint8)
    assert pixels.size == 45 and pixels.max() == 255


def write_series(tmp_path, name, series):
    path = tmp_path / name
    io.save_series(path, series)
    return str(path)


def test_cli_eval(tmp_path, rng, capsys):
    series = random_series(2, 3, rng)
    s = random_signal(12, rng)
    spath = tmp_path / "s.csv"
    io.write_signal_csv(spath, s)
    vk = write_series(tmp_path, "v.vk", series)
    out = tmp_path / "y.csv"
    code = main(["eval", "--series", vk, "--signal", str(spath), "--out", str(out)])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["length"] == 12
    assert max_abs(io.read_signal_csv(out) - eval_time(series, s)) < 1e-12


def test_cli_compose_associativity_triple(tmp_path, rng, capsys):
    A = random_series(2, 2, rng)
    B = random_series(2, 2, rng)
    C = random_series(2, 2, rng)
    binds = [
        "--bind", f"A={write_series(tmp_path, 'a.vk', A)}",
        "--bind", f"B={write_series(tmp_path, 'b.vk', B)}",
        "--bind", f"C={write_series(tmp_path, 'c.vk', C)}",
    ]
    left, right = tmp_path / "l.vk", tmp_path / "r.vk"
    assert main(["compose", "--expr", "(C <| B) <| A", *binds, "--out", str(left)]) == 0
    first = json.loads(capsys.readouterr().out)
    assert main(["compose", "--expr", "C <| (B <| A)", *binds, "--out", str(right)]) == 0
    second = json.loads(capsys.readouterr().out)
    assert first["truncations"] and second["truncations"]  # order 8 > default cap 4
    lhs, rhs = io.load_series(left), io.load_series(right)
    for j in set(lhs.orders()) | set(rhs.orders()):
        lk, rk = lhs.kernel_of_order(j), rhs.kernel_of_order(j)
        M = max(k.memory for k in (lk, rk) if k is not None)
        ld = zero_pad(lk, M).data if lk else 0
        rd = zero_pad(rk, M).data if rk else 0
        assert max_abs(ld - rd) <= 1e-8


def test_cli_compose_unbound_name_is_usage_error(tmp_path, capsys):
    out = tmp_path / "o.vk"
    code = main(["compose", "--expr", "A + B", "--out", str(out)])
    assert code == 2


def test_cli_morph_check_naturality(tmp_path, rng, capsys):
    V = random_series(2, 3, rng)
    W, m = catalog("autoconvolution", V, 12)
    vk = write_series(tmp_path, "v.vk", V)
    wk = write_series(tmp_path, "w.vk", W)
    mfile = tmp_path / "m.vm"
    io.save_morphism(mfile, m)
    code = main(
        [
            "morph", "--check-naturality",
            "--morphism", str(mfile), "--source", vk, "--target", wk,
            "--trials", "20",
        ]
    )
    payload = json.loads(capsys.readouterr().out)
    assert code == 0
    assert payload["max_residual"] <= 1e-9


def test_cli_morph_apply(tmp_path, rng, capsys):
    V = random_series(2, 3, rng)
    W, m = catalog("trivial", V, 12)
    vk = write_series(tmp_path, "v.vk", V)
    wk = write_series(tmp_path, "w.vk", W)
    mfile = tmp_path / "m.vm"
    io.save_morphism(mfile, m)
    spath = tmp_path / "s.csv"
    io.write_signal_csv(spath, random_signal(12, rng))
    out = tmp_path / "o.csv"
    code = main(
        [
            "morph", "--morphism", str(mfile), "--source", vk, "--target", wk,
            "--signal", str(spath), "--out", str(out),
        ]
    )
    assert code == 0
    assert io.read_signal_csv(out).size == 12


@pytest.mark.filterwarnings("ignore:wvd. input is not analytic")
def test_cli_tfd_wvd_writes_grid_and_pgm(tmp_path, capsys):
    L = 64
    ph = PolynomialPhase((0.0, 2 * np.pi * 0.1, 2 * np.pi * 0.05 / L))
    spath = tmp_path / "chirp.csv"
    io.write_signal_csv(spath, chirp(ph, L))
    out, pgm = tmp_path / "w.csv", tmp_path / "w.pgm"
    code = main(
        ["tfd", "--in", str(spath), "--method", "wvd", "--out", str(out), "--pgm", str(pgm)]
    )
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["shape"] == [L, L // 2]
    assert io.read_grid_csv(out).shape == (L, L // 2)
    assert pgm.read_bytes().startswith(b"P5\n")


def test_cli_tfd_pwvd_k6_needs_lambda3(tmp_path, capsys):
    L = 64
    spath = tmp_path / "s.csv"
    io.write_signal_csv(spath, np.exp(2j * np.pi * 9 * np.arange(L) / L))
    out = tmp_path / "p.csv"
    code = main(["tfd", "--in", str(spath), "--method", "pwvd", "--k", "6", "--out", str(out)])
    assert code == 2
    code = main(
        ["tfd", "--in", str(spath), "--method", "pwvd", "--k", "6", "--lambda3", "0.62",
         "--out", str(out)]
    )
    assert code == 0


def test_cli_lambdas_domain_error(capsys):
    assert main(["lambdas", "--k", "6", "--lambda3", "0.4"]) == 1
    assert main(["lambdas", "--k", "6", "--lambda3", "0.62"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["passed"] is True


def test_cli_info_reports_symmetry(tmp_path, rng, capsys):
    from volterra.kernels import symmetrize_plain

    series = random_series(2, 3, rng).map_kernels(symmetrize_plain)
    vk = write_series(tmp_path, "v.vk", series)
    assert main(["info", "--series", vk]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["orders"] == [1, 2]
    assert all(entry["symmetric"] for entry in payload["kernels"])


def test_cli_missing_file_is_usage_error(tmp_path):
    assert main(["info", "--series", str(tmp_path / "missing.vk")]) == 2


def test_cli_bad_usage_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["not-a-command"])
    assert exc.value.code == 2
