from smmconv.cli import main
from smmconv.csvio import parse_csv


def test_conv_prints_checksum_and_scratch(capsys):
    args = ["conv", "--backend", "smm", "--ci", "2", "--co", "3",
            "--h", "8", "--w", "8", "--kh", "3", "--kw", "3",
            "--ph", "1", "--pw", "1"]
    assert main(args) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("checksum=")
    assert out[1] == "scratch_bytes=320"  # 4 * (8+2) * 8
    # deterministic across invocations
    assert main(args) == 0
    assert capsys.readouterr().out.splitlines()[0] == out[0]


def test_conv_backends_agree_on_checksum(capsys):
    base = ["--ci", "2", "--co", "2", "--h", "6", "--w", "6",
            "--kh", "3", "--kw", "3"]
    sums = {}
    for backend in ("ref", "im2col", "mec", "smm"):
        assert main(["conv", "--backend", backend] + base) == 0
        line = capsys.readouterr().out.splitlines()[0]
        sums[backend] = float(line.split("=", 1)[1])
    ref = sums["ref"]
    for backend, value in sums.items():
        assert abs(value - ref) / abs(ref) <= 1e-3, backend


def test_conv_invalid_geometry_single_line_error(capsys):
    code = main(["conv", "--backend", "ref", "--ci", "1", "--co", "1",
                 "--h", "4", "--w", "4", "--kh", "9", "--kw", "3"])
    assert code == 1
    captured = capsys.readouterr()
    assert captured.out == ""
    err_lines = [l for l in captured.err.splitlines() if l]
    assert len(err_lines) == 1
    assert err_lines[0].startswith("error: ")


def test_conv_unsupported_backend_pair(capsys):
    code = main(["conv", "--backend", "mec", "--ci", "1", "--co", "1",
                 "--h", "8", "--w", "8", "--kh", "3", "--kw", "3",
                 "--sh", "2"])
    assert code == 1
    assert "stride" in capsys.readouterr().err


def test_bench_config_to_file(tmp_path, capsys):
    cfg = tmp_path / "layers.cfg"
    cfg.write_text("layer name=a ci=2 co=2 h=8 w=8 kh=3 kw=3 ph=1 pw=1\n"
                   "layer name=b ci=1 co=2 h=9 w=9 kh=3 kw=3 sh=2 sw=2\n")
    out = tmp_path / "result.csv"
    code = main(["bench", "--config", str(cfg), "--backends", "im2col,mec,smm",
                 "--repeats", "3", "--threads", "1", "--seed", "5",
                 "--out", str(out)])
    assert code == 0
    err = capsys.readouterr().err
    assert "threads=1" in err
    records = parse_csv(out.read_text(encoding="ascii"))
    assert len(records) == 6
    by_key = {(r.layer, r.backend): r for r in records}
    assert by_key[("b", "mec")].unsupported
    assert by_key[("a", "smm")].speedup_vs_im2col is not None


def test_bench_sweep_to_stdout_row_count(capsys):
    code = main(["bench", "--sweep", "out_channels", "--backends", "smm",
                 "--repeats", "3", "--threads", "2"])
    assert code == 0
    csv_text = capsys.readouterr().out
    records = parse_csv(csv_text)
    assert len(records) == 6
    assert all(r.backend == "smm" for r in records)


def test_bench_missing_config_file(capsys):
    code = main(["bench", "--config", "/nonexistent/x.cfg",
                 "--backends", "smm", "--repeats", "3"])
    assert code == 1
    assert "error:" in capsys.readouterr().err


def test_bench_bad_repeats(capsys):
    code = main(["bench", "--sweep", "out_channels", "--backends", "smm",
                 "--repeats", "2"])
    assert code == 1
    assert "repeats" in capsys.readouterr().err


def test_bench_empty_config(tmp_path, capsys):
    cfg = tmp_path / "empty.cfg"
    cfg.write_text("# only comments\n")
    code = main(["bench", "--config", str(cfg), "--backends", "smm",
                 "--repeats", "3"])
    assert code == 1
    assert "no layers" in capsys.readouterr().err
