import runpy
from pathlib import Path

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


def test_benchmark_smoke(capsys):
    mod = runpy.run_path(str(BENCH))
    mod["main"](["--quick", "--repeat", "1"])
    out = capsys.readouterr().out
    assert "exp_convolve" in out and "rk4_sweep" in out
