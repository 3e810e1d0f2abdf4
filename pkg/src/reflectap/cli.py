"""Command line interface: ``reflectap {classify,solve,solve-nonlinear,verify,demo}``.

Exit codes: 0 success, 2 resonance, 3 non-contractive (also radius exceeded
and iteration limit), 4 unsupported regime, 5 parse or semantic error,
6 verification mismatch.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import kernels
from .errors import (
    InvalidGrid,
    InvalidParams,
    MaxIterations,
    NonContractive,
    ParseError,
    RadiusExceeded,
    Resonance,
    SemanticError,
    SingularSystem,
    UnsupportedCase,
)
from .grid import DEFAULT_TAIL_CUT, GridFunction, KernelSpec, green_apply, residual_grid, residual_nodes, sample
from .nonlinear import PicardConfig, picard_solve
from .problem import ProblemSpec, emit_problem, forcing_digest, parse_problem
from .spectral import EquationParams, Hyperbolic, Oscillatory, bounded_solution, case2_ivp, classify, margins
from .trigpoly import FrequencyBasis, TrigPoly
from .verify import bound_report, harmonic_balance_oracle, integrate_system, residual_polynomial, residual_spectral

EXIT_OK = 0
EXIT_RESONANCE = 2
EXIT_NONCONTRACTIVE = 3
EXIT_UNSUPPORTED = 4
EXIT_INPUT = 5
EXIT_MISMATCH = 6

FINDINGS_FIELDS = ("kind", "a", "b", "forcing", "constant", "value", "ratio", "verdict")
CSV_HEADER = "t,x,xdot,residual"

RK4_T = 10.0
RK4_H = 1e-3

EXAMPLE_2_NOTE = (
    "theorem margin |mu - lambda| is 0, yet no sine term sits at mu and the cosine term is "
    "off nu; the bounded almost periodic particular solution exists and the homogeneous "
    "family {sin(mu t), cos(nu t)} is bounded, so not every solution is unbounded"
)


def fmt(x) -> str:
    """17 significant digits, fixed across platforms."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


@dataclass(frozen=True)
class Finding:
    kind: str
    a: float
    b: float
    forcing: str
    constant: str
    value: float
    ratio: float
    verdict: str

    def line(self) -> str:
        return "\t".join(fmt(getattr(self, f)) if isinstance(getattr(self, f), float) else str(getattr(self, f)) for f in FINDINGS_FIELDS)


def findings_text(findings) -> str:
    return "# " + "\t".join(FINDINGS_FIELDS) + "\n" + "".join(f.line() + "\n" for f in findings)


@dataclass
class SolveReport:
    """Everything a run learned, rendered as ``key = value`` lines."""

    regime: str
    mode: str
    entries: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    findings: list = field(default_factory=list)
    exit_code: int = EXIT_OK
    status: str = "ok"

    def add(self, key, value):
        self.entries.append((key, value))

    def get(self, key, default=None):
        for k, v in self.entries:
            if k == key:
                return v
        return default

    def text(self) -> str:
        lines = [f"status = {self.status}", f"exit_code = {self.exit_code}", f"regime = {self.regime}", f"mode = {self.mode}"]
        lines += [f"{k} = {v if isinstance(v, str) else fmt(v)}" for k, v in self.entries]
        lines += [f"note = {n}" for n in self.notes]
        return "\n".join(lines) + "\n"


@dataclass
class RunResult:
    report: SolveReport
    csv: str | None = None
    solution: object = None

    @property
    def exit_code(self) -> int:
        return self.report.exit_code


def _csv(t, x, xdot, res) -> str:
    rows = [CSV_HEADER]
    for row in zip(t, x, xdot, res):
        rows.append(",".join(fmt(v) for v in row))
    return "\n".join(rows) + "\n"


def _rates(report: SolveReport, spec) -> None:
    if isinstance(spec, Hyperbolic):
        report.add("alpha", spec.alpha)
        report.add("beta", spec.beta)
    elif isinstance(spec, Oscillatory):
        report.add("mu", spec.mu)
        report.add("nu", spec.nu)
    elif spec.regime == "Mixed":
        report.add("real_rate", spec.real_rate)
        report.add("imag_rate", spec.imag_rate)


def _solution_entries(report: SolveReport, x: TrigPoly) -> None:
    for f, lam, A, B in x.items():
        coords = ",".join(str(c) for c in f.coords)
        report.add(f"solution[{coords}]", f"{fmt(A)} cos + {fmt(B)} sin  (lambda = {fmt(lam)})")


def _bound_findings(problem: ProblemSpec, x: TrigPoly, report: SolveReport) -> None:
    p = problem.params
    br = bound_report(p, problem.forcing, x)
    report.add("bound_ratio", br.ratio)
    report.add("bound_derived_constant", br.derived_constant)
    report.add("bound_paper_constant", br.paper_constant)
    report.add("bound_derived_holds", br.derived_holds)
    report.add("bound_paper_holds", br.paper_holds)
    dig = forcing_digest(problem.forcing)
    for name, const, ok in (("derived", br.derived_constant, br.derived_holds), ("paper", br.paper_constant, br.paper_holds)):
        report.findings.append(Finding("bound", p.a, p.b, dig, name, const, br.ratio, "holds" if ok else "violated"))
    if not br.paper_holds:
        report.notes.append(f"sup-norm ratio {fmt(br.ratio)} exceeds the constant 2/alpha+1 = {fmt(br.paper_constant)}")


def _grid_out(params, x: GridFunction, g: GridFunction) -> str:
    return _csv(x.t, x.samples, np.gradient(x.samples, x.h), residual_nodes(params, x, g))


def _run_spectral(problem: ProblemSpec, report: SolveReport, spec, with_rk4: bool) -> RunResult:
    p, g, s = problem.params, problem.forcing, problem.solver
    if isinstance(spec, Oscillatory):
        m = margins(p, g)
        report.add("theorem_margin_mu", m.theorem_margin_mu)
        report.add("theorem_margin_nu", m.theorem_margin_nu)
        report.add("sharp_margin_odd", m.sharp_margin_odd)
        report.add("sharp_margin_even", m.sharp_margin_even)
        report.add("near_resonance_warning", m.near_resonance)
    x = bounded_solution(p, g, s.resonance_tol)
    _solution_entries(report, x)
    res = residual_spectral(p, x, g)
    hb = harmonic_balance_oracle(p, g)
    agree = x.max_coefficient_difference(hb)
    report.add("spectral_residual", res)
    report.add("oracle", "harmonic_balance")
    report.add("oracle_agreement", agree)
    scale = 1.0 + g.coefficient_sum()
    ok = agree <= 1e-10 * max(1.0, x.coefficient_sum()) and res <= 1e-10 * scale

    if isinstance(spec, Oscillatory):
        m = margins(p, g)
        tol = s.resonance_tol
        if (m.theorem_margin_mu <= tol or m.theorem_margin_nu <= tol) and not g.is_zero():
            report.notes.append(EXAMPLE_2_NOTE)
            which = "theorem_margin_mu" if m.theorem_margin_mu <= tol else "theorem_margin_nu"
            report.findings.append(
                Finding(
                    "discrepancy",
                    p.a,
                    p.b,
                    forcing_digest(g),
                    which,
                    min(m.theorem_margin_mu, m.theorem_margin_nu),
                    min(m.sharp_margin_odd, m.sharp_margin_even),
                    "bounded-solution-exists",
                )
            )
        if m.near_resonance:
            report.notes.append("a parity-aware margin is below 1e-3: expect large amplification")
    elif isinstance(spec, Hyperbolic):
        _bound_findings(problem, x, report)

    solution = x
    n = round(s.T / s.h)
    t = (np.arange(2 * n + 1) - n) * s.h
    if problem.ivp is not None:
        x0, xd0 = problem.ivp
        sol = case2_ivp(p, g, x0, xd0, s.resonance_tol)
        solution = sol
        report.add("homogeneous_sin_mu", sol.sin_mu)
        report.add("homogeneous_cos_nu", sol.cos_nu)
        xv, xdv = sol.evaluate(t), sol.evaluate(t, 1)
        resv = sol.evaluate(t, 2) + p.a * xv + p.b * sol.evaluate(-t) - g.evaluate(t)
        with_rk4 = True
    else:
        xv, xdv = x.evaluate(t), x.derivative(1).evaluate(t)
        resv = residual_polynomial(p, x, g).evaluate(t)

    if with_rk4:
        x0 = solution.evaluate(0.0) if problem.ivp is None else problem.ivp[0]
        xd0 = (x.derivative(1).evaluate(0.0)) if problem.ivp is None else problem.ivp[1]
        T = RK4_T if isinstance(spec, Oscillatory) else min(RK4_T, 12.0 / max(spec.alpha, spec.beta))
        T = max(RK4_H, round(T / RK4_H) * RK4_H)
        try:
            tr = integrate_system(p, g, x0, xd0, T, RK4_H)
            ref = solution.evaluate(tr.x.t)
            rk = float(np.max(np.abs(tr.x.samples - ref)))
        except InvalidGrid:
            rk = math.inf
        report.add("rk4_window", T)
        report.add("rk4_agreement", rk)
        if isinstance(spec, Oscillatory):
            ok = ok and rk <= 1e-6 * max(1.0, float(np.max(np.abs(ref))))

    if not ok:
        report.exit_code, report.status = EXIT_MISMATCH, "verification-mismatch"
    return RunResult(report, _csv(t, xv, xdv, resv), solution)


def _run_grid(problem: ProblemSpec, report: SolveReport, tail_cut: float) -> RunResult:
    p, s = problem.params, problem.solver
    kspec = KernelSpec.for_params(p, tail_cut)
    g = sample(problem.forcing, s.T, s.h)
    x = green_apply(p, g, kspec)
    res = residual_grid(p, x, g)
    xs = bounded_solution(p, problem.forcing, s.resonance_tol)
    m = x.interior_mask()
    agree = float(np.max(np.abs(x.samples[m] - xs.evaluate(x.t[m])))) if m.any() else 0.0
    tol = 4.0 * s.h**2 * (1.0 + problem.forcing.coefficient_sum()) + x.tail_bound
    report.add("interior_halfwidth", x.interior)
    report.add("tail_bound", x.tail_bound)
    report.add("grid_residual", res)
    report.add("oracle", "spectral_solution")
    report.add("oracle_agreement", agree)
    report.add("oracle_tolerance", tol)
    if agree > tol:
        report.exit_code, report.status = EXIT_MISMATCH, "verification-mismatch"
    return RunResult(report, _grid_out(p, x, g), x)


def _run_picard(problem: ProblemSpec, report: SolveReport, tail_cut: float, start=None) -> RunResult:
    p, s, nl = problem.params, problem.solver, problem.nonlinearity
    cfg = PicardConfig(tol=s.tol, max_iter=s.max_iter, T=s.T, h=s.h, tail_cut=tail_cut)
    x, rep = picard_solve(p, nl, cfg, start)
    c = rep.contraction
    report.add("lipschitz", rep.lipschitz)
    report.add("paper_threshold", c.paper_threshold)
    report.add("derived_threshold", c.derived_threshold)
    report.add("paper_ok", c.paper_ok)
    report.add("derived_ok", c.derived_ok)
    report.add("governing", rep.governing)
    report.add("governing_rate", rep.governing_rate)
    report.add("iterations", rep.iterations)
    report.add("final_increment", rep.final_increment)
    report.add("measured_rate", rep.measured_rate)
    report.add("interior_halfwidth", x.interior)
    report.add("oracle", "grid_residual")
    report.add("oracle_agreement", rep.residual)
    report.add("oracle_tolerance", rep.residual_floor)
    if c.paper_ok != c.derived_ok:
        report.findings.append(
            Finding("contraction", p.a, p.b, forcing_digest(nl.forcing), "paper" if c.paper_ok else "derived",
                    c.paper_threshold if c.paper_ok else c.derived_threshold, rep.lipschitz, "criteria-disagree")
        )
    if not rep.residual_ok:
        report.exit_code, report.status = EXIT_MISMATCH, "verification-mismatch"
    forcing = sample(nl.forcing, s.T, s.h).samples
    g_eff = GridFunction(s.T, s.h, nl.apply(forcing, np.asarray(x.samples)), interior=x.interior)
    return RunResult(report, _grid_out(p, x, g_eff), x)


def run(problem: ProblemSpec, tail_cut: float = DEFAULT_TAIL_CUT, with_rk4: bool = False) -> RunResult:
    """Classify, solve, verify. Solver errors become exit codes on the report."""
    spec = classify(problem.params)
    report = SolveReport(regime=spec.regime, mode=problem.solver.mode)
    report.add("a", problem.params.a)
    report.add("b", problem.params.b)
    _rates(report, spec)
    report.add("backend", kernels.BACKEND)
    try:
        if problem.solver.mode == "spectral":
            return _run_spectral(problem, report, spec, with_rk4)
        if problem.solver.mode == "grid":
            return _run_grid(problem, report, tail_cut)
        return _run_picard(problem, report, tail_cut)
    except Resonance as exc:
        report.exit_code, report.status = EXIT_RESONANCE, "resonance"
        report.notes.append(str(exc))
    except SingularSystem as exc:
        report.exit_code, report.status = EXIT_RESONANCE, "resonance"
        report.notes.append(str(exc))
    except (NonContractive, RadiusExceeded, MaxIterations) as exc:
        report.exit_code, report.status = EXIT_NONCONTRACTIVE, type(exc).__name__
        report.notes.append(str(exc))
    except UnsupportedCase as exc:
        report.exit_code, report.status = EXIT_UNSUPPORTED, "unsupported"
        report.notes.append(str(exc))
    return RunResult(report)


def write_artifacts(result: RunResult, out: Path, stem: str = "solution") -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / f"{stem}.report.txt").write_text(result.report.text())
    if result.csv is not None:
        (out / f"{stem}.csv").write_text(result.csv)
    if result.report.findings:
        (out / f"{stem}.findings.tsv").write_text(findings_text(result.report.findings))


def demo_problems() -> list[tuple[str, ProblemSpec]]:
    """Two worked reflection examples and the sup-norm constant probe."""
    one = FrequencyBasis((1.0,))
    ex1 = ProblemSpec(params=EquationParams(4, 2), basis=one, forcing=TrigPoly.cos(one, (2,)))
    ex2 = ProblemSpec(params=EquationParams(2, 1), basis=one, forcing=TrigPoly.cos(one, (1,)))
    probe = ProblemSpec(params=EquationParams(-0.505, -0.495), basis=one, forcing=TrigPoly.sin(one, ("1/20",)))
    return [("example1", ex1), ("example2", ex2), ("bound_probe", probe)]


def _load(path: str) -> ProblemSpec:
    return parse_problem(Path(path).read_text(encoding="utf-8"))


def _input_error(exc) -> int:
    print(f"error: {exc}", file=sys.stderr)
    return EXIT_INPUT


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="reflectap",
        description="Bounded and almost periodic solutions of x'' + a x(t) + b x(-t) = g(t).",
        epilog="Basis generators are taken to be rationally independent; this is not checked.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("problem", help="problem file")
        if out:
            p.add_argument("--out", type=Path, help="directory for CSV, report and findings files")
            p.add_argument("--tail-cut", type=float, default=DEFAULT_TAIL_CUT, help="kernel truncation threshold")
            p.add_argument("--T", type=float, help="override the window half width")
            p.add_argument("--h", type=float, help="override the grid step")

    common(sub.add_parser("classify", help="print the regime and rates"), out=False)
    common(sub.add_parser("solve", help="solve with the mode from the problem file"))
    common(sub.add_parser("solve-nonlinear", help="Picard iteration (mode picard)"))
    common(sub.add_parser("verify", help="solve and run every applicable oracle, including RK4"))
    d = sub.add_parser("demo", help="run the worked examples and the bound probe")
    d.add_argument("--out", type=Path)
    return ap


def _override(problem: ProblemSpec, args) -> ProblemSpec:
    kw = {}
    if getattr(args, "T", None) is not None:
        kw["T"] = args.T
    if getattr(args, "h", None) is not None:
        kw["h"] = args.h
    if not kw:
        return problem
    # re-parse so that overrides pass the same validation as file values
    return parse_problem(emit_problem(replace(problem, solver=replace(problem.solver, **kw))))


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)

    if args.command == "demo":
        return _demo(args.out)

    try:
        problem = _load(args.problem)
        if args.command != "classify":
            problem = _override(problem, args)
    except (ParseError, SemanticError, InvalidParams, InvalidGrid, OSError) as exc:
        return _input_error(exc)

    if args.command == "classify":
        spec = classify(problem.params)
        r = SolveReport(regime=spec.regime, mode=problem.solver.mode)
        _rates(r, spec)
        sys.stdout.write(r.text())
        return EXIT_OK

    if args.command == "solve-nonlinear" and problem.solver.mode != "picard":
        return _input_error(SemanticError("solve-nonlinear needs mode = picard and a [nonlinearity] section"))

    result = run(problem, tail_cut=args.tail_cut, with_rk4=args.command == "verify")
    sys.stdout.write(result.report.text())
    if result.report.findings:
        sys.stdout.write(findings_text(result.report.findings))
    if args.out is not None:
        write_artifacts(result, args.out, Path(args.problem).stem)
    return result.exit_code


def _demo(out: Path | None) -> int:
    worst = EXIT_OK
    all_findings = []
    for name, problem in demo_problems():
        result = run(problem, with_rk4=True)
        print(f"== {name} ==")
        sys.stdout.write(result.report.text())
        all_findings.extend(result.report.findings)
        if out is not None:
            write_artifacts(result, out, name)
        worst = max(worst, result.exit_code)
    print("== findings ==")
    sys.stdout.write(findings_text(all_findings))
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / "findings.tsv").write_text(findings_text(all_findings))
    return worst


if __name__ == "__main__":
    sys.exit(main())
