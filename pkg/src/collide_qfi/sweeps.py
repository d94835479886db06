"""Grid evaluation over (nbar, gamma_tau_se) and the scalar claim suite."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import qmat
from .channels import Interaction, ModelParams
from .collision import AncillaBlock, FixedPointError
from .fisher import fisher_for, thermal_fi_nbar
from .optimize import optimize_b1, optimize_b2
from .zz_analytic import zz_delta, zz_fn

QUANTITIES = ("qfi", "ratio_thermal", "ratio_per_copy", "theta_opt", "delta_zz")

KET_G = qmat.KET_G
KET_PLUS_X = qmat.KET_PLUS_X


@dataclass(frozen=True)
class SweepConfig:
    nbar_grid: tuple
    gamma_tau_grid: tuple
    interaction: Interaction
    block: object  # AncillaBlock, "optimize-b1", or "optimize-b2"
    n_measured: int
    quantities: tuple
    g_tau_sa: float = math.pi / 2

    def __post_init__(self):
        for name in ("nbar_grid", "gamma_tau_grid"):
            grid = tuple(float(x) for x in getattr(self, name))
            if not grid:
                raise ValueError(f"{name} is empty")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError(f"{name} must be strictly increasing")
            object.__setattr__(self, name, grid)
        object.__setattr__(self, "quantities", tuple(self.quantities))
        for q in self.quantities:
            if q not in QUANTITIES:
                raise ValueError(f"unknown quantity {q!r}")
        if isinstance(self.block, str) and self.block not in (
                "optimize-b1", "optimize-b2"):
            raise ValueError(f"unknown block spec {self.block!r}")


@dataclass(frozen=True)
class SweepRow:
    nbar: float
    gamma_tau: float
    values: dict
    status: str = "ok"


def default_grids():
    """Log-spaced grids covering the parameter ranges of the reference figures."""
    return (tuple(np.logspace(-1, 1, 41)),
            tuple(np.logspace(-2, math.log10(3.0), 41)))


def _eval_point(config: SweepConfig, nbar: float, gamma_tau: float,
                seed: int) -> SweepRow:
    params = ModelParams(nbar=nbar, gamma_tau_se=gamma_tau,
                         g_tau_sa=config.g_tau_sa,
                         interaction=config.interaction)
    n = config.n_measured
    values = {}
    try:
        if config.block == "optimize-b1":
            opt = optimize_b1(params, n)
            value = opt.value_nbar
            values["theta_opt"] = opt.argmax.theta
            if "ratio_per_copy" in config.quantities:
                base = opt.value_nbar if n == 1 else optimize_b1(params, 1).value_nbar
                values["ratio_per_copy"] = value / (n * base)
        elif config.block == "optimize-b2":
            opt = optimize_b2(params, n, seed=seed)
            value = opt.value_nbar
            if "ratio_per_copy" in config.quantities:
                base = opt.value_nbar if n == 2 else optimize_b2(params, 2, seed=seed).value_nbar
                values["ratio_per_copy"] = value / ((n // 2) * base)
        else:
            block = config.block
            value = fisher_for(params, block, n).value_nbar
            base_b = block.b
            if "ratio_per_copy" in config.quantities:
                base = value if n == base_b else fisher_for(params, block, base_b).value_nbar
                values["ratio_per_copy"] = value / ((n // base_b) * base)
        values["qfi"] = value
        if "ratio_thermal" in config.quantities:
            values["ratio_thermal"] = value / (n * thermal_fi_nbar(nbar))
        if "delta_zz" in config.quantities:
            values["delta_zz"] = zz_delta(nbar, gamma_tau) / thermal_fi_nbar(nbar)
        out = {q: values.get(q, math.nan) for q in config.quantities}
        return SweepRow(nbar=nbar, gamma_tau=gamma_tau, values=out)
    except FixedPointError:
        out = {q: math.nan for q in config.quantities}
        return SweepRow(nbar=nbar, gamma_tau=gamma_tau, values=out,
                        status="degenerate")
    except (ValueError, RuntimeError) as exc:
        out = {q: math.nan for q in config.quantities}
        return SweepRow(nbar=nbar, gamma_tau=gamma_tau, values=out,
                        status=type(exc).__name__)


def run_sweep(config: SweepConfig, seed: int = 0, threads: int = 1):
    """Evaluate every grid point; row order follows the grid regardless of
    evaluation order."""
    points = [(nb, gt) for nb in config.nbar_grid for gt in config.gamma_tau_grid]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(
                lambda p: _eval_point(config, p[0], p[1], seed), points))
    else:
        rows = [_eval_point(config, nb, gt, seed) for nb, gt in points]
    return rows


# ---------------------------------------------------------------------------
# Scalar claim suite
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClaimResult:
    name: str
    description: str
    expected: float
    measured: float
    tolerance: float
    passed: bool
    comparison: str = "abs"  # abs | rel | lower-bound | upper-bound


@dataclass(frozen=True)
class ClaimReport:
    results: tuple

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)


def _abs_claim(name, desc, expected, measured, tol):
    return ClaimResult(name, desc, expected, measured, tol,
                       abs(measured - expected) <= tol, "abs")


def _rel_claim(name, desc, expected, measured, tol):
    ok = abs(measured - expected) <= tol * abs(expected)
    return ClaimResult(name, desc, expected, measured, tol, ok, "rel")


def _lower_bound_claim(name, desc, bound, measured):
    return ClaimResult(name, desc, bound, measured, 0.0,
                       measured >= bound, "lower-bound")


def _plusx_block() -> AncillaBlock:
    return AncillaBlock(b=1, psi=KET_PLUS_X)


def _ground_block() -> AncillaBlock:
    return AncillaBlock(b=1, psi=KET_G)


def _maximize_1d(f, lo, hi, coarse=25, tol=1e-4, log=True):
    """Deterministic 1-D maximization: coarse grid plus bounded refinement."""
    if log:
        xs = np.logspace(math.log10(lo), math.log10(hi), coarse)
    else:
        xs = np.linspace(lo, hi, coarse)
    vals = [f(x) for x in xs]
    i = int(np.argmax(vals))
    a = xs[max(i - 1, 0)]
    b = xs[min(i + 1, coarse - 1)]
    res = minimize_scalar(lambda x: -f(x), bounds=(a, b), method="bounded",
                          options={"xatol": tol})
    if -res.fun >= vals[i]:
        return float(res.x), float(-res.fun)
    return float(xs[i]), float(vals[i])


def _claims_zz_angle():
    params0 = dict(nbar=1.0, gamma_tau_se=0.5, interaction=Interaction.ZZ)
    expected = {0.0: 0.0, math.pi / 4: 0.5, math.pi / 2: 1.0}
    out = []
    for i, (g_tau, exp) in enumerate(expected.items()):
        params = ModelParams(g_tau_sa=g_tau, **params0)
        r = fisher_for(params, _plusx_block(), 1).ratio_thermal
        out.append(_abs_claim(
            f"zz-angle-{i}",
            f"single-ancilla |+x> FI ratio at collision angle {g_tau:.6g}",
            exp, r, 1e-6))
    return out


def _claims_zz_progression():
    worst = 0.0
    for nbar in (0.2, 1.0, 5.0, 10.0):
        for gt in (0.1, 0.5, 2.0):
            params = ModelParams(nbar=nbar, gamma_tau_se=gt,
                                 interaction=Interaction.ZZ)
            for n in range(1, 5):
                closed = zz_fn(nbar, gt, n)
                numeric = fisher_for(params, _plusx_block(), n).value_nbar
                worst = max(worst, abs(numeric - closed) / closed)
    return [ClaimResult(
        "zz-progression",
        "numeric N-ancilla QFI vs arithmetic-progression closed form, "
        "worst relative deviation over a 12-point grid, N=1..4",
        0.0, worst, 1e-5, worst <= 1e-5, "upper-bound")]


def _claims_zz_delta_max():
    nbar = 10.0
    fth = thermal_fi_nbar(nbar)
    _, val = _maximize_1d(lambda gt: zz_delta(nbar, gt) / fth, 1e-3, 5.0)
    return [_rel_claim("zz-delta-max",
                       "max over gamma_tau of Delta/F_th at nbar=10",
                       71.8, val, 0.01)]


def _claims_exchange_opt11():
    nbar = 10.0
    fth = thermal_fi_nbar(nbar)

    def f(gt):
        params = ModelParams(nbar=nbar, gamma_tau_se=gt,
                             interaction=Interaction.EXCHANGE)
        return optimize_b1(params, 1).value_nbar / fth

    _, val = _maximize_1d(f, 0.01, 3.0, coarse=21, tol=1e-3)
    return [_rel_claim("exchange-opt-1-1",
                       "max over gamma_tau of single-ancilla optimal QFI ratio "
                       "at nbar=10",
                       77.3, val, 0.01)]


def _claims_ground_small_gt():
    params = ModelParams(nbar=10.0, gamma_tau_se=0.04,
                         interaction=Interaction.EXCHANGE)
    r = fisher_for(params, _ground_block(), 1).ratio_thermal
    return [_lower_bound_claim("exchange-ground-small-coupling",
                               "|g>-ancilla FI ratio at nbar=10, gamma_tau=0.04",
                               95.0, r)]


def _claims_exchange_collective():
    nbar = 10.0
    fth = thermal_fi_nbar(nbar)
    cache = {}

    def opts(gt):
        if gt not in cache:
            params = ModelParams(nbar=nbar, gamma_tau_se=gt,
                                 interaction=Interaction.EXCHANGE)
            cache[gt] = (optimize_b1(params, 1).value_nbar,
                         optimize_b1(params, 2).value_nbar)
        return cache[gt]

    def ratio(gt):
        f1, f2 = opts(gt)
        return f2 / (2.0 * f1)

    gt_star, val = _maximize_1d(ratio, 0.1, 0.6, coarse=11, tol=1e-3, log=False)
    _, f2 = opts(gt_star)
    return [
        _rel_claim("exchange-collective-ratio",
                   "max over gamma_tau of F_opt(2,1)/2F_opt(1,1) at nbar=10",
                   1.65, val, 0.02),
        _abs_claim("exchange-collective-location",
                   "gamma_tau at which the N=2 collective advantage peaks",
                   0.26, gt_star, 0.05),
        _rel_claim("exchange-collective-thermal",
                   "F_opt(2,1)/2F_th at the collective-advantage peak",
                   3.6, f2 / (2.0 * fth), 0.03),
    ]


def _claims_ground_additivity():
    worst = 0.0
    for nbar in (0.5, 2.0, 10.0):
        for gt in (0.1, 1.0):
            params = ModelParams(nbar=nbar, gamma_tau_se=gt,
                                 interaction=Interaction.EXCHANGE)
            f1 = fisher_for(params, _ground_block(), 1).value_nbar
            for n in (2, 3, 4):
                fn = fisher_for(params, _ground_block(), n).value_nbar
                worst = max(worst, abs(fn - n * f1) / (n * f1))
    return [ClaimResult(
        "exchange-ground-additivity",
        "F_N = N*F_1 for |g> ancillas, worst relative deviation over 6 points, "
        "N=2..4",
        0.0, worst, 1e-6, worst <= 1e-6, "upper-bound")]


def _product_blocks():
    gg = np.kron(KET_G, KET_G)
    xg = np.kron(KET_PLUS_X, KET_G)
    gx = np.kron(KET_G, KET_PLUS_X)
    return [AncillaBlock(b=2, psi=p) for p in (gg, xg, gx)]


def _claims_b2_products(seed: int = 0):
    worst_ratio = math.inf
    worst_r = math.inf
    for nbar in (1.0, 10.0 ** 0.5, 10.0):
        for gt in (0.1, 10.0 ** -0.5, 1.0):
            params = ModelParams(nbar=nbar, gamma_tau_se=gt,
                                 interaction=Interaction.EXCHANGE)
            opt = optimize_b2(params, 2, seed=seed)
            best_product = max(fisher_for(params, blk, 2).value_nbar
                               for blk in _product_blocks())
            worst_ratio = min(worst_ratio, best_product / opt.value_nbar)
            worst_r = min(worst_r, opt.argmax.r)
    return [
        _lower_bound_claim("b2-product-near-optimal",
                           "worst best-product-state fraction of the b=2 "
                           "optimum over a 9-point grid",
                           0.90, worst_ratio),
        _lower_bound_claim("b2-optimum-uncorrelated",
                           "smallest Schmidt weight r of the b=2 optimum over "
                           "the same grid",
                           0.9999, worst_r),
    ]


def _claims_low_temperature_threshold(seed: int = 0):
    gt = 1.0

    def excess(nbar):
        params = ModelParams(nbar=nbar, gamma_tau_se=gt,
                             interaction=Interaction.EXCHANGE)
        # 16 random starts keep each call cheap; the seeded corners still
        # cover the known optima at these parameters.
        opt = optimize_b2(params, 2, seed=seed, n_random_starts=16)
        return opt.value_nbar / (2.0 * thermal_fi_nbar(nbar)) - 1.0

    lo, hi = 0.14, 0.26
    f_lo, f_hi = excess(lo), excess(hi)
    if not (f_lo < 0 < f_hi):
        return [ClaimResult("b2-low-temperature-threshold",
                            "bracket for the nbar threshold where the b=N=2 "
                            "optimum meets twice the thermal FI at gamma_tau=1",
                            0.189, math.nan, 0.05, False, "rel")]
    # Four halvings of the 0.12-wide bracket put the midpoint within ~2%
    # of the crossing, inside the 5% tolerance.
    for _ in range(4):
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
    threshold = 0.5 * (lo + hi)
    return [_rel_claim("b2-low-temperature-threshold",
                       "nbar threshold where the b=N=2 optimum meets twice the "
                       "thermal FI at gamma_tau=1",
                       0.189, threshold, 0.05)]


def claim_suite(seed: int = 0) -> ClaimReport:
    """Run every scalar regression check and collect pass/fail results."""
    results = []
    results += _claims_zz_angle()
    results += _claims_zz_progression()
    results += _claims_zz_delta_max()
    results += _claims_exchange_opt11()
    results += _claims_ground_small_gt()
    results += _claims_exchange_collective()
    results += _claims_ground_additivity()
    results += _claims_b2_products(seed)
    results += _claims_low_temperature_threshold(seed)
    return ClaimReport(results=tuple(results))


def render_report(report: ClaimReport) -> str:
    lines = []
    for r in report.results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(
            f"[{status}] {r.name}: expected {r.expected:.12g} "
            f"measured {r.measured:.12g} tol {r.tolerance:.12g} "
            f"({r.comparison}) -- {r.description}")
    n_pass = sum(r.passed for r in report.results)
    lines.append(f"{n_pass}/{len(report.results)} checks passed")
    return "\n".join(lines) + "\n"
