"""Experiment drivers behind the ``growth``, ``kernel``, ``counterexample`` and ``maximal`` commands."""
from __future__ import annotations

import numpy as np

from ..errors import CapacityError
from ..families import SubsequenceFamily
from ..group import RadixSequence, expand
from ..hardy import (Atom, block_atom, build_counterexample, counterexample_coefficient, hardy_norm, random_atom,
                     select_subsequence)
from ..kernels import kernel_reports, weak_lp_norm
from ..maximal import ProbeReport, family_operator, probe_operator_norm
from ..transform import partial_sum
from .config import SuiteConfig
from .regression import RegressionStore
from .report import Report, emit
from .suites import check_counterexample, provenance, radix_tag

GROWTH_COLUMNS = ("k", "n", "low", "high", "rho", "W", "B", "W_over_B", "II_min", "II_bound", "lambda")
KERNEL_TABLE_COLUMNS = ("n", "low", "high", "rho", "l1_norm", "ratio")
PROBE_COLUMNS = ("p", "trial", "depth", "ratio", "t_norm", "hardy_norm", "outside")


def _store(config: SuiteConfig | None, store: RegressionStore | None) -> RegressionStore:
    if store is not None:
        return store
    return RegressionStore(config.regression if config is not None else None)


def _pin(report: Report, store: RegressionStore, key: str, value) -> None:
    ok, msg = store.check(key, value)
    report.constants[key] = value
    report.check(f"regression:{key}", ok, msg, {"key": key, "observed": value, "committed": store.values.get(key)})


# ---------------------------------------------------------------- divergence growth

def growth_experiment(p: float, family: SubsequenceFamily, K: int, N: int, radix: RadixSequence,
                      store: RegressionStore | None = None, config: SuiteConfig | None = None) -> Report:
    """Weak-L_p growth of ``S_{n_k} f`` on the divergence construction.

    For each selected ``n_k``: ``W_k = ||S_{n_k} f||_{p,inf}^p`` against
    ``B_k = (M_|n_k| / M_<n_k>)^{(1-p)/2}``, and the block term
    ``II = S_{n_k} f - S_{M_|n_k|} f`` checked pointwise on ``I_{<n_k>+1}(e_<n_k>)``.
    """
    store = _store(config, store)
    spec = select_subsequence(family, p, K, radix, N)
    ce = build_counterexample(spec)
    f = ce.martingale.limit
    F = ce.spectrum
    M = radix.M
    q = (1 / p - 1) / 2
    coords = radix.coordinates(N)
    report = Report("growth", provenance=provenance(config) if config else {
        "config": {"radix": list(radix.m[:N]), "resolution": N, "p": [p], "family": str(family), "K": K}})
    report.columns = GROWTH_COLUMNS
    ii_bad = []
    for k, (n, e) in enumerate(zip(spec.indices, spec.expansions())):
        Sn = partial_sum(f, n, F)
        W = weak_lp_norm(Sn, p) ** p
        B = (M[e.high] / M[e.low]) ** ((1 - p) / 2)
        II = Sn.values - partial_sum(f, M[e.high], F).values
        on = np.all(coords[:, : e.low] == 0, axis=1) & (coords[:, e.low] == 1)
        ii_min = float(np.abs(II[on]).min())
        bound = M[e.low] ** ((1 / p + 1) / 2) * M[e.high] ** q
        if ii_min < bound * (1 - 1e-9):
            ii_bad.append({"k": k, "n": n, "x_rank": int(np.flatnonzero(on)[np.argmin(np.abs(II[on]))]),
                           "value": ii_min, "bound": bound})
        report.rows.append({"k": k, "n": n, "low": e.low, "high": e.high, "rho": e.rho, "W": W, "B": B,
                            "W_over_B": W / B, "II_min": ii_min, "II_bound": bound,
                            "lambda": counterexample_coefficient(n, p, radix)})
    Ws = [r["W"] for r in report.rows]
    steps = [{"k": k + 1, "W_prev": a, "W": b} for k, (a, b) in enumerate(zip(Ws, Ws[1:])) if not b > a]
    report.check("growth.W_increasing", not steps, "W_k strictly increasing in k", {"failures": steps})
    low = min(r["W_over_B"] for r in report.rows)
    report.check("growth.W_over_B_positive", low > 0, f"min W_k / B_k = {low:.6g}", {"value": low})
    _pin(report, store, f"growth.min_W_over_B[{radix_tag(radix, N)},p={p:g},family={family},K={K}]", low)
    report.check("growth.II_lower_bound", not ii_bad, "|II| >= M_<n>^((1/p+1)/2) M_|n|^((1/p-1)/2) on the coset",
                 {"failures": ii_bad})
    check_counterexample(spec, report, 1e-9, 1e-10)
    report.constants["surrogate.indices"] = list(spec.indices)
    report.constants["surrogate.growth_ratios"] = spec.growth_ratios()
    report.constants["surrogate.tail_sum"] = spec.tail_sum()
    report.constants["surrogate.rule"] = "squared ratio (M_|n|/M_<n>)^(1-p) at least doubles"
    report.constants["hardy_norm"] = hardy_norm(f, p)
    report.constants["coefficient_sum"] = ce.decomposition.coefficient_sum(p)
    store.save()
    return report


# ---------------------------------------------------------------- kernel table

def kernel_table(N: int, radix: RadixSequence, out: str | None = None, budget: int | None = None,
                 store: RegressionStore | None = None, fmt: str = "csv") -> Report:
    """Rows ``(n, <n>, |n|, rho, ||D_n||_1, ||D_n||_1/(rho+1))`` for ``1 <= n < M_N``; max ratio in the footer."""
    M = radix.order(N)
    if budget is not None and M > budget:
        raise CapacityError(f"M_{N} = {M} exceeds the cell budget {budget}")
    store = store if store is not None else RegressionStore()
    report = Report("kernel", columns=KERNEL_TABLE_COLUMNS,
                    provenance={"config": {"radix": list(radix.m[:N]), "resolution": N}})
    best = -1.0
    for r in kernel_reports(N, radix):
        ratio = r.l1_norm / (r.rho + 1)
        best = max(best, ratio)
        report.rows.append({"n": r.n, "low": r.low, "high": r.high, "rho": r.rho, "l1_norm": r.l1_norm,
                            "ratio": ratio})
    report.constants["max_ratio"] = best
    _pin(report, store, f"kernels.l1_rho_max[{radix_tag(radix, N)}]", best)
    store.save()
    if out is not None:
        emit(report, fmt, out)
    return report


# ---------------------------------------------------------------- operator-norm probes

def structured_generator(radix: RadixSequence, N: int, p: float):
    """Half translated block-kernel atoms, half random-sign atoms, at uniformly random depth."""

    def gen(rng: np.random.Generator) -> Atom:
        if rng.random() < 0.5:
            return block_atom(radix, N, p, rng)
        return random_atom(radix, N, p, rng, real=True)

    return gen


def boundedness_probe(family: SubsequenceFamily, p: float, N: int, radix: RadixSequence, trials: int,
                      seed: int = 0) -> ProbeReport:
    return probe_operator_norm(family_operator(family), p, trials, structured_generator(radix, N, p), seed,
                               name=f"restricted_maximal[{family}]")


def boundedness_contrast(radix: RadixSequence, N_small: int, N_large: int, trials: int = 200, seed: int = 0,
                         store: RegressionStore | None = None, slack: float = 0.01) -> Report:
    """Bounded families keep their max ratio as ``N`` grows; ``Mn+1`` at ``p = 1/2`` does not."""
    store = store if store is not None else RegressionStore()
    report = Report("boundedness", provenance={"config": {"radix": list(radix.m[:N_large]), "N": [N_small, N_large],
                                                          "trials": trials, "seed": seed}})
    cases = [("Mn", 0.5), ("Mn", 1.0), ("Mn+Mprev", 0.5), ("Mn+Mprev", 1.0), ("Mn+1", 0.5)]
    for name, p in cases:
        fam = SubsequenceFamily.builtin(name)
        ratios = {}
        for N in (N_small, N_large):
            pr = boundedness_probe(fam, p, N, radix, trials, seed)
            ratios[N] = pr.max_ratio
            if name != "Mn+1":
                _pin(report, store, f"probe.max_ratio[{radix_tag(radix, N)},family={name},p={p:g},"
                                    f"trials={trials},seed={seed}]", pr.max_ratio)
            else:
                report.constants[f"probe.max_ratio[{radix_tag(radix, N)},family={name},p={p:g}]"] = pr.max_ratio
        small, large = ratios[N_small], ratios[N_large]
        if name == "Mn+1":
            report.check(f"probe.grows[{name},p={p:g}]", large >= 2 * small,
                         f"N={N_small}: {small:.6g}, N={N_large}: {large:.6g}", {"small": small, "large": large})
        else:
            report.check(f"probe.stable[{name},p={p:g}]", large <= small * (1 + slack),
                         f"N={N_small}: {small:.6g}, N={N_large}: {large:.6g}", {"small": small, "large": large})
    store.save()
    return report


def maximal_report(config: SuiteConfig, store: RegressionStore | None = None) -> Report:
    """Probe rows for ``restricted_maximal`` over the configured family at each configured ``p``."""
    store = _store(config, store)
    family = SubsequenceFamily.parse(config.family)
    report = Report("maximal", columns=PROBE_COLUMNS, provenance=provenance(config))
    for p in config.p_values:
        pr = boundedness_probe(family, p, config.resolution, config.radix, config.trials, config.seed)
        for row in pr.rows:
            report.rows.append({"p": p, **row})
        ok = all(row["ratio"] <= pr.max_ratio for row in pr.rows)
        report.check(f"maximal.max_dominates[p={p:g}]", ok, f"max ratio {pr.max_ratio:.6g}", pr.argmax)
        report.constants[f"max_ratio[p={p:g}]"] = pr.max_ratio
        report.constants[f"skipped[p={p:g}]"] = pr.skipped
        report.constants[f"max_outside[p={p:g}]"] = pr.max_outside
        report.extra.setdefault("probes", []).append(
            {k: v for k, v in pr.as_dict().items() if k != "rows"})
    report.constants["rho_sup"] = max(
        (expand(a, config.radix).rho for a in family.members(config.radix, limit=config.cells - 1)), default=0)
    return report


# ---------------------------------------------------------------- counterexample

def counterexample_report(config: SuiteConfig) -> Report:
    """Selected indices, the lambda_k table and the spectrum blocks of the divergence construction."""
    p = next((v for v in config.p_values if 0 < v < 1), config.p_values[0])
    family = SubsequenceFamily.parse(config.family)
    spec = select_subsequence(family, p, config.K or 3, config.radix, config.resolution)
    ce = build_counterexample(spec)
    M = config.radix.M
    report = Report("counterexample", provenance=provenance(config))
    report.columns = ("k", "n", "low", "high", "lambda", "block_start", "block_stop", "coefficient", "growth_ratio")
    ratios = spec.growth_ratios()
    for k, (n, e) in enumerate(zip(spec.indices, spec.expansions())):
        block = ce.spectrum.values[M[e.high] : M[e.high + 1]]
        report.rows.append({"k": k, "n": n, "low": e.low, "high": e.high,
                            "lambda": ce.decomposition.coefficients[k], "block_start": M[e.high],
                            "block_stop": M[e.high + 1], "coefficient": float(block.real.mean()),
                            "growth_ratio": ratios[k]})
    check_counterexample(spec, report, config.tol["spectrum"], config.tol["atom"])
    report.extra["spec"] = {"p": p, "indices": list(spec.indices), "resolution": spec.resolution,
                            "radix": list(config.radix.m[: spec.resolution]), "family": str(family)}
    report.constants["tail_sum"] = spec.tail_sum()
    report.constants["coefficient_sum"] = ce.decomposition.coefficient_sum(p)
    report.constants["hardy_norm"] = hardy_norm(ce.martingale.limit, p)
    report.constants["nonzero_outside_blocks"] = int(
        np.count_nonzero(np.abs(ce.spectrum.values) > 1e-9) - sum(M[e.high] * (config.radix.m[e.high] - 1)
                                                                   for e in spec.expansions()))
    return report

