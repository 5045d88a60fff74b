"""Verification suites: one invariant battery per module, each returning a :class:`Report`.

Every suite is a pure function of its config and seed.  Empirical constants
go through the regression store under keys that embed the configuration, so
a different radix or resolution never collides with a pinned value.
"""
from __future__ import annotations

import math
import platform
from fractions import Fraction
from importlib import metadata

import numpy as np

from ..errors import CapacityError, DomainError, UsageError
from ..families import SubsequenceFamily
from ..group import (GroupPoint, Interval, RadixSequence, add, annulus, annulus_index, expand, neg, rank,
                     unrank)
from ..hardy import (AtomicDecomposition, assemble, build_counterexample,
                     closed_form_spectrum, condexp, hardy_norm, random_atom, random_decomposition,
                     select_subsequence, validate_atom)
from ..kernels import (dirichlet_block, dirichlet_closed, dirichlet_direct, dirichlet_table, iter_dirichlet,
                       lemma2_scan, lemma3_minorant_check, local_kernel_integral, weak_lp_norms)
from ..system import character_rows, rademacher, rademacher_run_modulus, vilenkin
from ..transform import (CylinderFunction, forward, inverse, partial_sum, partial_sum_blocks,
                         partial_sum_via_kernel)
from .config import SuiteConfig
from .oracles import naive_characters, naive_forward
from .regression import RegressionStore
from .report import Report

# Cayley tables through the point API up to M_N^2 entries; sampled triples beyond
CAYLEY_LIMIT = 65536
# dense (M+1) x M kernel tables and M x M convolution tables only up to this M
DENSE_LIMIT = 2048


def radix_tag(radix: RadixSequence, N: int) -> str:
    return f"m={','.join(map(str, radix.m[:N]))},N={N}"


def provenance(config: SuiteConfig) -> dict:
    try:
        version = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        version = "unknown"
    return {
        "config": config.echo(),
        "seed": config.seed,
        "versions": {"artifact": version, "numpy": np.__version__, "python": platform.python_version()},
    }


def random_function(radix: RadixSequence, N: int, rng: np.random.Generator, real: bool = False) -> CylinderFunction:
    M = radix.M[N]
    vals = rng.standard_normal(M)
    if not real:
        vals = vals + 1j * rng.standard_normal(M)
    return CylinderFunction(radix, N, vals)


def _pin(report: Report, store: RegressionStore, key: str, value: float | int) -> None:
    ok, msg = store.check(key, value)
    report.constants[key] = value
    report.check(f"regression:{key}", ok, msg, {"key": key, "observed": value, "committed": store.values.get(key)})


# ---------------------------------------------------------------- group

def suite_group(config: SuiteConfig, store: RegressionStore, report: Report) -> None:
    radix, N = config.radix, config.resolution
    M = radix.M[N]
    rng = np.random.default_rng(config.seed)

    ranks = np.arange(M)
    round_trip = [r for r in ranks if rank(unrank(int(r), N, radix)) != r]
    report.check("group.rank_bijection", not round_trip, f"{M} ranks", {"ranks": round_trip[:5]})

    points = [unrank(t, N, radix) for t in range(M)]
    zero = GroupPoint.zero(N, radix)

    bad = []
    for i, x in enumerate(points):
        if add(x, zero) != x or add(x, neg(x)) != zero or x - x != zero:
            bad.append({"x": i})
    report.check("group.identity_inverse", not bad, f"{M} points", {"failures": bad[:5]})

    # Cayley table through the point API, then every pair and triple checked on the table
    if M * M <= CAYLEY_LIMIT:
        table = np.array([[rank(add(x, y)) for y in points] for x in points])
        comm = np.argwhere(table != table.T)
        report.check("group.commutative", comm.size == 0, f"exhaustive over {M * M} pairs",
                     {"pairs": comm[:5].tolist()})
        bad = []
        for i in range(M):
            lhs = table[table[i]]  # (x_i + x_j) + x_k at [j, k]
            rhs = table[i][table]  # x_i + (x_j + x_k) at [j, k]
            hit = np.argwhere(lhs != rhs)
            if hit.size:
                bad.append({"x": i, "y": int(hit[0, 0]), "z": int(hit[0, 1])})
        report.check("group.associative", not bad, f"exhaustive over {M ** 3} triples", {"failures": bad[:5]})
    else:
        draws = rng.integers(0, M, size=(CAYLEY_LIMIT // 8, 3))
        bad = []
        for i, j, k in draws:
            x, y, z = points[i], points[j], points[k]
            if add(x, y) != add(y, x) or add(add(x, y), z) != add(x, add(y, z)):
                bad.append({"x": int(i), "y": int(j), "z": int(k)})
        report.check("group.commutative", not bad, f"{len(draws)} sampled triples", {"failures": bad[:5]})
        report.check("group.associative", not bad, f"{len(draws)} sampled triples", {"failures": bad[:5]})

    # intervals: I_n(x) holds M_N/M_n points, nests, and the cosets partition the group
    bad = []
    for n in range(N + 1):
        masks = [Interval(points[int(t)], n).mask(N) for t in range(radix.M[n])]
        counts = np.sum(masks, axis=0)
        sizes = {int(m.sum()) for m in masks}
        if sizes != {M // radix.M[n]} or not np.all(counts == 1):
            bad.append({"n": n, "sizes": sorted(sizes)})
        if Interval(zero, n).measure() != Fraction(1, radix.M[n]):
            bad.append({"n": n, "measure": str(Interval(zero, n).measure())})
        if n < N and np.any(Interval(zero, n + 1).mask(N) & ~Interval(zero, n).mask(N)):
            bad.append({"n": n, "nesting": False})
    report.check("group.interval_partition", not bad, f"levels 0..{N}", {"failures": bad})

    s_of = annulus_index(radix, N)
    bad = []
    for s in range(N):
        expected = M // radix.M[s] - M // radix.M[s + 1]
        listed = sorted(rank(x) for x in annulus(s, N, radix)) if M <= 4096 else None
        if int(np.sum(s_of == s)) != expected or (listed is not None and listed != list(np.flatnonzero(s_of == s))):
            bad.append({"s": s, "count": int(np.sum(s_of == s)), "expected": expected})
    report.check("group.annulus_partition", not bad, f"annuli 0..{N - 1}", {"failures": bad})
    total = sum((Fraction(1, radix.M[s]) - Fraction(1, radix.M[s + 1]) for s in range(N)), Fraction(0))
    report.check("group.annulus_measure", total == 1 - Fraction(1, M), f"sum of annulus measures = {total}",
                 {"sum": str(total)})


# ---------------------------------------------------------------- system

def suite_system(config: SuiteConfig, store: RegressionStore, report: Report) -> None:
    radix, N = config.radix, config.resolution
    M = radix.M[N]
    tol = config.tol["character"]
    rng = np.random.default_rng(config.seed)

    worst, where = 0.0, None
    for start in range(0, M, 256):
        rows = character_rows(np.arange(start, min(start + 256, M)), radix, N)
        block = rows.conj() @ character_rows(np.arange(M), radix, N).T / M if M <= 1024 else None
        if block is None:
            block = np.empty((len(rows), M), dtype=np.complex128)
            for c in range(0, M, 1024):
                block[:, c : c + 1024] = rows.conj() @ character_rows(np.arange(c, min(c + 1024, M)), radix, N).T / M
        block[np.arange(len(rows)), np.arange(start, start + len(rows))] -= 1
        err = np.abs(block)
        if err.max() > worst:
            i, j = np.unravel_index(int(np.argmax(err)), err.shape)
            worst, where = float(err.max()), {"n": start + int(i), "k": int(j)}
    report.check("system.orthonormal", worst <= tol, f"max |<psi_n, psi_k> - delta| = {worst:.3e}", where)

    ns = np.arange(M) if M <= 1024 else np.sort(rng.choice(M, 256, replace=False))
    err = 0.0
    for start in range(0, len(ns), 256):
        chunk = ns[start : start + 256]
        err = max(err, float(np.abs(character_rows(chunk, radix, N) - naive_characters(chunk, radix, N)).max()))
    report.check("system.matches_float_oracle", err <= tol, f"{len(ns)} rows, max error {err:.3e}", {"error": err})

    # psi_n(x + y) = psi_n(x) psi_n(y): exhaustive for M_N <= 128, sampled beyond
    table = character_rows(np.arange(M), radix, N) if M <= 1024 else None
    if M <= 128:
        xs = np.repeat(np.arange(M), M)
        ys = np.tile(np.arange(M), M)
    else:
        xs, ys = rng.integers(0, M, 2000), rng.integers(0, M, 2000)
    coords, m = radix.coordinates(N), np.asarray(radix.m[:N])
    sums = ((coords[xs] + coords[ys]) % m) @ np.asarray(radix.M[:N])
    spot = [rank(add(unrank(int(x), N, radix), unrank(int(y), N, radix))) for x, y in zip(xs[:200], ys[:200])]
    worst, where = 0.0, None
    for start in range(0, M, 64):
        ns = np.arange(start, min(start + 64, M))
        rows = table[ns] if table is not None else character_rows(ns, radix, N)
        err = np.abs(rows[:, sums] - rows[:, xs] * rows[:, ys])
        if err.max() > worst:
            i, j = np.unravel_index(int(np.argmax(err)), err.shape)
            worst, where = float(err.max()), {"n": int(ns[i]), "x": int(xs[j]), "y": int(ys[j])}
    report.check("system.character_homomorphism", worst <= tol and spot == list(sums[:200]),
                 f"{'exhaustive' if M <= 128 else 'sampled'} over {len(xs)} pairs, max error {worst:.3e}", where)

    # psi_n psi_k = psi_{n (+) k} with digitwise addition
    bad = []
    for _ in range(200):
        n, k = (int(v) for v in rng.integers(0, M, 2))
        dn, dk = radix.digits_array([n, k], N)
        s = int(((dn + dk) % np.asarray(radix.m[:N])) @ np.asarray(radix.M[:N]))
        lhs = character_rows([n], radix, N)[0] * character_rows([k], radix, N)[0]
        if np.abs(lhs - character_rows([s], radix, N)[0]).max() > tol:
            bad.append({"n": n, "k": k})
    report.check("system.multiplicative", not bad, "200 random pairs", {"failures": bad[:5]})

    # point evaluation agrees with the table; products of Rademacher powers
    bad = []
    table_rows = rng.integers(0, M, 50)
    for n in table_rows:
        x = unrank(int(rng.integers(0, M)), N, radix)
        digits = expand(int(n), radix).digits if n else ()
        prod = complex(np.prod([rademacher(j, x) ** d for j, d in enumerate(digits)])) if n else 1.0
        if abs(vilenkin(int(n), x) - prod) > tol or abs(character_rows([int(n)], radix, N)[0][rank(x)] - prod) > tol:
            bad.append({"n": int(n), "x": rank(x)})
    report.check("system.rademacher_product", not bad, "50 random (n, x)", {"failures": bad[:5]})

    # |sum_{u<s} r_k^u(x)| equals the sine ratio (s when x_k = 0)
    worst, where = 0.0, None
    xs = range(M) if M <= 256 else rng.integers(0, M, 256)
    for t in xs:
        x = unrank(int(t), N, radix)
        for k in range(N):
            r = rademacher(k, x)
            for s in range(1, radix.m[k] + 1):
                direct = abs(sum(r ** u for u in range(s)))
                e = abs(direct - rademacher_run_modulus(k, s, x))
                if e > worst:
                    worst, where = e, {"x": int(t), "k": k, "s": s}
    report.check("system.sine_ratio", worst <= 1e-12, f"max error {worst:.3e}", where)
    low = min(math.sin(math.pi * s / mk) / math.sin(math.pi / mk) for mk in set(radix.m[:N]) for s in range(1, mk))
    report.check("system.sine_ratio_at_least_one", low >= 1 - 1e-12, f"min over x_k = 1, s < m_k: {low:.6g}",
                 {"min": low})


# ---------------------------------------------------------------- transform

def suite_transform(config: SuiteConfig, store: RegressionStore, report: Report) -> None:
    radix, N = config.radix, config.resolution
    M = radix.M[N]
    tol = config.tol["transform"]
    rng = np.random.default_rng(config.seed)
    fs = [random_function(radix, N, rng) for _ in range(config.trials)]

    stack = np.stack([f.values for f in fs], axis=1)
    naive = naive_forward(stack, radix, N)
    fast = np.stack([forward(f).values for f in fs], axis=1)
    err = np.abs(fast - naive).max(axis=0)
    worst = int(np.argmax(err))
    report.check("transform.matches_naive", err.max() <= tol, f"{len(fs)} functions, max error {err.max():.3e}",
                 {"trial": worst, "error": float(err[worst])})

    rt = [float(np.abs(inverse(forward(f)).values - f.values).max()) for f in fs]
    report.check("transform.round_trip", max(rt) <= tol, f"max error {max(rt):.3e}",
                 {"trial": int(np.argmax(rt)), "error": max(rt)})

    pl = [abs(np.mean(np.abs(f.values) ** 2) - np.sum(np.abs(forward(f).values) ** 2)) / np.mean(np.abs(f.values) ** 2)
          for f in fs]
    report.check("transform.plancherel", max(pl) <= config.tol["plancherel"], f"max relative error {max(pl):.3e}",
                 {"trial": int(np.argmax(pl))})

    # partial sums: truncated spectrum == running character sums == group convolution with D_n
    f = fs[0]
    F = forward(f)
    ns = sorted({1, 2, M // 2, M - 1, M} | {int(v) for v in rng.integers(1, M + 1, 5)})
    running = {}
    for n0, block in partial_sum_blocks(f):
        for n in ns:
            if n0 <= n < n0 + len(block):
                running[n] = block[n - n0]
    err = max(float(np.abs(partial_sum(f, n, F).values - running[n]).max()) for n in ns)
    report.check("transform.partial_sum_running", err <= tol, f"n in {ns}, max error {err:.3e}", {"error": err})
    if M <= DENSE_LIMIT:
        err = max(float(np.abs(partial_sum(f, n, F).values - partial_sum_via_kernel(f, n).values).max()) for n in ns[:4])
        report.check("transform.partial_sum_convolution", err <= 1e-9, f"max error {err:.3e}", {"error": err})

    worst, where = 0.0, None
    for i, g in enumerate(fs):
        G = forward(g)
        for n in range(N + 1):
            e = float(np.abs(condexp(g, n).values - partial_sum(g, radix.M[n], G).values).max())
            if e > worst:
                worst, where = e, {"trial": i, "n": n}
    report.check("transform.condexp_identity", worst <= config.tol["condexp"],
                 f"E_n f == S_(M_n) f, n = 0..{N}, max error {worst:.3e}", where)


# ---------------------------------------------------------------- kernels

def kernel_norm_ratio(radix: RadixSequence, N: int) -> tuple[float, int, dict[int, float]]:
    """``max_{1 <= n < M_N} ||D_n||_1 / (rho(n) + 1)``, its argmax, and every ``||D_n||_1``."""
    best, arg, norms = -1.0, 0, {}
    for n, row in iter_dirichlet(N, radix):
        l1 = float(np.abs(row).mean())
        norms[n] = l1
        r = l1 / (expand(n, radix).rho + 1)
        if r > best:
            best, arg = r, n
    return best, arg, norms


def suite_kernels(config: SuiteConfig, store: RegressionStore, report: Report) -> None:
    radix, N = config.radix, config.resolution
    M = radix.M[N]
    tol = config.tol["kernel"]
    tag = radix_tag(radix, N)

    worst, where = 0.0, None
    for n, row in iter_dirichlet(N, radix):
        e = float(np.abs(row - dirichlet_closed(n, N, radix).values).max())
        if e > worst:
            worst, where = e, {"n": n}
    top = dirichlet_direct(M, N, radix).values
    e = float(np.abs(top - dirichlet_closed(M, N, radix).values).max())
    if e > worst:
        worst, where = e, {"n": M}
    report.check("kernels.direct_vs_closed", worst < tol, f"1 <= n <= {M}, max error {worst:.3e}", where)

    worst, leak, where = 0.0, 0.0, None
    for k in range(N + 1):
        block = dirichlet_block(k, N, radix).values
        direct = dirichlet_direct(radix.M[k], N, radix).values
        closed = dirichlet_closed(radix.M[k], N, radix).values
        e = max(float(np.abs(block - direct).max()), float(np.abs(block - closed).max()))
        leak = max(leak, float(np.abs(direct[block == 0]).max(initial=0.0)))
        if e > worst:
            worst, where = e, {"k": k}
    report.check("kernels.block_formula", worst < tol, f"D_(M_k) == M_k 1_(I_k), k = 0..{N}, max error {worst:.3e}",
                 where)
    report.check("kernels.block_support", leak <= 1e-11, f"max |D_(M_k)| off I_k = {leak:.3e}", {"leak": leak})

    ratio, arg, norms = kernel_norm_ratio(radix, N)
    _pin(report, store, f"kernels.l1_rho_max[{tag}]", ratio)
    report.constants[f"kernels.l1_rho_argmax[{tag}]"] = arg
    bad = []
    for name in ("Mn", "Mn+Mprev"):
        fam = SubsequenceFamily.builtin(name)
        members = fam.members(radix, limit=M - 1)
        rho_sup = max((expand(a, radix).rho for a in members), default=0)
        for a in members:
            if norms[a] > ratio * (rho_sup + 1) * (1 + 1e-12):
                bad.append({"family": name, "n": a, "l1": norms[a], "bound": ratio * (rho_sup + 1)})
    report.check("kernels.family_bound", not bad, "||D_(alpha_k)||_1 <= c (rho_sup + 1) for Mn, Mn+Mprev",
                 {"failures": bad[:5]})


# ---------------------------------------------------------------- local kernel-integral scan

def suite_lemma2(config: SuiteConfig, store: RegressionStore, report: Report) -> None:
    radix, width = config.radix, config.resolution
    scans = lemma2_scan(radix, width)
    bad = []
    for N, scan in sorted(scans.items()):
        key = f"lemma2.max_ratio[{radix_tag(radix, width)},inner={N}]"
        report.check(f"lemma2.finite[inner={N}]", math.isfinite(scan.max_ratio), f"max {scan.max_ratio:.6g}",
                     {"N": N, "argmax": scan.argmax})
        _pin(report, store, key, scan.max_ratio)
        n, s, c = scan.argmax
        # recompute the argmax cell with explicit group subtraction over I_N
        x = unrank(c, N, radix).truncate(width)
        direct = radix.M[N] / radix.M[s] * local_kernel_integral(n, x, N)
        if abs(direct - scan.max_ratio) > 1e-9 * max(1.0, direct):
            bad.append({"N": N, "n": n, "s": s, "x": c, "scan": scan.max_ratio, "direct": direct})
    report.check("lemma2.argmax_direct", not bad, "argmax cells re-evaluated by group subtraction",
                 {"failures": bad})


# ---------------------------------------------------------------- kernel minorant

def suite_lemma3(config: SuiteConfig, store: RegressionStore, report: Report) -> None:
    radix, N = config.radix, config.resolution
    M = radix.M[N]
    tol = config.tol["lemma3"]
    table = dirichlet_table(N, radix) if M <= DENSE_LIMIT else None
    checked, failures = 0, []
    worst, where = math.inf, None
    for n in range(1, M):
        e = expand(n, radix)
        if e.rho < 1:
            continue
        if table is None:
            res = _lemma3_closed(n, N, radix, tol)
        else:
            res = lemma3_minorant_check(n, N, radix, table=table, tol=tol)
        checked += 1
        failures.extend(res.failures)
        if res.min_abs / res.bound < worst:
            worst, where = res.min_abs / res.bound, {"n": n, "min_abs": res.min_abs, "bound": res.bound}
    report.constants[f"lemma3.min_witness_ratio[{radix_tag(radix, N)}]"] = worst
    report.constants[f"lemma3.eligible[{radix_tag(radix, N)}]"] = checked
    report.check("lemma3.minorant", not failures,
                 f"{checked} indices with rho >= 1, min |D_n| / M_<n> = {worst:.6g}",
                 {"failures": failures[:10], "count": len(failures)})
    report.check("lemma3.witness_at_least_bound", worst >= 1 - tol, f"min ratio {worst:.6g}", where)


def _lemma3_closed(n: int, N: int, radix: RadixSequence, tol: float):
    """Same check without a dense table: both kernels from the closed form."""
    rest = n - radix.M[expand(n, radix).high]
    rows = {n: dirichlet_closed(n, N, radix).values, rest: dirichlet_closed(rest, N, radix).values}
    return lemma3_minorant_check(n, N, radix, table=rows, tol=tol)


# ---------------------------------------------------------------- atomic characterization

def suite_theoremW(config: SuiteConfig, store: RegressionStore, report: Report) -> None:
    radix, N = config.radix, config.resolution
    tag = radix_tag(radix, N)
    tol = config.tol["atom"]

    for p in config.p_values:
        if not 0 < p <= 1:
            continue
        atom_bad, ratio, arg, atom_norm = [], 0.0, None, 0.0
        for i in range(config.trials):
            rng = np.random.default_rng([config.seed, i])
            a = random_atom(radix, N, p, rng, real=bool(i % 2))
            chk = validate_atom(a, tol)
            if not chk:
                atom_bad.append({"trial": i, "reasons": chk.reasons})
            atom_norm = max(atom_norm, hardy_norm(a.values, p))
            same = assemble(AtomicDecomposition([1.0], [a]), N)
            if not np.allclose(same.values, a.values.values, atol=1e-12):
                atom_bad.append({"trial": i, "reasons": ["single-atom assembly differs"]})
            decomp = random_decomposition(radix, N, p, rng, count=4)
            f = assemble(decomp, N)
            r = hardy_norm(f, p) ** p / decomp.coefficient_sum(p)
            if r > ratio:
                ratio, arg = r, {"trial": i}
            # the levels sum_k lambda_k E_n a_k are the conditional expectations of the top level
            lvl = max(float(np.abs(assemble(decomp, n).values - condexp(f, n).values).max()) for n in range(N + 1))
            if lvl > 1e-10:
                atom_bad.append({"trial": i, "reasons": [f"level mismatch {lvl:.3e}"]})
        report.check(f"theoremW.atoms[p={p:g}]", not atom_bad, f"{config.trials} random atoms",
                     {"failures": atom_bad[:5]})
        suffix = f"[{tag},p={p:g},trials={config.trials},seed={config.seed}]"
        _pin(report, store, f"theoremW.hardy_ratio{suffix}", ratio)
        _pin(report, store, f"theoremW.atom_hardy_norm{suffix}", atom_norm)
        report.constants[f"theoremW.hardy_ratio_argmax{suffix}"] = arg["trial"]

    # tower property on one random function
    rng = np.random.default_rng(config.seed)
    f = random_function(radix, N, rng)
    worst = max(float(np.abs(condexp(condexp(f, n), k).values - condexp(f, min(n, k)).values).max())
                for n in range(N + 1) for k in range(N + 1))
    report.check("theoremW.tower", worst <= 1e-10, f"max error {worst:.3e}", {"error": worst})

    p_small = [p for p in config.p_values if 0 < p < 1]
    if not p_small:
        return
    p = p_small[0]
    family = SubsequenceFamily.parse(config.family)
    K = config.K or 3
    try:
        spec = select_subsequence(family, p, K, radix, N)
    except DomainError as exc:
        report.check("theoremW.counterexample", False, str(exc), {"family": str(family), "K": K, "N": N})
        return
    check_counterexample(spec, report, config.tol["spectrum"], tol)


def check_counterexample(spec, report: Report, spectrum_tol: float, atom_tol: float) -> None:
    """Spectrum vs closed form (fast and naive integration), adaptedness, atom validity."""
    ce = build_counterexample(spec)
    closed = closed_form_spectrum(spec)
    limit = ce.martingale.limit
    fast_err = float(np.abs(ce.spectrum.values - closed).max())
    naive_err = float(np.abs(naive_forward(limit.values, spec.radix, spec.resolution) - closed).max())
    where = int(np.argmax(np.abs(ce.spectrum.values - closed)))
    report.check("counterexample.spectrum", max(fast_err, naive_err) <= spectrum_tol,
                 f"fast {fast_err:.3e}, direct integration {naive_err:.3e}",
                 {"j": where, "observed": complex(ce.spectrum.values[where]), "closed": complex(closed[where])})
    report.check("counterexample.adapted", ce.martingale.is_adapted(1e-10),
                 f"adaptedness error {ce.martingale.adaptedness_error():.3e}", {})
    bad = []
    for k, a in enumerate(ce.decomposition.atoms):
        chk = validate_atom(a, atom_tol)
        if not chk:
            bad.append({"k": k, "reasons": chk.reasons})
    report.check("counterexample.atoms_valid", not bad, f"{len(ce.decomposition.atoms)} atoms",
                 {"failures": bad})


# ---------------------------------------------------------------- Watari

def watari_constants(f: CylinderFunction, exponents=(2.0, 4.0)) -> dict[str, float]:
    """``max_n ||S_n f||_p / ||f||_p`` per exponent and ``max_n sup_l l mu(|S_n f| > l) / ||f||_1``."""
    out = {f"strong_p={q:g}": 0.0 for q in exponents}
    out["weak_1_1"] = 0.0
    base = {q: np.mean(np.abs(f.values) ** q) ** (1 / q) for q in exponents}
    l1 = np.mean(np.abs(f.values))
    for _, block in partial_sum_blocks(f):
        a = np.abs(block)
        for q in exponents:
            out[f"strong_p={q:g}"] = max(out[f"strong_p={q:g}"], float((np.mean(a ** q, axis=1) ** (1 / q)).max() / base[q]))
        out["weak_1_1"] = max(out["weak_1_1"], float(weak_lp_norms(a, 1.0).max() / l1))
    return out


def suite_watari(config: SuiteConfig, store: RegressionStore, report: Report) -> None:
    radix, N = config.radix, config.resolution
    tag = radix_tag(radix, N)
    best: dict[str, float] = {}
    for i in range(config.trials):
        rng = np.random.default_rng([config.seed, i])
        c = watari_constants(random_function(radix, N, rng, real=True))
        for k, v in c.items():
            best[k] = max(best.get(k, 0.0), v)
    l2 = best["strong_p=2"]
    report.check("watari.l2_parseval", abs(l2 - 1) <= config.tol["parseval"],
                 f"max ||S_n f||_2 / ||f||_2 = {l2:.15g}", {"value": l2})
    suffix = f"[{tag},trials={config.trials},seed={config.seed}]"
    _pin(report, store, f"watari.weak_1_1{suffix}", best["weak_1_1"])
    _pin(report, store, f"watari.strong_p=4{suffix}", best["strong_p=4"])


SUITES = {
    "group": suite_group,
    "system": suite_system,
    "transform": suite_transform,
    "kernels": suite_kernels,
    "lemma2": suite_lemma2,
    "lemma3": suite_lemma3,
    "theoremW": suite_theoremW,
    "watari": suite_watari,
}


def run_suite(name: str, config: SuiteConfig, store: RegressionStore | None = None) -> Report:
    """Run the named invariant battery; the report passes iff every check does."""
    if name not in SUITES:
        raise UsageError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if config.cells > config.budget:
        raise CapacityError(f"M_N = {config.cells} exceeds the cell budget {config.budget}")
    store = store if store is not None else RegressionStore(config.regression)
    report = Report(name, provenance=provenance(config))
    SUITES[name](config, store, report)
    store.save()
    return report
