"""Verification suites run by ``dyadic-schrodinger verify``.

Each suite returns a list of :class:`Case` objects.  Residuals are maximal
relative errors for identities and maximal excess over the bound for
inequalities; every suite is deterministic for a fixed config.
"""
from __future__ import annotations

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import besov, dyadic, evolution, haar, maximal, nonlocal_op
from .exceptions import PreconditionError
from .grid import (
    BesovParams,
    GridFunction,
    counterexample_term,
    generate_besov_sample,
    generate_lipschitz_sample,
    project_P0,
)
from .report import Case, VerificationReport


@dataclass
class VerifyConfig:
    resolution: int = 7
    domain: int = 1
    seed: int = 0
    beta: float = 0.3
    lam: float = 0.7
    betas: tuple = (0.25, 0.5, 0.75)
    lambdas: tuple = (0.3, 0.5, 0.7)
    samples: int = 10
    tpoints: int = 512
    threads: int = 1
    tolerances: dict = field(default_factory=dict)
    # test hook: "prefactor" replaces the integral normalisation by a wrong constant
    inject_fault: str | None = None

    def validate(self):
        if not 2 <= self.resolution <= 12:
            raise PreconditionError(f"resolution must lie in 2..12, got {self.resolution}")
        if self.domain < 1 or self.domain & (self.domain - 1):
            raise PreconditionError(f"domain length must be a power of two, got {self.domain}")
        BesovParams(self.lam, self.beta)
        for b in self.betas:
            if not 0 < b < 1:
                raise PreconditionError(f"beta must lie in (0, 1), got {b}")
        for lam in self.lambdas:
            if not 0 < lam < 1:
                raise PreconditionError(f"lambda must lie in (0, 1), got {lam}")
        if self.samples < 1 or self.tpoints < 1:
            raise PreconditionError("samples and tpoints must be positive")
        if self.inject_fault not in (None, "prefactor"):
            raise PreconditionError(f"unknown fault {self.inject_fault!r}")

    @property
    def params(self) -> BesovParams:
        return BesovParams(self.lam, self.beta)

    def tol(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))

    def prefactor(self, beta: float):
        if self.inject_fault == "prefactor":
            return (2.0**beta - 1.0) / 2.0**beta
        return None


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    scale = float(np.max(np.abs(b))) if np.size(b) else 0.0
    err = float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) if np.size(b) else 0.0
    return err / scale if scale > 0 else err


def _random_mean_zero(rng, J: int, L: int = 1) -> GridFunction:
    n = L << J
    f = GridFunction(J, L, rng.normal(size=n) + 1j * rng.normal(size=n))
    return f - project_P0(f)


def suite_geometry(cfg: VerifyConfig) -> list[Case]:
    J = min(cfg.resolution, 6)
    n = 1 << J
    # ultrametric inequality, exhaustive
    D = dyadic.delta_matrix(n, J)
    lhs = D[:, None, :]
    rhs = np.maximum(D[:, :, None], D[None, :, :])
    ultra = float(np.max(lhs - rhs))
    idx = np.arange(n) / n
    euclid = float(np.max(np.abs(idx[:, None] - idx[None, :]) - np.where(D > 0, D, np.inf)))
    # partition of the off-diagonal unit square into level sets
    cover = np.zeros((n, n), dtype=int)
    for j in range(J):
        for a, b in dyadic.level_set_pairs(j, J):
            cover[a, b] += 1
    off = ~np.eye(n, dtype=bool)
    partition = float(np.max(np.abs(cover[off] - 1)) + np.max(cover[~off]))
    # areas against cell enumeration
    area_err = 0.0
    cell_area = 4.0**-J
    for I in dyadic.intervals_up_to(J - 1):
        lo, hi = I.cell_range(J)
        mid = (lo + hi) // 2
        inB = np.zeros((n, n), dtype=bool)
        inB[lo:mid, mid:hi] = inB[mid:hi, lo:mid] = True
        area_err = max(area_err, abs(inB.sum() * cell_area - dyadic.measure_B(I)) / dyadic.measure_B(I))
        inI = np.zeros(n, dtype=bool)
        inI[lo:hi] = True
        inC = inI[:, None] ^ inI[None, :]
        for big in dyadic.intervals_up_to(I.level - 1):
            blo, bhi = big.cell_range(J)
            bmid = (blo + bhi) // 2
            bB = np.zeros((n, n), dtype=bool)
            bB[blo:bmid, bmid:bhi] = bB[bmid:bhi, blo:bmid] = True
            area_err = max(area_err, abs((bB & inC).sum() * cell_area - dyadic.measure_B_cap_C(big, I)))
    tail = 0.0
    for alpha in (-0.75, -0.5, -0.25, 0.0):
        value = dyadic.unit_delta_power_integral(alpha)
        tail = max(tail, value - dyadic.unit_delta_power_bound(alpha))
    return [
        Case("ultrametric", "delta(x,z) <= max(delta(x,y), delta(y,z))", max(ultra, 0.0), 0.0),
        Case("euclid-below-delta", "|x-y| <= delta(x,y) on distinct cells", max(euclid, 0.0), 0.0),
        Case("level-set-partition", "off-diagonal pairs covered exactly once", partition, 0.0),
        Case("areas-B-and-cross", "m(B(I)) and m(B(J) n C(I)) by enumeration", area_err, cfg.tol("geometry", 1e-12)),
        Case("unit-delta-power-bound", "unit-interval delta**alpha integral bound", max(tail, 0.0), 0.0),
    ]


def suite_transforms(cfg: VerifyConfig) -> list[Case]:
    rng = np.random.default_rng(cfg.seed)
    J, L = cfg.resolution, cfg.domain
    round_trip = parseval = 0.0
    for _ in range(cfg.samples):
        f = GridFunction(J, L, rng.normal(size=L << J) + 1j * rng.normal(size=L << J))
        c = haar.analyze(f)
        round_trip = max(round_trip, _rel(haar.synthesize(c).values, f.values))
        parseval = max(parseval, abs(c.energy() - f.l2_norm() ** 2) / f.l2_norm() ** 2)
    return [
        Case("haar-round-trip", "synthesize(analyze(f)) = f", round_trip, cfg.tol("round_trip", 1e-13)),
        Case("haar-parseval", "orthonormality of the Haar system", parseval, cfg.tol("parseval", 1e-12)),
    ]


def suite_eigenfunction(cfg: VerifyConfig) -> list[Case]:
    J = cfg.resolution
    betas = sorted(set(cfg.betas) | {cfg.beta})
    worst = 0.0
    for beta in betas:
        for I in dyadic.intervals_up_to(min(6, J - 1)):
            h = haar.haar_function(I, J)
            got = nonlocal_op.dbeta_integral(h, beta, prefactor=cfg.prefactor(beta))
            worst = max(worst, _rel(got.values, I.length**-beta * h.values))
    return [Case("eigenfunction-identity", "integral form of D^beta on Haar functions", worst, cfg.tol("eigen", 1e-12))]


def suite_besov(cfg: VerifyConfig) -> list[Case]:
    rng = np.random.default_rng(cfg.seed + 1)
    J = min(cfg.resolution, 8)
    identity = fast_brute = 0.0
    for lam in cfg.lambdas:
        for _ in range(cfg.samples):
            f = _random_mean_zero(rng, J)
            q = besov.seminorm_sq_quadrature(f, lam)
            s = besov.seminorm_sq_coefficients(haar.analyze(f), lam, atol=1e-12 * f.scale)
            identity = max(identity, abs(q - s) / s)
            b = besov.seminorm_sq_quadrature(f, lam, method="brute")
            fast_brute = max(fast_brute, abs(q - b) / b)
    # cross terms and diagonal sums on the Haar system
    Jh = min(cfg.resolution, 6)
    lam = 0.5
    hs = {I: haar.haar_function(I, Jh) for I in dyadic.intervals_up_to(min(4, Jh - 1))}
    cross = 0.0
    for I, K in itertools.permutations(hs, 2):
        cross = max(cross, abs(besov.polarized_quadrature(hs[I], hs[K], lam)))
    diag = 0.0
    Jd = min(cfg.resolution, 8)
    for I in dyadic.intervals_up_to(min(6, Jd - 1)):
        h = haar.haar_function(I, Jd)
        total = sum(2.0 ** (j * (1 + 2 * lam)) * besov.level_integral(j, h, h).real for j in range(Jd))
        w = besov.besov_weight(I, lam)
        diag = max(diag, abs(total - w) / w)
    return [
        Case("besov-haar-identity", "quadrature seminorm = weighted coefficient sum", identity, cfg.tol("besov", 1e-10)),
        Case("seminorm-fast-vs-brute", "level-set quadrature = pairwise quadrature", fast_brute, cfg.tol("quadrature", 1e-12)),
        Case("cross-term-vanishing", "polarized quadrature of distinct Haar functions", cross, cfg.tol("cross", 1e-12)),
        Case("diagonal-sum", "weighted level integrals of h_I sum to w(I)", diag, cfg.tol("diagonal", 1e-12)),
    ]


def suite_operator(cfg: VerifyConfig) -> list[Case]:
    J, L = min(cfg.resolution, 8), cfg.domain
    worst = fast_brute = far = split = 0.0
    for beta in sorted(set(cfg.betas) | {cfg.beta}):
        for s in range(cfg.samples):
            f = generate_besov_sample(J, L, beta + 0.3 if beta + 0.3 < 1 else 0.99, cfg.seed + s, per_level=2)
            spectral = nonlocal_op.dbeta_via_spectrum(f, beta)
            integral = nonlocal_op.dbeta_integral(f, beta, prefactor=cfg.prefactor(beta))
            norm = spectral.l2_norm()
            worst = max(worst, (integral - spectral).l2_norm() / norm)
            brute = nonlocal_op.dbeta_integral(f, beta, method="brute", prefactor=cfg.prefactor(beta))
            fast_brute = max(fast_brute, _rel(integral.values, brute.values))
            near, farpart = nonlocal_op.dbeta_tail_split(f, beta)
            kappa = nonlocal_op.integral_prefactor(beta)
            split = max(split, _rel(kappa * (near.values + farpart.values), nonlocal_op.dbeta_integral(f, beta).values))
            far = max(far, farpart.l2_norm() - nonlocal_op.far_field_operator_bound(beta) * f.l2_norm())
    return [
        Case("spectral-equals-integral", "D^beta two ways on Besov samples", worst, cfg.tol("spectral_integral", 1e-10)),
        Case("dbeta-fast-vs-brute", "level accumulation = pairwise sum", fast_brute, cfg.tol("quadrature", 1e-12)),
        Case("tail-split-additivity", "near + far reproduces the operator", split, cfg.tol("split", 1e-12)),
        Case("far-field-bound", "L2 bound of the delta >= 2 part", max(far, 0.0), 1e-12),
    ]


def suite_evolution(cfg: VerifyConfig) -> list[Case]:
    p = cfg.params
    J = cfg.resolution
    unitary = group = 0.0
    ratio_err = 0.0
    final = 0.0
    hs = [1e-2 * 2.0**-m for m in range(7)]
    for s in range(cfg.samples):
        f = generate_besov_sample(J, 1, p.lam, cfg.seed + s)
        c = haar.analyze(f)
        atol = 1e-12 * f.scale
        u = evolution.evolve_pointwise(f, p, 0.7)
        unitary = max(unitary, abs(u.l2_norm() - f.l2_norm()) / f.l2_norm())
        a = evolution.evolve(evolution.evolve(c, p.beta, 0.3, atol), p.beta, 0.4, atol)
        b = evolution.evolve(c, p.beta, 0.7, atol)
        group = max(group, _rel(a.flat_detail(), b.flat_detail()))
        c0 = haar.HaarCoefficients(J, 1, np.zeros(1), c.detail)
        res = [evolution.pde_residual(c0, p, 0.5, h) for h in hs]
        for r1, r2 in zip(res, res[1:]):
            ratio_err = max(ratio_err, abs(r1 / r2 - 2.0))
        scale = evolution.coefficient_besov_norm(nonlocal_op.dbeta_spectral(c0, p.beta), p.gap)
        final = max(final, res[-1] / scale)
    return [
        Case("unitarity", "L2 norm conserved", unitary, cfg.tol("unitarity", 1e-13)),
        Case("group-law", "evolve(s) o evolve(t) = evolve(s + t)", group, cfg.tol("group", 1e-13)),
        Case("pde-residual-order", "first-order decay of the difference-quotient residual", ratio_err, 0.2),
        Case("pde-residual-size", "final residual relative to ||D^beta u0||", final, 1e-4),
    ]


def suite_maximal(cfg: VerifyConfig) -> list[Case]:
    p = cfg.params
    J = min(cfg.resolution, 8)
    tg = maximal.default_t_grid(cfg.tpoints)
    fixed_t = sup_t = 0.0
    rate = 0.0
    for s in range(cfg.samples):
        f = generate_besov_sample(J, 1, p.lam, cfg.seed + s, per_level=2)
        c = haar.analyze(f)
        c = haar.HaarCoefficients(J, 1, np.zeros(1), c.detail)
        Md = maximal.hardy_littlewood_dyadic(f)
        Ms = maximal.sharp_maximal_dyadic(f, p.lam)
        star = np.zeros(f.n_cells)
        for t in tg:
            st = maximal.star_t_maximal(c, p.beta, t)
            bound = p.c_max * t * Ms + 2 * Md
            fixed_t = max(fixed_t, float(np.max(st - bound)))
            np.maximum(star, st, out=star)
        sup_t = max(sup_t, float(np.max(star - (p.c_max * Ms + 2 * Md))))
        rate = max(rate, maximal.convergence_rate_bound(f, p, tg).max_violation)
    lip_viol = 0
    for s in range(max(1, cfg.samples // 2)):
        g, lip = generate_lipschitz_sample(J, 1, 1.0, cfg.seed + s)
        v, _ = maximal.lipschitz_cauchy_violations(g, lip, p.beta, tg[:: max(1, len(tg) // 64)])
        lip_viol += v
    return [
        Case("maximal-fixed-t", "S*_t <= C t M#_dy + 2 M_dy", max(fixed_t, 0.0), 1e-12),
        Case("maximal-sup-t", "S* <= C M#_dy + 2 M_dy", max(sup_t, 0.0), 1e-12),
        Case("rate-bound", "sup_t |u(t) - u0| / t <= const M#_dy u0", rate, 1e-12),
        Case("lipschitz-cauchy", "|S^N_t g - S^M_t g| <= ||g'|| sum 2^-j", float(lip_viol), 0.0),
    ]


def suite_counterexample(cfg: VerifyConfig) -> list[Case]:
    lam = 0.3
    Jmax = max(cfg.resolution, 11)
    l2_err = sup_err = 0.0
    norms = []
    for j in range(11):
        f = counterexample_term(1 << j, Jmax)
        l2_err = max(l2_err, abs(f.l2_norm() - 2.0 ** (-j / 2)))
        sup_err = max(sup_err, abs(f.scale - 1.0))
        norms.append(besov.coefficient_norm(haar.analyze(f), lam))
    expected = [2.0 ** (-j * (0.5 - lam)) for j in range(11)]
    norm_err = max(abs(a - b) / b for a, b in zip(norms, expected))
    increase = max(0.0, max(b - a for a, b in zip(norms, norms[1:])))
    return [
        Case("counterexample-norms", "||f_n||_2 = 2^(-j/2) and sup |f_n| = 1", max(l2_err, sup_err), 1e-15),
        Case("counterexample-besov-decay", "coefficient Besov norm = 2^(-j(1/2 - lam)), decreasing", norm_err + increase, 1e-14),
    ]


SUITES = [
    suite_geometry,
    suite_transforms,
    suite_eigenfunction,
    suite_besov,
    suite_operator,
    suite_evolution,
    suite_maximal,
    suite_counterexample,
]


def run_verify(cfg: VerifyConfig) -> VerificationReport:
    cfg.validate()
    start = time.perf_counter()
    with ThreadPoolExecutor(max_workers=max(1, cfg.threads)) as pool:
        results = list(pool.map(lambda s: s(cfg), SUITES))
    report = VerificationReport("verify")
    for cases in results:
        for case in cases:
            report.add(case)
    report.seconds = time.perf_counter() - start
    return report
