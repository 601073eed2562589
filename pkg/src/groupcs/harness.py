"""Batch recovery experiments that check the error bounds trial by trial.

Each trial draws a measurement matrix and a (nearly) group-sparse signal,
certifies ``delta_2k`` exactly, solves the constrained recovery problem and
compares both errors with ``D1 sigma + D2 eps`` and ``D3 sigma + D4 eps``.
"""
from __future__ import annotations

import json
import warnings
from dataclasses import asdict, dataclass, field
from math import sqrt

import numpy as np

from .bounds import bound_coefficients, evaluate_bound
from .constants import closed_form_constants
from .decomposition import sparsity_index
from .errors import GroupCSError, RankDeficientWarning, SupportExceedsBudget
from .group_model import GroupPartition, partition_from_dict, uniform_partition
from .grip import grip_constant
from .norms import NormSpec, eval_norm, norm_from_dict, parse_norm
from .sampling import generate_matrix, sampling_plan
from .solver import RecoveryProblem, SolverOptions, recover

REPORT_VERSION = "groupcs-experiment-v1"
EXACT_TOL = 1e-6

COLUMNS = [
    "trial", "seed", "status", "sigma", "eps", "noise_norm", "delta2k", "threshold",
    "compressible", "l2_error", "l2_bound", "approx_error", "approx_bound",
    "bound_satisfied", "exact_recovery", "converged", "iterations", "message",
]


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 32
    m: int = 24
    k: int = 8
    group_size: int = 4
    partition: dict | None = None      # 1-based JSON partition; overrides n, k, group_size
    norm: str | dict = "gl"
    support_groups: int = 2
    leakage: float = 0.0
    eps: float = 0.0
    noise: str = "sphere"              # "sphere" or "gaussian_clip"
    trials: int = 50
    seed: int = 0
    delta_certification: str = "exact"  # "exact" or "skip"
    distribution: str = "gaussian"
    max_iters: int = 20_000
    tol: float = 1e-9
    # absolute slack (relative to 1 + ||x||) absorbing the solver's finite accuracy
    bound_slack: float = 1e-6

    def __post_init__(self):
        if self.trials < 1 or self.m < 1:
            raise ValueError("trials and m must be at least 1")
        if self.leakage < 0 or self.eps < 0:
            raise ValueError("leakage and eps must be nonnegative")
        if self.noise not in ("sphere", "gaussian_clip"):
            raise ValueError(f"unknown noise model {self.noise!r}")
        if self.delta_certification not in ("exact", "skip"):
            raise ValueError("delta_certification must be 'exact' or 'skip'")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f for f in cls.__dataclass_fields__}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys: {sorted(extra)}")
        return cls(**d)

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def build_partition(self) -> GroupPartition:
        if self.partition is not None:
            return partition_from_dict(self.partition)
        return uniform_partition(self.n, self.group_size, self.k)

    def build_norm(self) -> NormSpec:
        return norm_from_dict(self.norm) if isinstance(self.norm, dict) else parse_norm(self.norm)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list = field(default_factory=list)

    @property
    def violation_count(self) -> int:
        return sum(1 for r in self.rows if r["bound_satisfied"] is False)

    def aggregates(self) -> dict:
        ok = [r for r in self.rows if r["status"] == "ok"]
        comp = [r for r in ok if r["compressible"]]

        def rate(rs):
            return sum(r["exact_recovery"] for r in rs) / len(rs) if rs else None

        def median(key):
            vals = [r[key] for r in ok]
            return float(np.median(vals)) if vals else None

        return {
            "version": REPORT_VERSION,
            "trials": len(self.rows),
            "failed_trials": len(self.rows) - len(ok),
            "certified_trials": sum(r["delta2k"] is not None for r in ok),
            "compressible_trials": len(comp),
            "violation_count": self.violation_count,
            "exact_recovery_rate": rate(ok),
            "exact_recovery_rate_compressible": rate(comp),
            "median_l2_error": median("l2_error"),
            "median_approx_error": median("approx_error"),
            "median_sigma": median("sigma"),
        }

    def summary(self) -> dict:
        return {"config": self.config.to_dict(), "aggregates": self.aggregates()}


def generate_group_sparse_signal(p: GroupPartition, support_groups: int, leakage: float,
                                 seed: int) -> np.ndarray:
    """Signal on ``support_groups`` random groups plus uniform ``+-leakage`` noise elsewhere.

    On-support magnitudes are uniform on ``[0.5, 1.5]`` with random signs.
    """
    if support_groups < 0 or support_groups > p.g:
        raise ValueError(f"support_groups must lie in 0..{p.g}")
    if leakage < 0:
        raise ValueError("leakage must be nonnegative")
    rng = np.random.default_rng(seed)
    chosen = np.sort(rng.choice(p.g, size=support_groups, replace=False))
    idx = np.asarray(p.union(chosen.tolist()), dtype=np.int64)
    if idx.size > p.k:
        raise SupportExceedsBudget(
            f"groups {(chosen + 1).tolist()} cover {idx.size} > k={p.k} indices")
    x = np.zeros(p.n)
    signs = rng.choice(np.array([-1.0, 1.0]), size=idx.size)
    x[idx] = signs * rng.uniform(0.5, 1.5, size=idx.size)
    if leakage > 0:
        off = np.ones(p.n, dtype=bool)
        off[idx] = False
        x[off] = rng.uniform(-leakage, leakage, size=int(off.sum()))
    return x


def draw_noise(m: int, eps: float, model: str, seed: int) -> np.ndarray:
    if eps == 0:
        return np.zeros(m)
    rng = np.random.default_rng([seed, 1])
    z = rng.standard_normal(m)
    if model == "sphere":
        return eps * z / np.linalg.norm(z)
    z *= eps / sqrt(m)
    nz = np.linalg.norm(z)
    return z if nz <= eps else z * (eps / nz)


def run_trial(cfg: ExperimentConfig, p: GroupPartition, spec: NormSpec, t: int) -> dict:
    seed_t = cfg.seed + t
    row = {c: None for c in COLUMNS}
    row.update(trial=t, seed=seed_t, eps=float(cfg.eps), status="ok", message="")
    try:
        A = generate_matrix(cfg.m, p.n, seed_t, cfg.distribution)
        x = generate_group_sparse_signal(p, cfg.support_groups, cfg.leakage, seed_t)
        eta = draw_noise(cfg.m, cfg.eps, cfg.noise, seed_t)
        y = A @ x + eta
        row["noise_norm"] = float(np.linalg.norm(eta))
        sigma, _ = sparsity_index(x, spec, p)
        row["sigma"] = float(sigma)

        res = recover(RecoveryProblem(A, y, cfg.eps, spec, p),
                      SolverOptions(max_iters=cfg.max_iters, tol=cfg.tol))
        h = res.x_hat - x
        row.update(
            l2_error=float(np.linalg.norm(h)),
            approx_error=float(eval_norm(spec, p, h)),
            converged=bool(res.converged),
            iterations=int(res.iterations),
        )
        row["exact_recovery"] = row["l2_error"] < EXACT_TOL

        if cfg.delta_certification == "exact":
            consts = closed_form_constants(spec, p)
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", RankDeficientWarning)
                delta = grip_constant(A, p).delta
            rep = bound_coefficients(consts, delta)
            row.update(delta2k=float(delta), threshold=float(rep.threshold),
                       compressible=bool(rep.compressible))
            if rep.compressible:
                l2b, apb = evaluate_bound(rep, sigma, cfg.eps)
                slack = cfg.bound_slack * (1.0 + float(np.linalg.norm(x)))
                ok = row["l2_error"] <= l2b + slack and row["approx_error"] <= apb + slack
                if spec.variant == "l1" and p.is_singleton:
                    ok = ok and row["approx_error"] <= sqrt(p.k) * l2b + slack
                row.update(l2_bound=float(l2b), approx_bound=float(apb), bound_satisfied=bool(ok))
        else:
            row["compressible"] = False
    except GroupCSError as exc:
        row.update(status="failed", message=f"{type(exc).__name__}: {exc}")
    return row


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    p = cfg.build_partition()
    spec = cfg.build_norm()
    rows = [run_trial(cfg, p, spec, t) for t in range(cfg.trials)]
    return ExperimentReport(cfg, rows)


# -- sample-size table for the large-scale example ----------------------------------

SEC6_INPUTS = {"n": 20_000, "k": 20, "g": 6_000, "l_min": 4, "s_max": 5,
               "delta": 0.25, "zeta": 1e-8}
SEC6_PRINTED = {"m_s": 53_585, "m_gs": 29_978}


def reproduce_section6_table() -> dict:
    """Evaluate both measurement bounds on the microarray-sized example.

    The printed reference values are smaller than the formula values by a
    factor of about ten; the report flags this next to the ratio, which agrees.
    """
    i = SEC6_INPUTS
    plan = sampling_plan(i["n"], i["k"], i["g"], i["s_max"], i["delta"], i["zeta"])
    ratio = plan.m_gs_value / plan.m_s_value
    printed_ratio = SEC6_PRINTED["m_gs"] / SEC6_PRINTED["m_s"]
    fac_s = plan.m_s_value / SEC6_PRINTED["m_s"]
    fac_gs = plan.m_gs_value / SEC6_PRINTED["m_gs"]
    flagged = all(abs(fac - 10.0) < 0.1 for fac in (fac_s, fac_gs))
    return {
        "inputs": dict(i),
        "c": plan.c,
        "theta": plan.theta,
        "m_s_formula": plan.m_s_value,
        "m_gs_formula": plan.m_gs_value,
        "m_s_formula_ceil": plan.m_s,
        "m_gs_formula_ceil": plan.m_gs,
        "m_s_printed": SEC6_PRINTED["m_s"],
        "m_gs_printed": SEC6_PRINTED["m_gs"],
        "formula_over_printed_s": fac_s,
        "formula_over_printed_gs": fac_gs,
        "ratio_formula": ratio,
        "ratio_printed": printed_ratio,
        "x10_discrepancy": flagged,
        "note": ("printed sample sizes are about one tenth of the formula values; "
                 "the ratio m_gs/m_s agrees") if flagged else "",
    }
