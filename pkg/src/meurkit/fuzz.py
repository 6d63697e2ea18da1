"""Randomized falsification of every implemented inequality."""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import bounds as bd
from .bounds import BoundReport
from .errors import UncertaintyError, reason_code
from .meps import optimal_meps_anticommutator, optimal_meps_product, sample_meps
from .optimize import best_tropical_bound, maximize_over_lambda
from .qcore import pair_statistics
from .sampling import random_observables, random_state

DEFAULT_LAMBDAS = (0.1, 0.5, 1.0, 2.0, 10.0)
YOUNG_EXPONENTS = (-2.0, -0.5, 0.25, 0.5, 0.75, 1.5, 2.0, 3.0)
VIOLATION_TOL = 1e-9

FUZZ_BOUNDS = (
    "robertson",
    "schroedinger",
    "young",
    "l1",
    "l2",
    "meur",
    "tropical",
    "maxlambda",
    "amended_schroedinger",
    "remark1",
    "hermitian",
    "multi_meur",
    "corollary1",
    "theorem5",
    "corollary2",
)


def relative_excess(rep: BoundReport) -> float:
    """How far a report oversteps its target, relative to ``1 + |target|``."""
    return -rep.gap / (1.0 + abs(rep.target))


@dataclass
class BoundStats:
    evaluations: int = 0
    violations: int = 0
    max_excess: float = -math.inf
    gap_sum: float = 0.0
    min_gap: float = math.inf
    errors: Counter = field(default_factory=Counter)

    def add(self, rep: BoundReport) -> None:
        excess = relative_excess(rep)
        self.evaluations += 1
        self.max_excess = max(self.max_excess, excess)
        self.violations += excess > VIOLATION_TOL
        rel_gap = -excess
        self.gap_sum += rel_gap
        self.min_gap = min(self.min_gap, rel_gap)

    def as_dict(self) -> dict:
        return {
            "evaluations": self.evaluations,
            "violations": self.violations,
            "max_excess": self.max_excess if self.evaluations else None,
            "mean_rel_gap": self.gap_sum / self.evaluations if self.evaluations else None,
            "min_rel_gap": self.min_gap if self.evaluations else None,
            "errors": dict(sorted(self.errors.items())),
        }


@dataclass
class FuzzSummary:
    seed: int
    trials: int
    dims: tuple[int, ...]
    per_bound: dict[str, BoundStats]
    #: which branch of tropical(1, 1/2) won, counted per evaluation
    tropical_wins: Counter = field(default_factory=Counter)

    @property
    def violations(self) -> int:
        return sum(s.violations for s in self.per_bound.values())

    @property
    def max_excess(self) -> float:
        return max((s.max_excess for s in self.per_bound.values() if s.evaluations), default=-math.inf)

    def as_dict(self) -> dict:
        total = sum(self.tropical_wins.values())
        return {
            "seed": self.seed,
            "trials": self.trials,
            "dims": list(self.dims),
            "violations": self.violations,
            "max_excess": self.max_excess,
            "bounds": {k: v.as_dict() for k, v in self.per_bound.items()},
            "tropical_win_rate": {k: v / total for k, v in sorted(self.tropical_wins.items())} if total else {},
        }


def run_fuzz(
    dims=(2, 3, 4, 5, 6),
    trials: int = 1000,
    seed: int = 0,
    bounds=FUZZ_BOUNDS,
    lambdas=DEFAULT_LAMBDAS,
    meps_per_trial: int = 20,
) -> FuzzSummary:
    """Sample random scenarios, weights and MEPS and check every bound.

    Each trial draws three random observables and one random state; the MEPS
    set is ``meps_per_trial`` uniform samples plus the analytic maximizers,
    which is where violations would surface first.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    unknown = set(bounds) - set(FUZZ_BOUNDS)
    if unknown:
        raise ValueError(f"unknown bounds {sorted(unknown)}; valid: {', '.join(FUZZ_BOUNDS)}")
    dims = tuple(int(d) for d in dims)
    rng = np.random.default_rng(seed)
    stats = {name: BoundStats() for name in bounds}
    summary = FuzzSummary(seed, trials, dims, stats)
    wanted = set(bounds)

    def check(name, fn, *args):
        if name not in wanted:
            return None
        try:
            rep = fn(*args)
        except UncertaintyError as exc:
            stats[name].errors[reason_code(exc)] += 1
            return None
        stats[name].add(rep)
        return rep

    for _ in range(trials):
        dim = int(rng.choice(dims))
        obs = random_observables(dim, 3, rng)
        psi = random_state(dim, rng)
        a, b = obs[0], obs[1]
        st = pair_statistics(a, b, psi)
        mepses = sample_meps(psi, int(rng.integers(2**62)), meps_per_trial)
        for lam in lambdas:
            for sign in ("auto",):
                try:
                    mepses.append(optimal_meps_product(a, b, psi, lam, sign))
                except UncertaintyError:
                    pass
        try:
            mepses.append(optimal_meps_anticommutator(a, b, psi))
        except UncertaintyError:
            pass

        check("robertson", bd.robertson, st)
        check("schroedinger", bd.schroedinger, st)
        check("young", bd.young_weighted_product, st, bd.WeightParameter.young(float(rng.choice(YOUNG_EXPONENTS))))
        check("corollary1", bd.corollary1_bound, obs, psi)
        check("corollary2", bd.corollary2_bound, obs, psi)
        check("maxlambda", _maxlambda_report, a, b, psi, mepses[0], st)

        mop = bd.aligned_exclusion_operator(a, b, psi) if wanted & {"remark1"} else None
        pairs = bd.pair_indices(3)
        mops = [bd.aligned_exclusion_operator(obs[j], obs[k], psi) for j, k in pairs] if "theorem5" in wanted else None

        for idx, m in enumerate(mepses):
            m2 = mepses[(idx + 1) % len(mepses)]
            for lam in lambdas:
                check("meur", bd.meur_bound, a, b, psi, lam, m)
                check("l1", bd.weighted_sum_l1, a, b, psi, lam, m, m2)
                check("l2", bd.weighted_sum_l2, a, b, psi, lam, m, m2)
            if "tropical" in wanted:
                rep = check("tropical", best_tropical_bound, a, b, psi, m, (1.0, 0.5))
                if rep is not None and not rep.skipped:
                    r1 = bd.meur_bound(a, b, psi, 1.0, m)
                    summary.tropical_wins["lambda=1/2" if rep.value > r1.value else "lambda=1"] += 1
            check("amended_schroedinger", bd.amended_schroedinger_bound, a, b, psi, m, m2)
            check("hermitian", bd.hermitian_variant_bound, a, b, psi, m)
            if mop is not None:
                check("remark1", bd.remark1_bound, a, b, psi, mop, m)
            pair_lams = [lambdas[(idx + q) % len(lambdas)] for q in range(len(pairs))]
            pair_ms = [mepses[(idx + q) % len(mepses)] for q in range(len(pairs))]
            check("multi_meur", _quiet_multi, obs, psi, pair_lams, pair_ms)
            if mops is not None:
                check("theorem5", bd.theorem5_bound, obs, psi, mops, pair_ms)
    return summary


def _maxlambda_report(a, b, psi, m, st) -> BoundReport:
    opt = maximize_over_lambda(a, b, psi, m)
    return BoundReport("maxlambda", opt.value, st.product)


def _quiet_multi(obs, psi, lams, ms) -> BoundReport:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", bd.ZeroCommutatorWarning)
        return bd.multi_meur_bound(obs, psi, lams, ms)
