"""Searches over the weight and the MEPS, plus deterministic parameter sweeps."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple, Sequence

import numpy as np

from . import bounds as bd
from .bounds import BoundReport
from .errors import (
    DenominatorVanishesError,
    NoFeasibleLambdaError,
    UncertaintyError,
    ValidationError,
    ZeroVectorError,
    reason_code,
)
from .meps import (
    Meps,
    great_circle,
    optimal_meps_anticommutator,
    optimal_meps_product,
    orthogonal_meps,
    project_and_normalize,
)
from .qcore import hatted_image, pair_statistics
from .scenarios import Scenario, paper_4dim_scenario, spin1_scenario

INV_PHI = (math.sqrt(5) - 1) / 2


@dataclass(frozen=True)
class LambdaSearchConfig:
    log_grid_lo: float = -3.0
    log_grid_hi: float = 3.0
    grid_points: int = 61
    refine_iterations: int = 40
    tolerance: float = 1e-10

    def __post_init__(self):
        if not self.log_grid_lo < self.log_grid_hi:
            raise ValidationError("log_grid_lo must be below log_grid_hi")
        if self.grid_points < 3:
            raise ValidationError("grid_points must be at least 3")


class LambdaOptimum(NamedTuple):
    lambda_star: float
    value: float


def _golden_max(f, lo, hi, iterations, stop):
    """Golden-section maximization of a unimodal ``f`` on ``[lo, hi]``."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(iterations):
        if stop(lo, hi):
            break
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    return (x1, f1) if f1 >= f2 else (x2, f2)


def maximize_over_lambda(a, b, psi, m: Meps, cfg: LambdaSearchConfig | None = None, sign="auto") -> LambdaOptimum:
    """Maximize the weighted MEPS bound over ``lam > 0`` at a fixed MEPS.

    A log10-spaced grid locates the best bracket, golden-section search
    refines inside it. Grid points hitting the denominator guard are dropped.
    """
    cfg = cfg or LambdaSearchConfig()

    def value(x):
        try:
            return bd.meur_bound(a, b, psi, 10.0**x, m, sign).value
        except DenominatorVanishesError:
            return -math.inf

    xs = np.linspace(cfg.log_grid_lo, cfg.log_grid_hi, cfg.grid_points)
    vals = np.array([value(x) for x in xs])
    if not np.isfinite(vals).any():
        raise NoFeasibleLambdaError("every grid point hits the denominator guard")
    i = int(np.argmax(vals))
    best_x, best_v = float(xs[i]), float(vals[i])
    if cfg.log_grid_lo <= 0.0 <= cfg.log_grid_hi:
        v1 = value(0.0)
        if v1 > best_v:
            best_x, best_v = 0.0, v1
    lo, hi = float(xs[max(i - 1, 0)]), float(xs[min(i + 1, len(xs) - 1)])
    x, v = _golden_max(
        value, lo, hi, cfg.refine_iterations, lambda l, h: 10.0**h - 10.0**l < cfg.tolerance
    )
    if v > best_v:
        best_x, best_v = x, v
    return LambdaOptimum(10.0**best_x, best_v)


def best_tropical_bound(a, b, psi, m: Meps, lambdas: Sequence[float], sign="auto") -> BoundReport:
    """Tropical sum of the weighted MEPS bounds over ``lambdas`` at one MEPS.

    Weights whose denominator hits the guard are left out and listed in
    ``skipped``.
    """
    lambdas = list(lambdas)
    if not lambdas:
        raise ValidationError("need at least one lambda")
    reports, skipped = [], []
    for lam in lambdas:
        try:
            reports.append(bd.meur_bound(a, b, psi, lam, m, sign))
        except DenominatorVanishesError:
            skipped.append(f"meur(lambda={lam:g}):denominator-guard")
    if not reports:
        raise NoFeasibleLambdaError("every lambda hits the denominator guard")
    out = bd.tropical_sum(reports)
    return replace(out, skipped=out.skipped + tuple(skipped))


# -------------------------------------------------------------- selectors

SELECTOR_KINDS = {
    "product": "dA*dB itself",
    "robertson": "|c|/2",
    "schroedinger": "(c/2)^2 + (r/2)^2",
    "meur": "weighted MEPS bound, meur:LAMBDA",
    "tropical": "max over weights, tropical:L1/L2/...",
    "maxlambda": "max over lambda at fixed MEPS",
    "l1": "weighted sum bound L1, l1:LAMBDA",
    "l2": "weighted sum bound L2, l2:LAMBDA",
    "young": "Young weighted product, young:P",
    "g": "amended Schroedinger g (squared scale)",
    "h": "amended Schroedinger bound h",
    "hermitian": "anticommutator variant",
    "remark1": "exclusion-operator Schroedinger bound",
    "multi_meur": "n-observable weighted bound, multi_meur:LAMBDA",
    "corollary1": "n-observable commutator bound",
    "theorem5": "n-observable exclusion-operator bound",
    "corollary2": "n-observable Schroedinger bound",
}

_DEFAULT_PARAMS = {"meur": (1.0,), "tropical": (1.0, 0.5), "l1": (1.0,), "l2": (1.0,), "young": (0.5,), "multi_meur": (1.0,)}


@dataclass(frozen=True)
class Selector:
    kind: str
    params: tuple[float, ...] = ()
    squared: bool = False

    @property
    def text(self) -> str:
        out = self.kind
        if self.params:
            out += ":" + "/".join(f"{p:g}" for p in self.params)
        return out + ("^2" if self.squared else "")


def parse_selector(text: str) -> Selector:
    """Parse ``KIND[:P1/P2...][^2]``."""
    raw = text.strip()
    squared = raw.endswith("^2")
    if squared:
        raw = raw[:-2]
    kind, _, args = raw.partition(":")
    if kind not in SELECTOR_KINDS:
        raise ValidationError(f"unknown bound {kind!r}; valid: {', '.join(SELECTOR_KINDS)}")
    try:
        params = tuple(float(x) for x in args.split("/")) if args else _DEFAULT_PARAMS.get(kind, ())
    except ValueError:
        raise ValidationError(f"bad parameters in bound selector {text!r}") from None
    return Selector(kind, params, squared)


def _unit(v, psi) -> Meps:
    return project_and_normalize(v, psi)


def _or_any(make, psi) -> Meps:
    """``make()``, or a fixed MEPS when the maximizing image vanishes.

    A vanishing image means the overlap is zero for every MEPS, so all of
    them give the same value and any one is a maximizer.
    """
    try:
        return make()
    except ZeroVectorError:
        return orthogonal_meps(psi)


def _pair_meps(kind, params, a, b, psi, sign):
    """Analytic maximizer(s) for a pair bound, as ``(m1, m2)``."""
    m1, m2 = _pair_meps_raw(kind, params, a, b, psi, sign)
    return _or_any(m1, psi), _or_any(m2, psi)


def _pair_meps_raw(kind, params, a, b, psi, sign):
    ah, bh = hatted_image(a, psi), hatted_image(b, psi)
    if kind in ("meur", "maxlambda", "tropical", "multi_meur"):
        lam = params[0] if params else 1.0
        m = lambda: optimal_meps_product(a, b, psi, lam, sign)
        return m, m
    if kind == "l1":
        lam = params[0]
        return lambda: _unit(ah + 1j * bh, psi), lambda: _unit(lam * ah + 1j * bh, psi)
    if kind == "l2":
        lam = params[0]
        return lambda: _unit(ah + bh, psi), lambda: _unit(lam * ah - bh, psi)
    if kind in ("g", "h"):
        return lambda: optimal_meps_product(a, b, psi, 1.0, "auto"), lambda: optimal_meps_anticommutator(a, b, psi)
    if kind == "hermitian":
        m = lambda: optimal_meps_anticommutator(a, b, psi, sign)
        return m, m
    raise ValidationError(f"bound {kind!r} has no analytic MEPS")


def _exclusion_op(sc: Scenario, i, j):
    a, b = sc.observables[i], sc.observables[j]
    return sc.exclusion_ops.get((i, j)) or bd.aligned_exclusion_operator(a, b, sc.psi)


def evaluate_selector(
    sel: Selector | str,
    sc: Scenario,
    pair: tuple[int, int] = (0, 1),
    meps: Meps | str | None = None,
    sign="auto",
    lambda_cfg: LambdaSearchConfig | None = None,
) -> BoundReport:
    """Evaluate one bound selector on a scenario.

    ``meps`` is a concrete :class:`Meps` (used everywhere a MEPS is needed),
    the string ``"optimal"`` (each bound gets its analytic maximizer), or the
    name of one of the scenario's MEPS.
    """
    if isinstance(sel, str):
        sel = parse_selector(sel)
    psi = sc.psi
    i, j = pair
    a, b = sc.pair(i, j)
    if isinstance(meps, str) and meps != "optimal":
        if meps not in sc.named_meps:
            raise ValidationError(f"scenario has no MEPS named {meps!r}; available: {', '.join(sc.named_meps) or 'none'}")
        meps = sc.named_meps[meps]
    optimal = meps == "optimal"

    def need_meps():
        if meps is None:
            raise ValidationError(f"bound {sel.kind!r} needs a MEPS")
        return meps

    def pair_m(x, y):
        if optimal:
            return _pair_meps(sel.kind, sel.params, sc.observables[x], sc.observables[y], psi, sign)
        m = need_meps()
        return m, m

    k, p = sel.kind, sel.params
    st = pair_statistics(a, b, psi)
    if k == "product":
        rep = BoundReport("product", st.product, st.product)
    elif k == "robertson":
        rep = bd.robertson(st)
    elif k == "schroedinger":
        rep = bd.schroedinger(st)
    elif k == "young":
        rep = bd.young_weighted_product(st, bd.WeightParameter.young(p[0]))
    elif k == "meur":
        rep = bd.meur_bound(a, b, psi, p[0], pair_m(i, j)[0], sign)
    elif k == "tropical":
        rep = best_tropical_bound(a, b, psi, pair_m(i, j)[0], p, sign)
    elif k == "maxlambda":
        opt = maximize_over_lambda(a, b, psi, pair_m(i, j)[0], lambda_cfg, sign)
        rep = BoundReport(f"maxlambda(lambda*={opt.lambda_star:.6g})", opt.value, st.product)
    elif k == "l1":
        rep = bd.weighted_sum_l1(a, b, psi, p[0], *pair_m(i, j))
    elif k == "l2":
        rep = bd.weighted_sum_l2(a, b, psi, p[0], *pair_m(i, j))
    elif k == "g":
        g = bd.amended_schroedinger_g(a, b, psi, *pair_m(i, j))
        rep = BoundReport("g", g, 2 * st.product_sq)
    elif k == "h":
        rep = bd.amended_schroedinger_bound(a, b, psi, *pair_m(i, j))
    elif k == "hermitian":
        rep = bd.hermitian_variant_bound(a, b, psi, pair_m(i, j)[0], sign)
    elif k == "remark1":
        mop = _exclusion_op(sc, i, j)
        m = _or_any(lambda: bd.optimal_meps_exclusion(mop, psi), psi) if optimal else need_meps()
        rep = bd.remark1_bound(a, b, psi, mop, m)
    elif k in ("multi_meur", "corollary1", "theorem5", "corollary2"):
        obs = sc.observables
        pairs = bd.pair_indices(len(obs))
        if k == "corollary1":
            rep = bd.corollary1_bound(obs, psi)
        elif k == "corollary2":
            rep = bd.corollary2_bound(obs, psi)
        elif k == "multi_meur":
            ms = [pair_m(x, y)[0] for x, y in pairs]
            rep = bd.multi_meur_bound(obs, psi, p[0], ms, sign)
        else:
            mops = [_exclusion_op(sc, x, y) for x, y in pairs]
            ms = [_or_any(lambda mo=mo: bd.optimal_meps_exclusion(mo, psi), psi) if optimal else need_meps() for mo in mops]
            rep = bd.theorem5_bound(obs, psi, mops, ms)
    else:  # pragma: no cover - parse_selector rejects unknown kinds
        raise ValidationError(f"unknown bound {k!r}")
    return rep.squared() if sel.squared else rep


# ------------------------------------------------------------------ sweeps


@dataclass(frozen=True)
class SweepSpec:
    parameter_name: str
    lo: float
    hi: float
    steps: int
    selectors: tuple[str, ...]
    pair: tuple[int, int] = (0, 1)
    #: named MEPS of each scenario, or "optimal"; None uses the family default
    meps: str | None = None

    def __post_init__(self):
        if self.steps < 2:
            raise ValidationError("steps must be at least 2")
        if not self.lo < self.hi:
            raise ValidationError("lo must be below hi")
        object.__setattr__(self, "selectors", tuple(self.selectors))
        for s in self.selectors:
            parse_selector(s)

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.steps)


def _paper4dim_arc(t: float) -> Scenario:
    """Great-circle path in the MEPS hyperplane of the 4-dim example at theta = pi/3.

    Starts at the saturating MEPS and turns towards ``|2>``.
    """
    sc = paper_4dim_scenario()
    start = sc.named_meps["psi_perp_1"]
    end = project_and_normalize(np.array([0, 0, 1, 0], dtype=complex), sc.psi)
    meps = dict(sc.named_meps, psi_perp=great_circle(start, end, t))
    return replace(sc, name="paper4dim-arc", named_meps=meps, metadata={"t": repr(t)})


#: family name -> (scenario factory, default MEPS name)
FAMILIES: dict[str, tuple[Callable[[float], Scenario], str]] = {
    "spin1": (spin1_scenario, "psi_perp"),
    "paper4dim": (paper_4dim_scenario, "psi_perp_2"),
    "paper4dim-arc": (_paper4dim_arc, "psi_perp"),
}


@dataclass
class SweepTable:
    columns: list[str]
    rows: list[dict] = field(default_factory=list)

    def column(self, name: str) -> list:
        return [row[name] for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow(["" if row[c] is None else (format(row[c], ".17g") if isinstance(row[c], float) else row[c]) for c in self.columns])
        return buf.getvalue()


def _sweep_point(family, default_meps, sweep, sels, t):
    row = {sweep.parameter_name: float(t), "target": None}
    reasons = []
    try:
        sc = family(float(t))
        row["target"] = pair_statistics(*sc.pair(*sweep.pair), sc.psi).product
    except UncertaintyError as exc:
        for s in sels:
            row[s.text] = None
        row["reason"] = f"scenario:{reason_code(exc)}"
        return row
    meps = sweep.meps or default_meps
    for s in sels:
        try:
            row[s.text] = float(evaluate_selector(s, sc, sweep.pair, meps).value)
        except UncertaintyError as exc:
            row[s.text] = None
            reasons.append(f"{s.text}:{reason_code(exc)}")
    row["reason"] = ";".join(reasons)
    return row


def run_sweep(family: str | Callable[[float], Scenario], sweep: SweepSpec, default_meps: str = "psi_perp") -> SweepTable:
    """One row per parameter value; failing cells are empty with a reason code."""
    if isinstance(family, str):
        if family not in FAMILIES:
            raise ValidationError(f"unknown sweep family {family!r}; valid: {', '.join(FAMILIES)}")
        family, default_meps = FAMILIES[family]
    sels = [parse_selector(s) for s in sweep.selectors]
    table = SweepTable([sweep.parameter_name, "target", *(s.text for s in sels), "reason"])
    table.rows = [_sweep_point(family, default_meps, sweep, sels, t) for t in sweep.values()]
    return table
