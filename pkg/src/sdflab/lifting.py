"""Embedding functions on integer progressions into product-group functions.

The lift places f(x), rescaled by |G|/|P|, at the CRT image of x, so group
means match progression means.  On top of it sit the verified statements:
the diagram relating restriction to averaging-and-specialization, the
weight-d energy identity between integer exponential sums and the lifted
projector norm, the moment-transfer inequality from the lifted image to
the whole group, and the level-energy dichotomy.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    CapExceeded,
    EmptyProgression,
    HypothesisViolated,
    NotInjective,
    PreconditionFailed,
    StepNotCoprime,
)
from .groups import GroupFunction, ModulusSet
from .operators import LEVEL_CONSTANT, MultiplierSpec, apply_multiplier, average_operator, specialize
from .sets import Progression

ENERGY_WORK_CAP = 5 * 10**8


def _check_step_coprime(p: Progression, mods: ModulusSet) -> None:
    for q in mods:
        if math.gcd(p.step, q) != 1:
            raise StepNotCoprime(f"progression step {p.step} shares a factor with modulus {q}")


def lift(values: Sequence[complex], p: Progression, x_max: int, mods: ModulusSet) -> GroupFunction:
    """Lift a function on the progression p inside [x_max] to the group.

    The value at the image of x is (|G|/|P|) f(x); everywhere else zero.
    Requires |G| >= x_max so distinct points of p stay distinct, and the
    step coprime to every modulus.
    """
    n = mods.order
    if n < x_max:
        raise NotInjective(f"group order {n} < {x_max}; projection may collide")
    _check_step_coprime(p, mods)
    if p.length == 0:
        raise EmptyProgression("cannot lift from an empty progression")
    vals = np.asarray(values, dtype=complex)
    if vals.shape != (p.length,):
        raise ValueError("values must align with the progression elements")
    xs = np.asarray(p.elements(), dtype=np.int64)
    arr = np.zeros(tuple(mods.moduli), dtype=complex)
    idx = tuple(xs % q for q in mods.moduli)
    arr[idx] = vals * (n / p.length)
    return GroupFunction(mods, arr)


def image_index(p: Progression, mods: ModulusSet) -> tuple[np.ndarray, ...]:
    """CRT coordinates of the progression's elements, as an advanced index."""
    xs = np.asarray(p.elements(), dtype=np.int64)
    return tuple(xs % q for q in mods.moduli)


def interval_fourier(values: Sequence[complex], xs: Sequence[int], theta: float) -> complex:
    """Plain exponential sum  sum_x f(x) e(-theta x)."""
    v = np.asarray(values, dtype=complex)
    x = np.asarray(xs, dtype=np.float64)
    return complex(np.sum(v * np.exp(-2j * np.pi * theta * x)))


def subprogression_by_residue(p: Progression, modulus: int, residue: int) -> Progression:
    """The elements of p congruent to residue mod modulus (step must be coprime)."""
    if modulus == 1:
        return p
    if math.gcd(p.step, modulus) != 1:
        raise StepNotCoprime(f"step {p.step} not invertible mod {modulus}")
    j0 = ((residue - p.start) * pow(p.step, -1, modulus)) % modulus
    if j0 >= p.length:
        return Progression(p.start + p.step * j0, p.step * modulus, 0)
    length = (p.length - 1 - j0) // modulus + 1
    return Progression(p.start + p.step * j0, p.step * modulus, length)


def crt_combine(residues: dict[int, int]) -> tuple[int, int]:
    """Combine per-modulus residues into (residue, modulus) by CRT."""
    r, m = 0, 1
    for q, a in sorted(residues.items()):
        k = ((a - r) * pow(m, -1, q)) % q
        r += m * k
        m *= q
    return r % m, m


@dataclass
class RestrictionReport:
    eta: float
    eta_exact: Fraction
    eta_bound: float
    eta_ok: bool
    max_mismatch: float
    empirical_eta_gap: float
    sub_progression: Progression
    hypothesis_flags: dict[str, bool] = field(default_factory=dict)


def restriction_diagram_residual(
    x_max: int,
    mods: ModulusSet,
    p: Progression,
    s: Iterable[int],
    t: Iterable[int],
    a: dict[int, int],
    basis: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
    strict: bool = True,
) -> RestrictionReport:
    """Compare the two routes from functions on p to functions on the reduced group.

    Route one lifts to the full group, averages over t, and freezes the s
    coordinates at a.  Route two restricts to the subprogression cut out
    by a on s-minus-t and lifts to the group without s.  Both routes are
    applied to a basis (or sample) of point masses; they must agree up to
    the factor 1 + eta with |eta| <= x_max^(-1/2).
    """
    s = tuple(sorted(set(s)))
    t = tuple(sorted(set(t)))
    if not set(t) <= set(s):
        raise ValueError("t must be a subset of s")
    for q in s:
        mods.axis(q)
    if set(a) != set(s):
        raise ValueError("a must give one coordinate per modulus of s")

    flags = {
        "length": p.length >= x_max ** 0.75,
        "product": mods.order >= x_max ** 1.25,
        "max_power": (max(mods.moduli) ** len(s)) <= x_max ** 0.25 + 1e-9,
        "inside": p.inside(x_max),
    }
    if strict and not all(flags.values()):
        bad = [k for k, v in flags.items() if not v]
        raise HypothesisViolated(f"failed: {', '.join(bad)}")
    _check_step_coprime(p, mods)

    rest = mods.without(s)
    split = {q: a[q] % q for q in s if q not in t}
    a_star, m_star = crt_combine(split) if split else (0, 1)
    p_sub = subprogression_by_residue(p, m_star, a_star)
    if p_sub.length == 0:
        raise EmptyProgression("the congruence class misses the progression")

    g_t = reduce(lambda u, v: u * v, t, 1)
    eta_exact = Fraction(mods.order * p_sub.length, p.length * g_t * rest.order) - 1
    eta = float(eta_exact)

    if basis is None or basis >= p.length:
        bs = list(p.elements())
    else:
        rng = rng or np.random.default_rng(0)
        bs = sorted(rng.choice(np.asarray(p.elements()), size=basis, replace=False).tolist())

    scale = mods.order / (p.length * g_t)
    sub_elems = set(p_sub.elements())
    max_mismatch = 0.0
    eta_gap = 0.0
    one = np.ones(1, dtype=complex)
    for b in bs:
        delta = np.zeros(p.length, dtype=complex)
        delta[(b - p.start) // p.step] = 1.0
        lifted = lift(delta, p, x_max, mods)
        smeared = average_operator(t, lifted) if t else lifted
        u = specialize(smeared, s, a) if s else smeared
        if b in sub_elems:
            db = np.zeros(p_sub.length, dtype=complex)
            db[(b - p_sub.start) // p_sub.step] = 1.0
            v = lift(db, p_sub, x_max, rest)
            peak_u = u.at_integer(b)
            peak_v = v.at_integer(b)
            eta_gap = max(eta_gap, abs(peak_u / peak_v - 1 - eta))
            diff = np.abs(u.values - (1 + eta) * v.values).max()
        else:
            diff = np.abs(u.values).max()
        max_mismatch = max(max_mismatch, float(diff) / scale)

    bound = x_max ** -0.5
    return RestrictionReport(
        eta, eta_exact, bound, abs(eta) <= bound, max_mismatch, eta_gap, p_sub, flags
    )


def weight_d_fractions(mods: ModulusSet, d: int) -> list[tuple[tuple[int, ...], int, np.ndarray]]:
    """For each d-subset s: (s, prod, admissible numerators a with q|a for no q in s)."""
    out = []
    for s in itertools.combinations(mods.moduli, d):
        m = reduce(lambda u, v: u * v, s, 1)
        a = np.arange(m)
        keep = np.ones(m, dtype=bool)
        for q in s:
            keep &= a % q != 0
        out.append((s, m, a[keep]))
    return out


def level_d_energy(
    values: Sequence[complex],
    x_max: int,
    mods: ModulusSet,
    d: int,
    xi0: float = 0.0,
) -> float:
    """Sum of |sum_x f(x) e(-(a/m + xi0) x)|^2 over weight-d fractions a/m.

    m runs over products of d moduli and a over residues divisible by none
    of them; computed by direct summation.
    """
    if d < 0:
        raise ValueError("d must be >= 0")
    if d > len(mods):
        return 0.0
    v = np.asarray(values, dtype=complex)
    if v.shape != (x_max,):
        raise ValueError("values must be indexed by 1..x_max")
    xs = np.arange(1, x_max + 1, dtype=np.float64)
    phase0 = np.exp(-2j * np.pi * xi0 * xs) * v
    total = 0.0
    work = sum(len(a) for _, _, a in weight_d_fractions(mods, d)) * x_max
    if work > ENERGY_WORK_CAP:
        raise CapExceeded(f"direct energy would need {work} operations")
    for _, m, nums in weight_d_fractions(mods, d):
        if len(nums) == 0:
            continue
        # e(-(a/m) x) with the rational part reduced exactly mod m
        xr = np.arange(1, x_max + 1, dtype=np.int64) % m
        table = np.exp(-2j * np.pi * np.outer(nums, xr) / m)
        sums = table @ phase0
        total += float(np.sum(np.abs(sums) ** 2))
    return total


def level_d_energy_operator_route(
    values: Sequence[complex],
    x_max: int,
    mods: ModulusSet,
    d: int,
    xi0: float = 0.0,
) -> float:
    """Same energy via the lifted weight-d projector: x_max^2 ||W_d lift||_2^2."""
    xs = np.arange(1, x_max + 1, dtype=np.float64)
    v = np.asarray(values, dtype=complex) * np.exp(-2j * np.pi * xi0 * xs)
    g = lift(v, Progression(1, 1, x_max), x_max, mods)
    wd = apply_multiplier(MultiplierSpec.level(d), g)
    return float(x_max**2 * wd.lp_norm(2) ** 2)


@dataclass
class DichotomyResult:
    kind: str  # 'level_energy' | 'dense_progression' | 'both_failed'
    regime: str  # 'theorem' | 'relaxed'
    energy: float
    energy_bound: float
    witness_subset: Optional[tuple[int, ...]] = None
    witness_residue: Optional[int] = None
    witness_density: Optional[float] = None
    density_threshold: Optional[float] = None


def level_energy_dichotomy(
    values: Sequence[complex],
    x_max: int,
    mods: ModulusSet,
    alpha: float,
    d: int,
    relaxed: bool = False,
    lam: float = 2.0,
) -> DichotomyResult:
    """Either the weight-d energy is small or some congruence class is dense.

    With the size hypotheses in force the dichotomy is a theorem; in
    relaxed mode the verdict is still computed but tagged out-of-regime.
    both_failed is a falsification alarm, never an expected outcome.
    """
    v = np.asarray(values, dtype=complex)
    if v.shape != (x_max,):
        raise ValueError("values must be indexed by 1..x_max")
    if np.max(np.abs(v)) > 1 + 1e-9:
        raise PreconditionFailed("need |f| <= 1 pointwise")
    if not 0 < alpha < 1:
        raise PreconditionFailed("alpha must be in (0, 1)")
    ell = math.log(1.0 / alpha)
    if not relaxed:
        problems = []
        if not alpha < 0.5:
            problems.append("alpha < 1/2")
        if not alpha > 2 * x_max**-0.5:
            problems.append("alpha > 2 X^(-1/2)")
        if not max(mods.moduli) <= x_max ** (1.0 / (32 * ell)):
            problems.append("(i) max modulus <= X^(1/(32 log(1/alpha)))")
        if not mods.order >= x_max**2:
            problems.append("(ii) product of moduli >= X^2")
        if not d <= ell / 128:
            problems.append("d <= log(1/alpha)/128")
        if problems:
            raise HypothesisViolated("; ".join(problems))
    regime = "theorem" if not relaxed else "relaxed"

    energy = level_d_energy(v, x_max, mods, d)
    bound = alpha**2 * x_max**2 * ((LEVEL_CONSTANT * ell / d) ** d if d >= 1 else 1.0)
    # guard band: the energy is a double-precision sum, the bound can be hit exactly
    if energy <= bound * (1 + 1e-9):
        return DichotomyResult("level_energy", regime, energy, bound)

    absf = np.abs(v)
    xs = np.arange(1, x_max + 1, dtype=np.int64)
    kmax = min(len(mods), int(2 * ell))
    for k in range(1, kmax + 1):
        for s in itertools.combinations(mods.moduli, k):
            m = reduce(lambda u, w: u * w, s, 1)
            if m > x_max:
                continue  # handled by the singleton pass below
            counts = np.bincount(xs % m, minlength=m)
            sums = np.bincount(xs % m, weights=absf, minlength=m)
            with np.errstate(invalid="ignore", divide="ignore"):
                avg = np.where(counts > 0, sums / np.maximum(counts, 1), 0.0)
            threshold = lam**k * alpha
            r = int(np.argmax(avg))
            if avg[r] > threshold:
                return DichotomyResult(
                    "dense_progression", regime, energy, bound,
                    witness_subset=s, witness_residue=r,
                    witness_density=float(avg[r]), density_threshold=threshold,
                )
    # classes of modulus beyond x_max hold at most one point, so the witness
    # is a single x with |f(x)| over the threshold
    for k in range(1, kmax + 1):
        for s in itertools.combinations(mods.moduli, k):
            m = reduce(lambda u, w: u * w, s, 1)
            if m <= x_max:
                continue
            threshold = lam**k * alpha
            xbest = int(np.argmax(absf))
            if absf[xbest] > threshold:
                return DichotomyResult(
                    "dense_progression", regime, energy, bound,
                    witness_subset=s, witness_residue=(xbest + 1) % m,
                    witness_density=float(absf[xbest]), density_threshold=threshold,
                )
            break  # larger subsets only raise the threshold
    return DichotomyResult("both_failed", regime, energy, bound)


@dataclass
class MomentTransferReport:
    lhs: float
    rhs: float
    main_term: float
    slack: float
    ok: bool
    alpha: float
    hypothesis_flags: dict[str, bool] = field(default_factory=dict)


def moment_transfer_check(
    values: Sequence[complex],
    p: Progression,
    x_max: int,
    mods: ModulusSet,
    d: int,
    m: int,
    strict: bool = True,
) -> MomentTransferReport:
    """Mean of |W_d g|^{2m} over the lifted image vs over the whole group.

    g is the lift of f from p; the claim is
    image-mean <= group-mean + (mean |f|)^{2m} X^{-1/4}.
    """
    if m < 1:
        raise ValueError("m must be >= 1")
    flags = {
        "product": mods.order >= x_max,
        "length": p.length >= x_max ** 0.75,
        "max_power": max(mods.moduli) ** (d * m) <= x_max ** (1.0 / 16) + 1e-9,
        "inside": p.inside(x_max),
    }
    if strict and not all(flags.values()):
        bad = [k for k, v in flags.items() if not v]
        raise HypothesisViolated(f"failed: {', '.join(bad)}")
    _check_step_coprime(p, mods)

    v = np.asarray(values, dtype=complex)
    alpha = float(np.mean(np.abs(v)))
    g = lift(v, p, x_max, mods)
    wd = apply_multiplier(MultiplierSpec.level(d), g)
    pow_vals = np.abs(wd.values) ** (2 * m)
    lhs = float(pow_vals[image_index(p, mods)].mean())
    main = float(pow_vals.mean())
    slack = alpha ** (2 * m) * x_max**-0.25
    rhs = main + slack
    return MomentTransferReport(lhs, rhs, main, slack, lhs <= rhs, alpha, flags)
