"""Fourier multiplier operators on product-group functions.

All operators act diagonally on characters: averaging (keep frequencies
vanishing on S), laplacian (keep frequencies nonvanishing on S), weight-d
projector, and the noise semigroup rho^{weight}.  Derivatives specialize
the laplacian at a point of the sliced coordinates; globalness bounds all
derivative L2 norms by r^{|S|} * gamma.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import CapExceeded, NotGlobal, RhoTooLarge
from .groups import GroupFunction, ModulusSet, weight_array

GLOBALNESS_ORDER_CAP = 10**4
GLOBALNESS_FACTOR_CAP = 6

LEVEL_CONSTANT = 2**12  # C0 in the globalness parameter schedule


@dataclass(frozen=True)
class MultiplierSpec:
    """kind is one of 'average', 'laplacian', 'level', 'noise'."""

    kind: str
    subset: tuple[int, ...] = ()
    level: int = 0
    rho: float = 1.0

    @classmethod
    def average(cls, s: Iterable[int]) -> "MultiplierSpec":
        return cls("average", tuple(sorted(set(s))))

    @classmethod
    def laplacian(cls, s: Iterable[int]) -> "MultiplierSpec":
        return cls("laplacian", tuple(sorted(set(s))))

    @classmethod
    def level(cls, d: int) -> "MultiplierSpec":
        return cls("level", level=int(d))

    @classmethod
    def noise(cls, rho: float) -> "MultiplierSpec":
        if not 0 < rho <= 1:
            raise ValueError("rho must be in (0, 1]")
        return cls("noise", rho=float(rho))


def multiplier_weights(spec: MultiplierSpec, mods: ModulusSet) -> np.ndarray:
    """The diagonal symbol of the operator over the dual group."""
    shape = tuple(mods.moduli)
    if spec.kind in ("average", "laplacian"):
        axes = mods.subset_axes(spec.subset)
        w = np.ones(shape, dtype=float)
        for ax in axes:
            q = mods.moduli[ax]
            sh = [1] * len(mods)
            sh[ax] = q
            zero = (np.arange(q) == 0).astype(float).reshape(sh)
            w = w * (zero if spec.kind == "average" else 1.0 - zero)
        return w
    if spec.kind == "level":
        if spec.level < 0:
            return np.zeros(shape, dtype=float)
        return (weight_array(mods) == spec.level).astype(float)
    if spec.kind == "noise":
        return spec.rho ** weight_array(mods).astype(float)
    raise ValueError(f"unknown multiplier kind {spec.kind!r}")


def apply_multiplier(spec: MultiplierSpec, f: GroupFunction) -> GroupFunction:
    fhat = f.fourier() * multiplier_weights(spec, f.mods)
    return GroupFunction.from_fourier(f.mods, fhat)


def average_operator(s: Iterable[int], f: GroupFunction) -> GroupFunction:
    """Conditional-mean form of the averaging operator: mean over the S axes.

    Agrees with the multiplier form; kept separate because it is O(N) and
    the agreement of the two routes is itself a tested identity.
    """
    axes = f.mods.subset_axes(s)
    if not axes:
        return f.copy()
    vals = f.values.mean(axis=axes, keepdims=True)
    return GroupFunction(f.mods, np.broadcast_to(vals, f.values.shape).copy())


def laplacian_by_inclusion_exclusion(s: Iterable[int], f: GroupFunction) -> GroupFunction:
    """Sum over T subset S of (-1)^|T| E_T f, evaluated literally."""
    s = tuple(sorted(set(s)))
    acc = np.zeros_like(f.values)
    for k in range(len(s) + 1):
        for t in itertools.combinations(s, k):
            acc += (-1) ** k * apply_multiplier(MultiplierSpec.average(t), f).values
    return GroupFunction(f.mods, acc)


def specialize(f: GroupFunction, s: Iterable[int], x: dict[int, int]) -> GroupFunction:
    """Freeze the coordinates of the moduli in s at the point x."""
    s = tuple(sorted(set(s)))
    index: list = [slice(None)] * len(f.mods)
    for q in s:
        index[f.mods.axis(q)] = x[q] % q
    rest = f.mods.without(s)
    if not rest.moduli:
        raise ValueError("cannot specialize every coordinate")
    return GroupFunction(rest, f.values[tuple(index)])


def derivative(s: Iterable[int], x: dict[int, int], f: GroupFunction) -> GroupFunction:
    """Specialization at x of the laplacian over s.  Empty s returns f."""
    s = tuple(sorted(set(s)))
    if not s:
        return f.copy()
    lf = apply_multiplier(MultiplierSpec.laplacian(s), f)
    return specialize(lf, s, x)


def derivative_norm_table(f: GroupFunction, s: tuple[int, ...]) -> np.ndarray:
    """L2 norms of all derivatives sliced over s, one entry per point of G_S.

    Computed in one pass: the squared norm at x is the mean of |L_S f|^2
    over the non-s axes.
    """
    lf = apply_multiplier(MultiplierSpec.laplacian(s), f)
    if not s:
        return np.array(f.lp_norm(2))
    s_axes = f.mods.subset_axes(s)
    other = tuple(ax for ax in range(len(f.mods)) if ax not in s_axes)
    sq = np.abs(lf.values) ** 2
    table = sq.mean(axis=other) if other else sq
    return np.sqrt(table)


@dataclass
class GlobalnessReport:
    ok: bool
    worst_subset: tuple[int, ...]
    worst_point: dict[int, int]
    worst_norm: float
    worst_bound: float

    @property
    def margin(self) -> float:
        return self.worst_norm - self.worst_bound


def globalness_check(f: GroupFunction, r: float, gamma: float) -> GlobalnessReport:
    """Exhaustive test that every derivative satisfies ||D_{S,x} f||_2 <= r^|S| gamma.

    r^0 is read as 1 even for r = 0.  Enumerates all (S, x); capped to
    small groups.
    """
    if r < 0 or gamma < 0:
        raise ValueError("r and gamma must be >= 0")
    if f.order > GLOBALNESS_ORDER_CAP or len(f.mods) > GLOBALNESS_FACTOR_CAP:
        raise CapExceeded(
            f"globalness enumeration needs order <= {GLOBALNESS_ORDER_CAP} "
            f"and at most {GLOBALNESS_FACTOR_CAP} factors"
        )
    worst: Optional[tuple[float, float, tuple[int, ...], dict[int, int]]] = None
    for k in range(len(f.mods) + 1):
        for s in itertools.combinations(f.mods.moduli, k):
            bound = gamma if k == 0 else (r ** k) * gamma
            if k == 0:
                norms = np.array([[f.lp_norm(2)]])
                points = [{}]
            else:
                table = derivative_norm_table(f, s)
                norms = table.reshape(-1)
                grids = [range(q) for q in s]
                points = [dict(zip(s, pt)) for pt in itertools.product(*grids)]
            for norm, pt in zip(np.atleast_1d(norms).reshape(-1), points):
                excess = float(norm) - bound
                if worst is None or excess > worst[0] - worst[1]:
                    worst = (float(norm), bound, s, pt)
    norm, bound, s, pt = worst
    return GlobalnessReport(norm <= bound * (1 + 1e-12) + 1e-15, s, pt, norm, bound)


def fit_globalness(f: GroupFunction, r: float) -> float:
    """Smallest gamma making f (r, gamma)-derivative-global (r > 0)."""
    if r <= 0:
        raise ValueError("fitting needs r > 0")
    gamma = f.lp_norm(2)
    for k in range(1, len(f.mods) + 1):
        for s in itertools.combinations(f.mods.moduli, k):
            table = derivative_norm_table(f, s)
            gamma = max(gamma, float(np.max(table)) / r ** k)
    return gamma


def globalness_params(alpha: float, d: int) -> tuple[float, float]:
    """The derivative-globalness parameter schedule (r_d, gamma_d) at density alpha.

    r_d = sqrt(d / log(1/alpha)); gamma_d = (C0 log(1/alpha) / d)^(d/2) alpha,
    with gamma_0 = alpha and r_0 = 0.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    if d < 0:
        raise ValueError("d must be >= 0")
    ell = math.log(1.0 / alpha)
    if d == 0:
        return 0.0, alpha
    r = math.sqrt(d / ell)
    gamma = (LEVEL_CONSTANT * ell / d) ** (d / 2.0) * alpha
    return r, gamma


def noise_rho_ceiling(r: float, p: float) -> float:
    """Largest admissible noise rate for the hypercontractive bound."""
    second = p ** -0.5
    if r <= 0:
        m = second
    else:
        m = min(r ** (-(p - 2.0) / p) / p, second)
    return m / (3.0 * math.sqrt(2.0))


@dataclass
class HypercontractivityReport:
    lhs: float          # ||T_rho f||_p^p
    rhs: float          # ||f||_2^2 gamma^(p-2)
    ok: bool
    rho: float
    rho_ceiling: float


def hypercontractivity_check(
    f: GroupFunction,
    r: float,
    gamma: float,
    p: int,
    rho: float,
    rel_tol: float = 1e-9,
    skip_globalness: bool = False,
) -> HypercontractivityReport:
    """Direct check of ||T_rho f||_p^p <= ||f||_2^2 gamma^(p-2).

    Requires certified (r, gamma) globalness and an admissible rho; both
    are verified, not assumed.
    """
    if p < 4 or p % 2 != 0:
        raise ValueError("p must be an even integer >= 4")
    ceiling = noise_rho_ceiling(r, p)
    if rho > ceiling * (1 + 1e-12):
        raise RhoTooLarge(f"rho={rho} exceeds admissible {ceiling}")
    if not skip_globalness:
        rep = globalness_check(f, r, gamma)
        if not rep.ok:
            raise NotGlobal(
                f"not ({r},{gamma})-derivative-global: worst S={rep.worst_subset} "
                f"norm={rep.worst_norm} > {rep.worst_bound}"
            )
    tf = apply_multiplier(MultiplierSpec.noise(rho), f)
    lhs = tf.lp_norm(p) ** p
    rhs = f.lp_norm(2) ** 2 * gamma ** (p - 2)
    return HypercontractivityReport(lhs, rhs, lhs <= rhs * (1 + rel_tol), rho, ceiling)
