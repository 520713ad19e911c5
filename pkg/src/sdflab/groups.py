"""Functions on products of cyclic groups Z/q1 x ... x Z/qk, pairwise coprime.

Values are stored as dense complex arrays over the CRT coordinates (one
axis per modulus, ascending order).  The dual group is indexed the same
way: the frequency with per-factor residues (r1, ..., rk) corresponds to
the real number sum(r_i / q_i) mod 1, and its weight is the number of
nonzero residues.  Transforms are per-axis DFTs, so a full transform
costs O(N log N) rather than O(N^2).

Normalization: forward transforms average over the group (so fhat(0) is
the mean); inversion sums over frequencies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Mapping

import numpy as np

from .errors import UnknownModulus

DENSE_CAP = 10**7


@dataclass(frozen=True)
class ModulusSet:
    """Pairwise coprime integer moduli, each >= 2, kept in ascending order."""

    moduli: tuple[int, ...]

    def __post_init__(self):
        mods = tuple(sorted(int(q) for q in self.moduli))
        if len(set(mods)) != len(mods):
            raise ValueError("duplicate moduli")
        for q in mods:
            if q < 2:
                raise ValueError("moduli must be >= 2")
        for i, q in enumerate(mods):
            for r in mods[i + 1:]:
                if math.gcd(q, r) != 1:
                    raise ValueError(f"moduli {q} and {r} are not coprime")
        object.__setattr__(self, "moduli", mods)

    @property
    def order(self) -> int:
        return reduce(lambda a, b: a * b, self.moduli, 1)

    def __iter__(self):
        return iter(self.moduli)

    def __len__(self):
        return len(self.moduli)

    def __contains__(self, q: int) -> bool:
        return q in self.moduli

    def axis(self, q: int) -> int:
        try:
            return self.moduli.index(q)
        except ValueError:
            raise UnknownModulus(f"{q} is not a modulus of this group") from None

    def subset_axes(self, s: Iterable[int]) -> tuple[int, ...]:
        return tuple(self.axis(q) for q in sorted(set(s)))

    def without(self, s: Iterable[int]) -> "ModulusSet":
        drop = set(s)
        for q in drop:
            self.axis(q)
        return ModulusSet(tuple(q for q in self.moduli if q not in drop))

    def project(self, x: int) -> tuple[int, ...]:
        """CRT coordinates of the integer x."""
        return tuple(x % q for q in self.moduli)


@dataclass(frozen=True)
class Frequency:
    """A character, stored as per-modulus residues; absent key means zero."""

    components: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        comps = {int(q): int(r) % int(q) for q, r in self.components.items()}
        comps = {q: r for q, r in comps.items() if r != 0}
        object.__setattr__(self, "components", comps)

    @property
    def support(self) -> frozenset[int]:
        return frozenset(self.components)

    @property
    def weight(self) -> int:
        return len(self.components)

    def as_real(self) -> float:
        """The point sum(r_q / q) of the unit circle, in [0, 1)."""
        return math.fsum(r / q for q, r in self.components.items()) % 1.0

    def index_in(self, mods: ModulusSet) -> tuple[int, ...]:
        for q in self.components:
            mods.axis(q)
        return tuple(self.components.get(q, 0) for q in mods.moduli)

    @classmethod
    def from_index(cls, idx: tuple[int, ...], mods: ModulusSet) -> "Frequency":
        return cls({q: r for q, r in zip(mods.moduli, idx) if r % q != 0})


class GroupFunction:
    """A complex-valued function on the product group."""

    def __init__(self, mods: ModulusSet, values: np.ndarray):
        values = np.asarray(values, dtype=complex)
        shape = tuple(mods.moduli)
        if values.shape != shape:
            if values.size == mods.order:
                values = values.reshape(shape)
            else:
                raise ValueError(f"values of shape {values.shape} do not fit group {shape}")
        if mods.order > DENSE_CAP:
            raise ValueError(f"group order {mods.order} exceeds dense cap {DENSE_CAP}")
        if not np.all(np.isfinite(values)):
            raise ValueError("values must be finite")
        self.mods = mods
        self.values = values

    @classmethod
    def constant(cls, mods: ModulusSet, c: complex = 1.0) -> "GroupFunction":
        return cls(mods, np.full(tuple(mods.moduli), c, dtype=complex))

    @classmethod
    def delta(cls, mods: ModulusSet, x: int = 0) -> "GroupFunction":
        vals = np.zeros(tuple(mods.moduli), dtype=complex)
        vals[mods.project(x)] = 1.0
        return cls(mods, vals)

    @classmethod
    def character(cls, mods: ModulusSet, xi: Frequency) -> "GroupFunction":
        vals = np.ones((), dtype=complex)
        for q in mods.moduli:
            r = xi.components.get(q, 0)
            axis_vals = np.exp(2j * np.pi * r * np.arange(q) / q)
            vals = np.multiply.outer(vals, axis_vals)
        return cls(mods, vals)

    @classmethod
    def from_integer_values(cls, mods: ModulusSet, pairs: Iterable[tuple[int, complex]]) -> "GroupFunction":
        """Place values at the CRT images of integers; unset points are zero."""
        vals = np.zeros(tuple(mods.moduli), dtype=complex)
        for x, v in pairs:
            vals[mods.project(x)] += v
        return cls(mods, vals)

    @property
    def order(self) -> int:
        return self.mods.order

    def copy(self) -> "GroupFunction":
        return GroupFunction(self.mods, self.values.copy())

    def at_integer(self, x: int) -> complex:
        return complex(self.values[self.mods.project(x)])

    def mean(self) -> complex:
        return complex(self.values.mean())

    def lp_norm(self, p: float) -> float:
        """L^p norm with respect to normalized counting measure."""
        if p == math.inf:
            return float(np.abs(self.values).max())
        return float(np.mean(np.abs(self.values) ** p) ** (1.0 / p))

    def fourier(self) -> np.ndarray:
        """Forward transform: fhat(xi) = mean_x f(x) conj(chi_xi(x))."""
        return np.fft.fftn(self.values) / self.order

    @classmethod
    def from_fourier(cls, mods: ModulusSet, fhat: np.ndarray) -> "GroupFunction":
        """Inverse transform: f(x) = sum_xi fhat(xi) chi_xi(x)."""
        return cls(mods, np.fft.ifftn(np.asarray(fhat, dtype=complex)) * mods.order)

    def to_json_dict(self) -> dict:
        flat = self.values.reshape(-1)
        return {
            "moduli": list(self.mods.moduli),
            "values": [[float(v.real), float(v.imag)] for v in flat],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "GroupFunction":
        mods = ModulusSet(tuple(d["moduli"]))
        vals = np.array([complex(re, im) for re, im in d["values"]])
        return cls(mods, vals)


def weight_array(mods: ModulusSet) -> np.ndarray:
    """Array over the dual group giving the number of nonzero residues."""
    w = np.zeros(tuple(mods.moduli), dtype=np.int64)
    for ax, q in enumerate(mods.moduli):
        shape = [1] * len(mods)
        shape[ax] = q
        w = w + (np.arange(q) != 0).astype(np.int64).reshape(shape)
    return w


def parseval_gap(f: GroupFunction) -> float:
    """Relative gap between the frequency-side and space-side energies."""
    fhat = f.fourier()
    lhs = float(np.sum(np.abs(fhat) ** 2))
    rhs = f.lp_norm(2) ** 2
    scale = max(lhs, rhs, 1e-300)
    return abs(lhs - rhs) / scale
