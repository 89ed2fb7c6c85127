"""Real Clifford algebra Cl(p,q) with dense bitmask-indexed coefficients.

Basis blades are indexed by bitmasks over the n = p + q generator slots:
bit i set means generator e_{i+1} is present. For n = 3:

    mask 0b000 = 0 : 1      (scalar)
    mask 0b001 = 1 : e1
    mask 0b010 = 2 : e2
    mask 0b011 = 3 : e12
    mask 0b100 = 4 : e3
    mask 0b101 = 5 : e13
    mask 0b110 = 6 : e23
    mask 0b111 = 7 : e123

A multivector is a float64 vector of 2^n coefficients in mask order.
Generators square to +1 for index <= p and to -1 above, and distinct
generators anticommute; all structure signs are computed with integer
bit arithmetic, so the multiplication table is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

import numpy as np

#: Largest supported number of generators; 2^n coefficients per multivector.
MAX_DIMENSION = 12

#: Coefficients at or below this magnitude are dropped by display/serialization.
ZERO_THRESHOLD = 1e-12


@dataclass(frozen=True)
class Signature:
    """Metric signature (p, q): p generators square to +1, q to -1."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 0:
            raise ValueError(f"signature counts must be nonnegative, got ({self.p}, {self.q})")
        n = self.p + self.q
        if not 1 <= n <= MAX_DIMENSION:
            raise ValueError(
                f"dimension n = p + q = {n} outside supported range 1..{MAX_DIMENSION} "
                f"(2^n coefficient storage)"
            )

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def dim(self) -> int:
        """Number of basis blades, 2^n."""
        return 1 << self.n

    def metric(self, a: int) -> int:
        """Square of generator e_a (1-based index): +1 or -1."""
        if not 1 <= a <= self.n:
            raise ValueError(f"generator index {a} outside 1..{self.n}")
        return 1 if a <= self.p else -1

    @property
    def negative_mask(self) -> int:
        """Bitmask of the generators that square to -1."""
        return ((1 << self.n) - 1) ^ ((1 << self.p) - 1)


# ---------------------------------------------------------------------------
# Blade-level structure
# ---------------------------------------------------------------------------

def blade_grade(mask: int) -> int:
    """Number of generators in the blade."""
    return mask.bit_count()


def blade_indices(mask: int) -> tuple[int, ...]:
    """Ascending 1-based generator indices of the blade."""
    return tuple(i + 1 for i in range(mask.bit_length()) if mask >> i & 1)


def blade_name(mask: int) -> str:
    """Serialization name: "1" for the scalar blade, else e.g. "e12".

    Generator indices are concatenated for single-digit indices; two-digit
    indices (n >= 10) are joined with underscores to stay unambiguous.
    """
    if mask == 0:
        return "1"
    idx = blade_indices(mask)
    if idx[-1] <= 9:
        return "e" + "".join(str(i) for i in idx)
    return "e" + "_".join(str(i) for i in idx)


def blade_from_name(name: str, n: int) -> int:
    """Parse a blade name back to its mask; inverse of blade_name."""
    if name == "1":
        return 0
    if not name.startswith("e") or len(name) < 2:
        raise ValueError(f"malformed blade name {name!r}")
    body = name[1:]
    parts = body.split("_") if "_" in body else list(body)
    mask = 0
    prev = 0
    for part in parts:
        if not part.isdigit():
            raise ValueError(f"malformed blade name {name!r}")
        i = int(part)
        if not 1 <= i <= n:
            raise ValueError(f"generator index {i} in {name!r} outside 1..{n}")
        if i <= prev:
            raise ValueError(f"generator indices in {name!r} must be strictly ascending")
        prev = i
        mask |= 1 << (i - 1)
    return mask


def _transposition_parity(a: int, b: int) -> int:
    # Number of pairs (i in a, j in b) with i > j, i.e. the swaps needed to
    # interleave the concatenated index lists into ascending order.
    count = 0
    a >>= 1
    while a:
        count += (a & b).bit_count()
        a >>= 1
    return count & 1


def blade_product(a: int, b: int, sig: Signature) -> tuple[int, int]:
    """Product of two basis blades: (sign, mask) with e_a e_b = sign * e_mask.

    The mask is the symmetric difference a ^ b; the sign combines the
    transposition parity of interleaving with the metric squares of the
    shared generators.
    """
    sign = -1 if _transposition_parity(a, b) else 1
    if (a & b & sig.negative_mask).bit_count() & 1:
        sign = -sign
    return sign, a ^ b


def blade_inverse(a: int, sig: Signature) -> tuple[int, int]:
    """Inverse of a basis blade: (sign, mask) with e_a * (sign * e_mask) = 1.

    Every basis blade squares to +1 or -1, so the inverse is the blade
    itself up to that sign.
    """
    square, _ = blade_product(a, a, sig)
    return square, a


@lru_cache(maxsize=None)
def _sign_table(p: int, q: int) -> np.ndarray:
    """Full (2^n, 2^n) int8 table of blade product signs for Cl(p,q)."""
    sig = Signature(p, q)
    masks = np.arange(sig.dim, dtype=np.uint64)
    a = masks[:, None]
    b = masks[None, :]
    swaps = np.zeros((sig.dim, sig.dim), dtype=np.uint32)
    for shift in range(1, sig.n):
        swaps += np.bitwise_count((a >> np.uint64(shift)) & b)
    swaps += np.bitwise_count(a & b & np.uint64(sig.negative_mask))
    table = np.where(swaps & 1, -1, 1).astype(np.int8)
    table.setflags(write=False)
    return table


def sign_table(sig: Signature) -> np.ndarray:
    """Read-only (2^n, 2^n) table: entry [a, b] is the sign of e_a e_b."""
    return _sign_table(sig.p, sig.q)


@lru_cache(maxsize=None)
def _reverse_signs(n: int) -> np.ndarray:
    """Per-mask reversion signs (-1)^(k(k-1)/2), k = grade."""
    grades = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)
    signs = np.where((grades * (grades - 1) // 2) & 1, -1, 1).astype(np.int8)
    signs.setflags(write=False)
    return signs


@lru_cache(maxsize=None)
def _grades(n: int) -> np.ndarray:
    grades = np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int8)
    grades.setflags(write=False)
    return grades


@lru_cache(maxsize=None)
def _reverse_norm_signs(p: int, q: int) -> np.ndarray:
    """Per-mask sign of reverse(e_A) e_A, the product of the metric squares."""
    sig = Signature(p, q)
    masks = np.arange(sig.dim, dtype=np.uint64)
    neg = np.bitwise_count(masks & np.uint64(sig.negative_mask))
    signs = np.where(neg & 1, -1, 1).astype(np.int8)
    signs.setflags(write=False)
    return signs


@lru_cache(maxsize=None)
def grade_masks(n: int, k: int) -> np.ndarray:
    """Ascending masks of all grade-k blades in an n-generator algebra."""
    if not 0 <= k <= n:
        raise ValueError(f"grade {k} outside 0..{n}")
    all_masks = np.arange(1 << n, dtype=np.int64)
    masks = all_masks[_grades(n) == k]
    masks.setflags(write=False)
    return masks


# ---------------------------------------------------------------------------
# Multivectors
# ---------------------------------------------------------------------------

class Multivector:
    """Immutable dense multivector: signature plus 2^n float64 coefficients."""

    __slots__ = ("sig", "_coeffs")

    def __init__(self, sig: Signature, coeffs: Iterable[float]):
        arr = np.array(coeffs, dtype=np.float64)
        if arr.shape != (sig.dim,):
            raise ValueError(f"expected {sig.dim} coefficients for Cl({sig.p},{sig.q}), got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "sig", sig)
        object.__setattr__(self, "_coeffs", arr)

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("Multivector is immutable")

    @property
    def coeffs(self) -> np.ndarray:
        """Read-only coefficient vector in mask order."""
        return self._coeffs

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, sig: Signature) -> Multivector:
        return cls(sig, np.zeros(sig.dim))

    @classmethod
    def scalar(cls, sig: Signature, value: float = 1.0) -> Multivector:
        coeffs = np.zeros(sig.dim)
        coeffs[0] = value
        return cls(sig, coeffs)

    @classmethod
    def basis(cls, sig: Signature, mask: int, coeff: float = 1.0) -> Multivector:
        if not 0 <= mask < sig.dim:
            raise ValueError(f"blade mask {mask} outside 0..{sig.dim - 1}")
        coeffs = np.zeros(sig.dim)
        coeffs[mask] = coeff
        return cls(sig, coeffs)

    @classmethod
    def from_terms(cls, sig: Signature, terms: Mapping[int, float]) -> Multivector:
        coeffs = np.zeros(sig.dim)
        for mask, value in terms.items():
            if not 0 <= mask < sig.dim:
                raise ValueError(f"blade mask {mask} outside 0..{sig.dim - 1}")
            coeffs[mask] += value
        return cls(sig, coeffs)

    @classmethod
    def vector(cls, sig: Signature, components: Iterable[float]) -> Multivector:
        """Grade-1 element from n vector components."""
        comp = np.asarray(list(components), dtype=np.float64)
        if comp.shape != (sig.n,):
            raise ValueError(f"expected {sig.n} vector components, got {comp.shape}")
        coeffs = np.zeros(sig.dim)
        coeffs[1 << np.arange(sig.n)] = comp
        return cls(sig, coeffs)

    # -- accessors ----------------------------------------------------------

    def coefficient(self, mask: int) -> float:
        return float(self._coeffs[mask])

    def scalar_part(self) -> float:
        return float(self._coeffs[0])

    def vector_components(self) -> np.ndarray:
        """The n grade-1 coefficients, in generator order."""
        return self._coeffs[1 << np.arange(self.sig.n)].copy()

    def terms(self, threshold: float = ZERO_THRESHOLD) -> Iterator[tuple[int, float]]:
        """(mask, coefficient) pairs above threshold, in (grade, mask) order."""
        grades = _grades(self.sig.n)
        order = np.lexsort((np.arange(self.sig.dim), grades))
        for mask in order:
            value = self._coeffs[mask]
            if abs(value) > threshold:
                yield int(mask), float(value)

    def max_abs(self) -> float:
        return float(np.max(np.abs(self._coeffs)))

    def isclose(self, other: Multivector, tol: float = ZERO_THRESHOLD) -> bool:
        self._check_sig(other)
        return bool(np.max(np.abs(self._coeffs - other._coeffs)) <= tol)

    # -- linear structure ----------------------------------------------------

    def _check_sig(self, other: Multivector) -> None:
        if self.sig != other.sig:
            raise ValueError(f"signature mismatch: Cl({self.sig.p},{self.sig.q}) vs Cl({other.sig.p},{other.sig.q})")

    def __add__(self, other: Multivector) -> Multivector:
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check_sig(other)
        return Multivector(self.sig, self._coeffs + other._coeffs)

    def __sub__(self, other: Multivector) -> Multivector:
        if not isinstance(other, Multivector):
            return NotImplemented
        self._check_sig(other)
        return Multivector(self.sig, self._coeffs - other._coeffs)

    def __neg__(self) -> Multivector:
        return Multivector(self.sig, -self._coeffs)

    def __mul__(self, other: Multivector | float | int) -> Multivector:
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        if isinstance(other, (int, float)):
            return Multivector(self.sig, self._coeffs * other)
        return NotImplemented

    def __rmul__(self, other: float | int) -> Multivector:
        if isinstance(other, (int, float)):
            return Multivector(self.sig, self._coeffs * other)
        return NotImplemented

    def __truediv__(self, other: float | int) -> Multivector:
        if isinstance(other, (int, float)):
            return Multivector(self.sig, self._coeffs / other)
        return NotImplemented

    # -- grade and involution operations --------------------------------------

    def grade_projection(self, k: int) -> Multivector:
        """Keep only the grade-k coefficients."""
        if not 0 <= k <= self.sig.n:
            raise ValueError(f"grade {k} outside 0..{self.sig.n}")
        keep = _grades(self.sig.n) == k
        return Multivector(self.sig, np.where(keep, self._coeffs, 0.0))

    def reverse(self) -> Multivector:
        """Reversion: grade k scaled by (-1)^(k(k-1)/2); reverses products."""
        return Multivector(self.sig, self._coeffs * _reverse_signs(self.sig.n))

    def center_projection(self) -> Multivector:
        """Projection onto the center: grade 0, plus grade n when n is odd."""
        n = self.sig.n
        grades = _grades(n)
        keep = grades == 0
        if n % 2 == 1:
            keep = keep | (grades == n)
        return Multivector(self.sig, np.where(keep, self._coeffs, 0.0))

    def even_projection(self) -> Multivector:
        return Multivector(self.sig, np.where(_grades(self.sig.n) % 2 == 0, self._coeffs, 0.0))

    def odd_part_max(self) -> float:
        """Largest absolute odd-grade coefficient."""
        odd = _grades(self.sig.n) % 2 == 1
        if not odd.any():
            return 0.0
        return float(np.max(np.abs(self._coeffs[odd])))

    def __repr__(self) -> str:
        parts = [f"{value:.6g}*{blade_name(mask)}" for mask, value in self.terms()]
        body = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"<{body} in Cl({self.sig.p},{self.sig.q})>"


def geometric_product(u: Multivector, v: Multivector) -> Multivector:
    """Bilinear extension of the blade product; associative, unit is 1."""
    u._check_sig(v)
    sig = u.sig
    ia = np.nonzero(u.coeffs)[0]
    ib = np.nonzero(v.coeffs)[0]
    if ia.size == 0 or ib.size == 0:
        return Multivector.zero(sig)
    table = _sign_table(sig.p, sig.q)
    masks = (ia[:, None] ^ ib[None, :]).ravel()
    values = (u.coeffs[ia][:, None] * v.coeffs[ib][None, :] * table[np.ix_(ia, ib)]).ravel()
    return Multivector(sig, np.bincount(masks, weights=values, minlength=sig.dim))


def reverse(u: Multivector) -> Multivector:
    return u.reverse()


def grade_project(u: Multivector, k: int) -> Multivector:
    return u.grade_projection(k)


def center_project(u: Multivector) -> Multivector:
    return u.center_projection()


def squared_norm(u: Multivector) -> float:
    """Scalar part of reverse(u) * u; indefinite when q > 0.

    Cross terms between distinct blades have no scalar part, so this reduces
    to a signed sum of squared coefficients and never needs a full product.
    """
    signs = _reverse_norm_signs(u.sig.p, u.sig.q)
    return float(np.dot(signs * u.coeffs, u.coeffs))


def exp_bivector(b: Multivector) -> Multivector:
    """Exponential of a pure grade-2 element.

    Power series with argument halving: the input is scaled by 2^-h until its
    coefficient inf-norm is at most 1, 20 series terms are summed, and the
    result is squared h times. Accuracy target is reverse(R)*R = 1 to 1e-12.
    """
    if np.any(b.coeffs[_grades(b.sig.n) != 2]):
        raise ValueError("exp_bivector requires a pure grade-2 argument")
    norm = b.max_abs()
    halvings = 0
    while norm > 1.0:
        norm /= 2.0
        halvings += 1
    x = b / (1 << halvings) if halvings else b
    result = Multivector.scalar(b.sig)
    term = Multivector.scalar(b.sig)
    for k in range(1, 20):
        term = term * x / k
        result = result + term
    for _ in range(halvings):
        result = result * result
    return result
