"""Sampling and verification helpers: deterministic rotors, covering residual
checks, the direct frame expansion, and the selfcheck suites behind the CLI.

Randomness comes from SplitMix64 with fixed constants so that identical seeds
reproduce identical samples on any platform; generator state is explicit and
never global.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .clifford_core import (
    Multivector,
    Signature,
    blade_inverse,
    exp_bivector,
    grade_masks,
    squared_norm,
)
from .covering import (
    Frame,
    Rotor,
    candidate_general,
    candidate_n3,
    even_blades,
    forward_map,
    matrix_to_rotor,
)

_MASK64 = (1 << 64) - 1


class SplitMix64:
    """64-bit counter-based generator (constants from the reference design)."""

    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return (z ^ (z >> 31)) & _MASK64

    def next_double(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_symmetric(self) -> float:
        """Uniform in [-1, 1)."""
        return 2.0 * self.next_double() - 1.0


def sample_rotor(sig: Signature, seed: int) -> Rotor:
    """Deterministic random rotor: exponential of a random bivector.

    Bivector coefficients are uniform in [-1, 1] scaled by 0.5, which keeps
    the sampled rotors away from huge boost factors so that round-trip
    residuals stay near machine precision.
    """
    rng = SplitMix64(seed)
    coeffs = np.zeros(sig.dim)
    if sig.n >= 2:
        for mask in grade_masks(sig.n, 2):
            coeffs[mask] = 0.5 * rng.next_symmetric()
    return Rotor(exp_bivector(Multivector(sig, coeffs)))


def sample_matrix(sig: Signature, seed: int) -> np.ndarray:
    """Deterministic random SO+(p,q) matrix (the image of a sampled rotor)."""
    return forward_map(sample_rotor(sig, seed))


def sample_multivector(sig: Signature, rng: SplitMix64, scale: float = 0.25) -> Multivector:
    """Dense random multivector with coefficients uniform in [-scale, scale]."""
    coeffs = np.array([scale * rng.next_symmetric() for _ in range(sig.dim)])
    return Multivector(sig, coeffs)


@dataclass(frozen=True)
class CoveringReport:
    """Per-generator residuals of S e_a S^-1 against the matrix columns."""

    residuals: tuple[float, ...]

    @property
    def max_residual(self) -> float:
        return max(self.residuals)


def verify_covering(rotor: Rotor | Multivector, matrix: object) -> CoveringReport:
    """Residual of the covering relation for each generator."""
    value = rotor.value if isinstance(rotor, Rotor) else rotor
    sig = value.sig
    arr = np.asarray(matrix, dtype=np.float64)
    if arr.shape != (sig.n, sig.n):
        raise ValueError(f"expected a {sig.n}x{sig.n} matrix, got shape {arr.shape}")
    inverse = value.reverse() / squared_norm(value)
    residuals = []
    for slot in range(sig.n):
        image = value * Multivector.basis(sig, 1 << slot) * inverse
        expected = Multivector.vector(sig, arr[:, slot])
        residuals.append((image - expected).max_abs())
    return CoveringReport(tuple(residuals))


def frame_from_rotor(rotor: Rotor | Multivector) -> Frame:
    """The frame of conjugated generators beta_a = S e_a reverse(S)."""
    value = rotor.value if isinstance(rotor, Rotor) else rotor
    sig = value.sig
    inverse = value.reverse()
    beta = tuple(
        (value * Multivector.basis(sig, 1 << slot) * inverse).grade_projection(1)
        for slot in range(sig.n)
    )
    return Frame(sig, beta)


def corollary_expansion(frame: Frame, F: int) -> Multivector:
    """Direct probe expansion over frame products: sum of beta_A e_F e^A.

    beta_A is the geometric product of the frame vectors named by the mask A
    (empty product = 1). Agrees with the general candidate built from the
    frame's coordinate matrix; quadratic cost, used as an independent
    cross-check.
    """
    sig = frame.sig
    total = Multivector.zero(sig)
    probe = Multivector.basis(sig, F)
    for a_mask in range(sig.dim):
        beta_prod = Multivector.scalar(sig)
        for slot in range(sig.n):
            if a_mask >> slot & 1:
                beta_prod = beta_prod * frame.beta[slot]
        sign, _ = blade_inverse(a_mask, sig)
        total = total + beta_prod * probe * Multivector.basis(sig, a_mask, float(sign))
    return total


# ---------------------------------------------------------------------------
# Selfcheck suites
# ---------------------------------------------------------------------------

ROUND_TRIP_TOLERANCE = 1e-9
AGREEMENT_TOLERANCE = 1e-10
ALGEBRA_TOLERANCE = 1e-12


def rotor_distance(x: Rotor | Multivector, y: Rotor | Multivector) -> float:
    """Coefficientwise distance up to the covering's global sign."""
    xv = x.value if isinstance(x, Rotor) else x
    yv = y.value if isinstance(y, Rotor) else y
    return min((xv - yv).max_abs(), (xv + yv).max_abs())


def _round_trip_suite(sig: Signature, trials: int, seed: int) -> float:
    worst = 0.0
    for t in range(trials):
        rotor = sample_rotor(sig, seed + t)
        recovered = matrix_to_rotor(forward_map(rotor), sig, validate=False)
        worst = max(worst, rotor_distance(rotor, recovered))
    return worst


def _method_agreement_suite(sig: Signature, trials: int, seed: int) -> float:
    worst = 0.0
    for t in range(trials):
        matrix = sample_matrix(sig, seed + t)
        for F in even_blades(3):
            general = candidate_general(matrix, sig, F)
            first_order = candidate_n3(matrix, sig, F)
            worst = max(worst, (general.M - 2.0 * first_order.M).max_abs())
        worst = max(
            worst,
            rotor_distance(
                matrix_to_rotor(matrix, sig, method="general", validate=False),
                matrix_to_rotor(matrix, sig, method="n3", validate=False),
            ),
        )
    return worst


def anticommutation_defect(sig: Signature) -> int:
    """Structural check of e_a e_b + e_b e_a = 2 eta_ab; 0 when exact."""
    defect = 0
    for a in range(sig.n):
        for b in range(sig.n):
            ea = Multivector.basis(sig, 1 << a)
            eb = Multivector.basis(sig, 1 << b)
            anti = ea * eb + eb * ea
            expected = Multivector.scalar(sig, 2.0 * (sig.metric(a + 1) if a == b else 0.0))
            if (anti - expected).max_abs() != 0.0:
                defect += 1
    return defect


def center_sum(u: Multivector) -> Multivector:
    """Direct evaluation of sum over all blades A of e_A u e^A."""
    sig = u.sig
    total = Multivector.zero(sig)
    for a_mask in range(sig.dim):
        sign, _ = blade_inverse(a_mask, sig)
        total = total + Multivector.basis(sig, a_mask) * u * Multivector.basis(sig, a_mask, float(sign))
    return total


def _algebra_suite(sig: Signature, trials: int, seed: int) -> float:
    if anticommutation_defect(sig):
        return float("inf")
    rng = SplitMix64(seed)
    worst = 0.0
    for _ in range(trials):
        u = sample_multivector(sig, rng)
        v = sample_multivector(sig, rng)
        w = sample_multivector(sig, rng)
        worst = max(worst, ((u * v) * w - u * (v * w)).max_abs())
        worst = max(worst, ((u * v).reverse() - v.reverse() * u.reverse()).max_abs())
        worst = max(worst, (center_sum(u) - float(sig.dim) * u.center_projection()).max_abs())
    return worst


def run_selfcheck(sig: Signature, trials: int = 100, seed: int = 1) -> dict:
    """All suites for one signature; the returned dict mirrors the CLI JSON."""
    suites: dict[str, dict] = {}
    rt = _round_trip_suite(sig, trials, seed)
    suites["round_trip"] = {
        "max_residual": rt,
        "tolerance": ROUND_TRIP_TOLERANCE,
        "ok": rt <= ROUND_TRIP_TOLERANCE,
    }
    if sig.n == 3:
        agree = _method_agreement_suite(sig, trials, seed + 1_000_003)
        suites["method_agreement"] = {
            "max_residual": agree,
            "tolerance": AGREEMENT_TOLERANCE,
            "ok": agree <= AGREEMENT_TOLERANCE,
        }
    alg = _algebra_suite(sig, trials, seed + 2_000_003)
    suites["algebra_laws"] = {
        "max_residual": alg,
        "tolerance": ALGEBRA_TOLERANCE,
        "ok": alg <= ALGEBRA_TOLERANCE,
    }
    return {
        "p": sig.p,
        "q": sig.q,
        "trials": trials,
        "seed": seed,
        "suites": suites,
        "ok": all(s["ok"] for s in suites.values()),
    }
