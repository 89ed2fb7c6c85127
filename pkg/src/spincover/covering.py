"""Two-sheeted covering between the spin group and SO+(p,q).

A rotor is an even multivector S with reverse(S) S = 1 whose conjugation
action maps grade 1 to grade 1. Conjugating the generators expands as
S e_a S^-1 = sum_b p_a^b e_b, and the coordinates p_a^b fill column a of a
matrix P in SO+(p,q); S and -S give the same P, so the inverse direction
recovers a pair of rotors.

Recovery probes the matrix with an even-grade blade F, assembling

    M_F = sum over k = 0..n, over row k-subsets B and column k-subsets A,
          of minor(P, B, A) * e_B e_F e^A

which is always proportional to the sought rotor; the proportionality
scalar can vanish for some F, so all even F are scanned and the candidate
with the largest reverse-norm wins. For n = 3 the sum collapses to the
cheaper first-order candidate

    L_F = e_F + sum over a, b of p_a^b e_b e_F e^a

with M_F = 2 L_F.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np

from .clifford_core import (
    Multivector,
    Signature,
    blade_grade,
    blade_name,
    grade_masks,
    sign_table,
    squared_norm,
)
from .matrix_group import (
    DEFAULT_TOLERANCE,
    OrthoMatrix,
    as_square_matrix,
    batched_minors,
    project_to_group,
    require_membership,
)

Method = Literal["general", "n3"]

#: Candidates with reverse-norm at or below RELATIVE_THRESHOLD x (2^n)^2
#: (scaled by 1/4 for the n=3 form) count as zero.
RELATIVE_THRESHOLD = 1e-18


class NoCandidateError(RuntimeError):
    """No probe blade produced a usable candidate (all reverse-norms ~ 0)."""


@dataclass(frozen=True)
class Rotor:
    """One of the two spin-group preimages of a matrix under the covering."""

    value: Multivector

    @property
    def sig(self) -> Signature:
        return self.value.sig

    @property
    def coeffs(self) -> np.ndarray:
        return self.value.coeffs

    def __neg__(self) -> Rotor:
        return Rotor(-self.value)

    def canonicalized(self) -> Rotor:
        """Fix the sign: largest-magnitude coefficient positive, ties by lowest mask."""
        lead = int(np.argmax(np.abs(self.value.coeffs)))
        if self.value.coeffs[lead] < 0:
            return Rotor(-self.value)
        return self

    def inverse(self) -> Multivector:
        """Reversion, which inverts unit rotors."""
        return self.value.reverse()

    def unit_residual(self) -> float:
        """Distance of reverse(S) * S from 1, over all components."""
        gram = self.value.reverse() * self.value
        scalar_defect = abs(gram.scalar_part() - 1.0)
        rest = (gram - gram.grade_projection(0)).max_abs()
        return max(scalar_defect, rest)

    @classmethod
    def checked(cls, value: Multivector, tol: float = DEFAULT_TOLERANCE) -> Rotor:
        """Wrap a multivector after verifying evenness and unit norm."""
        if value.odd_part_max() != 0.0:
            raise ValueError("rotor has odd-grade coefficients")
        rotor = cls(value)
        residual = rotor.unit_residual()
        if residual > tol:
            raise ValueError(f"reverse(S)*S deviates from 1 by {residual:.3e} (tolerance {tol:.3e})")
        return rotor


@dataclass(frozen=True)
class CandidateElement:
    """Unnormalized covering candidate for one probe blade F."""

    F: int
    M: Multivector
    normsq: float

    @property
    def blade(self) -> str:
        return blade_name(self.F)


@dataclass(frozen=True)
class Frame:
    """Images beta_a of the generators under one conjugation action."""

    sig: Signature
    beta: tuple[Multivector, ...]

    def __post_init__(self) -> None:
        if len(self.beta) != self.sig.n:
            raise ValueError(f"expected {self.sig.n} frame vectors, got {len(self.beta)}")
        for i, b in enumerate(self.beta):
            if b.sig != self.sig:
                raise ValueError(f"frame vector {i + 1} has signature Cl({b.sig.p},{b.sig.q})")
            residual = (b - b.grade_projection(1)).max_abs()
            if residual > DEFAULT_TOLERANCE:
                raise ValueError(f"frame vector {i + 1} is not grade 1 (residual {residual:.3e})")

    def coordinate_matrix(self) -> np.ndarray:
        """Matrix with column a holding the generator coordinates of beta_a."""
        return np.column_stack([b.vector_components() for b in self.beta])

    def gram_matrix(self) -> np.ndarray:
        """Symmetric matrix of scalar parts of beta_a beta_b."""
        n = self.sig.n
        gram = np.empty((n, n))
        for i in range(n):
            for j in range(i, n):
                gram[i, j] = gram[j, i] = (self.beta[i] * self.beta[j]).scalar_part()
        return gram


# ---------------------------------------------------------------------------
# Forward direction: rotor -> matrix
# ---------------------------------------------------------------------------

def forward_map(rotor: Rotor | Multivector, tol: float = DEFAULT_TOLERANCE) -> np.ndarray:
    """Matrix of the conjugation action: column a holds S e_a S^-1.

    Raises ValueError when reverse(S) S is not 1 within tol or when some
    conjugated generator picks up non-grade-1 components beyond tol.
    """
    value = rotor.value if isinstance(rotor, Rotor) else rotor
    sig = value.sig
    norm = squared_norm(value)
    if abs(norm - 1.0) > tol:
        raise ValueError(f"rotor norm reverse(S)*S = {norm:.12g} is not 1 within {tol:.3e}")
    inverse = value.reverse()
    columns = []
    worst = 0.0
    for slot in range(sig.n):
        image = value * Multivector.basis(sig, 1 << slot) * inverse
        residual = (image - image.grade_projection(1)).max_abs()
        worst = max(worst, residual)
        columns.append(image.vector_components())
    if worst > tol:
        raise ValueError(
            f"conjugation does not preserve grade 1 (residual {worst:.3e}); not a rotor"
        )
    return np.column_stack(columns)


# ---------------------------------------------------------------------------
# Inverse direction: matrix -> rotor
# ---------------------------------------------------------------------------

def _subset_mask_vector(subsets: list[tuple[int, ...]]) -> np.ndarray:
    return np.array([sum(1 << i for i in s) for s in subsets], dtype=np.int64)


def _minor_tables(arr: np.ndarray, n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    tables = []
    for k in range(n + 1):
        subsets, dets = batched_minors(arr, k)
        tables.append((_subset_mask_vector(subsets), dets))
    return tables


def _assemble_general(sig: Signature, tables: list[tuple[np.ndarray, np.ndarray]], F: int) -> Multivector:
    # One bincount per grade accumulates every minor(P,B,A) e_B e_F e^A term:
    # sign(e_B e_F) * sign(e_{B^F} e_A) * sign(e_A e_A) at mask B ^ F ^ A.
    table = sign_table(sig)
    total = np.zeros(sig.dim)
    for masks, dets in tables:
        b = masks[:, None]
        a = masks[None, :]
        signs = table[b, F] * table[b ^ F, a] * table[a, a]
        total += np.bincount(
            ((b ^ F) ^ a).ravel(), weights=(dets * signs).ravel(), minlength=sig.dim
        )
    return Multivector(sig, total)


def _candidate_from(sig: Signature, F: int, M: Multivector) -> CandidateElement:
    return CandidateElement(F, M, squared_norm(M))


def candidate_general(matrix: object, sig: Signature, F: int) -> CandidateElement:
    """Full-grade-sum candidate M_F for an even probe blade F."""
    if blade_grade(F) % 2:
        raise ValueError(f"probe blade {blade_name(F)} has odd grade")
    arr = _entries(matrix, sig)
    M = _assemble_general(sig, _minor_tables(arr, sig.n), F)
    return _candidate_from(sig, F, M)


def candidate_n3(matrix: object, sig: Signature, F: int) -> CandidateElement:
    """First-order candidate L_F, valid only for n = 3; M_F = 2 L_F."""
    if sig.n != 3:
        raise ValueError(f"the first-order candidate needs n = 3, got n = {sig.n}")
    if blade_grade(F) % 2:
        raise ValueError(f"probe blade {blade_name(F)} has odd grade")
    arr = _entries(matrix, sig)
    table = sign_table(sig)
    masks = np.int64(1) << np.arange(3, dtype=np.int64)
    b = masks[:, None]
    a = masks[None, :]
    signs = table[b, F] * table[b ^ F, a] * table[a, a]
    coeffs = np.bincount(((b ^ F) ^ a).ravel(), weights=(arr * signs).ravel(), minlength=sig.dim)
    coeffs[F] += 1.0
    return _candidate_from(sig, F, Multivector(sig, coeffs))


def even_blades(n: int) -> Iterator[int]:
    """All even-grade blade masks in ascending (grade, mask) order."""
    for k in range(0, n + 1, 2):
        for mask in grade_masks(n, k):
            yield int(mask)


def iter_candidates(matrix: object, sig: Signature, method: Method = "general") -> Iterator[CandidateElement]:
    """Candidates for every even probe blade, in ascending (grade, mask) order."""
    arr = _entries(matrix, sig)
    if method == "n3":
        if sig.n != 3:
            raise ValueError(f"method 'n3' needs n = 3, got n = {sig.n}")
        for F in even_blades(3):
            yield candidate_n3(arr, sig, F)
        return
    if method != "general":
        raise ValueError(f"unknown method {method!r}; expected 'general' or 'n3'")
    tables = _minor_tables(arr, sig.n)
    for F in even_blades(sig.n):
        yield _candidate_from(sig, F, _assemble_general(sig, tables, F))


def select_candidate(
    matrix: object,
    sig: Signature,
    method: Method = "general",
    early_exit: bool = False,
    threshold: float | None = None,
) -> CandidateElement:
    """The candidate with the largest reverse-norm over all even probe blades.

    Ties keep the earliest blade in (grade, mask) order. With early_exit,
    scanning stops once a candidate's reverse-norm reaches half the maximum
    possible value; for signatures with q = 0 no later candidate can beat
    that, so the selection is unchanged, but for q > 0 a later blade could
    (the flag stays off by default).

    Raises NoCandidateError when every candidate is below threshold, which
    cannot happen for a matrix actually inside SO+(p,q).
    """
    scale = 4.0 if method == "n3" else 1.0
    top = float(sig.dim) ** 2 / scale
    if threshold is None:
        threshold = RELATIVE_THRESHOLD * top
    best: CandidateElement | None = None
    for cand in iter_candidates(matrix, sig, method):
        if best is None or cand.normsq > best.normsq:
            best = cand
        if early_exit and best.normsq >= top / 2.0:
            break
    assert best is not None
    if not best.normsq > threshold:
        arr = _entries(matrix, sig)
        raise NoCandidateError(
            f"no nonzero covering candidate: best reverse-norm {best.normsq:.6g} at "
            f"F = {best.blade} (threshold {threshold:.6g}) for matrix\n{np.array2string(arr)}"
        )
    return best


def matrix_to_rotor(
    matrix: object,
    sig: Signature,
    method: Method = "general",
    tol: float = DEFAULT_TOLERANCE,
    validate: bool = True,
    project: bool = False,
    early_exit: bool = False,
) -> Rotor:
    """One of the two rotors covering the given SO+(p,q) matrix.

    The result is sign-canonicalized; the other preimage is its negation.
    With validate (the default) the matrix must pass membership first;
    project applies the polar-type group projection before validating.
    """
    arr = _entries(matrix, sig)
    if project:
        arr = project_to_group(arr, sig)
    if validate:
        require_membership(arr, sig, tol)
    cand = select_candidate(arr, sig, method=method, early_exit=early_exit)
    value = cand.M / math.sqrt(cand.normsq)
    return Rotor(value).canonicalized()


def rotor_from_frames(
    frame: Frame,
    method: Method = "general",
    tol: float = DEFAULT_TOLERANCE,
) -> Rotor:
    """Rotor sending each generator e_a to the frame vector beta_a.

    The frame's coordinate matrix must pass SO+(p,q) membership; a frame
    whose Gram matrix deviates from the metric fails the pseudo-orthogonality
    condition there.
    """
    matrix = frame.coordinate_matrix()
    require_membership(matrix, frame.sig, tol)
    return matrix_to_rotor(matrix, frame.sig, method=method, validate=False)


def _entries(matrix: object, sig: Signature) -> np.ndarray:
    if isinstance(matrix, OrthoMatrix):
        if matrix.sig != sig:
            raise ValueError(
                f"matrix signature Cl({matrix.sig.p},{matrix.sig.q}) does not match Cl({sig.p},{sig.q})"
            )
        return matrix.entries
    return as_square_matrix(matrix, sig.n)
