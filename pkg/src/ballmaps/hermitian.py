"""Hermitian coefficient-matrix forms, properness certificates, and ranks.

A Hermitian form represents a real polynomial sum c_{ab} z^a conj(z)^b as a
Hermitian matrix over a graded-lex monomial basis.  Properness of a rational
map is certified by dividing its form by the sphere defining function
|z|^2 - 1: the division recursion is exact in exact arithmetic, so a nonzero
remainder (beyond rounding noise) witnesses failure.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from itertools import combinations
from typing import Iterator, Mapping, Sequence

import numpy as np

from .maps import RationalMap, stacked_coefficients
from .polynomials import (
    MultiIndex,
    Polynomial,
    TAU_ZERO,
    grlex_key,
    grlex_monomials,
    multinomial,
)

#: Relative tolerance for the sphere-division remainder.
TAU_DIV = 1e-9

#: Relative eigenvalue threshold for signature counting.
TAU_SIG = 1e-8


class HermitianForm:
    """Hermitian matrix over a graded-lex monomial basis.

    ``basis[i]`` is the multi-index of the i-th monomial and ``mat[i, j]`` is
    the coefficient of z^basis[i] * conj(z^basis[j]).  The matrix is kept
    exactly Hermitian (symmetrized on construction).
    """

    __slots__ = ("nvars", "basis", "mat")

    def __init__(self, nvars: int, basis: Sequence[MultiIndex], mat: np.ndarray):
        basis = tuple(tuple(int(e) for e in b) for b in basis)
        mat = np.asarray(mat, dtype=complex)
        if mat.shape != (len(basis), len(basis)):
            raise ValueError("matrix shape does not match basis size")
        if list(basis) != sorted(basis, key=grlex_key):
            order = sorted(range(len(basis)), key=lambda i: grlex_key(basis[i]))
            basis = tuple(basis[i] for i in order)
            mat = mat[np.ix_(order, order)]
        mat = 0.5 * (mat + mat.conj().T)
        mat.setflags(write=False)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "mat", mat)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("HermitianForm is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "HermitianForm":
        return cls(nvars, [], np.zeros((0, 0), dtype=complex))

    @classmethod
    def from_entries(
        cls, nvars: int, entries: Mapping[tuple[MultiIndex, MultiIndex], complex]
    ) -> "HermitianForm":
        support: set[MultiIndex] = set()
        for a, b in entries:
            support.add(tuple(a))
            support.add(tuple(b))
        basis = sorted(support, key=grlex_key)
        index = {mono: i for i, mono in enumerate(basis)}
        mat = np.zeros((len(basis), len(basis)), dtype=complex)
        for (a, b), c in entries.items():
            if abs(c) > TAU_ZERO:
                mat[index[tuple(a)], index[tuple(b)]] += 0.5 * c
                mat[index[tuple(b)], index[tuple(a)]] += 0.5 * complex(c).conjugate()
        return cls(nvars, basis, mat).compressed()

    @classmethod
    def constant(cls, nvars: int, value: float) -> "HermitianForm":
        zero = (0,) * nvars
        return cls.from_entries(nvars, {(zero, zero): value})

    # -- queries -------------------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.basis)

    def entry(self, alpha: Sequence[int], beta: Sequence[int]) -> complex:
        try:
            i = self.basis.index(tuple(alpha))
            j = self.basis.index(tuple(beta))
        except ValueError:
            return 0.0 + 0.0j
        return complex(self.mat[i, j])

    def entries(self, tol: float = TAU_ZERO) -> Iterator[tuple[MultiIndex, MultiIndex, complex]]:
        rows, cols = np.nonzero(np.abs(self.mat) > tol)
        for i, j in zip(rows.tolist(), cols.tolist()):
            yield self.basis[i], self.basis[j], complex(self.mat[i, j])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.mat))) if self.size else 0.0

    def max_degree(self) -> int:
        return max((sum(b) for b in self.basis), default=0)

    def is_diagonal(self, tol: float) -> bool:
        if not self.size:
            return True
        off = self.mat - np.diag(np.diag(self.mat))
        return float(np.max(np.abs(off))) <= tol

    def evaluate(self, z: Sequence[complex]) -> float:
        vals = np.array(
            [np.prod([zc**e for zc, e in zip(z, b)]) for b in self.basis],
            dtype=complex,
        )
        return float((vals @ self.mat @ vals.conj()).real)

    def compressed(self, tol: float = TAU_ZERO) -> "HermitianForm":
        """Drop basis monomials whose row and column are entirely negligible."""
        if not self.size:
            return self
        keep = np.where(np.max(np.abs(self.mat), axis=0) > tol)[0]
        if len(keep) == self.size:
            return self
        basis = [self.basis[i] for i in keep.tolist()]
        return HermitianForm(self.nvars, basis, self.mat[np.ix_(keep, keep)])

    def __repr__(self) -> str:
        return f"HermitianForm(nvars={self.nvars}, basis_size={self.size})"

    # -- arithmetic ----------------------------------------------------------
    def _aligned(self, other: "HermitianForm") -> tuple[list[MultiIndex], np.ndarray, np.ndarray]:
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch between forms")
        basis = sorted(set(self.basis) | set(other.basis), key=grlex_key)
        index = {mono: i for i, mono in enumerate(basis)}

        def embed(h: HermitianForm) -> np.ndarray:
            out = np.zeros((len(basis), len(basis)), dtype=complex)
            if h.size:
                idx = np.array([index[b] for b in h.basis])
                out[np.ix_(idx, idx)] = h.mat
            return out

        return basis, embed(self), embed(other)

    def __add__(self, other: "HermitianForm") -> "HermitianForm":
        basis, a, b = self._aligned(other)
        return HermitianForm(self.nvars, basis, a + b).compressed()

    def __sub__(self, other: "HermitianForm") -> "HermitianForm":
        basis, a, b = self._aligned(other)
        return HermitianForm(self.nvars, basis, a - b).compressed()

    def scale(self, factor: float) -> "HermitianForm":
        return HermitianForm(self.nvars, self.basis, self.mat * float(factor))

    def __mul__(self, other: "HermitianForm") -> "HermitianForm":
        """Product as real polynomials in (z, conj z); for small forms."""
        if self.nvars != other.nvars:
            raise ValueError("variable-count mismatch between forms")
        acc: dict[tuple[MultiIndex, MultiIndex], complex] = {}
        for a1, b1, c1 in self.entries():
            for a2, b2, c2 in other.entries():
                key = (
                    tuple(x + y for x, y in zip(a1, a2)),
                    tuple(x + y for x, y in zip(b1, b2)),
                )
                acc[key] = acc.get(key, 0.0 + 0.0j) + c1 * c2
        return HermitianForm.from_entries(self.nvars, acc)

    def power(self, exponent: int) -> "HermitianForm":
        if exponent < 0:
            raise ValueError("negative form power")
        result = HermitianForm.constant(self.nvars, 1.0)
        for _ in range(exponent):
            result = result * self
        return result

    def max_entry_diff(self, other: "HermitianForm") -> float:
        _, a, b = self._aligned(other)
        if a.size == 0:
            return 0.0
        return float(np.max(np.abs(a - b)))

    # -- serialization --------------------------------------------------------
    def to_dict(self, tol: float = TAU_ZERO) -> dict:
        items = []
        for a, b, c in self.entries(tol):
            if grlex_key(a) <= grlex_key(b):
                items.append(
                    {"alpha": list(a), "beta": list(b), "re": c.real, "im": c.imag}
                )
        items.sort(key=lambda e: (grlex_key(tuple(e["alpha"])), grlex_key(tuple(e["beta"]))))
        return {"nvars": self.nvars, "entries": items}

    @classmethod
    def from_dict(cls, data: Mapping) -> "HermitianForm":
        nvars = int(data["nvars"])
        entries: dict[tuple[MultiIndex, MultiIndex], complex] = {}
        for item in data.get("entries", []):
            a = tuple(int(e) for e in item["alpha"])
            b = tuple(int(e) for e in item["beta"])
            c = complex(float(item.get("re", 0.0)), float(item.get("im", 0.0)))
            entries[(a, b)] = entries.get((a, b), 0.0) + c
            if a != b:
                entries[(b, a)] = entries.get((b, a), 0.0) + c.conjugate()
        return cls.from_entries(nvars, entries)


# ---------------------------------------------------------------------------
# standard forms
# ---------------------------------------------------------------------------
def sphere_form(nvars: int) -> HermitianForm:
    """|z|^2 - 1."""
    zero = (0,) * nvars
    entries: dict[tuple[MultiIndex, MultiIndex], complex] = {(zero, zero): -1.0}
    for i in range(nvars):
        e = [0] * nvars
        e[i] = 1
        entries[(tuple(e), tuple(e))] = 1.0
    return HermitianForm.from_entries(nvars, entries)


def norm_power_form(nvars: int, power: int) -> HermitianForm:
    """|z|^(2 power) as a diagonal form with multinomial coefficients."""
    entries = {
        (alpha, alpha): float(multinomial(alpha))
        for alpha in grlex_monomials(nvars, power)
        if sum(alpha) == power
    }
    return HermitianForm.from_entries(nvars, entries)


def gram_form(polys: Sequence[Polynomial], signs: Sequence[float] | None = None) -> HermitianForm:
    """sum_k signs_k p_k conj(p_k) as a Hermitian form (default all +1)."""
    if not polys:
        raise ValueError("gram_form needs at least one polynomial")
    nvars = polys[0].nvars
    support: set[MultiIndex] = set()
    for p in polys:
        support.update(p.terms)
    basis = sorted(support, key=grlex_key)
    index = {mono: i for i, mono in enumerate(basis)}
    mat = np.zeros((len(basis), len(basis)), dtype=complex)
    sgn = [1.0] * len(polys) if signs is None else list(signs)
    for s, p in zip(sgn, polys):
        if not p.terms:
            continue
        vec = np.zeros(len(basis), dtype=complex)
        for exp, coeff in p.terms.items():
            vec[index[exp]] = coeff
        mat += s * np.outer(vec, vec.conj())
    return HermitianForm(nvars, basis, mat).compressed()


def form_of(f: RationalMap) -> HermitianForm:
    """Hermitian form |p|^2_l - |q|^2 of a normalized rational map."""
    monos, A = stacked_coefficients(f)
    signs = np.array([1.0] * f.m + [-1.0] * f.l + [-1.0])
    scaled = A.multiply(signs[:, None]).tocsr()
    gram = (scaled.T @ A.conj()).toarray()
    return HermitianForm(f.n, monos, gram).compressed()


# ---------------------------------------------------------------------------
# division by the sphere and properness
# ---------------------------------------------------------------------------
def _dense_on_simplex(
    h: HermitianForm, max_deg: int
) -> tuple[list[MultiIndex], dict[MultiIndex, int], np.ndarray]:
    monos = grlex_monomials(h.nvars, max_deg)
    index = {m: i for i, m in enumerate(monos)}
    size = len(monos)
    C = np.zeros((size, size), dtype=complex)
    if h.size:
        idx = np.array([index[b] for b in h.basis])
        C[np.ix_(idx, idx)] = h.mat
    return monos, index, C


def quotient_by_sphere(h: HermitianForm) -> tuple[HermitianForm, HermitianForm]:
    """Divide h by |z|^2 - 1: returns (quotient u, remainder h - u*(|z|^2-1)).

    The quotient entries satisfy the ascending-bidegree recursion
    ``u[a, b] = sum_i u[a - e_i, b - e_i] - h[a, b]`` seeded with
    ``u[0, 0] = -h[0, 0]``; the remainder vanishes (to rounding) exactly when
    h vanishes on the unit sphere.
    """
    n = h.nvars
    if not h.size:
        return HermitianForm.zero(n), HermitianForm.zero(n)
    D = h.max_degree()
    monos, index, C = _dense_on_simplex(h, D)
    size = len(monos)

    # column gather maps: shift_i[j] = index of monos[j] - e_i (or -1)
    shifts = []
    for i in range(n):
        col = np.full(size, -1, dtype=np.int64)
        for j, b in enumerate(monos):
            if b[i]:
                prev = list(b)
                prev[i] -= 1
                col[j] = index[tuple(prev)]
        shifts.append(col)

    U = np.zeros((size, size), dtype=complex)
    interior = [j for j, b in enumerate(monos) if sum(b) <= D - 1]
    interior_mask = np.zeros(size, dtype=bool)
    interior_mask[interior] = True
    for a in interior:  # graded-lex order is ascending in degree
        alpha = monos[a]
        row = -C[a, :].copy()
        for i in range(n):
            if alpha[i]:
                prev = list(alpha)
                prev[i] -= 1
                pa = index[tuple(prev)]
                valid = shifts[i] >= 0
                row[valid] += U[pa, shifts[i][valid]]
        row[~interior_mask] = 0.0
        U[a, :] = row

    # remainder R = C - (u * (|z|^2 - 1)) over the full simplex
    R = C + U
    for i in range(n):
        valid = shifts[i] >= 0
        rows_with_prev = [a for a in range(size) if monos[a][i]]
        for a in rows_with_prev:
            prev = list(monos[a])
            prev[i] -= 1
            pa = index[tuple(prev)]
            R[a, valid] -= U[pa, shifts[i][valid]]

    quotient = HermitianForm(n, monos, U).compressed()
    remainder = HermitianForm(n, monos, R).compressed(tol=0.0)
    return quotient, remainder


@dataclass(frozen=True)
class ProperResult:
    proper: bool
    quotient: HermitianForm
    residual: float
    tolerance: float


def is_proper(f: RationalMap, tol_div: float = TAU_DIV) -> ProperResult:
    """Certify properness by exact division of the form by |z|^2 - 1."""
    h = form_of(f)
    quotient, remainder = quotient_by_sphere(h)
    residual = remainder.max_abs()
    threshold = tol_div * (1.0 + h.max_abs())
    proper = residual <= threshold
    if proper:
        # the denominator-degree bound holds for maps fixing the origin; a
        # violation there (or a vanishing form) flags a representation that
        # cannot be in lowest terms
        if h.max_abs() <= TAU_ZERO:
            warnings.warn(
                "form is identically zero; numerator and denominator share "
                "a unimodular factor and cannot be in lowest terms",
                stacklevel=2,
            )
        elif (
            f.degree >= 1
            and f.maps_origin_to_zero()
            and f.denominator.degree > f.degree - 1
        ):
            warnings.warn(
                "origin-fixing proper map with denominator degree exceeding "
                "degree - 1; the representation is unlikely to be in lowest terms",
                stacklevel=2,
            )
    return ProperResult(proper, quotient, residual, threshold)


# ---------------------------------------------------------------------------
# signature and ranks
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Signature:
    positive: int
    negative: int
    zero: int
    margin: float

    @property
    def rank(self) -> int:
        return self.positive + self.negative

    def to_dict(self) -> dict:
        return {
            "positive": self.positive,
            "negative": self.negative,
            "zero": self.zero,
            "margin": self.margin,
        }


def signature(h: HermitianForm, tol_sig: float = TAU_SIG) -> Signature:
    """Eigenvalue signature with a relative zero threshold.

    ``margin`` is the smallest |eigenvalue| / spectral norm among eigenvalues
    classified nonzero (infinity when all are zero); callers can compare it
    with ``tol_sig`` to detect borderline classifications.
    """
    if not h.size:
        return Signature(0, 0, 0, math.inf)
    eigs = np.linalg.eigvalsh(h.mat)
    scale = float(np.max(np.abs(eigs))) if len(eigs) else 0.0
    if scale == 0.0:
        return Signature(0, 0, len(eigs), math.inf)
    cut = tol_sig * scale
    pos = int(np.sum(eigs > cut))
    neg = int(np.sum(eigs < -cut))
    zero = len(eigs) - pos - neg
    nonzero = np.abs(eigs)[np.abs(eigs) > cut]
    margin = float(np.min(nonzero) / scale) if len(nonzero) else math.inf
    return Signature(pos, neg, zero, margin)


def hermitian_rank(f: RationalMap, tol_sig: float = TAU_SIG) -> int:
    return signature(form_of(f), tol_sig).rank


def image_rank(f: RationalMap, tol_sig: float = TAU_SIG, check: bool = True) -> int:
    """Smallest affine dimension containing the image (true balls only).

    Computed as the rank of the stacked coefficient matrix of (p, q) minus
    one; when ``check`` is set the result is compared against
    hermitian_rank - 1 and a warning is emitted on mismatch.
    """
    if f.l != 0:
        raise ValueError("image rank is defined for true-ball targets (l = 0)")
    _, A = stacked_coefficients(f)
    sing = np.linalg.svd(A.toarray(), compute_uv=False)
    scale = float(sing[0]) if len(sing) else 0.0
    rank = int(np.sum(sing > tol_sig * max(1.0, scale)))
    result = rank - 1
    if check:
        hr = hermitian_rank(f, tol_sig)
        if hr != result + 1:
            warnings.warn(
                f"image rank {result} inconsistent with hermitian rank {hr}",
                stacklevel=2,
            )
    return result


# ---------------------------------------------------------------------------
# tensor products of automorphisms
# ---------------------------------------------------------------------------
def _center_factor_forms(
    points: Sequence[Sequence[complex]], nvars: int
) -> tuple[list[float], list[HermitianForm]]:
    cs: list[float] = []
    omegas: list[HermitianForm] = []
    zero = (0,) * nvars
    for a in points:
        a = np.asarray(a, dtype=complex).reshape(-1)
        if a.shape[0] != nvars:
            raise ValueError("all centers must share the source dimension")
        norm2 = float(np.vdot(a, a).real)
        if norm2 >= 1.0:
            raise ValueError("centers must lie inside the unit ball")
        cs.append(1.0 - norm2)
        entries: dict[tuple[MultiIndex, MultiIndex], complex] = {(zero, zero): 1.0}
        for i in range(nvars):
            ei = [0] * nvars
            ei[i] = 1
            ei = tuple(ei)
            entries[(ei, zero)] = entries.get((ei, zero), 0.0) - a[i].conjugate()
            entries[(zero, ei)] = entries.get((zero, ei), 0.0) - a[i]
            for j in range(nvars):
                ej = [0] * nvars
                ej[j] = 1
                ej = tuple(ej)
                entries[(ei, ej)] = entries.get((ei, ej), 0.0) + a[i].conjugate() * a[j]
        omegas.append(HermitianForm.from_entries(nvars, entries))
    return cs, omegas


def automorphism_tensor_form(points: Sequence[Sequence[complex]]) -> HermitianForm:
    """Form of the tensor product of the ball automorphisms centered at the points.

    Equals prod_j (c_j rho + omega_j) - prod_j omega_j with c_j = 1 - |a_j|^2
    and omega_j = |1 - <z, a_j>|^2; centers at the origin contribute the
    factor (rho + 1).
    """
    if not points:
        raise ValueError("at least one center is required")
    nvars = len(points[0])
    cs, omegas = _center_factor_forms(points, nvars)
    rho = sphere_form(nvars)
    prod_mixed = HermitianForm.constant(nvars, 1.0)
    prod_omega = HermitianForm.constant(nvars, 1.0)
    for c, omega in zip(cs, omegas):
        prod_mixed = prod_mixed * (rho.scale(c) + omega)
        prod_omega = prod_omega * omega
    return prod_mixed - prod_omega


def automorphism_tensor_rho_expansion(
    points: Sequence[Sequence[complex]],
) -> list[HermitianForm]:
    """Coefficients B_k of rho^k in the tensor-of-automorphisms form.

    B_0 is identically zero and B_K equals the constant prod_j c_j.
    """
    if not points:
        raise ValueError("at least one center is required")
    nvars = len(points[0])
    cs, omegas = _center_factor_forms(points, nvars)
    K = len(points)
    out: list[HermitianForm] = [HermitianForm.zero(nvars)]
    for k in range(1, K + 1):
        acc = HermitianForm.zero(nvars)
        for subset in combinations(range(K), k):
            weight = 1.0
            for j in subset:
                weight *= cs[j]
            term = HermitianForm.constant(nvars, weight)
            for j in range(K):
                if j not in subset:
                    term = term * omegas[j]
            acc = acc + term
        out.append(acc)
    return out
