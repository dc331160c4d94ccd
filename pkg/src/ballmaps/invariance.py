"""Invariance structure of rational proper maps.

Membership in the Hermitian invariant group is decided through form
proportionality: gamma belongs iff the form of f o gamma is a constant
multiple of the form of f (the constant is 1 for unitary gamma).  On top of
that single predicate the module computes diagonal-torus and permutation
stabilizers, detects full-torus / full-unitary / block-unitary invariance,
bounds the source rank, runs the origin-moving necessary conditions, and
emits the polynomial equation system cutting out the full group inside the
projective automorphism group.
"""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import lattice
from .hermitian import HermitianForm, form_of
from .maps import (
    BallAutomorphism,
    MapConstructionError,
    RationalMap,
    compose_source,
    compose_target,
)
from .polynomials import (
    MultiIndex,
    Polynomial,
    TAU_EQ,
    TAU_ZERO,
    grlex_key,
    homogenize,
    multinomial,
    polys_close,
)

#: Tolerance for matrix-equality hashing in group closure.
TAU_GROUP = 1e-7

#: Permutation enumeration is capped at this source dimension.
MAX_PERMUTATION_DIM = 8


class CapabilityError(ValueError):
    """Raised when a request exceeds a documented capability cap."""


class GroupClosureError(RuntimeError):
    """Raised when closing a generating set exceeds the element cap."""


# ---------------------------------------------------------------------------
# membership
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class MembershipResult:
    member: bool
    c_gamma: float
    deviation: float

    def __bool__(self) -> bool:
        return self.member


def _form_ratio_test(
    hf: HermitianForm, hg: HermitianForm, tol: float
) -> tuple[bool, float, float]:
    """Is hg = c * hf for a constant anchored at hf's largest entry?

    Two Hermitian forms can only be proportional by a real constant, so the
    anchor ratio is projected to its real part before comparing.
    """
    if not hf.size:
        return hg.max_abs() <= tol, 1.0, hg.max_abs()
    flat = int(np.argmax(np.abs(hf.mat)))
    i, j = divmod(flat, hf.size)
    anchor = complex(hf.mat[i, j])
    c = float((hg.entry(hf.basis[i], hf.basis[j]) / anchor).real)
    deviation = hg.max_entry_diff(hf.scale(c))
    scale = max(1.0, hf.max_abs(), hg.max_abs())
    return deviation <= tol * scale, c, deviation


def membership(
    f: RationalMap, gamma: BallAutomorphism, tol: float = TAU_EQ
) -> MembershipResult:
    """Decide Hermitian-invariance membership of a source automorphism.

    For true-ball targets the criterion is proportionality of the composed
    form to the original form; for generalized targets only unitary gamma is
    supported, with direct form equality (the constant is forced to 1).
    """
    if gamma.dim != f.n:
        raise MapConstructionError("automorphism dimension differs from map source")
    if f.l > 0 and gamma.moves_origin(tol):
        raise MapConstructionError(
            "membership for generalized-ball targets supports only unitary automorphisms"
        )
    hf = form_of(f)
    hg = form_of(compose_source(f, gamma))
    member, c, deviation = _form_ratio_test(hf, hg, tol)
    if member and not gamma.moves_origin(tol) and abs(c - 1.0) > 10.0 * tol:
        warnings.warn(
            f"unitary member with proportionality constant {c} far from 1",
            stacklevel=2,
        )
    return MembershipResult(member, c, deviation)


def _permute_index(alpha: MultiIndex, perm: Sequence[int]) -> MultiIndex:
    out = [0] * len(alpha)
    for i, e in enumerate(alpha):
        out[perm[i]] = e
    return tuple(out)


def _form_permutation_invariant(
    h: HermitianForm, perm: Sequence[int], tol: float
) -> bool:
    """Fast membership test for coordinate permutations via index relabeling."""
    index = {b: i for i, b in enumerate(h.basis)}
    scale = max(1.0, h.max_abs())
    rows, cols = np.nonzero(np.abs(h.mat) > TAU_ZERO)
    for i, j in zip(rows.tolist(), cols.tolist()):
        a = _permute_index(h.basis[i], perm)
        b = _permute_index(h.basis[j], perm)
        ii = index.get(a)
        jj = index.get(b)
        target = h.mat[ii, jj] if ii is not None and jj is not None else 0.0
        if abs(h.mat[i, j] - target) > tol * scale:
            return False
    return True


# ---------------------------------------------------------------------------
# stabilizer structures
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class TorusSubgroup:
    """Subgroup of the diagonal n-torus cut out by integer congruences."""

    n: int
    rows: tuple[MultiIndex, ...]
    torus_dim: int
    finite_orders: tuple[int, ...]
    finite_generators: tuple[tuple[float, ...], ...]
    torus_directions: tuple[tuple[int, ...], ...]

    @classmethod
    def from_rows(cls, rows: Iterable[Sequence[int]], n: int) -> "TorusSubgroup":
        unique = tuple(sorted({tuple(int(x) for x in r) for r in rows if any(r)}))
        dim, orders, gens, dirs = lattice.torus_annihilator(unique, n)
        return cls(
            n,
            unique,
            dim,
            tuple(orders),
            tuple(tuple(g) for g in gens),
            tuple(tuple(d) for d in dirs),
        )

    @property
    def is_full_torus(self) -> bool:
        return self.torus_dim == self.n

    @property
    def is_trivial(self) -> bool:
        return self.torus_dim == 0 and not self.finite_orders

    @property
    def order(self) -> int | None:
        """Number of elements, or None when a positive-dimensional torus remains."""
        if self.torus_dim:
            return None
        out = 1
        for d in self.finite_orders:
            out *= d
        return out

    def contains(self, theta: Sequence[float], tol: float = TAU_EQ) -> bool:
        return lattice.annihilates(self.rows, theta, tol)

    def element_matrices(self, cap: int = 512) -> list[np.ndarray]:
        """All elements as diagonal unitaries (finite subgroups only)."""
        if self.order is None:
            raise CapabilityError("subgroup is infinite")
        if self.order > cap:
            raise CapabilityError(f"subgroup order {self.order} exceeds cap {cap}")
        ranges = [range(d) for d in self.finite_orders]
        combos = itertools.product(*ranges) if ranges else [()]
        out: list[np.ndarray] = []
        for ks in combos:
            theta = np.zeros(self.n)
            for k, gen in zip(ks, self.finite_generators):
                theta = theta + k * np.array(gen)
            m = np.diag(np.exp(1j * theta))
            if not any(np.max(np.abs(m - x)) < 1e-9 for x in out):
                out.append(m)
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "torus_dim": self.torus_dim,
            "finite_orders": list(self.finite_orders),
            "finite_generators": [list(g) for g in self.finite_generators],
            "torus_directions": [list(d) for d in self.torus_directions],
            "order": self.order,
            "lattice_rows": [list(r) for r in self.rows],
        }


@dataclass(frozen=True)
class BlockPartition:
    """Partition of the source variables into maximal block-invariant groups."""

    blocks: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        flat = sorted(i for b in self.blocks for i in b)
        n = len(flat)
        if flat != list(range(n)):
            raise ValueError("blocks must partition the variable indices")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    def to_dict(self) -> dict:
        return {"blocks": [list(b) for b in self.blocks]}


# ---------------------------------------------------------------------------
# stabilizer computations
# ---------------------------------------------------------------------------
def diagonal_stabilizer(f: RationalMap) -> TorusSubgroup:
    """Diagonal unitaries preserving the form: lattice of exponent differences."""
    h = form_of(f)
    rows = []
    for a, b, _ in h.entries():
        diff = tuple(x - y for x, y in zip(a, b))
        if any(diff):
            rows.append(diff)
    return TorusSubgroup.from_rows(rows, f.n)


def permutation_stabilizer(f: RationalMap, tol: float = TAU_EQ) -> list[tuple[int, ...]]:
    """All coordinate permutations preserving the form (n <= 8)."""
    if f.n > MAX_PERMUTATION_DIM:
        raise CapabilityError(
            f"permutation enumeration is capped at n <= {MAX_PERMUTATION_DIM}"
        )
    h = form_of(f)
    return [
        perm
        for perm in itertools.permutations(range(f.n))
        if _form_permutation_invariant(h, perm, tol)
    ]


def strict_diagonal_stabilizer(f: RationalMap) -> TorusSubgroup:
    """Diagonal unitaries gamma with f o gamma = f exactly (coefficientwise)."""
    rows = []
    for p in list(f.numerator) + [f.denominator]:
        for exp in p.terms:
            if any(exp):
                rows.append(exp)
    return TorusSubgroup.from_rows(rows, f.n)


def strict_permutation_stabilizer(
    f: RationalMap, tol: float = TAU_EQ
) -> list[tuple[int, ...]]:
    """Coordinate permutations with f o sigma = f componentwise (n <= 8)."""
    if f.n > MAX_PERMUTATION_DIM:
        raise CapabilityError(
            f"permutation enumeration is capped at n <= {MAX_PERMUTATION_DIM}"
        )
    out = []
    for perm in itertools.permutations(range(f.n)):
        ok = all(
            polys_close(p.permute_variables(perm), p, tol)
            for p in list(f.numerator) + [f.denominator]
        )
        if ok:
            out.append(perm)
    return out


@dataclass(frozen=True)
class StrictStabilizer:
    diagonal: TorusSubgroup
    permutations: tuple[tuple[int, ...], ...] | None  # None when enumeration skipped

    def to_dict(self) -> dict:
        return {
            "diagonal": self.diagonal.to_dict(),
            "permutations": None
            if self.permutations is None
            else [list(p) for p in self.permutations],
        }


def strict_stabilizer(
    f: RationalMap, tol: float = TAU_EQ, skip_permutations_over_cap: bool = False
) -> StrictStabilizer:
    """Diagonal and permutation parts of the exact invariance group f o g = f.

    With ``skip_permutations_over_cap`` the permutation enumeration is
    replaced by None beyond the n <= 8 cap instead of raising.
    """
    if skip_permutations_over_cap and f.n > MAX_PERMUTATION_DIM:
        return StrictStabilizer(strict_diagonal_stabilizer(f), None)
    return StrictStabilizer(
        strict_diagonal_stabilizer(f),
        tuple(strict_permutation_stabilizer(f, tol)),
    )


# ---------------------------------------------------------------------------
# structural tests
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class TorusTestResult:
    is_torus_invariant: bool
    monomials: tuple[tuple[float, MultiIndex], ...] | None

    def to_dict(self) -> dict:
        return {
            "is_torus_invariant": self.is_torus_invariant,
            "monomials": None
            if self.monomials is None
            else [{"weight": w, "exponent": list(a)} for w, a in self.monomials],
        }


def torus_test(f: RationalMap, tol: float = TAU_EQ) -> TorusTestResult:
    """Full-torus invariance: the form is diagonal over the monomial basis.

    When the map is polynomial with f(0) = 0 the equivalent monomial-map data
    (weights and exponents) is read off the diagonal.
    """
    h = form_of(f)
    diagonal = h.is_diagonal(tol * max(1.0, h.max_abs()))
    monomials = None
    if diagonal and f.is_polynomial(tol) and f.maps_origin_to_zero(tol):
        data = []
        for i, alpha in enumerate(h.basis):
            if not any(alpha):
                continue
            value = float(h.mat[i, i].real)
            if value > tol:
                data.append((math.sqrt(value), alpha))
        monomials = tuple(data)
    return TorusTestResult(diagonal, monomials)


@dataclass(frozen=True)
class FullUnitaryTestResult:
    is_unitary_invariant: bool
    powers: tuple[tuple[float, int], ...] | None

    def to_dict(self) -> dict:
        return {
            "is_unitary_invariant": self.is_unitary_invariant,
            "powers": None
            if self.powers is None
            else [{"weight": w, "power": m} for w, m in self.powers],
        }


def full_unitary_test(f: RationalMap, tol: float = TAU_EQ) -> FullUnitaryTestResult:
    """Full-unitary invariance: the form is a polynomial in |z|^2.

    Requires every off-diagonal entry to vanish and each total degree to
    carry diagonal entries proportional to the multinomial pattern.  The
    returned powers are the weights of the equivalent orthogonal sum of
    tensor powers.  A true-ball map not fixing the origin is re-centered by a
    target automorphism before testing.
    """
    g = f
    if f.l == 0 and not f.maps_origin_to_zero(tol):
        f0 = f.value_at([0.0] * f.n)
        if float(np.linalg.norm(f0)) < 1.0:
            g = compose_target(f, BallAutomorphism(np.eye(f.target_dim), f0))
    h = form_of(g)
    scale = max(1.0, h.max_abs())
    if not h.is_diagonal(tol * scale):
        return FullUnitaryTestResult(False, None)
    by_degree: dict[int, dict[MultiIndex, float]] = {}
    for i, alpha in enumerate(h.basis):
        by_degree.setdefault(sum(alpha), {})[alpha] = float(h.mat[i, i].real)
    max_deg = max(by_degree, default=0)
    powers: list[tuple[float, int]] = []
    from .polynomials import degree_monomials

    for t in range(max_deg + 1):
        present = by_degree.get(t, {})
        values = [
            present.get(alpha, 0.0) / multinomial(alpha)
            for alpha in degree_monomials(g.n, t)
        ]
        lam = values[0]
        if any(abs(v - lam) > tol * scale for v in values):
            return FullUnitaryTestResult(False, None)
        if t == 0:
            continue  # the constant slot carries -|q(0)|^2, not a tensor power
        if lam > tol * scale:
            powers.append((math.sqrt(lam), t))
    return FullUnitaryTestResult(True, tuple(powers))


def _rotation_derivation_vanishes(
    h: HermitianForm, i: int, j: int, tol: float
) -> bool:
    """Does the derivation z_i d/dz_j - conj(z_j) d/dconj(z_i) kill the form?"""
    acc: dict[tuple[MultiIndex, MultiIndex], complex] = {}
    for a, b, c in h.entries():
        if a[j]:
            na = list(a)
            na[j] -= 1
            na[i] += 1
            key = (tuple(na), b)
            acc[key] = acc.get(key, 0.0) + c * a[j]
        if b[i]:
            nb = list(b)
            nb[i] -= 1
            nb[j] += 1
            key = (a, tuple(nb))
            acc[key] = acc.get(key, 0.0) - c * b[i]
    residual = max((abs(v) for v in acc.values()), default=0.0)
    return residual <= tol


def _phase_invariant(h: HermitianForm, i: int, tol: float) -> bool:
    for a, b, c in h.entries():
        if a[i] != b[i] and abs(c) > tol:
            return False
    return True


def block_partition(f: RationalMap, tol: float = TAU_EQ) -> BlockPartition:
    """Maximal variable blocks on which the form is block-unitary invariant.

    Two variables merge when both infinitesimal rotations mixing them and
    both individual phase rotations annihilate the form; merged pairs close
    up into blocks (invariance under the connected block-unitary group is
    exactly infinitesimal invariance).
    """
    h = form_of(f)
    n = f.n
    scale = max(1.0, h.max_abs())
    cut = tol * scale
    phase_ok = [_phase_invariant(h, i, cut) for i in range(n)]
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if not (phase_ok[i] and phase_ok[j]):
                continue
            if _rotation_derivation_vanishes(h, i, j, cut) and _rotation_derivation_vanishes(
                h, j, i, cut
            ):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    blocks = tuple(tuple(sorted(g)) for g in sorted(groups.values(), key=lambda g: g[0]))
    return BlockPartition(blocks)


def source_rank_upper(
    f: RationalMap,
    conjugator: BallAutomorphism | None = None,
    tol: float = TAU_EQ,
) -> int:
    """Upper bound n - sum(block size - 1) from detected block invariance.

    This bound does not search over conjugating automorphisms; an optional
    conjugator composes f before the block detection to tighten it.
    """
    g = compose_source(f, conjugator) if conjugator is not None else f
    blocks = block_partition(g, tol).blocks
    return g.n - sum(len(b) - 1 for b in blocks)


def power_chain_check(f: RationalMap, tol: float = TAU_EQ) -> set[int]:
    """Coordinates j whose pure powers z_j, z_j^2, ..., z_j^d all appear in f.

    An empty result for a polynomial map certifies that no automorphism
    moving the origin can belong to the Hermitian invariant group.
    """
    if not f.is_polynomial(tol):
        raise MapConstructionError("power-chain check requires a polynomial map")
    d = f.degree
    out = set()
    for j in range(f.n):
        ok = True
        for k in range(1, d + 1):
            exp = [0] * f.n
            exp[j] = k
            if not any(abs(p.coefficient(exp)) > TAU_ZERO for p in f.numerator):
                ok = False
                break
        if ok:
            out.add(j)
    return out


def origin_move_residual(f: RationalMap, gamma: BallAutomorphism) -> float:
    """Origin-moving necessary condition residual.

    For gamma = U phi_a in the invariant group of a degree-d map with
    p(0) = 0, the product of the form values at a and at U a must equal
    (1 - |a|^2)^(2 d); the absolute defect is returned, so a nonzero value
    certifies non-membership.
    """
    if f.l != 0:
        raise MapConstructionError("the residual test applies to true-ball targets")
    if not f.maps_origin_to_zero():
        raise MapConstructionError("map must send the origin to zero")
    a = gamma.a
    Ua = gamma.U @ a

    def form_value(point: np.ndarray) -> float:
        pv = np.array([p.evaluate(point) for p in f.numerator])
        qv = f.denominator.evaluate(point)
        return float(np.vdot(pv, pv).real - abs(qv) ** 2)

    lhs = form_value(a) * form_value(Ua)
    rhs = (1.0 - float(np.vdot(a, a).real)) ** (2 * f.degree)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# finite group closure
# ---------------------------------------------------------------------------
def group_closure(
    generators: Sequence[np.ndarray], cap: int = 4096, tol: float = TAU_GROUP
) -> list[np.ndarray]:
    """Close unitary generators under products (breadth-first).

    Elements are bucketed by rounded entries and verified at tolerance
    ``tol``; exceeding ``cap`` raises, signalling an infinite or large group.
    """
    if not generators:
        raise ValueError("at least one generator is required")
    dim = np.asarray(generators[0]).shape[0]
    gens = []
    for g in generators:
        g = np.asarray(g, dtype=complex)
        if g.shape != (dim, dim):
            raise ValueError("generators must share one square shape")
        if np.max(np.abs(g.conj().T @ g - np.eye(dim))) > tol:
            raise ValueError("generators must be unitary")
        gens.append(g)

    decimals = max(1, int(-math.log10(tol)))
    elements: list[np.ndarray] = []
    buckets: dict[bytes, list[int]] = {}

    def key(m: np.ndarray) -> bytes:
        return (np.round(m, decimals) + 0.0).tobytes()  # +0.0 folds -0.0 into +0.0

    def lookup(m: np.ndarray) -> bool:
        for idx in buckets.get(key(m), []):
            if np.max(np.abs(elements[idx] - m)) <= tol:
                return True
        return False

    def insert(m: np.ndarray) -> None:
        buckets.setdefault(key(m), []).append(len(elements))
        elements.append(m)

    insert(np.eye(dim, dtype=complex))
    frontier = [np.eye(dim, dtype=complex)]
    while frontier:
        new_frontier = []
        for m in frontier:
            for g in gens:
                prod = m @ g
                if not lookup(prod):
                    if len(elements) >= cap:
                        raise GroupClosureError(
                            f"group closure exceeded cap {cap}; group may be infinite"
                        )
                    insert(prod)
                    new_frontier.append(prod)
        frontier = new_frontier
    return elements


# ---------------------------------------------------------------------------
# group report
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class GroupReport:
    n: int
    torus_invariant: bool
    full_unitary_invariant: bool
    block_partition: BlockPartition
    diagonal_stabilizer: TorusSubgroup
    permutation_stabilizer: tuple[tuple[int, ...], ...] | None
    source_rank_upper: int
    origin_moving_excluded: bool
    notes: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "torus_invariant": self.torus_invariant,
            "full_unitary_invariant": self.full_unitary_invariant,
            "block_partition": self.block_partition.to_dict(),
            "diagonal_stabilizer": self.diagonal_stabilizer.to_dict(),
            "permutation_stabilizer": None
            if self.permutation_stabilizer is None
            else [list(p) for p in self.permutation_stabilizer],
            "source_rank_upper": self.source_rank_upper,
            "origin_moving_excluded": self.origin_moving_excluded,
            "notes": list(self.notes),
        }


def group_report(f: RationalMap, tol: float = TAU_EQ) -> GroupReport:
    """Run the structural detection pipeline and collect the results."""
    notes: list[str] = []
    torus = torus_test(f, tol)
    unitary = full_unitary_test(f, tol)
    blocks = block_partition(f, tol)
    diag = diagonal_stabilizer(f)
    perms: tuple[tuple[int, ...], ...] | None
    if f.n <= MAX_PERMUTATION_DIM:
        perms = tuple(permutation_stabilizer(f, tol))
    else:
        perms = None
        notes.append(
            f"permutation stabilizer skipped: n={f.n} exceeds cap {MAX_PERMUTATION_DIM}"
        )
    excluded = False
    if f.is_polynomial(tol):
        if f.degree >= 2 and f.maps_origin_to_zero(tol) and not power_chain_check(f, tol):
            excluded = True
    else:
        notes.append("origin-moving exclusion not determined for rational maps")
    rank_upper = f.n - sum(len(b) - 1 for b in blocks.blocks)
    return GroupReport(
        f.n,
        torus.is_torus_invariant,
        unitary.is_unitary_invariant,
        blocks,
        diag,
        perms,
        rank_upper,
        excluded,
        tuple(notes),
    )


# ---------------------------------------------------------------------------
# invariance equation system
# ---------------------------------------------------------------------------
def _homogenized(f: RationalMap) -> tuple[list[Polynomial], Polynomial, int]:
    d = f.degree
    return [homogenize(p, d) for p in f.numerator], homogenize(f.denominator, d), d


def _grouped_substitution(
    hat: Polynomial, n1: int
) -> dict[MultiIndex, dict[MultiIndex, complex]]:
    """Substitute the row action w_j = sum_i v_i u_ij and group by v-monomial.

    ``hat`` lives in n1 = n + 1 homogeneous variables; the result maps each
    v-exponent to a polynomial (dict) in the n1*n1 matrix unknowns.
    """
    nu = n1 * n1
    total = n1 + nu
    # w_j as polynomials in the combined ring (v variables first)
    w = []
    for j in range(n1):
        terms: dict[MultiIndex, complex] = {}
        for i in range(n1):
            exp = [0] * total
            exp[i] = 1
            exp[n1 + i * n1 + j] = 1
            terms[tuple(exp)] = 1.0
        w.append(Polynomial(total, terms))
    composed = Polynomial.zero(total)
    cache: dict[tuple[int, int], Polynomial] = {}

    def wpow(j: int, e: int) -> Polynomial:
        if (j, e) not in cache:
            cache[(j, e)] = w[j] ** e
        return cache[(j, e)]

    for exp, coeff in hat.sorted_terms():
        term = Polynomial.constant(total, coeff)
        for j, e in enumerate(exp):
            if e:
                term = term * wpow(j, e)
        composed = composed + term
    grouped: dict[MultiIndex, dict[MultiIndex, complex]] = {}
    for exp, coeff in composed.terms.items():
        vpart = exp[:n1]
        upart = exp[n1:]
        grouped.setdefault(vpart, {})[upart] = (
            grouped.get(vpart, {}).get(upart, 0.0) + coeff
        )
    return grouped


def _sesquilinear_terms(
    g1: Mapping[MultiIndex, complex], g2: Mapping[MultiIndex, complex], sign: float
) -> dict[tuple[MultiIndex, MultiIndex], complex]:
    out: dict[tuple[MultiIndex, MultiIndex], complex] = {}
    for e1, c1 in g1.items():
        for e2, c2 in g2.items():
            key = (e1, e2)
            out[key] = out.get(key, 0.0) + sign * c1 * complex(c2).conjugate()
    return out


def _merge_terms(
    target: dict[tuple[MultiIndex, MultiIndex], complex],
    source: Mapping[tuple[MultiIndex, MultiIndex], complex],
    weight: complex = 1.0,
) -> None:
    for key, val in source.items():
        target[key] = target.get(key, 0.0) + weight * val


def emit_invariance_system(f: RationalMap) -> dict:
    """Polynomial equations cutting out the invariant group in matrix entries.

    Equates the coefficients of z^alpha s^mu conj(z)^beta conj(s)^nu in
    |p((z,s)U)|^2_l - |q((z,s)U)|^2 = -lambda(U) (|p(z,s)|^2_l - |q(z,s)|^2),
    where lambda(U) is the value of the left side at the homogeneous origin
    row (0, 1).  Each equation is a sesquilinear polynomial in the flattened
    (n+1) x (n+1) matrix unknowns; metric and determinant constraints on the
    matrix are emitted alongside.
    """
    hats, qhat, d = _homogenized(f)
    n1 = f.n + 1
    signs = [1.0] * f.m + [-1.0] * f.l + [-1.0]
    polys = hats + [qhat]
    grouped = [_grouped_substitution(p, n1) for p in polys]

    # lambda(U): coefficients of the pure s^d row after substituting (0, 1)
    origin_key = tuple([0] * f.n + [d])
    lam: dict[tuple[MultiIndex, MultiIndex], complex] = {}
    for sign, grp in zip(signs, grouped):
        g0 = grp.get(origin_key, {})
        _merge_terms(lam, _sesquilinear_terms(g0, g0, sign))

    # base-form coefficients h[(v1, v2)] of |p|^2_l - |q|^2 in (z, s)
    base: dict[tuple[MultiIndex, MultiIndex], complex] = {}
    for sign, p in zip(signs, polys):
        for e1, c1 in p.terms.items():
            for e2, c2 in p.terms.items():
                key = (e1, e2)
                base[key] = base.get(key, 0.0) + sign * c1 * complex(c2).conjugate()

    vsupport = sorted(
        {v for grp in grouped for v in grp} | {v for pair in base for v in pair},
        key=grlex_key,
    )
    equations = []
    for i1, v1 in enumerate(vsupport):
        for v2 in vsupport[i1:]:
            terms: dict[tuple[MultiIndex, MultiIndex], complex] = {}
            for sign, grp in zip(signs, grouped):
                g1 = grp.get(v1)
                g2 = grp.get(v2)
                if g1 and g2:
                    _merge_terms(terms, _sesquilinear_terms(g1, g2, sign))
            h_value = base.get((v1, v2), 0.0)
            if abs(h_value) > TAU_ZERO:
                _merge_terms(terms, lam, weight=h_value)
            terms = {k: v for k, v in terms.items() if abs(v) > TAU_ZERO}
            if not terms:
                continue
            equations.append(
                {
                    "alpha": list(v1[: f.n]),
                    "mu": v1[f.n],
                    "beta": list(v2[: f.n]),
                    "nu": v2[f.n],
                    "terms": [
                        {
                            "u": list(ue),
                            "ubar": list(ve),
                            "re": c.real,
                            "im": c.imag,
                        }
                        for (ue, ve), c in sorted(
                            terms.items(), key=lambda kv: (kv[0][0], kv[0][1])
                        )
                    ],
                }
            )

    # metric constraints: U J U^dagger = J with J = diag(1..1, -1)
    metric = []
    for k in range(n1):
        for m in range(k, n1):
            terms = {}
            for j in range(n1):
                jj = 1.0 if j < n1 - 1 else -1.0
                ue = [0] * (n1 * n1)
                ve = [0] * (n1 * n1)
                ue[k * n1 + j] = 1
                ve[m * n1 + j] = 1
                terms[(tuple(ue), tuple(ve))] = jj
            constant = 0.0
            if k == m:
                constant = -1.0 if k < n1 - 1 else 1.0
            metric.append(
                {
                    "row": k,
                    "col": m,
                    "constant": constant,
                    "terms": [
                        {"u": list(ue), "ubar": list(ve), "re": c, "im": 0.0}
                        for (ue, ve), c in terms.items()
                    ],
                }
            )

    det_terms = []
    for perm in itertools.permutations(range(n1)):
        inv = sum(
            1 for i in range(n1) for j in range(i + 1, n1) if perm[i] > perm[j]
        )
        sign = -1.0 if inv % 2 else 1.0
        ue = [0] * (n1 * n1)
        for i, j in enumerate(perm):
            ue[i * n1 + j] += 1
        det_terms.append(
            {"u": ue, "ubar": [0] * (n1 * n1), "re": sign, "im": 0.0}
        )

    return {
        "schema": "invariance-system/1",
        "n": f.n,
        "degree": d,
        "target_signature": [f.m, f.l],
        "unknowns": {"shape": [n1, n1], "order": "row-major"},
        "equations": equations,
        "metric_constraints": metric,
        "determinant_constraint": {"constant": -1.0, "terms": det_terms},
    }


def evaluate_invariance_system(system: Mapping, matrix: np.ndarray) -> float:
    """Max residual of the main equations at a concrete matrix.

    The system is scale-covariant, so any nonzero multiple of a projective
    automorphism matrix can be substituted directly.
    """
    n1 = system["unknowns"]["shape"][0]
    u = np.asarray(matrix, dtype=complex).reshape(-1)
    if u.shape[0] != n1 * n1:
        raise ValueError("matrix shape does not match the system unknowns")
    worst = 0.0
    for eq in system["equations"]:
        total = 0.0 + 0.0j
        for term in eq["terms"]:
            val = complex(term["re"], term["im"])
            for idx, e in enumerate(term["u"]):
                if e:
                    val *= u[idx] ** e
            for idx, e in enumerate(term["ubar"]):
                if e:
                    val *= u[idx].conjugate() ** e
            total += val
        worst = max(worst, abs(total))
    return worst
