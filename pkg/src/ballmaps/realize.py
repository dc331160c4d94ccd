"""Constructions of proper maps with prescribed finite invariance groups.

The workhorse is padding: given any polynomial map p, choose a positive
combination of norm powers R = sum lambda_j^2 |z|^(2 m_j) and a small
epsilon so that R - epsilon^2 |p|^2 stays positive semidefinite; factoring
the remainder yields components q with epsilon p (+) q proper.  Stacked
tensor powers then separate degrees so that the only surviving symmetries
are the requested ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .hermitian import (
    HermitianForm,
    TAU_SIG,
    form_of,
    gram_form,
    norm_power_form,
)
from .invariance import CapabilityError, membership, _form_permutation_invariant
from .maps import (
    MapConstructionError,
    RationalMap,
    catalog,
    juxtapose_theta,
    oplus,
    polynomial_map,
    tensor,
    tensor_power,
    unitary_automorphism,
)
from .polynomials import MultiIndex, Polynomial, TAU_ZERO


class RealizationError(RuntimeError):
    """Raised when a constructed map fails its built-in verification."""


# ---------------------------------------------------------------------------
# factorization of Hermitian forms
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class FactorizationResult:
    """Holomorphic decomposition h = sum |f_i|^2 - sum |g_j|^2."""

    positives: tuple[Polynomial, ...]
    negatives: tuple[Polynomial, ...]

    def reconstruct(self, nvars: int) -> HermitianForm:
        polys = list(self.positives) + list(self.negatives)
        if not polys:
            return HermitianForm.zero(nvars)
        signs = [1.0] * len(self.positives) + [-1.0] * len(self.negatives)
        return gram_form(polys, signs)


def factor_form(h: HermitianForm, tol_sig: float = TAU_SIG) -> FactorizationResult:
    """Eigendecompose the coefficient matrix into holomorphic components.

    Eigenvectors scaled by sqrt(|eigenvalue|) become polynomial components,
    split by eigenvalue sign; eigenvalues within the relative threshold of
    zero are dropped.  The components are linearly independent because the
    eigenvectors are orthogonal.
    """
    if not h.size:
        return FactorizationResult((), ())
    eigvals, eigvecs = np.linalg.eigh(h.mat)
    scale = float(np.max(np.abs(eigvals)))
    cut = tol_sig * max(scale, 1e-300)
    pos: list[Polynomial] = []
    neg: list[Polynomial] = []
    for k in range(len(eigvals)):
        lam = float(eigvals[k])
        if abs(lam) <= cut:
            continue
        vec = eigvecs[:, k] * math.sqrt(abs(lam))
        poly = Polynomial(
            h.nvars, {h.basis[i]: vec[i] for i in range(len(vec)) if abs(vec[i]) > TAU_ZERO}
        )
        (pos if lam > 0 else neg).append(poly)
    return FactorizationResult(tuple(pos), tuple(neg))


# ---------------------------------------------------------------------------
# padding to a proper map
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class PadResult:
    """Certificate epsilon^2 |p|^2 + |q|^2 = sum lambda_j^2 |z|^(2 m_j)."""

    epsilon: float
    components: tuple[Polynomial, ...]
    lambdas: tuple[float, ...]
    powers: tuple[int, ...]

    def target_form(self, nvars: int) -> HermitianForm:
        acc = HermitianForm.zero(nvars)
        for lam, m in zip(self.lambdas, self.powers):
            acc = acc + norm_power_form(nvars, m).scale(lam * lam)
        return acc


def _present_degrees(polys: Sequence[Polynomial]) -> set[int]:
    return {sum(exp) for p in polys for exp in p.terms}


def _min_eig(h: HermitianForm) -> float:
    if not h.size:
        return 0.0
    return float(np.min(np.linalg.eigvalsh(h.mat)))


def pad_to_proper(
    p: Sequence[Polynomial],
    epsilon: float | None = None,
    weights: Sequence[float] | None = None,
    powers: Sequence[int] | None = None,
    omit_empty_degrees: bool = False,
) -> PadResult:
    """Pad a polynomial map to a proper map via norm-power targets.

    The target form uses powers 0..deg(p) with equal weights by default;
    ``omit_empty_degrees`` drops powers where p has no monomials of that
    degree (the remainder then stays positive semidefinite on its support).
    When epsilon is not supplied it is set to half the supremum of the
    feasible values, located by bisection to 1e-3 relative accuracy.
    """
    p = list(p)
    nvars = p[0].nvars if p else 0
    if any(q.nvars != nvars for q in p):
        raise MapConstructionError("padding requires a common variable count")
    degree = max((q.degree for q in p), default=0)
    nonzero = [q for q in p if not q.is_zero()]

    if powers is None:
        powers = list(range(degree + 1))
        if omit_empty_degrees:
            present = _present_degrees(nonzero)
            powers = [j for j in powers if j in present] or [0]
    powers = sorted(set(int(j) for j in powers))
    if weights is None:
        weights = [1.0 / math.sqrt(len(powers))] * len(powers)
    weights = [float(w) for w in weights]
    if len(weights) != len(powers):
        raise MapConstructionError("one weight per power is required")
    total = sum(w * w for w in weights)
    if abs(total - 1.0) > 1e-9:
        raise MapConstructionError("squared weights must sum to 1")

    target = HermitianForm.zero(nvars)
    for lam, m in zip(weights, powers):
        target = target + norm_power_form(nvars, m).scale(lam * lam)

    if nonzero:
        b = gram_form(nonzero)
    else:
        b = HermitianForm.zero(nvars)

    psd_slack = 1e-11 * max(1.0, target.max_abs())

    def feasible(eps: float) -> bool:
        return _min_eig(target - b.scale(eps * eps)) >= -psd_slack

    if not nonzero:
        eps = 1.0 if epsilon is None else float(epsilon)
        remainder = target
    elif epsilon is not None:
        eps = float(epsilon)
        remainder = target - b.scale(eps * eps)
        if _min_eig(remainder) < -1e-8 * max(1.0, target.max_abs()):
            raise MapConstructionError(
                f"supplied epsilon {eps} is too large: remainder is not PSD"
            )
    else:
        lo, hi = 0.0, 1.0
        while feasible(hi):
            lo, hi = hi, 2.0 * hi
            if hi > 1e8:
                break
        while (hi - lo) > 1e-3 * hi:
            mid = 0.5 * (lo + hi)
            if feasible(mid):
                lo = mid
            else:
                hi = mid
        eps = 0.5 * lo
        remainder = target - b.scale(eps * eps)

    factored = factor_form(remainder, tol_sig=1e-12)
    if factored.negatives:
        worst = max(q.max_abs_coeff() for q in factored.negatives)
        if worst > 1e-6:
            raise MapConstructionError(
                "padding remainder has a significantly negative part; epsilon too large"
            )
    return PadResult(eps, factored.positives, tuple(weights), tuple(powers))


def padded_map(p: Sequence[Polynomial], pad: PadResult) -> RationalMap:
    """The proper map epsilon p (+) q from a padding certificate."""
    comps = [q.scale(pad.epsilon) for q in p] + list(pad.components)
    return polynomial_map(comps)


# ---------------------------------------------------------------------------
# permutation utilities
# ---------------------------------------------------------------------------
def _compose_perms(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    """(a o b)(i) = a[b[i]]."""
    return tuple(a[b[i]] for i in range(len(a)))


def close_permutation_group(
    generators: Iterable[Sequence[int]], n: int
) -> list[tuple[int, ...]]:
    """Exact closure of permutation generators inside S_n."""
    gens = []
    for g in generators:
        g = tuple(int(x) for x in g)
        if sorted(g) != list(range(n)):
            raise MapConstructionError(f"{g} is not a permutation of 0..{n - 1}")
        gens.append(g)
    identity = tuple(range(n))
    elements = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                prod = _compose_perms(g, e)
                if prod not in elements:
                    elements.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return sorted(elements)


# ---------------------------------------------------------------------------
# symmetric group realizations
# ---------------------------------------------------------------------------
def symmetric_group_map(n: int) -> RationalMap:
    """Degree-3 polynomial proper map whose invariance group is S_n.

    Built from the quadratic monomial block (all z_j z_k with j < k, tensored
    with z after a sqrt(2) weight), the squares block (z_1^2, ..., z_n^2),
    and a padded copy of 1 + sum z_i that kills the diagonal torus.
    """
    if n < 1:
        raise MapConstructionError("n must be positive")
    if n == 1:
        return catalog("corollary-6-2")
    zs = [Polynomial.variable(n, i) for i in range(n)]
    pair_block = [zs[j] * zs[k] for j in range(n) for k in range(j + 1, n)]
    squares = [z * z for z in zs]
    z_map = polynomial_map(zs)
    pair_map = polynomial_map([q.scale(math.sqrt(2.0)) for q in pair_block])
    g = oplus(tensor(pair_map, z_map), polynomial_map(squares))

    affine = Polynomial.constant(n, 1.0)
    for z in zs:
        affine = affine + z
    pad = pad_to_proper([affine])
    h = oplus(
        polynomial_map([affine.scale(pad.epsilon)]),
        tensor(polynomial_map(list(pad.components)), z_map),
    )
    return juxtapose_theta(g, h, math.pi / 4.0)


def symmetric_group_map_v2(n: int) -> RationalMap:
    """Higher-degree alternative realization of S_n from prod (1 + z_j)."""
    if n < 1:
        raise MapConstructionError("n must be positive")
    zs = [Polynomial.variable(n, i) for i in range(n)]
    prod = Polynomial.constant(n, 1.0)
    for z in zs:
        prod = prod * (Polynomial.constant(n, 1.0) + z)
    pad = pad_to_proper([prod])
    m = n + 2
    left = tensor(polynomial_map([prod.scale(pad.epsilon)]), polynomial_map(zs))
    right = tensor(polynomial_map(list(pad.components)), tensor_power(n, m))
    return oplus(left, right)


def _verify_permutation_group(
    f: RationalMap, perms: Sequence[tuple[int, ...]]
) -> None:
    h = form_of(f)
    for perm in perms:
        if not _form_permutation_invariant(h, perm, 1e-8):
            raise RealizationError(f"constructed map lost the symmetry {perm}")


def realize_subgroup(
    generators: Iterable[Sequence[int]], n: int, verify: bool = True
) -> RationalMap:
    """Proper polynomial map whose permutation symmetries are exactly the group.

    The group is closed from the generators; the full symmetric group
    delegates to :func:`symmetric_group_map`.  Otherwise a group-averaged
    monomial with strictly increasing exponents (1, 2, ..., n) is padded and
    juxtaposed against the symmetric-group map behind degree-separating
    tensor powers, so unitary symmetries must preserve both blocks.
    """
    if n > 8:
        raise CapabilityError("subgroup realization is capped at n <= 8")
    group = close_permutation_group(generators, n)
    if len(group) == math.factorial(n):
        return symmetric_group_map(n)

    mu = list(range(1, n + 1))
    tau = Polynomial.constant(n, 1.0)
    for perm in group:
        exp = [0] * n
        for j in range(n):
            exp[perm[j]] = mu[j]
        tau = tau + Polynomial.monomial(exp, 1.0)
    pad = pad_to_proper([tau], omit_empty_degrees=True)
    k3 = sum(mu) + 1
    g1 = oplus(
        polynomial_map([tau.scale(pad.epsilon)]),
        tensor(polynomial_map(list(pad.components)), tensor_power(n, k3)),
    )
    f_sym = symmetric_group_map(n)
    k4 = f_sym.degree + 1
    result = juxtapose_theta(f_sym, tensor(g1, tensor_power(n, k4)), math.pi / 4.0)
    if verify:
        _verify_permutation_group(result, group)
    return result


# ---------------------------------------------------------------------------
# realization from a supplied invariant basis
# ---------------------------------------------------------------------------
def _support_of_summand(h: Polynomial, m: int) -> set[MultiIndex]:
    base = set(h.terms) | {(0,) * h.nvars}
    out = set()
    for beta in _degree_exponents(h.nvars, m):
        for alpha in base:
            out.add(tuple(a + b for a, b in zip(alpha, beta)))
    return out


def _degree_exponents(nvars: int, degree: int) -> list[MultiIndex]:
    from .polynomials import degree_monomials

    return degree_monomials(nvars, degree)


def realize_from_invariants(
    invariants: Sequence[Polynomial],
    group: Sequence[np.ndarray],
    verify: bool = True,
) -> RationalMap:
    """Proper polynomial map invariant exactly under the supplied unitary group.

    The caller provides a generating set of the group-invariant polynomial
    algebra (each vanishing at the origin); a Noether basis is not computed
    here.  Each 1 + h_i is tensored with a power of the identity chosen so
    the summands' monomial supports are pairwise disjoint, then the whole
    block is padded to a proper map and separated by one more tensor power.
    """
    invariants = list(invariants)
    if not invariants:
        raise MapConstructionError("at least one invariant is required")
    n = invariants[0].nvars
    for h in invariants:
        if h.nvars != n:
            raise MapConstructionError("invariants live in different variable counts")
        if abs(h.constant_term()) > TAU_ZERO:
            raise MapConstructionError("invariants must vanish at the origin")

    band = max(h.degree for h in invariants) + 1
    exponents: list[int] = []
    supports: list[set[MultiIndex]] = []
    prev = 0
    for idx, h in enumerate(invariants):
        found = None
        for m in range(prev + 1, prev + band + 1):
            cand = _support_of_summand(h, m)
            if all(not (cand & s) for s in supports):
                found = m
                chosen = cand
                break
        if found is None:  # unreachable: the degree-band start always works
            raise MapConstructionError("could not separate invariant supports")
        exponents.append(found)
        supports.append(chosen)
        prev = found

    one = Polynomial.constant(n, 1.0)
    summands: list[Polynomial] = []
    for h, m in zip(invariants, exponents):
        block = tensor(
            polynomial_map([one + h]), tensor_power(n, m)
        )
        summands.extend(block.numerator)
    pad = pad_to_proper(summands, omit_empty_degrees=True)
    p_deg = max(q.degree for q in summands)
    m_final = p_deg + 1
    result = oplus(
        polynomial_map([q.scale(pad.epsilon) for q in summands]),
        tensor(polynomial_map(list(pad.components)), tensor_power(n, m_final)),
    )
    if verify:
        for gmat in group:
            res = membership(result, unitary_automorphism(np.asarray(gmat, dtype=complex)))
            if not res.member:
                raise RealizationError(
                    "constructed map is not invariant under a supplied group element"
                )
    return result
