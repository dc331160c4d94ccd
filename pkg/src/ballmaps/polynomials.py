"""Sparse multivariate polynomials over complex binary64 coefficients.

A polynomial stores its terms in a dict keyed by exponent tuples (one
non-negative integer per variable).  Coefficients whose magnitude is at most
``TAU_ZERO`` are dropped on construction, so cancellations always produce the
canonical zero polynomial.  Iteration, printing and serialization follow
graded lexicographic order of the exponents, which keeps every downstream
matrix indexing and JSON dump deterministic.

Values are immutable by convention: every operation returns a fresh
polynomial and never mutates its operands, so instances are safe to share
between threads.
"""

from __future__ import annotations

import math
from typing import Iterator, Mapping, Sequence

MultiIndex = tuple[int, ...]

#: Coefficients at or below this magnitude are pruned from the term map.
TAU_ZERO = 1e-13

#: Default relative tolerance for coefficient comparisons.
TAU_EQ = 1e-9


def grlex_key(alpha: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Sort key realizing ascending graded lexicographic order."""
    return (sum(alpha), tuple(alpha))


def grlex_monomials(nvars: int, max_degree: int) -> list[MultiIndex]:
    """All exponent tuples of total degree <= max_degree, graded-lex sorted."""
    out: list[MultiIndex] = []

    def rec(prefix: list[int], remaining: int, budget: int) -> None:
        if remaining == 1:
            for e in range(budget + 1):
                out.append(tuple(prefix + [e]))
            return
        for e in range(budget + 1):
            rec(prefix + [e], remaining - 1, budget - e)

    if nvars == 0:
        return [()]
    rec([], nvars, max_degree)
    out.sort(key=grlex_key)
    return out


def degree_monomials(nvars: int, degree: int) -> list[MultiIndex]:
    """All exponent tuples of total degree exactly ``degree``, graded-lex."""
    return [a for a in grlex_monomials(nvars, degree) if sum(a) == degree]


class Polynomial:
    """Immutable sparse polynomial with complex coefficients.

    Attributes:
        nvars: number of variables; every exponent tuple has this length.
        terms: mapping exponent tuple -> complex coefficient (pruned).
        degree: max total degree over stored terms, -1 for the zero polynomial
            by internal convention exposed as 0 via :attr:`degree`.
    """

    __slots__ = ("nvars", "terms", "_degree")

    def __init__(self, nvars: int, terms: Mapping[MultiIndex, complex] | None = None):
        if nvars < 0:
            raise ValueError(f"nvars must be non-negative, got {nvars}")
        clean: dict[MultiIndex, complex] = {}
        if terms:
            for exp, coeff in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != nvars:
                    raise ValueError(
                        f"exponent {exp} has length {len(exp)}, expected {nvars}"
                    )
                if any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent in {exp}")
                c = complex(coeff)
                if abs(c) > TAU_ZERO:
                    clean[exp] = clean.get(exp, 0.0 + 0.0j) + c
            # re-prune after accumulation (duplicate keys cannot occur from a
            # dict, but callers may pass near-cancelling values)
            clean = {e: c for e, c in clean.items() if abs(c) > TAU_ZERO}
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_degree", max((sum(e) for e in clean), default=0))

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("Polynomial is immutable")

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value: complex) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise ValueError(f"variable index {index} out of range for {nvars} vars")
        exp = [0] * nvars
        exp[index] = 1
        return cls(nvars, {tuple(exp): 1.0})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff: complex = 1.0) -> "Polynomial":
        exp = tuple(int(e) for e in exponent)
        return cls(len(exp), {exp: coeff})

    # ------------------------------------------------------------------
    # basic queries
    # ------------------------------------------------------------------
    @property
    def degree(self) -> int:
        """Max total degree over nonzero terms (0 for the zero polynomial)."""
        return self._degree

    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exponent: Sequence[int]) -> complex:
        return self.terms.get(tuple(exponent), 0.0 + 0.0j)

    def constant_term(self) -> complex:
        return self.terms.get((0,) * self.nvars, 0.0 + 0.0j)

    def max_abs_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def support(self) -> list[MultiIndex]:
        """Exponent tuples of nonzero terms in graded-lex order."""
        return sorted(self.terms, key=grlex_key)

    def sorted_terms(self) -> list[tuple[MultiIndex, complex]]:
        return [(e, self.terms[e]) for e in self.support()]

    def __iter__(self) -> Iterator[tuple[MultiIndex, complex]]:
        return iter(self.sorted_terms())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return f"Polynomial({self.nvars}, 0)"
        bits = []
        for exp, coeff in self.sorted_terms()[:6]:
            mono = "*".join(
                f"z{i + 1}^{e}" if e > 1 else f"z{i + 1}"
                for i, e in enumerate(exp)
                if e
            )
            bits.append(f"({coeff:.6g}){'*' + mono if mono else ''}")
        tail = " + ..." if len(self.terms) > 6 else ""
        return f"Polynomial({self.nvars}, {' + '.join(bits)}{tail})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    __hash__ = None  # type: ignore[assignment]

    # ------------------------------------------------------------------
    # arithmetic
    # ------------------------------------------------------------------
    def _check_compatible(self, other: "Polynomial") -> None:
        if self.nvars != other.nvars:
            raise ValueError(
                f"variable-count mismatch: {self.nvars} vs {other.nvars}"
            )

    def __add__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            terms[exp] = terms.get(exp, 0.0 + 0.0j) + coeff
        return Polynomial(self.nvars, terms)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            self._check_compatible(other)
            prod: dict[MultiIndex, complex] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    key = tuple(a + b for a, b in zip(e1, e2))
                    prod[key] = prod.get(key, 0.0 + 0.0j) + c1 * c2
            return Polynomial(self.nvars, prod)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, factor: complex) -> "Polynomial":
        factor = complex(factor)
        return Polynomial(self.nvars, {e: c * factor for e, c in self.terms.items()})

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers require a non-negative integer")
        result = Polynomial.constant(self.nvars, 1.0)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def conjugate_coefficients(self) -> "Polynomial":
        """Conjugate every coefficient (exponents unchanged)."""
        return Polynomial(self.nvars, {e: c.conjugate() for e, c in self.terms.items()})

    # ------------------------------------------------------------------
    # evaluation and substitution
    # ------------------------------------------------------------------
    def evaluate(self, point: Sequence[complex]) -> complex:
        """Evaluate at a point, summing monomials in graded-lex order."""
        if len(point) != self.nvars:
            raise ValueError(
                f"point has {len(point)} coordinates, expected {self.nvars}"
            )
        pt = [complex(x) for x in point]
        total = 0.0 + 0.0j
        for exp, coeff in self.sorted_terms():
            val = coeff
            for x, e in zip(pt, exp):
                if e:
                    val *= x**e
            total += val
        return total

    def permute_variables(self, perm: Sequence[int]) -> "Polynomial":
        """Return p(sigma(z)) where sigma(z)_i = z_{perm[i]} for the inverse view.

        Concretely: the monomial z^alpha maps to the monomial whose exponent
        of z_{perm[i]} is alpha_i; this is exactly composition with the
        permutation unitary sending e_i to e_{perm[i]}.
        """
        if sorted(perm) != list(range(self.nvars)):
            raise ValueError(f"{perm} is not a permutation of 0..{self.nvars - 1}")
        terms: dict[MultiIndex, complex] = {}
        for exp, coeff in self.terms.items():
            new = [0] * self.nvars
            for i, e in enumerate(exp):
                new[perm[i]] = e
            terms[tuple(new)] = terms.get(tuple(new), 0.0 + 0.0j) + coeff
        return Polynomial(self.nvars, terms)

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "nvars": self.nvars,
            "terms": [
                {"exp": list(exp), "re": coeff.real, "im": coeff.imag}
                for exp, coeff in self.sorted_terms()
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Polynomial":
        nvars = int(data["nvars"])
        terms: dict[MultiIndex, complex] = {}
        for item in data.get("terms", []):
            exp = tuple(int(e) for e in item["exp"])
            terms[exp] = complex(float(item.get("re", 0.0)), float(item.get("im", 0.0)))
        return cls(nvars, terms)


def substitute_fractional(
    p: Polynomial,
    numerators: Sequence[Polynomial],
    denominator: Polynomial,
    degree_bound: int,
) -> Polynomial:
    """Cleared-denominator substitution of a linear-fractional argument.

    Returns sum over terms ``coeff(alpha) * prod_i numerators[i]^alpha_i *
    denominator^(degree_bound - |alpha|)``.  With ``numerators[i] = z_i`` and
    ``denominator = 1`` this is the identity.
    """
    if len(numerators) != p.nvars:
        raise ValueError(
            f"got {len(numerators)} numerators for a polynomial in {p.nvars} vars"
        )
    if degree_bound < p.degree:
        raise ValueError(
            f"degree_bound {degree_bound} is below the polynomial degree {p.degree}"
        )
    if numerators:
        nvars_out = numerators[0].nvars
        for q in numerators:
            if q.nvars != nvars_out:
                raise ValueError("numerators live in different variable counts")
    else:
        nvars_out = denominator.nvars
    if denominator.nvars != nvars_out:
        raise ValueError("denominator variable count differs from numerators")

    one = Polynomial.constant(nvars_out, 1.0)
    num_pow_cache: dict[tuple[int, int], Polynomial] = {}
    den_pow_cache: dict[int, Polynomial] = {0: one}

    def num_power(i: int, e: int) -> Polynomial:
        key = (i, e)
        if key not in num_pow_cache:
            num_pow_cache[key] = numerators[i] ** e
        return num_pow_cache[key]

    def den_power(e: int) -> Polynomial:
        if e not in den_pow_cache:
            den_pow_cache[e] = denominator**e
        return den_pow_cache[e]

    result = Polynomial.zero(nvars_out)
    for exp, coeff in p.sorted_terms():
        term = Polynomial.constant(nvars_out, coeff)
        for i, e in enumerate(exp):
            if e:
                term = term * num_power(i, e)
        term = term * den_power(degree_bound - sum(exp))
        result = result + term
    return result


def homogenize(p: Polynomial, degree: int) -> Polynomial:
    """Append a variable s and multiply each term by s^(degree - |alpha|)."""
    if degree < p.degree:
        raise ValueError(f"degree {degree} below polynomial degree {p.degree}")
    terms = {
        exp + (degree - sum(exp),): coeff for exp, coeff in p.terms.items()
    }
    return Polynomial(p.nvars + 1, terms)


def max_coeff_diff(a: Polynomial, b: Polynomial) -> float:
    """Largest coefficient magnitude of a - b (bases need not match)."""
    if a.nvars != b.nvars:
        raise ValueError("variable-count mismatch")
    keys = set(a.terms) | set(b.terms)
    return max(
        (abs(a.terms.get(k, 0.0) - b.terms.get(k, 0.0)) for k in keys), default=0.0
    )


def polys_close(a: Polynomial, b: Polynomial, tol: float = TAU_EQ) -> bool:
    """Coefficientwise comparison with tolerance scaled by the largest coeff."""
    scale = max(1.0, a.max_abs_coeff(), b.max_abs_coeff())
    return max_coeff_diff(a, b) <= tol * scale


def multinomial(alpha: Sequence[int]) -> int:
    """(|alpha|)! / prod(alpha_i!)."""
    total = math.factorial(sum(alpha))
    for e in alpha:
        total //= math.factorial(e)
    return total
