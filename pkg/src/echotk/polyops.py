"""Exact polynomial and integer helpers: rational roots, quartic
discriminants, and degree-4 irreducibility over the rationals.

Polynomials are coefficient sequences in ascending order.  Root finding
clears denominators and runs the rational-root theorem over divisor pairs
of the extreme coefficients; the divisor enumeration factors integers by
trial division up to a fixed bound with a deterministic Miller-Rabin test
for the cofactor, and refuses (loudly) inputs whose factorization falls
outside that reach.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .sweep import primes_up_to

TRIAL_DIVISION_BOUND = 1_000_000
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981  # deterministic below this


class FactorizationError(ArithmeticError):
    """Integer outside the configured factorization reach."""


def is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    if n in small:
        return True
    if any(n % p == 0 for p in small):
        return False
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_PRIME_CACHE: list[int] = []


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| (n nonzero)."""
    global _PRIME_CACHE
    if n == 0:
        raise ValueError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    if not _PRIME_CACHE:
        _PRIME_CACHE = primes_up_to(TRIAL_DIVISION_BOUND)
    for p in _PRIME_CACHE:
        if p * p > n:
            break
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    if n > 1:
        if n < TRIAL_DIVISION_BOUND * TRIAL_DIVISION_BOUND:
            out[n] = out.get(n, 0) + 1  # below the trial square: must be prime
        else:
            root = math.isqrt(n)
            if root * root == n and is_probable_prime(root) and root < _MR_LIMIT:
                out[root] = out.get(root, 0) + 2
            elif n < _MR_LIMIT and is_probable_prime(n):
                out[n] = out.get(n, 0) + 1
            else:
                raise FactorizationError(f"cofactor {n} beyond factorization bound")
    return out


def divisors(n: int) -> list[int]:
    """All positive divisors of |n|, sorted."""
    fact = factorize(n)
    out = [1]
    for p, e in fact.items():
        out = [d * p**i for d in out for i in range(e + 1)]
    return sorted(out)


def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def _integer_coeffs(coeffs: Sequence) -> list[int]:
    fr = [Fraction(c) for c in coeffs]
    scale = math.lcm(*(c.denominator for c in fr)) if fr else 1
    ints = [int(c * scale) for c in fr]
    content = math.gcd(*(abs(c) for c in ints if c != 0))
    return [c // content for c in ints]


def rational_roots(coeffs: Sequence) -> list[Fraction]:
    """All rational roots of the polynomial, each verified by exact evaluation."""
    fr = [Fraction(c) for c in coeffs]
    while fr and fr[-1] == 0:
        fr.pop()
    if not fr:
        raise ValueError("zero polynomial")
    roots = set()
    # strip x^m so the constant coefficient is nonzero
    shift = 0
    while fr[shift] == 0:
        shift += 1
    if shift:
        roots.add(Fraction(0))
        fr = fr[shift:]
    if len(fr) > 1:
        ints = _integer_coeffs(fr)
        for p in divisors(ints[0]):
            for q in divisors(ints[-1]):
                for cand in (Fraction(p, q), Fraction(-p, q)):
                    if cand not in roots and poly_eval(fr, cand) == 0:
                        roots.add(cand)
    return sorted(roots)


def quartic_discriminant(coeffs: Sequence) -> Fraction:
    """Discriminant of a*x^4 + b*x^3 + c*x^2 + d*x + e (ascending input)."""
    e, d, c, b, a = (Fraction(x) for x in coeffs)
    if a == 0:
        raise ValueError("leading coefficient must be nonzero")
    return (
        256 * a**3 * e**3
        - 192 * a**2 * b * d * e**2
        - 128 * a**2 * c**2 * e**2
        + 144 * a**2 * c * d**2 * e
        - 27 * a**2 * d**4
        + 144 * a * b**2 * c * e**2
        - 6 * a * b**2 * d**2 * e
        - 80 * a * b * c**2 * d * e
        + 18 * a * b * c * d**3
        + 16 * a * c**4 * e
        - 4 * a * c**3 * d**2
        - 27 * b**4 * e**2
        + 18 * b**3 * c * d * e
        - 4 * b**3 * d**3
        - 4 * b**2 * c**3 * e
        + b**2 * c**2 * d**2
    )


def sylvester_resultant(f: Sequence, g: Sequence) -> Fraction:
    """Res(f, g) via the Sylvester matrix determinant (exact)."""
    f = [Fraction(c) for c in f]
    g = [Fraction(c) for c in g]
    while f and f[-1] == 0:
        f.pop()
    while g and g[-1] == 0:
        g.pop()
    n, m = len(f) - 1, len(g) - 1
    if n < 0 or m < 0:
        raise ValueError("resultant of the zero polynomial")
    size = n + m
    rows = []
    for i in range(m):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(f)):
            row[i + j] = c
        rows.append(row)
    for i in range(n):
        row = [Fraction(0)] * size
        for j, c in enumerate(reversed(g)):
            row[i + j] = c
        rows.append(row)
    # fraction-based Gaussian elimination
    det = Fraction(1)
    for col in range(size):
        piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            rows[col], rows[piv] = rows[piv], rows[col]
            det = -det
        det *= rows[col][col]
        inv = 1 / rows[col][col]
        for r in range(col + 1, size):
            factor = rows[r][col] * inv
            if factor:
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[col])]
    return det


def is_rational_square(q) -> bool:
    """Exact: a rational is a square iff its reduced parts are both squares."""
    q = Fraction(q)
    if q < 0:
        return False
    for part in (q.numerator, q.denominator):
        r = math.isqrt(part)
        if r * r != part:
            return False
    return True


def _depress_quartic(coeffs: Sequence[Fraction]):
    e, d, c, b, a = coeffs
    b, c, d, e = b / a, c / a, d / a, e / a
    p = c - 3 * b**2 / 8
    q = d - b * c / 2 + b**3 / 8
    r = e - b * d / 4 + b**2 * c / 16 - 3 * b**4 / 256
    return p, q, r


def is_quartic_irreducible(coeffs: Sequence) -> bool:
    """Irreducibility over Q of a degree-4 polynomial.

    No rational root rules out linear factors; the quadratic-pair split is
    decided on the depressed form, where a factorization into two rational
    quadratics forces the resolvent cubic to have a rational root that is
    a nonzero rational square (or, in the biquadratic case, one of two
    explicit square conditions).
    """
    fr = [Fraction(c) for c in coeffs]
    if len(fr) != 5 or fr[4] == 0:
        raise ValueError("expected a degree-4 polynomial")
    if rational_roots(fr):
        return False
    p, q, r = _depress_quartic(fr)
    if q != 0:
        resolvent = [-(q**2), p**2 - 4 * r, 2 * p, Fraction(1)]
        for z in rational_roots(resolvent):
            if z > 0 and is_rational_square(z):
                return False
        return True
    # biquadratic y^4 + p y^2 + r
    if is_rational_square(p**2 - 4 * r):
        return False
    if is_rational_square(r):
        w = Fraction(math.isqrt(r.numerator), math.isqrt(r.denominator))
        if is_rational_square(2 * w - p) or is_rational_square(-2 * w - p):
            return False
    return True
