"""Prime sweep: which primes divide a term of the sequence.

For a good-reduction prime p the question reduces to whether the base
point has odd order in E(F_p); the bad primes are settled by the residue
cycles (3 divides a term, 5 never does).  Point counting is baby-step
giant-step seeded at p+1, with exact-order refinement over several sample
points and an exhaustive character-sum count for small p.  The sweep is
parallel over contiguous prime ranges and its counts are exact and
independent of the worker count.
"""

from __future__ import annotations

import math
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, getcontext
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import curves
from .curves import Curve, Point

SEGMENT_SIZE = 1 << 16
EXHAUSTIVE_LIMIT = 100          # below this, count points by character sum
MAX_ORDER_SAMPLES = 12
EXHAUSTIVE_FALLBACK_CAP = 10_000_000

_BAD_DIVIDES = {3: True, 5: False}  # bad-reduction primes of E, settled by residue cycles


class AmbiguousOrderError(RuntimeError):
    """Group order not pinned down and the modulus is too large to enumerate."""


def default_threads() -> int:
    env = os.environ.get("ECHO_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# primes


def primes_up_to(bound: int) -> list[int]:
    """Eratosthenes sieve, inclusive."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, bound + 1, i)))
    return [i for i, fl in enumerate(sieve) if fl]


def primes_in_range(lo: int, hi: int, base: Sequence[int]) -> Iterable[int]:
    """Primes in [lo, hi) via a segmented sieve over the given base primes."""
    lo = max(lo, 2)
    if lo >= hi:
        return
    seg = bytearray([1]) * (hi - lo)
    for q in base:
        if q * q >= hi:
            break
        start = max(q * q, ((lo + q - 1) // q) * q)
        seg[start - lo :: q] = bytearray(len(range(start, hi, q)))
    for i, fl in enumerate(seg):
        if fl:
            yield lo + i


_SMALL_PRIMES: list[int] = []
_SMALL_LIMIT = 0


def _small_primes(bound: int) -> list[int]:
    global _SMALL_PRIMES, _SMALL_LIMIT
    if _SMALL_LIMIT < bound:
        _SMALL_LIMIT = max(bound, 10_000)
        _SMALL_PRIMES = primes_up_to(_SMALL_LIMIT)
    return _SMALL_PRIMES


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for q in _small_primes(math.isqrt(n) + 1):
        if q * q > n:
            break
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# ---------------------------------------------------------------------------
# fast affine arithmetic on plain ints (internal; the public contract is
# curves.add / curves.scalar_mul, which the tests check this against)


def _fp_neg(pt, a1, a3, p):
    if pt is None:
        return None
    x, y = pt
    return (x, (-y - a1 * x - a3) % p)


def _fp_add(pt1, pt2, a1, a2, a3, a4, p):
    if pt1 is None:
        return pt2
    if pt2 is None:
        return pt1
    x1, y1 = pt1
    x2, y2 = pt2
    if x1 == x2:
        if (y1 + y2 + a1 * x1 + a3) % p == 0:
            return None
        num = (3 * x1 * x1 + 2 * a2 * x1 + a4 - a1 * y1) % p
        den = (2 * y1 + a1 * x1 + a3) % p
    else:
        num = (y2 - y1) % p
        den = (x2 - x1) % p
    lam = num * pow(den, -1, p) % p
    x3 = (lam * lam + a1 * lam - a2 - x1 - x2) % p
    y3 = (lam * (x1 - x3) - y1 - a1 * x3 - a3) % p
    return (x3, y3)


def _fp_mul(n, pt, a1, a2, a3, a4, p):
    if n < 0:
        n, pt = -n, _fp_neg(pt, a1, a3, p)
    acc = None
    run = pt
    while n:
        if n & 1:
            acc = _fp_add(acc, run, a1, a2, a3, a4, p)
        run = _fp_add(run, run, a1, a2, a3, a4, p)
        n >>= 1
    return acc


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _sqrt_mod(a: int, p: int) -> int:
    """Tonelli-Shanks; a must be a quadratic residue mod odd prime p."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _legendre(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _quartic_rhs_coeffs(a1, a2, a3, a4, a6, p):
    # completing the square: (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
    b2 = (a1 * a1 + 4 * a2) % p
    b4 = (2 * a4 + a1 * a3) % p
    b6 = (a3 * a3 + 4 * a6) % p
    return b2, b4, b6


def _count_exhaustive(a1, a2, a3, a4, a6, p) -> int:
    if p == 2:
        n = 1
        for x in range(2):
            for y in range(2):
                if (y * y + a1 * x * y + a3 * y - (x**3 + a2 * x * x + a4 * x + a6)) % 2 == 0:
                    n += 1
        return n
    b2, b4, b6 = _quartic_rhs_coeffs(a1, a2, a3, a4, a6, p)
    # precompute the squares table once; membership gives the character
    squares = bytearray(p)
    for z in range((p + 1) // 2):
        squares[z * z % p] = 1
    n = p + 1
    for x in range(p):
        g = (4 * x * x * x + b2 * x * x + 2 * b4 * x + b6) % p
        if g == 0:
            continue
        n += 1 if squares[g] else -1
    return n


def _random_point(a1, a2, a3, a4, a6, p, rng) -> tuple[int, int]:
    b2, b4, b6 = _quartic_rhs_coeffs(a1, a2, a3, a4, a6, p)
    inv2 = pow(2, -1, p)
    while True:
        x = rng.randrange(p)
        g = (4 * x * x * x + b2 * x * x + 2 * b4 * x + b6) % p
        if _legendre(g, p) >= 0:
            z = _sqrt_mod(g, p)
            return (x, (z - a1 * x - a3) * inv2 % p)


def _annihilator(pt, a1, a2, a3, a4, p) -> int:
    """Some positive M in the Hasse interval [p+1-2sqrt(p), p+1+2sqrt(p)] with M*pt = O."""
    T = math.isqrt(4 * p)
    s = math.isqrt(2 * T) + 1
    baby: dict = {}
    run = None
    for j in range(s):
        baby.setdefault(run, j)
        run = _fp_add(run, pt, a1, a2, a3, a4, p)
    s_pt = _fp_mul(s, pt, a1, a2, a3, a4, p)
    giant = _fp_mul(p + 1 - T, pt, a1, a2, a3, a4, p)
    for i in range((2 * T) // s + 2):
        j = baby.get(_fp_neg(giant, a1, a3, p))
        if j is not None:
            m = p + 1 + (i * s + j - T)
            if m > 0 and _fp_mul(m, pt, a1, a2, a3, a4, p) is None:
                return m
        j = baby.get(giant)
        if j is not None:
            m = p + 1 + (i * s - j - T)
            if m > 0 and _fp_mul(m, pt, a1, a2, a3, a4, p) is None:
                return m
        giant = _fp_add(giant, s_pt, a1, a2, a3, a4, p)
    raise AmbiguousOrderError(f"no annihilator found mod {p}")  # not reachable for prime p


def _order_from_multiple(pt, multiple, a1, a2, a3, a4, p) -> int:
    d = multiple
    for q, e in _factorize(multiple).items():
        for _ in range(e):
            if _fp_mul(d // q, pt, a1, a2, a3, a4, p) is None:
                d //= q
            else:
                break
    return d


def _group_order_fp(a1, a2, a3, a4, a6, p) -> int:
    if p < EXHAUSTIVE_LIMIT:
        return _count_exhaustive(a1, a2, a3, a4, a6, p)
    T = math.isqrt(4 * p)
    lo, hi = p + 1 - T, p + 1 + T
    rng = random.Random(p)
    lcm = 1
    for _ in range(MAX_ORDER_SAMPLES):
        pt = _random_point(a1, a2, a3, a4, a6, p, rng)
        m = _annihilator(pt, a1, a2, a3, a4, p)
        d = _order_from_multiple(pt, m, a1, a2, a3, a4, p)
        lcm = lcm * d // math.gcd(lcm, d)
        first = ((lo + lcm - 1) // lcm) * lcm
        if first > hi:  # impossible: the true order is a multiple of lcm in range
            raise AmbiguousOrderError(f"no multiple of {lcm} in Hasse interval mod {p}")
        if first + lcm > hi:
            return first
    if p > EXHAUSTIVE_FALLBACK_CAP:
        raise AmbiguousOrderError(f"order ambiguous mod {p} after {MAX_ORDER_SAMPLES} samples")
    return _count_exhaustive(a1, a2, a3, a4, a6, p)


# ---------------------------------------------------------------------------
# public operations


def group_order(c: Curve) -> int:
    """#E(F_p) for a non-singular curve over a prime field."""
    if c.p is None:
        raise ValueError("group_order needs a curve over F_p")
    if c.is_singular():
        raise curves.SingularCurveError(f"singular reduction mod {c.p}")
    return _group_order_fp(c.a1, c.a2, c.a3, c.a4, c.a6, c.p)


def has_odd_order(pt: Point, c: Curve) -> bool:
    """True iff pt has odd order: m*pt = O for m the odd part of #E(F_p)."""
    if pt is None:
        return True
    m = group_order(c)
    while m % 2 == 0:
        m //= 2
    return _fp_mul(m, (int(pt[0]) % c.p, int(pt[1]) % c.p), c.a1, c.a2, c.a3, c.a4, c.p) is None


def divides_some_term(p: int) -> bool:
    """Whether the prime p divides some sequence term.

    Bad-reduction primes are hard-wired from the residue cycles; every other
    prime goes through the odd-order criterion for P mod p.
    """
    if p in _BAD_DIVIDES:
        return _BAD_DIVIDES[p]
    cp, good = curves.reduce_mod_p(curves.CURVE_E, p)
    assert good
    return has_odd_order(curves.reduce_point_mod_p(curves.POINT_P, p), cp)


def zscore(successes: int, trials: int, hypothesized: Fraction) -> float:
    """One-proportion z statistic (p_hat - p0) / sqrt(p0 (1-p0) / n)."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    p0 = float(hypothesized)
    if not 0 < p0 < 1:
        raise ValueError("hypothesized proportion must be strictly between 0 and 1")
    p_hat = successes / trials
    return (p_hat - p0) / math.sqrt(p0 * (1 - p0) / trials)


# ---------------------------------------------------------------------------
# sweep records, checkpoints, parallel driver


def ratio_str(num: int, den: int) -> str:
    """num/den rendered to 9 decimal places, ties to even."""
    getcontext().prec = 50
    return str((Decimal(num) / Decimal(den)).quantize(Decimal("0.000000001"), ROUND_HALF_EVEN))


@dataclass(frozen=True)
class SweepRecord:
    x: int
    pi_prime: int
    pi: int

    @property
    def ratio(self) -> str:
        return ratio_str(self.pi_prime, self.pi)


@dataclass(frozen=True)
class Checkpoint:
    last_prime: int
    pi_so_far: int
    pi_prime_so_far: int

    def save(self, path: str) -> None:
        with open(path, "w") as fh:
            fh.write(f"{self.last_prime} {self.pi_so_far} {self.pi_prime_so_far}\n")

    @classmethod
    def load(cls, path: str) -> "Checkpoint":
        with open(path) as fh:
            parts = fh.read().split()
        if len(parts) != 3:
            raise ValueError(f"malformed checkpoint {path!r}: expected three integers")
        return cls(*(int(v) for v in parts))


def _pair_divides(p: int, coeffs, pt) -> Optional[bool]:
    """Odd-order predicate for an arbitrary rational curve/point pair.

    Returns None for primes the pair cannot be reduced at (bad reduction or
    coefficient denominators); those primes count toward pi only.
    """
    for frac in coeffs:
        if frac.denominator % p == 0:
            return None
    reduced = [f.numerator * pow(f.denominator, -1, p) % p for f in coeffs]
    c = Curve(*reduced, p=p)
    if c.is_singular():
        return None
    return has_odd_order(curves.reduce_point_mod_p(pt, p), c)


def _sweep_chunk(args):
    """Count primes and predicate hits in [lo, hi), split at the given cuts."""
    lo, hi, cuts, mode, coeffs, pt = args
    base = primes_up_to(math.isqrt(hi) + 1)
    out = []
    pi = prime_hits = 0
    cut_iter = list(cuts) + [hi]
    idx = 0
    for p in primes_in_range(lo, hi, base):
        while p > cut_iter[idx]:
            out.append((cut_iter[idx], pi, prime_hits))
            idx += 1
        pi += 1
        if mode == "echo":
            hit = divides_some_term(p)
        else:
            hit = bool(_pair_divides(p, coeffs, pt))
        if hit:
            prime_hits += 1
    while idx < len(cut_iter):
        out.append((cut_iter[idx], pi, prime_hits))
        idx += 1
    return out


def _segments(start: int, x_max: int, boundaries: Sequence[int]):
    lo = start
    while lo <= x_max:
        hi = min(lo + SEGMENT_SIZE, x_max + 1)
        cuts = [b for b in boundaries if lo <= b < hi]
        yield (lo, hi, cuts)
        lo = hi


def _run_sweep(
    x_max: int,
    threads: Optional[int],
    checkpoint_path: Optional[str],
    mode: str,
    coeffs,
    pt,
) -> list[SweepRecord]:
    if x_max < 10:
        raise ValueError("x_max must be >= 10")
    threads = threads or default_threads()
    boundaries = []
    b = 10
    while b <= x_max:
        boundaries.append(b)
        b *= 10
    if not boundaries or boundaries[-1] != x_max:
        boundaries.append(x_max)

    start, pi, prime_hits = 2, 0, 0
    if checkpoint_path and os.path.exists(checkpoint_path):
        ck = Checkpoint.load(checkpoint_path)
        start, pi, prime_hits = ck.last_prime + 1, ck.pi_so_far, ck.pi_prime_so_far

    tasks = [(lo, hi, cuts, mode, coeffs, pt) for lo, hi, cuts in _segments(start, x_max, boundaries)]
    records: list[SweepRecord] = []

    def consume(seg, results):
        nonlocal pi, prime_hits
        lo, hi, cuts, *_ = seg
        base_pi, base_hits = pi, prime_hits
        for cut, dpi, dhits in results:
            if cut in cuts:
                records.append(SweepRecord(cut, base_hits + dhits, base_pi + dpi))
        pi = base_pi + results[-1][1]
        prime_hits = base_hits + results[-1][2]
        if checkpoint_path:
            Checkpoint(hi - 1, pi, prime_hits).save(checkpoint_path)

    if threads == 1:
        for seg in tasks:
            consume(seg, _sweep_chunk(seg))
    else:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for seg, results in zip(tasks, pool.map(_sweep_chunk, tasks, chunksize=1)):
                consume(seg, results)

    # deduplicate: x_max may coincide with a decade cut
    seen = set()
    unique = []
    for rec in records:
        if rec.x not in seen:
            seen.add(rec.x)
            unique.append(rec)
    return unique


def sweep(
    x_max: int, threads: Optional[int] = None, checkpoint_path: Optional[str] = None
) -> list[SweepRecord]:
    """Sweep all primes <= x_max for sequence divisibility.

    Returns one record per decade boundary plus x_max, each carrying the
    exact counts pi_prime (primes dividing some term) and pi.
    """
    return _run_sweep(x_max, threads, checkpoint_path, "echo", None, None)


def density_scan(
    c: Curve, pt: Point, x_max: int, threads: Optional[int] = None
) -> list[SweepRecord]:
    """Odd-order density sweep for an arbitrary rational curve/point pair.

    Counts primes of good reduction at which pt reduces to a point of odd
    order; primes where the pair does not reduce are skipped (they still
    count toward pi).
    """
    if c.p is not None:
        raise ValueError("density_scan expects a curve over the rationals")
    coeffs = tuple(Fraction(v) for v in (c.a1, c.a2, c.a3, c.a4, c.a6))
    return _run_sweep(x_max, threads, None, "pair", coeffs, pt)
