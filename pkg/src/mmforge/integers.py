"""Arbitrary-precision integer support: desk-scale factorization, the
multiplicative functions W, mu, phi and theta, and exact decision of
power inequalities.

Factorization is trial division up to a configurable bound followed by
Brent's variant of the rho method with a fixed, deterministic parameter
sequence, so results are reproducible across runs.  The default budget
is tuned to factor anything up to ~2**96 completely, which covers every
exact-W computation this toolkit performs; callers that hit the budget
get an explicit ``complete=False`` result instead of a wrong answer.

Inequalities between products of rational powers of integers are decided
exactly by clearing denominators and comparing big integers; no floating
point is involved on the decision path.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import IncompleteFactorizationError

# Deterministic Miller-Rabin witness set: correct for all m < 3.3 * 10**24.
# For larger inputs the same bases plus the fixed extras below make the test
# probabilistic but fully deterministic run-to-run.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_EXTRA = (41, 43, 47, 53, 59, 61, 67, 71)
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981


def is_probable_prime(m: int) -> bool:
    """Miller-Rabin primality test (deterministic below ~3.3e24)."""
    if m < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if m % p == 0:
            return m == p
    d = m - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    bases = _MR_BASES if m < _MR_DETERMINISTIC_LIMIT else _MR_BASES + _MR_EXTRA
    for a in bases:
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=32)
def primes_up_to(bound: int) -> tuple[int, ...]:
    """All primes <= bound, by sieve of Eratosthenes."""
    if bound < 2:
        return ()
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return tuple(i for i in range(2, bound + 1) if sieve[i])


@lru_cache(maxsize=4)
def _spf_table(bound: int) -> list[int]:
    # smallest-prime-factor sieve, for fast factorization of small integers
    spf = list(range(bound + 1))
    for i in range(2, math.isqrt(bound) + 1):
        if spf[i] == i:
            for j in range(i * i, bound + 1, i):
                if spf[j] == j:
                    spf[j] = i
    return spf


def factor_small(m: int, bound: int = 1 << 16) -> list[tuple[int, int]]:
    """Factor 1 <= m <= bound via a cached smallest-prime-factor sieve."""
    if not 1 <= m <= bound:
        raise ValueError(f"factor_small expects 1 <= m <= {bound}, got {m}")
    spf = _spf_table(bound)
    out: list[tuple[int, int]] = []
    while m > 1:
        p = spf[m]
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        out.append((p, e))
    return out


@dataclass(frozen=True)
class Budget:
    """Effort limits for :func:`factorize`."""

    trial_bound: int = 10000
    rho_iterations: int = 1 << 21
    rho_restarts: int = 24


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class IntFactorization:
    """Factored form of a positive integer.

    ``primes`` is sorted by prime; ``value == cofactor * prod(p**e)``.
    ``complete`` is False when the rho budget ran out and ``cofactor``
    carries the unfactored (composite) remainder.
    """

    value: int
    primes: tuple[tuple[int, int], ...]
    complete: bool = True
    cofactor: int = 1

    def __post_init__(self):
        acc = self.cofactor
        last = 1
        for p, e in self.primes:
            if p <= last:
                raise ValueError("primes must be strictly increasing")
            last = p
            acc *= p**e
        if acc != self.value:
            raise ValueError("factorization does not multiply back to value")

    @property
    def prime_list(self) -> list[int]:
        return [p for p, _ in self.primes]

    def divisors(self) -> list[int]:
        """All positive divisors of the factored part, sorted."""
        if not self.complete:
            raise IncompleteFactorizationError(f"divisors of {self.value}: incomplete factorization")
        divs = [1]
        for p, e in self.primes:
            divs = [d * p**i for d in divs for i in range(e + 1)]
        return sorted(divs)


def _brent_rho(m: int, restart: int, iteration_cap: int) -> int:
    # Brent's cycle-finding rho with fixed (restart-indexed) parameters.
    # Returns a nontrivial factor of m, or 0 if the iteration cap is hit.
    y, c = 2 + restart, 1 + restart
    g, r, q = 1, 1, 1
    x = ys = y
    count = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % m
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(128, r - k)):
                y = (y * y + c) % m
                q = q * abs(x - y) % m
            g = math.gcd(q, m)
            k += 128
            count += 128
            if count > iteration_cap:
                return 0
        r *= 2
    if g == m:
        # backtrack one step at a time
        g = 1
        while g == 1:
            ys = (ys * ys + c) % m
            g = math.gcd(abs(x - ys), m)
    return g if g != m else 0


def factorize(m: int, budget: Budget = DEFAULT_BUDGET, cache: "FactorCache | None" = None) -> IntFactorization:
    """Factor m >= 1 within the given effort budget.

    Trial division first, then deterministic Brent-rho on the remaining
    cofactor.  When the budget runs out, the result has ``complete=False``
    and the composite remainder in ``cofactor``.
    """
    if m < 1:
        raise ValueError(f"factorize expects m >= 1, got {m}")
    if cache is not None:
        hit = cache.lookup(m)
        if hit is not None:
            return hit
    found: dict[int, int] = {}
    rest = m
    for p in primes_up_to(budget.trial_bound):
        if p * p > rest:
            break
        while rest % p == 0:
            found[p] = found.get(p, 0) + 1
            rest //= p
    pending = [rest] if rest > 1 else []
    incomplete = 1
    while pending:
        v = pending.pop()
        if v == 1:
            continue
        if is_probable_prime(v):
            found[v] = found.get(v, 0) + 1
            continue
        d = 0
        for restart in range(budget.rho_restarts):
            d = _brent_rho(v, restart, budget.rho_iterations)
            if d:
                break
        if d:
            pending.append(d)
            pending.append(v // d)
        else:
            incomplete *= v
    result = IntFactorization(
        value=m,
        primes=tuple(sorted((p, e) for p, e in found.items())),
        complete=(incomplete == 1),
        cofactor=incomplete,
    )
    if cache is not None and result.complete:
        cache.store(result)
    return result


def euler_phi(primes: tuple[tuple[int, int], ...]) -> int:
    out = 1
    for p, e in primes:
        out *= (p - 1) * p ** (e - 1)
    return out


@dataclass(frozen=True)
class MultFunctions:
    """The multiplicative-function bundle of a completely factored integer."""

    W: int
    mobius_of_radical_parts: dict[int, int]
    phi: int
    radical: int
    squarefree_part: int
    theta: Fraction


_MOBIUS_MAP_CAP = 1 << 20


def mult_functions(f: IntFactorization) -> MultFunctions:
    """W, phi, radical and theta of a completely factored integer.

    W is the number of squarefree divisors, ``2**omega``.  ``theta`` is
    phi(radical)/radical as an exact rational.  The mobius map assigns
    mu(d) to every squarefree divisor d of the radical.
    """
    if not f.complete:
        raise IncompleteFactorizationError(f"mult_functions({f.value}): incomplete factorization")
    ps = f.prime_list
    w = 1 << len(ps)
    if w > _MOBIUS_MAP_CAP:
        raise ValueError(f"mobius map for {f.value} would have {w} entries (cap {_MOBIUS_MAP_CAP})")
    mob = {1: 1}
    for p in ps:
        mob.update({d * p: -mu for d, mu in list(mob.items())})
    radical = math.prod(ps)
    theta = Fraction(math.prod(p - 1 for p in ps), radical) if ps else Fraction(1)
    return MultFunctions(
        W=w,
        mobius_of_radical_parts=mob,
        phi=euler_phi(f.primes),
        radical=radical,
        squarefree_part=radical,
        theta=theta,
    )


def primes_dividing_pow_minus_one(q: int, m: int, bound: int) -> list[int]:
    """Primes r <= bound with q**m = 1 (mod r).

    Decided by modular exponentiation against a sieve of primes up to the
    bound; the characteristic of GF(q) never appears since q**m = 0 mod p.
    """
    if q < 2 or m < 1 or bound < 2:
        raise ValueError("need q >= 2, m >= 1, bound >= 2")
    return [r for r in primes_up_to(bound) if pow(q, m, r) == 1]


def power_inequality(lhs_base, lhs_exp, rhs_factors, clearing_exp: int) -> bool:
    """Decide lhs_base**lhs_exp > prod(base**exp) exactly.

    Exponents may be ints or Fractions; ``clearing_exp`` must turn every
    exponent into an integer when multiplied in.  Both sides are raised to
    clearing_exp, negative-exponent factors are moved across, and the
    resulting big integers are compared.  No floating point.
    """
    if clearing_exp < 1:
        raise ValueError("clearing_exp must be a positive integer")

    def cleared(exp):
        v = Fraction(exp) * clearing_exp
        if v.denominator != 1:
            raise ValueError(f"clearing_exp={clearing_exp} does not clear exponent {exp}")
        return int(v)

    lhs_val = 1
    rhs_val = 1
    e = cleared(lhs_exp)
    if e >= 0:
        lhs_val *= lhs_base**e
    else:
        rhs_val *= lhs_base**-e
    for base, exp in rhs_factors:
        e = cleared(exp)
        if e >= 0:
            rhs_val *= base**e
        else:
            lhs_val *= base**-e
    return lhs_val > rhs_val


@lru_cache(maxsize=65536)
def ord_mod(a: int, m: int) -> int:
    """Multiplicative order of a modulo m (requires gcd(a, m) == 1).

    Uses the factored group order with divisor descent: start from phi(m)
    and strip every prime that still leaves a == 1.
    """
    if m == 1:
        return 1
    a %= m
    if math.gcd(a, m) != 1:
        raise ValueError(f"ord_mod({a}, {m}): arguments not coprime")
    if m <= 1 << 16:
        phi_primes = []
        phi = 1
        for p, e in factor_small(m):
            phi *= (p - 1) * p ** (e - 1)
        e = phi
        for p, _ in factor_small(phi):
            phi_primes.append(p)
    else:
        f = factorize(m)
        if not f.complete:
            raise IncompleteFactorizationError(f"ord_mod: cannot factor {m}")
        e = euler_phi(f.primes)
        ef = factorize(e)
        if not ef.complete:
            raise IncompleteFactorizationError(f"ord_mod: cannot factor phi({m})")
        phi_primes = ef.prime_list
    for p in phi_primes:
        while e % p == 0 and pow(a, e // p, m) == 1:
            e //= p
    return e


@lru_cache(maxsize=4096)
def prime_power_decompose(q: int) -> tuple[int, int]:
    """Write a prime power q as (p, k) with q = p**k; error otherwise."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    f = factorize(q)
    if not f.complete or len(f.primes) != 1:
        raise ValueError(f"{q} is not a prime power")
    return f.primes[0]


def coprime_part(n: int, p: int) -> int:
    """The largest divisor of n coprime to p."""
    while n % p == 0:
        n //= p
    return n


class FactorCache:
    """Line-oriented factorization cache.

    One record per line: ``value,p^e,p^e,...,flag`` with flag 1 for a
    complete factorization.  The file is loaded once at construction and
    appended to when a new complete factorization is stored; appends are
    serialized through a lock so a single writer is active at a time.
    """

    def __init__(self, path=None):
        self.path = path
        self._mem: dict[int, IntFactorization] = {}
        self._lock = threading.Lock()
        if path is not None:
            self._load()

    def _load(self):
        try:
            with open(self.path, "r", encoding="ascii") as fh:
                lines = fh.read().splitlines()
        except FileNotFoundError:
            return
        for line in lines:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                rec = self._parse(line)
            except (ValueError, IndexError):
                continue  # tolerate a truncated trailing line
            self._mem[rec.value] = rec

    @staticmethod
    def _parse(line: str) -> IntFactorization:
        parts = line.split(",")
        value = int(parts[0])
        complete = parts[-1] == "1"
        primes = []
        cof = value
        for token in parts[1:-1]:
            if not token:
                continue
            p_s, e_s = token.split("^")
            p, e = int(p_s), int(e_s)
            primes.append((p, e))
            cof //= p**e
        return IntFactorization(value=value, primes=tuple(sorted(primes)), complete=complete, cofactor=cof if not complete else 1)

    @staticmethod
    def _format(rec: IntFactorization) -> str:
        mid = ",".join(f"{p}^{e}" for p, e in rec.primes)
        return f"{rec.value},{mid},{1 if rec.complete else 0}"

    def lookup(self, value: int) -> IntFactorization | None:
        return self._mem.get(value)

    def store(self, rec: IntFactorization):
        if not rec.complete:
            return
        with self._lock:
            if rec.value in self._mem:
                return
            self._mem[rec.value] = rec
            if self.path is not None:
                with open(self.path, "a", encoding="ascii") as fh:
                    fh.write(self._format(rec) + "\n")
                    fh.flush()

    def __len__(self):
        return len(self._mem)
