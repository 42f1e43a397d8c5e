"""Exact Bernoulli arithmetic and divisibility constraints on the linking
invariant L of immersions S^(2m-1) -> R^(2m+1).

Bernoulli numbers come in two conventions here:

* :func:`bernoulli_modern` uses the modern indexing (B_0 = 1, B_1 = -1/2,
  B_2 = 1/6, B_3 = 0, ...).
* :func:`bernoulli_top` uses the topologist indexing, B_j = |B_{2j}| in the
  modern convention, so B_1 = 1/6 and B_2 = 1/30. This is the convention in
  which mu_1 = 24.

All values are exact; :class:`fractions.Fraction` is the rational type.
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, prod
from typing import Dict, Iterator, List, Tuple

__all__ = [
    "Factorization",
    "GroupKind",
    "GroupDescriptor",
    "LRangeReport",
    "bernoulli_modern",
    "clear_bernoulli_cache",
    "bernoulli_top",
    "mu",
    "factorize",
    "is_prime",
    "p_adic_valuation",
    "von_staudt_clausen_denominator",
    "imm_group",
    "embedding_index",
    "l_divisor",
    "l_divisor_bruteforce",
    "l_range",
    "is_l_trivial",
    "DEFAULT_K_BOUND",
]

DEFAULT_K_BOUND = 64


# --------------------------------------------------------------------------
# Bernoulli numbers
# --------------------------------------------------------------------------

_even_lock = threading.Lock()
# _even_cache[k] == B_{2k} (modern convention)
_even_cache: List[Fraction] = [Fraction(1)]


def _bernoulli_even(k: int) -> Fraction:
    """Modern B_{2k} from the binomial recurrence, memoized."""
    with _even_lock:
        while len(_even_cache) <= k:
            mm = len(_even_cache)
            n = 2 * mm
            # sum_{i=0}^{n} C(n+1, i) B_i = 0, keeping only even i plus B_1
            s = Fraction(n + 1) * Fraction(-1, 2)
            for i, b in enumerate(_even_cache):
                s += comb(n + 1, 2 * i) * b
            _even_cache.append(-s / (n + 1))
        return _even_cache[k]


def clear_bernoulli_cache() -> None:
    with _even_lock:
        del _even_cache[1:]


def bernoulli_modern(i: int) -> Fraction:
    """Return the Bernoulli number B_i with B_1 = -1/2."""
    if i < 0:
        raise ValueError(f"Bernoulli index must be >= 0, got {i}")
    if i == 1:
        return Fraction(-1, 2)
    if i % 2:
        return Fraction(0)
    return _bernoulli_even(i // 2)


def bernoulli_top(j: int) -> Fraction:
    """Topologist's B_j = |B_{2j}|; always positive."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    return abs(_bernoulli_even(j))


def mu(j: int) -> int:
    """Denominator of B_j / (4j) in lowest terms.

    This is the index of the embedding classes inside the regular homotopy
    classes of immersions S^(4j-1) -> R^(4j+1).
    """
    return (bernoulli_top(j) / (4 * j)).denominator


def embedding_index(j: int) -> int:
    return mu(j)


# --------------------------------------------------------------------------
# Factorization
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Factorization:
    """Prime factorization as increasing ``(prime, exponent)`` pairs."""

    factors: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        last = 1
        for p, e in self.factors:
            if p <= last or e < 1:
                raise ValueError(f"malformed factorization {self.factors!r}")
            last = p

    @property
    def value(self) -> int:
        return prod(p ** e for p, e in self.factors)

    def as_dict(self) -> Dict[int, int]:
        return dict(self.factors)

    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def valuation(self, p: int) -> int:
        return self.as_dict().get(p, 0)

    def __iter__(self) -> Iterator[Tuple[int, int]]:
        return iter(self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "·".join(str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors)


def _trial_divisors() -> Iterator[int]:
    yield 2
    yield 3
    # 6k +- 1 wheel
    d = 5
    while True:
        yield d
        yield d + 2
        d += 6


def factorize(n: int) -> Factorization:
    """Complete factorization of ``n >= 1`` by wheel trial division."""
    if n < 1:
        raise ValueError(f"can only factor positive integers, got {n}")
    out = []
    for d in _trial_divisors():
        if d * d > n:
            break
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
    if n > 1:
        out.append((n, 1))
    return Factorization(tuple(out))


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return factorize(p).factors == ((p, 1),)


def p_adic_valuation(n: int, p: int) -> int:
    """Largest ``e`` with ``p**e`` dividing ``n``."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def von_staudt_clausen_denominator(j: int) -> int:
    """Product of the primes p with (p - 1) | 2j."""
    if j < 1:
        raise ValueError(f"j must be >= 1, got {j}")
    n = 2 * j
    return prod(d + 1 for d in range(1, n + 1) if n % d == 0 and is_prime(d + 1))


# --------------------------------------------------------------------------
# Smale groups and the range of L
# --------------------------------------------------------------------------

class GroupKind(enum.Enum):
    INFINITE_CYCLIC = "infinite_cyclic"
    CYCLIC = "cyclic"
    TRIVIAL = "trivial"


@dataclass(frozen=True)
class GroupDescriptor:
    kind: GroupKind
    order: int | None = None

    def __post_init__(self):
        if self.kind is GroupKind.CYCLIC:
            if self.order is None or self.order < 2:
                raise ValueError("finite cyclic group needs order >= 2")
        elif self.order is not None:
            raise ValueError(f"{self.kind.value} group takes no order")

    def __str__(self) -> str:
        if self.kind is GroupKind.INFINITE_CYCLIC:
            return "Z"
        if self.kind is GroupKind.TRIVIAL:
            return "0"
        return f"Z/{self.order}"


def _check_m(m: int) -> None:
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")


def imm_group(m: int) -> GroupDescriptor:
    """Regular homotopy classes of immersions S^(2m-1) -> R^(2m+1)."""
    _check_m(m)
    if m % 2 == 0:
        return GroupDescriptor(GroupKind.INFINITE_CYCLIC)
    if m % 4 == 1:
        return GroupDescriptor(GroupKind.CYCLIC, 2)
    return GroupDescriptor(GroupKind.TRIVIAL)


def l_divisor(m: int) -> int:
    """Largest integer D proved to divide L(f) for every generic
    f: S^(2m-1) -> R^(2m+1)."""
    _check_m(m)
    if m % 4 == 1:
        return (m + 1) // 2
    if m % 4 == 3:
        return m + 1
    j = m // 2
    mu_j = mu(j)
    d = 1
    for p, e in factorize(2 * j + 1):
        r = e - p_adic_valuation(mu_j, p)
        if r > 0:
            d *= p ** r
    return d


def _largest_forced_divisor(modulus: int, annihilator: int) -> int:
    # largest D such that annihilator*L = 0 mod modulus forces D | L
    solutions = [x for x in range(modulus) if annihilator * x % modulus == 0]
    return max(d for d in range(1, modulus + 1)
               if all(x % d == 0 for x in solutions) and modulus % d == 0)


def l_divisor_bruteforce(m: int, k_bound: int = DEFAULT_K_BOUND) -> int:
    """Enumeration oracle for :func:`l_divisor`.

    For even m it searches every triple (p, r, k) with p | 2j+1, k <= k_bound,
    keeping the largest r for which p^(r+k) | 2j+1 and p^(k+1) does not
    divide mu_j. For odd m it enumerates residues: the Smale group is killed
    by 2 (m = 1 mod 4) or is trivial (m = 3 mod 4), so D is the largest
    divisor forced by 2L = 0 or L = 0 modulo m+1.
    """
    _check_m(m)
    if m % 2:
        group = imm_group(m)
        annihilator = group.order if group.kind is GroupKind.CYCLIC else 1
        return _largest_forced_divisor(m + 1, annihilator)
    j = m // 2
    odd = 2 * j + 1
    mu_j = mu(j)
    d = 1
    for p in range(2, odd + 1):
        if odd % p or not is_prime(p):
            continue
        best = 0
        r = 0
        while odd % p ** r == 0:
            if any(odd % p ** (r + k) == 0 and mu_j % p ** (k + 1) != 0
                   for k in range(k_bound + 1)):
                best = r
            r += 1
        d *= p ** best
    return d


@dataclass(frozen=True)
class LRangeReport:
    """What is known about the set of values of L for S^(2m-1) -> R^(2m+1).

    Every attainable value is a multiple of ``divisor`` and every multiple of
    ``realizable_subgroup`` is attained.
    """

    m: int
    divisor: int
    realizable_subgroup: int
    exact: bool

    def to_record(self) -> dict:
        return {"m": self.m, "divisor": self.divisor,
                "realizable_subgroup": self.realizable_subgroup,
                "exact": self.exact}

    @classmethod
    def from_record(cls, rec: dict) -> "LRangeReport":
        return cls(int(rec["m"]), int(rec["divisor"]),
                   int(rec["realizable_subgroup"]), bool(rec["exact"]))


def l_range(m: int) -> LRangeReport:
    d = l_divisor(m)
    return LRangeReport(m=m, divisor=d, realizable_subgroup=m + 1, exact=d == m + 1)


def is_l_trivial(j: int) -> bool:
    """True when no prime factor of 2j+1 divides mu_j (so l vanishes)."""
    mu_j = mu(j)
    return all(mu_j % p for p in factorize(2 * j + 1).primes())
