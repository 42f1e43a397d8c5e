"""Random generators and slow reference computations shared by the tests."""
import random
from fractions import Fraction

from genimm.calculus import (
    ImmersionContext,
    InvariantState,
    StrataEvent,
    Target,
    defined_invariants,
    event_alphabet,
)


def akiyama_tanigawa(n):
    """B_0..B_n with B_1 = +1/2; independent of the library's recurrence."""
    a = [Fraction(0)] * (n + 1)
    out = []
    for m in range(n + 1):
        a[m] = Fraction(1, m + 1)
        for j in range(m, 0, -1):
            a[j - 1] = j * (a[j - 1] - a[j])
        out.append(a[0])
    return out


def primes_upto(n):
    sieve = [True] * (n + 1)
    sieve[:2] = [False, False]
    for i in range(2, int(n ** 0.5) + 1):
        if sieve[i]:
            sieve[i * i::i] = [False] * len(sieve[i * i::i])
    return [i for i, ok in enumerate(sieve) if ok]


def random_context(rng, n=None, m=None, euclidean=None):
    return ImmersionContext(
        n=rng.randint(2, 6) if n is None else n,
        m=rng.randint(2, 9) if m is None else m,
        target=(Target.EUCLIDEAN if (rng.random() < 0.75 if euclidean is None else euclidean)
                else Target.GENERAL),
        source_oriented=rng.random() < 0.8,
        cond_lambda=rng.random() < 0.8,
        cond_l=rng.random() < 0.8,
        tor_condition=rng.random() < 0.7,
    )


def random_state(rng, ctx, spread=50):
    d = defined_invariants(ctx)
    l_value = rng.randint(-spread, spread) if d.l_value else None
    lam = None
    if d.lambda_:
        if l_value is not None and ctx.tor_condition:
            lam = l_value % 2
        else:
            lam = rng.randint(0, 1)
    return InvariantState(
        j_values={r: rng.randint(-spread, spread) for r in d.j_indices},
        j_count=rng.randint(0, spread) if d.j_count else None,
        lambda_=lam,
        l_value=l_value,
    )


def random_events(rng, ctx, length):
    alphabet = event_alphabet(ctx)
    return [rng.choice(alphabet) for _ in range(length)]


def make_rng(seed):
    return random.Random(seed)


__all__ = ["akiyama_tanigawa", "primes_upto", "random_context", "random_state",
           "random_events", "make_rng", "StrataEvent"]
