"""Combinatorial model of the self-intersection stratification.

For a generic immersion M^(nm-1) -> W^(n(m+1)-1), the k-fold points form a
stratum Gamma_k of dimension n(m-k+1)-1, for 2 <= k <= m. Its closure is
resolved by a closed manifold Delta^k, covered k-to-1 by Delta~^k in the
source. Only Euler characteristics and (for 1-dimensional deepest strata)
component counts are kept, since those are all the J-invariants read.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Dict, List, Mapping, Optional, Tuple

from .calculus import (
    CalculusError,
    EventKind,
    ImmersionContext,
    StrataEvent,
    admissible_J_indices,
)

__all__ = [
    "ProfileError",
    "StratumDescriptor",
    "SelfIntersectionProfile",
    "stratum_dimension",
    "embedding_profile",
    "profile_from_values",
    "evaluate_J",
    "apply_morse_modification",
    "apply_component_modification",
    "apply_event_to_profile",
    "disjoint_union",
    "parity_audit",
    "ParityRow",
]


class ProfileError(CalculusError):
    pass


def stratum_dimension(n: int, m: int, k: int) -> int:
    if not 2 <= k <= m:
        raise ProfileError(f"depth {k} outside [2, {m}]")
    return n * (m - k + 1) - 1


@dataclass(frozen=True)
class StratumDescriptor:
    depth: int
    dimension: int
    chi_resolved: Optional[int] = None
    chi_resolved_cover: Optional[int] = None
    component_count: Optional[int] = None

    def __post_init__(self):
        if self.chi_resolved is not None and self.chi_resolved_cover is not None:
            if self.chi_resolved_cover != self.depth * self.chi_resolved:
                raise ProfileError(
                    f"depth {self.depth}: cover chi {self.chi_resolved_cover} is not "
                    f"{self.depth} x {self.chi_resolved}")
        if self.dimension % 2 and self.chi_resolved not in (None, 0):
            raise ProfileError(
                f"odd-dimensional stratum at depth {self.depth} must have chi 0")
        if self.component_count is not None:
            if self.dimension != 1:
                raise ProfileError("component counts are only kept for 1-dimensional strata")
            if self.component_count < 0:
                raise ProfileError("negative component count")


@dataclass(frozen=True)
class SelfIntersectionProfile:
    n: int
    m: int
    strata: Mapping[int, StratumDescriptor]

    def __post_init__(self):
        object.__setattr__(self, "strata", dict(self.strata))
        if set(self.strata) != set(range(2, self.m + 1)):
            raise ProfileError(f"strata must cover depths 2..{self.m}")
        for k, s in self.strata.items():
            if s.depth != k or s.dimension != stratum_dimension(self.n, self.m, k):
                raise ProfileError(f"stratum at depth {k} is mislabelled: {s}")

    def __getitem__(self, k: int) -> StratumDescriptor:
        return self.strata[k]

    def with_stratum(self, s: StratumDescriptor) -> "SelfIntersectionProfile":
        strata = dict(self.strata)
        strata[s.depth] = s
        return SelfIntersectionProfile(self.n, self.m, strata)


def embedding_profile(n: int, m: int) -> SelfIntersectionProfile:
    """Profile with every stratum empty. Odd-dimensional strata carry no chi."""
    strata = {}
    for k in range(2, m + 1):
        dim = stratum_dimension(n, m, k)
        even = dim % 2 == 0
        strata[k] = StratumDescriptor(
            depth=k,
            dimension=dim,
            chi_resolved=0 if even else None,
            chi_resolved_cover=0 if even else None,
            component_count=0 if dim == 1 else None,
        )
    return SelfIntersectionProfile(n, m, strata)


def profile_from_values(n: int, m: int, chi: Mapping[int, int] | None = None,
                        components: Optional[int] = None) -> SelfIntersectionProfile:
    """Build a profile from chi(Delta^k) per even-dimensional depth and, for
    n = 2, the number of components of the deepest stratum."""
    prof = embedding_profile(n, m)
    for k, c in (chi or {}).items():
        prof = prof.with_stratum(replace(prof[k], chi_resolved=c, chi_resolved_cover=k * c))
    if components is not None:
        prof = prof.with_stratum(replace(prof[m], component_count=components))
    return prof


def evaluate_J(profile: SelfIntersectionProfile) -> Tuple[Dict[int, int], Optional[int]]:
    """Read off ``({r: J_r}, J)``; ``J`` is ``None`` unless n = 2."""
    ctx = ImmersionContext(profile.n, profile.m)
    j_values = {}
    for r in sorted(admissible_J_indices(ctx)):
        chi = profile[r].chi_resolved
        if chi is None:
            raise ProfileError(f"no Euler characteristic recorded at depth {r}")
        j_values[r] = chi
    j_count = None
    if profile.n == 2:
        j_count = profile[profile.m].component_count
        if j_count is None:
            raise ProfileError("no component count for the deepest stratum")
    return j_values, j_count


def apply_morse_modification(profile: SelfIntersectionProfile, r: int,
                             sign: int) -> SelfIntersectionProfile:
    """Surgery on the even-dimensional Delta^r: chi moves by 2*sign, its
    r-fold cover by 2*r*sign."""
    if r not in profile.strata:
        raise ProfileError(f"depth {r} outside [2, {profile.m}]")
    s = profile[r]
    if s.dimension % 2:
        raise ProfileError(f"Delta^{r} has odd dimension {s.dimension}")
    chi = (s.chi_resolved or 0) + 2 * sign
    return profile.with_stratum(replace(s, chi_resolved=chi, chi_resolved_cover=r * chi))


def apply_component_modification(profile: SelfIntersectionProfile,
                                 sign: int) -> SelfIntersectionProfile:
    if profile.n != 2:
        raise ProfileError("component counts only change for n = 2")
    s = profile[profile.m]
    if s.component_count is None:
        raise ProfileError("no component count for the deepest stratum")
    count = s.component_count + sign
    if count < 0:
        raise ProfileError("component count would go negative")
    return profile.with_stratum(replace(s, component_count=count))


def apply_event_to_profile(profile: SelfIntersectionProfile,
                           event: StrataEvent) -> SelfIntersectionProfile:
    """Profile counterpart of :func:`genimm.calculus.apply_event`.

    Multiple-point events leave the local self-intersection picture alone.
    Tangencies at depth k change only Delta^k (when even-dimensional) and,
    for n = 2 and k = m, the number of components of Gamma_m.
    """
    if event.kind is EventKind.MULTIPLE_POINT:
        return profile
    k = event.depth
    if not 2 <= k <= profile.m:
        raise ProfileError(f"depth {k} outside [2, {profile.m}]")
    if profile[k].dimension % 2 == 0:
        profile = apply_morse_modification(profile, k, event.sign)
    if profile.n == 2 and k == profile.m:
        profile = apply_component_modification(profile, event.sign)
    return profile


def _add(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None and b is None:
        return None
    return (a or 0) + (b or 0)


def disjoint_union(a: SelfIntersectionProfile,
                   b: SelfIntersectionProfile) -> SelfIntersectionProfile:
    if (a.n, a.m) != (b.n, b.m):
        raise ProfileError(f"dimension mismatch: ({a.n}, {a.m}) vs ({b.n}, {b.m})")
    strata = {}
    for k in a.strata:
        sa, sb = a[k], b[k]
        strata[k] = replace(
            sa,
            chi_resolved=_add(sa.chi_resolved, sb.chi_resolved),
            chi_resolved_cover=_add(sa.chi_resolved_cover, sb.chi_resolved_cover),
            component_count=_add(sa.component_count, sb.component_count),
        )
    return SelfIntersectionProfile(a.n, a.m, strata)


@dataclass(frozen=True)
class ParityRow:
    r: int
    dimension: int
    admissible: bool

    @property
    def consistent(self) -> bool:
        return self.admissible == (self.dimension % 2 == 0)


def parity_audit(n: int, m: int) -> List[ParityRow]:
    """Compare 'dim Delta^r even' with 'n odd and m - r even' for each r."""
    if n < 2 or m < 2:
        raise ProfileError(f"need n, m >= 2, got n={n}, m={m}")
    return [ParityRow(r, stratum_dimension(n, m, r), n % 2 == 1 and (m - r) % 2 == 0)
            for r in range(2, m + 1)]
