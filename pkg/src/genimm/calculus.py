"""Jump calculus for the first-order invariants J_r, J, Lambda and L.

A generic path in the space of immersions M^(nm-1) -> W^(n(m+1)-1) crosses
the discriminant in two kinds of codimension-one events:

* a self-tangency at a degenerate k-fold point (2 <= k <= m), which does a
  Morse modification on the resolved k-fold self-intersection, and
* an (m+1)-fold point, the only event that moves L and Lambda.

Invariant values are tracked as differences along a path. Choosing the base
point (e.g. zero on embeddings) is up to the caller.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

__all__ = [
    "Target",
    "ImmersionContext",
    "InvariantState",
    "EventKind",
    "StrataEvent",
    "ResidueReport",
    "Definedness",
    "CalculusError",
    "InconsistentStateError",
    "ScriptError",
    "admissible_J_indices",
    "defined_invariants",
    "initial_state",
    "check_state",
    "apply_event",
    "run_script",
    "connected_sum",
    "reverse_source_orientation",
    "reflect_target",
    "residues",
    "loop_check",
    "event_alphabet",
    "shortest_event_path",
    "count_events",
]


class CalculusError(ValueError):
    pass


class InconsistentStateError(CalculusError):
    """State does not match the definedness rules of its context, or breaks
    the Lambda = L mod 2 coupling."""


class ScriptError(CalculusError):
    def __init__(self, index: int, cause: Exception):
        super().__init__(f"event {index}: {cause}")
        self.index = index
        self.cause = cause


class Target(enum.Enum):
    EUCLIDEAN = "euclidean"
    GENERAL = "general"


@dataclass(frozen=True)
class ImmersionContext:
    """Dimension pair and homological side conditions for M^(nm-1) -> W.

    ``cond_lambda``: H_{n-1}(M; Z2) = 0 = H_n(M; Z2).
    ``cond_l``: H_{n-1}(M; Z) = 0 = H_n(M; Z).
    ``tor_condition``: Tor(H_{n-2}(M; Z), Z2) = 0.
    """

    n: int
    m: int
    target: Target = Target.EUCLIDEAN
    source_oriented: bool = True
    cond_lambda: bool = True
    cond_l: bool = True
    tor_condition: bool = True

    def __post_init__(self):
        if self.n < 2 or self.m < 2:
            raise CalculusError(f"need n, m >= 2, got n={self.n}, m={self.m}")
        if not isinstance(self.target, Target):
            object.__setattr__(self, "target", Target(self.target))

    @property
    def source_dim(self) -> int:
        return self.n * self.m - 1

    @property
    def target_dim(self) -> int:
        return self.n * (self.m + 1) - 1

    @property
    def euclidean(self) -> bool:
        return self.target is Target.EUCLIDEAN


@dataclass(frozen=True)
class Definedness:
    j_indices: FrozenSet[int]
    j_count: bool
    lambda_: bool
    lambda_jumps: bool
    l_value: bool

    def keys(self) -> List[str]:
        """Flat invariant names, in a stable order."""
        out = [f"J_{r}" for r in sorted(self.j_indices)]
        if self.j_count:
            out.append("J")
        if self.lambda_:
            out.append("Lambda")
        if self.l_value:
            out.append("L")
        return out


def admissible_J_indices(ctx: ImmersionContext) -> FrozenSet[int]:
    if ctx.n % 2 == 0:
        return frozenset()
    return frozenset(r for r in range(2, ctx.m + 1) if (ctx.m - r) % 2 == 0)


def defined_invariants(ctx: ImmersionContext) -> Definedness:
    return Definedness(
        j_indices=admissible_J_indices(ctx),
        j_count=ctx.n == 2,
        lambda_=ctx.cond_lambda and ctx.euclidean,
        lambda_jumps=ctx.m % 2 == 0,
        l_value=(ctx.n % 2 == 0 and ctx.source_oriented and ctx.cond_l
                 and ctx.euclidean),
    )


@dataclass(frozen=True)
class InvariantState:
    """Current invariant values; ``None`` marks an undefined invariant.

    ``lambda_`` is an element of Z2 stored as 0 or 1.
    """

    j_values: Dict[int, int] = field(default_factory=dict)
    j_count: Optional[int] = None
    lambda_: Optional[int] = None
    l_value: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "j_values", dict(self.j_values))
        if self.lambda_ is not None and self.lambda_ not in (0, 1):
            object.__setattr__(self, "lambda_", self.lambda_ % 2)

    def as_flat(self) -> Dict[str, int]:
        out = {f"J_{r}": v for r, v in sorted(self.j_values.items())}
        if self.j_count is not None:
            out["J"] = self.j_count
        if self.lambda_ is not None:
            out["Lambda"] = self.lambda_
        if self.l_value is not None:
            out["L"] = self.l_value
        return out

    @classmethod
    def from_flat(cls, values: Dict[str, int]) -> "InvariantState":
        j_values = {}
        kw = {}
        for key, v in values.items():
            if key.startswith("J_"):
                j_values[int(key[2:])] = int(v)
            elif key == "J":
                kw["j_count"] = int(v)
            elif key == "Lambda":
                kw["lambda_"] = int(v)
            elif key == "L":
                kw["l_value"] = int(v)
            else:
                raise CalculusError(f"unknown invariant {key!r}")
        return cls(j_values=j_values, **kw)


def initial_state(ctx: ImmersionContext, **values: int) -> InvariantState:
    """State with every defined invariant set to 0, then overridden by
    ``values`` given in flat form (``J_3=4``, ``L=35``...)."""
    flat = {k: 0 for k in defined_invariants(ctx).keys()}
    for key, v in values.items():
        if key not in flat:
            raise InconsistentStateError(f"{key} is not defined in {ctx}")
        flat[key] = v
    return InvariantState.from_flat(flat)


def check_state(ctx: ImmersionContext, state: InvariantState) -> None:
    """Raise :class:`InconsistentStateError` unless ``state`` fits ``ctx``."""
    d = defined_invariants(ctx)
    if set(state.j_values) != d.j_indices:
        raise InconsistentStateError(
            f"J_r indices {sorted(state.j_values)} != admissible {sorted(d.j_indices)}")
    for name, present, wanted in (("J", state.j_count is not None, d.j_count),
                                  ("Lambda", state.lambda_ is not None, d.lambda_),
                                  ("L", state.l_value is not None, d.l_value)):
        if present != wanted:
            raise InconsistentStateError(
                f"{name} is {'defined' if wanted else 'undefined'} here "
                f"but the state {'lacks' if wanted else 'carries'} it")
    if (ctx.tor_condition and state.lambda_ is not None
            and state.l_value is not None and state.lambda_ != state.l_value % 2):
        raise InconsistentStateError(
            f"Lambda={state.lambda_} but L={state.l_value} (mod 2 mismatch)")


class EventKind(enum.Enum):
    SELF_TANGENCY = "self_tangency"
    MULTIPLE_POINT = "multiple_point"


@dataclass(frozen=True)
class StrataEvent:
    """One transverse crossing of the codimension-one discriminant stratum.

    ``sign`` is +1 when the path moves to the positive side fixed by the
    coorientation, -1 otherwise. ``depth`` is only used for self-tangencies.
    """

    kind: EventKind
    sign: int
    depth: Optional[int] = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise CalculusError(f"sign must be +1 or -1, got {self.sign}")
        if self.kind is EventKind.SELF_TANGENCY:
            if self.depth is None or self.depth < 2:
                raise CalculusError(f"self-tangency needs depth >= 2, got {self.depth}")
        elif self.depth is not None:
            raise CalculusError("multiple-point events carry no depth")

    @classmethod
    def tangency(cls, depth: int, sign: int) -> "StrataEvent":
        return cls(EventKind.SELF_TANGENCY, sign, depth)

    @classmethod
    def multiple_point(cls, sign: int) -> "StrataEvent":
        return cls(EventKind.MULTIPLE_POINT, sign)

    def inverse(self) -> "StrataEvent":
        return replace(self, sign=-self.sign)

    def __str__(self) -> str:
        s = "+" if self.sign > 0 else "-"
        if self.kind is EventKind.SELF_TANGENCY:
            return f"self_tangency({self.depth},{s})"
        return f"multiple_point({s})"


def apply_event(ctx: ImmersionContext, state: InvariantState,
                event: StrataEvent) -> InvariantState:
    eps = event.sign
    if event.kind is EventKind.SELF_TANGENCY:
        k = event.depth
        if not 2 <= k <= ctx.m:
            raise CalculusError(f"self-tangency depth {k} outside [2, {ctx.m}]")
        j_values = state.j_values
        if k in j_values:
            j_values = dict(j_values)
            j_values[k] += 2 * eps
        j_count = state.j_count
        if j_count is not None and k == ctx.m:
            j_count += eps
        return InvariantState(j_values, j_count, state.lambda_, state.l_value)

    lam = state.lambda_
    if lam is not None and ctx.m % 2 == 0:
        lam ^= 1
    l_value = state.l_value
    if l_value is not None:
        l_value += eps * (ctx.m + 1)
    return InvariantState(state.j_values, state.j_count, lam, l_value)


def run_script(ctx: ImmersionContext, state0: InvariantState,
               events: Iterable[StrataEvent]) -> List[InvariantState]:
    trace = [state0]
    for i, ev in enumerate(events):
        try:
            trace.append(apply_event(ctx, trace[-1], ev))
        except CalculusError as exc:
            raise ScriptError(i, exc) from exc
    return trace


def _add(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None or b is None:
        return None
    return a + b


def connected_sum(ctx_a: ImmersionContext, state_a: InvariantState,
                  ctx_b: ImmersionContext, state_b: InvariantState
                  ) -> Tuple[ImmersionContext, InvariantState]:
    if (ctx_a.n, ctx_a.m) != (ctx_b.n, ctx_b.m):
        raise CalculusError(
            f"dimension mismatch: ({ctx_a.n}, {ctx_a.m}) vs ({ctx_b.n}, {ctx_b.m})")
    if not (ctx_a.euclidean and ctx_b.euclidean):
        raise CalculusError("connected sum needs Euclidean targets")
    ctx = ImmersionContext(
        n=ctx_a.n, m=ctx_a.m, target=Target.EUCLIDEAN,
        source_oriented=ctx_a.source_oriented and ctx_b.source_oriented,
        cond_lambda=ctx_a.cond_lambda and ctx_b.cond_lambda,
        cond_l=ctx_a.cond_l and ctx_b.cond_l,
        tor_condition=ctx_a.tor_condition and ctx_b.tor_condition,
    )
    d = defined_invariants(ctx)
    j_values = {r: state_a.j_values[r] + state_b.j_values[r] for r in d.j_indices}
    lam = _add(state_a.lambda_, state_b.lambda_) if d.lambda_ else None
    state = InvariantState(
        j_values=j_values,
        j_count=_add(state_a.j_count, state_b.j_count) if d.j_count else None,
        lambda_=None if lam is None else lam % 2,
        l_value=_add(state_a.l_value, state_b.l_value) if d.l_value else None,
    )
    return ctx, state


def reverse_source_orientation(ctx: ImmersionContext,
                               state: InvariantState) -> InvariantState:
    """Precompose with an orientation-reversing diffeomorphism of M:
    L picks up (-1)^(m+1), everything else is orientation independent."""
    if not ctx.source_oriented:
        raise CalculusError("source manifold is not oriented")
    if state.l_value is None or ctx.m % 2:
        return state
    return replace(state, l_value=-state.l_value)


def reflect_target(ctx: ImmersionContext, state: InvariantState) -> InvariantState:
    """Postcompose with a reflection of R^(n(m+1)-1): L picks up (-1)^m."""
    if not ctx.euclidean:
        raise CalculusError("reflection needs a Euclidean target")
    if state.l_value is None or ctx.m % 2 == 0:
        return state
    return replace(state, l_value=-state.l_value)


@dataclass(frozen=True)
class ResidueReport:
    """Regular homotopy residues: l in Z_(m+1), lambda in Z2 (m odd only),
    j_r in Z2."""

    l_residue: Optional[int]
    lambda_residue: Optional[int]
    j_residues: Dict[int, int]

    def to_record(self) -> dict:
        return {"l": self.l_residue, "lambda": self.lambda_residue,
                "j": {str(r): v for r, v in sorted(self.j_residues.items())}}

    @classmethod
    def from_record(cls, rec: dict) -> "ResidueReport":
        return cls(rec["l"], rec["lambda"],
                   {int(r): int(v) for r, v in rec["j"].items()})


def residues(ctx: ImmersionContext, state: InvariantState) -> ResidueReport:
    return ResidueReport(
        l_residue=None if state.l_value is None else state.l_value % (ctx.m + 1),
        lambda_residue=state.lambda_ if ctx.m % 2 else None,
        j_residues={r: v % 2 for r, v in state.j_values.items()},
    )


def loop_check(ctx: ImmersionContext, state0: InvariantState,
               loop: Sequence[StrataEvent]) -> bool:
    """Whether going once around ``loop`` brings every invariant back."""
    return run_script(ctx, state0, loop)[-1] == state0


def event_alphabet(ctx: ImmersionContext) -> List[StrataEvent]:
    """Every distinct event that can occur for ``ctx``."""
    out = [StrataEvent.tangency(k, s) for k in range(2, ctx.m + 1) for s in (1, -1)]
    out += [StrataEvent.multiple_point(s) for s in (1, -1)]
    return out


def shortest_event_path(ctx: ImmersionContext, start: InvariantState,
                        target: InvariantState, max_length: int
                        ) -> Optional[List[StrataEvent]]:
    """Breadth-first search for a shortest event path from ``start`` to
    ``target`` using at most ``max_length`` events; ``None`` if there is none.
    """
    alphabet = event_alphabet(ctx)

    def key(s: InvariantState):
        return (tuple(sorted(s.j_values.items())), s.j_count, s.lambda_, s.l_value)

    seen = {key(start)}
    queue = deque([(start, [])])
    while queue:
        state, path = queue.popleft()
        if state == target:
            return path
        if len(path) >= max_length:
            continue
        for ev in alphabet:
            nxt = apply_event(ctx, state, ev)
            k = key(nxt)
            if k not in seen:
                seen.add(k)
                queue.append((nxt, path + [ev]))
    return None


def count_events(events: Iterable[StrataEvent]) -> Dict[EventKind, int]:
    counts = dict.fromkeys(EventKind, 0)
    for ev in events:
        counts[ev.kind] += 1
    return counts

