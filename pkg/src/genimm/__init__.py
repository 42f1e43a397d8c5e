"""First-order invariants of generic immersions and the Bernoulli-number
constraints on their range."""
from .numthy import (
    bernoulli_modern,
    bernoulli_top,
    factorize,
    imm_group,
    is_l_trivial,
    l_divisor,
    l_range,
    mu,
)
from .calculus import (
    ImmersionContext,
    InvariantState,
    StrataEvent,
    Target,
    apply_event,
    connected_sum,
    residues,
    run_script,
)

__version__ = "0.1.0"
