"""Conservation-law verification: on-solution vanishing, identically zero
(null) divergences, and characteristic-form identities."""
from __future__ import annotations

from typing import Sequence

from .detsys import DiffSystem, reduce_mod_system
from .errors import ArityError
from .expr import Expr, add, is_zero, mul, sub
from .jet import total_divergence
from .varcalc import ConservedCurrent


def is_conservation_law(current: ConservedCurrent, sys: DiffSystem,
                        order_cap: int | None = None) -> bool:
    """Div F vanishes after reduction modulo the system."""
    div = total_divergence(current.f, current.ctx.p)
    return is_zero(reduce_mod_system(div, sys, order_cap))


def is_null_divergence(current: ConservedCurrent) -> bool:
    """Div F vanishes identically, with no system reduction."""
    return is_zero(total_divergence(current.f, current.ctx.p))


def verify_characteristic_form(current: ConservedCurrent,
                               q: Sequence[Expr],
                               sys: DiffSystem) -> bool:
    """Div F = sum_v Q_v (lead_v - rhs_v) as an identity on all of jet space."""
    if len(q) != len(sys.equations):
        raise ArityError(
            f"characteristic has {len(q)} entries for {len(sys.equations)} equations"
        )
    rhs = add(*(mul(qv, r) for qv, r in zip(q, sys.residuals())))
    return is_zero(sub(total_divergence(current.f, current.ctx.p), rhs))
