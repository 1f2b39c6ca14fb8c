"""Invariants of group actions: infinitesimal invariance, differential
invariants, derived higher-order invariants, characteristic ODE systems."""
from __future__ import annotations

from .errors import DegenerateDenominator, OrderError
from .expr import Expr, div, is_zero, jet_order
from .jet import VectorField, apply_prolonged, prolong, total_derivative


def invariance_defect(v: VectorField, f: Expr) -> Expr:
    """v(f) for an order-0 function; zero iff f is invariant under the flow."""
    if jet_order(f) > 0:
        raise OrderError("invariance_defect expects an expression of jet order 0")
    return v.apply0(f)


def differential_invariant_check(v: VectorField, n: int, eta: Expr) -> bool:
    """True iff the prolonged action of v annihilates eta."""
    return is_zero(apply_prolonged(prolong(v, n), eta))


def next_invariant(eta: Expr, zeta: Expr) -> Expr:
    """D_x zeta / D_x eta; raises the order of an invariant pair by one.

    Single independent variable only: with eta and zeta both invariant, the
    quotient is again a differential invariant.
    """
    d_eta = total_derivative(eta, 1)
    if is_zero(d_eta):
        raise DegenerateDenominator("derivative of the base invariant vanishes")
    return div(total_derivative(zeta, 1), d_eta)


def characteristic_system(v: VectorField) -> str:
    """The ODE system dx^i/dt = xi^i, du^a/dt = phi_a, one equation per line."""
    from .parse import format_expr

    ctx = v.ctx
    lines = []
    for i, name in enumerate(ctx.indep):
        lines.append(f"d{name}/dt = {format_expr(v.xi[i], ctx)}")
    for a, name in enumerate(ctx.dep):
        lines.append(f"d{name}/dt = {format_expr(v.phi[a], ctx)}")
    return "\n".join(lines)
