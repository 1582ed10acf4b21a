"""Space expressions over the catalog atoms and their evaluators.

Expressions are finite trees with leaves pt, V, G, the trivial cells R^n,
and the free cells G x R^n, combined by product, disjoint union, and the
two suspensions (by a trivially-acted line and by the sign line V).

Two evaluators exist.  The global one produces a full paired invariant but
refuses products: no global Kunneth formula is available, products are
understood only one localization at a time.  The local one evaluates at a
maximal ideal, feeding products through the Kunneth engine and propagating
the ambiguity flag whenever a nonzero Tor term leaves a middle undetermined.
After regrading, suspension by V is just a degree shift on the main branch,
and on the support-G branch it is the identity because the connecting maps
become isomorphisms there (1-t maps to the unit 2).

free_oracle is the independent route for free-shaped products X x G: the
answer is non-equivariant K*(X) doubled, never touching the Kunneth engine.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import catalog
from .kinv import (
    KInvariant,
    kinvariant_direct_sum,
    kinvariant_shift,
    kinvariant_twist,
    kinvariant_zero,
    localize_equivariant,
    localize_kinvariant,
)
from .kunneth import Side, kunneth_local, side_for
from .rep_ring import IdealKind, Mode, PrimeSpot
from .rmod import (
    AbelianGroup,
    GradedZpModule,
    ab_direct_sum,
    graded_direct_sum,
    graded_shift,
    graded_zero,
    zp_from_abelian,
)


class SpaceExpr:
    """Base of the expression AST."""

    __slots__ = ()


@dataclass(frozen=True)
class Atom(SpaceExpr):
    name: str

    def __post_init__(self) -> None:
        if self.name not in catalog.ATOMS:
            raise ValueError(f"unknown atom {self.name!r}; known: {sorted(catalog.ATOMS)}")


@dataclass(frozen=True)
class Cell(SpaceExpr):
    """An open cell: R^dim with trivial action, or G x R^dim if free."""

    dim: int
    free: bool = False

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise ValueError("cells have dimension >= 1")


@dataclass(frozen=True)
class Product(SpaceExpr):
    left: SpaceExpr
    right: SpaceExpr


@dataclass(frozen=True)
class DisjointUnion(SpaceExpr):
    parts: tuple[SpaceExpr, ...]


@dataclass(frozen=True)
class SuspendR(SpaceExpr):
    inner: SpaceExpr


@dataclass(frozen=True)
class SuspendV(SpaceExpr):
    inner: SpaceExpr


class ProductRequiresLocalization(ValueError):
    """Raised by the global evaluator on product nodes."""


def eval_kinvariant(e: SpaceExpr) -> KInvariant:
    """Global paired invariant of a product-free expression."""
    if isinstance(e, Atom):
        return catalog.ATOMS[e.name].kinvariant
    if isinstance(e, Cell):
        base = catalog.ATOMS["G" if e.free else "pt"].kinvariant
        return kinvariant_shift(base, e.dim)
    if isinstance(e, DisjointUnion):
        out = kinvariant_zero()
        for part in e.parts:
            out = kinvariant_direct_sum(out, eval_kinvariant(part))
        return out
    if isinstance(e, SuspendR):
        return kinvariant_shift(eval_kinvariant(e.inner))
    if isinstance(e, SuspendV):
        return kinvariant_twist(eval_kinvariant(e.inner))
    if isinstance(e, Product):
        raise ProductRequiresLocalization(
            "no global product formula; evaluate at a maximal ideal instead"
        )
    raise TypeError(f"not a space expression: {e!r}")


@dataclass(frozen=True)
class LocalValue:
    """Result of local evaluation: a graded module plus an ambiguity flag
    that is set once any product along the way had a nonzero Tor term."""

    graded: GradedZpModule
    ambiguous: bool = False


def eval_local(
    e: SpaceExpr,
    s: PrimeSpot,
    side: Side | None = None,
    mode: Mode = Mode.QUOTIENT,
) -> LocalValue:
    """Evaluate at a maximal ideal, products via the Kunneth engine.

    On the MAIN branch (ideals (I,p)) leaves contribute their regraded
    paired invariant; on the SUPPORT_G branch (ideals (J,p)) only the
    equivariant part, as that sequence requires.
    """
    if side is None:
        side = side_for(s)
    if side is Side.MAIN and s.kind is not IdealKind.MAXIMAL_I:
        raise ValueError(f"main branch needs an ideal (I,p), got {s}")
    if side is Side.SUPPORT_G and s.kind is not IdealKind.MAXIMAL_J:
        raise ValueError(f"support-G branch needs an ideal (J,p) with p odd, got {s}")

    def localize_leaf(k: KInvariant) -> GradedZpModule:
        if side is Side.MAIN:
            return localize_kinvariant(k, s, mode)
        return localize_equivariant(k, s, mode)

    if isinstance(e, Atom):
        return LocalValue(localize_leaf(catalog.ATOMS[e.name].kinvariant))
    if isinstance(e, Cell):
        base = catalog.ATOMS["G" if e.free else "pt"].kinvariant
        return LocalValue(graded_shift(localize_leaf(base), e.dim))
    if isinstance(e, DisjointUnion):
        total = graded_zero(s.p if s.p is not None else 2)
        ambiguous = False
        for part in e.parts:
            val = eval_local(part, s, side, mode)
            total = graded_direct_sum(total, val.graded)
            ambiguous = ambiguous or val.ambiguous
        return LocalValue(total, ambiguous)
    if isinstance(e, SuspendR):
        val = eval_local(e.inner, s, side, mode)
        return LocalValue(graded_shift(val.graded, 1), val.ambiguous)
    if isinstance(e, SuspendV):
        val = eval_local(e.inner, s, side, mode)
        if side is Side.MAIN:
            # Regraded, twisting swaps the two degrees.
            return LocalValue(graded_shift(val.graded, 1), val.ambiguous)
        # At support-G primes the connecting maps are isomorphisms, so the
        # twist changes nothing.
        return val
    if isinstance(e, Product):
        lv = eval_local(e.left, s, side, mode)
        rv = eval_local(e.right, s, side, mode)
        res = kunneth_local(lv.graded, rv.graded, s)
        return LocalValue(res.middle, lv.ambiguous or rv.ambiguous or res.ambiguous)
    raise TypeError(f"not a space expression: {e!r}")


def nonequivariant_k(e: SpaceExpr) -> tuple[AbelianGroup, AbelianGroup]:
    """Non-equivariant K*(X) of a product-free expression, from the catalog
    middles (degree 0, degree 1)."""
    if isinstance(e, Atom):
        entry = catalog.ATOMS[e.name]
        return entry.k_group(0), entry.k_group(1)
    if isinstance(e, Cell):
        entry = catalog.ATOMS["G" if e.free else "pt"]
        k0, k1 = entry.k_group(0), entry.k_group(1)
        return (k0, k1) if e.dim % 2 == 0 else (k1, k0)
    if isinstance(e, DisjointUnion):
        k0, k1 = AbelianGroup(0), AbelianGroup(0)
        for part in e.parts:
            p0, p1 = nonequivariant_k(part)
            k0, k1 = ab_direct_sum(k0, p0), ab_direct_sum(k1, p1)
        return k0, k1
    if isinstance(e, (SuspendR, SuspendV)):
        # Non-equivariantly V is just a line, so either suspension shifts.
        k0, k1 = nonequivariant_k(e.inner)
        return k1, k0
    if isinstance(e, Product):
        raise ProductRequiresLocalization("non-equivariant catalog data is product-free")
    raise TypeError(f"not a space expression: {e!r}")


def free_oracle(e: SpaceExpr, s: PrimeSpot) -> GradedZpModule:
    """Independent evaluation of a free-shaped product X x G at (I,p), p odd.

    Multiplying by the free orbit turns equivariant K-theory into the
    non-equivariant K-theory of the other factor, and the twisted part
    picks up one degree shift; regraded, the answer is K*(X) localized and
    doubled, with K^0 copies in even degree and K^1 copies in odd degree.
    The Kunneth engine is never consulted.
    """
    if s.kind is not IdealKind.MAXIMAL_I or s.p == 2:
        raise ValueError(f"free oracle runs at (I,p) with p odd, got {s}")
    if not isinstance(e, Product):
        raise ValueError("free oracle expects a product with the free orbit G")
    x, g = e.left, e.right
    if not (isinstance(g, Atom) and g.name == "G"):
        if isinstance(x, Atom) and x.name == "G":
            x, g = g, x
        else:
            raise ValueError("free oracle expects one factor to be the atom G")
    p = s.p
    assert p is not None
    k0, k1 = nonequivariant_k(x)
    even = zp_from_abelian(k0, p)
    odd = zp_from_abelian(k1, p)
    return GradedZpModule(even=even.direct_sum(even), odd=odd.direct_sum(odd))
