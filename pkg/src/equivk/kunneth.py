"""The two local Kunneth short exact sequences and their diagnostics.

At a maximal ideal of R the K-theory of a product is caught between a
tensor term and a Tor term:

    0 -> A_p (x) B_p -> (K of the product)_p -> Tor_1(A_p, B_p shifted) -> 0

with the Tor term degree-shifted (torsion built from degrees p and q+1
lands in degree p+q).  Which modules feed the sequence depends on the
support of the prime:

* support-G maximal ideals (J,p), p odd: the equivariant part K*_G alone
  suffices and the sequence is known to split, so the middle is determined
  even when Tor is nonzero;
* ideals (I,p): the equivariant part alone is NOT enough (the free orbit G
  already breaks it, see naive_failure_demo), but the regraded paired
  invariant satisfies the same sequence.  Splitting is not asserted, so a
  nonzero Tor term leaves the middle ambiguous up to extension.

The doubling identity (multiplying by the free orbit doubles non-
equivariant K-theory), the vanishing of everything free at support-G
primes, and the p = 2 self-consistency diagnostic live here too.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from . import catalog
from .kinv import (
    KInvariant,
    forgetful_ses,
    localize_equivariant,
    localize_kinvariant,
)
from .linalg import lr_extension_feasible
from .rep_ring import IdealKind, Mode, PrimeSpot, maximal
from .rmod import (
    GradedZpModule,
    ZpModule,
    graded_direct_sum,
    localize,
    tensor_zp,
    tor1_zp,
    zp_from_abelian,
)


class Side(Enum):
    """Which Kunneth branch applies: MAIN at (I,p) with the full regraded
    pair, SUPPORT_G at (J,p) with the equivariant part alone."""

    MAIN = "main"
    SUPPORT_G = "support-g"


def side_for(s: PrimeSpot) -> Side:
    if not s.is_maximal:
        raise ValueError(f"Kunneth sequences live at maximal ideals, got {s}")
    return Side.MAIN if s.kind is IdealKind.MAXIMAL_I else Side.SUPPORT_G


@dataclass(frozen=True)
class Check:
    id: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class KunnethResult:
    prime: PrimeSpot
    tensor: GradedZpModule
    tor: GradedZpModule
    middle: GradedZpModule
    ambiguous: bool
    checks: tuple[Check, ...] = ()

    def __str__(self) -> str:
        flag = " (middle ambiguous up to extension)" if self.ambiguous else ""
        return (
            f"Kunneth at {self.prime}{flag}\n"
            f"  tensor: {self.tensor}\n"
            f"  tor:    {self.tor}\n"
            f"  middle: {self.middle}"
        )


def graded_tensor(x: GradedZpModule, y: GradedZpModule) -> GradedZpModule:
    even = tensor_zp(x.even, y.even).direct_sum(tensor_zp(x.odd, y.odd))
    odd = tensor_zp(x.even, y.odd).direct_sum(tensor_zp(x.odd, y.even))
    return GradedZpModule(even, odd)


def graded_tor_shifted(x: GradedZpModule, y: GradedZpModule) -> GradedZpModule:
    """Tor term of the sequence: Tor_1 of degree p of x with degree q+1 of
    y, placed in degree p+q."""
    even = tor1_zp(x.even, y.odd).direct_sum(tor1_zp(x.odd, y.even))
    odd = tor1_zp(x.even, y.even).direct_sum(tor1_zp(x.odd, y.odd))
    return GradedZpModule(even, odd)


def kunneth_local(x: GradedZpModule, y: GradedZpModule, s: PrimeSpot) -> KunnethResult:
    """Assemble the local Kunneth data for inputs localized at the spot.

    The middle reported is the split representative tensor + tor; at (I,p)
    with nonzero Tor it is flagged ambiguous, while at support-G primes the
    sequence splits and the middle is the honest answer.
    """
    side = side_for(s)
    if x.p != s.p or y.p != s.p:
        raise ValueError(
            f"inputs are localized at p={x.p},{y.p} but the spot is {s}"
        )
    tensor = graded_tensor(x, y)
    tor = graded_tor_shifted(x, y)
    middle = graded_direct_sum(tensor, tor)
    ambiguous = (side is Side.MAIN) and not tor.is_zero()
    checks = [
        Check(
            "rank_additivity",
            middle.total_rank() == tensor.total_rank() + tor.total_rank(),
        ),
        Check(
            "length_additivity",
            middle.total_length() == tensor.total_length() + tor.total_length(),
        ),
    ]
    for deg, m_part, t_part, r_part in (
        ("even", middle.even, tensor.even, tor.even),
        ("odd", middle.odd, tensor.odd, tor.odd),
    ):
        checks.append(
            Check(
                f"split_middle_feasible_{deg}",
                m_part.rank == t_part.rank + r_part.rank
                and lr_extension_feasible(m_part.torsion, t_part.torsion, r_part.torsion),
            )
        )
    return KunnethResult(
        prime=s,
        tensor=tensor,
        tor=tor,
        middle=middle,
        ambiguous=ambiguous,
        checks=tuple(checks),
    )


# ---------------------------------------------------------------------------
# Doubling: product with the free orbit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DoublingReport:
    prime: PrimeSpot
    product_rank: int
    product_length: int
    k_rank: int
    k_length: int

    @property
    def passed(self) -> bool:
        return (
            self.product_rank == 2 * self.k_rank
            and self.product_length == 2 * self.k_length
        )

    def __str__(self) -> str:
        verdict = "ok" if self.passed else "MISMATCH"
        return (
            f"doubling at {self.prime}: product rank {self.product_rank} / length "
            f"{self.product_length} vs 2 x K* rank {self.k_rank} / length "
            f"{self.k_length}: {verdict}"
        )


def doubling_check(x: KInvariant, s: PrimeSpot, mode: Mode = Mode.QUOTIENT) -> DoublingReport:
    """Rank and length of the localized K-theory of X x G must be twice
    those of the non-equivariant K*(X).

    K*(X) itself is pinned between the cokernel and kernel of phi, and rank
    and length are additive over that extension, so the comparison needs no
    choice of middle.
    """
    if s.kind is not IdealKind.MAXIMAL_I or s.p == 2:
        raise ValueError(f"doubling check runs at (I,p) with p odd, got {s}")
    p = s.p
    assert p is not None
    x_loc = localize_kinvariant(x, s, mode)
    g_loc = localize_kinvariant(catalog.ATOMS["G"].kinvariant, s, mode)
    product = kunneth_local(x_loc, g_loc, s).middle
    fd0, fd1 = forgetful_ses(x)
    k_rank = fd0.middle_rank + fd1.middle_rank
    k_length = fd0.middle_length(p) + fd1.middle_length(p)
    return DoublingReport(
        prime=s,
        product_rank=product.total_rank(),
        product_length=product.total_length(),
        k_rank=k_rank,
        k_length=k_length,
    )


# ---------------------------------------------------------------------------
# Failure of the equivariant-only sequence at (I,p)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NaiveFailureReport:
    """The free orbit squared, computed three ways at (I,p)."""

    prime: PrimeSpot
    naive_rank: int
    true_rank: int
    full_middle: GradedZpModule
    direct_middle: GradedZpModule

    @property
    def mismatch_detected(self) -> bool:
        return self.naive_rank != self.true_rank

    @property
    def resolved_by_pair(self) -> bool:
        return self.full_middle == self.direct_middle

    def __str__(self) -> str:
        return (
            f"equivariant-only Kunneth at {self.prime} for G x G predicts rank "
            f"{self.naive_rank}, actual localized K^0_G(G x G) has rank "
            f"{self.true_rank}; paired invariant gives {self.full_middle} matching "
            f"direct evaluation: {self.resolved_by_pair}"
        )


def naive_failure_demo(s: PrimeSpot, mode: Mode = Mode.QUOTIENT) -> NaiveFailureReport:
    """Show that feeding only K*_G into the sequence fails at (I,p) for
    X = Y = G, and that the full paired invariant repairs it.

    K*_G(G x Y) is the non-equivariant K*(Y); for Y = G that is Z^2 in
    degree 0, while the equivariant part of the free orbit localizes to a
    single free rank, so the naive tensor predicts rank 1 against the true
    rank 2.
    """
    if s.kind is not IdealKind.MAXIMAL_I or s.p == 2:
        raise ValueError(f"the demonstration runs at (I,p) with p odd, got {s}")
    p = s.p
    assert p is not None
    g = catalog.ATOMS["G"]
    g_equivariant = localize_equivariant(g.kinvariant, s, mode)
    naive = kunneth_local(g_equivariant, g_equivariant, s)
    true_k0 = zp_from_abelian(g.k_group(0), p)  # K^0_G(G x G) = K^0(G)
    g_pair = localize_kinvariant(g.kinvariant, s, mode)
    full = kunneth_local(g_pair, g_pair, s)
    # Direct evaluation: the pair of G x G regraded is K*(G) doubled.
    k0 = zp_from_abelian(g.k_group(0), p)
    k1 = zp_from_abelian(g.k_group(1), p)
    direct = GradedZpModule(even=k0.direct_sum(k0), odd=k1.direct_sum(k1))
    return NaiveFailureReport(
        prime=s,
        naive_rank=naive.middle.total_rank(),
        true_rank=true_k0.rank,
        full_middle=full.middle,
        direct_middle=direct,
    )


# ---------------------------------------------------------------------------
# Vanishing of free spaces at support-G primes
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VanishingReport:
    prime: PrimeSpot
    free: bool
    components: tuple[tuple[str, ZpModule], ...]

    @property
    def all_zero(self) -> bool:
        return all(m.is_zero() for _, m in self.components)

    @property
    def passed(self) -> bool:
        return self.free and self.all_zero

    def __str__(self) -> str:
        if not self.free:
            return f"input not tagged free; localizations at {self.prime} not asserted zero"
        rows = ", ".join(f"{n}={m}" for n, m in self.components)
        return f"free input at {self.prime}: {rows} -> {'all zero' if self.all_zero else 'NONZERO'}"


def support_g_vanishing(
    x: KInvariant, free: bool, s: PrimeSpot, mode: Mode = Mode.QUOTIENT
) -> VanishingReport:
    """Every invariant built from a free space dies at support-G primes:
    1-t acts nilpotently there while t = -1 makes it invertible.

    Non-free inputs are reported as rejected (their localizations are shown
    but nothing is asserted about them).
    """
    if s.kind is not IdealKind.MAXIMAL_J:
        raise ValueError(f"support-G vanishing concerns ideals (J,p), p odd; got {s}")
    comps = []
    for d in (0, 1):
        comps.append((f"kG[{d}]", localize(x.kg[d], s, mode)))
        comps.append((f"kGminus[{d}]", localize(x.kgminus[d], s, mode)))
    return VanishingReport(prime=s, free=free, components=tuple(comps))


# ---------------------------------------------------------------------------
# The p = 2 diagnostic
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class P2DiagnosticReport:
    """Self-product of the point at (I,2) under the quotient convention.

    The product of the point with itself is the point, so a sound sequence
    must reproduce the point's own localized pair.  Under the quotient
    convention at p = 2 it does not (the twisted part of the point
    contributes spurious 2-torsion), which is exactly the documented
    breakdown of the convention at (I,2).  The expected outcome of this
    diagnostic is therefore the MISMATCH.
    """

    engine: KunnethResult
    direct: GradedZpModule

    @property
    def consistent(self) -> bool:
        return self.engine.middle == self.direct

    @property
    def expected_inconsistency_observed(self) -> bool:
        return not self.consistent

    def __str__(self) -> str:
        status = (
            "engine agrees with direct evaluation (unexpected!)"
            if self.consistent
            else "engine disagrees with direct evaluation, as documented"
        )
        return (
            f"pt x pt at (I,2), quotient convention:\n"
            f"  engine middle: {self.engine.middle}\n"
            f"  direct:        {self.direct}\n"
            f"  {status}"
        )


def p2_quotient_diagnostic() -> P2DiagnosticReport:
    s = maximal("I", 2)
    pt = catalog.ATOMS["pt"].kinvariant
    pt_loc = localize_kinvariant(pt, s, Mode.QUOTIENT)
    engine = kunneth_local(pt_loc, pt_loc, s)
    return P2DiagnosticReport(engine=engine, direct=pt_loc)
