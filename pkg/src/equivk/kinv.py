"""The paired K-theory invariant of a Z/2-space and its consistency checks.

The invariant bundles the equivariant K-theory K*_G and its sign-twisted
companion K*_{G,-} (both Z/2-graded R-modules) with degree-preserving maps
phi: K*_{G,-} -> K*_G and psi: K*_G -> K*_{G,-} whose composites, in either
order, are multiplication by 1-t.  On top of that sit:

* the six-term exact hexagon linking the pair to non-equivariant K-theory
  through forgetful and boundary maps,
* the short exact sequence 0 -> coker phi -> K*(X) -> ker phi -> 0 that
  pins the non-equivariant K-theory down to an extension problem,
* localization at maximal ideals of R, after which phi and psi vanish at
  every (I,p) with p odd and the pair collapses to a single Z/2-graded
  Z_(p)-module (twisted parts regraded into the opposite degree),
* the unique-divisibility predicate for q-divisible K-groups, and
* the constructor for invariants of free Z/2-spaces, where t acts by
  multiplication with the class of the associated line bundle and 1-t is
  forced to act nilpotently.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import IntMatrix, lattice_contains_matrix, lr_extension_feasible
from .rep_ring import IdealKind, Mode, PrimeSpot
from .rmod import (
    AbelianGroup,
    FgRModule,
    GradedZpModule,
    NotAComplexError,
    NotDvrModule,
    PresentedAb,
    RModuleMap,
    Violation,
    ZpModule,
    ab_homology,
    ab_map_well_defined,
    ab_normal_form,
    localize,
    localized_map_is_zero,
    validate_map,
    validate_module,
)


@dataclass(frozen=True)
class KInvariant:
    """Paired invariant: (K^0_G, K^1_G), (K^0_{G,-}, K^1_{G,-}), and the
    degree-preserving connecting maps phi (twisted -> plain) and psi."""

    kg: tuple[FgRModule, FgRModule]
    kgminus: tuple[FgRModule, FgRModule]
    phi: tuple[IntMatrix, IntMatrix]
    psi: tuple[IntMatrix, IntMatrix]

    def __post_init__(self) -> None:
        for d in (0, 1):
            if (
                self.phi[d].rows != self.kg[d].gens
                or self.phi[d].cols != self.kgminus[d].gens
            ):
                raise ValueError(f"phi[{d}] shape does not match its modules")
            if (
                self.psi[d].rows != self.kgminus[d].gens
                or self.psi[d].cols != self.kg[d].gens
            ):
                raise ValueError(f"psi[{d}] shape does not match its modules")

    def phi_map(self, d: int) -> RModuleMap:
        return RModuleMap(self.kgminus[d], self.kg[d], self.phi[d])

    def psi_map(self, d: int) -> RModuleMap:
        return RModuleMap(self.kg[d], self.kgminus[d], self.psi[d])


def kinvariant_direct_sum(a: KInvariant, b: KInvariant) -> KInvariant:
    return KInvariant(
        kg=(a.kg[0].direct_sum(b.kg[0]), a.kg[1].direct_sum(b.kg[1])),
        kgminus=(a.kgminus[0].direct_sum(b.kgminus[0]), a.kgminus[1].direct_sum(b.kgminus[1])),
        phi=(a.phi[0].block_diag(b.phi[0]), a.phi[1].block_diag(b.phi[1])),
        psi=(a.psi[0].block_diag(b.psi[0]), a.psi[1].block_diag(b.psi[1])),
    )


def kinvariant_shift(k: KInvariant, by: int = 1) -> KInvariant:
    """Suspension by a trivially-acted real line: swap the two degrees."""
    if by % 2 == 0:
        return k
    return KInvariant(
        kg=(k.kg[1], k.kg[0]),
        kgminus=(k.kgminus[1], k.kgminus[0]),
        phi=(k.phi[1], k.phi[0]),
        psi=(k.psi[1], k.psi[0]),
    )


def kinvariant_twist(k: KInvariant) -> KInvariant:
    """Suspension by the sign line V: exchanges the plain and twisted parts
    (twisting twice is complex Bott periodicity, hence the identity)."""
    return KInvariant(kg=k.kgminus, kgminus=k.kg, phi=k.psi, psi=k.phi)


def kinvariant_zero() -> KInvariant:
    z = FgRModule.zero()
    m = IntMatrix.zeros(0, 0)
    return KInvariant(kg=(z, z), kgminus=(z, z), phi=(m, m), psi=(m, m))


def validate_kinvariant(k: KInvariant) -> list[Violation]:
    """All structural invariants of the pair: the four modules are honest
    R-modules, the four maps are well-defined and R-linear, and both
    composites equal multiplication by 1-t degreewise."""
    out: list[Violation] = []
    for d in (0, 1):
        for name, mod in ((f"kG[{d}]", k.kg[d]), (f"kGminus[{d}]", k.kgminus[d])):
            out += [Violation(v.code, name, v.detail) for v in validate_module(mod)]
    for d in (0, 1):
        out += validate_map(k.phi_map(d), where=f"phi[{d}]")
        out += validate_map(k.psi_map(d), where=f"psi[{d}]")
    for d in (0, 1):
        comp = k.phi[d] @ k.psi[d] - k.kg[d].one_minus_t_matrix()
        if not lattice_contains_matrix(k.kg[d].rels, comp):
            out.append(
                Violation(
                    "phi_psi_composite",
                    f"degree {d}",
                    "phi o psi is not multiplication by 1-t on K_G",
                )
            )
        comp = k.psi[d] @ k.phi[d] - k.kgminus[d].one_minus_t_matrix()
        if not lattice_contains_matrix(k.kgminus[d].rels, comp):
            out.append(
                Violation(
                    "psi_phi_composite",
                    f"degree {d}",
                    "psi o phi is not multiplication by 1-t on K_{G,-}",
                )
            )
    return out


class GenuineLocalizationError(ValueError):
    """Genuine localization hit a non-DVR module at (I,2)."""

    def __init__(self, report: NotDvrModule, where: str):
        super().__init__(f"{where}: {report}")
        self.report = report
        self.where = where


def _localize_checked(m: FgRModule, s: PrimeSpot, mode: Mode, where: str) -> ZpModule:
    res = localize(m, s, mode)
    if isinstance(res, NotDvrModule):
        raise GenuineLocalizationError(res, where)
    return res


def localize_kinvariant(k: KInvariant, s: PrimeSpot, mode: Mode = Mode.QUOTIENT) -> GradedZpModule:
    """Localize the pair at (I,p) and regrade it as one Z/2-graded module.

    The connecting maps vanish there (for p = 2 the quotient convention
    forces them to zero), so no information is dropped by keeping only the
    modules: even degree is K^0_G + K^1_{G,-}, odd degree is
    K^0_{G,-} + K^1_G.
    """
    if s.kind is not IdealKind.MAXIMAL_I:
        raise ValueError(
            f"the regraded localization lives at ideals (I,p); got {s}"
            " (support-G primes use the equivariant part alone)"
        )
    kg0 = _localize_checked(k.kg[0], s, mode, "kG[0]")
    kg1 = _localize_checked(k.kg[1], s, mode, "kG[1]")
    km0 = _localize_checked(k.kgminus[0], s, mode, "kGminus[0]")
    km1 = _localize_checked(k.kgminus[1], s, mode, "kGminus[1]")
    return GradedZpModule(even=kg0.direct_sum(km1), odd=km0.direct_sum(kg1))


def localize_equivariant(k: KInvariant, s: PrimeSpot, mode: Mode = Mode.QUOTIENT) -> GradedZpModule:
    """Localize the equivariant part K*_G alone, graded by its own degree.
    This is the input shape for the support-G Kunneth sequence."""
    if not s.is_maximal:
        raise ValueError(f"need a maximal ideal, got {s}")
    kg0 = _localize_checked(k.kg[0], s, mode, "kG[0]")
    kg1 = _localize_checked(k.kg[1], s, mode, "kG[1]")
    return GradedZpModule(even=kg0, odd=kg1)


def connecting_maps_localized_zero(
    k: KInvariant, s: PrimeSpot, mode: Mode = Mode.QUOTIENT
) -> list[Violation]:
    """Check that phi and psi localize to the zero map at the spot; returns
    the offending maps (empty list = all vanish)."""
    out = []
    for d in (0, 1):
        if not localized_map_is_zero(k.phi_map(d), s, mode):
            out.append(Violation("localized_phi_nonzero", f"phi[{d}] at {s}"))
        if not localized_map_is_zero(k.psi_map(d), s, mode):
            out.append(Violation("localized_psi_nonzero", f"psi[{d}] at {s}"))
    return out


# ---------------------------------------------------------------------------
# The six-term hexagon
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SixTermData:
    """The hexagon
        K^1 -> K^0_{G,-} -> K^0_G -> K^0 -> K^1_{G,-} -> K^1_G -> K^1
    with forgetful maps K^d_G -> K^d and boundary maps K^d -> K^{d+1}_{G,-};
    the non-equivariant groups are plain presented abelian groups."""

    kinv: KInvariant
    k: tuple[PresentedAb, PresentedAb]
    forgetful: tuple[IntMatrix, IntMatrix]
    boundary: tuple[IntMatrix, IntMatrix]

    def __post_init__(self) -> None:
        for d in (0, 1):
            if (
                self.forgetful[d].rows != self.k[d].gens
                or self.forgetful[d].cols != self.kinv.kg[d].gens
            ):
                raise ValueError(f"forgetful[{d}] shape mismatch")
            if (
                self.boundary[d].rows != self.kinv.kgminus[1 - d].gens
                or self.boundary[d].cols != self.k[d].gens
            ):
                raise ValueError(f"boundary[{d}] shape mismatch")


@dataclass(frozen=True)
class SixTermReport:
    """Homology at the six spots; all zero certifies exactness."""

    spots: tuple[tuple[str, AbelianGroup], ...]

    @property
    def exact(self) -> bool:
        return all(h.is_zero() for _, h in self.spots)

    def failed_spots(self) -> list[str]:
        return [name for name, h in self.spots if not h.is_zero()]

    def __str__(self) -> str:
        rows = [f"  {name}: {h}" for name, h in self.spots]
        verdict = "exact" if self.exact else f"NOT exact at {', '.join(self.failed_spots())}"
        return "\n".join(rows + [f"  => {verdict}"])


def six_term_verify(d: SixTermData) -> SixTermReport:
    """Verify the hexagon is a complex and compute homology at all six spots.

    Raises NotAComplexError if consecutive maps fail to compose to zero, or
    ValueError if a map does not send relations into relations.
    """
    kg = [m.underlying() for m in d.kinv.kg]
    km = [m.underlying() for m in d.kinv.kgminus]
    k = list(d.k)
    phi = d.kinv.phi
    f = d.forgetful
    b = d.boundary

    # The cycle as (name, source, matrix, target) in composition order.
    arrows = [
        ("boundary[1]", k[1], b[1], km[0]),
        ("phi[0]", km[0], phi[0], kg[0]),
        ("forgetful[0]", kg[0], f[0], k[0]),
        ("boundary[0]", k[0], b[0], km[1]),
        ("phi[1]", km[1], phi[1], kg[1]),
        ("forgetful[1]", kg[1], f[1], k[1]),
    ]
    for name, src, mat, tgt in arrows:
        if not ab_map_well_defined(mat, src, tgt):
            raise ValueError(f"{name} does not define a map of groups")
    for (n1, _, m1, mid), (n2, _, m2, tgt) in zip(arrows, arrows[1:] + arrows[:1]):
        if not lattice_contains_matrix(tgt.rels, m2 @ m1):
            raise NotAComplexError(f"{n2} o {n1} is nonzero: not a complex")

    spot_names = ["KGminus^0", "KG^0", "K^0", "KGminus^1", "KG^1", "K^1"]
    spots = []
    for i, name in enumerate(spot_names):
        incoming, mid = arrows[i][2], arrows[i][3]
        _, _, outgoing, tgt = arrows[(i + 1) % 6]
        spots.append((name, ab_homology(incoming, mid, outgoing, tgt)))
    return SixTermReport(spots=tuple(spots))


# ---------------------------------------------------------------------------
# The forgetful short exact sequence
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ForgetfulDegree:
    """End terms of 0 -> coker(phi^d) -> K^d(X) -> ker(phi^{d+1}) -> 0,
    plus the rank/length bounds any middle must satisfy."""

    degree: int
    coker_phi: AbelianGroup
    ker_phi_next: AbelianGroup

    @property
    def middle_rank(self) -> int:
        return self.coker_phi.rank + self.ker_phi_next.rank

    def middle_length(self, p: int) -> int:
        return sum(self.coker_phi.p_partition(p)) + sum(self.ker_phi_next.p_partition(p))

    def middle_feasible(self, candidate: AbelianGroup) -> bool:
        """Can the candidate group sit in the sequence?  Rank must be the sum
        and every p-primary part must be a feasible extension."""
        if candidate.rank != self.middle_rank:
            return False
        primes: set[int] = set()
        for g in (candidate, self.coker_phi, self.ker_phi_next):
            for d in g.orders:
                primes.update(_prime_factors(d))
        for p in primes:
            if not lr_extension_feasible(
                candidate.p_partition(p),
                self.coker_phi.p_partition(p),
                self.ker_phi_next.p_partition(p),
            ):
                return False
        return True


def _prime_factors(n: int) -> set[int]:
    from sympy import factorint  # deferred: sympy import is heavy

    return {int(p) for p in factorint(n)}


def forgetful_ses(k: KInvariant) -> tuple[ForgetfulDegree, ForgetfulDegree]:
    """End terms of the forgetful sequence in both degrees.

    The middle K*(X) is determined only up to extension, so it is never
    computed here; callers check candidates with middle_feasible.
    """
    out = []
    for d in (0, 1):
        # coker(phi^d) presented by the target relations plus the image.
        tgt = k.kg[d]
        coker_pres = PresentedAb(tgt.gens, tgt.rels.hstack(k.phi[d]))
        coker = ab_normal_form(coker_pres)
        # ker(phi^{d+1}) as homology with zero incoming map.
        dn = 1 - d
        ker = ab_homology(
            None,
            k.kgminus[dn].underlying(),
            k.phi[dn],
            k.kg[dn].underlying(),
        )
        out.append(ForgetfulDegree(degree=d, coker_phi=coker, ker_phi_next=ker))
    return out[0], out[1]


# ---------------------------------------------------------------------------
# Unique divisibility
# ---------------------------------------------------------------------------


def uniquely_divisible(g: AbelianGroup, q: int) -> bool:
    """Is multiplication by the prime q a bijection on the group?

    For finitely generated groups this happens exactly when the free rank is
    zero and the torsion order is coprime to q.
    """
    return g.rank == 0 and all(d % q != 0 for d in g.orders)


# ---------------------------------------------------------------------------
# Free-space invariants
# ---------------------------------------------------------------------------


class FreeSpaceDataError(ValueError):
    """Input does not look like the K-theory of a free-space quotient."""


def free_space_module(quotient_k: PresentedAb, line_action: IntMatrix) -> FgRModule:
    """Build the R-module of a free Z/2-space from quotient data.

    The module is K*(X/G) in one degree, with t acting by multiplication
    with the class of the line bundle attached to the double cover.  The
    action must square to the identity modulo relations, and 1-t must act
    nilpotently (with nilpotency index at most the generator count); data
    failing either test is rejected.
    """
    n = quotient_k.gens
    if line_action.rows != n or line_action.cols != n:
        raise FreeSpaceDataError("line bundle action must be square on the generators")
    mod = FgRModule(n, quotient_k.rels, line_action)
    bad = validate_module(mod)
    if bad:
        raise FreeSpaceDataError("; ".join(str(v) for v in bad))
    if n > 0:
        one_minus = mod.one_minus_t_matrix()
        power = one_minus
        for _ in range(n):
            if lattice_contains_matrix(quotient_k.rels, power):
                break
            power = power @ one_minus
        else:
            raise FreeSpaceDataError(
                "1-t does not act nilpotently modulo relations; "
                "not free-space data"
            )
    return mod
