"""Finitely generated modules over R = Z[t]/(t^2-1) and over the localized
rings Z_(p).

An FgRModule is a presentation of the underlying abelian group together with
an integer matrix giving the action of t on generators.  Localization at a
maximal ideal of R produces a module over a discrete valuation ring, which
we keep in normal form only: a free rank plus a partition of p-power
torsion exponents.  Tensor and Tor over Z_(p) are computed on normal forms;
an independent presentation-level route exists in the test suite.

The presented-abelian-group helpers here (normal form, kernels, homology of
two composable maps) are shared by the six-term exactness checker and by
homology_at, and work integrally; p-local answers are obtained by localizing
the integral answer, which is exact.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .linalg import (
    IntMatrix,
    Partition,
    check_partition,
    kernel_basis,
    lattice_contains,
    lattice_contains_matrix,
    snf,
    solve_membership,
)
from .rep_ring import Mode, PrimeSpot

logger = logging.getLogger(__name__)


class NotAComplexError(ValueError):
    """Raised when maps handed to a homology computation do not compose to zero."""


@dataclass(frozen=True)
class Violation:
    """A violated structural invariant, with a stable identifier."""

    code: str
    where: str
    detail: str = ""

    def __str__(self) -> str:
        msg = f"{self.code} at {self.where}"
        return f"{msg}: {self.detail}" if self.detail else msg


# ---------------------------------------------------------------------------
# Presented abelian groups (integral level)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PresentedAb:
    """Z^gens modulo the column lattice of rels."""

    gens: int
    rels: IntMatrix

    def __post_init__(self) -> None:
        if self.rels.rows != self.gens:
            raise ValueError(
                f"relation matrix has {self.rels.rows} rows for {self.gens} generators"
            )

    @staticmethod
    def free(n: int) -> "PresentedAb":
        return PresentedAb(n, IntMatrix.zeros(n, 0))

    @staticmethod
    def cyclic(order: int) -> "PresentedAb":
        return PresentedAb(1, IntMatrix.from_rows([[order]]))


@dataclass(frozen=True)
class AbelianGroup:
    """Normal form of a finitely generated abelian group: free rank plus the
    invariant-factor chain (each > 1, increasing divisibility)."""

    rank: int
    orders: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for d in self.orders:
            if d <= 1:
                raise ValueError(f"invariant factors must exceed 1, got {d}")
        for a, b in zip(self.orders, self.orders[1:]):
            if b % a != 0:
                raise ValueError(f"not a divisibility chain: {self.orders}")

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.orders

    def p_partition(self, p: int) -> Partition:
        """Exponent partition of the p-primary torsion, largest first."""
        exps = sorted((_valuation(d, p) for d in self.orders), reverse=True)
        return tuple(e for e in exps if e > 0)

    def torsion_order(self) -> int:
        out = 1
        for d in self.orders:
            out *= d
        return out

    def __str__(self) -> str:
        parts = ["Z"] * self.rank + [f"Z/{d}" for d in self.orders]
        return " + ".join(parts) if parts else "0"


def _valuation(x: int, p: int) -> int:
    e = 0
    while x % p == 0:
        x //= p
        e += 1
    return e


def ab_normal_form(g: PresentedAb) -> AbelianGroup:
    """Smith-reduce the presentation to rank plus invariant factors."""
    res = snf(g.rels)
    orders = tuple(d for d in res.d if d > 1)
    return AbelianGroup(rank=g.gens - res.rank, orders=orders)


def ab_direct_sum(a: AbelianGroup, b: AbelianGroup) -> AbelianGroup:
    """Direct sum, renormalized to an invariant-factor chain."""
    from sympy import factorint  # deferred: sympy import is heavy

    by_prime: dict[int, list[int]] = {}
    for d in a.orders + b.orders:
        for p, e in factorint(d).items():
            by_prime.setdefault(int(p), []).append(int(e))
    depth = max((len(v) for v in by_prime.values()), default=0)
    chain = []
    for i in range(depth):
        d = 1
        for p, exps in by_prime.items():
            exps_sorted = sorted(exps, reverse=True)
            if i < len(exps_sorted):
                d *= p ** exps_sorted[i]
        chain.append(d)
    # built largest-first; the chain convention is increasing divisibility
    return AbelianGroup(rank=a.rank + b.rank, orders=tuple(reversed(chain)))


def ab_map_well_defined(matrix: IntMatrix, src: PresentedAb, tgt: PresentedAb) -> bool:
    """Does the generator matrix send the source relation lattice into the
    target relation lattice?"""
    if matrix.rows != tgt.gens or matrix.cols != src.gens:
        raise ValueError("map shape does not match presentations")
    return lattice_contains_matrix(tgt.rels, matrix @ src.rels)


def ab_kernel(matrix: IntMatrix, src: PresentedAb, tgt: PresentedAb) -> tuple[IntMatrix, PresentedAb]:
    """Kernel of a map of presented groups.

    Returns (inclusion, presentation): the columns of `inclusion` generate
    the sublattice K = {x : matrix @ x in L_tgt} of Z^src.gens, and
    `presentation` presents K / L_src on those generators.
    """
    block = matrix.hstack(-tgt.rels)
    full = kernel_basis(block)
    incl = IntMatrix.from_cols(
        [full.col(j)[: src.gens] for j in range(full.cols)], rows=src.gens
    )
    rel_cols = []
    for j in range(src.rels.cols):
        c = solve_membership(incl, src.rels.col(j))
        if c is None:
            raise ValueError("source relations do not land in the kernel; map ill-defined")
        rel_cols.append(c)
    pres = PresentedAb(incl.cols, IntMatrix.from_cols(rel_cols, rows=incl.cols))
    return incl, pres


def ab_homology(
    incoming: IntMatrix | None,
    mid: PresentedAb,
    outgoing: IntMatrix | None,
    tgt: PresentedAb | None,
) -> AbelianGroup:
    """ker(outgoing) / im(incoming) at the presented group `mid`.

    `incoming` is a matrix into mid's generators (its source presentation is
    irrelevant to the image); None means the zero map.  `outgoing` of None
    likewise means the map to 0.  The caller is responsible for the complex
    property.
    """
    if outgoing is None:
        ker_gens = IntMatrix.identity(mid.gens)
    else:
        assert tgt is not None
        block = outgoing.hstack(-tgt.rels)
        full = kernel_basis(block)
        ker_gens = IntMatrix.from_cols(
            [full.col(j)[: mid.gens] for j in range(full.cols)], rows=mid.gens
        )
    killers = mid.rels if incoming is None else incoming.hstack(mid.rels)
    rel_cols = []
    for j in range(killers.cols):
        c = solve_membership(ker_gens, killers.col(j))
        if c is None:
            raise NotAComplexError("image or relations fall outside the kernel")
        rel_cols.append(c)
    pres = PresentedAb(ker_gens.cols, IntMatrix.from_cols(rel_cols, rows=ker_gens.cols))
    return ab_normal_form(pres)


# ---------------------------------------------------------------------------
# R-modules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FgRModule:
    """Finitely generated R-module: abelian-group presentation plus the
    integer matrix of the t-action on generators."""

    gens: int
    rels: IntMatrix
    t_action: IntMatrix

    def __post_init__(self) -> None:
        if self.rels.rows != self.gens:
            raise ValueError("relations row count must equal generator count")
        if self.t_action.rows != self.gens or self.t_action.cols != self.gens:
            raise ValueError("t-action must be a square matrix on the generators")

    @staticmethod
    def zero() -> "FgRModule":
        return FgRModule(0, IntMatrix.zeros(0, 0), IntMatrix.zeros(0, 0))

    def underlying(self) -> PresentedAb:
        return PresentedAb(self.gens, self.rels)

    def one_minus_t_matrix(self) -> IntMatrix:
        return IntMatrix.identity(self.gens) - self.t_action

    def direct_sum(self, other: "FgRModule") -> "FgRModule":
        return FgRModule(
            self.gens + other.gens,
            self.rels.block_diag(other.rels),
            self.t_action.block_diag(other.t_action),
        )

    def is_zero_presentation(self) -> bool:
        return self.gens == 0


def regular_module() -> FgRModule:
    """R as a module over itself, on the generators {1, t}."""
    return FgRModule(2, IntMatrix.zeros(2, 0), IntMatrix.from_rows([[0, 1], [1, 0]]))


def r_mod_i() -> FgRModule:
    """R/I = Z with t acting trivially."""
    return FgRModule(1, IntMatrix.zeros(1, 0), IntMatrix.from_rows([[1]]))


def r_mod_j() -> FgRModule:
    """R/J = Z with t acting by -1."""
    return FgRModule(1, IntMatrix.zeros(1, 0), IntMatrix.from_rows([[-1]]))


def validate_module(m: FgRModule) -> list[Violation]:
    """Check that t^2 = 1 holds modulo relations and that the t-action
    preserves the relation lattice."""
    out = []
    t2 = m.t_action @ m.t_action
    diff = t2 - IntMatrix.identity(m.gens)
    if not lattice_contains_matrix(m.rels, diff):
        out.append(
            Violation("t_squared", "t_action", "t^2 is not the identity modulo relations")
        )
    if not lattice_contains_matrix(m.rels, m.t_action @ m.rels):
        out.append(
            Violation("t_preserves_relations", "t_action", "t does not map relations into relations")
        )
    return out


@dataclass(frozen=True)
class RModuleMap:
    """R-linear map between FgRModules, given on generators."""

    source: FgRModule
    target: FgRModule
    matrix: IntMatrix

    def __post_init__(self) -> None:
        if self.matrix.rows != self.target.gens or self.matrix.cols != self.source.gens:
            raise ValueError("map matrix shape does not match source/target generators")


def validate_map(f: RModuleMap, where: str = "map") -> list[Violation]:
    out = []
    if not lattice_contains_matrix(f.target.rels, f.matrix @ f.source.rels):
        out.append(Violation("well_defined", where, "relations are not sent into relations"))
    comm = f.matrix @ f.source.t_action - f.target.t_action @ f.matrix
    if not lattice_contains_matrix(f.target.rels, comm):
        out.append(Violation("r_linearity", where, "map does not commute with the t-action"))
    return out


# ---------------------------------------------------------------------------
# Modules over the localized rings Z_(p)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZpModule:
    """Normal form of a finitely generated Z_(p)-module: free rank plus the
    exponent partition of its p-power torsion."""

    p: int
    rank: int
    torsion: Partition = ()

    def __post_init__(self) -> None:
        if self.p < 2:
            raise ValueError("p must be at least 2")
        if self.rank < 0:
            raise ValueError("rank must be nonnegative")
        object.__setattr__(self, "torsion", check_partition(self.torsion) if self.torsion else ())

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def length(self) -> int:
        """Length of the torsion part over Z_(p), i.e. the exponent sum."""
        return sum(self.torsion)

    def direct_sum(self, other: "ZpModule") -> "ZpModule":
        if self.p != other.p:
            raise ValueError(f"mixed primes {self.p} and {other.p}")
        merged = tuple(sorted(self.torsion + other.torsion, reverse=True))
        return ZpModule(self.p, self.rank + other.rank, merged)

    def __str__(self) -> str:
        parts = [f"Z_({self.p})^{self.rank}"] if self.rank else []
        parts += [f"Z/{self.p}^{k}" if k > 1 else f"Z/{self.p}" for k in self.torsion]
        return " + ".join(parts) if parts else "0"


def zp_zero(p: int) -> ZpModule:
    return ZpModule(p, 0, ())


def zp_from_abelian(g: AbelianGroup, p: int, context: str = "") -> ZpModule:
    """Localize a normal-form abelian group at p, discarding invisible torsion."""
    part = g.p_partition(p)
    discarded = [d for d in g.orders if _valuation(d, p) == 0]
    if discarded and logger.isEnabledFor(logging.DEBUG):
        logger.debug(
            "localization at p=%d discards torsion of orders %s%s",
            p,
            discarded,
            f" ({context})" if context else "",
        )
    return ZpModule(p, g.rank, part)


@dataclass(frozen=True)
class GradedZpModule:
    """Z/2-graded Z_(p)-module."""

    even: ZpModule
    odd: ZpModule

    def __post_init__(self) -> None:
        if self.even.p != self.odd.p:
            raise ValueError("graded components must share the same prime")

    @property
    def p(self) -> int:
        return self.even.p

    def is_zero(self) -> bool:
        return self.even.is_zero() and self.odd.is_zero()

    def total_rank(self) -> int:
        return self.even.rank + self.odd.rank

    def total_length(self) -> int:
        return self.even.length() + self.odd.length()

    def __str__(self) -> str:
        return f"even: {self.even}; odd: {self.odd}"


def graded_zero(p: int) -> GradedZpModule:
    return GradedZpModule(zp_zero(p), zp_zero(p))


def graded_direct_sum(a: GradedZpModule, b: GradedZpModule) -> GradedZpModule:
    return GradedZpModule(a.even.direct_sum(b.even), a.odd.direct_sum(b.odd))


def graded_shift(m: GradedZpModule, by: int) -> GradedZpModule:
    """Degree shift; Bott periodicity makes degree arithmetic mod 2."""
    return m if by % 2 == 0 else GradedZpModule(m.odd, m.even)


@dataclass(frozen=True)
class NotDvrModule:
    """Structured report for a genuine localization at (I,2) whose retained
    involution is not +-1, so no DVR normal form exists."""

    p: int
    rank: int
    torsion: Partition
    detail: str

    def __str__(self) -> str:
        return (
            f"not a DVR module at p={self.p}: underlying group "
            f"Z_(2)^{self.rank} + torsion {list(self.torsion)}; {self.detail}"
        )


# ---------------------------------------------------------------------------
# Localization of R-modules
# ---------------------------------------------------------------------------


def _require_maximal(s: PrimeSpot) -> None:
    if not s.is_maximal:
        raise ValueError(f"localization of modules needs a maximal ideal, got {s}")


def _quotient_lattice(m: FgRModule, eps: int) -> IntMatrix:
    """Relation lattice after imposing t = eps."""
    eps_id = IntMatrix.identity(m.gens).scale(eps)
    return m.rels.hstack(m.t_action - eps_id)


def localize(
    m: FgRModule, s: PrimeSpot, mode: Mode = Mode.QUOTIENT
) -> ZpModule | NotDvrModule:
    """Localize an R-module at a maximal ideal of R.

    QUOTIENT mode imposes t = +1 (on the I side) or t = -1 (on the J side)
    by adjoining relation columns and then keeps only p-power torsion plus
    free rank.  GENUINE mode localizes the underlying group at p keeping the
    involution: for odd p it extracts the matching eigenmodule (and provably
    agrees with QUOTIENT); at (I,2) it returns the 2-local group if t acts
    as +-1 there and a NotDvrModule report otherwise.
    """
    _require_maximal(s)
    p = s.p
    assert p is not None
    eps = s.t_image
    if mode is Mode.QUOTIENT:
        nf = ab_normal_form(PresentedAb(m.gens, _quotient_lattice(m, eps)))
        return zp_from_abelian(nf, p, context=f"quotient mode at {s}")
    if p != 2:
        # Eigenmodule route: kernel of (t - eps) on the p-local group.
        shifted = m.t_action - IntMatrix.identity(m.gens).scale(eps)
        _, pres = ab_kernel(shifted, m.underlying(), m.underlying())
        nf = ab_normal_form(pres)
        return zp_from_abelian(nf, p, context=f"genuine mode at {s}")
    # Genuine localization at (I,2): only odd integers get inverted, so the
    # 2-local group keeps its involution.
    nf = ab_normal_form(m.underlying())
    part = nf.p_partition(2)
    for sign, name in ((1, "+1"), (-1, "-1")):
        diff = m.t_action - IntMatrix.identity(m.gens).scale(sign)
        if lattice_contains_matrix(m.rels, diff, p=2):
            logger.debug("genuine localization at (I,2): t acts as %s", name)
            return ZpModule(2, nf.rank, part)
    return NotDvrModule(
        p=2,
        rank=nf.rank,
        torsion=part,
        detail="the involution is not +-identity on the 2-local module",
    )


def rank_at_minimal(m: FgRModule, s: PrimeSpot) -> int:
    """Dimension over Q of the localization at a minimal prime of R."""
    if s.is_maximal:
        raise ValueError("rank_at_minimal expects a minimal prime")
    eps = s.t_image
    block = _quotient_lattice(m, eps)
    return m.gens - snf(block).rank


def localized_map_is_zero(f: RModuleMap, s: PrimeSpot, mode: Mode = Mode.QUOTIENT) -> bool:
    """Does the map vanish after localizing source and target at the spot?

    A map of presented modules is zero exactly when every generator image
    lies in the localized relation lattice of the target.
    """
    _require_maximal(s)
    p = s.p
    assert p is not None
    if mode is Mode.GENUINE and p == 2:
        lattice = f.target.rels
    else:
        lattice = _quotient_lattice(f.target, s.t_image)
    return lattice_contains_matrix(lattice, f.matrix, p=p)


# ---------------------------------------------------------------------------
# Tensor and Tor over Z_(p)
# ---------------------------------------------------------------------------


def _require_same_p(a: ZpModule, b: ZpModule) -> int:
    if a.p != b.p:
        raise ValueError(f"mixed primes {a.p} and {b.p}")
    return a.p


def tensor_zp(a: ZpModule, b: ZpModule) -> ZpModule:
    """Tensor product over Z_(p) in normal form.

    Free x free contributes rank*rank; free x torsion copies the torsion;
    Z/p^i (x) Z/p^j = Z/p^min(i,j).
    """
    p = _require_same_p(a, b)
    torsion = []
    torsion += list(b.torsion) * a.rank
    torsion += list(a.torsion) * b.rank
    torsion += [min(i, j) for i in a.torsion for j in b.torsion]
    return ZpModule(p, a.rank * b.rank, tuple(sorted(torsion, reverse=True)))


def tor1_zp(a: ZpModule, b: ZpModule) -> ZpModule:
    """First torsion product over Z_(p): free parts drop out and
    Tor_1(Z/p^i, Z/p^j) = Z/p^min(i,j)."""
    p = _require_same_p(a, b)
    torsion = [min(i, j) for i in a.torsion for j in b.torsion]
    return ZpModule(p, 0, tuple(sorted(torsion, reverse=True)))


# ---------------------------------------------------------------------------
# Homology of maps between normal-form Z_(p)-modules
# ---------------------------------------------------------------------------


def zp_presentation(m: ZpModule) -> PresentedAb:
    """Integral presentation of a normal-form module: free generators first,
    then one generator per torsion factor with relation p^k."""
    n = m.rank + len(m.torsion)
    cols = []
    for i, k in enumerate(m.torsion):
        col = [0] * n
        col[m.rank + i] = m.p**k
        cols.append(col)
    return PresentedAb(n, IntMatrix.from_cols(cols, rows=n))


@dataclass(frozen=True)
class ZpMap:
    """Map of normal-form Z_(p)-modules, as an integer matrix on the
    presentation generators (free coordinates first, then torsion)."""

    source: ZpModule
    target: ZpModule
    matrix: IntMatrix

    def __post_init__(self) -> None:
        _require_same_p(self.source, self.target)
        ns = self.source.rank + len(self.source.torsion)
        nt = self.target.rank + len(self.target.torsion)
        if self.matrix.rows != nt or self.matrix.cols != ns:
            raise ValueError("matrix shape does not match module presentations")

    @staticmethod
    def zero(source: ZpModule, target: ZpModule) -> "ZpMap":
        ns = source.rank + len(source.torsion)
        nt = target.rank + len(target.torsion)
        return ZpMap(source, target, IntMatrix.zeros(nt, ns))


def zp_map_well_defined(f: ZpMap) -> bool:
    src = zp_presentation(f.source)
    tgt = zp_presentation(f.target)
    return lattice_contains_matrix(tgt.rels, f.matrix @ src.rels)


def homology_at(f: ZpMap, g: ZpMap) -> ZpModule:
    """ker(g)/im(f) in normal form, for composable maps with g o f = 0.

    A zero result certifies exactness at the middle module.  Raises
    NotAComplexError when the composite is nonzero modulo relations and
    ValueError when either matrix fails to define a map.
    """
    if f.target != g.source:
        raise ValueError("maps are not composable: f.target != g.source")
    p = _require_same_p(f.source, g.target)
    if not zp_map_well_defined(f):
        raise ValueError("incoming matrix does not define a map of modules")
    if not zp_map_well_defined(g):
        raise ValueError("outgoing matrix does not define a map of modules")
    mid = zp_presentation(f.target)
    tgt = zp_presentation(g.target)
    composite = g.matrix @ f.matrix
    if not lattice_contains_matrix(tgt.rels, composite):
        raise NotAComplexError("g o f is nonzero modulo relations")
    nf = ab_homology(f.matrix, mid, g.matrix, tgt)
    return zp_from_abelian(nf, p, context="homology")
