"""Catalog of Z/2-spaces with known paired invariants.

The three atoms are the one-point space, the sign representation line V,
and the free orbit G; suspension by a trivial line produces the cells
R^n and G x R^n from them.  Each entry carries the paired invariant, the
six-term hexagon data against non-equivariant K-theory, and a freeness
flag.  Everything is exact and small:

* pt:  K^*_G = R in degree 0, K^*_{G,-} = R/J in degree 0; phi embeds
  R/J as the ideal (1-t) of R and psi is the projection.
* V:   same data with the plain and twisted parts exchanged.
* G:   K^*_G = R/I in degree 0 and K^*_{G,-} = R/I in degree 1 (the
  twisted part is the K-theory of the real line), with zero connecting
  maps since 1-t kills R/I.

The verification fixtures additionally include the antipodal circle
(a free space whose quotient is again a circle, with 2-torsion in the
twisted part) and three deliberately broken variants of the point used to
exercise the validators.
"""

from __future__ import annotations

from dataclasses import dataclass

from .kinv import KInvariant, SixTermData, kinvariant_shift
from .linalg import IntMatrix
from .rmod import (
    AbelianGroup,
    FgRModule,
    PresentedAb,
    ab_normal_form,
    r_mod_i,
    r_mod_j,
    regular_module,
)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    sixterm: SixTermData
    free: bool

    @property
    def kinvariant(self) -> KInvariant:
        return self.sixterm.kinv

    def k_group(self, degree: int) -> AbelianGroup:
        """Non-equivariant K-theory in the degree, in normal form."""
        return ab_normal_form(self.sixterm.k[degree])


def _m(rows: list[list[int]], shape: tuple[int, int]) -> IntMatrix:
    out = IntMatrix.from_rows(rows, cols=shape[1]) if rows else IntMatrix.zeros(*shape)
    if (out.rows, out.cols) != shape:
        raise ValueError(f"expected shape {shape}, built {(out.rows, out.cols)}")
    return out


def _entry_pt() -> CatalogEntry:
    zero = FgRModule.zero()
    kg = (regular_module(), zero)  # R on generators {1, t}
    kgminus = (r_mod_j(), zero)
    phi0 = _m([[1], [-1]], (2, 1))  # 1 |-> 1 - t
    psi0 = _m([[1, -1]], (1, 2))  # 1 |-> 1, t |-> -1
    kinv = KInvariant(
        kg=kg,
        kgminus=kgminus,
        phi=(phi0, IntMatrix.zeros(0, 0)),
        psi=(psi0, IntMatrix.zeros(0, 0)),
    )
    k0 = PresentedAb.free(1)  # K^0(pt) = Z
    k1 = PresentedAb.free(0)
    sixterm = SixTermData(
        kinv=kinv,
        k=(k0, k1),
        forgetful=(_m([[1, 1]], (1, 2)), IntMatrix.zeros(0, 0)),  # rank map
        boundary=(IntMatrix.zeros(0, 1), IntMatrix.zeros(1, 0)),
    )
    return CatalogEntry("pt", sixterm, free=False)


def _entry_v() -> CatalogEntry:
    zero = FgRModule.zero()
    kg = (r_mod_j(), zero)  # K^0_G(V) = R/J
    kgminus = (regular_module(), zero)  # K^0_{G,-}(V) = R by double twist
    phi0 = _m([[1, -1]], (1, 2))
    psi0 = _m([[1], [-1]], (2, 1))
    kinv = KInvariant(
        kg=kg,
        kgminus=kgminus,
        phi=(phi0, IntMatrix.zeros(0, 0)),
        psi=(psi0, IntMatrix.zeros(0, 0)),
    )
    k0 = PresentedAb.free(0)
    k1 = PresentedAb.free(1)  # K^1 of the line with compact supports
    sixterm = SixTermData(
        kinv=kinv,
        k=(k0, k1),
        forgetful=(IntMatrix.zeros(0, 1), IntMatrix.zeros(1, 0)),
        boundary=(IntMatrix.zeros(0, 0), _m([[1], [1]], (2, 1))),  # 1 |-> 1 + t spans ker phi
    )
    return CatalogEntry("V", sixterm, free=False)


def _entry_g() -> CatalogEntry:
    zero = FgRModule.zero()
    kg = (r_mod_i(), zero)
    kgminus = (zero, r_mod_i())  # twisted part is K^* of a real line
    kinv = KInvariant(
        kg=kg,
        kgminus=kgminus,
        phi=(IntMatrix.zeros(1, 0), IntMatrix.zeros(0, 1)),
        psi=(IntMatrix.zeros(0, 1), IntMatrix.zeros(1, 0)),
    )
    k0 = PresentedAb.free(2)  # two points
    k1 = PresentedAb.free(0)
    sixterm = SixTermData(
        kinv=kinv,
        k=(k0, k1),
        forgetful=(_m([[1], [1]], (2, 1)), IntMatrix.zeros(0, 0)),  # diagonal
        boundary=(_m([[1, -1]], (1, 2)), IntMatrix.zeros(0, 0)),  # difference
    )
    return CatalogEntry("G", sixterm, free=True)


def sixterm_shift(d: SixTermData) -> SixTermData:
    """Suspend the whole hexagon by a trivially-acted real line."""
    return SixTermData(
        kinv=kinvariant_shift(d.kinv),
        k=(d.k[1], d.k[0]),
        forgetful=(d.forgetful[1], d.forgetful[0]),
        boundary=(d.boundary[1], d.boundary[0]),
    )


def _entry_gxr() -> CatalogEntry:
    g = _entry_g()
    return CatalogEntry("GxR", sixterm_shift(g.sixterm), free=True)


def _entry_antipodal_circle() -> CatalogEntry:
    """The circle with the antipodal action: free, quotient again a circle.

    The quotient has K^0 = K^1 = Z with trivial line-bundle action, so both
    equivariant groups are R/I.  The twisted part is the compactly supported
    K-theory of the open Moebius band, i.e. reduced K-theory of its Thom
    space: Z/2 in degree 0 and nothing in degree 1.
    """
    zero = FgRModule.zero()
    z2_trivial_t = FgRModule(1, IntMatrix.from_rows([[2]]), IntMatrix.from_rows([[1]]))
    kinv = KInvariant(
        kg=(r_mod_i(), r_mod_i()),
        kgminus=(z2_trivial_t, zero),
        phi=(_m([[0]], (1, 1)), IntMatrix.zeros(1, 0)),
        psi=(_m([[1]], (1, 1)), IntMatrix.zeros(0, 1)),
    )
    k0 = PresentedAb.free(1)
    k1 = PresentedAb.free(1)
    sixterm = SixTermData(
        kinv=kinv,
        k=(k0, k1),
        # degree 0: pullback along the double cover is the identity on ranks;
        # degree 1: it doubles the fundamental class.
        forgetful=(_m([[1]], (1, 1)), _m([[2]], (1, 1))),
        boundary=(IntMatrix.zeros(0, 1), _m([[1]], (1, 1))),  # mod-2 reduction
    )
    return CatalogEntry("S1_antipodal", sixterm, free=True)


_PT = _entry_pt()
_V = _entry_v()
_G = _entry_g()
_GXR = _entry_gxr()
_S1A = _entry_antipodal_circle()

#: Atoms usable as leaves of space expressions.
ATOMS: dict[str, CatalogEntry] = {"pt": _PT, "V": _V, "G": _G}

#: Everything with six-term data, for the verification suites.
FIXTURES: dict[str, CatalogEntry] = {
    "pt": _PT,
    "V": _V,
    "G": _G,
    "GxR": _GXR,
    "S1_antipodal": _S1A,
}


def mutated_pt_scaled_psi() -> KInvariant:
    """psi doubled: both composites become 2(1-t), breaking the identity."""
    base = _PT.kinvariant
    return KInvariant(
        kg=base.kg,
        kgminus=base.kgminus,
        phi=base.phi,
        psi=(base.psi[0].scale(2), base.psi[1]),
    )


def mutated_pt_broken_t_square() -> KInvariant:
    """t-action on K^0_G replaced by a matrix whose square is 2, not 1."""
    base = _PT.kinvariant
    broken = FgRModule(2, IntMatrix.zeros(2, 0), IntMatrix.from_rows([[0, 1], [2, 0]]))
    return KInvariant(
        kg=(broken, base.kg[1]),
        kgminus=base.kgminus,
        phi=base.phi,
        psi=base.psi,
    )


def mutated_pt_nonlinear_phi() -> KInvariant:
    """phi sending 1 to 1 + t, which does not commute with the t-action."""
    base = _PT.kinvariant
    return KInvariant(
        kg=base.kg,
        kgminus=base.kgminus,
        phi=(IntMatrix.from_rows([[1], [1]]), base.phi[1]),
        psi=base.psi,
    )


def broken_pt_sixterm() -> SixTermData:
    """The point's hexagon with the forgetful map zeroed out: still a
    complex, but exactness fails at the K^0_G spot (and downstream)."""
    base = _PT.sixterm
    return SixTermData(
        kinv=base.kinv,
        k=base.k,
        forgetful=(IntMatrix.zeros(1, 2), base.forgetful[1]),
        boundary=base.boundary,
    )


MUTATED_KINVARIANTS = {
    "pt_scaled_psi": (mutated_pt_scaled_psi, "phi_psi_composite"),
    "pt_broken_t_square": (mutated_pt_broken_t_square, "t_squared"),
    "pt_nonlinear_phi": (mutated_pt_nonlinear_phi, "r_linearity"),
}
