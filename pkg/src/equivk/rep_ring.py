"""The representation ring R = Z[t]/(t^2 - 1) of the order-2 group and its
prime spectrum.

R has exactly two minimal primes, I = (t-1) (the augmentation ideal) and
J = (t+1), and its maximal ideals are (I,p) and (J,p) for p a rational
prime, with the single collision (J,2) = (I,2) because (t-1) + 2 = t+1.
Primes through I have Segal support {1}; primes through J with p odd have
support G.  Localizing R at a maximal ideal (I,p) or (J,p) with p odd gives
the discrete valuation ring Z_(p), with t mapping to +1 or -1 respectively;
localizing at a minimal prime gives the rationals.  The point (I,2) is
special: the honest local ring there still contains the zero divisors 1-t
and 1+t, so it is not a DVR, and downstream code treats it separately.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum


@functools.lru_cache(maxsize=None)
def is_prime(p: int) -> bool:
    from sympy import isprime  # deferred: sympy import is heavy

    return bool(isprime(p))


@dataclass(frozen=True)
class RingElem:
    """Element a + b*t with t^2 = 1."""

    a: int
    b: int

    def __add__(self, other: "RingElem") -> "RingElem":
        return RingElem(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "RingElem") -> "RingElem":
        return RingElem(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "RingElem":
        return RingElem(-self.a, -self.b)

    def __mul__(self, other: "RingElem") -> "RingElem":
        # (a + bt)(c + dt) = (ac + bd) + (ad + bc)t
        return RingElem(
            self.a * other.a + self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def conjugate(self) -> "RingElem":
        """Image under the ring automorphism t -> -t."""
        return RingElem(self.a, -self.b)

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        tpart = "t" if self.b == 1 else ("-t" if self.b == -1 else f"{self.b}t")
        if self.a == 0:
            return tpart
        sign = "+" if self.b > 0 else "-"
        babs = abs(self.b)
        tstr = "t" if babs == 1 else f"{babs}t"
        return f"{self.a} {sign} {tstr}"


ZERO = RingElem(0, 0)
ONE = RingElem(1, 0)
T = RingElem(0, 1)
ONE_MINUS_T = RingElem(1, -1)
ONE_PLUS_T = RingElem(1, 1)


class IdealKind(Enum):
    MINIMAL_I = "I"
    MINIMAL_J = "J"
    MAXIMAL_I = "(I,p)"
    MAXIMAL_J = "(J,p)"


class Support(Enum):
    TRIVIAL = "{1}"
    WHOLE_GROUP = "G"


@dataclass(frozen=True)
class PrimeSpot:
    """A point of Spec R: a minimal prime I or J, or a maximal ideal (I,p)
    or (J,p).  (J,2) is normalized to (I,2) at construction."""

    kind: IdealKind
    p: int | None = None

    def __post_init__(self) -> None:
        if self.kind in (IdealKind.MINIMAL_I, IdealKind.MINIMAL_J):
            if self.p is not None:
                raise ValueError("minimal primes carry no rational prime")
            return
        if self.p is None:
            raise ValueError("maximal ideals need a rational prime p")
        if not (2 <= self.p < 2**64):
            raise ValueError(f"p out of supported range: {self.p}")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.kind is IdealKind.MAXIMAL_J and self.p == 2:
            object.__setattr__(self, "kind", IdealKind.MAXIMAL_I)

    @property
    def is_maximal(self) -> bool:
        return self.kind in (IdealKind.MAXIMAL_I, IdealKind.MAXIMAL_J)

    @property
    def support(self) -> Support:
        if self.kind in (IdealKind.MINIMAL_I, IdealKind.MAXIMAL_I):
            return Support.TRIVIAL
        return Support.WHOLE_GROUP

    @property
    def t_image(self) -> int:
        """Sign epsilon with t - epsilon in the ideal: +1 on the I side, -1
        on the J side."""
        return 1 if self.kind in (IdealKind.MINIMAL_I, IdealKind.MAXIMAL_I) else -1

    def conjugate(self) -> "PrimeSpot":
        """Image under t -> -t; swaps the I and J sides, fixes (I,2)."""
        swap = {
            IdealKind.MINIMAL_I: IdealKind.MINIMAL_J,
            IdealKind.MINIMAL_J: IdealKind.MINIMAL_I,
            IdealKind.MAXIMAL_I: IdealKind.MAXIMAL_J,
            IdealKind.MAXIMAL_J: IdealKind.MAXIMAL_I,
        }
        return PrimeSpot(swap[self.kind], self.p)

    def __str__(self) -> str:
        if self.kind is IdealKind.MINIMAL_I:
            return "I"
        if self.kind is IdealKind.MINIMAL_J:
            return "J"
        letter = "I" if self.kind is IdealKind.MAXIMAL_I else "J"
        return f"({letter},{self.p})"


def minimal_i() -> PrimeSpot:
    return PrimeSpot(IdealKind.MINIMAL_I)


def minimal_j() -> PrimeSpot:
    return PrimeSpot(IdealKind.MINIMAL_J)


def maximal(letter: str, p: int) -> PrimeSpot:
    if letter == "I":
        return PrimeSpot(IdealKind.MAXIMAL_I, p)
    if letter == "J":
        return PrimeSpot(IdealKind.MAXIMAL_J, p)
    raise ValueError(f"unknown ideal letter {letter!r}")


def classify_ideal(name: str | tuple) -> PrimeSpot:
    """Parse a symbolic ideal name: "I", "J", "I,3", "(J,5)", or ("J", 5).

    The result carries the normalized kind ((J,2) collapses to (I,2)) and
    the Segal support.
    """
    if isinstance(name, tuple):
        if len(name) != 2:
            raise ValueError(f"expected (letter, p), got {name}")
        return maximal(str(name[0]), int(name[1]))
    text = name.strip().strip("()").replace(" ", "")
    if text == "I":
        return minimal_i()
    if text == "J":
        return minimal_j()
    if "," in text:
        letter, _, ptext = text.partition(",")
        try:
            p = int(ptext)
        except ValueError:
            raise ValueError(f"bad prime in ideal name {name!r}") from None
        return maximal(letter, p)
    raise ValueError(f"cannot parse ideal name {name!r}")


class TargetKind(Enum):
    RATIONALS = "Q"
    Z_LOCAL = "Z_(p)"
    SPECIAL_2 = "Z_(2)[t]/(t^2-1)"


@dataclass(frozen=True)
class LocalizationTarget:
    """What R becomes at a point of Spec R."""

    kind: TargetKind
    p: int | None = None
    t_image: int | None = None

    def describe(self) -> str:
        if self.kind is TargetKind.RATIONALS:
            return "Q"
        if self.kind is TargetKind.Z_LOCAL:
            return f"Z_({self.p}) with t -> {self.t_image:+d}"
        return "Z_(2)[t]/(t^2-1), not a discrete valuation ring"


def localization_target(s: PrimeSpot) -> LocalizationTarget:
    """Localization of R at the spot.

    Minimal primes give the rationals; (I,p) and (J,p) with p odd give
    Z_(p) via t -> +1 and t -> -1; at (I,2) both 1-t and 1+t lie in the
    ideal while their product is 0, so the local ring keeps zero divisors
    and no DVR description exists.
    """
    if not s.is_maximal:
        return LocalizationTarget(TargetKind.RATIONALS)
    if s.p == 2:
        return LocalizationTarget(TargetKind.SPECIAL_2, p=2)
    return LocalizationTarget(TargetKind.Z_LOCAL, p=s.p, t_image=s.t_image)


class Mode(Enum):
    """Localization convention for modules at maximal ideals.

    QUOTIENT imposes t = +1 or t = -1 first (kills 1 -+ t) and then inverts
    primes other than p.  GENUINE localizes the underlying abelian group at
    p and keeps the involution; for odd p the two agree, at (I,2) they can
    differ, which is exactly the special behaviour of that point.
    """

    QUOTIENT = "quotient"
    GENUINE = "genuine"


def spec_r_listing(max_p: int = 7) -> list[dict]:
    """Machine-readable description of Spec R up to rational prime max_p."""
    out = [
        {"ideal": "I", "kind": "minimal", "support": Support.TRIVIAL.value, "contains": []},
        {"ideal": "J", "kind": "minimal", "support": Support.WHOLE_GROUP.value, "contains": []},
    ]
    primes = [p for p in range(2, max_p + 1) if is_prime(p)]
    for p in primes:
        spot = maximal("I", p)
        over = ["I", "J"] if p == 2 else ["I"]
        out.append(
            {
                "ideal": str(spot),
                "kind": "maximal",
                "support": spot.support.value,
                "contains": over,
            }
        )
    for p in primes:
        if p == 2:
            continue
        spot = maximal("J", p)
        out.append(
            {
                "ideal": str(spot),
                "kind": "maximal",
                "support": spot.support.value,
                "contains": ["J"],
            }
        )
    return out


def spec_r_text(max_p: int = 7) -> str:
    """Text picture of Spec R: maximal ideals bracketed by Segal support."""
    primes = [p for p in range(2, max_p + 1) if is_prime(p)]
    odd = [p for p in primes if p != 2]
    left = " ".join(f"(I,{p})" for p in reversed(odd))
    right = " ".join(f"(J,{p})" for p in odd)
    lines = [
        "Spec R,  R = Z[t]/(t^2-1),  I = (t-1),  J = (t+1)",
        "",
        f"support {{1}}: {left} (I,2)=(J,2)".strip(),
        f"support  G : {right}",
        "",
        "minimal primes: I below every (I,p); J below (I,2)=(J,2) and every (J,p), p odd",
    ]
    return "\n".join(lines)
