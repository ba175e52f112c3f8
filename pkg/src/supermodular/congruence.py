"""Theta-subgroup machinery and congruence-level decisions.

The index-3 subgroup of SL(2,Z) generated by s = [[0,-1],[1,0]] and t^2 is
characterized by ac = bd = 0 mod 2.  For even n its mod-n quotient is closed
as a Cayley table, and kernel containment for a projective representation is
decided by lifting the quotient's spanning tree into the finite image group
and checking every Cayley edge for consistency: the edges all commute exactly
when the generator assignment factors through the quotient, i.e. when the
principal congruence subgroup of level n lies in the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .groups import DEFAULT_CAP, Exceeded, FiniteGroupTable, ModNCarrier, close, sl2_order
from .modular_data import HatData, ModularData


class CapExceededError(RuntimeError):
    """The image closure exceeded its cap; the group may be infinite."""

    def __init__(self, cap: int, found: int):
        super().__init__(f"group closure exceeded cap {cap} (found at least {found} elements)")
        self.cap = cap
        self.found = found


@dataclass(frozen=True)
class Sl2zMat:
    """Integer 2x2 matrix of determinant 1."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(f"determinant must be 1: {self}")

    def __matmul__(self, other: "Sl2zMat") -> "Sl2zMat":
        return Sl2zMat(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Sl2zMat":
        return Sl2zMat(self.d, -self.b, -self.c, self.a)

    def mod(self, n: int) -> tuple[int, int, int, int]:
        return (self.a % n, self.b % n, self.c % n, self.d % n)

    @staticmethod
    def identity() -> "Sl2zMat":
        return Sl2zMat(1, 0, 0, 1)


S_MAT = Sl2zMat(0, -1, 1, 0)
T_MAT = Sl2zMat(1, 1, 0, 1)
T2_MAT = T_MAT @ T_MAT


def in_gamma_theta(g: Sl2zMat) -> bool:
    """Membership in the theta subgroup: ac and bd both even."""
    return (g.a * g.c) % 2 == 0 and (g.b * g.d) % 2 == 0


def theta_to_gamma0(g: Sl2zMat) -> Sl2zMat:
    """Conjugation isomorphism onto the level-2 Hecke subgroup.

    g -> M g M^-1 with M = [[1,1],[0,2]], written out as
    [[a+c, (d+b-a-c)/2], [2c, d-c]]; the halved entry is integral exactly on
    the theta subgroup.
    """
    if (g.d + g.b - g.a - g.c) % 2 != 0:
        raise ValueError(f"{g} is not in the theta subgroup (parity failure)")
    return Sl2zMat(g.a + g.c, (g.d + g.b - g.a - g.c) // 2, 2 * g.c, g.d - g.c)


def gamma_theta_mod_n(n: int, cap: int = DEFAULT_CAP) -> FiniteGroupTable:
    """Mod-n image of the theta subgroup, closed from s and t^2.

    Requires even n (odd principal congruence subgroups do not sit inside the
    theta subgroup); the order is |SL(2,Z/n)| / 3.
    """
    if n < 2 or n % 2:
        raise ValueError(f"gamma_theta_mod_n requires even n >= 2, got {n}")
    carrier = ModNCarrier(n)
    table = close([S_MAT.mod(n), T2_MAT.mod(n)], cap=cap, carrier=carrier)
    if isinstance(table, Exceeded):
        raise CapExceededError(table.cap, table.found)
    return table


def _sl2_quotient(n: int, cap: int = DEFAULT_CAP) -> FiniteGroupTable:
    carrier = ModNCarrier(n)
    table = close([S_MAT.mod(n), T_MAT.mod(n)], cap=cap, carrier=carrier)
    if isinstance(table, Exceeded):
        raise CapExceededError(table.cap, table.found)
    return table


@dataclass(frozen=True)
class LemmaReport:
    """Order split of the mod-n theta quotient as a 2-part times SL(2,Z/q)."""

    n: int
    k: int
    q: int
    order: int
    two_part: int
    sl2_q_order: int
    mod_2k_image: int
    mod_q_image: int

    @property
    def ok(self) -> bool:
        return (
            self.order * 3 == sl2_order(self.n)
            and self.order == self.two_part * self.sl2_q_order
            and self.mod_2k_image == self.two_part
            and self.mod_q_image == self.sl2_q_order
        )

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "q": self.q,
            "order": self.order,
            "two_part": self.two_part,
            "sl2_q_order": self.sl2_q_order,
            "mod_2k_image": self.mod_2k_image,
            "mod_q_image": self.mod_q_image,
            "ok": self.ok,
        }


def verify_lemma_index3(n: int, cap: int = DEFAULT_CAP) -> LemmaReport:
    """Check |theta mod n| = 2-part(|SL(2,Z/2^k)|) * |SL(2,Z/q)| for n = 2^k q."""
    if n < 2 or n % 2:
        raise ValueError(f"verify_lemma_index3 requires even n, got {n}")
    k = (n & -n).bit_length() - 1
    q = n >> k
    table = gamma_theta_mod_n(n, cap=cap)
    two = sl2_order(2**k)
    odd = two
    while odd % 2 == 0:
        odd //= 2
    two_part = two // odd
    pk = 2**k
    mod_2k = {(e[0] % pk, e[1] % pk, e[2] % pk, e[3] % pk) for e in table.elems}
    if q == 1:
        mod_q = {(0, 0, 0, 0)}
    else:
        mod_q = {(e[0] % q, e[1] % q, e[2] % q, e[3] % q) for e in table.elems}
    return LemmaReport(
        n=n,
        k=k,
        q=q,
        order=table.order,
        two_part=two_part,
        sl2_q_order=sl2_order(q),
        mod_2k_image=len(mod_2k),
        mod_q_image=len(mod_q),
    )


def hat_projective_image(hat: HatData, cap: int = DEFAULT_CAP) -> FiniteGroupTable:
    """Projective closure of the pair (s_hat, t_hat^2)."""
    table = close([hat.s_hat, hat.t2_matrix()], cap=cap, projective=True)
    if isinstance(table, Exceeded):
        raise CapExceededError(table.cap, table.found)
    return table


def sl2_projective_image(md: ModularData, cap: int = DEFAULT_CAP) -> FiniteGroupTable:
    """Projective closure of the pair (S~, T); S~ and the unitary S agree mod scalars."""
    table = close([md.s_tilde, md.t_matrix()], cap=cap, projective=True)
    if isinstance(table, Exceeded):
        raise CapExceededError(table.cap, table.found)
    return table


def _lift_consistent(image: FiniteGroupTable, quotient: FiniteGroupTable) -> bool:
    """Assign image elements along the quotient's spanning tree, check all edges.

    Generators of `image` and `quotient` must correspond positionally.  Both
    forward and inverse-generator edges are checked (the inverse direction is
    implied by the forward one, but it is cheap).
    """
    rep = np.zeros(quotient.order, dtype=np.int64)
    for i in range(1, quotient.order):
        rep[i] = image.edges[quotient.parent_gen[i]][rep[quotient.parent[i]]]
    image_inv = image.inv_edges()
    quotient_inv = quotient.inv_edges()
    for g in range(len(quotient.generators)):
        if not np.array_equal(image.edges[g][rep], rep[quotient.edges[g]]):
            return False
        if not np.array_equal(image_inv[g][rep], rep[quotient_inv[g]]):
            return False
    return True


def congruence_check(
    hat: HatData, n: int, *, image: FiniteGroupTable | None = None, cap: int = DEFAULT_CAP
) -> bool:
    """True iff the level-n principal congruence subgroup acts trivially.

    Decided entirely on finite tables: the mod-n theta quotient is lifted
    through its spanning tree into the projective image of (s_hat, t_hat^2),
    and the lift must respect every Cayley edge.
    """
    if n < 2 or n % 2:
        raise ValueError(f"congruence_check requires even n, got {n}")
    if image is None:
        image = hat_projective_image(hat, cap=cap)
    return _lift_consistent(image, gamma_theta_mod_n(n, cap=cap))


def congruence_check_sl2(
    md: ModularData, n: int, *, image: FiniteGroupTable | None = None, cap: int = DEFAULT_CAP
) -> bool:
    """Same decision for the full SL(2,Z) data (S~, T) against SL(2,Z/n)."""
    if n < 1:
        raise ValueError(f"congruence_check_sl2 requires n >= 1, got {n}")
    if image is None:
        image = sl2_projective_image(md, cap=cap)
    if n == 1:
        return image.order == 1
    return _lift_consistent(image, _sl2_quotient(n, cap=cap))


@dataclass(frozen=True)
class CongruenceReport:
    """Outcome of an ascending even-level search."""

    representation: str
    tested: tuple[tuple[int, bool], ...]
    minimal_level: int | None
    bound: int
    trivial_image: bool
    monotonic_ok: bool
    image_order: int
    note: str = ""

    def as_dict(self) -> dict:
        return {
            "representation": self.representation,
            "tested": [[n, ok] for n, ok in self.tested],
            "minimal_level": self.minimal_level,
            "bound": self.bound,
            "trivial_image": self.trivial_image,
            "monotonic_ok": self.monotonic_ok,
            "image_order": self.image_order,
            "note": self.note,
        }


def minimal_level(hat: HatData, bound: int, *, cap: int = DEFAULT_CAP) -> CongruenceReport:
    """Smallest even n <= bound whose principal congruence subgroup is killed.

    Tests even levels in ascending order; after the first pass, the doubled
    level (when within the bound) is also tested to witness monotonicity.  A
    trivial image is reported distinctly: its kernel is everything, which is
    level-1 behavior, and every even level passes.
    """
    if bound < 2 or bound % 2:
        raise ValueError(f"minimal_level requires an even bound >= 2, got {bound}")
    image = hat_projective_image(hat, cap=cap)
    name = hat.name or f"hat data (size {hat.size}, conductor {hat.conductor})"
    if image.order == 1:
        tested = ((2, True),)
        return CongruenceReport(
            representation=name,
            tested=tested,
            minimal_level=2,
            bound=bound,
            trivial_image=True,
            monotonic_ok=True,
            image_order=1,
            note="projective image is trivial; the kernel is the whole group (level-1 behavior), "
            "reported at the smallest even level",
        )
    tested: list[tuple[int, bool]] = []
    minimal: int | None = None
    for n in range(2, bound + 1, 2):
        ok = congruence_check(hat, n, image=image, cap=cap)
        tested.append((n, ok))
        if ok:
            minimal = n
            break
    monotonic_ok = True
    note = ""
    if minimal is not None and 2 * minimal <= bound:
        ok2 = congruence_check(hat, 2 * minimal, image=image, cap=cap)
        tested.append((2 * minimal, ok2))
        monotonic_ok = ok2
    if minimal is None:
        note = f"no even level up to {bound} contains the kernel"
    return CongruenceReport(
        representation=name,
        tested=tuple(tested),
        minimal_level=minimal,
        bound=bound,
        trivial_image=False,
        monotonic_ok=monotonic_ok,
        image_order=image.order,
        note=note,
    )
