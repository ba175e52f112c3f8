"""Exact S/T data for the SU(2) level families and their even-label halves.

The unnormalized Hopf-link matrix S~ (S~[0][0] = 1) and the diagonal twist
matrix T are held over the smallest cyclotomic field containing every entry:
conductor 16(m+1) for the full rank-(4m+3) data, 8(m+1) for the (m+1) x (m+1)
hat data of the even-label subfamily.  Sines are realized as differences of
roots of unity divided by 2i, so every value is exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cyclotomic import CycNumber, gauss_alpha, root_of_unity
from .exactmat import CycMatrix


@dataclass(frozen=True)
class ModularData:
    """Numerical skeleton of a (pre)modular category.

    Labels are 0..rank-1 with an explicit duality involution; label 0 is the
    unit.  s_tilde is unnormalized (s_tilde[0][0] = 1) and t_diag holds the
    twists theta_i, each a root of unity.
    """

    rank: int
    duality: tuple[int, ...]
    s_tilde: CycMatrix
    t_diag: tuple[CycNumber, ...]
    conductor: int

    def __post_init__(self):
        if self.s_tilde.size != self.rank or len(self.t_diag) != self.rank:
            raise ValueError("rank does not match matrix dimensions")
        if sorted(self.duality) != list(range(self.rank)):
            raise ValueError("duality must be a permutation of the labels")

    def dim(self, i: int) -> CycNumber:
        return self.s_tilde.entry(0, i)

    def dims(self) -> list[CycNumber]:
        return [self.dim(i) for i in range(self.rank)]

    def t_matrix(self) -> CycMatrix:
        return CycMatrix.diagonal(self.conductor, [t.embed(self.conductor) for t in self.t_diag])

    def charge_matrix(self) -> CycMatrix:
        one = CycNumber.one(self.conductor)
        zero = CycNumber.zero(self.conductor)
        return CycMatrix.from_entries(
            self.conductor,
            [[one if self.duality[i] == j else zero for j in range(self.rank)] for i in range(self.rank)],
        )

    def global_dim_squared(self) -> CycNumber:
        total = CycNumber.zero(self.conductor)
        for d in self.dims():
            total = total + d * d
        return total

    def gauss_sum_plus(self) -> CycNumber:
        total = CycNumber.zero(self.conductor)
        for i in range(self.rank):
            d = self.dim(i)
            total = total + d * d * self.t_diag[i].embed(self.conductor)
        return total

    def t_order(self) -> int:
        order = 1
        for t in self.t_diag:
            order = math.lcm(order, _root_order(t))
        return order

    def restrict(self, labels: list[int]) -> "ModularData":
        """Pre-modular restriction to a sublist of labels (unit must stay first)."""
        pos = {lab: k for k, lab in enumerate(labels)}
        for lab in labels:
            if self.duality[lab] not in pos:
                raise ValueError("label set is not closed under duality")
        return ModularData(
            rank=len(labels),
            duality=tuple(pos[self.duality[lab]] for lab in labels),
            s_tilde=self.s_tilde.submatrix(labels, labels),
            t_diag=tuple(self.t_diag[lab] for lab in labels),
            conductor=self.conductor,
        )

    def to_json_dict(self) -> dict:
        return {
            "rank": self.rank,
            "duality": list(self.duality),
            "conductor": self.conductor,
            "s_tilde": [[self.s_tilde.entry(i, j).to_json_dict() for j in range(self.rank)] for i in range(self.rank)],
            "t_diag": [t.to_json_dict() for t in self.t_diag],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "ModularData":
        conductor = int(data["conductor"])
        entries = [[CycNumber.from_json_dict(e) for e in row] for row in data["s_tilde"]]
        return ModularData(
            rank=int(data["rank"]),
            duality=tuple(int(x) for x in data["duality"]),
            s_tilde=CycMatrix.from_entries(conductor, entries),
            t_diag=tuple(CycNumber.from_json_dict(e) for e in data["t_diag"]),
            conductor=conductor,
        )


@dataclass(frozen=True)
class HatData:
    """Unitary hat matrices of the even-label subfamily (or a generic import).

    When is_normalized is False, s_hat is the raw unnormalized block and
    d_squared carries the ambient global dimension, with unitarity holding in
    the scaled form s_hat * conj(s_hat)^T = (d_squared/4) * I.
    """

    size: int
    s_hat: CycMatrix
    t_hat: tuple[CycNumber, ...]
    conductor: int
    is_normalized: bool = True
    d_squared: CycNumber | None = None
    name: str = ""

    def t_matrix(self) -> CycMatrix:
        return CycMatrix.diagonal(self.conductor, [t.embed(self.conductor) for t in self.t_hat])

    def t2_matrix(self) -> CycMatrix:
        return CycMatrix.diagonal(self.conductor, [(t * t).embed(self.conductor) for t in self.t_hat])

    def to_json_dict(self) -> dict:
        return {
            "size": self.size,
            "conductor": self.conductor,
            "is_normalized": self.is_normalized,
            "d_squared": self.d_squared.to_json_dict() if self.d_squared is not None else None,
            "name": self.name,
            "s_hat": [[self.s_hat.entry(i, j).to_json_dict() for j in range(self.size)] for i in range(self.size)],
            "t_hat": [t.to_json_dict() for t in self.t_hat],
        }

    @staticmethod
    def from_json_dict(data: dict) -> "HatData":
        conductor = int(data["conductor"])
        entries = [[CycNumber.from_json_dict(e) for e in row] for row in data["s_hat"]]
        d2 = data.get("d_squared")
        return HatData(
            size=int(data["size"]),
            s_hat=CycMatrix.from_entries(conductor, entries),
            t_hat=tuple(CycNumber.from_json_dict(e) for e in data["t_hat"]),
            conductor=conductor,
            is_normalized=bool(data.get("is_normalized", True)),
            d_squared=CycNumber.from_json_dict(d2) if d2 else None,
            name=str(data.get("name", "")),
        )


def _root_order(t: CycNumber) -> int:
    """Multiplicative order; raises if the element is not a root of unity."""
    acc = t
    for k in range(1, 4 * t.conductor + 1):
        if acc == CycNumber.one(t.conductor):
            return k
        acc = acc * t
    raise ValueError("entry is not a root of unity")


def su2_modular_data(m: int) -> ModularData:
    """Rank 4m+3 S~/T data of the level-(4m+2) SU(2) family, conductor 16(m+1).

    S~[i][j] = sin((i+1)(j+1)pi/(4m+4)) / sin(pi/(4m+4)) and
    T[j][j] = exp(pi*i*(j^2+2j)/(8m+8)); every label is self-dual.
    """
    if m < 1:
        raise ValueError(f"su2_modular_data requires m >= 1, got {m}")
    c = 16 * (m + 1)
    rank = 4 * m + 3

    def sin_num(k: int) -> CycNumber:
        return root_of_unity(c, 2 * k) - root_of_unity(c, -2 * k)

    inv_sin1 = sin_num(1).invert()
    entries = [[sin_num((i + 1) * (j + 1)) * inv_sin1 for j in range(rank)] for i in range(rank)]
    return ModularData(
        rank=rank,
        duality=tuple(range(rank)),
        s_tilde=CycMatrix.from_entries(c, entries),
        t_diag=tuple(root_of_unity(c, j * j + 2 * j) for j in range(rank)),
        conductor=c,
    )


def psu2_hat_data(m: int) -> HatData:
    """(m+1) x (m+1) unitary hat data of the even-label subfamily, conductor 8m+8.

    s_hat[i][j] = alpha * (w^((2i+1)(2j+1)) - w^(-(2i+1)(2j+1))) / (2 w^(2m+2))
    with alpha the exact positive square root of 2/(m+1), and
    t_hat[j] = w^(2(j^2+j)).  m = 0 yields the trivial [1]/[1] data.
    """
    if m < 0:
        raise ValueError(f"psu2_hat_data requires m >= 0, got {m}")
    n = 8 * m + 8
    alpha = gauss_alpha(m)
    inv_2wm = (CycNumber.from_rational(2, n) * root_of_unity(n, 2 * (m + 1))).invert()

    def s_entry(i: int, j: int) -> CycNumber:
        e = (2 * i + 1) * (2 * j + 1)
        return alpha * (root_of_unity(n, e) - root_of_unity(n, -e)) * inv_2wm

    s_hat = CycMatrix.from_entries(n, [[s_entry(i, j) for j in range(m + 1)] for i in range(m + 1)])
    return HatData(
        size=m + 1,
        s_hat=s_hat,
        t_hat=tuple(root_of_unity(n, 2 * (j * j + j)) for j in range(m + 1)),
        conductor=n,
        name=f"PSU(2)_{4 * m + 2} hat data (m={m})",
    )


def su2_s_normalizer(m: int) -> CycNumber:
    """The exact scalar 2/D for the level-(4m+2) data, D^2 = dim.

    2/D = alpha * sin(pi/(4m+4)) with alpha = sqrt(2/(m+1)), expressed at
    conductor 16(m+1).
    """
    c = 16 * (m + 1)
    sin1 = (root_of_unity(c, 2) - root_of_unity(c, -2)) * (
        CycNumber.from_rational(2, c) * root_of_unity(c, c // 4)
    ).invert()
    return gauss_alpha(m).embed(c) * sin1


@dataclass(frozen=True)
class AxiomReport:
    """Outcome of the unnormalized modular relations.

    Checks S~^2 = D^2*C, (S~T)^3 = D_plus*S~^2 and TC = CT, with
    D^2 = sum d_i^2 and D_plus = sum d_i^2 theta_i, entirely inside the field
    (no square roots required).
    """

    s_squared_ok: bool
    st_cubed_ok: bool
    tc_ok: bool
    d_squared: CycNumber
    d_plus: CycNumber

    @property
    def all_ok(self) -> bool:
        return self.s_squared_ok and self.st_cubed_ok and self.tc_ok

    def as_dict(self) -> dict:
        return {
            "s_squared_ok": self.s_squared_ok,
            "st_cubed_ok": self.st_cubed_ok,
            "tc_ok": self.tc_ok,
            "all_ok": self.all_ok,
            "d_squared": self.d_squared.to_json_dict(),
            "d_plus": self.d_plus.to_json_dict(),
            "d_squared_approx": abs(self.d_squared.approx()),
        }


def verify_modular_axioms(md: ModularData) -> AxiomReport:
    if md.s_tilde.size != len(md.t_diag):
        raise ValueError("S and T dimensions do not match")
    s = md.s_tilde
    t = md.t_matrix()
    c = md.charge_matrix()
    d2 = md.global_dim_squared()
    d_plus = md.gauss_sum_plus()
    s2 = s @ s
    st = s @ t
    return AxiomReport(
        s_squared_ok=s2 == c.scale(d2),
        st_cubed_ok=st @ st @ st == s2.scale(d_plus),
        tc_ok=t @ c == c @ t,
        d_squared=d2,
        d_plus=d_plus,
    )


def transparent_objects(md: ModularData) -> tuple[int, ...]:
    """Labels X with S~[X][Y] = d_X * d_Y for every Y."""
    dims = md.dims()
    out = []
    for x in range(md.rank):
        if all(md.s_tilde.entry(x, y) == dims[x] * dims[y] for y in range(md.rank)):
            out.append(x)
    return tuple(out)


def find_fermions(md: ModularData) -> tuple[int, ...]:
    """Labels psi with d_psi = 1, theta_psi = -1 and involutive tensor action.

    On nondegenerate data the action is recovered from S~ row matching and the
    candidate is kept only if it squares to the identity and sends psi to the
    unit.  On degenerate (restricted) data row matching is unavailable and the
    dimension/twist test alone decides.
    """
    one = CycNumber.one(md.conductor)
    minus_one = CycNumber.from_rational(-1, md.conductor)
    out = []
    for psi in range(md.rank):
        if md.dim(psi) != one or md.t_diag[psi].embed(md.conductor) != minus_one:
            continue
        from .spin import psi_action

        try:
            action = psi_action(md, psi)
        except ValueError:
            out.append(psi)  # degenerate S~: keep the dimension/twist candidate
            continue
        if action[psi] == 0 and all(action[action[a]] == a for a in range(md.rank)):
            out.append(psi)
    return tuple(out)
