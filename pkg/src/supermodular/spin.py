"""Fermionic grading and block decomposition of modular S/T data.

Given modular data with a chosen fermion psi, this module computes the sign
grading, the tensoring-by-psi permutation, the five-part label partition, the
sum/difference basis change, and extracts the hat data carried by the
even sector.

Basis vectors use unnormalized coefficients (1, +-1) so everything stays in
the field; the block identities below carry the matching factors of 2.  In
the partitioned basis (order: plus/minus even pairs, plus odd pairs, fixed
odd labels, minus odd pairs) the conjugated S matrix has exact zero blocks
everywhere except:

    (0,0) = 2*S~[pi0, pi0]      (1,2) = 2*S~[pi0, piv]     (1,3) = 2*S~[pi0, sigma]
    (2,1) = 2*S~[piv, pi0]      (3,1) =   S~[sigma, pi0]   (4,4) = 2*S~[piv, piv]

and the conjugated T swaps the two even sectors through diag(theta).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cyclotomic import CycNumber
from .exactmat import CycMatrix
from .modular_data import HatData, ModularData


class StructureError(ValueError):
    """A structural identity that must hold exactly failed to hold."""


@dataclass(frozen=True)
class Parts:
    """Ordered label partition: even transversal, its image, odd transversal,
    its image, and the tensoring-fixed odd labels."""

    pi0: tuple[int, ...]
    psi_pi0: tuple[int, ...]
    pi_v: tuple[int, ...]
    psi_pi_v: tuple[int, ...]
    pi_sigma: tuple[int, ...]

    def all_labels(self) -> tuple[int, ...]:
        return self.pi0 + self.psi_pi0 + self.pi_v + self.psi_pi_v + self.pi_sigma

    def as_dict(self) -> dict:
        return {
            "pi0": list(self.pi0),
            "psi_pi0": list(self.psi_pi0),
            "pi_v": list(self.pi_v),
            "psi_pi_v": list(self.psi_pi_v),
            "pi_sigma": list(self.pi_sigma),
        }


@dataclass(frozen=True)
class SpinDecomposition:
    fermion: int
    epsilon: tuple[int, ...]
    action: tuple[int, ...]
    parts: Parts
    s_prime: CycMatrix
    t_prime: CycMatrix
    c_prime: CycMatrix
    hat: HatData
    block_report: dict

    def as_dict(self, include_matrices: bool = False) -> dict:
        out = {
            "fermion": self.fermion,
            "epsilon": list(self.epsilon),
            "action": list(self.action),
            "parts": self.parts.as_dict(),
            "block_report": dict(self.block_report),
            "hat_size": self.hat.size,
            "hat_conductor": self.hat.conductor,
        }
        if include_matrices:
            out["s_prime"] = [
                [self.s_prime.entry(i, j).to_json_dict() for j in range(self.s_prime.size)]
                for i in range(self.s_prime.size)
            ]
            out["hat"] = self.hat.to_json_dict()
        return out


def grade(md: ModularData, psi: int) -> tuple[int, ...]:
    """Sign grading eps_a = S~[psi][a] / d_a, each exactly +-1."""
    one = CycNumber.one(md.conductor)
    eps = []
    for a in range(md.rank):
        ratio = md.s_tilde.entry(psi, a) * md.dim(a).invert()
        if ratio == one:
            eps.append(1)
        elif ratio == -one:
            eps.append(-1)
        else:
            raise StructureError(f"label {psi} is not a fermion: S~[{psi}][{a}]/d_{a} is not +-1")
    if eps[psi] != 1 or eps[0] != 1:
        raise StructureError("grading must be +1 on the unit and on the fermion")
    return tuple(eps)


def psi_action(md: ModularData, psi: int) -> tuple[int, ...]:
    """The permutation a -> psi (x) a, recovered from S~ row matching.

    Row a of the image is (eps_b * S~[a][b])_b; the match must be unique,
    which requires nondegenerate S~.
    """
    eps = grade(md, psi)
    rows: dict[tuple, int] = {}
    for a in range(md.rank):
        key = tuple(md.s_tilde.entry(a, b) for b in range(md.rank))
        if key in rows:
            raise ValueError("S~ has repeated rows; the action is not recoverable")
        rows[key] = a
    action = []
    for a in range(md.rank):
        target = tuple(
            md.s_tilde.entry(a, b) if eps[b] == 1 else -md.s_tilde.entry(a, b) for b in range(md.rank)
        )
        match = rows.get(target)
        if match is None:
            raise ValueError(f"no row matches the twisted row of label {a}")
        action.append(match)
    if action[psi] != 0:
        raise StructureError("the action must send the fermion to the unit")
    if any(action[action[a]] != a for a in range(md.rank)):
        raise StructureError("the action must be an involution")
    return tuple(action)


def partition(md: ModularData, psi: int, eps: tuple[int, ...], action: tuple[int, ...]) -> Parts:
    """Split labels into the five canonical parts.

    Transversals take the smaller label of each 2-cycle; the even transversal
    is then repaired so it is closed under duality (always possible because a
    dual can never equal the fermion image of its partner).
    """
    sigma = tuple(a for a in range(md.rank) if eps[a] == -1 and action[a] == a)
    for a in range(md.rank):
        if eps[a] == 1 and action[a] == a:
            raise StructureError(f"even label {a} is fixed by the fermion action")

    def orbits(sign: int) -> list[tuple[int, int]]:
        seen = set()
        out = []
        for a in range(md.rank):
            if eps[a] == sign and action[a] != a and a not in seen:
                seen.add(a)
                seen.add(action[a])
                out.append((a, action[a]))  # a < action[a] by first encounter
        return out

    even_orbits = orbits(1)
    rep = {k: min(pair) for k, pair in enumerate(even_orbits)}
    orbit_of = {}
    for k, pair in enumerate(even_orbits):
        orbit_of[pair[0]] = k
        orbit_of[pair[1]] = k
    processed: set[int] = set()
    for k in sorted(rep, key=lambda k: rep[k]):
        if k in processed:
            continue
        x = rep[k]
        xs = md.duality[x]
        j = orbit_of[xs]
        if j == k:
            if xs != x:
                raise StructureError(f"dual of label {x} equals its fermion image")
            processed.add(k)
        else:
            rep[j] = xs
            processed.add(k)
            processed.add(j)
    pi0 = tuple(sorted(rep.values()))
    if any(md.duality[x] not in set(pi0) for x in pi0):
        raise StructureError("even transversal cannot be closed under duality")
    pi_v = tuple(sorted(min(pair) for pair in orbits(-1)))
    return Parts(
        pi0=pi0,
        psi_pi0=tuple(action[x] for x in pi0),
        pi_v=pi_v,
        psi_pi_v=tuple(action[y] for y in pi_v),
        pi_sigma=sigma,
    )


def _basis_matrices(md: ModularData, parts: Parts) -> tuple[CycMatrix, CycMatrix]:
    """Row matrix P of the partitioned basis and its inverse.

    Rows of P, in order: X + psiX and X - psiX over pi0, Y + psiY over piv,
    the fixed labels, then Y - psiY over piv.  P^-1 = P^T / (2 except on the
    fixed-label columns).
    """
    r = md.rank
    rows: list[tuple[tuple[int, int], ...]] = []
    for x, px in zip(parts.pi0, parts.psi_pi0):
        rows.append(((x, 1), (px, 1)))
    for x, px in zip(parts.pi0, parts.psi_pi0):
        rows.append(((x, 1), (px, -1)))
    for y, py in zip(parts.pi_v, parts.psi_pi_v):
        rows.append(((y, 1), (py, 1)))
    for z in parts.pi_sigma:
        rows.append(((z, 1),))
    for y, py in zip(parts.pi_v, parts.psi_pi_v):
        rows.append(((y, 1), (py, -1)))
    zero = CycNumber.zero(md.conductor)
    one = CycNumber.one(md.conductor)
    half = CycNumber.from_rational(Fraction(1, 2), md.conductor)
    p_entries = [[zero] * r for _ in range(r)]
    pinv_entries = [[zero] * r for _ in range(r)]
    for i, row in enumerate(rows):
        for label, sign in row:
            value = one if sign == 1 else -one
            p_entries[i][label] = value
            pinv_entries[label][i] = value if len(row) == 1 else (half if sign == 1 else -half)
    p = CycMatrix.from_entries(md.conductor, p_entries)
    p_inv = CycMatrix.from_entries(md.conductor, pinv_entries)
    return p, p_inv


def basis_change(md: ModularData, parts: Parts) -> tuple[CycMatrix, CycMatrix, CycMatrix]:
    """Conjugate S~, T and C into the partitioned basis.

    Raises StructureError if any required zero block of the conjugated S~ is
    not exactly zero.
    """
    p, p_inv = _basis_matrices(md, parts)
    s_prime = p @ md.s_tilde @ p_inv
    t_prime = p @ md.t_matrix() @ p_inv
    c_prime = p @ md.charge_matrix() @ p_inv
    n0, nv, ns = len(parts.pi0), len(parts.pi_v), len(parts.pi_sigma)
    bounds = [0, n0, 2 * n0, 2 * n0 + nv, 2 * n0 + nv + ns, 2 * n0 + 2 * nv + ns]
    nonzero = {(0, 0), (1, 2), (1, 3), (2, 1), (3, 1), (4, 4)}
    for bi in range(5):
        for bj in range(5):
            if (bi, bj) in nonzero:
                continue
            blk = s_prime.num[bounds[bi] : bounds[bi + 1], bounds[bj] : bounds[bj + 1]]
            if blk.size and np.any(blk != 0):
                raise StructureError(f"required zero block ({bi},{bj}) of the conjugated S~ is nonzero")
    return s_prime, t_prime, c_prime


def verify_block_structure(
    md: ModularData,
    parts: Parts,
    s_prime: CycMatrix,
    t_prime: CycMatrix,
    c_prime: CycMatrix,
) -> dict:
    """Exact verification of the block pattern and the conjugated relations."""
    n0, nv, ns = len(parts.pi0), len(parts.pi_v), len(parts.pi_sigma)
    bounds = [0, n0, 2 * n0, 2 * n0 + nv, 2 * n0 + nv + ns, 2 * n0 + 2 * nv + ns]
    rank = md.rank

    def expected_s_prime() -> CycMatrix:
        zero = CycNumber.zero(md.conductor)
        grid = [[zero] * rank for _ in range(rank)]
        two = Fraction(2)

        def fill(bi: int, bj: int, rows, cols, factor: Fraction):
            for a, ra in enumerate(rows):
                for b, cb in enumerate(cols):
                    grid[bounds[bi] + a][bounds[bj] + b] = md.s_tilde.entry(ra, cb) * factor

        fill(0, 0, parts.pi0, parts.pi0, two)
        fill(1, 2, parts.pi0, parts.pi_v, two)
        fill(1, 3, parts.pi0, parts.pi_sigma, two)
        fill(2, 1, parts.pi_v, parts.pi0, two)
        fill(3, 1, parts.pi_sigma, parts.pi0, Fraction(1))
        fill(4, 4, parts.pi_v, parts.pi_v, two)
        return CycMatrix.from_entries(md.conductor, grid)

    def expected_t_prime() -> CycMatrix:
        zero = CycNumber.zero(md.conductor)
        grid = [[zero] * rank for _ in range(rank)]
        for a, x in enumerate(parts.pi0):
            theta = md.t_diag[x].embed(md.conductor)
            grid[a][n0 + a] = theta
            grid[n0 + a][a] = theta
        offsets = [(2 * n0, parts.pi_v), (2 * n0 + nv, parts.pi_sigma), (2 * n0 + nv + ns, parts.pi_v)]
        for off, labels in offsets:
            for a, x in enumerate(labels):
                grid[off + a][off + a] = md.t_diag[x].embed(md.conductor)
        return CycMatrix.from_entries(md.conductor, grid)

    d2 = md.global_dim_squared()
    d_plus = md.gauss_sum_plus()
    s2 = s_prime @ s_prime
    st = s_prime @ t_prime

    pi0_block = s_prime.submatrix(range(n0), range(n0))
    b_block = s_prime.submatrix(range(bounds[4], bounds[5]), range(bounds[4], bounds[5]))

    # c_prime sign placement: -1 entries may only sit on the Piv^- diagonal
    c_sign_ok = True
    for i in range(rank):
        for j in range(rank):
            vec = c_prime.num[i, j]
            if not np.any(vec != 0):
                continue
            value = c_prime.entry(i, j)
            if value == CycNumber.from_rational(-1, md.conductor):
                if not (i == j and bounds[4] <= i < bounds[5]):
                    c_sign_ok = False
            elif value != CycNumber.one(md.conductor):
                c_sign_ok = False

    return {
        "s_prime_blocks": s_prime == expected_s_prime(),
        "t_prime_blocks": t_prime == expected_t_prime(),
        "pi0_block_symmetric": pi0_block == pi0_block.transpose(),
        "b_block_symmetric": b_block == b_block.transpose(),
        "c_prime_signs": c_sign_ok,
        "s_prime_squared": s2 == c_prime.scale(d2),
        "st_prime_cubed": st @ st @ st == s2.scale(d_plus),
        "tc_prime_commute": t_prime @ c_prime == c_prime @ t_prime,
    }


def extract_hat(md: ModularData, psi: int, normalizer: CycNumber | None = None) -> HatData:
    """Hat data carried by the even transversal block of S~.

    With an exact scalar 2/D supplied (`normalizer`) the result is the unitary
    hat matrix; otherwise the raw block is returned together with D^2 and
    unitarity is verified in the D^2-scaled form.
    """
    eps = grade(md, psi)
    action = psi_action(md, psi)
    parts = partition(md, psi, eps, action)
    block = md.s_tilde.submatrix(parts.pi0, parts.pi0)
    t_hat = tuple(md.t_diag[x] for x in parts.pi0)
    ident = CycMatrix.identity(md.conductor, len(parts.pi0))
    d2 = md.global_dim_squared()
    if normalizer is not None:
        s_hat = block.scale(normalizer)
        if s_hat @ s_hat.conj_transpose() != ident:
            raise StructureError("normalized hat matrix failed the unitarity check")
        return HatData(
            size=len(parts.pi0), s_hat=s_hat, t_hat=t_hat, conductor=md.conductor, is_normalized=True
        )
    if block @ block.conj_transpose() != ident.scale(d2 * CycNumber.from_rational(Fraction(1, 4), md.conductor)):
        raise StructureError("hat block failed the scaled unitarity check")
    return HatData(
        size=len(parts.pi0),
        s_hat=block,
        t_hat=t_hat,
        conductor=md.conductor,
        is_normalized=False,
        d_squared=d2,
    )


def spin_decompose(
    md: ModularData, psi: int | None = None, normalizer: CycNumber | None = None
) -> SpinDecomposition:
    """Full decomposition pipeline for modular data with a fermion."""
    if psi is None:
        from .modular_data import find_fermions

        fermions = find_fermions(md)
        if not fermions:
            raise ValueError("the data has no fermion")
        psi = fermions[0]
    eps = grade(md, psi)
    action = psi_action(md, psi)
    for a in range(md.rank):
        # theta at psi*a must equal -eps_a * theta_a
        expected = -md.t_diag[a] if eps[a] == 1 else md.t_diag[a]
        if md.t_diag[action[a]] != expected:
            raise StructureError(f"twist sign rule fails at label {a}")
    parts = partition(md, psi, eps, action)
    s_prime, t_prime, c_prime = basis_change(md, parts)
    report = verify_block_structure(md, parts, s_prime, t_prime, c_prime)
    hat = extract_hat(md, psi, normalizer)
    return SpinDecomposition(
        fermion=psi,
        epsilon=eps,
        action=action,
        parts=parts,
        s_prime=s_prime,
        t_prime=t_prime,
        c_prime=c_prime,
        hat=hat,
        block_report=report,
    )
