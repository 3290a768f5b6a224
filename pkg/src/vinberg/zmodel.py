"""Integer coordinates for quadratic lattices over Z and real quadratic rings.

A rank-(n+1) lattice over o_k is flattened to Z^m, m = degree * (n+1), by
splitting each coordinate a + b*w into (a, b).  Every inner product is then
a pair of integer bilinear forms: (x, y) = x^T MP y + w * (x^T MQ y).
All exact evaluation happens through (MP, MQ); the float matrices derived
from them feed the enumeration kernels only.
"""

from __future__ import annotations

import math

import numpy as np

from vinberg.ring import Field, FieldElement, RingElement


class ZModel:
    """Z-linear model of a symmetric o_k-bilinear form."""

    def __init__(self, field: Field, gram: list[list[RingElement]]) -> None:
        self.field = field
        self.rank = len(gram)
        self.degree = field.degree
        self.m = self.rank * self.degree
        self._build_pair_matrices(gram)
        w_id, w_conj = field.omega_floats()
        self.w_id = w_id
        self.w_conj = w_conj
        self.MP_np = np.array(self.MP, dtype=np.int64)
        self.MQ_np = np.array(self.MQ, dtype=np.int64)
        self.T_id = self.MP_np.astype(np.float64) + w_id * self.MQ_np
        if self.degree == 2:
            self.T_conj = self.MP_np.astype(np.float64) + w_conj * self.MQ_np
        else:
            self.T_conj = None
        self._max_abs_entry = max(
            1,
            max(abs(v) for row in self.MP for v in row),
            max((abs(v) for row in self.MQ for v in row), default=0),
        )

    def _build_pair_matrices(self, gram) -> None:
        n1, deg = self.rank, self.degree
        m = self.m
        c0, c1 = self.field.c0, self.field.c1
        MP = [[0] * m for _ in range(m)]
        MQ = [[0] * m for _ in range(m)]
        for i in range(n1):
            for j in range(n1):
                g = gram[i][j]
                ga, gb = g.a, g.b
                # z layout: a-parts at [0, n1), b-parts at [n1, 2 n1)
                MP[i][j] += ga
                MQ[i][j] += gb
                if deg == 2:
                    ia, ib, ja, jb = i, n1 + i, j, n1 + j
                    # a_i * b_j * w * (ga + gb w) = gb c0 + (ga + gb c1) w
                    MP[ia][jb] += gb * c0
                    MQ[ia][jb] += ga + gb * c1
                    MP[ib][ja] += gb * c0
                    MQ[ib][ja] += ga + gb * c1
                    # b_i * b_j * w^2 * (ga + gb w)
                    MP[ib][jb] += c0 * (ga + gb * c1)
                    MQ[ib][jb] += ga * c1 + gb * (c0 + c1 * c1)
        self.MP = MP
        self.MQ = MQ

    # -- coordinate maps -----------------------------------------------------

    def to_z(self, vec: tuple[RingElement, ...]) -> tuple[int, ...]:
        if self.degree == 1:
            return tuple(v.a for v in vec)
        return tuple(v.a for v in vec) + tuple(v.b for v in vec)

    def from_z(self, z) -> tuple[RingElement, ...]:
        n1 = self.rank
        if self.degree == 1:
            return tuple(RingElement(self.field, int(z[i]), 0) for i in range(n1))
        return tuple(
            RingElement(self.field, int(z[i]), int(z[n1 + i])) for i in range(n1)
        )

    def field_vector_to_z(self, vec: tuple[FieldElement, ...]) -> tuple[tuple[int, ...], int]:
        """(integer z-vector, denominator) with vec = z / den coordinatewise."""
        den = 1
        for v in vec:
            den = den * v.den // math.gcd(den, v.den)
        nums = [v.num * (den // v.den) for v in vec]
        return self.to_z(tuple(nums)), den

    # -- exact evaluation ------------------------------------------------------

    def pair_value(self, z1, z2) -> RingElement:
        """Exact (x, y) from integer coordinate vectors."""
        p = 0
        q = 0
        MP, MQ = self.MP, self.MQ
        for i, zi in enumerate(z1):
            if not zi:
                continue
            rowp = MP[i]
            rowq = MQ[i]
            sp = 0
            sq = 0
            for j, zj in enumerate(z2):
                if zj:
                    sp += rowp[j] * zj
                    sq += rowq[j] * zj
            p += zi * sp
            q += zi * sq
        return RingElement(self.field, p, q)

    def norm_value(self, z) -> RingElement:
        return self.pair_value(z, z)

    def functional_rows(self, z_w) -> list[list[int]]:
        """Integer rows (P; Q) of the linear functional x -> (x, w)."""
        rows = [[sum(self.MP[i][j] * z_w[j] for j in range(self.m)) for i in range(self.m)]]
        if self.degree == 2:
            rows.append(
                [sum(self.MQ[i][j] * z_w[j] for j in range(self.m)) for i in range(self.m)]
            )
        return rows

    # -- batched exact norm filtering -------------------------------------------

    def batch_norms(self, Z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """(P, Q) integer norm parts for rows of Z; exact (object fallback
        when int64 could overflow)."""
        if Z.size == 0:
            empty = np.zeros(0, dtype=np.int64)
            return empty, empty
        zmax = int(np.abs(Z).max())
        bound = self.m * self.m * self._max_abs_entry * zmax * zmax
        if bound < 2**62:
            Zi = Z.astype(np.int64)
            P = np.einsum("ri,ij,rj->r", Zi, self.MP_np, Zi)
            Q = np.einsum("ri,ij,rj->r", Zi, self.MQ_np, Zi)
            return P, Q
        Zo = Z.astype(object)
        MPo = np.array(self.MP, dtype=object)
        MQo = np.array(self.MQ, dtype=object)
        P = np.array([z @ MPo @ z for z in Zo], dtype=object)
        Q = np.array([z @ MQo @ z for z in Zo], dtype=object)
        return P, Q
