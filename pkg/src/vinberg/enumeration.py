"""Shell enumeration: all lattice vectors with fixed norm and fixed height.

A shell is a pair (s, kappa): the set of lattice vectors e with
(e, e) = s and (e, w0) = kappa, where w0 is the integral rescaling of the
basepoint.  The height constraint is solved exactly over Z first, reducing
the shell to an ellipsoid in the constraint coset (the norm minus twice the
squared height over (w0, w0) is positive definite; over a quadratic field
the conjugate form is added, making the restriction-of-scalars lattice
compact).  Kernel candidates are then verified in exact integer arithmetic.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field as dc_field

import numpy as np

from vinberg._kernels import enumerate_window
from vinberg.linalg import IntegerAffineSolver
from vinberg.ring import Field, RingElement
from vinberg.zmodel import ZModel


class ShellContext:
    """Enumeration state for one form and one basepoint.

    z_w0 is the integer coordinate vector of w0 = den * u0; heights are the
    exact ring values (e, w0) = den * (e, u0).
    """

    def __init__(self, zm: ZModel, z_w0: tuple[int, ...], den: int = 1) -> None:
        self.zm = zm
        self.field = zm.field
        self.z_w0 = z_w0
        self.den = den
        self.w0_norm = zm.pair_value(z_w0, z_w0)  # (w0, w0), negative timelike
        if self.w0_norm.sign() >= 0:
            raise ValueError("basepoint is not timelike")
        rows = zm.functional_rows(z_w0)
        self._rows = rows
        self.solver = IntegerAffineSolver(rows)
        basis = self.solver.kernel_basis
        self._B = (
            np.array(basis, dtype=np.int64).T
            if basis
            else np.zeros((zm.m, 0), dtype=np.int64)
        )
        # identity-embedding gradient of the height functional
        g = np.array(rows[0], dtype=np.float64)
        if zm.degree == 2:
            g = g + zm.w_id * np.array(rows[1], dtype=np.float64)
        self._g = g
        T = zm.T_id - (2.0 / float(self.w0_norm)) * np.outer(g, g)
        if zm.degree == 2:
            T = T + zm.T_conj
        self._T = T

    def _rhs(self, kappa: RingElement) -> list[int]:
        if self.zm.degree == 1:
            if kappa.b:
                raise ValueError("rational lattice with irrational height")
            return [kappa.a]
        return [kappa.a, kappa.b]

    def shell(
        self,
        s: RingElement,
        kappa: RingElement,
        cons_rows: np.ndarray | None = None,
        cons_offs: np.ndarray | None = None,
    ) -> np.ndarray:
        """All z-vectors with (e, e) = s and (e, w0) = kappa, row-sorted.

        cons_rows/cons_offs optionally prune by float constraints
        rows @ z + offs <= 0 (callers re-check exactly; pruning is
        conservative with slack built in).
        """
        zm = self.zm
        x0 = self.solver.solve(self._rhs(kappa))
        if x0 is None:
            return np.empty((0, zm.m), np.int64)
        x0v = np.array(x0, dtype=np.float64)
        B = self._B
        if B.shape[1] == 0:
            z = np.array([x0], dtype=np.int64)
            return self._verify(z, s)
        Bf = B.astype(np.float64)
        A = Bf.T @ self._T @ Bf
        b = Bf.T @ (self._T @ x0v)
        c = float(x0v @ self._T @ x0v)
        # target: Q'_id(e) + (deg 2: Q_conj(e)); both fixed on the shell
        k_id = float(kappa)
        t = float(s) - 2.0 * k_id * k_id / float(self.w0_norm)
        if zm.degree == 2:
            t += s.float_conj()
        if cons_rows is not None and len(cons_rows):
            cr = np.asarray(cons_rows, dtype=np.float64)
            cx = cr @ Bf
            co = np.asarray(cons_offs, dtype=np.float64) + cr @ x0v
        else:
            cx = None
            co = None
        X = enumerate_window(A, b, c, t, t, cx, co, slack=1e-6)
        if X.shape[0] == 0:
            return np.empty((0, zm.m), np.int64)
        Z = np.asarray(x0, dtype=np.int64)[None, :] + X @ B.T
        return self._verify(Z, s)

    def _verify(self, Z: np.ndarray, s: RingElement) -> np.ndarray:
        P, Q = self.zm.batch_norms(Z)
        keep = (P == s.a) & (Q == s.b)
        Z = Z[np.asarray(keep, dtype=bool)]
        if Z.shape[0] > 1:
            order = np.lexsort(Z.T[::-1])
            Z = Z[order]
        return Z

    def height_of(self, z) -> RingElement:
        return self.zm.pair_value(z, self.z_w0)


# -- shell ladder -------------------------------------------------------------------


@dataclass
class Shell:
    """A (norm, height) shell with exact priority ordering kappa^2 / s."""

    s: RingElement
    kappa: RingElement
    _key: tuple = dc_field(init=False, repr=False)

    def __post_init__(self) -> None:
        k, s = self.kappa, self.s
        self._key = (s.trace(), s.a, s.b, -k.trace(), -k.a, -k.b)

    def priority_float(self) -> float:
        k = float(self.kappa)
        return k * k / float(self.s)

    def __lt__(self, other: "Shell") -> bool:
        # exact compare of kappa^2/s: cross-multiply in the ring
        lhs = self.kappa * self.kappa * other.s
        rhs = other.kappa * other.kappa * self.s
        c = (lhs - rhs).sign()
        if c:
            return c < 0
        return self._key < other._key

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Shell)
            and self.s == other.s
            and self.kappa == other.kappa
        )


class _KappaStream:
    """Heights kappa for one norm s, in batches of growing |kappa_id|.

    Valid kappa satisfy kappa_id < 0 and, over a quadratic field, the
    Cauchy-Schwarz bound kappa_conj^2 <= s_conj * (w0, w0)_conj.
    """

    def __init__(self, field: Field, s: RingElement, w0_norm: RingElement) -> None:
        self.field = field
        self.s = s
        self.bound_elem = s * (-w0_norm) if field.degree == 2 else None
        self.window = 0.0
        self.buffer: list[Shell] = []
        self._emitted: set[tuple[int, int]] = set()

    def _admissible(self, kappa: RingElement) -> bool:
        if kappa.sign() >= 0:
            return False
        if self.field.degree == 2:
            gap = self.bound_elem - kappa * kappa
            # conjugate embedding: (e, w0)^2 <= (e,e) * |(w0, w0)| pointwise
            if gap.sign_conj() < 0:
                return False
        return True

    def refill(self) -> None:
        prev = self.window
        self.window = max(4.0, self.window * 2.0)
        f = self.field
        fresh: list[Shell] = []
        if f.degree == 1:
            lo = int(prev) + 1
            hi = int(self.window)
            for k in range(lo, hi + 1):
                kappa = RingElement(f, -k, 0)
                fresh.append(Shell(self.s, kappa))
        else:
            w_id, w_conj = f.omega_floats()
            conj_bound = (
                np.sqrt(max(0.0, float(self.bound_elem.float_conj()))) + 1.0
            )
            X = self.window + 1.0
            window_sq = int(self.window) ** 2
            # kappa_id in [-X, 0), kappa_conj in [-C, C]; the float box has
            # a safety margin and every candidate is re-checked exactly.
            b_lo = int(np.floor((-X - conj_bound) / abs(w_id - w_conj))) - 2
            b_hi = int(np.ceil((X + conj_bound) / abs(w_id - w_conj))) + 2
            for b in range(b_lo, b_hi + 1):
                a_lo = int(np.floor(max(-X - b * w_id, -conj_bound - b * w_conj))) - 2
                a_hi = int(np.ceil(min(0.0 - b * w_id, conj_bound - b * w_conj))) + 2
                for a in range(a_lo, a_hi + 1):
                    key = (a, b)
                    if key in self._emitted:
                        continue
                    kappa = RingElement(f, a, b)
                    # exact window test: kappa_id^2 <= window^2
                    if (kappa * kappa).compare(window_sq) > 0:
                        continue
                    if not self._admissible(kappa):
                        continue
                    self._emitted.add(key)
                    fresh.append(Shell(self.s, kappa))
        fresh.sort()
        self.buffer.extend(fresh)
        self.buffer.sort()

    def peek(self) -> Shell | None:
        while not self.buffer:
            self.refill()
            if self.window > 1e12:  # runaway guard; caps fire long before
                return None
        return self.buffer[0]

    def pop(self) -> Shell:
        return self.buffer.pop(0)


class ShellLadder:
    """Merged stream of shells over all candidate norms, by priority."""

    def __init__(
        self, field: Field, norms: list[RingElement], w0_norm: RingElement
    ) -> None:
        self.streams = [_KappaStream(field, s, w0_norm) for s in norms]
        self._heap: list[tuple[Shell, int]] = []
        for i, st in enumerate(self.streams):
            head = st.peek()
            if head is not None:
                heapq.heappush(self._heap, (head, i))

    def __iter__(self):
        return self

    def __next__(self) -> Shell:
        if not self._heap:
            raise StopIteration
        shell, i = heapq.heappop(self._heap)
        self.streams[i].pop()
        head = self.streams[i].peek()
        if head is not None:
            heapq.heappush(self._heap, (head, i))
        return shell
