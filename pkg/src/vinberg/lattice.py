"""Admissible Lorentzian forms, their lattices, roots and reflections.

A GramForm fixes the ground field and the symmetric Gram matrix (entries in
the ring of integers).  Lattice vectors are tuples of RingElement; basepoints
may have field coordinates.  Roots are primitive crystallographic vectors of
totally positive norm.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from vinberg import linalg
from vinberg.enumeration import ShellContext
from vinberg.ring import (
    Field,
    FieldElement,
    RingElement,
    ring_gcd_many,
    divisors_up_to_associates,
    totally_positive_unit_class_reps,
)
from vinberg.zmodel import ZModel

Vector = tuple  # tuple of RingElement (lattice) or FieldElement (points)


class FormError(ValueError):
    """Invalid form construction or operation."""


class InvalidRootError(ValueError):
    """Vector violates a root invariant (norm, primitivity, or lattice
    preservation)."""


@dataclass(frozen=True)
class AdmissibilityReport:
    signature_ok: bool
    conjugate_definite_ok: bool
    signature: tuple[int, int, int]

    @property
    def admissible(self) -> bool:
        return self.signature_ok and self.conjugate_definite_ok


class GramForm:
    """Exact symmetric Gram matrix of a quadratic form of signature (n, 1)."""

    def __init__(self, field: Field, gram: list[list]) -> None:
        size = len(gram)
        if size < 2:
            raise FormError("form must have rank at least 2")
        rows = []
        for row in gram:
            if len(row) != size:
                raise FormError("gram matrix is not square")
            rows.append(tuple(self._coerce(field, x) for x in row))
        for i in range(size):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise FormError("gram matrix is not symmetric")
        self.field = field
        self.gram = tuple(rows)
        self.n = size - 1
        self._shell_contexts: dict[tuple, ShellContext] = {}

    @staticmethod
    def _coerce(field: Field, x) -> RingElement:
        if isinstance(x, RingElement):
            if x.field != field and x.b != 0:
                raise FormError("gram entry from the wrong field")
            return RingElement(field, x.a, x.b)
        if isinstance(x, int):
            return RingElement(field, x, 0)
        raise FormError(f"gram entry {x!r} is not a ring element")

    @staticmethod
    def diagonal(field: Field, diag: list) -> GramForm:
        size = len(diag)
        zero = field.zero()
        gram = [
            [diag[i] if i == j else zero for j in range(size)] for i in range(size)
        ]
        return GramForm(field, gram)

    @property
    def size(self) -> int:
        return self.n + 1

    @cached_property
    def zmodel(self) -> ZModel:
        return ZModel(self.field, [list(r) for r in self.gram])

    @cached_property
    def det(self) -> RingElement:
        d = linalg.det_bareiss([list(r) for r in self.gram])
        return d if isinstance(d, RingElement) else self.field.element(d)

    @cached_property
    def invariant_factor_exponent(self) -> RingElement:
        return linalg.invariant_factor_exponent(
            [list(r) for r in self.gram], self.field
        )

    @cached_property
    def admissibility(self) -> AdmissibilityReport:
        sig = linalg.inertia([list(r) for r in self.gram], self.field)
        signature_ok = sig[0] == self.n and sig[1] == 1 and sig[2] == 0
        if self.field.is_rational:
            conj_ok = True
        else:
            conj = [[x.conj() for x in row] for row in self.gram]
            conj_ok = linalg.definite_rank_class(conj).is_positive_definite
        return AdmissibilityReport(signature_ok, conj_ok, sig)

    @cached_property
    def candidate_norms(self) -> tuple[RingElement, ...]:
        """Totally positive norms a root can take: divisors of twice the
        discriminant-group exponent, one per unit-square class."""
        two_m = self.invariant_factor_exponent * 2
        out: list[RingElement] = []
        for d in divisors_up_to_associates(two_m):
            out.extend(totally_positive_unit_class_reps(self.field, d))
        seen = set()
        uniq = []
        for s in sorted(out, key=lambda e: (e.trace(), e.a, e.b)):
            if s not in seen:
                seen.add(s)
                uniq.append(s)
        return tuple(uniq)

    # -- vectors ---------------------------------------------------------------

    def ring_vector(self, coords) -> Vector:
        if len(coords) != self.size:
            raise FormError("coordinate count mismatch")
        return tuple(self._coerce(self.field, c) for c in coords)

    def field_vector(self, coords) -> Vector:
        if len(coords) != self.size:
            raise FormError("coordinate count mismatch")
        out = []
        for c in coords:
            if isinstance(c, FieldElement):
                out.append(c)
            elif isinstance(c, (int, RingElement)):
                out.append(FieldElement(self._coerce(self.field, c), 1))
            else:
                raise FormError(f"coordinate {c!r} is not a field element")
        return tuple(out)

    def shell_context(self, u0: Vector) -> ShellContext:
        key = tuple(u0)
        ctx = self._shell_contexts.get(key)
        if ctx is None:
            z_w0, den = self.zmodel.field_vector_to_z(self.field_vector(u0))
            ctx = ShellContext(self.zmodel, z_w0, den)
            self._shell_contexts[key] = ctx
        return ctx


def inner_product(u: Vector, v: Vector, form: GramForm):
    """Exact u^T G v; RingElement for lattice vectors, FieldElement when
    either argument has field coordinates."""
    if len(u) != form.size or len(v) != form.size:
        raise FormError("dimension mismatch")
    has_field = any(isinstance(x, FieldElement) for x in u) or any(
        isinstance(x, FieldElement) for x in v
    )
    if not has_field:
        acc = form.field.zero()
        for i, ui in enumerate(u):
            if ui.is_zero():
                continue
            row = form.gram[i]
            s = form.field.zero()
            for j, vj in enumerate(v):
                if not vj.is_zero():
                    s = s + row[j] * vj
            acc = acc + ui * s
        return acc
    fu = [x if isinstance(x, FieldElement) else FieldElement(x, 1) for x in u]
    fv = [x if isinstance(x, FieldElement) else FieldElement(x, 1) for x in v]
    acc = FieldElement.from_int(form.field, 0)
    for i, ui in enumerate(fu):
        if ui.is_zero():
            continue
        row = form.gram[i]
        s = FieldElement.from_int(form.field, 0)
        for j, vj in enumerate(fv):
            if not vj.is_zero():
                s = s + vj * row[j]
        acc = acc + ui * s
    return acc


def norm_of(v: Vector, form: GramForm):
    return inner_product(v, v, form)


def gram_column(v: Vector, form: GramForm) -> tuple[RingElement, ...]:
    """(G v)_i for a lattice vector: the pairings with the basis vectors."""
    out = []
    for i in range(form.size):
        s = form.field.zero()
        row = form.gram[i]
        for j, vj in enumerate(v):
            if not vj.is_zero():
                s = s + row[j] * vj
        out.append(s)
    return tuple(out)


def is_crystallographic(v: Vector, form: GramForm) -> bool:
    """True iff (v,v) divides 2 (v, basis_i) for every basis vector, so the
    reflection in v preserves the lattice."""
    s = norm_of(v, form)
    if not s.is_totally_positive():
        raise InvalidRootError(f"norm {s} is not totally positive")
    for gi in gram_column(v, form):
        if not s.divides(gi * 2):
            return False
    return True


def make_primitive(v: Vector) -> Vector:
    """Divide out the canonical gcd of the coordinates."""
    nz = [c for c in v if not c.is_zero()]
    if not nz:
        raise InvalidRootError("zero vector cannot be normalized")
    g = ring_gcd_many(nz)
    if g.is_unit() and g.is_one():
        return tuple(v)
    return tuple(c.divide_exact(g) for c in v)


def content_is_unit(v: Vector) -> bool:
    nz = [c for c in v if not c.is_zero()]
    if not nz:
        return False
    return ring_gcd_many(nz).is_unit()


class Root:
    """A primitive crystallographic lattice vector of totally positive norm."""

    __slots__ = ("vector", "norm", "_z")

    def __init__(self, vector: Vector, form: GramForm) -> None:
        vec = form.ring_vector(vector)
        s = norm_of(vec, form)
        if not s.is_totally_positive():
            raise InvalidRootError(f"norm {s} of {vec} is not totally positive")
        if not content_is_unit(vec):
            raise InvalidRootError(f"{vec} is not primitive")
        if not is_crystallographic(vec, form):
            raise InvalidRootError(f"{vec} violates the lattice-preservation test")
        self.vector = vec
        self.norm = s
        self._z = form.zmodel.to_z(vec)

    def z_coords(self) -> tuple[int, ...]:
        return self._z

    def mirror_key(self) -> tuple:
        """Sign-canonical key identifying the mirror of this root."""
        z = self._z
        neg = tuple(-c for c in z)
        return max(z, neg)

    def __repr__(self) -> str:
        return f"Root(({', '.join(str(c) for c in self.vector)}))"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Root) and self.vector == other.vector

    def __hash__(self) -> int:
        return hash(self.vector)


def reflect(x: Vector, root: Root, form: GramForm) -> Vector:
    """Image of x under the reflection fixing the mirror of root."""
    if isinstance(x[0], FieldElement):
        ip = inner_product(x, root.vector, form)
        factor = ip * 2 / FieldElement(root.norm, 1)
        return tuple(
            xi - factor * FieldElement(ei, 1) for xi, ei in zip(x, root.vector)
        )
    ip = inner_product(x, root.vector, form)
    factor = (ip * 2).divide_exact(root.norm)
    return tuple(xi - factor * ei for xi, ei in zip(x, root.vector))


def check_admissible(form: GramForm) -> AdmissibilityReport:
    return form.admissibility


def enumerate_fixed_norm_and_height(
    form: GramForm, u0: Vector, s: RingElement, k
) -> list[Vector]:
    """The complete list of lattice vectors e with (e, e) = s, (e, u0) = k.

    k may be a FieldElement (heights live in (1/den) o_k when the basepoint
    has field coordinates); k <= 0 under the identity embedding is required,
    with k = 0 giving the mirrors through the basepoint.
    """
    if not form.admissibility.admissible:
        raise FormError("form is not admissible")
    if not s.is_totally_positive():
        raise FormError("shell norm must be totally positive")
    ctx = form.shell_context(u0)
    if isinstance(k, int):
        k = FieldElement.from_int(form.field, k)
    elif isinstance(k, RingElement):
        k = FieldElement(k, 1)
    if k.sign() > 0:
        raise FormError("height must be <= 0 under the identity embedding")
    kappa_fe = k * ctx.den
    if not kappa_fe.is_integral():
        return []
    Z = ctx.shell(s, kappa_fe.ring_value())
    return [form.zmodel.from_z(z) for z in np.asarray(Z)]
