"""The reflective-form decision loop.

Starting from a timelike basepoint, build the chamber of the mirrors through
it, then repeatedly adjoin the root whose mirror is closest to the basepoint
among those bounding the current chamber, until the configuration encloses a
finite-volume polyhedron or a cap is hit.  The search never proves
non-reflectivity: running out of budget yields an inconclusive verdict.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from vinberg import diagram as diag
from vinberg import linalg
from vinberg.enumeration import Shell, ShellLadder
from vinberg.lattice import (
    FormError,
    GramForm,
    Root,
    Vector,
    content_is_unit,
    gram_column,
    inner_product,
    make_primitive,
)
from vinberg.ring import FieldElement, RingElement


class EngineError(RuntimeError):
    pass


@dataclass
class RunConfig:
    max_roots: int = 1000
    max_norm_shells: int = 200_000
    max_priority: float | None = None
    check_interval: int = 1
    threads: int = 1
    compute_symmetry: bool = True

    def __post_init__(self) -> None:
        if self.max_roots < 1:
            raise ValueError("max_roots must be positive")


@dataclass
class PolyhedronReport:
    roots: list[Root]
    diagram: diag.CoxeterDiagram
    finite_volume: bool
    compact: bool
    ordinary_vertices: int
    ideal_vertices: int
    face_count: int
    symmetry_order: int | None
    symmetry_generators: tuple[tuple[int, ...], ...]


@dataclass
class RunVerdict:
    outcome: str  # "reflective" | "inconclusive" | "error"
    report: PolyhedronReport | None = None
    roots_found: int = 0
    cap_hit: str | None = None
    error: str | None = None
    basepoint: Vector | None = None
    stabilizer_size: int = 0
    elapsed_s: float = 0.0
    form: GramForm | None = None

    @property
    def is_reflective(self) -> bool:
        return self.outcome == "reflective"


# -- basepoint ---------------------------------------------------------------------


def choose_basepoint(form: GramForm, supplied=None) -> Vector:
    """Validate a supplied basepoint, or search small vectors for a timelike
    one (smallest coordinate 1-norm, ties broken lexicographically largest)."""
    if supplied is not None:
        u0 = form.field_vector(supplied)
        nrm = inner_product(u0, u0, form)
        if nrm.sign() >= 0:
            raise FormError(f"basepoint has norm {nrm}, not negative")
        return u0
    zm = form.zmodel
    m = zm.m
    for weight in range(1, 24):
        best = None
        for z in _l1_sphere(m, weight):
            v = zm.from_z(z)
            nrm = inner_product(form.ring_vector(v), form.ring_vector(v), form)
            if nrm.sign() < 0:
                if best is None or z > best:
                    best = z
        if best is not None:
            return form.field_vector(zm.from_z(best))
    raise FormError("no timelike vector found within the search bound")


def _l1_sphere(m: int, weight: int):
    """Integer vectors of 1-norm == weight (generator, deterministic)."""

    def rec(i: int, remaining: int, prefix: tuple[int, ...]):
        if i == m - 1:
            if remaining == 0:
                yield prefix + (0,)
            else:
                yield prefix + (remaining,)
                yield prefix + (-remaining,)
            return
        for mag in range(remaining, -1, -1):
            if mag == 0:
                yield from rec(i + 1, remaining, prefix + (0,))
            else:
                yield from rec(i + 1, remaining - mag, prefix + (mag,))
                yield from rec(i + 1, remaining - mag, prefix + (-mag,))

    yield from rec(0, weight, ())


# -- stabilizer chamber -------------------------------------------------------------


def _interior_functional(form: GramForm, mirrors: list[tuple]) -> int:
    """Smallest t >= 1 with sum_i v_i t^i nonzero on every mirror vector."""
    vectors = [form.zmodel.from_z(z) for z in mirrors]
    for t in (1, 2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        ok = True
        for v in vectors:
            acc = form.field.zero()
            p = 1
            for c in v:
                acc = acc + c * p
                p *= t
            if acc.is_zero():
                ok = False
                break
        if ok:
            return t
    raise EngineError("no generic interior functional found")


def _functional_sign(form: GramForm, v: Vector, t: int) -> int:
    acc = form.field.zero()
    p = 1
    for c in v:
        acc = acc + c * p
        p *= t
    return acc.sign()


def stabilizer_chamber(form: GramForm, u0: Vector) -> list[Root]:
    """Essential walls of one fundamental chamber of the finite reflection
    group generated by all mirrors through the basepoint."""
    ctx = form.shell_context(u0)
    zero = form.field.zero()
    mirror_reps: dict[tuple, tuple] = {}
    for s in form.candidate_norms:
        Z = ctx.shell(s, zero)
        for zrow in np.asarray(Z):
            z = tuple(int(c) for c in zrow)
            vec = form.zmodel.from_z(z)
            if not content_is_unit(vec):
                continue
            if not _is_crystallographic_fast(form, vec, s):
                continue
            key = max(z, tuple(-c for c in z))
            mirror_reps.setdefault(key, z)
    if not mirror_reps:
        return []
    mirrors = sorted(mirror_reps.values())
    t = _interior_functional(form, mirrors)
    # positives: representatives with functional value > 0
    positives: dict[tuple, tuple] = {}
    for z in mirrors:
        vec = form.zmodel.from_z(z)
        if _functional_sign(form, vec, t) > 0:
            positives[z] = z
        else:
            nz = tuple(-c for c in z)
            positives[nz] = nz
    pos_set = set(positives)
    # peel non-simple roots: e is redundant when some alpha with (e, alpha) > 0
    # reflects it onto another positive root
    changed = True
    while changed:
        changed = False
        for ez in sorted(pos_set):
            e_vec = form.zmodel.from_z(ez)
            for az in sorted(pos_set):
                if az == ez:
                    continue
                a_vec = form.zmodel.from_z(az)
                ip = inner_product(e_vec, a_vec, form)
                if ip.sign() <= 0:
                    continue
                a_norm = inner_product(a_vec, a_vec, form)
                factor = (ip * 2).divide_exact(a_norm)
                refl = tuple(x - factor * a for x, a in zip(e_vec, a_vec))
                if form.zmodel.to_z(refl) in pos_set:
                    pos_set.remove(ez)
                    changed = True
                    break
            if changed:
                break
    simple = sorted(pos_set)
    out = []
    for z in simple:
        vec = tuple(-c for c in form.zmodel.from_z(z))
        out.append(Root(vec, form))
    return out


def _is_crystallographic_fast(form: GramForm, vec: Vector, s: RingElement) -> bool:
    for gi in gram_column(vec, form):
        if not s.divides(gi * 2):
            return False
    return True


# -- root search --------------------------------------------------------------------


class RootSearch:
    """Priority-ordered stream of new chamber walls for one run."""

    def __init__(self, form: GramForm, u0: Vector, cfg: RunConfig) -> None:
        self.form = form
        self.cfg = cfg
        self.ctx = form.shell_context(u0)
        self.ladder = ShellLadder(
            form.field, list(form.candidate_norms), self.ctx.w0_norm
        )
        self.shells_processed = 0
        self.last_shell: Shell | None = None
        self._pool = (
            ThreadPoolExecutor(max_workers=cfg.threads) if cfg.threads > 1 else None
        )
        self._prefetch: list = []

    def close(self) -> None:
        if self._pool is not None:
            self._pool.shutdown(wait=False, cancel_futures=True)

    def _constraints(self, accepted: list[Root]):
        if not accepted:
            return None, None
        zm = self.form.zmodel
        rows = []
        for r in accepted:
            fr = zm.functional_rows(r.z_coords())
            g = np.array(fr[0], dtype=np.float64)
            if zm.degree == 2:
                g = g + zm.w_id * np.array(fr[1], dtype=np.float64)
            rows.append(g)
        return np.array(rows), np.zeros(len(rows))

    def _shell_jobs(self, accepted: list[Root]):
        """Refill the prefetch queue (ladder order is preserved)."""
        want = max(1, self.cfg.threads)
        while len(self._prefetch) < want:
            try:
                shell = next(self.ladder)
            except StopIteration:
                break
            rows, offs = self._constraints(accepted)
            if self._pool is not None:
                fut = self._pool.submit(self.ctx.shell, shell.s, shell.kappa, rows, offs)
                self._prefetch.append((shell, fut))
            else:
                self._prefetch.append((shell, (rows, offs)))

    def next_root(self, accepted: list[Root]) -> tuple[Root, Shell] | str:
        """The closest-mirror root compatible with the accepted walls, or the
        name of the cap that was hit."""
        form = self.form
        zm = form.zmodel
        while True:
            if self.shells_processed >= self.cfg.max_norm_shells:
                return "max_norm_shells"
            self._shell_jobs(accepted)
            if not self._prefetch:
                return "ladder_exhausted"
            shell, payload = self._prefetch.pop(0)
            if self.cfg.max_priority is not None:
                if shell.priority_float() > self.cfg.max_priority:
                    return "max_priority"
            self.shells_processed += 1
            if self._pool is not None:
                Z = payload.result()
            else:
                rows, offs = payload
                Z = self.ctx.shell(shell.s, shell.kappa, rows, offs)
            for zrow in np.asarray(Z):
                z = tuple(int(c) for c in zrow)
                vec = zm.from_z(z)
                if not content_is_unit(vec):
                    continue
                if not _is_crystallographic_fast(form, vec, shell.s):
                    continue
                ok = True
                for r in accepted:
                    if zm.pair_value(z, r.z_coords()).sign() > 0:
                        ok = False
                        break
                if not ok:
                    continue
                self.last_shell = shell
                return Root(vec, form), shell


def run(
    form: GramForm,
    cfg: RunConfig | None = None,
    basepoint=None,
) -> RunVerdict:
    """Decide reflectivity of an admissible form; deterministic for fixed
    inputs regardless of thread count."""
    cfg = cfg or RunConfig()
    t0 = time.perf_counter()
    adm = form.admissibility
    if not adm.admissible:
        return RunVerdict(
            outcome="error",
            error=f"form is not admissible: signature {adm.signature}, "
            f"conjugate definite: {adm.conjugate_definite_ok}",
            elapsed_s=time.perf_counter() - t0,
            form=form,
        )
    u0 = choose_basepoint(form, basepoint)
    accepted = stabilizer_chamber(form, u0)
    stab_size = len(accepted)
    search = RootSearch(form, u0, cfg)
    witness: tuple[int, ...] | None = None
    last_priority: Shell | None = None
    steps_since_check = cfg.check_interval
    try:
        while True:
            if len(accepted) >= form.n + 1 and steps_since_check >= cfg.check_interval:
                if witness is None or _witness_resolved(form, accepted, witness):
                    D = diag.build_diagram(accepted, form)
                    fv = diag.check_finite_volume(D)
                    steps_since_check = 0
                    if fv.finite_volume:
                        return _reflective_verdict(
                            form, cfg, accepted, D, fv, u0, stab_size, t0
                        )
                    witness = fv.witness
            if len(accepted) >= cfg.max_roots:
                return RunVerdict(
                    outcome="inconclusive",
                    roots_found=len(accepted),
                    cap_hit="max_roots",
                    basepoint=u0,
                    stabilizer_size=stab_size,
                    elapsed_s=time.perf_counter() - t0,
                    form=form,
                )
            got = search.next_root(accepted)
            if isinstance(got, str):
                return RunVerdict(
                    outcome="inconclusive",
                    roots_found=len(accepted),
                    cap_hit=got,
                    basepoint=u0,
                    stabilizer_size=stab_size,
                    elapsed_s=time.perf_counter() - t0,
                    form=form,
                )
            root, shell = got
            if last_priority is not None and shell < last_priority:
                raise EngineError("priority ladder went backwards")
            last_priority = shell
            accepted.append(root)
            steps_since_check += 1
    finally:
        search.close()


def _witness_resolved(form: GramForm, roots: list[Root], witness: tuple[int, ...]) -> bool:
    """True when the failing edge subdiagram might now have two endpoints,
    so the full finite-volume check must rerun."""
    n = form.n
    count = 0
    base = set(witness)
    for v in range(len(roots)):
        if v in base:
            continue
        sub = tuple(sorted(witness + (v,)))
        sg = [
            [inner_product(roots[i].vector, roots[j].vector, form) for j in sub]
            for i in sub
        ]
        cls = linalg.definite_rank_class(sg)
        if cls.is_positive_definite:
            count += 1
        elif cls.is_positive_semidefinite and cls.rank == n - 1:
            count += 1  # potential ideal endpoint; force the full check
    return count >= 2


def _reflective_verdict(form, cfg, accepted, D, fv, u0, stab_size, t0) -> RunVerdict:
    if not form.field.is_rational and not fv.compact:
        raise EngineError(
            "cocompactness cross-check failed: irrational field with ideal vertices"
        )
    if cfg.compute_symmetry:
        aut = diag.diagram_automorphisms(D)
        order: int | None = aut.order
        gens = aut.generators
    else:
        order = None
        gens = ()
    report = PolyhedronReport(
        roots=accepted,
        diagram=D,
        finite_volume=fv.finite_volume,
        compact=fv.compact,
        ordinary_vertices=fv.ordinary_vertices,
        ideal_vertices=fv.ideal_vertices,
        face_count=len(accepted),
        symmetry_order=order,
        symmetry_generators=gens,
    )
    return RunVerdict(
        outcome="reflective",
        report=report,
        roots_found=len(accepted),
        basepoint=u0,
        stabilizer_size=stab_size,
        elapsed_s=time.perf_counter() - t0,
        form=form,
    )
