"""Coxeter diagrams: exact angle labels, subdiagram classification,
finite-volume and compactness tests, automorphisms, and export formats.

Diagrams are usually backed by actual roots (labels recomputed exactly from
the Gram data).  Label-only diagrams (built from a Coxeter matrix) support
the n = 2 polygon tests, where classification only ever needs vertex pairs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from vinberg import linalg
from vinberg.lattice import FormError, GramForm, Root, inner_product
from vinberg.ring import Field, FieldElement, RingElement

WEIGHT = "weight"
ORTHOGONAL = "orthogonal"
THICK = "thick"
DASHED = "dashed"


class UnrecognizedAngleError(ValueError):
    """The pair value 4 (e_i, e_j)^2 / (s_i s_j) matches no table entry
    below 4: the two mirrors do not meet at an integer submultiple of pi."""


@dataclass(frozen=True)
class EdgeLabel:
    kind: str
    m: int | None = None

    def __post_init__(self) -> None:
        if self.kind == WEIGHT:
            if self.m is None or self.m < 3:
                raise ValueError("weight labels need m >= 3")
        elif self.m is not None:
            raise ValueError("only weight labels carry m")

    @property
    def is_edge(self) -> bool:
        return self.kind != ORTHOGONAL

    @property
    def connects_finite(self) -> bool:
        """True when the mirrors intersect in the hyperbolic space."""
        return self.kind in (WEIGHT, ORTHOGONAL)

    def angle_token(self) -> str:
        if self.kind == WEIGHT:
            return str(self.m)
        if self.kind == ORTHOGONAL:
            return "2"
        if self.kind == THICK:
            return "inf"
        return "div"


_MAX_WEIGHT = 12


def _cos_table(field: Field) -> list[tuple[FieldElement, int]]:
    """(4 cos^2(pi/m), m) pairs representable in the field, m = 3.._MAX_WEIGHT."""
    out = []
    fe = lambda a, b=0, den=1: FieldElement(RingElement(field, a, b), den)
    out.append((fe(1), 3))
    out.append((fe(2), 4))
    out.append((fe(3), 6))
    if not field.is_rational:
        d = field.d
        if d == 5:
            # w = (1+sqrt5)/2: w^2 = (3+sqrt5)/2 = 1 + w, 2 + w = (5+sqrt5)/2
            out.append((fe(1, 1), 5))   # 4cos^2(pi/5)  = 1 + w
            out.append((fe(2, 1), 10))  # 4cos^2(pi/10) = 2 + w
        elif d == 2:
            out.append((fe(2, 1), 8))   # 4cos^2(pi/8) = 2 + sqrt2
        elif d == 3:
            out.append((fe(2, 1), 12))  # 4cos^2(pi/12) = 2 + sqrt3
    return out


def pair_value(e_i: Root, e_j: Root, form: GramForm) -> FieldElement:
    """q = 4 (e_i, e_j)^2 / (s_i s_j), exact in the ground field."""
    ip = inner_product(e_i.vector, e_j.vector, form)
    num = ip * ip * 4
    return FieldElement(num, 1) / FieldElement(e_i.norm * e_j.norm, 1)


def label_from_pair_value(q: FieldElement, field: Field) -> EdgeLabel:
    if q.is_zero():
        return EdgeLabel(ORTHOGONAL)
    four = FieldElement.from_int(field, 4)
    c = q.compare(four)
    if c == 0:
        return EdgeLabel(THICK)
    if c > 0:
        return EdgeLabel(DASHED)
    for value, m in _cos_table(field):
        if q == value:
            return EdgeLabel(WEIGHT, m)
    raise UnrecognizedAngleError(f"pair value {q} matches no angle pi/m, m <= {_MAX_WEIGHT}")


def label_edge(e_i: Root, e_j: Root, form: GramForm) -> EdgeLabel:
    return label_from_pair_value(pair_value(e_i, e_j, form), form.field)


@dataclass(frozen=True)
class SubdiagramClass:
    kind: str  # "elliptic" | "parabolic" | "other"
    rank: int
    components: int = 0

    @property
    def is_elliptic(self) -> bool:
        return self.kind == "elliptic"

    @property
    def is_parabolic(self) -> bool:
        return self.kind == "parabolic"


class CoxeterDiagram:
    """Edge-labeled graph over a root set (or an abstract Coxeter matrix)."""

    def __init__(
        self,
        n: int,
        labels: dict[tuple[int, int], EdgeLabel],
        size: int,
        roots: list[Root] | None = None,
        form: GramForm | None = None,
    ) -> None:
        self.n = n
        self.size = size
        self.labels = labels
        self.roots = roots
        self.form = form

    @property
    def is_abstract(self) -> bool:
        return self.roots is None

    def label(self, i: int, j: int) -> EdgeLabel:
        if i == j:
            raise ValueError("no self edges")
        return self.labels[(min(i, j), max(i, j))]

    def edges(self):
        for (i, j), lab in sorted(self.labels.items()):
            if lab.is_edge:
                yield i, j, lab

    # -- constructors -------------------------------------------------------------

    @staticmethod
    def from_roots(roots: list[Root], form: GramForm) -> CoxeterDiagram:
        size = len(roots)
        labels: dict[tuple[int, int], EdgeLabel] = {}
        for i in range(size):
            for j in range(i + 1, size):
                ip = inner_product(roots[i].vector, roots[j].vector, form)
                if ip.sign() > 0:
                    raise FormError(
                        f"roots {i} and {j} have positive inner product {ip}"
                    )
                labels[(i, j)] = label_edge(roots[i], roots[j], form)
        return CoxeterDiagram(form.n, labels, size, roots=roots, form=form)

    @staticmethod
    def from_coxeter_matrix(matrix, n: int) -> CoxeterDiagram:
        """Label-only diagram; entries are m >= 2, math.inf (tangent mirrors)
        or the string 'div' (divergent mirrors)."""
        size = len(matrix)
        labels: dict[tuple[int, int], EdgeLabel] = {}
        for i in range(size):
            for j in range(i + 1, size):
                mij = matrix[i][j]
                if mij != matrix[j][i]:
                    raise ValueError("Coxeter matrix is not symmetric")
                if mij == 2:
                    labels[(i, j)] = EdgeLabel(ORTHOGONAL)
                elif mij == math.inf:
                    labels[(i, j)] = EdgeLabel(THICK)
                elif mij == "div":
                    labels[(i, j)] = EdgeLabel(DASHED)
                else:
                    labels[(i, j)] = EdgeLabel(WEIGHT, int(mij))
        return CoxeterDiagram(n, labels, size)

    # -- subdiagram machinery --------------------------------------------------------

    def components_of(self, subset: tuple[int, ...]) -> int:
        """Connected components of the subset in the non-orthogonality graph."""
        remaining = set(subset)
        comps = 0
        while remaining:
            comps += 1
            stack = [remaining.pop()]
            while stack:
                v = stack.pop()
                linked = [
                    u
                    for u in list(remaining)
                    if self.label(min(u, v), max(u, v)).is_edge
                ]
                for u in linked:
                    remaining.remove(u)
                    stack.append(u)
        return comps

    def subgram(self, subset) -> list[list]:
        assert self.roots is not None and self.form is not None
        return [
            [
                inner_product(self.roots[i].vector, self.roots[j].vector, self.form)
                for j in subset
            ]
            for i in subset
        ]

    def classify_subdiagram(self, subset) -> SubdiagramClass:
        subset = tuple(sorted(subset))
        if not subset:
            raise ValueError("empty subset")
        if self.roots is not None:
            cls = linalg.definite_rank_class(self.subgram(subset))
            if cls.is_positive_definite:
                return SubdiagramClass("elliptic", cls.rank)
            comps = self.components_of(subset)
            if cls.is_positive_semidefinite and cls.nullity == comps:
                return SubdiagramClass("parabolic", cls.rank, comps)
            return SubdiagramClass("other", cls.rank)
        # label-only: vertex pairs suffice for the n = 2 uses
        if len(subset) == 1:
            return SubdiagramClass("elliptic", 1)
        if len(subset) == 2:
            lab = self.label(*subset)
            if lab.kind in (ORTHOGONAL, WEIGHT):
                return SubdiagramClass("elliptic", 2)
            if lab.kind == THICK:
                return SubdiagramClass("parabolic", 1, 1)
            return SubdiagramClass("other", 2)
        raise FormError(
            "label-only diagrams classify subsets of size <= 2 only"
        )


def build_diagram(roots: list[Root], form: GramForm) -> CoxeterDiagram:
    return CoxeterDiagram.from_roots(roots, form)


def classify_subdiagram(diagram: CoxeterDiagram, subset) -> SubdiagramClass:
    return diagram.classify_subdiagram(subset)


# -- finite volume ---------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteVolumeReport:
    finite_volume: bool
    compact: bool
    ordinary_vertices: int
    ideal_vertices: int
    reason: str = ""
    witness: tuple[int, ...] | None = None


class _EllipticDFS:
    """Enumerates positive definite vertex subsets by fraction-free
    incremental elimination (subsets of PD sets are PD, so pruning is safe)."""

    def __init__(self, diagram: CoxeterDiagram) -> None:
        self.d = diagram
        assert diagram.roots is not None
        form = diagram.form
        self.G = [
            [
                inner_product(a.vector, b.vector, form)
                for b in diagram.roots
            ]
            for a in diagram.roots
        ]

    def _push(self, state, v: int):
        """Extend elimination state by vertex v; returns new state or None
        if the extended subset is not positive definite.

        rows[u] holds the Bareiss-eliminated row of member u: rows[u][t] is
        the working value of entry (u, t) after stages 0..t-1, so by
        symmetry it also serves as the stage-t value of entry (t, u).
        """
        subset, rows = state
        k = len(subset)
        x = [self.G[v][u] for u in subset] + [self.G[v][v]]
        prev = 1
        for t in range(k):
            piv = rows[t][t]
            xt = x[t]
            for u in range(t + 1, k + 1):
                m_tu = rows[u][t] if u < k else xt
                x[u] = linalg._ediv(piv * x[u] - xt * m_tu, prev)
            prev = piv
        if linalg._sgn(x[k]) <= 0:
            return None
        return (subset + (v,), rows + [x])

    def enumerate(self, max_size: int):
        """Yields every PD subset of size <= max_size, ascending-index DFS."""
        size = self.d.size
        init = ((), [])
        stack = [(init, 0)]
        while stack:
            state, start = stack.pop()
            for v in range(start, size):
                new_state = self._push(state, v)
                if new_state is None:
                    continue
                yield new_state[0]
                if len(new_state[0]) < max_size:
                    stack.append((new_state, v + 1))


def _elliptic_subsets_exact(diagram: CoxeterDiagram, sizes: set[int]):
    """All PD subsets of the given sizes (and their elimination tree)."""
    out = {k: [] for k in sizes}
    max_size = max(sizes)
    dfs = _EllipticDFS(diagram)
    for subset in dfs.enumerate(max_size):
        if len(subset) in sizes:
            out[len(subset)].append(subset)
    return out


def _parabolic_extensions(diagram: CoxeterDiagram, sigma: tuple[int, ...]):
    """Parabolic rank-(n-1) vertex sets containing the elliptic set sigma."""
    n = diagram.n
    size = diagram.size
    rank_target = n - 1
    base = set(sigma)
    candidates = []
    for v in range(size):
        if v in base:
            continue
        sub = tuple(sorted(sigma + (v,)))
        cls = linalg.definite_rank_class(diagram.subgram(sub))
        if cls.is_positive_semidefinite and cls.rank == rank_target:
            candidates.append(v)
    found: list[frozenset[int]] = []

    def grow(current: tuple[int, ...], remaining: list[int]) -> None:
        cls = diagram.classify_subdiagram(current)
        if cls.is_parabolic and cls.rank == rank_target:
            found.append(frozenset(current))
            return
        for idx, v in enumerate(remaining):
            sub = tuple(sorted(current + (v,)))
            dc = linalg.definite_rank_class(diagram.subgram(sub))
            if dc.is_positive_semidefinite and dc.rank == rank_target:
                grow(sub, remaining[idx + 1:])

    for idx, v in enumerate(candidates):
        grow(tuple(sorted(sigma + (v,))), candidates[idx + 1:])
    return set(found)


def check_finite_volume(diagram: CoxeterDiagram) -> FiniteVolumeReport:
    """Finite volume iff every elliptic rank-(n-1) subdiagram extends to
    exactly two endpoints: elliptic rank n (ordinary vertex) or parabolic
    rank n-1 (ideal vertex)."""
    n = diagram.n
    if diagram.size < n + 1:
        return FiniteVolumeReport(
            False, False, 0, 0, reason=f"only {diagram.size} walls in H^{n}"
        )
    if diagram.is_abstract:
        return _check_finite_volume_abstract(diagram)
    subsets = _elliptic_subsets_exact(diagram, {n - 1, n})
    edges = subsets[n - 1]
    vertices = subsets[n]
    ordinary_count: dict[tuple[int, ...], int] = {tuple(s): 0 for s in edges}
    for vx in vertices:
        for drop in vx:
            sigma = tuple(u for u in vx if u != drop)
            if sigma in ordinary_count:
                ordinary_count[sigma] += 1
    ideal_sets: set[frozenset[int]] = set()
    finite = True
    witness = None
    for sigma in edges:
        para = _parabolic_extensions(diagram, sigma)
        ideal_sets |= para
        total = ordinary_count[tuple(sigma)] + len(para)
        if total != 2:
            finite = False
            witness = tuple(sigma)
            break
    ideal = len(ideal_sets)
    if not finite:
        return FiniteVolumeReport(
            False,
            False,
            len(vertices),
            ideal,
            reason="an edge subdiagram lacks two endpoints",
            witness=witness,
        )
    return FiniteVolumeReport(True, ideal == 0, len(vertices), ideal)


def _check_finite_volume_abstract(diagram: CoxeterDiagram) -> FiniteVolumeReport:
    """Label-only path for n = 2 polygons (subset sizes at most 2).

    Every wall needs exactly two endpoints (finite-angle or tangent pairs),
    and the Gauss-Bonnet area (N - 2) pi - sum of vertex angles must be
    positive, ruling out spherical and euclidean angle data.
    """
    if diagram.n != 2:
        raise FormError("label-only finite-volume test supports n = 2 only")
    size = diagram.size
    ordinary = 0
    ideal = 0
    angle_sum = Fraction(0)  # in units of pi
    for i in range(size):
        endpoints = 0
        for j in range(size):
            if j == i:
                continue
            cls = diagram.classify_subdiagram((min(i, j), max(i, j)))
            if cls.is_elliptic or cls.is_parabolic:
                endpoints += 1
        if endpoints != 2:
            return FiniteVolumeReport(
                False, False, 0, 0,
                reason="a wall lacks two endpoints", witness=(i,),
            )
    for i in range(size):
        for j in range(i + 1, size):
            cls = diagram.classify_subdiagram((i, j))
            lab = diagram.label(i, j)
            if cls.is_elliptic:
                ordinary += 1
                angle_sum += Fraction(1, lab.m if lab.kind == WEIGHT else 2)
            elif cls.is_parabolic:
                ideal += 1
    if Fraction(size - 2) - angle_sum <= 0:
        return FiniteVolumeReport(
            False, False, ordinary, ideal, reason="angle data is not hyperbolic"
        )
    return FiniteVolumeReport(True, ideal == 0, ordinary, ideal)


# -- automorphisms ----------------------------------------------------------------------


@dataclass(frozen=True)
class AutomorphismReport:
    order: int
    generators: tuple[tuple[int, ...], ...]


def _edge_colors(diagram: CoxeterDiagram):
    """Hashable vertex and pair colors preserved by automorphisms."""
    size = diagram.size
    if diagram.roots is not None:
        vcol = [str(r.norm) for r in diagram.roots]
        form = diagram.form
        pcol = {}
        for i in range(size):
            for j in range(i + 1, size):
                ip = inner_product(
                    diagram.roots[i].vector, diagram.roots[j].vector, form
                )
                pcol[(i, j)] = str(ip)
    else:
        vcol = ["v"] * size
        pcol = {
            (i, j): diagram.label(i, j).kind + str(diagram.label(i, j).m)
            for i in range(size)
            for j in range(i + 1, size)
        }
    return vcol, pcol


def _refine(size: int, vcol: list, pcol: dict) -> list[int]:
    """Iterated neighbourhood refinement; returns stable integer colors."""
    colors = {}
    cur = [colors.setdefault(c, len(colors)) for c in vcol]
    while True:
        sigs = []
        for i in range(size):
            neigh = sorted(
                (cur[j], pcol[(min(i, j), max(i, j))])
                for j in range(size)
                if j != i
            )
            sigs.append((cur[i], tuple(neigh)))
        colors = {}
        new = [colors.setdefault(s, len(colors)) for s in sigs]
        if new == cur:
            return cur
        cur = new


def diagram_automorphisms(diagram: CoxeterDiagram) -> AutomorphismReport:
    """All vertex permutations preserving norms and exact pair values,
    by refined-partition backtracking with an orbit-stabilizer count."""
    size = diagram.size
    vcol, pcol = _edge_colors(diagram)
    base_colors = _refine(size, vcol, pcol)

    def compatible(p: dict[int, int], v: int, t: int) -> bool:
        if base_colors[v] != base_colors[t]:
            return False
        for u, tu in p.items():
            a = pcol[(min(u, v), max(u, v))]
            b = pcol[(min(tu, t), max(tu, t))]
            if a != b:
                return False
        return True

    order_base = list(range(size))

    def extend(p: dict[int, int], used: set[int]) -> tuple[int, ...] | None:
        if len(p) == size:
            return tuple(p[i] for i in range(size))
        v = next(i for i in order_base if i not in p)
        for t in range(size):
            if t in used or not compatible(p, v, t):
                continue
            p[v] = t
            used.add(t)
            res = extend(p, used)
            if res is not None:
                return res
            del p[v]
            used.remove(t)
        return None

    generators: list[tuple[int, ...]] = []
    order = 1
    fixed: list[int] = []
    for level in range(size):
        v = level
        # orbit of v under the stabilizer of fixed[0..level-1]
        orbit = {v}
        frontier = [v]
        gens_here = [g for g in generators if all(g[f] == f for f in fixed)]
        while frontier:
            x = frontier.pop()
            for g in gens_here:
                y = g[x]
                if y not in orbit:
                    orbit.add(y)
                    frontier.append(y)
        for t in range(size):
            if t in orbit or t in fixed or base_colors[t] != base_colors[v]:
                continue
            p = {f: f for f in fixed}
            used = set(fixed)
            if not compatible(p, v, t):
                continue
            p[v] = t
            used.add(t)
            res = extend(p, used)
            if res is not None:
                generators.append(res)
                gens_here.append(res)
                frontier = list(orbit)
                while frontier:
                    x = frontier.pop()
                    for g in gens_here:
                        y = g[x]
                        if y not in orbit:
                            orbit.add(y)
                            frontier.append(y)
        order *= len(orbit)
        fixed.append(v)
    nontrivial = tuple(
        g for g in generators if any(g[i] != i for i in range(size))
    )
    return AutomorphismReport(order, nontrivial)


# -- export -----------------------------------------------------------------------------


def export_text(diagram: CoxeterDiagram) -> str:
    """Stable line-oriented format: one `i -- j [m]` line per edge,
    1-indexed vertices in canonical order."""
    lines = []
    for i, j, lab in diagram.edges():
        lines.append(f"{i + 1} -- {j + 1} [{lab.angle_token()}]")
    return "\n".join(lines)


def export_dot(diagram: CoxeterDiagram) -> str:
    lines = ["graph coxeter {", "  node [shape=circle];"]
    for i in range(diagram.size):
        lines.append(f"  {i + 1};")
    for i, j, lab in diagram.edges():
        if lab.kind == WEIGHT:
            copies = lab.m - 2 if lab.m <= 5 else 1
            lines.append(f'  {i + 1} -- {j + 1} [label="{lab.m}"];')
            for _ in range(copies - 1):
                lines.append(f"  {i + 1} -- {j + 1};")
        elif lab.kind == THICK:
            lines.append(f"  {i + 1} -- {j + 1} [style=bold];")
        else:
            lines.append(f"  {i + 1} -- {j + 1} [style=dashed];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_json(diagram: CoxeterDiagram) -> str:
    data = {
        "n": diagram.n,
        "size": diagram.size,
        "edges": [
            {
                "i": i,
                "j": j,
                "kind": lab.kind,
                **({"m": lab.m} if lab.kind == WEIGHT else {}),
            }
            for (i, j), lab in sorted(diagram.labels.items())
        ],
    }
    if diagram.roots is not None:
        data["vertices"] = [
            {
                "coords": [str(c) for c in r.vector],
                "norm": str(r.norm),
            }
            for r in diagram.roots
        ]
    return json.dumps(data, indent=2, sort_keys=True)


def import_json(text: str, form: GramForm | None = None) -> CoxeterDiagram:
    data = json.loads(text)
    if form is not None and "vertices" in data:
        roots = [
            Root([form.field.parse(c) for c in v["coords"]], form)
            for v in data["vertices"]
        ]
        return CoxeterDiagram.from_roots(roots, form)
    labels = {}
    for e in data["edges"]:
        kind = e["kind"]
        labels[(e["i"], e["j"])] = EdgeLabel(kind, e.get("m"))
    for i in range(data["size"]):
        for j in range(i + 1, data["size"]):
            labels.setdefault((i, j), EdgeLabel(ORTHOGONAL))
    return CoxeterDiagram(data["n"], labels, data["size"])


def export(diagram: CoxeterDiagram, fmt: str) -> str:
    if fmt == "text":
        return export_text(diagram)
    if fmt == "dot":
        return export_dot(diagram)
    if fmt == "json":
        return export_json(diagram)
    raise ValueError(f"unknown format {fmt!r}")
