"""Subgroups of F_n through folded core graphs.

A :class:`CoreGraph` is a folded, core, labelled graph with basepoint ``0``.
Vertices are numbered in breadth-first order from the basepoint, visiting
letters in the order ``1, -1, 2, -2, ...``; the breadth-first tree defines the
free basis, one element per edge outside the tree.

Graphs built from generators also carry provenance: every edge holds a word
in the generator alphabet, such that the product of these words along any
closed path at the basepoint is an expression of the path's label in the
original generators.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .freewords import Word, primitive_root
from .intlin import IntMatrix, Lattice, QuotientMap, infinite_direction, lattice_index, left_kernel, vstack

Edge = tuple[int, int, int]  # (source, positive letter, target)


def _letter_order(n: int) -> list[int]:
    return [s * i for i in range(1, n + 1) for s in (1, -1)]


class CoreGraph:
    """Immutable folded core graph; build with :func:`build` or :meth:`from_edges`."""

    def __init__(self, n: int, num_vertices: int, edges: Sequence[Edge],
                 labels: Optional[Sequence[Word]] = None, label_alphabet: int = 0):
        self.n = n
        self.label_alphabet = label_alphabet
        self.num_vertices = num_vertices
        self.edges: tuple[Edge, ...] = tuple(edges)
        self.labels: Optional[tuple[Word, ...]] = tuple(labels) if labels is not None else None
        self._step: dict[tuple[int, int], tuple[int, int]] = {}
        for idx, (s, a, t) in enumerate(self.edges):
            for key, val in (((s, a), (t, idx)), ((t, -a), (s, idx))):
                if key in self._step:
                    raise ValueError("graph is not folded")
                self._step[key] = val
        self._spanning_tree()

    @classmethod
    def from_edges(cls, n: int, edges: Sequence[Edge], labels: Optional[Sequence[Word]] = None,
                   label_alphabet: int = 0, basepoint: int = 0) -> "CoreGraph":
        """Trim to the core at ``basepoint`` and renumber in breadth-first order.

        The edges must already be folded (deterministic in both directions).
        """
        alive = dict(enumerate(edges))
        degree: dict[int, int] = {basepoint: 0}
        incident: dict[int, set[int]] = {basepoint: set()}
        for idx, (s, _, t) in alive.items():
            for v in (s, t):
                degree[v] = degree.get(v, 0) + 1
                incident.setdefault(v, set()).add(idx)
        queue = [v for v, d in degree.items() if d <= 1 and v != basepoint]
        while queue:
            v = queue.pop()
            for idx in list(incident[v]):
                s, _, t = alive.pop(idx)
                for u in (s, t):
                    incident[u].discard(idx)
                    degree[u] -= 1
                    if u != basepoint and degree[u] == 1:
                        queue.append(u)
            degree[v] = 0
        step = {}
        for idx, (s, a, t) in alive.items():
            step[(s, a)] = (t, idx)
            step[(t, -a)] = (s, idx)
        order = _letter_order(n)
        number = {basepoint: 0}
        q = deque([basepoint])
        while q:
            v = q.popleft()
            for x in order:
                hit = step.get((v, x))
                if hit and hit[0] not in number:
                    number[hit[0]] = len(number)
                    q.append(hit[0])
        kept = sorted(alive.items(), key=lambda kv: (number[kv[1][0]], kv[1][1]))
        new_edges = [(number[s], a, number[t]) for _, (s, a, t) in kept]
        new_labels = [labels[idx] for idx, _ in kept] if labels is not None else None
        return cls(n, len(number), new_edges, new_labels, label_alphabet)

    def _spanning_tree(self):
        order = _letter_order(self.n)
        self.path_words: list[Word] = [Word.identity(self.n)] + [None] * (self.num_vertices - 1)
        k = self.label_alphabet
        self.path_labels: Optional[list[Word]] = (
            [Word.identity(k)] + [None] * (self.num_vertices - 1) if self.labels is not None else None)
        tree: set[int] = set()
        seen = {0}
        q = deque([0])
        while q:
            v = q.popleft()
            for x in order:
                hit = self._step.get((v, x))
                if hit is None or hit[0] in seen:
                    continue
                w, idx = hit
                seen.add(w)
                tree.add(idx)
                self.path_words[w] = self.path_words[v] * Word((x,), self.n)
                if self.path_labels is not None:
                    lab = self.labels[idx] if x > 0 else self.labels[idx].inverse()
                    self.path_labels[w] = self.path_labels[v] * lab
                q.append(w)
        if len(seen) != self.num_vertices:
            raise ValueError("graph is not connected")
        self.tree_edges = frozenset(tree)
        self.basis_edges: tuple[int, ...] = tuple(
            i for i in range(len(self.edges)) if i not in tree)
        self.basis_index = {e: j for j, e in enumerate(self.basis_edges)}

    @property
    def rank(self) -> int:
        return len(self.edges) - self.num_vertices + 1

    def basis_words(self) -> tuple[Word, ...]:
        out = []
        for idx in self.basis_edges:
            s, a, t = self.edges[idx]
            out.append(self.path_words[s] * Word((a,), self.n) * self.path_words[t].inverse())
        return tuple(out)

    def basis_provenance(self) -> Optional[tuple[Word, ...]]:
        if self.labels is None:
            return None
        out = []
        for idx in self.basis_edges:
            s, _, t = self.edges[idx]
            out.append(self.path_labels[s] * self.labels[idx] * self.path_labels[t].inverse())
        return tuple(out)

    def read(self, w: Word) -> Optional[tuple[Word, Optional[Word]]]:
        """Follow ``w`` from the basepoint.

        Returns ``None`` unless ``w`` labels a closed path; otherwise the path
        rewritten in the free basis and, when provenance is known, in the
        original generators.
        """
        if w.n != self.n:
            raise ValueError(f"alphabet mismatch: F_{w.n} vs F_{self.n}")
        v = 0
        coords: list[int] = []
        gens: list[int] = []
        for x in w.letters:
            hit = self._step.get((v, x))
            if hit is None:
                return None
            v, idx = hit
            j = self.basis_index.get(idx)
            if j is not None:
                coords.append(j + 1 if x > 0 else -(j + 1))
            if self.labels is not None:
                lab = self.labels[idx].letters
                gens.extend(lab if x > 0 else (-y for y in reversed(lab)))
        if v != 0:
            return None
        expr = Word(tuple(coords), self.rank)
        if self.labels is None:
            return expr, None
        return expr, Word(tuple(gens), self.label_alphabet)

    def __contains__(self, w: Word) -> bool:
        return self.read(w) is not None

    def __eq__(self, other) -> bool:
        return (isinstance(other, CoreGraph) and self.n == other.n
                and self.num_vertices == other.num_vertices and self.edges == other.edges)

    def __hash__(self):
        return hash((self.n, self.num_vertices, self.edges))

    def __repr__(self):
        return f"CoreGraph(n={self.n}, vertices={self.num_vertices}, rank={self.rank})"


@dataclass(frozen=True)
class FreeBasis:
    """Free basis read off a core graph.

    ``provenance[j]`` expresses ``words[j]`` in the generators the graph was
    built from (``None`` for graphs without provenance).
    """

    words: tuple[Word, ...]
    graph: CoreGraph = field(compare=False, repr=False)
    provenance: Optional[tuple[Word, ...]] = field(default=None, compare=False, repr=False)

    @classmethod
    def of_graph(cls, graph: CoreGraph) -> "FreeBasis":
        return cls(graph.basis_words(), graph, graph.basis_provenance())

    @classmethod
    def from_words(cls, words: Sequence[Word], n: int) -> "FreeBasis":
        return build(words, n)[1]

    @property
    def n(self) -> int:
        return self.graph.n

    @property
    def rank(self) -> int:
        return len(self.words)

    def __len__(self) -> int:
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def __getitem__(self, j):
        return self.words[j]

    def express(self, w: Word) -> Optional[Word]:
        """``w`` as a word in this basis, or ``None`` if ``w`` is not a member."""
        hit = self.graph.read(w)
        return None if hit is None else hit[0]

    def __contains__(self, w: Word) -> bool:
        return self.graph.read(w) is not None


# ---------------------------------------------------------------------------

def _fold(n: int, generators: Sequence[Word]):
    k = len(generators)
    edges: dict[int, list] = {}  # id -> [src, letter, dst, label]
    incident: dict[int, set[int]] = {0: set()}
    nv = 1

    def add_edge(s, a, t, lab):
        idx = len(edges)
        edges[idx] = [s, a, t, lab]
        incident.setdefault(s, set()).add(idx)
        incident.setdefault(t, set()).add(idx)

    one = Word.identity(k)
    for i, w in enumerate(generators):
        if not w:
            continue
        prev = 0
        for pos, x in enumerate(w.letters):
            last = pos == len(w) - 1
            nxt = 0 if last else nv
            if not last:
                nv += 1
            lab = Word.generator(i + 1, k) if last else one
            if x > 0:
                add_edge(prev, x, nxt, lab)
            else:
                add_edge(nxt, -x, prev, lab.inverse())
            prev = nxt

    def halves(v):
        # (signed letter seen from v, edge id, far endpoint, label read away from v)
        for idx in incident[v]:
            s, a, t, lab = edges[idx]
            if s == v:
                yield a, idx, t, lab
            if t == v:
                yield -a, idx, s, lab.inverse()

    stack = list(incident)
    while stack:
        v = stack.pop()
        if v not in incident:
            continue
        seen: dict[int, tuple] = {}
        clash = None
        for h in sorted(halves(v), key=lambda h: (h[0], h[1])):
            if h[0] in seen and seen[h[0]][1] != h[1]:
                clash = (seen[h[0]], h)
                break
            seen.setdefault(h[0], h)
        if clash is None:
            continue
        (_, e1, w1, l1), (_, e2, w2, l2) = clash
        if w1 != w2:
            keep, drop, g = w1, w2, l1.inverse() * l2
            if drop == 0:
                keep, drop, g = w2, w1, g.inverse()
            for idx in incident.pop(drop):
                e = edges[idx]
                if e[0] == drop:
                    e[3] = g * e[3]
                    e[0] = keep
                if e[2] == drop:
                    e[3] = e[3] * g.inverse()
                    e[2] = keep
                incident[keep].add(idx)
        s, _, t, _ = edges.pop(e2)
        incident[s].discard(e2)
        incident[t].discard(e2)
        stack.extend([v, w1 if w1 in incident else w2])
    return [tuple(e[:3]) for e in edges.values()], [e[3] for e in edges.values()]


def build(generators: Sequence[Word], n: int) -> tuple[CoreGraph, FreeBasis]:
    """Folded core graph of the subgroup generated by ``generators``."""
    for w in generators:
        if w.n != n:
            raise ValueError(f"alphabet mismatch: F_{w.n} vs F_{n}")
    edges, labels = _fold(n, list(generators))
    graph = CoreGraph.from_edges(n, edges, labels, len(generators))
    return graph, FreeBasis.of_graph(graph)


def membership(graph: CoreGraph, w: Word) -> Optional[Word]:
    """Expression of ``w`` in the graph's free basis, or ``None`` if ``w`` is not a member."""
    hit = graph.read(w)
    return None if hit is None else hit[0]


def pullback(G1: CoreGraph, G2: CoreGraph) -> CoreGraph:
    """Core graph of the intersection of the two subgroups."""
    if G1.n != G2.n:
        raise ValueError(f"alphabet mismatch: F_{G1.n} vs F_{G2.n}")
    start = (0, 0)
    number = {start: 0}
    q = deque([start])
    edges: list[Edge] = []
    while q:
        p = q.popleft()
        for a in range(1, G1.n + 1):
            h1 = G1._step.get((p[0], a))
            h2 = G2._step.get((p[1], a))
            if h1 is None or h2 is None:
                continue
            t = (h1[0], h2[0])
            if t not in number:
                number[t] = len(number)
                q.append(t)
            edges.append((number[p], a, number[t]))
        for a in range(1, G1.n + 1):
            # incoming edges reach vertices that only have an inverse step here
            h1 = G1._step.get((p[0], -a))
            h2 = G2._step.get((p[1], -a))
            if h1 is None or h2 is None:
                continue
            t = (h1[0], h2[0])
            if t not in number:
                number[t] = len(number)
                q.append(t)
    edges = sorted(set(edges))
    return CoreGraph.from_edges(G1.n, edges)


def intersect(bases: Sequence[FreeBasis]) -> FreeBasis:
    """Free basis of the intersection of finitely many subgroups (iterated pullbacks)."""
    if not bases:
        raise ValueError("intersection of no subgroups")
    graph = bases[0].graph
    for b in bases[1:]:
        graph = pullback(graph, b.graph)
    if len(bases) == 1:
        return bases[0]
    return FreeBasis.of_graph(graph)


def full_group(n: int) -> FreeBasis:
    return build([Word.generator(i, n) for i in range(1, n + 1)], n)[1]


def centralizer_basis(g: Word) -> FreeBasis:
    """``<root(g)>``: the fixed subgroup of conjugation by ``g``."""
    if not g:
        raise ValueError("conjugation by the identity fixes everything")
    return build([primitive_root(g).root], g.n)[1]


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Preimage:
    """Outcome of :func:`abelian_preimage`.

    ``coset_words`` is the basis in the letters ``x_j`` of the ambient basis
    (alphabet ``r``); ``basis`` is the same subgroup as a folded subgroup of
    F_n.  When the subgroup is not finitely generated, ``witness`` is a
    primitive direction of Z^r with no nonzero multiple in ``M``.
    """

    finitely_generated: bool
    lattice: Lattice
    index: Optional[int] = None
    coset_words: Optional[tuple[Word, ...]] = None
    basis: Optional[FreeBasis] = field(default=None, compare=False)
    coset_graph: Optional[CoreGraph] = field(default=None, compare=False, repr=False)
    witness: Optional[tuple[int, ...]] = None


def preimage_lattice(T: IntMatrix, L: Lattice) -> Lattice:
    """``{x in Z^r : x @ T in L}``."""
    r, d = T.shape
    if L.ambient_dim != d:
        raise ValueError(f"lattice lives in Z^{L.ambient_dim}, map lands in Z^{d}")
    stacked = vstack([T, L.basis.scale(-1)], d)
    kern = left_kernel(stacked)
    return Lattice.span([v[:r] for v in kern.vectors], r)


def coset_automaton(M: Lattice) -> CoreGraph:
    """Graph on Z^r / M with edges ``s --x_j--> s + e_j``."""
    r = M.ambient_dim
    quot = QuotientMap(M)
    start = quot((0,) * r)
    number = {start: 0}
    reps = [(0,) * r]
    edges: list[Edge] = []
    i = 0
    while i < len(reps):
        v = reps[i]
        for j in range(r):
            w = tuple(x + (k == j) for k, x in enumerate(v))
            lab = quot(w)
            if lab not in number:
                number[lab] = len(number)
                reps.append(w)
            edges.append((i, j + 1, number[lab]))
        i += 1
    return CoreGraph.from_edges(r, edges)


def abelian_preimage(B: FreeBasis | Sequence[Word], T: IntMatrix, L: Lattice) -> Preimage:
    """Subgroup ``{u in <B> : coords(u) @ T in L}`` of the subgroup with free basis ``B``.

    ``coords(u)`` is the exponent-sum vector of ``u`` written in the basis
    ``B``.  The subgroup is the full preimage of ``M = T^-1(L)`` under the
    abelianization of ``<B>``, so for ``r >= 2`` it is finitely generated
    exactly when ``M`` has finite index.
    """
    words = tuple(B.words if isinstance(B, FreeBasis) else B)
    r = len(words)
    if T.rows != r:
        raise ValueError(f"map has {T.rows} rows but the basis has {r} elements")
    n = words[0].n if words else (B.n if isinstance(B, FreeBasis) else 0)
    M = preimage_lattice(T, L)
    if r <= 1 or lattice_index(M) is not None:
        if r == 0:
            coset = ()
            cgraph = None
        elif r == 1:
            coset = (Word((1,) * M.vectors[0][0], 1),) if M.rank else ()
            cgraph = None
        else:
            cgraph = coset_automaton(M)
            coset = cgraph.basis_words()
        ambient = tuple(words)
        substituted = [c.substitute(ambient) for c in coset] if coset else []
        basis = build(substituted, n)[1]
        return Preimage(True, M, lattice_index(M), tuple(coset), basis, cgraph)
    return Preimage(False, M, None, witness=infinite_direction(M))
