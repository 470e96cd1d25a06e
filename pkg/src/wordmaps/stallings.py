"""Folded core graphs for finitely generated subgroups of free groups.

A CoreGraph is stored in canonical form: vertices are numbered 0..n-1 in
the order of a breadth-first traversal from the base vertex 0, exploring
outgoing edges by ascending label and then incoming edges by ascending
label.  Two subgroups of the same ambient free group are equal iff their
canonical graphs are identical.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import BudgetExceededError, InternalInvariantError
from .words import Word

Edge = tuple[int, int, int]  # (tail, label, head)

DEFAULT_VERTEX_CAP = 12


@dataclass
class PreGraph:
    """A mutable, possibly unfolded labeled digraph with base vertex 0."""

    ambient_rank: int
    num_vertices: int = 1
    edges: list[Edge] = field(default_factory=list)

    def new_vertex(self) -> int:
        self.num_vertices += 1
        return self.num_vertices - 1

    def add_edge(self, tail: int, label: int, head: int):
        if not (1 <= label <= self.ambient_rank):
            raise ValueError(f"label {label} out of range")
        self.edges.append((tail, label, head))

    def add_word_loop(self, w: Word, at: int = 0):
        """Attach a loop at `at` spelling w (one edge per letter)."""
        cur = at
        for i, (g, s) in enumerate(w.letters):
            nxt = at if i == len(w.letters) - 1 else self.new_vertex()
            if s == 1:
                self.add_edge(cur, g, nxt)
            else:
                self.add_edge(nxt, g, cur)
            cur = nxt


@dataclass(frozen=True)
class CoreGraph:
    """An immutable folded, pruned, canonically numbered core graph."""

    ambient_rank: int
    num_vertices: int
    edges: tuple[Edge, ...]

    @property
    def rank(self) -> int:
        return len(self.edges) - self.num_vertices + 1

    @cached_property
    def canonical_key(self) -> bytes:
        return repr((self.ambient_rank, self.num_vertices, self.edges)).encode()

    @cached_property
    def out_map(self) -> dict[tuple[int, int], int]:
        return {(u, lab): v for u, lab, v in self.edges}

    @cached_property
    def in_map(self) -> dict[tuple[int, int], int]:
        return {(v, lab): u for u, lab, v in self.edges}

    @property
    def is_rose(self) -> bool:
        """A wedge of loops at the base labeled by distinct generators."""
        return self.num_vertices == 1

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoreGraph) and self.canonical_key == other.canonical_key
        )

    def __hash__(self) -> int:
        return hash(self.canonical_key)


# ----------------------------------------------------------------------
# Folding pipeline
# ----------------------------------------------------------------------


def _fold_edges(edges: list[Edge]) -> tuple[set[Edge], dict[int, int]]:
    """Identify edges until folded; returns the edge set and the vertex map."""
    es = set(edges)
    rename: dict[int, int] = {}

    def root(v: int) -> int:
        while v in rename:
            v = rename[v]
        return v

    while True:
        seen_out: dict[tuple[int, int], int] = {}
        seen_in: dict[tuple[int, int], int] = {}
        merge: tuple[int, int] | None = None
        for u, lab, v in sorted(es):
            if (u, lab) in seen_out and seen_out[(u, lab)] != v:
                merge = (seen_out[(u, lab)], v)
                break
            seen_out[(u, lab)] = v
            if (v, lab) in seen_in and seen_in[(v, lab)] != u:
                merge = (seen_in[(v, lab)], u)
                break
            seen_in[(v, lab)] = u
        if merge is None:
            return es, rename
        a, b = sorted(merge)
        rename[b] = a
        es = {(root(u), lab, root(v)) for u, lab, v in es}


def _prune(es: set[Edge], base: int) -> set[Edge]:
    """Iteratively delete hanging-tree vertices (degree <= 1, not base)."""
    while True:
        degree: dict[int, int] = {}
        for u, _, v in es:
            degree[u] = degree.get(u, 0) + 1
            degree[v] = degree.get(v, 0) + 1
        victims = {v for v, d in degree.items() if d <= 1 and v != base}
        if not victims:
            return es
        es = {(u, lab, v) for u, lab, v in es if u not in victims and v not in victims}


def _canonicalize(ambient_rank: int, es: set[Edge], base: int) -> CoreGraph:
    out: dict[tuple[int, int], int] = {}
    inc: dict[tuple[int, int], int] = {}
    vertices = {base}
    for u, lab, v in es:
        out[(u, lab)] = v
        inc[(v, lab)] = u
        vertices.add(u)
        vertices.add(v)
    order = [base]
    index = {base: 0}
    i = 0
    while i < len(order):
        v = order[i]
        for lab in range(1, ambient_rank + 1):
            for nbr_map in (out, inc):
                w = nbr_map.get((v, lab))
                if w is not None and w not in index:
                    index[w] = len(order)
                    order.append(w)
        i += 1
    if len(order) != len(vertices):
        raise InternalInvariantError("core graph is disconnected")
    canon = tuple(sorted((index[u], lab, index[v]) for u, lab, v in es))
    return CoreGraph(ambient_rank, len(order), canon)


def fold(pre: PreGraph, base: int = 0) -> CoreGraph:
    """Fold, prune and canonicalize a pre-graph."""
    es, rename = _fold_edges(list(pre.edges))

    def root(v: int) -> int:
        while v in rename:
            v = rename[v]
        return v

    es = _prune(es, root(base))
    return _canonicalize(pre.ambient_rank, es, root(base))


def from_generators(gens: list[Word], ambient_rank: int) -> CoreGraph:
    """The core graph of the subgroup generated by `gens` inside F_r."""
    for g in gens:
        if g.ambient_rank > ambient_rank:
            raise ValueError("generator rank exceeds ambient rank")
    pre = PreGraph(ambient_rank)
    for g in gens:
        if not g.is_identity:
            pre.add_word_loop(g)
    return fold(pre)


def rose(ambient_rank: int, labels: list[int] | None = None) -> CoreGraph:
    """The wedge of loops labeled by `labels` (default: every generator)."""
    labels = labels if labels is not None else list(range(1, ambient_rank + 1))
    return CoreGraph(ambient_rank, 1, tuple(sorted((0, lab, 0) for lab in labels)))


# ----------------------------------------------------------------------
# Queries
# ----------------------------------------------------------------------


def contains(H: CoreGraph, w: Word) -> bool:
    """Membership: w traces a loop at the base of Gamma(H)."""
    if w.ambient_rank > H.ambient_rank:
        raise ValueError("word rank exceeds graph rank")
    cur = 0
    for g, s in w.letters:
        nxt = H.out_map.get((cur, g)) if s == 1 else H.in_map.get((cur, g))
        if nxt is None:
            return False
        cur = nxt
    return cur == 0


def morphism(H: CoreGraph, J: CoreGraph) -> list[int] | None:
    """The base-preserving label-preserving graph morphism H -> J, if any.

    For folded graphs the morphism is unique, and it exists iff the
    subgroup of H is contained in the subgroup of J.
    """
    if H.ambient_rank != J.ambient_rank:
        raise ValueError("ambient ranks differ")
    f: list[int | None] = [None] * H.num_vertices
    f[0] = 0
    queue = [0]
    while queue:
        v = queue.pop()
        for lab in range(1, H.ambient_rank + 1):
            for here, there in ((H.out_map, J.out_map), (H.in_map, J.in_map)):
                w = here.get((v, lab))
                if w is None:
                    continue
                target = there.get((f[v], lab))
                if target is None:
                    return None
                if f[w] is None:
                    f[w] = target
                    queue.append(w)
                elif f[w] != target:
                    return None
    return f  # type: ignore[return-value]


def subgroup_leq(H: CoreGraph, J: CoreGraph) -> bool:
    return morphism(H, J) is not None


def _spanning_tree(H: CoreGraph) -> tuple[list[tuple[Letter_, int] | None], list[Edge]]:
    """BFS spanning tree in canonical order.

    Returns per-vertex (incoming tree step, parent) and the ordered list of
    non-tree edges.  A tree step is ((label, sign), parent): sign +1 means
    the tree edge points parent -> v.
    """
    parent: list[tuple[tuple[int, int], int] | None] = [None] * H.num_vertices
    seen = [False] * H.num_vertices
    seen[0] = True
    order = [0]
    i = 0
    tree_edges: set[Edge] = set()
    while i < len(order):
        v = order[i]
        for lab in range(1, H.ambient_rank + 1):
            w = H.out_map.get((v, lab))
            if w is not None and not seen[w]:
                seen[w] = True
                parent[w] = ((lab, 1), v)
                tree_edges.add((v, lab, w))
                order.append(w)
            u = H.in_map.get((v, lab))
            if u is not None and not seen[u]:
                seen[u] = True
                parent[u] = ((lab, -1), v)
                tree_edges.add((u, lab, v))
                order.append(u)
        i += 1
    non_tree = [e for e in H.edges if e not in tree_edges]
    return parent, non_tree


Letter_ = tuple[int, int]


def _path_letters(H: CoreGraph, parent, v: int) -> list[Letter_]:
    """Letters spelling the tree path base -> v."""
    path: list[Letter_] = []
    while v != 0:
        (lab, sign), p = parent[v]
        path.append((lab, sign))
        v = p
    path.reverse()
    return path


def basis(H: CoreGraph) -> list[Word]:
    """A deterministic free basis of H (one word per non-tree edge)."""
    parent, non_tree = _spanning_tree(H)
    out = []
    for u, lab, v in non_tree:
        letters = (
            _path_letters(H, parent, u)
            + [(lab, 1)]
            + [(g, -s) for g, s in reversed(_path_letters(H, parent, v))]
        )
        out.append(Word(H.ambient_rank, letters=tuple(_free_reduce(letters))))
    return out


def _free_reduce(letters):
    stack = []
    for g, s in letters:
        if stack and stack[-1][0] == g and stack[-1][1] == -s:
            stack.pop()
        else:
            stack.append((g, s))
    return stack


def rewrite_in_basis(J: CoreGraph, w: Word) -> Word:
    """Express w (an element of the subgroup J) as a word in basis(J).

    The result lives in F_k with k = rank(J); tracing the loop of w in
    Gamma(J) and emitting one letter per non-tree edge crossed.
    """
    parent, non_tree = _spanning_tree(J)
    edge_index = {e: i for i, e in enumerate(non_tree)}
    k = max(J.rank, 1)
    cur = 0
    out: list[Letter_] = []
    for g, s in w.letters:
        if s == 1:
            nxt = J.out_map.get((cur, g))
            if nxt is None:
                raise ValueError("word is not an element of the subgroup")
            e = (cur, g, nxt)
            if e in edge_index:
                out.append((edge_index[e] + 1, 1))
        else:
            nxt = J.in_map.get((cur, g))
            if nxt is None:
                raise ValueError("word is not an element of the subgroup")
            e = (nxt, g, cur)
            if e in edge_index:
                out.append((edge_index[e] + 1, -1))
        cur = nxt
    if cur != 0:
        raise ValueError("word is not an element of the subgroup")
    return Word(k, tuple(_free_reduce(out)))


# ----------------------------------------------------------------------
# Quotient enumeration
# ----------------------------------------------------------------------


def _set_partitions(n: int):
    """Restricted-growth-string enumeration of partitions of {0..n-1}."""
    rgs = [0] * n

    def rec(i: int, maxval: int):
        if i == n:
            yield tuple(rgs)
            return
        for b in range(maxval + 2):
            rgs[i] = b
            yield from rec(i + 1, max(maxval, b))

    yield from rec(1, 0) if n > 0 else iter(())


def quotients(H: CoreGraph, vertex_cap: int = DEFAULT_VERTEX_CAP) -> list[CoreGraph]:
    """All folded vertex-identification quotients of Gamma(H), deduplicated.

    These are the candidate overgroups hosting every algebraic extension
    of H.  Bell-number growth is guarded by `vertex_cap`.
    """
    n = H.num_vertices
    if n > vertex_cap:
        raise BudgetExceededError(
            f"quotient enumeration needs {n} vertices, cap is {vertex_cap}"
        )
    if n == 0:
        return [H]
    found: dict[bytes, CoreGraph] = {}
    for rgs in _set_partitions(n):
        edges = [(rgs[u], lab, rgs[v]) for u, lab, v in H.edges]
        es, rename = _fold_edges(edges)

        def root(v: int) -> int:
            while v in rename:
                v = rename[v]
            return v

        es = _prune(es, root(rgs[0]))
        g = _canonicalize(H.ambient_rank, es, root(rgs[0]))
        found.setdefault(g.canonical_key, g)
    return sorted(found.values(), key=lambda g: (len(g.edges), g.canonical_key))


# ----------------------------------------------------------------------
# Export
# ----------------------------------------------------------------------


def to_dot(H: CoreGraph, name: str = "core") -> str:
    lines = [f"digraph {name} {{"]
    lines.append('  v0 [shape=doublecircle, label="v0"];')
    for v in range(1, H.num_vertices):
        lines.append(f'  v{v} [shape=circle, label="v{v}"];')
    for u, lab, v in H.edges:
        letter = chr(ord("a") + lab - 1)
        lines.append(f'  v{u} -> v{v} [label="{letter}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def is_basis_of_ambient(images: list[Word], rank: int) -> bool:
    """Do the given words generate F_rank with the full rose as core graph?"""
    g = from_generators(images, rank)
    return g.is_rose and g.rank == rank
