"""Constructs of a connected hypergraph, the face poset, splits and collapses.

A construct is a rooted tree of pairwise disjoint vertex subsets built by
the recursion: the root carries a nonempty subset X, and for X proper the
subtrees are constructs of the connected components left after removing X.
Constructs are the faces of the hypergraph polytope; the covering relation
of the face poset is a single edge collapse.
"""

from __future__ import annotations

import json

from .errors import (
    CapacityError,
    DisconnectedError,
    InputError,
    InvalidSplitError,
    PropertyViolation,
)
from .hypergraph import Hypergraph, _popcount, _submasks, require_connected

DEFAULT_MAX_FACES = 200_000


class Construct:
    """Immutable decorated rooted tree; children are kept in canonical order.

    The canonical order sorts children by the minimal ground-set element of
    the subtree's decoration union, so equality and hashing treat these as
    the non-planar trees they represent.
    """

    __slots__ = ("decoration", "children", "subtree_union", "_key", "_hash")

    def __init__(self, decoration: int, children=()):
        children = tuple(children)
        union = decoration
        for child in children:
            union |= child.subtree_union
        self.decoration = decoration
        self.children = tuple(
            sorted(children, key=lambda c: c.subtree_union & -c.subtree_union)
        )
        self.subtree_union = union
        self._key = (
            tuple(_bit_positions(decoration)),
            tuple(c._key for c in self.children),
        )
        self._hash = hash(self._key)

    @classmethod
    def empty(cls) -> "Construct":
        """The unique construct of the empty hypergraph."""
        return cls(0, ())

    def __eq__(self, other):
        return isinstance(other, Construct) and self._key == other._key

    def __hash__(self):
        return self._hash

    def sort_key(self):
        return self._key

    def num_nodes(self) -> int:
        return _count_nodes(self)

    def nodes(self):
        """Decorations in preorder, children in canonical order."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def decorations(self):
        return [n.decoration for n in self.nodes()]

    def find(self, decoration: int):
        """Node object carrying `decoration`, or None."""
        for node in self.nodes():
            if node.decoration == decoration:
                return node
        return None

    def to_json(self, h: Hypergraph) -> dict:
        return {
            "decoration": list(h.labels_of(self.decoration)),
            "children": [c.to_json(h) for c in self.children],
        }

    @classmethod
    def from_json(cls, data, h: Hypergraph) -> "Construct":
        if isinstance(data, str):
            data = json.loads(data)
        try:
            decoration = h.mask_of(data["decoration"])
            children = [cls.from_json(c, h) for c in data.get("children", [])]
        except (TypeError, KeyError) as exc:
            raise InputError(f"construct JSON missing field: {exc}") from None
        return cls(decoration, children)

    def __repr__(self):
        return f"Construct<{self._format()}>"

    def _format(self):
        dec = "{" + ",".join(str(p) for p in _bit_positions(self.decoration)) + "}"
        if not self.children:
            return dec
        return dec + "(" + " ".join(c._format() for c in self.children) + ")"


def _bit_positions(mask: int):
    pos = []
    i = 0
    while mask:
        if mask & 1:
            pos.append(i)
        mask >>= 1
        i += 1
    return pos


def _count_nodes(c: Construct) -> int:
    return 1 + sum(_count_nodes(ch) for ch in c.children)


def format_construct(c: Construct, h: Hypergraph) -> str:
    dec = "{" + ",".join(h.labels_of(c.decoration)) + "}"
    if not c.children:
        return dec
    return dec + "{" + ", ".join(format_construct(ch, h) for ch in c.children) + "}"


# -- validation and enumeration ---------------------------------------------


def is_construct(h: Hypergraph, c: Construct) -> bool:
    """Literal recursive validator; the oracle for everything else here."""
    if c.decoration == 0:
        return not c.children and not h.vertices
    if not h.vertices:
        return False
    return _valid_on(h, h.ground_mask, c)


def _valid_on(h: Hypergraph, mask: int, c: Construct) -> bool:
    if c.subtree_union != mask or c.decoration == 0:
        return False
    if c.decoration & ~mask:
        return False
    rest = mask & ~c.decoration
    if rest == 0:
        return not c.children
    comps = _component_masks_within(h, rest)
    if len(comps) != len(c.children):
        return False
    by_union = {child.subtree_union: child for child in c.children}
    if set(by_union) != set(comps):
        return False
    return all(_valid_on(h, comp, by_union[comp]) for comp in comps)


def _component_masks_within(h: Hypergraph, scope: int) -> tuple:
    inner = [m for m in h.edges if not (m & ~scope)]
    remaining = scope
    out = []
    while remaining:
        reached = remaining & -remaining
        while True:
            grown = reached
            for m in inner:
                if m & reached:
                    grown |= m
            if grown == reached:
                break
            reached = grown
        out.append(reached)
        remaining &= ~reached
    return tuple(sorted(out, key=lambda m: m & -m))


def rank(c: Construct, h: Hypergraph) -> int:
    if not is_construct(h, c):
        raise InputError("not a construct of the given hypergraph")
    return len(h) - _count_nodes(c)


def enumerate_constructs(h: Hypergraph) -> tuple:
    """All constructs, sorted by rank descending then canonical tree order."""
    require_connected(h)
    cache: dict[int, tuple] = {}
    out = _enumerate_on(h, h.ground_mask, cache)
    return tuple(sorted(out, key=lambda c: (_count_nodes(c), c.sort_key())))


def _enumerate_on(h: Hypergraph, mask: int, cache: dict) -> list:
    if mask in cache:
        return cache[mask]
    result = []
    for x in _submasks(mask):
        rest = mask & ~x
        if rest == 0:
            result.append(Construct(x))
            continue
        comps = _component_masks_within(h, rest)
        options = [_enumerate_on(h, comp, cache) for comp in comps]
        for combo in _product(options):
            result.append(Construct(x, combo))
    cache[mask] = result
    return result


def _product(option_lists):
    if not option_lists:
        yield ()
        return
    head, *tail = option_lists
    for item in head:
        for rest in _product(tail):
            yield (item,) + rest


# -- splits and collapses -----------------------------------------------------


def split(h: Hypergraph, c: Construct, node: int, x: int, y: int) -> Construct:
    """Replace node `node` by `x` with new child `y`; validator-checked.

    Children of the split node that touch a hyperedge meeting `y` (within
    the component hypergraph the node lives in) move under `y`, the rest
    stay under `x`.
    """
    if x | y != node or x & y or x == 0 or y == 0:
        raise InputError("x, y must partition the node decoration")
    if c.find(node) is None:
        raise InputError("no node with the given decoration")
    result = _split_below(h, h.ground_mask, c, node, x, y)
    if not is_construct(h, result):
        raise InvalidSplitError(
            f"splitting {h.labels_of(node)} into {h.labels_of(x)}|{h.labels_of(y)} "
            "does not yield a construct"
        )
    return result


def _split_below(h, scope, c, node, x, y):
    if c.decoration == node:
        local_edges = [m for m in h.edges if not (m & ~scope)]
        under_y, under_x = [], []
        for child in c.children:
            u = child.subtree_union
            if any(m & u and m & y for m in local_edges):
                under_y.append(child)
            else:
                under_x.append(child)
        return Construct(x, under_x + [Construct(y, under_y)])
    for i, child in enumerate(c.children):
        if child.subtree_union & node == node:
            sub_scope = child.subtree_union
            new_child = _split_below(h, sub_scope, c.children[i], node, x, y)
            children = list(c.children)
            children[i] = new_child
            return Construct(c.decoration, children)
    raise InputError("no node with the given decoration")


def collapse(c: Construct, child_decoration: int) -> Construct:
    """Merge the node `child_decoration` into its parent; always valid."""
    result = _collapse_below(c, child_decoration, at_root=True)
    if result is None:
        raise InputError("no non-root node with the given decoration")
    return result


def _collapse_below(c: Construct, target: int, at_root=False):
    for i, child in enumerate(c.children):
        if child.decoration == target:
            merged = Construct(
                c.decoration | child.decoration,
                c.children[:i] + c.children[i + 1 :] + child.children,
            )
            return merged
        if child.subtree_union & target == target:
            inner = _collapse_below(child, target)
            if inner is None:
                return None
            children = list(c.children)
            children[i] = inner
            return Construct(c.decoration, children)
    return None


def covers_of(h: Hypergraph, c: Construct) -> list:
    """Constructs covered by `c`: every valid single split, each once."""
    out = []
    for node in c.decorations():
        if _popcount(node) < 2:
            continue
        for x in _submasks(node):
            y = node & ~x
            if x == 0 or y == 0:
                continue
            try:
                out.append(split(h, c, node, x, y))
            except InvalidSplitError:
                continue
    return out


# -- face poset ---------------------------------------------------------------


class FacePoset:
    """All constructs plus the bottom face, with the covering relation.

    Faces are indexed 0..n-1 in the canonical order (rank descending, then
    tree order); the bottom face has index n and rank -1.
    """

    def __init__(self, h: Hypergraph, faces, covers):
        self.hypergraph = h
        self.faces = tuple(faces)
        self.covers = tuple(covers)
        self.bottom = len(self.faces)
        self._index = {c: i for i, c in enumerate(self.faces)}
        self._ranks = [len(h) - _count_nodes(c) for c in self.faces]
        self._up = {i: [] for i in range(len(self.faces) + 1)}
        self._down = {i: [] for i in range(len(self.faces) + 1)}
        for low, high in self.covers:
            self._up[low].append(high)
            self._down[high].append(low)

    def index(self, c: Construct) -> int:
        return self._index[c]

    def rank_of(self, i: int) -> int:
        return -1 if i == self.bottom else self._ranks[i]

    def upper_covers(self, i: int) -> tuple:
        return tuple(self._up[i])

    def lower_covers(self, i: int) -> tuple:
        return tuple(self._down[i])

    def le(self, i: int, j: int) -> bool:
        if i == j:
            return True
        seen = {i}
        frontier = [i]
        while frontier:
            nxt = []
            for a in frontier:
                for b in self._up[a]:
                    if b == j:
                        return True
                    if b not in seen and self.rank_of(b) <= self.rank_of(j):
                        seen.add(b)
                        nxt.append(b)
            frontier = nxt
        return False

    def f_vector(self) -> tuple:
        top = max(self._ranks, default=-1)
        counts = [0] * (top + 1)
        for r in self._ranks:
            counts[r] += 1
        return tuple(counts)

    def to_json(self) -> dict:
        h = self.hypergraph
        return {
            "hypergraph": h.to_json(),
            "faces": [f.to_json(h) for f in self.faces],
            "bottom": self.bottom,
            "ranks": list(self._ranks) + [-1],
            "covers": [list(c) for c in self.covers],
        }

    def to_dot(self) -> str:
        h = self.hypergraph
        lines = ["digraph hasse {", "  rankdir=BT;"]
        for i, f in enumerate(self.faces):
            label = format_construct(f, h).replace('"', "'")
            lines.append(f'  n{i} [label="{label}"];')
        lines.append(f'  n{self.bottom} [label="empty"];')
        for low, high in self.covers:
            lines.append(f"  n{low} -> n{high};")
        lines.append("}")
        return "\n".join(lines)


def face_poset(h: Hypergraph, max_faces: int = DEFAULT_MAX_FACES) -> FacePoset:
    require_connected(h)
    faces = enumerate_constructs(h)
    if len(faces) > max_faces:
        raise CapacityError(f"{len(faces)} faces exceed the limit {max_faces}")
    index = {c: i for i, c in enumerate(faces)}
    covers = []
    for i, c in enumerate(faces):
        for low in covers_of(h, c):
            covers.append((index[low], i))
    bottom = len(faces)
    for i, c in enumerate(faces):
        if _count_nodes(c) == len(h):
            covers.append((bottom, i))
    covers.sort()
    return FacePoset(h, faces, covers)


def check_diamond(h: Hypergraph, poset: FacePoset | None = None):
    """Diamond property of the face poset, with a witness on failure.

    For every construct C covered by two constructs C', C'' there must be a
    face D covering both, and every such interval [C, D] must contain
    exactly C' and C'' strictly between.
    """
    poset = poset or face_poset(h)
    n = len(poset.faces)
    for i in range(n):
        ups = poset.upper_covers(i)
        for a_pos, a in enumerate(ups):
            for b in ups[a_pos + 1 :]:
                tops = set(poset.upper_covers(a)) & set(poset.upper_covers(b))
                if not tops:
                    witness = (poset.faces[i], poset.faces[a], poset.faces[b])
                    return False, witness
                for d in tops:
                    middle = set(poset.lower_covers(d)) & set(poset.upper_covers(i))
                    if middle != {a, b}:
                        witness = (poset.faces[i], poset.faces[d], sorted(middle))
                        return False, witness
    return True, None


def assert_diamond(h: Hypergraph, poset: FacePoset | None = None):
    ok, witness = check_diamond(h, poset)
    if not ok:
        raise PropertyViolation("diamond property fails", witness)
