"""Reduced words, the d-regular tree, and its products.

The d-regular tree is realized as the right Cayley graph of the free product
of d copies of Z/2Z: a vertex is a reduced word over the letters
{0, ..., d-1} (no two consecutive letters equal), the root is the empty
word, and each generator acts by appending its letter, cancelling when it
repeats the last one.  Product graphs attach a second coordinate, either
another tree (TxT) or the integer line (TxZ).

Vertices are plain tuples so they hash fast and never mutate: a tree vertex
is a word, a product vertex is (word, word) or (word, int).  An undirected
edge is keyed canonically as (base, coord, letter) where base is the
endpoint whose changed coordinate is shorter (smaller integer on the Z
coordinate); because generators are involutions the connecting letter reads
the same from either endpoint, so canonicalization is idempotent.
"""

from __future__ import annotations

import random
from typing import Iterator

Word = tuple[int, ...]
ROOT: Word = ()


def apply_letter(w: Word, letter: int) -> Word:
    """Right-multiply the reduced word w by one involutive generator."""
    if w and w[-1] == letter:
        return w[:-1]
    return w + (letter,)


def word_mul(x: Word, y: Word) -> Word:
    """Product of reduced words: concatenate and cancel at the junction."""
    out = list(x)
    for letter in y:
        if out and out[-1] == letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def word_inverse(w: Word) -> Word:
    """Inverse of a reduced word over involutions: its reversal."""
    return w[::-1]


def is_reduced(w: Word, d: int) -> bool:
    if any(not 0 <= a < d for a in w):
        return False
    return all(w[i] != w[i + 1] for i in range(len(w) - 1))


def tree_distance(x: Word, y: Word) -> int:
    """Graph distance |x^-1 y|: total length minus twice the common prefix."""
    k = 0
    for a, b in zip(x, y):
        if a != b:
            break
        k += 1
    return len(x) + len(y) - 2 * k


def sphere_size(d: int, k: int) -> int:
    """Exact number of vertices at distance k from any vertex of the tree.

    1 at k = 0, else d(d-1)^(k-1): the first step has d choices, later
    steps d-1.
    """
    if d < 3:
        raise ValueError("degree must be at least 3")
    if k < 0:
        raise ValueError("radius must be nonnegative")
    if k == 0:
        return 1
    return d * (d - 1) ** (k - 1)


def enumerate_words(d: int, k: int) -> Iterator[Word]:
    """Yield every reduced word of length exactly k, lexicographically."""
    if k == 0:
        yield ()
        return
    stack: list[Word] = [(a,) for a in reversed(range(d))]
    while stack:
        w = stack.pop()
        if len(w) == k:
            yield w
            continue
        last = w[-1]
        for a in reversed(range(d)):
            if a != last:
                stack.append(w + (a,))


def product_ball_size(d: int, r: int, kind: str = "TxT") -> int:
    """Exact vertex count of the product ball {x : |x_1| + |x_2| <= r}."""
    if r < 0:
        raise ValueError("radius must be nonnegative")
    if kind == "TxT":
        second = [sphere_size(d, k) for k in range(r + 1)]
    elif kind == "TxZ":
        second = [1] + [2] * r
    else:
        raise ValueError(f"unknown product kind {kind!r}")
    first = [sphere_size(d, k) for k in range(r + 1)]
    return sum(first[i] * second[j] for i in range(r + 1) for j in range(r + 1 - i))


def connected_subtree_boundary(d: int, vertices) -> int:
    """Number of tree edges with exactly one endpoint in the vertex set.

    For a connected set A this equals (d-2)|A| + 2; for a forest with c
    components, (d-2)|A| + 2c.
    """
    vs = set(vertices)
    out = 0
    for w in vs:
        for a in range(d):
            if apply_letter(w, a) not in vs:
                out += 1
    return out


def nonbacktracking_endpoint(w: Word, k: int, d: int, rng: random.Random) -> Word:
    """Endpoint of a k-step nonbacktracking generator walk started at w.

    First step uniform over the d letters, later steps uniform over the d-1
    letters differing from the previous one; the endpoint is uniform on the
    radius-k sphere around w.  The walk may move toward the root (a step
    cancelling the last letter of the current word is legal as long as it
    does not undo the previous step).
    """
    out = list(w)
    prev = -1
    for _ in range(k):
        if prev < 0:
            a = rng.randrange(d)
        else:
            a = rng.randrange(d - 1)
            if a >= prev:
                a += 1
        if out and out[-1] == a:
            out.pop()
        else:
            out.append(a)
        prev = a
    return tuple(out)


def level_translate(graph, v, spec: tuple[int, int], rng: random.Random):
    """Translate v by a uniform element of the level set L(spec).

    Per coordinate: a nonbacktracking walk of the prescribed length on a
    tree coordinate, a uniformly signed shift on a Z coordinate.  Uniform on
    {u : d(v_i, u_i) = k_i for both i}.
    """
    k1, k2 = spec
    if k1 < 0 or k2 < 0:
        raise ValueError("level spec must be nonnegative")
    if graph.kind == "tree":
        if k2 != 0:
            raise ValueError("a tree vertex has a single coordinate")
        return nonbacktracking_endpoint(v, k1, graph.d, rng)
    a, b = v
    a2 = nonbacktracking_endpoint(a, k1, graph.d, rng)
    if graph.kind == "TxT":
        b2 = nonbacktracking_endpoint(b, k2, graph.d, rng)
    else:
        b2 = b + (k2 if rng.randrange(2) == 0 else -k2)
    return (a2, b2)


def sample_level_point(graph, spec: tuple[int, int], rng: random.Random):
    """Uniform point of the level set L(spec) around the root."""
    return level_translate(graph, graph.root, spec, rng)


class TreeGraph:
    """The d-regular tree; vertices are reduced words."""

    kind = "tree"

    def __init__(self, d: int):
        if d < 3:
            raise ValueError("degree must be at least 3")
        self.d = d
        self.root: Word = ()

    def __repr__(self):
        return f"TreeGraph(d={self.d})"

    def norm(self, v: Word) -> int:
        return len(v)

    def incident(self, v: Word):
        """(edge key, neighbor, coordinate) triples, letters ascending."""
        out = []
        nv = len(v)
        for a in range(self.d):
            u = apply_letter(v, a)
            base = u if len(u) < nv else v
            out.append(((base, 1, a), u, 1))
        return out

    def distance(self, x: Word, y: Word) -> int:
        return tree_distance(x, y)


class ProductOfTrees:
    """T x T: both coordinates are words in the same d-regular tree."""

    kind = "TxT"

    def __init__(self, d: int):
        if d < 3:
            raise ValueError("degree must be at least 3")
        self.d = d
        self.root = ((), ())

    def __repr__(self):
        return f"ProductOfTrees(d={self.d})"

    def norm(self, v) -> int:
        return len(v[0]) + len(v[1])

    def incident(self, v):
        """Neighbors coordinate 1 first, then coordinate 2, letters ascending."""
        a, b = v
        na, nb = len(a), len(b)
        out = []
        for letter in range(self.d):
            a2 = apply_letter(a, letter)
            base = (a2, b) if len(a2) < na else v
            out.append(((base, 1, letter), (a2, b), 1))
        for letter in range(self.d):
            b2 = apply_letter(b, letter)
            base = (a, b2) if len(b2) < nb else v
            out.append(((base, 2, letter), (a, b2), 2))
        return out

    def distance(self, x, y) -> int:
        return tree_distance(x[0], y[0]) + tree_distance(x[1], y[1])


class TreeCrossLine:
    """T x Z: a tree coordinate and an integer coordinate."""

    kind = "TxZ"

    def __init__(self, d: int):
        if d < 3:
            raise ValueError("degree must be at least 3")
        self.d = d
        self.root = ((), 0)

    def __repr__(self):
        return f"TreeCrossLine(d={self.d})"

    def norm(self, v) -> int:
        return len(v[0]) + abs(v[1])

    def incident(self, v):
        """Tree letters ascending, then the Z steps -1, +1.

        A Z edge is keyed from its smaller endpoint with letter +1, so both
        directions canonicalize identically.
        """
        a, n = v
        na = len(a)
        out = []
        for letter in range(self.d):
            a2 = apply_letter(a, letter)
            base = (a2, n) if len(a2) < na else v
            out.append(((base, 1, letter), (a2, n), 1))
        out.append((((a, n - 1), 2, 1), (a, n - 1), 2))
        out.append(((v, 2, 1), (a, n + 1), 2))
        return out

    def distance(self, x, y) -> int:
        return tree_distance(x[0], y[0]) + abs(x[1] - y[1])


def make_graph(kind: str, d: int):
    """Graph factory for the names used in configs and result files."""
    if kind == "tree":
        return TreeGraph(d)
    if kind == "TxT":
        return ProductOfTrees(d)
    if kind == "TxZ":
        return TreeCrossLine(d)
    raise ValueError(f"unknown graph kind {kind!r}")
