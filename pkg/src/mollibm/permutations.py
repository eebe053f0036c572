"""Permutations of {0, 1, ..., n} with the cycle utilities the trace
combinatorics is built on.

The distinguished point 0 labels the "matrix slot" of a trace monomial, so
several operations treat the cycle through 0 specially: ``cyc0`` counts the
cycles *not* containing 0 (fixed points count as cycles), and the canonical
cycle form always lists the 0-cycle first.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Perm:
    """A permutation of {0, ..., n}, stored as its image tuple."""

    image: tuple

    def __post_init__(self):
        img = tuple(int(x) for x in self.image)
        object.__setattr__(self, "image", img)
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation of [0,{len(img) - 1}]: {img}")

    @classmethod
    def identity(cls, n):
        return cls(tuple(range(n + 1)))

    @classmethod
    def from_cycles(cls, n, *cycles):
        """Build from disjoint cycles; omitted points are fixed."""
        img = list(range(n + 1))
        seen = set()
        for cyc in cycles:
            cyc = tuple(cyc)
            if seen & set(cyc):
                raise ValueError("cycles are not disjoint")
            seen |= set(cyc)
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + 1) % len(cyc)]
        return cls(tuple(img))

    @property
    def n(self):
        return len(self.image) - 1

    def __call__(self, i):
        return self.image[i]

    def inverse(self):
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Perm(tuple(inv))

    def cycles(self):
        """Canonical cycle decomposition: each cycle starts at its minimum,
        cycles sorted by minimum, fixed points included."""
        seen = set()
        out = []
        for start in range(len(self.image)):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            j = self.image[start]
            while j != start:
                cyc.append(j)
                seen.add(j)
                j = self.image[j]
            out.append(tuple(cyc))
        return out

    def cycle_string(self):
        sep = "" if self.n <= 9 else " "
        return "".join("(" + sep.join(str(x) for x in cyc) + ")" for cyc in self.cycles())

    def cyc0(self):
        """Number of cycles not containing 0 (fixed points count)."""
        return len(self.cycles()) - 1

    def zero_cycle(self):
        return self.cycles()[0]

    def cycle_type_key(self):
        """(length of the 0-cycle minus one, descending lengths of the other
        cycles).  Trace monomials in a single matrix argument are determined
        by this key alone."""
        cycs = self.cycles()
        rest = tuple(sorted((len(c) for c in cycs[1:]), reverse=True))
        return (len(cycs[0]) - 1, rest)

    def __repr__(self):
        return f"Perm{self.cycle_string()}"


def compose(p: Perm, q: Perm) -> Perm:
    """(p o q)(i) = p(q(i))."""
    if p.n != q.n:
        raise ValueError(f"size mismatch: {p.n} vs {q.n}")
    return Perm(tuple(p.image[q.image[i]] for i in range(p.n + 1)))


def restrict_relabel(p: Perm, removed) -> Perm:
    """Delete the points of `removed` from the cycles of p (skipping them
    inside each cycle), then relabel the survivors order-preservingly onto
    {0, ..., m}.

    Example: deleting {2, 5} from the cycle (1 3 5 2 4) leaves (1 3 4),
    which relabels to (1 2 3) on a 5-point ground set containing 0.
    """
    removed = set(removed)
    if not removed <= set(range(1, p.n + 1)):
        raise ValueError("can only remove points of {1,...,n}")
    kept = [i for i in range(p.n + 1) if i not in removed]
    relabel = {x: idx for idx, x in enumerate(kept)}
    img = []
    for i in kept:
        j = p.image[i]
        while j in removed:
            j = p.image[j]
        img.append(relabel[j])
    return Perm(tuple(img))
