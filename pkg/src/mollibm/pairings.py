"""Partitions of {1,...,n} into singletons and pairs, pairings of several
blocks, and the contraction that turns a trace monomial index into a smaller
one.

A partition pi acts on {0,...,n} as the permutation that transposes each
pair and fixes everything else; composing with a permutation alpha and
deleting the paired points yields the contracted index.  The weight of the
contraction is a power of 1/N measured by cycle counts:

    exponent a = cyc0(restriction of pi*alpha) - cyc0(pi*alpha) + (#pairs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .permutations import Perm, compose, restrict_relabel


@dataclass(frozen=True)
class Partition12:
    """Partition of {1,...,n} into blocks of size 1 or 2."""

    n: int
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(sorted(tuple(sorted(b)) for b in self.blocks))
        object.__setattr__(self, "blocks", blocks)
        flat = [x for b in blocks for x in b]
        if sorted(flat) != list(range(1, self.n + 1)):
            raise ValueError(f"blocks do not partition [1,{self.n}]: {blocks}")
        if any(len(b) not in (1, 2) for b in blocks):
            raise ValueError("blocks must have size 1 or 2")

    @property
    def pairs(self):
        return tuple(b for b in self.blocks if len(b) == 2)

    @property
    def singletons(self):
        return tuple(b[0] for b in self.blocks if len(b) == 1)

    @property
    def support(self):
        """Points lying in pairs."""
        return frozenset(x for b in self.pairs for x in b)

    @property
    def num_pairs(self):
        return len(self.pairs)

    def partner(self, i):
        for a, b in self.pairs:
            if i == a:
                return b
            if i == b:
                return a
        return None

    def as_perm(self) -> Perm:
        """Action on {0,...,n}: pairs become transpositions, the rest fixed."""
        img = list(range(self.n + 1))
        for a, b in self.pairs:
            img[a], img[b] = img[b], img[a]
        return Perm(tuple(img))

    def label(self):
        if not self.pairs:
            return "id"
        sep = "" if self.n <= 9 else " "
        return "".join("(" + sep.join(str(x) for x in b) + ")" for b in self.blocks)

    def __repr__(self):
        return f"Partition12[{self.label()}]"


@dataclass(frozen=True)
class Contraction:
    """Result of contracting a trace index by a singleton/pair partition."""

    beta: Perm
    inv_n_exponent: int  # weight (1/N)^a; may be negative
    num_pairs: int


def contract(alpha: Perm, pi: Partition12) -> Contraction:
    """Contract the index permutation alpha on {0,...,n} by pi."""
    if alpha.n != pi.n:
        raise ValueError("alpha and pi live on different ground sets")
    pa = compose(pi.as_perm(), alpha)
    beta = restrict_relabel(pa, pi.support)
    a = beta.cyc0() - pa.cyc0() + pi.num_pairs
    return Contraction(beta=beta, inv_n_exponent=a, num_pairs=pi.num_pairs)


MAX_PARTITION_N = 14
MAX_PAIRING_POINTS = 24


def enumerate_partition12(n):
    """All partitions of {1,...,n} into singletons and pairs, in a fixed
    deterministic order.  Their number satisfies the involution recurrence
    I(n) = I(n-1) + (n-1) I(n-2)."""
    if n > MAX_PARTITION_N:
        raise ValueError(f"n={n} exceeds enumeration cap {MAX_PARTITION_N}")

    out = []

    def rec(remaining, blocks):
        if not remaining:
            out.append(Partition12(n, tuple(blocks)))
            return
        first, rest = remaining[0], remaining[1:]
        rec(rest, blocks + [(first,)])
        for i, other in enumerate(rest):
            rec(rest[:i] + rest[i + 1:], blocks + [(first, other)])

    rec(list(range(1, n + 1)), [])
    return out


def block_index(i, n):
    """1-based index of the length-n block containing point i of {1,...,nk}."""
    return (i - 1) // n + 1


def enumerate_inhomogeneous_pairings(n, k):
    """All perfect pairings of {1,...,nk} in which no pair falls inside a
    single length-n block."""
    points = n * k
    if points % 2 == 1:
        raise ValueError("odd number of points admits no perfect pairing")
    if points > MAX_PAIRING_POINTS:
        raise ValueError(f"nk={points} exceeds enumeration cap {MAX_PAIRING_POINTS}")

    out = []

    def rec(remaining, pairs):
        if not remaining:
            out.append(Partition12(points, tuple(pairs)))
            return
        first, rest = remaining[0], remaining[1:]
        b = block_index(first, n)
        for i, other in enumerate(rest):
            if block_index(other, n) == b:
                continue
            rec(rest[:i] + rest[i + 1:], pairs + [(first, other)])

    rec(list(range(1, points + 1)), [])
    return out


def induced_block_matching(pi: Partition12, n, k):
    """If every length-n block of [nk] is completely paired with exactly one
    other block, return the induced perfect matching on blocks (list of
    (j, l) with j < l); otherwise return None."""
    partners = {}
    for a, b in pi.pairs:
        ba, bb = block_index(a, n), block_index(b, n)
        partners.setdefault(ba, set()).add(bb)
        partners.setdefault(bb, set()).add(ba)
    matching = set()
    for j in range(1, k + 1):
        p = partners.get(j, set())
        if len(p) != 1:
            return None
        matching.add((min(j, *p), max(j, *p)))
    return sorted(matching)


def is_block_complete(pi: Partition12, n, k):
    return induced_block_matching(pi, n, k) is not None


def is_noncrossing_matching(matching):
    """True if no two pairs (a,b), (c,d) of the matching interleave."""
    for i, (a, b) in enumerate(matching):
        for c, d in matching[i + 1:]:
            if a < c < b < d or c < a < d < b:
                return False
    return True


def is_block_rigid_noncrossing(pi: Partition12, n, k):
    """Equality case of the cycle-count bound: the induced block matching is
    non-crossing and each matched block pair (j, l), j < l, is paired in
    reversed order, pi((j-1)n + r) = ln + 1 - r for r = 1..n."""
    matching = induced_block_matching(pi, n, k)
    if matching is None or not is_noncrossing_matching(matching):
        return False
    for j, l in matching:
        for r in range(1, n + 1):
            if pi.partner((j - 1) * n + r) != l * n + 1 - r:
                return False
    return True


def enumerate_block_complete_pairings(n, k):
    """All inhomogeneous pairings whose blocks pair up completely: a perfect
    matching of the k blocks together with a bijection inside each matched
    block pair.  There are (k-1)!! * (n!)^(k/2) of them."""
    if k % 2 == 1:
        return []

    matchings = []

    def match_rec(blocks, acc):
        if not blocks:
            matchings.append(list(acc))
            return
        first, rest = blocks[0], blocks[1:]
        for i, other in enumerate(rest):
            match_rec(rest[:i] + rest[i + 1:], acc + [(first, other)])

    match_rec(list(range(1, k + 1)), [])

    import itertools

    out = []
    for matching in matchings:
        per_pair_choices = []
        for j, l in matching:
            left = [(j - 1) * n + r for r in range(1, n + 1)]
            right = [(l - 1) * n + r for r in range(1, n + 1)]
            per_pair_choices.append(
                [tuple(zip(left, perm)) for perm in itertools.permutations(right)]
            )
        for combo in itertools.product(*per_pair_choices):
            pairs = tuple(p for group in combo for p in group)
            out.append(Partition12(n * k, pairs))
    return out


def enumerate_pair_partitions(n):
    """All perfect pairings of {1,...,n} (no block restriction)."""
    if n % 2 == 1:
        return []
    if n > MAX_PAIRING_POINTS:
        raise ValueError(f"n={n} exceeds enumeration cap {MAX_PAIRING_POINTS}")

    out = []

    def rec(remaining, pairs):
        if not remaining:
            out.append(Partition12(n, tuple(pairs)))
            return
        first, rest = remaining[0], remaining[1:]
        for i, other in enumerate(rest):
            rec(rest[:i] + rest[i + 1:], pairs + [(first, other)])

    rec(list(range(1, n + 1)), [])
    return out


def catalan(p):
    if p > 15:
        raise ValueError("p too large")
    return math.comb(2 * p, p) // (p + 1)


def involution_count(n):
    """I(n) = number of partitions of [n] into singletons and pairs."""
    a, b = 1, 1  # I(0), I(1)
    if n == 0:
        return 1
    for m in range(2, n + 1):
        a, b = b, b + (m - 1) * a
    return b
