"""Incidence structures: Steiner 2-designs, cyclic development, transversal
designs, spreads, subdesign deletion, girth and Pasch counting.

Blocks are stored as sorted tuples of 0-based point indices, and block lists
are kept in lexicographic order, so every construction is reproducible
bit-for-bit across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .fields import field_for_order
from .gf2 import BitMatrix


class DesignError(ValueError):
    """A structure failed verification."""


class BlockSizeError(DesignError):
    def __init__(self, block, expected):
        super().__init__(f"block {block} has size {len(block)}, expected {expected}")
        self.block = tuple(block)
        self.expected = expected


class UncoveredPairError(DesignError):
    def __init__(self, pair):
        super().__init__(f"point pair {pair} is covered by no block")
        self.pair = pair


class DoublyCoveredPairError(DesignError):
    def __init__(self, pair):
        super().__init__(f"point pair {pair} is covered more than once")
        self.pair = pair


@dataclass(frozen=True)
class DesignParams:
    """Parameters of a 2-(v, mu, lambda) design; b and r from Eqs. for a 2-design."""

    v: int
    mu: int
    lam: int
    b: int
    r: int


@dataclass(frozen=True)
class IncidenceStructure:
    """Points 0..v-1 and a family of blocks (sorted tuples, lexicographic order)."""

    v: int
    blocks: tuple[tuple[int, ...], ...]
    labels: Optional[tuple] = None
    provenance: str = ""
    groups: Optional[tuple[tuple[int, ...], ...]] = None  # for GDDs

    def __post_init__(self):
        seen = set()
        for b in self.blocks:
            if list(b) != sorted(set(b)):
                raise DesignError(f"block {b} not sorted/distinct")
            if b and (b[0] < 0 or b[-1] >= self.v):
                raise DesignError(f"block {b} out of range for v={self.v}")
            if b in seen:
                raise DesignError(f"duplicate block {b}")
            seen.add(b)

    @property
    def b(self) -> int:
        return len(self.blocks)

    def point_by_block(self) -> BitMatrix:
        rows = [0] * self.v
        for j, blk in enumerate(self.blocks):
            for p in blk:
                rows[p] |= 1 << j
        return BitMatrix(self.v, self.b, rows)

    def block_by_point(self) -> BitMatrix:
        rows = [0] * self.b
        for j, blk in enumerate(self.blocks):
            for p in blk:
                rows[j] |= 1 << p
        return BitMatrix(self.b, self.v, rows)

    def replication_counts(self) -> list[int]:
        r = [0] * self.v
        for blk in self.blocks:
            for p in blk:
                r[p] += 1
        return r

    def with_blocks(self, blocks: Iterable[tuple[int, ...]], provenance: str) -> IncidenceStructure:
        return IncidenceStructure(
            v=self.v,
            blocks=tuple(sorted(tuple(b) for b in blocks)),
            labels=self.labels,
            provenance=provenance,
        )


@dataclass(frozen=True)
class SpreadPartition:
    """Pairwise disjoint subdesign parts: (point set, indices of their blocks)."""

    parts: tuple[tuple[frozenset, tuple[int, ...]], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for pts, _ in self.parts:
            if seen & pts:
                raise DesignError("spread parts share points")
            seen |= pts

    def __len__(self):
        return len(self.parts)


def check_admissible(v: int, mu: int, lam: int = 1) -> bool:
    """Necessary divisibility conditions for a 2-(v, mu, lam) design."""
    if not (v > mu >= 2 and lam >= 1):
        raise ValueError("need v > mu >= 2 and lambda >= 1")
    return lam * (v - 1) % (mu - 1) == 0 and lam * v * (v - 1) % (mu * (mu - 1)) == 0


def _pair_coverage_counts(S: IncidenceStructure):
    """(pair ids, counts) over all in-block point pairs, via numpy."""
    chunks = []
    for blk in S.blocks:
        a = np.asarray(blk, dtype=np.int64)
        iu, ju = np.triu_indices(len(a), k=1)
        chunks.append(a[iu] * S.v + a[ju])
    if not chunks:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    ids = np.concatenate(chunks)
    return np.unique(ids, return_counts=True)


def verify_steiner(S: IncidenceStructure, mu: int) -> DesignParams:
    """Verify S is an S(2, mu, v): uniform block size, every pair exactly once."""
    for blk in S.blocks:
        if len(blk) != mu:
            raise BlockSizeError(blk, mu)
    ids, counts = _pair_coverage_counts(S)
    over = np.nonzero(counts > 1)[0]
    if over.size:
        pid = int(ids[over[0]])
        raise DoublyCoveredPairError((pid // S.v, pid % S.v))
    total_pairs = S.v * (S.v - 1) // 2
    if ids.size != total_pairs:
        covered = set(int(x) for x in ids)
        for a in range(S.v):
            for b in range(a + 1, S.v):
                if a * S.v + b not in covered:
                    raise UncoveredPairError((a, b))
    bcount = S.v * (S.v - 1) // (mu * (mu - 1))
    r = (S.v - 1) // (mu - 1)
    if len(S.blocks) != bcount:
        raise DesignError(f"block count {len(S.blocks)} != {bcount}")
    return DesignParams(v=S.v, mu=mu, lam=1, b=bcount, r=r)


def verify_partial_steiner(S: IncidenceStructure, mu: int) -> None:
    """Every block has size mu and every pair is covered at most once."""
    for blk in S.blocks:
        if len(blk) != mu:
            raise BlockSizeError(blk, mu)
    ids, counts = _pair_coverage_counts(S)
    over = np.nonzero(counts > 1)[0]
    if over.size:
        pid = int(ids[over[0]])
        raise DoublyCoveredPairError((pid // S.v, pid % S.v))


def build_sts(v: int) -> IncidenceStructure:
    """Steiner triple system of order v (v = 1 or 3 mod 6, v >= 7).

    v = 3 mod 6 uses the Bose construction on an idempotent commutative
    quasigroup over Z_{2n+1}; v = 1 mod 6 uses the Skolem construction on a
    half-idempotent commutative quasigroup over Z_{2n}.  The result is
    verified before returning.
    """
    if v < 7 or v % 6 not in (1, 3):
        raise DesignError(f"no STS({v}): need v = 1 or 3 (mod 6), v >= 7")
    blocks: list[tuple[int, ...]] = []
    if v % 6 == 3:
        n = (v - 3) // 6
        order = 2 * n + 1
        half = n + 1  # inverse of 2 mod (2n+1)
        pt = lambda x, i: 3 * x + i
        for x in range(order):
            blocks.append(tuple(sorted((pt(x, 0), pt(x, 1), pt(x, 2)))))
        for i in range(3):
            for x in range(order):
                for y in range(x + 1, order):
                    z = ((x + y) * half) % order
                    blocks.append(tuple(sorted((pt(x, i), pt(y, i), pt(z, (i + 1) % 3)))))
    else:
        n = (v - 1) // 6
        order = 2 * n

        def circ(s: int) -> int:  # half-idempotent product value for x+y=s
            s %= order
            return s // 2 if s % 2 == 0 else n + (s - 1) // 2

        pt = lambda x, i: 1 + 3 * x + i  # 0 is the infinity point
        for x in range(n):
            blocks.append(tuple(sorted((pt(x, 0), pt(x, 1), pt(x, 2)))))
        for i in range(3):
            for x in range(n):
                blocks.append(tuple(sorted((0, pt(n + x, i), pt(x, (i + 1) % 3)))))
        for i in range(3):
            for x in range(order):
                for y in range(x + 1, order):
                    z = circ(x + y)
                    blocks.append(tuple(sorted((pt(x, i), pt(y, i), pt(z, (i + 1) % 3)))))
    S = IncidenceStructure(v=v, blocks=tuple(sorted(blocks)), provenance=f"sts({v})")
    verify_steiner(S, 3)
    return S


def develop_cyclic(v: int, base_blocks: Sequence[Sequence[int]]) -> IncidenceStructure:
    """Orbits of the base blocks under x -> x+1 (mod v); short orbits deduplicated.

    Verification is the caller's job (the result need not be a design).
    """
    out = set()
    for base in base_blocks:
        base = [x % v for x in base]
        if len(set(base)) != len(base):
            raise DesignError(f"base block {base} has repeated points")
        for s in range(v):
            out.add(tuple(sorted((x + s) % v for x in base)))
    return IncidenceStructure(v=v, blocks=tuple(sorted(out)), provenance=f"cyclic({v})")


def verify_gdd(S: IncidenceStructure, mu: int) -> None:
    """Verify the mu-GDD axioms for S with its group annotation, index one."""
    if S.groups is None:
        raise DesignError("no group annotation")
    seen: set[int] = set()
    for g in S.groups:
        if set(g) & seen:
            raise DesignError("groups overlap")
        seen |= set(g)
    if seen != set(range(S.v)):
        raise DesignError("groups do not partition the points")
    group_of = {}
    for gi, g in enumerate(S.groups):
        for p in g:
            group_of[p] = gi
    for blk in S.blocks:
        if len(blk) != mu:
            raise BlockSizeError(blk, mu)
        gs = [group_of[p] for p in blk]
        if len(set(gs)) != len(gs):
            raise DesignError(f"block {blk} meets a group twice")
    # cross-group pairs exactly once
    ids, counts = _pair_coverage_counts(S)
    if np.any(counts > 1):
        pid = int(ids[np.nonzero(counts > 1)[0][0]])
        raise DoublyCoveredPairError((pid // S.v, pid % S.v))
    covered = set(int(x) for x in ids)
    for a in range(S.v):
        for b in range(a + 1, S.v):
            if group_of[a] != group_of[b] and a * S.v + b not in covered:
                raise UncoveredPairError((a, b))


def build_transversal_design(mu: int, g: int) -> IncidenceStructure:
    """TD(mu, g) from finite-field MOLS: a mu-GDD of type g^mu, index one.

    Points are GF(g) x {0..mu-1} (point = group*g + field element); for each
    (a, b) in GF(g)^2 the block {(a*alpha_i + b, i)} with alpha_i the i-th
    field element.  Requires mu <= g and g a prime power.
    """
    if mu < 2:
        raise DesignError("need mu >= 2")
    F = field_for_order(g)  # raises if not a prime power
    if mu > g:
        raise DesignError(f"mu={mu} > g={g}: no TD via MOLS")
    blocks = []
    for a in range(g):
        for b in range(g):
            # alpha_i is the i-th field element; mu <= g keeps them distinct
            blk = tuple(sorted(i * g + F.add(F.mul(a, i), b) for i in range(mu)))
            blocks.append(blk)
    groups = tuple(tuple(range(i * g, (i + 1) * g)) for i in range(mu))
    S = IncidenceStructure(
        v=mu * g, blocks=tuple(sorted(blocks)), provenance=f"td({mu},{g})", groups=groups
    )
    verify_gdd(S, mu)
    return S


def compose_gdd_spread(
    gdd: IncidenceStructure, filler: IncidenceStructure
) -> tuple[IncidenceStructure, SpreadPartition]:
    """Fill every GDD group with a copy of an S(2, mu, g): an S(2, mu, gt) with
    a Steiner spread whose members are the fillers."""
    if gdd.groups is None:
        raise DesignError("gdd lacks group annotation")
    mu = len(gdd.blocks[0]) if gdd.blocks else 0
    g = len(gdd.groups[0])
    if filler.v != g:
        raise DesignError(f"filler order {filler.v} != group size {g}")
    if any(len(grp) != g for grp in gdd.groups):
        raise DesignError("groups have unequal sizes")
    new_blocks = list(gdd.blocks)
    part_blocks: list[list[tuple[int, ...]]] = []
    for grp in gdd.groups:
        mapping = dict(enumerate(sorted(grp)))
        fb = [tuple(sorted(mapping[p] for p in blk)) for blk in filler.blocks]
        part_blocks.append(fb)
        new_blocks.extend(fb)
    S = IncidenceStructure(
        v=gdd.v,
        blocks=tuple(sorted(new_blocks)),
        provenance=f"gdd_fill({gdd.provenance},{filler.provenance})",
    )
    verify_steiner(S, mu)
    index_of = {blk: i for i, blk in enumerate(S.blocks)}
    parts = tuple(
        (frozenset(grp), tuple(sorted(index_of[blk] for blk in fb)))
        for grp, fb in zip(gdd.groups, part_blocks)
    )
    spread = SpreadPartition(parts=parts)
    verify_spread(S, spread)
    return S, spread


def verify_spread(S: IncidenceStructure, spread: SpreadPartition, mu: Optional[int] = None) -> None:
    """Each part's blocks lie inside its point set and form a Steiner subdesign."""
    for pts, bidx in spread.parts:
        sub_blocks = [S.blocks[i] for i in bidx]
        for blk in sub_blocks:
            if not set(blk) <= pts:
                raise DesignError(f"block {blk} leaves its part")
        sub_mu = mu if mu is not None else (len(sub_blocks[0]) if sub_blocks else 0)
        spts = sorted(pts)
        remap = {p: i for i, p in enumerate(spts)}
        sub = IncidenceStructure(
            v=len(spts),
            blocks=tuple(sorted(tuple(sorted(remap[p] for p in blk)) for blk in sub_blocks)),
            provenance="part",
        )
        if len(spts) > sub_mu:
            verify_steiner(sub, sub_mu)
        elif len(sub_blocks) != 1:
            # trivial subdesign: the single full block
            raise DesignError("trivial part must consist of one block")


def delete_subdesigns(
    S: IncidenceStructure, parts: SpreadPartition, count: int
) -> IncidenceStructure:
    """Remove all blocks of the first `count` spread parts (points retained)."""
    if count < 0 or count > len(parts.parts):
        raise DesignError(f"cannot delete {count} of {len(parts.parts)} parts")
    verify_spread(S, SpreadPartition(parts=parts.parts[:count]))
    drop: set[int] = set()
    for _, bidx in parts.parts[:count]:
        drop |= set(bidx)
    kept = [blk for i, blk in enumerate(S.blocks) if i not in drop]
    return S.with_blocks(kept, provenance=f"{S.provenance}-del{count}")


def tanner_girth(S: IncidenceStructure, cap: int = 16):
    """Girth of the bipartite point/block graph; returns the length or ">=cap".

    Fast paths: a doubly covered pair is a 4-cycle; in a lambda<=1 structure a
    triangle of pairwise-intersecting blocks (3 distinct meeting points) is a
    6-cycle.  The generic capped BFS only runs when neither settles it.
    """
    ids, counts = _pair_coverage_counts(S)
    if np.any(counts > 1):
        return 4
    # lambda <= 1: look for a block triangle -> girth 6
    pair_block: dict[tuple[int, int], int] = {}
    for j, blk in enumerate(S.blocks):
        for x in range(len(blk)):
            for y in range(x + 1, len(blk)):
                pair_block[(blk[x], blk[y])] = j
    blocks_through: list[list[int]] = [[] for _ in range(S.v)]
    for j, blk in enumerate(S.blocks):
        for p in blk:
            blocks_through[p].append(j)
    for p in range(S.v):
        bs = blocks_through[p]
        for a in range(len(bs)):
            for bb in range(a + 1, len(bs)):
                B1, B2 = S.blocks[bs[a]], S.blocks[bs[bb]]
                for q in B1:
                    if q == p:
                        continue
                    for r in B2:
                        if r == p or r == q:
                            continue
                        key = (q, r) if q < r else (r, q)
                        j3 = pair_block.get(key)
                        if j3 is not None and j3 != bs[a] and j3 != bs[bb]:
                            return 6
    # generic capped BFS from every point vertex
    from collections import deque

    best = None
    adj_p = blocks_through
    adj_b = [list(blk) for blk in S.blocks]
    nb = len(S.blocks)
    for s in range(S.v):
        dist = {("p", s): 0}
        parent = {("p", s): None}
        dq = deque([("p", s)])
        while dq:
            kind, u = dq.popleft()
            du = dist[(kind, u)]
            if best is not None and 2 * du >= best:
                break
            nbrs = (("b", w) for w in adj_p[u]) if kind == "p" else (("p", w) for w in adj_b[u])
            for wnode in nbrs:
                if wnode == parent[(kind, u)]:
                    continue
                if wnode in dist:
                    cyc = du + dist[wnode] + 1
                    if best is None or cyc < best:
                        best = cyc
                else:
                    dist[wnode] = du + 1
                    parent[wnode] = (kind, u)
                    if 2 * dist[wnode] < (best if best is not None else cap):
                        dq.append(wnode)
    if best is not None and best < cap:
        return best
    return f">={cap}"


def count_pasch(S: IncidenceStructure) -> int:
    """Number of Pasch configurations (4 blocks on 6 points) in an STS.

    Equivalently the number of weight-4 codewords of the block-indexed code.
    """
    params = verify_steiner(S, 3)
    if params.v > 100:
        raise DesignError("count_pasch capped at v = 100")
    pair_block: dict[tuple[int, int], int] = {}
    for j, blk in enumerate(S.blocks):
        for x in range(3):
            for y in range(x + 1, 3):
                pair_block[(blk[x], blk[y])] = j

    def through(a: int, b: int) -> Optional[int]:
        return pair_block.get((a, b) if a < b else (b, a))

    count = 0
    nb = len(S.blocks)
    for j1 in range(nb):
        for j2 in range(j1 + 1, nb):
            B1, B2 = S.blocks[j1], S.blocks[j2]
            common = set(B1) & set(B2)
            if len(common) != 1:
                continue
            a = common.pop()
            b, c = [p for p in B1 if p != a]
            d, e = [p for p in B2 if p != a]
            for (x1, y1), (x2, y2) in (((b, d), (c, e)), ((b, e), (c, d))):
                j3 = through(x1, y1)
                if j3 is None or j3 in (j1, j2):
                    continue
                B3 = S.blocks[j3]
                f = next(p for p in B3 if p not in (x1, y1))
                if f in (a, b, c, d, e):
                    continue
                j4 = through(x2, y2)
                if j4 is None or j4 in (j1, j2, j3):
                    continue
                B4 = S.blocks[j4]
                if set(B4) == {x2, y2, f}:
                    count += 1
    assert count % 6 == 0
    return count // 6


def count_pasch_bruteforce(S: IncidenceStructure) -> int:
    """Exhaustive 4-subset Pasch count (oracle for tests; tiny instances only)."""
    from itertools import combinations

    n = 0
    for quad in combinations(range(len(S.blocks)), 4):
        cover: dict[int, int] = {}
        for j in quad:
            for p in S.blocks[j]:
                cover[p] = cover.get(p, 0) + 1
        if len(cover) == 6 and all(c == 2 for c in cover.values()):
            n += 1
    return n
