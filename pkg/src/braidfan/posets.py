"""Subsets of [n], ordered set partitions of [n], and the maximal chains of
the ordered set partition poset.

Throughout n = d + 1.  Subsets are ``frozenset`` of ints; ordered set
partitions are :class:`OrderedSetPartition`.  Refinement goes upward: the
finest partitions (all singletons) are minimal and the one-block partition
is the top.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Optional, Sequence

from .errors import (
    IndexOutOfRange,
    MalformedChain,
    NotComparableInterval,
    TopOrBottom,
)
from .exactgeom import canonical_ray


# ---------------------------------------------------------------------------
# subsets


def _sep(n: int) -> str:
    return "," if n >= 10 else ""


def subset_str(S: Iterable[int], n: int) -> str:
    """``{1,3}`` prints as "13" (comma separated once n >= 10); ∅ is ""."""
    return _sep(n).join(str(i) for i in sorted(S))


def _parse_elements(text: str, comma: bool) -> list:
    text = text.strip()
    if text == "":
        return []
    parts = text.split(",") if comma else list(text)
    try:
        return [int(p) for p in parts]
    except ValueError as exc:
        raise ValueError(f"bad element list {text!r}") from exc


def parse_subset(text: str, n: int) -> frozenset:
    elems = _parse_elements(text, "," in text or n >= 10)
    S = frozenset(elems)
    if len(S) != len(elems) or any(not 1 <= i <= n for i in S):
        raise ValueError(f"{text!r} is not a subset of [{n}]")
    return S


def all_subsets(d: int, proper: bool = False) -> list:
    """All subsets of [d+1] ordered by (size, sorted elements).  With
    ``proper`` the empty set and [d+1] are dropped."""
    if d < 1:
        raise ValueError("d must be at least 1")
    n = d + 1
    out = []
    for k in range(n + 1):
        if proper and k in (0, n):
            continue
        out.extend(frozenset(c) for c in itertools.combinations(range(1, n + 1), k))
    return out


def e_set_raw(S: Iterable[int], n: int) -> tuple:
    S = set(S)
    return tuple(1 if i in S else 0 for i in range(1, n + 1))


class Ray(NamedTuple):
    raw: tuple
    rep: tuple


def e_set(S: Iterable[int], n: int) -> Ray:
    """The 0/1 indicator of S with its canonical class in R^n/1."""
    S = frozenset(S)
    if not S or len(S) == n:
        raise TopOrBottom("e_S needs a nonempty proper subset")
    if any(not 1 <= i <= n for i in S):
        raise ValueError(f"{sorted(S)} is not a subset of [{n}]")
    raw = e_set_raw(S, n)
    return Ray(raw, canonical_ray(raw))


# ---------------------------------------------------------------------------
# ordered set partitions


@dataclass(frozen=True)
class OrderedSetPartition:
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(x) for x in b)) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        elems = [x for b in blocks for x in b]
        if any(len(b) == 0 for b in blocks):
            raise ValueError("blocks must be nonempty")
        if sorted(elems) != list(range(1, len(elems) + 1)):
            raise ValueError(f"blocks {blocks} do not partition [{len(elems)}]")

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def rank(self) -> int:
        return self.n - len(self.blocks)

    def is_top(self) -> bool:
        return len(self.blocks) == 1

    def is_minimal(self) -> bool:
        return len(self.blocks) == self.n

    def __str__(self) -> str:
        sep = _sep(self.n)
        return "|".join(sep.join(str(x) for x in b) for b in self.blocks)

    def __repr__(self) -> str:
        return f"OSP({str(self)!r})"

    def sort_key(self):
        return (-len(self.blocks), str(self))


def parse_partition(text, n: Optional[int] = None) -> OrderedSetPartition:
    """Parse "34|15|267" (or "3,4|1,5|2,6,7")."""
    if isinstance(text, OrderedSetPartition):
        return text
    comma = "," in text or (n is not None and n >= 10)
    blocks = [_parse_elements(b, comma) for b in text.split("|")]
    T = OrderedSetPartition(tuple(blocks))
    if n is not None and T.n != n:
        raise ValueError(f"{text!r} is a partition of [{T.n}], expected [{n}]")
    return T


def top_partition(n: int) -> OrderedSetPartition:
    return OrderedSetPartition((tuple(range(1, n + 1)),))


def singleton_partition(order: Sequence[int]) -> OrderedSetPartition:
    return OrderedSetPartition(tuple((x,) for x in order))


def _ordered_partitions(elems: tuple):
    if not elems:
        yield ()
        return
    for k in range(1, len(elems) + 1):
        for first in itertools.combinations(elems, k):
            rest = tuple(x for x in elems if x not in first)
            for tail in _ordered_partitions(rest):
                yield (first,) + tail


def all_partitions(d: int, proper: bool = False) -> list:
    """Ordered set partitions of [d+1] in canonical order (#blocks desc,
    then string).  ``proper`` drops the top partition."""
    if d < 1:
        raise ValueError("d must be at least 1")
    n = d + 1
    out = [OrderedSetPartition(p) for p in _ordered_partitions(tuple(range(1, n + 1)))]
    if proper:
        out = [T for T in out if not T.is_top()]
    out.sort(key=OrderedSetPartition.sort_key)
    return out


def e_partition_raw(T: OrderedSetPartition) -> tuple:
    vec = [0] * T.n
    for i, block in enumerate(T.blocks, start=1):
        for x in block:
            vec[x - 1] = i
    return tuple(vec)


def e_partition(T) -> Ray:
    """e_T = sum_i i * e_{S_i} with its canonical class."""
    T = parse_partition(T)
    if T.is_top():
        raise TopOrBottom("e_T is undefined for the top partition")
    raw = e_partition_raw(T)
    return Ray(raw, canonical_ray(raw))


def partition_from_vector(v: Sequence[int]) -> OrderedSetPartition:
    """Inverse of e_T modulo 1: blocks are the level sets of v in increasing
    order of value.  Any vector works; the levels need not be consecutive."""
    levels = sorted(set(v))
    return OrderedSetPartition(tuple(
        tuple(i + 1 for i, x in enumerate(v) if x == lv) for lv in levels))


def structure_type(T) -> tuple:
    T = parse_partition(T)
    out = [0]
    for b in T.blocks:
        out.append(out[-1] + len(b))
    return tuple(out)


def card(T) -> int:
    """<e_T, 1>, with card(top) = n."""
    T = parse_partition(T)
    return sum(i * len(b) for i, b in enumerate(T.blocks, start=1))


# ---------------------------------------------------------------------------
# permutation pairs and maximal chains


def _check_perm(p: Sequence[int], size: int, name: str) -> tuple:
    p = tuple(int(x) for x in p)
    if sorted(p) != list(range(1, size + 1)):
        raise ValueError(f"{name}={list(p)} is not a permutation of [{size}]")
    return p


def inverse_perm(p: Sequence[int]) -> tuple:
    inv = [0] * len(p)
    for i, v in enumerate(p, start=1):
        inv[v - 1] = i
    return tuple(inv)


def parse_perm(text) -> tuple:
    """Accepts [3,2,4,1], "3241" or "3,2,4,1"."""
    if isinstance(text, str):
        text = text.strip()
        parts = text.split(",") if "," in text else list(text)
        return tuple(int(x) for x in parts)
    return tuple(int(x) for x in text)


@dataclass(frozen=True)
class PermPair:
    pi: tuple
    tau: tuple

    def __post_init__(self):
        pi = parse_perm(self.pi)
        n = len(pi)
        object.__setattr__(self, "pi", _check_perm(pi, n, "pi"))
        object.__setattr__(self, "tau", _check_perm(parse_perm(self.tau), n - 1, "tau"))

    @property
    def d(self) -> int:
        return len(self.tau)


def all_perm_pairs(d: int) -> list:
    n = d + 1
    return [PermPair(p, t)
            for p in itertools.permutations(range(1, n + 1))
            for t in itertools.permutations(range(1, n))]


def _from_bars(order: Sequence[int], bars: Iterable[int]) -> OrderedSetPartition:
    """Cut the word ``order`` after each position in ``bars`` (1-based)."""
    cuts = sorted(bars)
    blocks, start = [], 0
    for c in cuts + [len(order)]:
        blocks.append(tuple(order[start:c]))
        start = c
    return OrderedSetPartition(tuple(blocks))


def chain_of(p: PermPair) -> list:
    """Maximal chain T_0 < ... < T_d: start from the singletons in the order
    pi^{-1}(1), ..., pi^{-1}(d+1) with the bar after position i labeled
    tau(i), then remove bars in label order 1, ..., d."""
    order = inverse_perm(p.pi)
    d = p.d
    bars = set(range(1, d + 1))
    tau_inv = inverse_perm(p.tau)
    chain = [_from_bars(order, bars)]
    for r in range(1, d + 1):
        bars.discard(tau_inv[r - 1])
        chain.append(_from_bars(order, bars))
    return chain


def bar_positions(T) -> frozenset:
    """Interior entries of the structure type."""
    return frozenset(structure_type(T)[1:-1])


def pair_of_chain(chain: Sequence) -> PermPair:
    chain = [parse_partition(T) for T in chain]
    if not chain:
        raise MalformedChain("empty chain")
    n = chain[0].n
    d = n - 1
    if len(chain) != d + 1:
        raise MalformedChain(f"a maximal chain in O_{n} has {d + 1} elements, got {len(chain)}")
    if any(T.n != n for T in chain):
        raise MalformedChain("elements partition different ground sets")
    if not chain[0].is_minimal():
        raise MalformedChain(f"{chain[0]} is not a minimal element")
    order = tuple(b[0] for b in chain[0].blocks)
    tau = [0] * d
    prev = set(range(1, d + 1))
    for r, T in enumerate(chain[1:], start=1):
        bars = set(bar_positions(T))
        removed = prev - bars
        if len(removed) != 1 or not bars <= prev or _from_bars(order, bars) != T:
            raise MalformedChain(f"{chain[r - 1]} -> {T} is not a cover")
        tau[removed.pop() - 1] = r
        prev = bars
    return PermPair(inverse_perm(order), tuple(tau))


def gamma(pi: Sequence[int], i: int) -> frozenset:
    """{pi^{-1}(j) : i < j <= d+1}."""
    pi = parse_perm(pi)
    d = len(pi) - 1
    if not 1 <= i <= d:
        raise IndexOutOfRange(f"i={i} outside 1..{d}")
    inv = inverse_perm(pi)
    return frozenset(inv[j - 1] for j in range(i + 1, d + 2))


def braid_chain(pi: Sequence[int]) -> list:
    """The chain Gamma_d ⊂ ... ⊂ Gamma_1 spanning the Braid cone of pi."""
    pi = parse_perm(pi)
    return [gamma(pi, i) for i in range(len(pi) - 1, 0, -1)]


# ---------------------------------------------------------------------------
# order relations and the Boolean intervals


def refines(T, U) -> bool:
    """T <= U: U is obtained from T by merging runs of consecutive blocks."""
    T, U = parse_partition(T), parse_partition(U)
    if T.n != U.n:
        return False
    order = [x for b in T.blocks for x in b]
    return _bars_in(U, order) is not None and bar_positions(T) >= _bars_in(U, order)


def _bars_in(T, order: Sequence[int]) -> Optional[frozenset]:
    """Bar set of T relative to the word ``order`` or None if T is not an
    interval partition of it."""
    pos = 0
    bars = set()
    for b in T.blocks:
        seg = order[pos:pos + len(b)]
        if set(seg) != set(b):
            return None
        pos += len(b)
        bars.add(pos)
    bars.discard(len(order))
    return frozenset(bars)


def covers(T, U) -> bool:
    """U covers T: U merges exactly two adjacent blocks of T."""
    T, U = parse_partition(T), parse_partition(U)
    return len(T.blocks) == len(U.blocks) + 1 and refines(T, U)


def common_base(T, U) -> Optional[tuple]:
    """Lexicographically first word w such that both T and U are interval
    partitions of w, i.e. both lie in the interval above the singleton
    partition of w."""
    T, U = parse_partition(T), parse_partition(U)
    if T.n != U.n:
        return None
    for w in itertools.permutations(range(1, T.n + 1)):
        if _bars_in(T, w) is not None and _bars_in(U, w) is not None:
            return w
    return None


def _interval_bars(T, U, base):
    T, U = parse_partition(T), parse_partition(U)
    if base is None:
        w = common_base(T, U)
    else:
        w = tuple(base)
        if len(w) != T.n:
            raise ValueError("base word has the wrong length")
    if w is None:
        raise NotComparableInterval(f"{T} and {U} lie in no common maximal interval")
    bt, bu = _bars_in(T, w), _bars_in(U, w)
    if bt is None or bu is None:
        raise NotComparableInterval(f"{T} and {U} are not both above {singleton_partition(w)}")
    return w, bt, bu


def join(T, U, base: Optional[Sequence[int]] = None) -> OrderedSetPartition:
    """Join inside the Boolean interval above the singleton partition of
    ``base`` (default: first common one)."""
    w, bt, bu = _interval_bars(T, U, base)
    return _from_bars(w, bt & bu)


def meet(T, U, base: Optional[Sequence[int]] = None) -> OrderedSetPartition:
    w, bt, bu = _interval_bars(T, U, base)
    return _from_bars(w, bt | bu)
