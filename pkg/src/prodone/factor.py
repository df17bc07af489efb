"""Atoms, Davenport constants, divisibility, and sets of lengths.

An atom is a non-empty product-one sequence that does not split into two
non-empty product-one sub-multisets.  Enumeration is by multiset length; for
abelian groups atoms are produced directly from product-one-free sequences
(append the inverse of the sum), which is exact and much faster.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import BudgetExceededError, SequenceError, ValidationFailure
from .groups import Group
from .sequences import (
    PiEngine,
    Sequence,
    iter_multisets_exact,
    iter_submultisets,
)

ATOM_ENUM_BUDGET = 5_000_000  # candidate multisets across all lengths


@dataclass(frozen=True)
class AtomSet:
    group: Group
    support: tuple[int, ...]
    atoms: tuple[Sequence, ...]
    max_length: int

    def by_length(self, length: int) -> tuple[Sequence, ...]:
        return tuple(a for a in self.atoms if a.length == length)

    def __len__(self) -> int:
        return len(self.atoms)


@dataclass(frozen=True)
class DavenportReport:
    group: Group
    support: tuple[int, ...]
    small: int
    large: int
    free_witness: Sequence
    atom_witness: Sequence


@dataclass(frozen=True)
class LengthSet:
    subject: Sequence
    lengths: tuple[int, ...]

    def delta(self) -> tuple[int, ...]:
        ls = self.lengths
        return tuple(ls[i] - ls[i - 1] for i in range(1, len(ls)))

    def min(self) -> int:
        return self.lengths[0]

    def max(self) -> int:
        return self.lengths[-1]


def is_atom(seq: Sequence, engine: Optional[PiEngine] = None) -> bool:
    """Product-one, non-empty, and no proper two-sided product-one split."""
    if seq.length == 0:
        return False
    engine = engine or PiEngine(seq.group)
    return _is_atom_exps(bytes(seq.exps), engine, {})


def _is_atom_exps(key: bytes, engine: PiEngine, cache: dict[bytes, bool]) -> bool:
    got = cache.get(key)
    if got is not None:
        return got
    result = _is_atom_uncached(key, engine)
    cache[key] = result
    return result


def _is_atom_uncached(key: bytes, engine: PiEngine) -> bool:
    if not engine.pi_mask(key) & 1:
        return False
    total = sum(key)
    if total == 1:
        return True
    n = len(key)
    for sub in iter_submultisets(key):
        s = sum(sub)
        if s == 0 or 2 * s > total:
            continue
        if 2 * s == total:
            # avoid scanning both halves of a balanced split twice
            if sub > bytes(key[i] - sub[i] for i in range(n)):
                continue
        if engine.pi_mask(sub) & 1:
            comp = bytes(key[i] - sub[i] for i in range(n))
            if engine.pi_mask(comp) & 1:
                return False
    return True


def _support_indices(group: Group, support) -> tuple[int, ...]:
    if support is None:
        return tuple(range(group.order))
    return tuple(sorted(set(support)))


def _free_frontier(group: Group, support: tuple[int, ...],
                   engine: PiEngine) -> list[list[tuple[bytes, int]]]:
    """Levels of product-one-free multisets over the support.

    Each entry is (exponent vector, union of pi over all sub-multisets).
    Freeness is inherited by sub-multisets, so extending only free multisets
    by elements >= their largest support index enumerates each exactly once.
    """
    n = group.order
    empty = bytes(n)
    levels: list[list[tuple[bytes, int]]] = [[(empty, 1)]]
    # (exps, reach-mask, max index used)
    frontier: list[tuple[bytes, int, int]] = [(empty, 1, 0)]
    while frontier:
        nxt: list[tuple[bytes, int, int]] = []
        for exps, reach, start in frontier:
            for g in support:
                if g < start:
                    continue
                if reach >> group.inv[g] & 1:
                    continue  # some sub-multiset extends to product-one
                ext = bytearray(exps)
                ext[g] += 1
                key = bytes(ext)
                new_reach = reach
                for sub in iter_submultisets(key):
                    new_reach |= engine.pi_mask(sub)
                nxt.append((key, new_reach, g))
        if not nxt:
            break
        levels.append([(e, r) for e, r, _ in nxt])
        frontier = nxt
    return levels


def enumerate_atoms(group: Group, support: Optional[Iterable[int]] = None,
                    engine: Optional[PiEngine] = None,
                    budget: int = ATOM_ENUM_BUDGET) -> AtomSet:
    """All atoms over the support set (default: the whole group)."""
    engine = engine or PiEngine(group)
    sup = _support_indices(group, support)
    if all(group.mul[a][b] == group.mul[b][a] for a in sup for b in sup):
        atoms = _enumerate_atoms_abelian_support(group, sup, engine)
    else:
        atoms = _enumerate_atoms_generic(group, sup, engine, budget)
    atoms.sort(key=lambda s: (s.length, s.exps))
    max_len = max((a.length for a in atoms), default=0)
    return AtomSet(group, sup, tuple(atoms), max_len)


def _enumerate_atoms_abelian_support(group: Group, sup: tuple[int, ...],
                                     engine: PiEngine) -> list[Sequence]:
    # over a commuting support, atoms are exactly (free S) * inverse(sum(S))
    levels = _free_frontier(group, sup, engine)
    seen: set[bytes] = set()
    atoms: list[Sequence] = []
    for level in levels:
        for exps, _ in level:
            prod = 0
            for g, e in enumerate(exps):
                if e:
                    for _ in range(e):
                        prod = group.mul[prod][g]
            g0 = group.inv[prod]
            if g0 not in sup:
                continue
            ext = bytearray(exps)
            ext[g0] += 1
            key = bytes(ext)
            if key not in seen:
                seen.add(key)
                atoms.append(Sequence(group, tuple(key)))
    return atoms


def _enumerate_atoms_generic(group: Group, sup: tuple[int, ...],
                             engine: PiEngine, budget: int) -> list[Sequence]:
    n = group.order
    atoms: list[Sequence] = []
    atom_cache: dict[bytes, bool] = {}
    candidates = 0
    max_len = len(closure_elements(group, sup))
    for length in range(1, max_len + 1):
        for packed in iter_multisets_exact(len(sup), length):
            candidates += 1
            if candidates > budget:
                raise BudgetExceededError(
                    f"atom enumeration exceeded {budget} candidates")
            exps = [0] * n
            for slot, e in enumerate(packed):
                exps[sup[slot]] = e
            key = bytes(exps)
            if not engine.pi_mask(key) & 1:
                continue
            if _is_atom_exps(key, engine, atom_cache):
                atoms.append(Sequence(group, tuple(key)))
    return atoms


def closure_elements(group: Group, sup: tuple[int, ...]) -> tuple[int, ...]:
    """Elements of the subgroup generated by the support (atom length bound)."""
    from .groups import closure_of
    return tuple(sorted(closure_of(group, sup)))


def small_davenport(group: Group, engine: Optional[PiEngine] = None) -> int:
    """Maximal length of a product-one-free sequence over the whole group."""
    engine = engine or PiEngine(group)
    levels = _free_frontier(group, tuple(range(group.order)), engine)
    return len(levels) - 1


def davenport(group: Group, support: Optional[Iterable[int]] = None,
              engine: Optional[PiEngine] = None) -> DavenportReport:
    """Small and large Davenport constants with witnesses.

    The small constant comes from the frontier of product-one-free multisets;
    the large one is the maximal atom length.  For full support the returned
    free witness W of maximal length must satisfy Pi(W) = G \\ {1}.
    """
    engine = engine or PiEngine(group)
    sup = _support_indices(group, support)
    levels = _free_frontier(group, sup, engine)
    small = len(levels) - 1
    free_exps, free_reach = levels[small][0]
    free_witness = Sequence(group, tuple(free_exps))
    full = support is None or sup == tuple(range(group.order))
    if full:
        everything_but_one = ((1 << group.order) - 1) & ~1
        if (free_reach & ~1) != everything_but_one:
            raise ValidationFailure(
                f"maximal product-one-free witness {free_witness.display()} over "
                f"{group.spec} does not reach every non-identity element")
    atom_set = enumerate_atoms(group, support, engine)
    large = atom_set.max_length
    atom_witness = next(a for a in atom_set.atoms if a.length == large)
    if small + 1 > large:
        raise ValidationFailure("small Davenport constant exceeds large - 1")
    return DavenportReport(group, sup, small, large, free_witness, atom_witness)


def divides_in_B(u: Sequence, w: Sequence,
                 engine: Optional[PiEngine] = None) -> bool:
    """Divisibility inside the product-one monoid: u <= w with product-one
    (or empty) complement."""
    engine = engine or PiEngine(u.group)
    if not engine.is_product_one(u):
        raise SequenceError("dividend is not product-one")
    if not engine.is_product_one(w):
        raise SequenceError("divisor target is not product-one")
    if not w.contains(u):
        return False
    rest = w.remove(u)
    return rest.length == 0 or engine.is_product_one(rest)


class FactorizationContext:
    """Shared memoization for sets of lengths over one group.

    With an atom list the recursion only tries listed atoms; without one it
    tests every sub-multiset for atomicity locally (used for one-off long
    sequences where full atom enumeration is out of reach).
    """

    def __init__(self, group: Group, atoms: Optional[AtomSet] = None,
                 engine: Optional[PiEngine] = None):
        self.group = group
        self.engine = engine or PiEngine(group)
        self.atom_list: Optional[list[tuple[bytes, int]]] = None
        if atoms is not None:
            self.atom_list = [(bytes(a.exps), a.support_mask()) for a in atoms.atoms]
        self._lengths: dict[bytes, frozenset[int]] = {}
        self._atom_cache: dict[bytes, bool] = {}

    def lengths(self, seq: Sequence) -> LengthSet:
        if seq.length and not self.engine.is_product_one(seq):
            raise SequenceError("sequence is not product-one")
        ls = self._lengths_of(bytes(seq.exps))
        return LengthSet(seq, tuple(sorted(ls)))

    def min_length(self, seq: Sequence) -> int:
        return self.lengths(seq).min()

    def _lengths_of(self, key: bytes) -> frozenset[int]:
        got = self._lengths.get(key)
        if got is not None:
            return got
        if not sum(key):
            out = frozenset((0,))
            self._lengths[key] = out
            return out
        acc: set[int] = set()
        for sub, comp in self._atom_splits(key):
            for l in self._lengths_of(comp):
                acc.add(1 + l)
        out = frozenset(acc)
        self._lengths[key] = out
        return out

    def _atom_splits(self, key: bytes):
        n = len(key)
        pi = self.engine.pi_mask
        if self.atom_list is not None:
            smask = 0
            for g, e in enumerate(key):
                if e:
                    smask |= 1 << g
            for aexps, amask in self.atom_list:
                if amask & ~smask:
                    continue
                if all(aexps[i] <= key[i] for i in range(n)):
                    comp = bytes(key[i] - aexps[i] for i in range(n))
                    if not sum(comp) or pi(comp) & 1:
                        yield aexps, comp
        else:
            for sub in iter_submultisets(key):
                if not sum(sub):
                    continue
                if _is_atom_exps(sub, self.engine, self._atom_cache):
                    comp = bytes(key[i] - sub[i] for i in range(n))
                    if not sum(comp) or pi(comp) & 1:
                        yield sub, comp

    def count_factorizations(self, seq: Sequence) -> int:
        """Number of distinct factorizations (multisets of atoms)."""
        if self.atom_list is None:
            raise ValueError("counting factorizations requires an atom list")
        if seq.length and not self.engine.is_product_one(seq):
            raise SequenceError("sequence is not product-one")
        memo: dict[tuple[bytes, int], int] = {}

        def count(key: bytes, min_idx: int) -> int:
            if not sum(key):
                return 1
            got = memo.get((key, min_idx))
            if got is not None:
                return got
            n = len(key)
            total = 0
            for idx in range(min_idx, len(self.atom_list)):
                aexps, _ = self.atom_list[idx]
                if all(aexps[i] <= key[i] for i in range(n)):
                    comp = bytes(key[i] - aexps[i] for i in range(n))
                    if not sum(comp) or self.engine.pi_mask(comp) & 1:
                        total += count(comp, idx)
            memo[(key, min_idx)] = total
            return total

        return count(bytes(seq.exps), 0)


def factorization_lengths(seq: Sequence, atoms: Optional[AtomSet] = None,
                          engine: Optional[PiEngine] = None,
                          context: Optional[FactorizationContext] = None) -> LengthSet:
    """L(B): all factorization lengths of a product-one sequence."""
    ctx = context or FactorizationContext(seq.group, atoms, engine)
    return ctx.lengths(seq)
