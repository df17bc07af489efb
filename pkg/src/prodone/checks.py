"""Structural verdicts: two-atom splitting (Property P), seminormality,
Krull/root-closure, and divisor-closed closures.

Verdicts are three-valued.  A False verdict always carries a machine-checked
witness; a True verdict carries either a reason valid for the whole class of
groups or an exhausted complete search; anything else is reported as unknown
up to the bound actually searched.

Membership of a sequence S in the quotient group of the product-one monoid
is decided by a coset test: S belongs to it exactly when every product of S
lands in the commutator subgroup (the products of any sequence fill part of
a single commutator coset, and product-one multiples shift it to the trivial
coset; appending the inverse of one product gives the converse).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import BudgetExceededError
from .factor import FactorizationContext, _is_atom_exps, divides_in_B, is_atom
from .groups import Group, analyze
from .sequences import (
    PiEngine,
    Sequence,
    iter_multisets,
    iter_multisets_exact,
    iter_submultisets,
)

PROPERTY_P_BUDGET = 2_000_000


@dataclass(frozen=True)
class Verdict:
    property: str
    holds: Optional[bool]          # None = unknown up to the bound
    reason: str
    bound: Optional[int] = None
    witness: Optional[dict] = None

    def as_dict(self) -> dict:
        out = {
            "property": self.property,
            "holds": self.holds,
            "reason": self.reason,
            "bound": self.bound,
        }
        if self.witness is not None:
            out["witness"] = {
                k: (str(v) if isinstance(v, Sequence) else v)
                for k, v in self.witness.items()
            }
        return out


class _LocalAtoms:
    """Atom tests memoized on packed exponent vectors."""

    def __init__(self, engine: PiEngine):
        self.engine = engine
        self.cache: dict[bytes, bool] = {}

    def is_atom(self, key: bytes) -> bool:
        return _is_atom_exps(key, self.engine, self.cache)


def _splits_into_two_atoms(key: bytes, atoms: _LocalAtoms) -> bool:
    n = len(key)
    total = sum(key)
    for sub in iter_submultisets(key):
        s = sum(sub)
        if s == 0 or 2 * s > total:
            continue
        if 2 * s == total and sub > bytes(key[i] - sub[i] for i in range(n)):
            continue
        if atoms.is_atom(sub):
            comp = bytes(key[i] - sub[i] for i in range(n))
            if atoms.is_atom(comp):
                return True
    return False


def _two_atom_bound_ok(key: bytes, atoms: _LocalAtoms) -> bool:
    """Whether the sequence is an atom or a product of exactly two atoms."""
    return atoms.is_atom(key) or _splits_into_two_atoms(key, atoms)


def property_P(group: Group, engine: Optional[PiEngine] = None,
               max_len: Optional[int] = None,
               budget: int = PROPERTY_P_BUDGET) -> Verdict:
    """Split one term of an atom into two factors; the result must factor
    into at most two atoms.  Scans atoms by increasing length and stops at
    the first counterexample."""
    engine = engine or PiEngine(group)
    atoms = _LocalAtoms(engine)
    n = group.order
    cap = max_len if max_len is not None else n
    candidates = 0
    ok_cache: dict[bytes, bool] = {}
    for length in range(1, cap + 1):
        for exps in iter_multisets_exact(n, length):
            candidates += 1
            if candidates > budget:
                raise BudgetExceededError(
                    f"two-atom splitting scan exceeded {budget} candidates")
            key = bytes(exps)
            if not engine.pi_mask(key) & 1 or not atoms.is_atom(key):
                continue
            atom_seq = Sequence(group, exps)
            for g in atom_seq.support():
                for h1 in range(n):
                    h2 = group.mul[group.inv[h1]][g]
                    nxt = list(exps)
                    nxt[g] -= 1
                    nxt[h1] += 1
                    nxt[h2] += 1
                    nkey = bytes(nxt)
                    ok = ok_cache.get(nkey)
                    if ok is None:
                        ok = _two_atom_bound_ok(nkey, atoms)
                        ok_cache[nkey] = ok
                    if not ok:
                        split_seq = Sequence(group, tuple(nxt))
                        ctx = FactorizationContext(group, None, engine)
                        lengths = ctx.lengths(split_seq).lengths
                        return Verdict(
                            property="two-atom-splitting",
                            holds=False,
                            reason="splitting a term yields a sequence that "
                                   "needs at least three atoms",
                            bound=cap,
                            witness={
                                "atom": atom_seq,
                                "term": group.name(g),
                                "factors": (group.name(h1), group.name(h2)),
                                "split_sequence": split_seq,
                                "split_lengths": list(lengths),
                            })
    complete = cap >= n
    return Verdict(
        property="two-atom-splitting",
        holds=True if complete else None,
        reason="every split of every atom factors into at most two atoms"
               if complete else "no counterexample up to the length bound",
        bound=cap)


def quotient_group_member_mask(group: Group) -> int:
    """Mask of the commutator subgroup (coset test for quotient membership)."""
    return group.mask_of(analyze(group).commutator.members)


def seminormality(group: Group, length_bound: int = 6,
                  engine: Optional[PiEngine] = None) -> Verdict:
    """Seminormality of the product-one monoid.

    A counterexample is a sequence in the quotient group with square and cube
    product-one but not the sequence itself.  Abelian groups and groups with
    a two-element commutator subgroup are seminormal outright.
    """
    engine = engine or PiEngine(group)
    if group.is_abelian:
        return Verdict("seminormal", True,
                       "abelian: the monoid embeds as a divisor-closed "
                       "saturated submonoid", length_bound)
    comm = analyze(group).commutator.members
    witness = _seminormality_witness(group, engine, length_bound)
    if witness is not None:
        return Verdict("seminormal", False,
                       "witness lies in the quotient group, has product-one "
                       "square and cube, but is not product-one",
                       length_bound, witness)
    if len(comm) == 2:
        return Verdict("seminormal", True,
                       "commutator subgroup of order 2 forces seminormality",
                       length_bound)
    return Verdict("seminormal", None,
                   "no witness up to the length bound", length_bound)


def _seminormality_witness(group: Group, engine: PiEngine,
                           length_bound: int) -> Optional[dict]:
    comm_mask = quotient_group_member_mask(group)
    for exps in iter_multisets(group.order, length_bound):
        if not sum(exps):
            continue
        pm = engine.pi_mask(bytes(exps))
        if pm & ~comm_mask or pm & 1:
            continue
        seq = Sequence(group, exps)
        sq = seq.repeat(2)
        cb = seq.repeat(3)
        if engine.is_product_one(sq) and engine.is_product_one(cb):
            return {"sequence": seq, "square": str(sq), "cube": str(cb)}
    return None


def krull_witness(group: Group, length_bound: int = 6,
                  engine: Optional[PiEngine] = None) -> Verdict:
    """Krull property of the product-one monoid (= root closure here).

    Abelian groups embed by a divisor homomorphism; for non-abelian groups
    the verdict is False and carries both a root-closure failure witness and
    a non-commuting atom that obstructs any transfer to the abelian setting.
    """
    engine = engine or PiEngine(group)
    if group.is_abelian:
        return Verdict("krull", True,
                       "abelian: the embedding into the free monoid is a "
                       "divisor homomorphism", length_bound)
    gh = next((g, h) for g in range(group.order) for h in range(group.order)
              if group.mul[g][h] != group.mul[h][g])
    g, h = gh
    obstruction = Sequence.from_terms(group, [
        g, h, group.inv[g],
        group.mul[group.mul[g][group.inv[h]]][group.inv[g]],
    ])
    if not is_atom(obstruction, engine):
        raise AssertionError("non-commuting obstruction sequence must be an atom")
    witness = _root_closure_witness(group, engine, length_bound)
    wit_dict = {
        "obstruction_atom": obstruction,
        "obstruction_pair": (group.name(g), group.name(h)),
    }
    if witness is not None:
        wit_dict.update(witness)
    return Verdict("krull", False,
                   "non-abelian: not root-closed; witness power is "
                   "product-one while the witness is not",
                   length_bound, wit_dict)


def _root_closure_witness(group: Group, engine: PiEngine,
                          length_bound: int) -> Optional[dict]:
    comm_mask = quotient_group_member_mask(group)
    exponent = group.exponent()
    for exps in iter_multisets(group.order, length_bound):
        if not sum(exps):
            continue
        pm = engine.pi_mask(bytes(exps))
        if pm & ~comm_mask or pm & 1:
            continue
        seq = Sequence(group, exps)
        for k in range(2, exponent + 1):
            if engine.is_product_one(seq.repeat(k)):
                return {"root_witness": seq, "power": k}
    return None


@dataclass(frozen=True)
class ClosureReport:
    support: tuple[int, ...]
    checked: int
    verified: bool


def divisor_closed_closure(group: Group, seqs: Iterable[Sequence],
                           engine: Optional[PiEngine] = None,
                           length_bound: int = 4) -> ClosureReport:
    """Support of the divisor-closed hull generated by product-one inputs.

    The hull is the product-one monoid over the union of supports; this is
    verified at desk scale by dividing every short product-one sequence over
    the support into a product of inputs.
    """
    engine = engine or PiEngine(group)
    seqs = list(seqs)
    for s in seqs:
        if not engine.is_product_one(s):
            raise ValueError("closure inputs must be product-one")
    support: set[int] = set()
    by_element: dict[int, Sequence] = {}
    for s in seqs:
        for g in s.support():
            support.add(g)
            by_element.setdefault(g, s)
    sup = tuple(sorted(support))
    checked = 0
    for exps in iter_multisets(group.order, length_bound):
        if not sum(exps):
            continue
        if any(e and g not in support for g, e in enumerate(exps)):
            continue
        seq = Sequence(group, exps)
        if not engine.is_product_one(seq):
            continue
        bundle = Sequence.empty(group)
        for g in seq.terms():
            bundle = bundle.concat(by_element[g])
        if not divides_in_B(seq, bundle, engine):
            raise AssertionError(
                f"{seq.display()} does not divide its covering product")
        checked += 1
    return ClosureReport(sup, checked, True)
