"""Exhaustive verification of ``Coker(g) ≅ Sha(E/K)`` over small abelian groups.

For every abelian G of order at most ``max_order``, every ordered pair of
subgroups meeting trivially, the all-cyclic family and ``families`` seeded
random families are run through :func:`theorem1_certificate`.
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from functools import lru_cache

from .abgroup import FinAbGroup, subgroup_structure
from .obstruction import LocalFamily, make_tower, theorem1_certificate

log = logging.getLogger(__name__)

MAX_RANDOM_PLACES = 4


def abelian_groups_of_order(n):
    """Invariant-factor lists of all abelian groups of order ``n``."""
    out = []

    def rec(rem, largest, acc):
        if rem == 1:
            out.append(FinAbGroup(tuple(reversed(acc))))
            return
        for d in range(2, rem + 1):
            if rem % d == 0 and (largest is None or largest % d == 0):
                rec(rem // d, d, acc + [d])

    rec(n, None, [])
    return sorted(out, key=lambda G: G.invariant_factors)


@lru_cache(maxsize=64)
def all_subgroups(G):
    """Every subgroup of G, each with a short generating set.

    Found by joining one element at a time, so generating sets have at most
    ``G.ngens``-ish elements.  Sorted by (order, elements) for determinism.
    """
    elems = list(G.elements())
    zero = G.zero

    def close(S):
        S = set(S)
        frontier = list(S)
        while frontier:
            new = []
            for a in frontier:
                for b in list(S):
                    c = G.add(a, b)
                    if c not in S:
                        S.add(c)
                        new.append(c)
            frontier = new
        return frozenset(S)

    found = {frozenset([zero]): ()}
    frontier = [frozenset([zero])]
    while frontier:
        nxt = []
        for s in frontier:
            for g in elems:
                if g not in s:
                    t = close(s | {g})
                    if t not in found:
                        found[t] = found[s] + (g,)
                        nxt.append(t)
        frontier = nxt
    subs = sorted(found.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))
    return tuple(subgroup_structure(G, gens) for _, gens in subs)


def cyclic_family(G):
    """One place ``<g>`` for every element g (the all-cyclic family)."""
    return LocalFamily.from_generators(G, [[g] for g in G.elements()])


def random_family(G, subgroups, rng):
    k = rng.randint(1, MAX_RANDOM_PLACES)
    return LocalFamily(G, tuple(rng.choice(subgroups) for _ in range(k)))


@dataclass
class SweepRecord:
    group: tuple
    n1_order: int
    n2_order: int
    family: int
    coker_g: tuple
    sha_E: tuple
    sha_L1: int
    sha_L2: int
    intersection_order: int
    verdict: bool
    failed: tuple

    def exact_sequence_ok(self):
        order_coker = 1
        for d in self.coker_g:
            order_coker *= d
        return self.sha_L1 * self.sha_L2 == self.intersection_order * order_coker


@dataclass
class SweepReport:
    max_order: int
    families: int
    seed: int
    towers: int = 0
    certificates: int = 0
    records: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self):
        return not self.failures


def run_sweep(max_order=32, families=25, seed=0, keep_records=True, progress=None,
              on_record=None):
    """Run the verification sweep.

    ``progress(group, towers_done)`` is called after each group and
    ``on_record(record)`` after each certificate; both are optional.
    """
    report = SweepReport(max_order, families, seed)
    start = time.perf_counter()
    for n in range(1, max_order + 1):
        for G in abelian_groups_of_order(n):
            _sweep_group(G, families, seed, report, keep_records, on_record)
            if progress:
                progress(G, report.towers)
    report.seconds = time.perf_counter() - start
    return report


def _sweep_group(G, families, seed, report, keep_records, on_record=None):
    subs = all_subgroups(G)
    zero = G.zero
    cyc = cyclic_family(G)
    label = list(G.invariant_factors)
    for i, N1 in enumerate(subs):
        for j, N2 in enumerate(subs):
            if N1.element_set & N2.element_set != {zero}:
                continue
            T = make_tower(G, N1, N2)
            report.towers += 1
            rng = random.Random(f"{seed}:{label}:{i}:{j}")
            fams = [cyc] + [random_family(G, subs, rng) for _ in range(families)]
            for f_idx, F in enumerate(fams):
                cert = theorem1_certificate(T, F)
                report.certificates += 1
                s1, s2, sE = cert.sha_L1.order, cert.sha_L2.order, cert.shaE.order
                inter = s1 * s2 // sE if (s1 * s2) % sE == 0 else 0
                rec = SweepRecord(tuple(label), N1.order, N2.order, f_idx,
                                  cert.cokerT.invariant_factors, cert.shaE.invariant_factors,
                                  s1, s2, inter, cert.verdict, cert.failed)
                if not cert.verdict or not rec.exact_sequence_ok():
                    report.failures.append(rec)
                    log.error("certificate failure: %s", rec)
                if keep_records:
                    report.records.append(rec)
                if on_record is not None:
                    on_record(rec)
