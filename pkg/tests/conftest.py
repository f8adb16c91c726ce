"""Shared fixtures and independent brute-force oracles.

The oracles recompute, by definition-chasing, quantities the library
computes by faster closure algorithms; tests compare the two routes on
small carriers.  Oracles stay deliberately naive — triple loops over raw
tables — so they cannot share a bug with the code under test.
"""

from __future__ import annotations

import itertools

import pytest

from commwb.varieties import builtin_library

# Per-criterion verdict lines queued by tests/test_acceptance.py; the
# terminal-summary hook below replays them after the run so they are not
# lost to output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def lib():
    return builtin_library()


# ---------------------------------------------------------------------------
# oracle: all congruences by filtering every partition (Bell-number search)


def brute_congruences(alg) -> list[tuple[int, ...]]:
    """Canonical block-id tuples of every congruence, for tiny carriers."""
    n = alg.size

    def assignments(prefix, mx):
        if len(prefix) == n:
            yield tuple(prefix)
            return
        for b in range(mx + 2):
            yield from assignments(prefix + [b], max(mx, b))

    found = set()
    for assign in assignments([0], 0):
        if _compatible(alg, assign):
            first: dict[int, int] = {}
            canon = []
            for i, b in enumerate(assign):
                first.setdefault(b, i)
                canon.append(first[b])
            found.add(tuple(canon))
    return sorted(found)


def _compatible(alg, assign) -> bool:
    n = alg.size
    for op, k in alg.signature.ops:
        if k == 0:
            continue
        t = alg.tables[op]
        for args in itertools.product(range(n), repeat=k):
            v = int(t[args])
            for pos in range(k):
                for y in range(n):
                    if assign[args[pos]] != assign[y]:
                        continue
                    other = list(args)
                    other[pos] = y
                    if assign[int(t[tuple(other)])] != assign[v]:
                        return False
    return True


# ---------------------------------------------------------------------------
# oracle: subgroup machinery by raw table chasing


def brute_generated_subgroup(alg, gens) -> tuple[int, ...]:
    mul, inv = alg.tables["mul"], alg.tables["inv"]
    members = {alg.basepoint} | set(gens)
    while True:
        new = {int(mul[a, b]) for a in members for b in members}
        new |= {int(inv[a]) for a in members}
        if new <= members:
            return tuple(sorted(members))
        members |= new


def brute_binary_commutator(alg, k_members, l_members) -> tuple[int, ...]:
    """Subgroup generated by all commutators k^-1 l^-1 k l."""
    mul, inv = alg.tables["mul"], alg.tables["inv"]
    gens = set()
    for a in k_members:
        for b in l_members:
            gens.add(int(mul[mul[inv[a], inv[b]], mul[a, b]]))
    return brute_generated_subgroup(alg, gens)


def brute_normal_closure(alg, seed_members) -> tuple[int, ...]:
    mul, inv = alg.tables["mul"], alg.tables["inv"]
    seeds = set(seed_members)
    while True:
        conj = {int(mul[mul[g, x], inv[g]])
                for g in range(alg.size) for x in seeds}
        grown = set(brute_generated_subgroup(alg, seeds | conj))
        if grown == seeds:
            return tuple(sorted(grown))
        seeds = grown


# ---------------------------------------------------------------------------
# helpers shared across modules


def meet_congruence_blocks(t1, t2) -> tuple[int, ...]:
    """Canonical block ids of the common refinement of two congruences."""
    keys: dict[tuple[int, int], int] = {}
    out = []
    for i, (x, y) in enumerate(zip(t1.block_id, t2.block_id)):
        out.append(keys.setdefault((x, y), i))
    return tuple(out)


def is_diagonal(theta) -> bool:
    return len(set(theta.block_id)) == theta.parent.size
