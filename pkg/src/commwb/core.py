"""Finite pointed algebras as operation tables.

Everything downstream (commutators, condition checkers) reduces to the
machinery here: subuniverse and congruence generation, products, quotients,
pullbacks, kernels.  Elements are dense indices 0..n-1; the basepoint is the
value of the signature's designated nullary operation (identity element for
groups, top for Heyting semilattices) -- explicit data, never a convention.

All values are immutable after construction and freely shareable; each
operation is a pure function.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .terms import eval_term  # noqa: F401  (re-exported: part of this API)

__all__ = [
    "ValidationError",
    "Signature",
    "FinAlgebra",
    "Hom",
    "Subuniverse",
    "SubalgebraView",
    "Congruence",
    "PointObject",
    "SpanWitness",
    "PulledPoint",
    "eval_term",
    "generate_subuniverse",
    "generate_congruence",
    "congruence_join",
    "product",
    "quotient",
    "check_hom",
    "hom_violations",
    "hom_from_table",
    "identity_hom",
    "zero_hom",
    "compose",
    "kernel_sub",
    "kernel_pair",
    "image_sub",
    "pullback",
    "pullback_point",
    "pullback_congruence",
    "power_closure",
]


class ValidationError(ValueError):
    """A structural invariant failed; ``witness`` locates the violation."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class Signature:
    """Operation symbols with arities plus a designated nullary basepoint."""

    ops: tuple[tuple[str, int], ...]
    basepoint_op: str

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple((str(n), int(k)) for n, k in self.ops))
        names = [n for n, _ in self.ops]
        if len(set(names)) != len(names):
            raise ValidationError(f"duplicate operation names in {names}")
        arities = dict(self.ops)
        if any(k < 0 for k in arities.values()):
            raise ValidationError("negative arity")
        if arities.get(self.basepoint_op) != 0:
            raise ValidationError(
                f"basepoint op {self.basepoint_op!r} must be a nullary operation")

    def arity(self, name: str) -> int:
        for n, k in self.ops:
            if n == name:
                return k
        raise ValidationError(f"unknown operation {name!r}")

    @property
    def op_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.ops)


@dataclass(frozen=True, eq=False)
class FinAlgebra:
    """A finite algebra: one numpy table of shape (size,)*arity per op."""

    signature: Signature
    size: int
    tables: dict
    name: str = ""
    labels: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.size < 1:
            raise ValidationError("pointed algebras need at least one element")
        norm = {}
        for op, k in self.signature.ops:
            if op not in self.tables:
                raise ValidationError(f"missing table for {op!r}")
            t = np.asarray(self.tables[op], dtype=np.int64)
            if t.shape != (self.size,) * k:
                raise ValidationError(
                    f"table for {op!r} has shape {t.shape}, "
                    f"expected {(self.size,) * k}")
            if t.size and (t.min() < 0 or t.max() >= self.size):
                raise ValidationError(f"table entry out of range in {op!r}")
            t.setflags(write=False)
            norm[op] = t
        if set(self.tables) - {op for op, _ in self.signature.ops}:
            raise ValidationError("table for symbol not in signature")
        object.__setattr__(self, "tables", norm)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != self.size:
                raise ValidationError("labels length != size")
            object.__setattr__(self, "labels", labels)

    @property
    def basepoint(self) -> int:
        return int(self.tables[self.signature.basepoint_op][()])

    def op(self, name: str, *args):
        table = self.tables[name]
        if not args:
            return int(table[()])
        out = table[args]
        return int(out) if np.isscalar(out) or out.shape == () else out

    def label(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def label_index(self, text: str) -> int:
        if self.labels and text in self.labels:
            return self.labels.index(text)
        try:
            i = int(text)
        except ValueError:
            raise ValidationError(
                f"{text!r} names no element of {self.name or 'algebra'}")
        if not 0 <= i < self.size:
            raise ValidationError(f"element index {i} out of range")
        return i

    def __repr__(self):
        nm = self.name or "FinAlgebra"
        return f"<{nm}: {self.size} elements, {len(self.signature.ops)} ops>"


@dataclass(frozen=True, eq=False)
class Hom:
    """A tabulated map between algebras of the same signature.

    Validated maps have ``violations == ()``.  The only way to hold a Hom
    with a nonempty violation list is the explicit non-strict constructor
    ``hom_from_table(..., strict=False)`` used for replaying recorded tables
    verbatim; every consumer surfaces those violations rather than hiding
    them.
    """

    dom: FinAlgebra
    cod: FinAlgebra
    map: np.ndarray
    violations: tuple = ()

    def __post_init__(self):
        m = np.asarray(self.map, dtype=np.int64)
        if m.shape != (self.dom.size,):
            raise ValidationError(f"map has shape {m.shape}, expected ({self.dom.size},)")
        if m.size and (m.min() < 0 or m.max() >= self.cod.size):
            raise ValidationError("map value out of range")
        m.setflags(write=False)
        object.__setattr__(self, "map", m)

    def __call__(self, i: int) -> int:
        return int(self.map[i])

    @property
    def is_valid(self) -> bool:
        return not self.violations

    def __repr__(self):
        tag = "" if self.is_valid else f", {len(self.violations)} violations"
        return (f"<Hom {self.dom.name or '?'}->{self.cod.name or '?'} "
                f"{list(self.map)}{tag}>")


@dataclass(frozen=True, eq=False)
class Subuniverse:
    """A subset of a carrier closed under every operation (incl. basepoint)."""

    parent: FinAlgebra
    members: tuple[int, ...]

    def __post_init__(self):
        mem = tuple(sorted(set(int(x) for x in self.members)))
        object.__setattr__(self, "members", mem)
        n = self.parent.size
        if any(not 0 <= x < n for x in mem):
            raise ValidationError("member out of range")
        if self.parent.basepoint not in mem:
            raise ValidationError("subuniverse must contain the basepoint")
        inside = np.zeros(n, dtype=bool)
        inside[list(mem)] = True
        arr = np.asarray(mem)
        for op, k in self.parent.signature.ops:
            table = self.parent.tables[op]
            vals = table[()] if k == 0 else table[np.ix_(*([arr] * k))]
            if not np.all(inside[np.atleast_1d(vals)]):
                bad = np.atleast_1d(vals)[~inside[np.atleast_1d(vals)]][0]
                raise ValidationError(
                    f"not closed under {op!r} (escapes to {int(bad)})",
                    witness=(op, int(bad)))

    def __contains__(self, i: int) -> bool:
        return int(i) in set(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def is_zero(self) -> bool:
        return self.members == (self.parent.basepoint,)

    def issubset(self, other: "Subuniverse") -> bool:
        assert other.parent is self.parent
        return set(self.members) <= set(other.members)

    def label_set(self) -> tuple[str, ...]:
        return tuple(self.parent.label(i) for i in self.members)

    def as_algebra(self, name: str = "") -> "SubalgebraView":
        """Renumber members 0..k-1 and restrict every table."""
        arr = np.asarray(self.members)
        back = np.full(self.parent.size, -1, dtype=np.int64)
        back[arr] = np.arange(len(arr))
        tables = {}
        for op, k in self.parent.signature.ops:
            t = self.parent.tables[op]
            tables[op] = back[t[()]] if k == 0 else back[t[np.ix_(*([arr] * k))]]
        labels = (tuple(self.parent.label(i) for i in self.members)
                  if self.parent.labels else None)
        alg = FinAlgebra(self.parent.signature, len(arr), tables,
                         name=name or f"{self.parent.name}|sub", labels=labels)
        return SubalgebraView(alg, tuple(int(x) for x in arr))

    def inclusion_hom(self) -> Hom:
        view = self.as_algebra()
        return check_hom(view.algebra, self.parent, view.to_parent)


@dataclass(frozen=True, eq=False)
class SubalgebraView:
    """A subuniverse materialized as its own algebra plus the renumbering."""

    algebra: FinAlgebra
    to_parent: tuple[int, ...]

    def position(self, parent_index: int) -> int:
        return self.to_parent.index(parent_index)


@dataclass(frozen=True, eq=False)
class Congruence:
    """Partition of a carrier compatible with every operation.

    Canonical form: ``block_id[i]`` is the least element of i's block.
    """

    parent: FinAlgebra
    block_id: tuple[int, ...]

    def __post_init__(self):
        n = self.parent.size
        bid = tuple(int(x) for x in self.block_id)
        if len(bid) != n:
            raise ValidationError("block_id length != size")
        for i, r in enumerate(bid):
            if not 0 <= r <= i or bid[r] != r:
                raise ValidationError(
                    f"block ids not canonical at element {i}", witness=i)
        object.__setattr__(self, "block_id", bid)
        b = np.asarray(bid)
        for op, k in self.parent.signature.ops:
            if k == 0:
                continue
            t = self.parent.tables[op]
            collapsed = t[np.ix_(*([b] * k))]
            if not np.array_equal(b[collapsed], b[t]):
                bad = np.argwhere(b[collapsed] != b[t])[0]
                raise ValidationError(
                    f"partition not compatible with {op!r}",
                    witness=(op, tuple(int(x) for x in bad)))

    # -- builders ----------------------------------------------------------
    @classmethod
    def delta(cls, algebra: FinAlgebra) -> "Congruence":
        return cls(algebra, tuple(range(algebra.size)))

    @classmethod
    def nabla(cls, algebra: FinAlgebra) -> "Congruence":
        return cls(algebra, (0,) * algebra.size)

    @classmethod
    def from_raw_ids(cls, algebra: FinAlgebra, raw: Sequence[int]) -> "Congruence":
        """Canonicalize an arbitrary labelling into least-member block ids."""
        first: dict[int, int] = {}
        bid = []
        for i, r in enumerate(raw):
            bid.append(first.setdefault(int(r), i))
        return cls(algebra, tuple(bid))

    @classmethod
    def from_blocks(cls, algebra: FinAlgebra, blocks: Iterable[Iterable[int]]
                    ) -> "Congruence":
        raw = [-1] * algebra.size
        for bi, block in enumerate(blocks):
            for x in block:
                if raw[int(x)] != -1:
                    raise ValidationError(f"element {x} in two blocks")
                raw[int(x)] = bi
        if -1 in raw:
            raise ValidationError("blocks do not cover the carrier")
        return cls.from_raw_ids(algebra, raw)

    # -- queries -----------------------------------------------------------
    def related(self, a: int, b: int) -> bool:
        return self.block_id[a] == self.block_id[b]

    def blocks(self) -> tuple[tuple[int, ...], ...]:
        by_root: dict[int, list[int]] = {}
        for i, r in enumerate(self.block_id):
            by_root.setdefault(r, []).append(i)
        return tuple(tuple(by_root[r]) for r in sorted(by_root))

    def block_of(self, a: int) -> tuple[int, ...]:
        r = self.block_id[a]
        return tuple(i for i, x in enumerate(self.block_id) if x == r)

    @property
    def num_blocks(self) -> int:
        return len(set(self.block_id))

    def is_delta(self) -> bool:
        return self.num_blocks == self.parent.size

    def is_nabla(self) -> bool:
        return self.num_blocks == 1

    def spanning_pairs(self) -> tuple[tuple[int, int], ...]:
        """One generating pair (root, i) per non-root element."""
        return tuple((r, i) for i, r in enumerate(self.block_id) if r != i)

    def all_pairs(self) -> tuple[tuple[int, int], ...]:
        """Every related ordered pair, diagonal included."""
        n = self.parent.size
        b = np.asarray(self.block_id)
        eq = b[:, None] == b[None, :]
        return tuple(map(tuple, np.argwhere(eq)))

    def meet(self, other: "Congruence") -> "Congruence":
        assert other.parent is self.parent
        raw = [a * self.parent.size + b
               for a, b in zip(self.block_id, other.block_id)]
        return Congruence.from_raw_ids(self.parent, raw)

    def refines(self, other: "Congruence") -> bool:
        """Every block of self sits inside a block of other."""
        assert other.parent is self.parent
        roots = {}
        for i, r in enumerate(self.block_id):
            o = other.block_id[i]
            if roots.setdefault(r, o) != o:
                return False
        return True


@dataclass(frozen=True, eq=False)
class PointObject:
    """A split epimorphism with a chosen section."""

    total: FinAlgebra
    base: FinAlgebra
    proj: Hom
    sect: Hom

    def __post_init__(self):
        if self.proj.dom is not self.total or self.proj.cod is not self.base:
            raise ValidationError("proj must map total -> base")
        if self.sect.dom is not self.base or self.sect.cod is not self.total:
            raise ValidationError("sect must map base -> total")
        if not np.array_equal(self.proj.map[self.sect.map],
                              np.arange(self.base.size)):
            raise ValidationError("proj o sect is not the identity")


@dataclass(frozen=True, eq=False)
class SpanWitness:
    """A constructed carrier plus its projection legs and any induced maps."""

    carrier: FinAlgebra
    legs: tuple[Hom, ...]
    induced: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class PulledPoint:
    """Result of changing the base of a point: the new point plus the
    comparison hom from its total onto the original total."""

    point: PointObject
    compare: Hom


# ---------------------------------------------------------------------------
# closure machinery


def generate_subuniverse(algebra: FinAlgebra, gens: Iterable[int]) -> Subuniverse:
    """Least subuniverse containing ``gens`` and the basepoint."""
    n = algebra.size
    members = {algebra.basepoint}
    for g in gens:
        g = int(g)
        if not 0 <= g < n:
            raise ValidationError(f"generator {g} out of range")
        members.add(g)
    while True:
        arr = np.asarray(sorted(members))
        new: set[int] = set()
        for op, k in algebra.signature.ops:
            if k == 0:
                continue
            vals = algebra.tables[op][np.ix_(*([arr] * k))]
            new.update(int(v) for v in np.unique(vals))
        if new <= members:
            break
        members |= new
    return Subuniverse(algebra, tuple(sorted(members)))


def generate_congruence(algebra: FinAlgebra,
                        pairs: Iterable[tuple[int, int]]) -> Congruence:
    """Least congruence containing ``pairs``.

    Worklist closure: merging two classes enqueues, for every operation and
    argument position, the single-coordinate substitution consequences over
    all contexts.  Multi-coordinate compatibility follows by chaining.
    """
    n = algebra.size
    root = np.arange(n, dtype=np.int64)
    queue: list[tuple[int, int]] = []
    for a, b in pairs:
        a, b = int(a), int(b)
        if not (0 <= a < n and 0 <= b < n):
            raise ValidationError(f"pair ({a},{b}) out of range")
        queue.append((a, b))

    unary = [(op, algebra.tables[op]) for op, k in algebra.signature.ops if k == 1]
    wider = [(op, k, algebra.tables[op])
             for op, k in algebra.signature.ops if k >= 2]

    while queue:
        a, b = queue.pop()
        ra, rb = int(root[a]), int(root[b])
        if ra == rb:
            continue
        lo, hi = (ra, rb) if ra < rb else (rb, ra)
        root[root == hi] = lo
        for _, t in unary:
            queue.append((int(t[lo]), int(t[hi])))
        for _, k, t in wider:
            for pos in range(k):
                idx_lo = [slice(None)] * k
                idx_hi = [slice(None)] * k
                idx_lo[pos] = lo
                idx_hi[pos] = hi
                va = t[tuple(idx_lo)].ravel()
                vb = t[tuple(idx_hi)].ravel()
                diff = root[va] != root[vb]
                if diff.any():
                    queue.extend(zip(va[diff].tolist(), vb[diff].tolist()))
    return Congruence(algebra, tuple(int(x) for x in root))


def congruence_join(r: Congruence, s: Congruence) -> Congruence:
    assert r.parent is s.parent
    return generate_congruence(r.parent, r.spanning_pairs() + s.spanning_pairs())


# ---------------------------------------------------------------------------
# constructions


def _check_same_signature(a: FinAlgebra, b: FinAlgebra) -> None:
    if a.signature.ops != b.signature.ops or \
            a.signature.basepoint_op != b.signature.basepoint_op:
        raise ValidationError("signature mismatch")


def product(a: FinAlgebra, b: FinAlgebra) -> SpanWitness:
    """Componentwise product; element (x, y) is index x*|B| + y."""
    _check_same_signature(a, b)
    na, nb = a.size, b.size
    n = na * nb
    ai = np.arange(n) // nb
    bi = np.arange(n) % nb
    tables = {}
    for op, k in a.signature.ops:
        ta, tb = a.tables[op], b.tables[op]
        if k == 0:
            tables[op] = np.asarray(int(ta[()]) * nb + int(tb[()]))
        else:
            grid_a = ta[np.ix_(*([ai] * k))]
            grid_b = tb[np.ix_(*([bi] * k))]
            tables[op] = grid_a * nb + grid_b
    labels = None
    if a.labels and b.labels:
        labels = tuple(f"({a.label(int(x))},{b.label(int(y))})"
                       for x, y in zip(ai, bi))
    carrier = FinAlgebra(a.signature, n, tables,
                         name=f"{a.name}x{b.name}" if a.name and b.name else "",
                         labels=labels)
    p1 = check_hom(carrier, a, ai)
    p2 = check_hom(carrier, b, bi)
    return SpanWitness(carrier, (p1, p2))


def quotient(algebra: FinAlgebra, theta: Congruence) -> tuple[FinAlgebra, Hom]:
    """Blocks as elements (representative = least member) + canonical surjection."""
    if theta.parent is not algebra:
        raise ValidationError("congruence belongs to a different algebra")
    reps = sorted(set(theta.block_id))
    index_of = {r: i for i, r in enumerate(reps)}
    qmap = np.asarray([index_of[r] for r in theta.block_id], dtype=np.int64)
    rep_arr = np.asarray(reps)
    m = len(reps)
    tables = {}
    for op, k in algebra.signature.ops:
        t = algebra.tables[op]
        tables[op] = qmap[t[()]] if k == 0 else qmap[t[np.ix_(*([rep_arr] * k))]]
    labels = None
    if algebra.labels:
        blocks = theta.blocks()
        labels = tuple("{" + ",".join(algebra.label(i) for i in blk) + "}"
                       for blk in blocks)
    q_alg = FinAlgebra(algebra.signature, m, tables,
                       name=f"{algebra.name}/~" if algebra.name else "",
                       labels=labels)
    return q_alg, check_hom(algebra, q_alg, qmap)


def hom_violations(dom: FinAlgebra, cod: FinAlgebra,
                   mapping: Sequence[int]) -> list[tuple]:
    """All (op, args, mapped-value, expected-value) preservation failures."""
    _check_same_signature(dom, cod)
    m = np.asarray(mapping, dtype=np.int64)
    out: list[tuple] = []
    for op, k in dom.signature.ops:
        td, tc = dom.tables[op], cod.tables[op]
        if k == 0:
            if int(m[td[()]]) != int(tc[()]):
                out.append((op, (), int(m[td[()]]), int(tc[()])))
            continue
        lhs = m[td]
        rhs = tc[np.ix_(*([m] * k))]
        bad = np.argwhere(lhs != rhs)
        for args in bad:
            args = tuple(int(x) for x in args)
            out.append((op, args, int(lhs[args]), int(rhs[args])))
    return out


def check_hom(dom: FinAlgebra, cod: FinAlgebra, mapping: Sequence[int]) -> Hom:
    """Validate a map table; raises with the first violated (op, args)."""
    bad = hom_violations(dom, cod, mapping)
    if bad:
        op, args, got, want = bad[0]
        arg_text = ",".join(dom.label(a) for a in args)
        raise ValidationError(
            f"map does not preserve {op}({arg_text}): got "
            f"{cod.label(got)}, expected {cod.label(want)}", witness=bad[0])
    return Hom(dom, cod, np.asarray(mapping, dtype=np.int64))


def hom_from_table(dom: FinAlgebra, cod: FinAlgebra, mapping: Sequence[int],
                   strict: bool = True) -> Hom:
    """Build a Hom; with ``strict=False`` a non-preserving table is allowed
    and its violations travel with the map instead of raising."""
    if strict:
        return check_hom(dom, cod, mapping)
    bad = hom_violations(dom, cod, mapping)
    return Hom(dom, cod, np.asarray(mapping, dtype=np.int64),
               violations=tuple(bad))


def identity_hom(algebra: FinAlgebra) -> Hom:
    return Hom(algebra, algebra, np.arange(algebra.size))


def zero_hom(dom: FinAlgebra, cod: FinAlgebra) -> Hom:
    """The constant-to-basepoint map (the zero morphism)."""
    return check_hom(dom, cod, np.full(dom.size, cod.basepoint))


def compose(outer: Hom, inner: Hom) -> Hom:
    """outer after inner."""
    if inner.cod is not outer.dom:
        raise ValidationError("composition mismatch")
    violations = inner.violations + outer.violations
    return Hom(inner.dom, outer.cod, outer.map[inner.map],
               violations=violations)


def kernel_sub(f: Hom) -> Subuniverse:
    """Preimage of the codomain basepoint."""
    members = np.nonzero(f.map == f.cod.basepoint)[0]
    return Subuniverse(f.dom, tuple(int(x) for x in members))


def kernel_pair(f: Hom) -> Congruence:
    return Congruence.from_raw_ids(f.dom, [int(v) for v in f.map])


def image_sub(f: Hom) -> Subuniverse:
    return Subuniverse(f.cod, tuple(int(v) for v in set(f.map.tolist())))


def pullback(f: Hom, g: Hom,
             r: Optional[Hom] = None, s: Optional[Hom] = None) -> SpanWitness:
    """Fibered product of f: A->B and g: C->B over their common codomain.

    When sections r of f and s of g are supplied, the induced maps
    e1 = <1, s o f> and e2 = <r o g, 1> come back under ``induced``.
    """
    if f.cod is not g.cod:
        raise ValidationError("pullback needs a common codomain")
    a_alg, c_alg = f.dom, g.dom
    _check_same_signature(a_alg, c_alg)
    nc = c_alg.size
    members = [(x, y)
               for x in range(a_alg.size) for y in range(nc)
               if f.map[x] == g.map[y]]
    pos = np.full(a_alg.size * nc, -1, dtype=np.int64)
    for i, (x, y) in enumerate(members):
        pos[x * nc + y] = i
    aarr = np.asarray([x for x, _ in members])
    carr = np.asarray([y for _, y in members])
    tables = {}
    for op, k in a_alg.signature.ops:
        ta, tc = a_alg.tables[op], c_alg.tables[op]
        if k == 0:
            code = int(ta[()]) * nc + int(tc[()])
        else:
            code = ta[np.ix_(*([aarr] * k))] * nc + tc[np.ix_(*([carr] * k))]
        t = pos[code]
        assert np.all(np.asarray(t) >= 0), "pullback carrier not closed"
        tables[op] = t
    labels = None
    if a_alg.labels and c_alg.labels:
        labels = tuple(f"({a_alg.label(x)},{c_alg.label(y)})"
                       for x, y in members)
    carrier = FinAlgebra(a_alg.signature, len(members), tables,
                         name=(f"{a_alg.name}xb{c_alg.name}"
                               if a_alg.name and c_alg.name else ""),
                         labels=labels)
    p1 = check_hom(carrier, a_alg, aarr)
    p2 = check_hom(carrier, c_alg, carr)
    induced = {}
    if r is not None and s is not None:
        e1 = pos[np.arange(a_alg.size) * nc + s.map[f.map]]
        e2 = pos[r.map[g.map] * nc + np.arange(nc)]
        if (e1 < 0).any() or (e2 < 0).any():
            raise ValidationError("sections do not land in the pullback")
        induced["e1"] = check_hom(a_alg, carrier, e1)
        induced["e2"] = check_hom(c_alg, carrier, e2)
    return SpanWitness(carrier, (p1, p2), induced)


def pullback_point(p: Hom, pt: PointObject) -> PulledPoint:
    """Change of base of a point along p: E -> B."""
    if pt.base is not p.cod:
        raise ValidationError("point lives over a different base")
    span = pullback(pt.proj, p)
    total = span.carrier
    proj = span.legs[1]
    compare = span.legs[0]
    # section e |-> (sect(p(e)), e)
    nc = p.dom.size
    pos = {(int(compare.map[i]), int(proj.map[i])): i
           for i in range(total.size)}
    sect_map = [pos[(int(pt.sect.map[p.map[e]]), e)] for e in range(nc)]
    point = PointObject(total, p.dom, proj,
                        check_hom(p.dom, total, sect_map))
    return PulledPoint(point, compare)


def pullback_congruence(f: Hom, theta: Congruence) -> Congruence:
    if theta.parent is not f.cod:
        raise ValidationError("congruence lives on a different algebra")
    raw = [theta.block_id[int(v)] for v in f.map]
    return Congruence.from_raw_ids(f.dom, raw)


# ---------------------------------------------------------------------------
# power-algebra closure (no materialized power tables)


def power_closure(algebra: FinAlgebra, seeds: Iterable[Sequence[int]],
                  width: Optional[int] = None) -> np.ndarray:
    """Subalgebra of algebra^m generated by ``seeds``, as a (count, m) array
    of componentwise tuples in encoded-key order.

    Componentwise tables are never materialized; closure proceeds by batch
    index arithmetic (new x all and all x new for binary operations).
    """
    seeds = [tuple(int(x) for x in t) for t in seeds]
    if width is None:
        if not seeds:
            raise ValidationError("power_closure needs seeds or a width")
        width = len(seeds[0])
    m = width
    n = algebra.size
    if any(len(t) != m for t in seeds):
        raise ValidationError("seed width mismatch")
    total = n ** m
    powers = np.array([n ** i for i in reversed(range(m))], dtype=np.int64)

    def encode(arr: np.ndarray) -> np.ndarray:
        return arr @ powers

    def decode(keys: np.ndarray) -> np.ndarray:
        out = np.empty((len(keys), m), dtype=np.int64)
        rem = keys.copy()
        for i in range(m):
            out[:, i] = rem // powers[i]
            rem = rem % powers[i]
        return out

    visited = np.zeros(total, dtype=bool)
    bp_tuple = np.asarray([[algebra.basepoint] * m], dtype=np.int64)
    start = np.concatenate([np.asarray(seeds, dtype=np.int64), bp_tuple]) \
        if seeds else bp_tuple
    keys = np.unique(encode(start))
    visited[keys] = True
    frontier = keys

    unary = [algebra.tables[op] for op, k in algebra.signature.ops if k == 1]
    binary = [algebra.tables[op] for op, k in algebra.signature.ops if k == 2]
    higher = [(algebra.tables[op], k)
              for op, k in algebra.signature.ops if k >= 3]

    while len(frontier):
        all_keys = np.nonzero(visited)[0]
        all_pts = decode(all_keys)
        new_pts = decode(frontier)
        produced = []
        for t in unary:
            produced.append(encode(t[new_pts]))
        for t in binary:
            for left, right in ((new_pts, all_pts), (all_pts, new_pts)):
                vals = t[left[:, None, :], right[None, :, :]]
                produced.append(encode(vals.reshape(-1, m)))
        for t, k in higher:
            # rare (no builtin profile has basic arity >= 3): rescan the full
            # argument grid componentwise instead of tracking newness
            cols = [t[np.ix_(*([all_pts[:, i]] * k))].ravel()
                    for i in range(m)]
            produced.append(encode(np.stack(cols, axis=1)))
        if produced:
            cand = np.unique(np.concatenate(produced))
            fresh = cand[~visited[cand]]
        else:
            fresh = np.empty(0, dtype=np.int64)
        visited[fresh] = True
        frontier = fresh
    return decode(np.nonzero(visited)[0])
