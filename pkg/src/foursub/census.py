"""Brute-force isomorphism-class census over small finite fields.

For a fixed category and dimension vector, enumerate *every* object —
all matrix assignments for a quiver shape, or all subspaces (pairs of
subspaces) for the relation categories — bucket them into isomorphism
classes with a cheap invariant prefilter followed by exact isomorphism
tests, decide indecomposability of one representative per class, and
match each indecomposable class against the canonical tag tables.

The enumeration is deterministic: matrix entries run row-major in the
field's canonical element order, and subspace bases run over reduced
echelon forms ordered by (rank, pivot set, free entries).  The space of
assignments is partitioned by the first matrix's value (respectively
the first relation's echelon shape); partitions are processed
independently and merged in order, with isomorphism re-tested across
partition boundaries, so results are identical for any worker count.
"""

from __future__ import annotations

import functools
import itertools
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Union

from .canon import IndecompTag, classify_indecomposable
from .errors import (
    IndecomposabilityUndecided,
    ShapeError,
    TooLarge,
    UnclassifiedSummand,
    UnmatchedClass,
    UnsupportedField,
)
from .fields import FieldSpec
from .matrices import Matrix, hstack, rref, vstack
from .quivers import QUIVERS, QuiverRep, end_dim, is_indecomposable, is_isomorphic
from .relations import (
    PairRelObj,
    RelObj,
    lrel_hom_basis,
    lrel_is_isomorphic,
    rel_hom_basis,
    rel_is_isomorphic,
)
from . import functors

CensusObject = Union[QuiverRep, RelObj, PairRelObj]

ENUMERATION_GUARD = 10**8
COMPONENT_CAP = 4

_DIMS_LEN = {
    "F": 5,
    "S": 4,
    "D": 3,
    "K": 2,
    "C": 2,
    "LinRel1": 1,
    "PairRel": 2,
}


@dataclass(frozen=True)
class ClassEntry:
    """One isomorphism class: representative, orbit size, verdicts."""

    representative: CensusObject
    orbit_size: int
    indecomposable: bool
    tag: Optional[IndecompTag]

    @property
    def unmatched(self) -> bool:
        """True for an indecomposable class that matched no canonical tag."""
        return self.indecomposable and self.tag is None

    def shape(self) -> tuple:
        return _object_dims(self.representative)


@dataclass(frozen=True)
class CensusReport:
    """Full census of one (category, field, dims) cell."""

    category: str
    field: FieldSpec
    dims: tuple
    total: int
    classes: tuple

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @property
    def num_indecomposable(self) -> int:
        return sum(1 for c in self.classes if c.indecomposable)

    @property
    def unmatched_indices(self) -> tuple:
        return tuple(i for i, c in enumerate(self.classes) if c.unmatched)


# -- sizes and guards -----------------------------------------------------------


def _gaussian_binomial(n: int, r: int, q: int) -> int:
    num, den = 1, 1
    for i in range(r):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _subspace_count(n: int, q: int) -> int:
    return sum(_gaussian_binomial(n, r, q) for r in range(n + 1))


def _quiver_entry_count(category: str, dims) -> int:
    quiver = QUIVERS[category]
    total = 0
    for a in quiver.arrows:
        total += dims[quiver.vertex_index(a.target)] * dims[
            quiver.vertex_index(a.source)
        ]
    return total


def enumeration_size(category: str, field: FieldSpec, dims) -> int:
    """Exact number of objects the census will enumerate."""
    q = field.p
    if category in QUIVERS:
        return q ** _quiver_entry_count(category, dims)
    if category == "LinRel1":
        return _subspace_count(2 * dims[0], q)
    return _subspace_count(dims[0] + dims[1], q) ** 2


def _check_inputs(category: str, field: FieldSpec, dims) -> tuple:
    if category not in _DIMS_LEN:
        raise ShapeError(f"unknown census category {category!r}")
    if field.p is None:
        raise UnsupportedField("census enumeration needs a finite field")
    dims = tuple(int(d) for d in dims)
    if len(dims) != _DIMS_LEN[category]:
        raise ShapeError(
            f"category {category} needs {_DIMS_LEN[category]} dims, got {len(dims)}"
        )
    if any(d < 0 for d in dims):
        raise ShapeError("negative dimension")
    if any(d > COMPONENT_CAP for d in dims):
        raise TooLarge(
            f"dims {dims} exceed the componentwise cap {COMPONENT_CAP}"
        )
    size = enumeration_size(category, field, dims)
    if size > ENUMERATION_GUARD:
        raise TooLarge(
            f"{size} objects at dims {dims} over {field.name} "
            f"exceed the guard {ENUMERATION_GUARD}"
        )
    return dims


# -- enumeration ----------------------------------------------------------------


def _echelon_shapes(n: int):
    """All (rank, pivot-columns) shapes of reduced row echelon forms on n columns."""
    for r in range(n + 1):
        yield from ((r, pivots) for pivots in itertools.combinations(range(n), r))


def _echelon_free_positions(n: int, pivots) -> list:
    """Free (row, col) slots of a reduced echelon form, row-major."""
    pivot_set = set(pivots)
    out = []
    for i, p in enumerate(pivots):
        for j in range(p + 1, n):
            if j not in pivot_set:
                out.append((i, j))
    return out


def _echelon_bases(field: FieldSpec, n: int, shape) -> "itertools.chain":
    """All subspace basis matrices (n rows, rank columns) with the given
    reduced echelon shape; each subspace of k^n appears exactly once."""
    r, pivots = shape
    free = _echelon_free_positions(n, pivots)
    elements = field.elements()
    for values in itertools.product(elements, repeat=len(free)):
        rows = [[field.zero()] * n for _ in range(r)]
        for i, p in enumerate(pivots):
            rows[i][p] = field.one()
        for (i, j), v in zip(free, values):
            rows[i][j] = v
        # transpose: columns of the object basis are the echelon rows
        entries = [rows[i][j] for j in range(n) for i in range(r)]
        yield Matrix(field, n, r, entries)


def _partition_keys(category: str, field: FieldSpec, dims) -> list:
    if category in QUIVERS:
        quiver = QUIVERS[category]
        first = quiver.arrows[0]
        cells = dims[quiver.vertex_index(first.target)] * dims[
            quiver.vertex_index(first.source)
        ]
        return list(itertools.product(field.elements(), repeat=cells))
    n = 2 * dims[0] if category == "LinRel1" else dims[0] + dims[1]
    return list(_echelon_shapes(n))


def _iter_partition(category: str, field: FieldSpec, dims, key):
    """Yield the objects of one partition in canonical order."""
    if category in QUIVERS:
        quiver = QUIVERS[category]
        shapes = [
            (
                dims[quiver.vertex_index(a.target)],
                dims[quiver.vertex_index(a.source)],
            )
            for a in quiver.arrows
        ]
        rest_cells = sum(t * s for t, s in shapes[1:])
        first_rows, first_cols = shapes[0]
        first_mat = Matrix(field, first_rows, first_cols, key)
        for values in itertools.product(field.elements(), repeat=rest_cells):
            mats = [first_mat]
            pos = 0
            for t, s in shapes[1:]:
                mats.append(Matrix(field, t, s, values[pos : pos + t * s]))
                pos += t * s
            yield QuiverRep(field, quiver, dims, mats)
    elif category == "LinRel1":
        d = dims[0]
        for basis in _echelon_bases(field, 2 * d, key):
            yield RelObj._trusted(field, d, d, basis)
    else:
        d1, d2 = dims
        n = d1 + d2
        for basis1 in _echelon_bases(field, n, key):
            for shape2 in _echelon_shapes(n):
                for basis2 in _echelon_bases(field, n, shape2):
                    yield PairRelObj._trusted(field, d1, d2, basis1, basis2)


# -- invariant prefilter ----------------------------------------------------------


def _rank(m: Matrix) -> int:
    return rref(m).rank


def _fingerprint_rep(rep: QuiverRep) -> tuple:
    quiver = rep.quiver
    ranks = tuple(sorted(_rank(rep.mat(a.name)) for a in quiver.arrows))
    pair_ranks = []
    for i, a in enumerate(quiver.arrows):
        for b in quiver.arrows[i + 1 :]:
            if a.target == b.target:
                pair_ranks.append(_rank(hstack(rep.mat(a.name), rep.mat(b.name))))
    return (ranks, tuple(sorted(pair_ranks)), end_dim(rep))


def _neg(m: Matrix) -> Matrix:
    f = m.field
    return Matrix(f, m.rows, m.cols, [f.neg(x) for x in m.entries])


def _match_dim(ta: Matrix, ba: Matrix, tb: Matrix, bb: Matrix) -> int:
    """dim of { (ta u, bb v) : ba u = tb v } — the dimension of a composite
    relation, computed directly from ranks of stacked blocks."""
    f = ta.field
    r1, r2 = ta.cols, tb.cols
    m1 = hstack(ba, _neg(tb))
    m2 = vstack(
        hstack(ta, Matrix.zeros(f, ta.rows, r2)),
        hstack(Matrix.zeros(f, bb.rows, r1), bb),
        m1,
    )
    return rref(m2).rank - rref(m1).rank


def _fingerprint_lrel(x: RelObj) -> tuple:
    top, bottom = x.top, x.bottom
    return (
        x.rel_dim,
        _rank(top),
        _rank(bottom),
        _match_dim(top, bottom, top, bottom),
        _match_dim(top, bottom, bottom, top),
        _match_dim(bottom, top, top, bottom),
        len(lrel_hom_basis(x, x)),
    )


def _fingerprint_pairrel(x: PairRelObj) -> tuple:
    r1, r2 = x.rel1, x.rel2
    t1, b1 = r1.top, r1.bottom
    t2, b2 = r2.top, r2.bottom
    return (
        r1.rel_dim,
        r2.rel_dim,
        _rank(t1),
        _rank(b1),
        _rank(t2),
        _rank(b2),
        _match_dim(t1, b1, b2, t2),
        _match_dim(t2, b2, b1, t1),
        len(rel_hom_basis(x, x)),
    )


# -- GF(2) bit kernels ------------------------------------------------------------
#
# The binary one-relation census is by far the largest enumeration (417 199
# subspaces at space dimension 4), so its fingerprint and isomorphism test
# run on row bitmasks instead of Matrix values.  The bit test is exhaustive
# over morphism-space combinations, hence exact; agreement with the generic
# path is covered by tests.


def _rank_bits(rows) -> int:
    pivots = []
    rank = 0
    for row in rows:
        cur = row
        for bit, prow in pivots:
            if cur & bit:
                cur ^= prow
        if cur:
            pivots.append((cur & -cur, cur))
            rank += 1
    return rank


def _nullspace_bits(rows, width: int) -> list:
    """Basis (ints over `width` bits) of the right kernel of the matrix whose
    rows are the given bitmasks (bit j = column j)."""
    pivot_rows = []  # (pivot_col, reduced_row)
    for row in rows:
        cur = row
        for pc, prow in pivot_rows:
            if (cur >> pc) & 1:
                cur ^= prow
        if cur:
            pc = (cur & -cur).bit_length() - 1
            for idx, (opc, oprow) in enumerate(pivot_rows):
                if (oprow >> pc) & 1:
                    pivot_rows[idx] = (opc, oprow ^ cur)
            pivot_rows.append((pc, cur))
    pivot_cols = {pc for pc, _ in pivot_rows}
    basis = []
    for free in range(width):
        if free in pivot_cols:
            continue
        v = 1 << free
        for pc, prow in pivot_rows:
            if (prow >> free) & 1:
                v |= 1 << pc
        basis.append(v)
    return basis


def _lrel_bits(x: RelObj):
    """Row and column bitmasks of the two coordinate blocks of the basis."""
    d, r = x.dim1, x.rel_dim
    ent = x.basis.entries
    rows_top = [
        sum(1 << b for b in range(r) if ent[i * r + b]) for i in range(d)
    ]
    rows_bottom = [
        sum(1 << b for b in range(r) if ent[(d + i) * r + b]) for i in range(d)
    ]
    cols_top = [
        sum(1 << j for j in range(d) if ent[j * r + b]) for b in range(r)
    ]
    cols_bottom = [
        sum(1 << j for j in range(d) if ent[(d + j) * r + b]) for b in range(r)
    ]
    return rows_top, rows_bottom, cols_top, cols_bottom


@functools.lru_cache(maxsize=1 << 16)
def _ann_bits_of(basis: Matrix) -> tuple:
    """Annihilator of the column span, as bitmask vectors."""
    n, r = basis.rows, basis.cols
    ent = basis.entries
    rows = [sum(1 << i for i in range(n) if ent[i * r + b]) for b in range(r)]
    return tuple(_nullspace_bits(rows, n))


def _lrel_hom_rows_gf2(src_ct, src_cb, tgt_ann, d: int) -> list:
    """Constraint rows (bits over d*d unknowns f_ij at bit i*d+j) for
    q (f+f) basis = 0 over all target annihilator vectors q."""
    rows = []
    mask = (1 << d) - 1
    for q in tgt_ann:
        qt = q & mask
        qb = q >> d
        for ct, cb in zip(src_ct, src_cb):
            row = 0
            for i in range(d):
                x = ct if (qt >> i) & 1 else 0
                if (qb >> i) & 1:
                    x ^= cb
                if x:
                    row ^= x << (i * d)
            rows.append(row)
    return rows


def _match_bits(ta, ba, tb, bb, r: int) -> int:
    m1 = [b | (t << r) for b, t in zip(ba, tb)]
    m2 = list(ta) + [x << r for x in bb] + m1
    return _rank_bits(m2) - _rank_bits(m1)


def _fingerprint_lrel_gf2(x: RelObj) -> tuple:
    d, r = x.dim1, x.rel_dim
    rt, rb, ct, cb = _lrel_bits(x)
    hom_rows = _lrel_hom_rows_gf2(ct, cb, _ann_bits_of(x.basis), d)
    return (
        r,
        _rank_bits(rt),
        _rank_bits(rb),
        _match_bits(rt, rb, rt, rb, r),
        _match_bits(rt, rb, rb, rt, r),
        _match_bits(rb, rt, rt, rb, r),
        d * d - _rank_bits(hom_rows),
    )


def _lrel_iso_gf2(a: RelObj, b: RelObj) -> bool:
    """Exact isomorphism test in the one-space relation category over F_2:
    exhaustive search for an invertible f in Hom(a, b), on bitmasks."""
    if a.rel_dim != b.rel_dim or a.dim1 != b.dim1:
        return False
    d = a.dim1
    if d == 0:
        return True
    _, _, ct, cb = _lrel_bits(a)
    rows = _lrel_hom_rows_gf2(ct, cb, _ann_bits_of(b.basis), d)
    hom = _nullspace_bits(rows, d * d)
    if not hom:
        return False
    h = len(hom)
    mask = (1 << d) - 1
    mats = [[(v >> (i * d)) & mask for i in range(d)] for v in hom]
    rows_f = [0] * d
    prev = 0
    for g in range(1, 1 << h):
        gray = g ^ (g >> 1)
        k = (gray ^ prev).bit_length() - 1
        prev = gray
        mrows = mats[k]
        for i in range(d):
            rows_f[i] ^= mrows[i]
        if _rank_bits(rows_f) == d:
            return True
    return False


def _fingerprint(obj: CensusObject) -> tuple:
    if isinstance(obj, QuiverRep):
        return _fingerprint_rep(obj)
    if isinstance(obj, PairRelObj):
        return _fingerprint_pairrel(obj)
    if obj.field.p == 2:
        return _fingerprint_lrel_gf2(obj)
    return _fingerprint_lrel(obj)


def _census_iso(a: CensusObject, b: CensusObject, seed: int = 0) -> bool:
    if isinstance(a, QuiverRep):
        return is_isomorphic(a, b, seed=seed)
    if isinstance(a, PairRelObj):
        return rel_is_isomorphic(a, b, seed=seed)
    if a.field.p == 2:
        return _lrel_iso_gf2(a, b)
    return lrel_is_isomorphic(a, b, seed=seed)


def _object_dims(obj: CensusObject) -> tuple:
    if isinstance(obj, QuiverRep):
        return obj.dims
    if isinstance(obj, PairRelObj):
        return (obj.dim1, obj.dim2, obj.basis1.cols, obj.basis2.cols)
    return (obj.dim1, obj.dim2, obj.rel_dim)


# -- bucketing and merge ----------------------------------------------------------


class _Buckets:
    """Ordered iso-class accumulator keyed by fingerprint."""

    def __init__(self, seed: int):
        self.seed = seed
        self.by_fp: dict = {}
        self.order: list = []  # [fp, representative, count] in first-seen order

    def add(self, fp: tuple, obj: CensusObject, count: int = 1) -> None:
        bucket = self.by_fp.setdefault(fp, [])
        for entry in bucket:
            if _census_iso(entry[1], obj, seed=self.seed):
                entry[2] += count
                return
        entry = [fp, obj, count]
        bucket.append(entry)
        self.order.append(entry)


def _run_partition(args) -> list:
    category, field, dims, key, use_prefilter, seed = args
    buckets = _Buckets(seed)
    for obj in _iter_partition(category, field, dims, key):
        fp = _fingerprint(obj) if use_prefilter else ()
        buckets.add(fp, obj)
    return [(fp, obj, count) for fp, obj, count in buckets.order]


def _decide_indecomposable(obj: CensusObject, seed: int) -> bool:
    if isinstance(obj, QuiverRep):
        embedded = obj
    else:
        index = 6 if isinstance(obj, PairRelObj) else 5
        embedded = functors.apply_functor(index, obj)
    if embedded.total_dim == 0:
        return False
    verdict = is_indecomposable(embedded, seed=seed)
    if not verdict.certified:
        raise IndecomposabilityUndecided(
            f"census cannot certify a class at dims {_object_dims(obj)}"
        )
    return verdict.indecomposable


def census(
    category: str,
    field: FieldSpec,
    dims,
    *,
    workers: int = 1,
    use_prefilter: bool = True,
    seed: int = 0,
) -> CensusReport:
    """Enumerate every object at the given dimension vector, bucket into
    isomorphism classes, and report orbit sizes, indecomposability and
    canonical-tag matches (tag None on an indecomposable class means
    UNMATCHED; decomposable classes carry no tag)."""
    dims = _check_inputs(category, field, dims)
    keys = _partition_keys(category, field, dims)
    jobs = [(category, field, dims, key, use_prefilter, seed) for key in keys]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_partition, jobs, chunksize=8))
    else:
        parts = [_run_partition(job) for job in jobs]

    merged = _Buckets(seed)
    for part in parts:
        for fp, obj, count in part:
            merged.add(fp, obj, count)

    entries = []
    for fp, obj, count in merged.order:
        indec = _decide_indecomposable(obj, seed)
        tag = None
        if indec:
            try:
                tag = classify_indecomposable(obj, seed=seed)
            except UnclassifiedSummand:
                tag = None
        entries.append(ClassEntry(obj, count, indec, tag))

    total = enumeration_size(category, field, dims)
    found = sum(e.orbit_size for e in entries)
    if found != total:
        raise ShapeError(
            f"orbit accounting broke: {found} enumerated vs {total} expected"
        )
    return CensusReport(category, field, dims, total, tuple(entries))


def census_sweep(
    category: str,
    field: FieldSpec,
    max_total_dim: int,
    *,
    workers: int = 1,
    use_prefilter: bool = True,
    seed: int = 0,
) -> list:
    """Run census over every dimension vector with total at most
    max_total_dim (componentwise within the cap).  Raises UnmatchedClass
    on any indecomposable class that matches no canonical tag; dimension
    vectors over the enumeration guard are skipped with a warning."""
    if category not in _DIMS_LEN:
        raise ShapeError(f"unknown census category {category!r}")
    nv = _DIMS_LEN[category]
    top = min(COMPONENT_CAP, max_total_dim)
    vectors = sorted(
        (
            v
            for v in itertools.product(range(top + 1), repeat=nv)
            if sum(v) <= max_total_dim
        ),
        key=lambda v: (sum(v), v),
    )
    reports = []
    for dims in vectors:
        try:
            report = census(
                category,
                field,
                dims,
                workers=workers,
                use_prefilter=use_prefilter,
                seed=seed,
            )
        except TooLarge as exc:
            warnings.warn(
                f"census sweep skipped {category} dims {dims}: {exc}",
                RuntimeWarning,
                stacklevel=2,
            )
            continue
        bad = report.unmatched_indices
        if bad:
            raise UnmatchedClass(
                f"{category} dims {dims} over {field.name}: classes {list(bad)} "
                "are indecomposable but match no canonical tag"
            )
        reports.append(report)
    return reports
