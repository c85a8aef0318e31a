"""Finitely supported multi-indices and monotone (downward-closed) sets.

A multi-index is stored as a tuple of non-negative integer levels with
trailing zeros stripped, so equality is canonical.  Levels are 0-based
internally; serialization reports 1-based values.
"""

from __future__ import annotations

from math import comb


def canonical(index) -> tuple:
    """Strip trailing zeros so the tuple form of a multi-index is unique."""
    index = tuple(int(k) for k in index)
    if any(k < 0 for k in index):
        raise ValueError(f"negative level in multi-index {index}")
    last = len(index)
    while last > 0 and index[last - 1] == 0:
        last -= 1
    return index[:last]


def padded(index, dim: int) -> tuple:
    return tuple(index) + (0,) * (dim - len(index))


def graded_lex_key(index):
    """Sort key: total level first, then lexicographic with higher levels
    in earlier dimensions ranking first."""
    return (sum(index), tuple(-k for k in index))


def backward_neighbors(index):
    """All k - e_m >= 0 over the active dimensions of k."""
    out = []
    for m, km in enumerate(index):
        if km > 0:
            out.append(canonical(index[:m] + (km - 1,) + index[m + 1:]))
    return out


def forward_neighbor(index, m: int) -> tuple:
    index = padded(index, m + 1)
    return index[:m] + (index[m] + 1,) + index[m + 1:]


class MultiIndexSet:
    """Finite ordered collection of distinct multi-indices.

    Indices are kept in graded lexicographic order for deterministic
    iteration.  The dimension bound is the largest active dimension
    (possibly declared larger explicitly).
    """

    def __init__(self, indices, dimension_bound: int | None = None):
        seen = set()
        items = []
        for idx in indices:
            idx = canonical(idx)
            if idx in seen:
                raise ValueError(f"duplicate multi-index {idx}")
            seen.add(idx)
            items.append(idx)
        self.indices = tuple(sorted(items, key=graded_lex_key))
        active = max((len(i) for i in self.indices), default=0)
        if dimension_bound is None:
            dimension_bound = max(active, 1)
        if dimension_bound < active:
            raise ValueError("dimension_bound smaller than active dimensions")
        self.dimension_bound = dimension_bound
        self._set = seen

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, index):
        return canonical(index) in self._set

    def __eq__(self, other):
        return isinstance(other, MultiIndexSet) and self.indices == other.indices

    def __hash__(self):
        return hash(self.indices)

    def __repr__(self):
        return f"MultiIndexSet({list(self.indices)!r}, dimension_bound={self.dimension_bound})"

    def union(self, other_indices, dimension_bound=None):
        extra = [i for i in other_indices if i not in self]
        dim = max(self.dimension_bound, dimension_bound or 0)
        return MultiIndexSet(list(self.indices) + extra, dimension_bound=dim)

    def serialize(self) -> str:
        """One index per line, space-separated 1-based levels."""
        dim = self.dimension_bound
        lines = []
        for idx in self.indices:
            lines.append(" ".join(str(k + 1) for k in padded(idx, dim)))
        return "\n".join(lines) + "\n"

    @classmethod
    def deserialize(cls, text: str) -> "MultiIndexSet":
        indices = []
        dim = 1
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            vals = [int(v) - 1 for v in line.split()]
            dim = max(dim, len(vals))
            indices.append(canonical(vals))
        return cls(indices, dimension_bound=dim)


def is_monotone(index_set: MultiIndexSet) -> bool:
    """True iff the set is downward closed."""
    for idx in index_set:
        for nb in backward_neighbors(idx):
            if nb not in index_set:
                return False
    return True


def _require_monotone(index_set):
    if not is_monotone(index_set):
        raise ValueError("multi-index set is not monotone (downward closed)")


def smolyak_set(M: int, w: int) -> MultiIndexSet:
    """All k in N_0^M with |k|_1 <= w; cardinality binomial(M + w, M)."""
    if M < 1 or w < 0:
        raise ValueError("need M >= 1 and w >= 0")

    def rec(dims_left, budget):
        if dims_left == 1:
            for k in range(budget + 1):
                yield (k,)
            return
        for k in range(budget + 1):
            for rest in rec(dims_left - 1, budget - k):
                yield (k,) + rest

    out = MultiIndexSet(rec(M, w), dimension_bound=M)
    assert len(out) == comb(M + w, M)
    return out


def reduced_margin(index_set: MultiIndexSet, dimension_bound=None) -> MultiIndexSet:
    """All k not in the set whose backward neighbors all lie in the set."""
    _require_monotone(index_set)
    if dimension_bound is None:
        dimension_bound = getattr(index_set, "dimension_bound", None)
    if dimension_bound is None:
        dimension_bound = max(1, max((len(i) for i in index_set), default=1))
    dim = dimension_bound
    candidates = set()
    for idx in index_set:
        for m in range(dim):
            candidates.add(canonical(forward_neighbor(idx, m)))
    out = []
    for cand in candidates:
        if cand in index_set:
            continue
        if all(nb in index_set for nb in backward_neighbors(cand)):
            out.append(cand)
    return MultiIndexSet(out, dimension_bound=dim)


def combination_coefficients(index_set: MultiIndexSet) -> dict:
    """Inclusion-exclusion coefficients c(i; Lambda) of the combination technique.

    The 0/1 shifts e with i + e in Lambda form a downward-closed family
    (Lambda is monotone), so they are enumerated by depth-first extension
    with pruning instead of a full powerset sweep.
    """
    _require_monotone(index_set)
    coeffs = {}
    for idx in index_set:
        dims_up = [m for m in range(index_set.dimension_bound)
                   if canonical(forward_neighbor(idx, m)) in index_set]
        base = list(padded(idx, index_set.dimension_bound))

        def count(pos, shifted, sign):
            c = sign
            for j in range(pos, len(dims_up)):
                m = dims_up[j]
                shifted[m] += 1
                if canonical(shifted) in index_set:
                    c += count(j + 1, shifted, -sign)
                shifted[m] -= 1
            return c

        c = count(0, base, 1)
        if c != 0:
            coeffs[idx] = c
    return coeffs
