"""Quantifier elimination over bounded-depth labeled forests.

One step removes the innermost existential variable of an lcd formula by
relabeling the forest: for every complete type of (kept tuple, witness),
fresh labels record (a) how many child subtrees below the relevant branch
point hold a witness candidate and (b) which subtrees already contain one
of the kept variables.  The produced formula reads only those labels plus
the kept variables' own type.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .lcd import LabeledForest, LcdType, is_lcd_formula, lcd_normalize
from .syntax import Formula, atom, free_vars, land, lnot, lor
from .._util import fresh_name

__all__ = ["QeRelabeling", "qe_trees_step", "qe_type_relabeling"]

INFINITY = -1  # subtree count beyond k, compared as larger than anything


@dataclass(frozen=True)
class QeRelabeling:
    """Fresh labels one eliminated type contributes to the forest.

    kappa_labels[j-1] marks nodes whose recorded count is exactly j; the
    last entry marks counts beyond k.  A node carries lca_bit_label when
    its branch at the pivot depth leads to a witness candidate.  kappa_at
    stores the raw per-node counts (0 = no label, INFINITY = beyond k).
    """

    kappa_labels: tuple[str, ...]
    lca_bit_label: str
    kappa_at: tuple[int, ...]
    bit_at: tuple[bool, ...]

    def labels_for(self, v: int) -> frozenset[str]:
        got = []
        kv = self.kappa_at[v]
        if kv == INFINITY:
            got.append(self.kappa_labels[-1])
        elif kv > 0:
            got.append(self.kappa_labels[kv - 1])
        if self.bit_at[v]:
            got.append(self.lca_bit_label)
        return frozenset(got)


def _pivot(typ: LcdType, k: int) -> tuple[int, int, int, int]:
    """x1 (kept index closest to the witness), h = lcd(x1, y),
    h1 = depth(x1), hy = depth(y)."""
    x1 = max(range(k), key=lambda i: (typ.delta[i][k], -i))
    h = typ.delta[x1][k]
    return x1, h, typ.delta[x1][x1], typ.delta[k][k]


def qe_type_relabeling(T: LabeledForest, typ: LcdType, k: int,
                       label_names: tuple[str, ...]) -> QeRelabeling:
    """Compute the recorded counts and bits for one (non-merged) type of
    (k kept variables, witness).  label_names supplies the k+2 fresh
    names: k kappa values, the beyond-k marker, the branch bit."""
    x1, h, h1, hy = _pivot(typ, k)
    gy = typ.gamma[k]
    universe = typ.labels
    candidates = [v for v in range(T.n)
                  if T.depth_of(v) == hy and T.labels[v] & universe == gy]

    kappa_at = [0] * T.n
    if h == hy:
        cand = set(candidates)
        for v in range(T.n):
            if T.depth_of(v) == h1 and T.ancestor_at(v, h) in cand:
                kappa_at[v] = 1
    else:
        # distinct child subtrees of each depth-h node holding a candidate;
        # h == 0 counts whole trees, the same number everywhere
        branch_of: dict[int | None, set[int]] = {}
        for c in candidates:
            anchor = T.ancestor_at(c, h) if h >= 1 else None
            branch_of.setdefault(anchor, set()).add(T.ancestor_at(c, h + 1))
        for v in range(T.n):
            if T.depth_of(v) != h1:
                continue
            anchor = T.ancestor_at(v, h) if h >= 1 else None
            count = len(branch_of.get(anchor, ()))
            kappa_at[v] = count if count <= k else INFINITY

    cand_branches = {T.ancestor_at(c, h + 1) for c in candidates
                     if T.depth_of(c) >= h + 1}
    bit_at = [T.depth_of(v) >= h + 1 and T.ancestor_at(v, h + 1) in cand_branches
              for v in range(T.n)]

    return QeRelabeling(tuple(label_names[:k + 1]), label_names[k + 1],
                        tuple(kappa_at), tuple(bit_at))


def _groups(typ: LcdType, k: int, x1: int, h: int) -> list[int]:
    """Kept variables strictly below the branch point, partitioned by
    shared child subtree; returns the smallest member of each part."""
    members = [i for i in range(k)
               if typ.delta[i][x1] >= h and typ.delta[i][i] >= h + 1]
    reps: list[int] = []
    for i in members:
        if not any(typ.delta[i][r] >= h + 1 for r in reps):
            reps.append(i)
    return reps


def _alpha_for_type(typ: LcdType, xs: tuple[str, ...],
                    rel: QeRelabeling) -> Formula:
    """Kept-tuple condition equivalent to 'some witness completes this
    type': the kept variables realize their own sub-type and the recorded
    count at x1 exceeds the number of kept-variable subtrees that hold a
    candidate."""
    xpart = typ.restrict(range(len(xs))).formula(xs)
    return land(xpart, _decision_for_type(typ, xs, rel))


def _decision_for_type(typ: LcdType, xs: tuple[str, ...],
                       rel: QeRelabeling) -> Formula:
    """The recorded-count side of the per-type condition, without the
    kept-tuple sub-type part."""
    k = len(xs)
    x1, h, _h1, hy = _pivot(typ, k)
    x1v = xs[x1]
    if h == hy:
        return atom(rel.kappa_labels[0], x1v)

    reps = _groups(typ, k, x1, h)
    options = [atom(rel.kappa_labels[-1], x1v)]
    options.extend(atom(rel.kappa_labels[v - 1], x1v)
                   for v in range(len(reps) + 1, k + 1))
    for v in range(1, min(len(reps), k) + 1):
        for bits in itertools.product((False, True), repeat=len(reps)):
            if sum(bits) >= v:
                continue
            lits = [atom(rel.kappa_labels[v - 1], x1v)]
            for r, b in zip(reps, bits):
                a = atom(rel.lca_bit_label, xs[r])
                lits.append(a if b else lnot(a))
            options.append(land(*lits))
    return lor(*options)


def qe_trees_step(psi: Formula, T: LabeledForest, d: int, labels,
                  xs=None, y: str | None = None):
    """Eliminate the innermost witness variable y from an lcd formula over
    (xs, y).  Returns (extended label universe, relabeled forest, formula
    over xs alone) such that the new formula holds of a tuple exactly when
    some witness satisfied the old one.

    Defaults take the sorted free variables with y as the last one.
    """
    if not is_lcd_formula(psi):
        raise ValueError("not an lcd formula")
    labels = frozenset(labels)
    fv = free_vars(psi)
    if xs is None and y is None:
        ordered = sorted(fv)
        if len(ordered) < 2:
            raise ValueError("need at least one kept variable besides the witness")
        xs, y = tuple(ordered[:-1]), ordered[-1]
    elif xs is None or y is None:
        raise ValueError("xs and y must be given together")
    xs = tuple(xs)
    k = len(xs)
    if k < 1:
        raise ValueError("need at least one kept variable")
    if y in xs or len(set(xs)) != k:
        raise ValueError("variable names must be distinct")
    if not fv <= set(xs) | {y}:
        raise ValueError(f"free variables outside (xs, y): {sorted(fv - set(xs) - {y})}")
    if T.depth > d:
        raise ValueError(f"forest depth {T.depth} exceeds bound {d}")

    types = lcd_normalize(psi, k + 1, d, labels, var_order=xs + (y,))

    taken = set(labels) | set(T.label_universe())
    new_labels: list[str] = []
    extra_per_node: list[set[str]] = [set() for _ in range(T.n)]
    disjuncts: list[Formula] = []
    for t_idx, typ in enumerate(types):
        partner = typ.merged_with(k)
        if partner is not None:
            # witness coincides with a kept variable: its own sub-type
            # already settles existence, no recording needed
            disjuncts.append(typ.restrict(range(k)).formula(xs))
            continue
        names = []
        for tail in [f"k{j}" for j in range(1, k + 1)] + ["kinf", "b"]:
            name = fresh_name(f"qe/{t_idx}/{tail}", taken)
            taken.add(name)
            names.append(name)
        new_labels.extend(names)
        rel = qe_type_relabeling(T, typ, k, tuple(names))
        for v in range(T.n):
            extra_per_node[v] |= rel.labels_for(v)
        disjuncts.append(_alpha_for_type(typ, xs, rel))

    S = T.with_labels(tuple(T.labels[v] | extra_per_node[v] for v in range(T.n)))
    alpha = lor(*disjuncts)
    return frozenset(labels | set(new_labels)), S, alpha
