
"""End-to-end model checking by iterated quantifier elimination.

An existential formula over a sparse structure is compiled down to a
quantifier-free formula over labels and least-common-ancestor depths of
shallow forests: color the structure so that small unions of classes
induce low-treedepth subgraphs, build a DFS forest per class union, push
the relations of the substructure into node labels along that forest, and
eliminate the quantified variables innermost first, recording witness
counts as fresh labels.  Universal quantifiers are handled by negating
the compiled formula, existential blocks above them by lowering the
compiled formula back to an existential one over the forest edges and
running the same pipeline on the skeleton itself.
"""

import itertools
from dataclasses import dataclass

import numpy as np

from .._util import deep, fresh_name
from ..graphs import ClassParams, induced_subgraph
from ..treedepth import dfs_forest, low_treedepth_coloring
from ..wcol import BconnConfig
from .lcd import LabeledForest, LcdType, eval_lcd_formula
from .qe import QeRelabeling, _decision_for_type, qe_type_relabeling
from .skeleton import (NON_NODE, PARENT_ROOT, Skeleton, encode_substructure,
                       eval_lcd, lcd_to_existential)
from .structures import Structure, gaifman_graph, naive_eval
from .syntax import (FALSE, TRUE, And, Atom, Eq, Exists, FFalse, Forall,
                     Formula, FTrue, LcdAtom, Not, Or, Vocabulary,
                     _is_quantifier_free, _rectify, atom, exists, free_vars,
                     land, lcd, lnot, lor, prenex_decompose, prenexify,
                     subformulas, to_nnf)

__all__ = [
    "ReductionLimits",
    "ReductionOverflow",
    "model_check",
    "reduce_existential",
    "reduce_formula",
]


class ReductionOverflow(RuntimeError):
    """A configured resource cap was hit; no answer was produced."""


@dataclass(frozen=True)
class ReductionLimits:
    """Caps that make the reduction fail loudly instead of thrashing.

    max_subsets bounds the number of color-class unions tried per
    elimination round, max_tuples the size of the tuple grid scanned for
    realized types, max_labels the total vocabulary of generated names,
    and max_quantifiers the length of a lowered quantifier prefix.
    """

    max_subsets: int = 256
    max_tuples: int = 2_000_000
    max_labels: int = 50_000
    max_quantifiers: int = 100_000


# ---------------------------------------------------------------------------
# formula plumbing


def _check_existential(phi: Formula) -> None:
    for node in subformulas(phi):
        if isinstance(node, Forall):
            raise ValueError("universal quantifier in existential input")
        if isinstance(node, Not) and not _is_quantifier_free(node):
            raise ValueError("negation over a quantifier in existential input")
        if isinstance(node, LcdAtom):
            raise ValueError("lcd atoms must be lowered before reduction")


def _miniscope(f: Formula) -> Formula:
    """Push each existential down to the smallest subformula that needs
    it, so later eliminations work with few variables at a time."""
    if isinstance(f, Exists):
        return _push(f.var, _miniscope(f.sub))
    if isinstance(f, And):
        return land(*(_miniscope(s) for s in f.subs))
    if isinstance(f, Or):
        return lor(*(_miniscope(s) for s in f.subs))
    return f


def _push(var: str, body: Formula) -> Formula:
    if var not in free_vars(body):
        return body
    if isinstance(body, Or):
        return lor(*(_push(var, s) for s in body.subs))
    if isinstance(body, And):
        inside = [s for s in body.subs if var in free_vars(s)]
        outside = [s for s in body.subs if var not in free_vars(s)]
        if outside:
            return land(land(*outside), _push(var, land(*inside)))
        return exists(var, body)
    if isinstance(body, Exists):
        return exists(body.var, _push(var, body.sub))
    return exists(var, body)


def _replace_node(f: Formula, target: Formula, repl: Formula) -> Formula:
    """Rebuild f with every occurrence of `target` (shared subterm)
    replaced by `repl`."""
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        if node is target:
            return repl
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Not):
            out = lnot(go(node.sub))
        elif isinstance(node, And):
            out = land(*(go(s) for s in node.subs))
        elif isinstance(node, Or):
            out = lor(*(go(s) for s in node.subs))
        elif isinstance(node, Exists):
            out = exists(node.var, go(node.sub))
        elif isinstance(node, Forall):
            raise ValueError("universal quantifier in existential input")
        else:
            out = node
        memo[id(node)] = out
        return out

    return go(f)


def _eq_over_forest(rel: str, d: int, x: str, y: str) -> Formula:
    """x = y over forest nodes: equal depth and a common ancestor there."""
    return lor(*(land(lcd(rel, j, x, x), lcd(rel, j, y, y), lcd(rel, j, x, y))
                 for j in range(1, d + 1)))


def _branch_formula(phi: Formula, builders: dict, rel: str, d: int) -> Formula:
    """Replace every relation atom by its label-and-lcd encoding over the
    branch forest; a relation with no pairs in the branch is false."""
    memo: dict[int, Formula] = {}

    def go(node: Formula) -> Formula:
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, Atom):
            if len(node.args) == 1:
                out = node
            else:
                build = builders.get(node.rel)
                out = build(*node.args) if build is not None else FALSE
        elif isinstance(node, Eq):
            out = _eq_over_forest(rel, d, node.left, node.right)
        elif isinstance(node, Not):
            out = lnot(go(node.sub))
        elif isinstance(node, And):
            out = land(*(go(s) for s in node.subs))
        elif isinstance(node, Or):
            out = lor(*(go(s) for s in node.subs))
        elif isinstance(node, Exists):
            out = exists(node.var, go(node.sub))
        else:
            out = node
        memo[id(node)] = out
        return out

    return go(phi)


# ---------------------------------------------------------------------------
# realized-type elimination over one branch forest


def _lcd_matrix(T: LabeledForest) -> np.ndarray:
    """Pairwise least-common-ancestor depths as an n x n matrix."""
    par = np.array([PARENT_ROOT if q is None else q for q in T.forest.parent],
                   dtype=np.int64)
    dep = np.asarray(T.forest.depth_of, dtype=np.int64)
    return _pairwise_lcd(par, dep)


def _pairwise_lcd(par: np.ndarray, dep: np.ndarray) -> np.ndarray:
    n = len(par)
    D = np.zeros((n, n), dtype=np.int16)
    if n == 0:
        return D
    dmax = int(dep.max())
    anc = np.full((dmax + 1, n), -1, dtype=np.int64)
    anc[dep, np.arange(n)] = np.arange(n)
    for t in range(dmax, 1, -1):
        lifted = par[np.clip(anc[t], 0, None)]
        anc[t - 1] = np.where(anc[t - 1] >= 0, anc[t - 1],
                              np.where(anc[t] >= 0, lifted, -1))
    for t in range(1, dmax + 1):
        a = anc[t]
        good = a >= 0
        D += ((a[:, None] == a[None, :])
              & good[:, None] & good[None, :]).astype(np.int16)
    return D


def _vector_eval(alpha: Formula, B: Skeleton, xs: tuple) -> np.ndarray:
    """Truth table of a quantifier-free formula over all assignments of
    xs to skeleton elements, as a boolean array of shape (n,) * len(xs)."""
    n = B.n
    m = len(xs)
    axis = {v: i for i, v in enumerate(xs)}

    def along(i: int, vec: np.ndarray) -> np.ndarray:
        return vec.reshape((1,) * i + (n,) + (1,) * (m - 1 - i))

    def plane(i: int, j: int, mat: np.ndarray) -> np.ndarray:
        moved = mat.reshape(
            tuple(n if k in (i, j) else 1 for k in range(m))) if i != j else mat
        return moved

    lcdmats: dict[str, np.ndarray] = {}
    memo: dict[int, np.ndarray] = {}
    for node in subformulas(alpha):
        if isinstance(node, FTrue):
            val = np.ones((1,) * m, dtype=bool)
        elif isinstance(node, FFalse):
            val = np.zeros((1,) * m, dtype=bool)
        elif isinstance(node, Atom):
            if len(node.args) != 1:
                raise ValueError("skeletons carry no plain binary relations")
            has = np.fromiter((node.rel in B.labels[v] for v in range(n)),
                              dtype=bool, count=n)
            val = along(axis[node.args[0]], has)
        elif isinstance(node, Eq):
            i, j = axis[node.left], axis[node.right]
            if i == j:
                val = np.ones((1,) * m, dtype=bool)
            else:
                val = plane(i, j, np.eye(n, dtype=bool)
                            if i < j else np.eye(n, dtype=bool).T)
        elif isinstance(node, LcdAtom):
            D = lcdmats.get(node.rel)
            if D is None:
                D = lcdmats[node.rel] = _pairwise_lcd(
                    B.forests[node.rel], B.depths[node.rel])
            i, j = axis[node.left], axis[node.right]
            if i == j:
                val = along(i, np.diagonal(D) == node.value)
            else:
                M = (D == node.value) if i < j else (D.T == node.value)
                val = plane(i, j, M)
        elif isinstance(node, Not):
            val = ~memo[id(node.sub)]
        elif isinstance(node, And):
            val = np.ones((1,) * m, dtype=bool)
            for s in node.subs:
                val = val & memo[id(s)]
        elif isinstance(node, Or):
            val = np.zeros((1,) * m, dtype=bool)
            for s in node.subs:
                val = val | memo[id(s)]
        else:
            raise TypeError(f"quantifier in a compaction input: {node!r}")
        memo[id(node)] = val
    return np.broadcast_to(memo[id(alpha)], (n,) * m)


def _table_formula(table: np.ndarray, xs: tuple, elname) -> Formula:
    """Rebuild a truth table as a formula over per-element labels.

    Whichever of the table and its complement has fewer satisfying rows
    is written out as a nested union over elements, one axis at a time,
    and the complement case is wrapped in a negation.
    """
    if table.all():
        return TRUE
    if not table.any():
        return FALSE
    flip = 2 * int(table.sum()) > table.size
    if flip:
        table = ~table

    def build(i: int, sub: np.ndarray) -> Formula:
        if sub.all():
            return TRUE
        if i == len(xs) - 1:
            return lor(*(atom(elname(v), xs[i])
                         for v in np.flatnonzero(sub)))
        groups: dict[bytes, list[int]] = {}
        for v in range(sub.shape[0]):
            if sub[v].any():
                groups.setdefault(sub[v].tobytes(), []).append(v)
        parts = []
        for vs in groups.values():
            sel = lor(*(atom(elname(v), xs[i]) for v in vs))
            parts.append(land(sel, build(i + 1, sub[vs[0]])))
        return lor(*parts)

    out = build(0, table)
    return lnot(out) if flip else out


def _compact_alpha(B: Skeleton, alpha: Formula, tag: str,
                   limits: ReductionLimits):
    """Replace a compiled formula by a small one with the same values
    over the skeleton, pinning elements with fresh labels.

    Chained lowering rounds otherwise multiply the formula size: every
    least-common-ancestor-depth atom lowers to a block of quantifiers,
    and the next round's output mentions each block again.  Rebuilding
    from the value table resets the size to at most the table's, with no
    depth atoms at all, at the price of one label per element.
    """
    xs = tuple(sorted(free_vars(alpha)))
    if not xs:
        return B, alpha
    n = B.n
    cells = n ** len(xs)
    nodes = sum(1 for _ in subformulas(alpha))
    if cells > 1_000_000 or cells * nodes > 200_000_000:
        return B, alpha
    table = _vector_eval(alpha, B, xs)
    compact = _table_formula(table, xs, lambda v: f"{tag}/el{v}")
    if isinstance(compact, (FTrue, FFalse)):
        return B, compact
    B2 = B.add_labels([{f"{tag}/el{v}"} for v in range(n)])
    return B2, compact


def _eval_under_type(beta: Formula, typ: LcdType, index: dict) -> bool:
    memo: dict[int, bool] = {}

    def ev(node: Formula) -> bool:
        got = memo.get(id(node))
        if got is not None:
            return got
        if isinstance(node, FTrue):
            val = True
        elif isinstance(node, FFalse):
            val = False
        elif isinstance(node, Atom):
            val = node.rel in typ.gamma[index[node.args[0]]]
        elif isinstance(node, LcdAtom):
            val = typ.delta[index[node.left]][index[node.right]] == node.value
        elif isinstance(node, Not):
            val = not ev(node.sub)
        elif isinstance(node, And):
            val = all(ev(s) for s in node.subs)
        elif isinstance(node, Or):
            val = any(ev(s) for s in node.subs)
        else:
            raise TypeError(f"unexpected node in a branch matrix: {node!r}")
        memo[id(node)] = val
        return val

    return ev(beta)


def _realized_step(beta: Formula, T: LabeledForest, xs: tuple, y: str,
                   rel: str, taken: set, prefix: str,
                   limits: ReductionLimits):
    """Eliminate one existential variable from a quantifier-free branch
    formula.

    Unlike the fixed-universe step, types are enumerated from the tuples
    the forest actually realizes, and each distinct label pattern gets one
    marker label so the output mentions a single atom per variable instead
    of the whole label universe.  Returns (formula over xs, relabeled
    forest).
    """
    k = len(xs)
    order = tuple(xs) + (y,)
    index = {v: i for i, v in enumerate(order)}
    lam = frozenset(node.rel for node in subformulas(beta)
                    if isinstance(node, Atom))
    for node in subformulas(beta):
        if isinstance(node, LcdAtom) and node.rel != rel:
            raise ValueError(f"foreign forest {node.rel!r} in branch formula")

    n = T.n
    m = k + 1
    if n ** m > limits.max_tuples:
        raise ReductionOverflow(
            f"type scan needs {n ** m} tuples, cap is {limits.max_tuples}")

    plist: list[frozenset] = []
    pidmap: dict[frozenset, int] = {}
    pid = np.empty(n, dtype=np.int16)
    for v in range(n):
        pat = T.labels[v] & lam
        got = pidmap.get(pat)
        if got is None:
            got = pidmap[pat] = len(plist)
            plist.append(pat)
        pid[v] = got

    D = _lcd_matrix(T)
    flat = np.arange(n ** m, dtype=np.int64)
    idx = [(flat // n ** (m - 1 - j)) % n for j in range(m)]
    cols = [pid[ix] for ix in idx]
    for i in range(m):
        for j in range(i, m):
            cols.append(D[idx[i], idx[j]])
    rows = np.unique(np.stack(cols, axis=1), axis=0)

    disjuncts: list[Formula] = []
    node_extra: list[set] = [set() for _ in range(n)]
    pat_label: dict[int, str] = {}
    relab_cache: dict[tuple, object] = {}
    placeholder = ("",) * (k + 2)
    t_out = 0
    for row in rows:
        gam = tuple(plist[int(row[j])] for j in range(m))
        delta = [[0] * m for _ in range(m)]
        pos = m
        for i in range(m):
            for j in range(i, m):
                delta[i][j] = delta[j][i] = int(row[pos])
                pos += 1
        typ = LcdType(lam, gam, tuple(tuple(r) for r in delta))
        if not _eval_under_type(beta, typ, index):
            continue
        xlits = []
        for i in range(k):
            pi = int(row[i])
            name = pat_label.get(pi)
            if name is None:
                name = fresh_name(f"{prefix}p{pi}", taken)
                taken.add(name)
                pat_label[pi] = name
            xlits.append(atom(name, xs[i]))
        for i in range(k):
            for j in range(i, k):
                xlits.append(lcd(rel, delta[i][j], xs[i], xs[j]))
        if typ.merged_with(k) is not None:
            # the witness names a kept variable's node, nothing to record
            disjuncts.append(land(*xlits))
            continue
        # types with identical recorded counts and bits share one label set
        bare = qe_type_relabeling(T, typ, k, placeholder)
        relab = relab_cache.get((bare.kappa_at, bare.bit_at))
        if relab is None:
            names = []
            for tail in [f"k{j}" for j in range(1, k + 1)] + ["kinf", "b"]:
                nm = fresh_name(f"{prefix}q{t_out}/{tail}", taken)
                taken.add(nm)
                names.append(nm)
            t_out += 1
            relab = QeRelabeling(tuple(names[:k + 1]), names[k + 1],
                                 bare.kappa_at, bare.bit_at)
            relab_cache[(bare.kappa_at, bare.bit_at)] = relab
            for v in range(n):
                node_extra[v] |= relab.labels_for(v)
        disjuncts.append(land(land(*xlits),
                              _decision_for_type(typ, xs, relab)))

    for pi, name in pat_label.items():
        hits = np.flatnonzero(pid == pi)
        for v in hits:
            node_extra[int(v)].add(name)
    if len(taken) > limits.max_labels:
        raise ReductionOverflow(
            f"generated vocabulary exceeds {limits.max_labels} names")
    T2 = T.with_labels(tuple(T.labels[v] | frozenset(node_extra[v])
                             for v in range(n)))
    return lor(*disjuncts), T2


def _eliminate_inside_out(psi: Formula, T: LabeledForest, rel: str,
                          taken: set, prefix: str, limits: ReductionLimits):
    """Eliminate every existential from a branch formula, innermost
    first, substituting each quantifier's replacement in place."""
    counter = itertools.count()
    while True:
        target = None
        for node in subformulas(psi):
            if isinstance(node, Exists) and _is_quantifier_free(node.sub):
                target = node
                break
        if target is None:
            break
        w, beta = target.var, target.sub
        fv = free_vars(beta)
        if w not in fv:
            repl: Formula = beta
        else:
            kept = tuple(sorted(fv - {w}))
            if not kept:
                found = any(eval_lcd_formula(T, beta, {w: v})
                            for v in range(T.n))
                repl = TRUE if found else FALSE
            else:
                repl, T = _realized_step(beta, T, kept, w, rel, taken,
                                         f"{prefix}e{next(counter)}/", limits)
        psi = _replace_node(psi, target, repl)
    return psi, T


# ---------------------------------------------------------------------------
# the existential pipeline


def _induced_structure(A: Structure, idmap) -> Structure:
    to_sub = idmap.to_sub
    unary = {c: frozenset(to_sub[v] for v in mem if v in to_sub)
             for c, mem in A.unary.items()}
    binary = {R: frozenset((to_sub[u], to_sub[v]) for u, v in prs
                           if u in to_sub and v in to_sub)
              for R, prs in A.binary.items()}
    return Structure(len(idmap), unary, binary)


def _color_branches(G, p: int, params: ClassParams, cfg: BconnConfig,
                    limits: ReductionLimits) -> list:
    """Vertex sets whose every p-tuple lies in at least one of them: the
    unions of p color classes of a low-treedepth coloring.  Collapses to
    the whole universe when p already covers the palette."""
    n = G.n
    if p >= n:
        return [tuple(range(n))]
    q = 1
    while 2 ** q - 2 < n:
        q += 1  # beyond this the coloring radius saturates the graph
    col, _ = low_treedepth_coloring(
        G, ClassParams(r=params.r, d=params.d, p=min(p, q)), cfg)
    classes = col.classes()
    used = sorted(classes)
    if p >= len(used):
        return [tuple(range(n))]
    if len(used) > p + 2:
        by_size = sorted(used, key=lambda c: (-len(classes[c]), c))
        palette = [sorted(classes[c]) for c in by_size[:p + 1]]
        palette.append(sorted(v for c in by_size[p + 1:] for v in classes[c]))
    else:
        palette = [classes[c] for c in used]
    subsets = list(itertools.combinations(range(len(palette)), p))
    if len(subsets) > limits.max_subsets:
        raise ReductionOverflow(
            f"{len(subsets)} color-class unions, cap is {limits.max_subsets}")
    out, seen = [], set()
    for S in subsets:
        V = tuple(sorted(v for ci in S for v in palette[ci]))
        if V and V not in seen:
            seen.add(V)
            out.append(V)
    return out


@deep
def reduce_existential(phi: Formula, A: Structure, params: ClassParams,
                       cfg: BconnConfig | None = None, *,
                       limits: ReductionLimits | None = None,
                       extra_free=(), _tag: str = "s0"):
    """Compile an existential formula into a skeleton plus a
    quantifier-free formula over labels and ancestor depths.

    Returns (vocabulary, skeleton, formula) such that the formula holds
    of a free-variable tuple over the skeleton exactly when phi holds of
    it over A.  extra_free names additional variables the result may
    mention; ones that never occur in phi stay unconstrained.
    """
    if cfg is None:
        cfg = BconnConfig()
    if limits is None:
        limits = ReductionLimits()
    phi = _rectify(phi, avoid=extra_free)
    _check_existential(phi)
    occurring = tuple(sorted(free_vars(phi)))
    xs_all = tuple(sorted(set(occurring) | set(extra_free)))
    if not xs_all:
        raise ValueError("at least one free variable required")
    n = A.n
    if n == 0:
        return Vocabulary.make((), ()), Skeleton(0, (), {}, 1), FALSE

    # variables that never occur cannot constrain coverage or guards
    ell = sum(1 for node in subformulas(phi) if isinstance(node, Exists))
    p = max(1, len(occurring) + ell)
    phi = _miniscope(to_nnf(phi))
    G = gaifman_graph(A)
    vsets = _color_branches(G, p, params, cfg, limits)

    taken = set(A.unary)
    branches = []
    for b_idx, V in enumerate(vsets):
        rel = fresh_name(f"{_tag}b{b_idx}", taken)
        taken.add(rel)
        prefix = f"{rel}/"
        sub, idmap = induced_subgraph(G, V)
        A_loc = _induced_structure(A, idmap)
        F, _ = dfs_forest(sub, max(1, len(V).bit_length()))
        d_loc = max(1, F.depth)
        parents = [PARENT_ROOT if q is None else q for q in F.parent]
        B_loc = Skeleton(len(V), [frozenset()] * len(V), {rel: parents}, d_loc)
        B_loc, builders = encode_substructure(A_loc, B_loc, rel,
                                              label_prefix=prefix)
        taken |= B_loc.label_universe()
        T = LabeledForest(F, B_loc.labels)
        psi = _branch_formula(phi, builders, rel, d_loc)
        alpha_loc, T = _eliminate_inside_out(psi, T, rel, taken, prefix,
                                             limits)
        branches.append((idmap, parents, T, alpha_loc, rel, d_loc))

    labels_glob: list[set] = [set() for _ in range(n)]
    forests_glob: dict[str, np.ndarray] = {}
    parts: list[Formula] = []
    d_glob = 1
    for idmap, parents, T, alpha_loc, rel, d_loc in branches:
        cls_name = fresh_name(f"{rel}/cls", taken)
        taken.add(cls_name)
        arr = np.full(n, NON_NODE, dtype=np.int64)
        for lv, gv in enumerate(idmap.to_orig):
            q = parents[lv]
            arr[gv] = PARENT_ROOT if q == PARENT_ROOT else idmap.to_orig[q]
            labels_glob[gv] |= T.labels[lv]
            labels_glob[gv].add(cls_name)
        forests_glob[rel] = arr
        parts.append(land(alpha_loc,
                          *(atom(cls_name, x) for x in occurring)))
        d_glob = max(d_glob, d_loc)

    B = Skeleton(n, [frozenset(s) for s in labels_glob], forests_glob, d_glob)
    for arr in B.forests.values():
        for v in range(n):
            if arr[v] >= 0:
                assert G.has_edge(v, int(arr[v])), \
                    "parent edge outside the host graph"
    gamma = Vocabulary.make(sorted(B.label_universe()), sorted(B.forests))
    return gamma, B, lor(*parts)


# ---------------------------------------------------------------------------
# arbitrary quantifier prefixes


@deep
def reduce_formula(phi: Formula, A: Structure, params: ClassParams,
                   cfg: BconnConfig | None = None, *,
                   limits: ReductionLimits | None = None, extra_free=()):
    """Compile any formula with free variables into (skeleton, formula).

    The prenex prefix is processed innermost first: a trailing
    existential block runs the existential pipeline on A directly, a
    universal block negates the compiled formula around an existential
    run, and every further block lowers the compiled formula back to an
    existential one and reduces it over the skeleton built so far.
    """
    if cfg is None:
        cfg = BconnConfig()
    if limits is None:
        limits = ReductionLimits()
    fv0 = set(free_vars(phi)) | set(extra_free)
    if not fv0:
        raise ValueError("at least one free variable required")
    prefix, matrix = prenex_decompose(phi)
    groups: list[tuple[str, list[str]]] = []
    for kind, var in prefix:
        if groups and groups[-1][0] == kind:
            groups[-1][1].append(var)
        else:
            groups.append((kind, [var]))

    step = 0
    if not groups:
        _, B, alpha = reduce_existential(
            matrix, A, params, cfg, limits=limits,
            extra_free=tuple(sorted(fv0)), _tag=f"s{step}")
        return B, alpha

    B = None
    alpha: Formula = FALSE
    for gi in range(len(groups) - 1, -1, -1):
        kind, gvars = groups[gi]
        outer = [v for _, vs in groups[:gi] for v in vs]
        want = tuple(sorted(fv0 | set(outer)))
        if B is None:
            target: Formula = matrix if kind == "E" else lnot(matrix)
            for v in reversed(gvars):
                target = exists(v, target)
            if isinstance(target, (FTrue, FFalse)):
                B = Skeleton(A.n, [frozenset()] * A.n, {}, 1)
                alpha = target
            else:
                _, B, alpha = reduce_existential(
                    target, A, params, cfg, limits=limits,
                    extra_free=want, _tag=f"s{step}")
                step += 1
        else:
            B, alpha = _compact_alpha(B, alpha, f"s{step}c", limits)
            base = alpha if kind == "E" else lnot(alpha)
            if isinstance(base, (FTrue, FFalse)):
                alpha = base  # over a nonempty universe the block is inert
            else:
                target = lcd_to_existential(base, B.d)
                for v in reversed(gvars):
                    target = exists(v, target)
                target = prenexify(target)
                binders = sum(1 for f in subformulas(target)
                              if isinstance(f, Exists))
                if binders > limits.max_quantifiers:
                    raise ReductionOverflow(
                        f"lowered prefix has {binders} quantifiers "
                        f"(cap {limits.max_quantifiers})")
                _, B, alpha = reduce_existential(
                    target, B.to_structure(), params, cfg, limits=limits,
                    extra_free=want, _tag=f"s{step}")
                step += 1
        if kind == "A":
            alpha = lnot(alpha)
    return B, alpha


@deep
def model_check(A: Structure, phi: Formula, params: ClassParams,
                cfg: BconnConfig | None = None, *,
                limits: ReductionLimits | None = None) -> bool:
    """Decide a sentence over a structure via the reduction pipeline.

    A placeholder free variable keeps every stage's free-variable count
    positive; the compiled formula is then read off at element 0.
    """
    if free_vars(phi):
        raise ValueError("model_check expects a sentence")
    if A.n == 0:
        return naive_eval(A, phi)
    names = {node.var for node in subformulas(phi)
             if isinstance(node, (Exists, Forall))}
    z = fresh_name("z", names)
    B, alpha = reduce_formula(phi, A, params, cfg, limits=limits,
                              extra_free=(z,))
    return eval_lcd(B, alpha, {z: 0})
