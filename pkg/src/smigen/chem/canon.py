"""Canonical and randomized SMILES writing.

Canonical ranks come from iterative invariant refinement seeded on
(element, degree, charge, H count, ring flag). Residual ties are broken by
exploring every tie-break choice and keeping the lexicographically smallest
written string, which makes the result independent of input atom order.
"""

from __future__ import annotations

import numpy as np

from .graph import MolGraph
from .kekulize import kekulize

# Cap on explored tie-break leaves. Beyond it remaining choices fall back to
# the first class member; refinement-equivalent atoms in chemical graphs are
# automorphic, so equivalent picks write identical strings.
_LEAF_BUDGET = 512


def _bond_class(bond) -> int:
    return 4 if bond.aromatic else bond.order


def _initial_keys(mol: MolGraph) -> list[tuple]:
    return [
        (a.element, mol.degree(a.index), a.charge, a.h_total, a.in_ring)
        for a in mol.atoms
    ]


def _dense_ranks(keys: list) -> list[int]:
    order = {k: r for r, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(mol: MolGraph, ranks: list[int]) -> list[int]:
    n_classes = len(set(ranks))
    while True:
        keys = [
            (
                ranks[i],
                tuple(sorted((_bond_class(b), ranks[j]) for j, b in mol.neighbors(i))),
            )
            for i in range(len(mol.atoms))
        ]
        ranks = _dense_ranks(keys)
        new_classes = len(set(ranks))
        if new_classes == n_classes:
            return ranks
        n_classes = new_classes


def _atom_token(mol: MolGraph, idx: int) -> str:
    atom = mol.atoms[idx]
    symbol = atom.element.lower() if atom.aromatic else atom.element

    bracket = atom.element == "H" or atom.charge != 0
    if not bracket:
        # Write bare only when re-parsing would imply the same hydrogen count.
        s = sum(1 if b.aromatic else b.order for _, b in mol.neighbors(idx))
        from .graph import default_valence

        target = default_valence(atom.element, s)
        if target is None:
            implied = None
        elif atom.aromatic and s < target:
            implied = target - s - 1
        else:
            implied = target - s
        bracket = implied != atom.h_total

    if not bracket:
        return symbol
    h = atom.h_total
    h_part = "" if h == 0 else ("H" if h == 1 else f"H{h}")
    q = atom.charge
    if q == 0:
        q_part = ""
    elif q == 1:
        q_part = "+"
    elif q == -1:
        q_part = "-"
    else:
        q_part = f"+{q}" if q > 0 else f"-{-q}"
    return f"[{symbol}{h_part}{q_part}]"


def _bond_token(mol: MolGraph, bond) -> str:
    if bond.aromatic:
        return ""
    if bond.order == 2:
        return "="
    if bond.order == 3:
        return "#"
    # A plain single bond between two aromatic atoms inside a ring would
    # re-parse as aromatic; mark it explicitly.
    if bond.in_ring and mol.atoms[bond.a].aromatic and mol.atoms[bond.b].aromatic:
        return "-"
    return ""


def _write(mol: MolGraph, start: int, neighbor_order) -> str:
    """Depth-first SMILES writer. `neighbor_order(u, bond_indices)` returns
    the visiting order of the bonds still unused when `u` is first reached."""
    visited = [False] * len(mol.atoms)
    used_bond = [False] * len(mol.bonds)
    children: list[list[int]] = [[] for _ in mol.atoms]  # tree bonds, in order
    ring_at: list[list[int]] = [[] for _ in mol.atoms]  # ring bonds, in order

    # Pass 1: true depth-first edge classification, interleaving descent with
    # the per-atom bond iteration so fused-ring closures land correctly.
    visited[start] = True
    stack: list[tuple[int, list[int], int]] = [
        (start, neighbor_order(start, list(mol.adjacency[start])), 0)
    ]
    while stack:
        u, ordered, pos = stack[-1]
        if pos == len(ordered):
            stack.pop()
            continue
        stack[-1] = (u, ordered, pos + 1)
        bi = ordered[pos]
        if used_bond[bi]:
            continue
        used_bond[bi] = True
        v = mol.bonds[bi].other(u)
        if visited[v]:
            ring_at[u].append(bi)
            ring_at[v].append(bi)
        else:
            visited[v] = True
            children[u].append(bi)
            unused = [b for b in mol.adjacency[v] if not used_bond[b]]
            stack.append((v, neighbor_order(v, unused), 0))

    # Pass 2: emit tokens. A ring digit is allocated (lowest free first) at
    # whichever endpoint is written first and released at the other.
    digit_of: dict[int, int] = {}
    in_use: set[int] = set()

    def digit_token(d: int) -> str:
        return str(d) if d < 10 else f"%{d:02d}"

    out: list[str] = []

    def emit(u: int) -> None:
        out.append(_atom_token(mol, u))
        for bi in ring_at[u]:
            if bi in digit_of:
                d = digit_of.pop(bi)
                in_use.discard(d)
                out.append(digit_token(d))
            else:
                d = 1
                while d in in_use:
                    d += 1
                in_use.add(d)
                digit_of[bi] = d
                out.append(_bond_token(mol, mol.bonds[bi]) + digit_token(d))
        kids = children[u]
        for pos, bi in enumerate(kids):
            v = mol.bonds[bi].other(u)
            token = _bond_token(mol, mol.bonds[bi])
            if pos < len(kids) - 1:
                out.append("(" + token)
                emit(v)
                out.append(")")
            else:
                out.append(token)
                emit(v)

    emit(start)
    return "".join(out)


def _write_by_ranks(mol: MolGraph, ranks: list[int]) -> str:
    start = min(range(len(mol.atoms)), key=lambda i: ranks[i])

    def order(u: int, bond_indices: list[int]) -> list[int]:
        return sorted(bond_indices, key=lambda bi: ranks[mol.bonds[bi].other(u)])

    return _write(mol, start, order)


def _min_string(mol: MolGraph, ranks: list[int], budget: list[int]) -> str:
    ranks = _refine(mol, ranks)
    n = len(mol.atoms)
    if len(set(ranks)) == n:
        return _write_by_ranks(mol, ranks)

    by_rank: dict[int, list[int]] = {}
    for i, r in enumerate(ranks):
        by_rank.setdefault(r, []).append(i)
    tied = min(r for r, members in by_rank.items() if len(members) > 1)
    members = by_rank[tied]

    best: str | None = None
    for atom in members:
        promoted = [2 * r for r in ranks]
        promoted[atom] -= 1
        candidate = _min_string(mol, _dense_ranks(promoted), budget)
        if best is None or candidate < best:
            best = candidate
        budget[0] -= 1
        if budget[0] <= 0:
            break
    assert best is not None
    return best


def canonical_key(mol: MolGraph) -> str:
    """Deterministic canonical SMILES; identical for every atom ordering of
    the same molecule. Input must be valid; kekulizes internally when needed."""
    if not mol.kekulized:
        mol = kekulize(mol)
    ranks = _dense_ranks(_initial_keys(mol))
    return _min_string(mol, ranks, [_LEAF_BUDGET])


def randomize(mol: MolGraph, rng: np.random.Generator) -> str:
    """Random-start, random-branch-order SMILES of the same molecule."""
    if not mol.kekulized:
        mol = kekulize(mol)
    start = int(rng.integers(len(mol.atoms)))

    def order(u: int, bond_indices: list[int]) -> list[int]:
        perm = rng.permutation(len(bond_indices))
        return [bond_indices[p] for p in perm]

    return _write(mol, start, order)
