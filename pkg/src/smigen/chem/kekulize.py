"""Aromatic bond assignment and hydrogen-count resolution."""

from __future__ import annotations

from .graph import (
    AromaticAtomOutsideRing,
    KekulizationError,
    MolGraph,
    default_valence,
)

_MATCH_STEP_LIMIT = 1_000_000


def _needs_double(mol: MolGraph, idx: int) -> bool:
    """An aromatic atom needs exactly one double bond when its valence is not
    already satisfied by sigma bonds plus explicit hydrogens."""
    atom = mol.atoms[idx]
    s = mol.bond_order_sum(idx) + (atom.explicit_h or 0)
    if atom.charge != 0:
        from .graph import ALLOWED_VALENCES

        allowed = ALLOWED_VALENCES.get((atom.element, atom.charge))
        if allowed is None:
            return False
        target = next((v for v in allowed if v >= s), None)
    else:
        target = default_valence(atom.element, s)
    return target is not None and s < target


def _perfect_matching(nodes: list[int], adj: dict[int, list[int]]) -> dict[int, int] | None:
    """Deterministic backtracking search for a perfect matching covering
    every node; None when impossible."""
    if len(nodes) % 2:
        return None
    match: dict[int, int] = {}
    steps = 0

    def rec(pos: int) -> bool:
        nonlocal steps
        while pos < len(nodes) and nodes[pos] in match:
            pos += 1
        if pos == len(nodes):
            return True
        u = nodes[pos]
        for v in adj[u]:
            steps += 1
            if steps > _MATCH_STEP_LIMIT:
                raise KekulizationError("aromatic system too large to kekulize")
            if v not in match:
                match[u] = v
                match[v] = u
                if rec(pos + 1):
                    return True
                del match[u]
                del match[v]
        return False

    return match if rec(0) else None


def kekulize(mol: MolGraph) -> MolGraph:
    """Assign single/double orders to aromatic bonds and fill per-atom
    hydrogen counts. Returns a new graph; the input is untouched.

    Raises AromaticAtomOutsideRing for acyclic aromatic atoms and
    KekulizationError when no assignment exists.
    """
    out = mol.copy()
    if mol.kekulized:
        return out

    aromatic_atoms = [a.index for a in out.atoms if a.aromatic]
    for idx in aromatic_atoms:
        if not out.atoms[idx].in_ring:
            raise AromaticAtomOutsideRing(f"aromatic atom {idx} is not in a ring")

    needy = [idx for idx in aromatic_atoms if _needs_double(out, idx)]
    needy_set = set(needy)
    adj: dict[int, list[int]] = {idx: [] for idx in needy}
    edge_of: dict[tuple[int, int], int] = {}
    for bi, bond in enumerate(out.bonds):
        if bond.aromatic and bond.a in needy_set and bond.b in needy_set:
            adj[bond.a].append(bond.b)
            adj[bond.b].append(bond.a)
            edge_of[(min(bond.a, bond.b), max(bond.a, bond.b))] = bi

    match = _perfect_matching(needy, adj)
    if match is None:
        raise KekulizationError("no valid single/double assignment for aromatic system")

    for u, v in match.items():
        if u < v:
            out.bonds[edge_of[(u, v)]].order = 2

    for atom in out.atoms:
        if atom.explicit_h is not None:
            atom.h_total = atom.explicit_h
        elif atom.charge == 0:
            s = out.bond_order_sum(atom.index)
            target = default_valence(atom.element, s)
            atom.h_total = (target - s) if target is not None else 0
        else:
            atom.h_total = 0
    out.kekulized = True
    return out
