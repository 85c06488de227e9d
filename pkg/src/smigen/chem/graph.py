"""Molecular graph primitives: atoms, bonds, ring perception, valence rules."""

from __future__ import annotations

from dataclasses import dataclass, field

ORGANIC_ELEMENTS = frozenset({"H", "B", "C", "N", "O", "F", "S", "Cl", "Br", "I"})

# Elements that may carry the aromatic (lowercase) flag.
AROMATIC_ELEMENTS = frozenset({"B", "C", "N", "O", "S"})

ATOMIC_WEIGHTS = {
    "H": 1.008,
    "B": 10.81,
    "C": 12.011,
    "N": 14.007,
    "O": 15.999,
    "F": 18.998,
    "S": 32.06,
    "Cl": 35.45,
    "Br": 79.904,
    "I": 126.904,
}

# Allowed total valences (bond orders + hydrogens) keyed by element and
# formal charge. Combinations absent from this table are invalid.
ALLOWED_VALENCES: dict[tuple[str, int], tuple[int, ...]] = {
    ("H", 0): (1,),
    ("B", 0): (3,),
    ("C", 0): (4,),
    ("N", 0): (3,),
    ("N", 1): (4,),
    ("O", 0): (2,),
    ("O", -1): (1,),
    ("F", 0): (1,),
    ("Cl", 0): (1,),
    ("Br", 0): (1,),
    ("I", 0): (1,),
    ("S", 0): (2, 4, 6),
}

SINGLE = 1
DOUBLE = 2
TRIPLE = 3


class ParseError(ValueError):
    """Base class for SMILES parsing failures."""


class EmptyInput(ParseError):
    pass


class UnknownToken(ParseError):
    pass


class UnbalancedBranch(ParseError):
    pass


class UnclosedRing(ParseError):
    """Ring-closure digit misuse: dangling, self-closing or duplicated."""


class KekulizationError(ValueError):
    """No single/double assignment satisfies the aromatic system."""


class AromaticAtomOutsideRing(KekulizationError):
    pass


@dataclass
class Atom:
    element: str
    aromatic: bool = False
    charge: int = 0
    # Hydrogen count written explicitly in a bracket token; None for bare atoms.
    explicit_h: int | None = None
    index: int = 0
    in_ring: bool = False
    # Total hydrogens (explicit or implied); filled in by kekulize().
    h_total: int = 0


@dataclass
class Bond:
    a: int
    b: int
    order: int = SINGLE
    aromatic: bool = False
    in_ring: bool = False

    def other(self, idx: int) -> int:
        return self.b if idx == self.a else self.a


@dataclass
class MolGraph:
    atoms: list[Atom] = field(default_factory=list)
    bonds: list[Bond] = field(default_factory=list)
    kekulized: bool = False

    def __post_init__(self) -> None:
        self._adj: list[list[int]] | None = None

    @property
    def adjacency(self) -> list[list[int]]:
        """Per-atom list of incident bond indices."""
        if self._adj is None or len(self._adj) != len(self.atoms):
            adj: list[list[int]] = [[] for _ in self.atoms]
            for bi, bond in enumerate(self.bonds):
                adj[bond.a].append(bi)
                adj[bond.b].append(bi)
            self._adj = adj
        return self._adj

    def neighbors(self, idx: int) -> list[tuple[int, Bond]]:
        return [(self.bonds[bi].other(idx), self.bonds[bi]) for bi in self.adjacency[idx]]

    def degree(self, idx: int) -> int:
        return len(self.adjacency[idx])

    def bond_order_sum(self, idx: int) -> int:
        """Sum of incident bond orders, aromatic bonds counted at their
        current order (1 before kekulization)."""
        return sum(self.bonds[bi].order for bi in self.adjacency[idx])

    def copy(self) -> "MolGraph":
        atoms = [Atom(a.element, a.aromatic, a.charge, a.explicit_h, a.index, a.in_ring, a.h_total)
                 for a in self.atoms]
        bonds = [Bond(b.a, b.b, b.order, b.aromatic, b.in_ring) for b in self.bonds]
        return MolGraph(atoms=atoms, bonds=bonds, kekulized=self.kekulized)


def perceive_rings(mol: MolGraph) -> None:
    """Flag ring bonds (non-bridge edges) and ring atoms via bridge finding."""
    n = len(mol.atoms)
    disc = [-1] * n
    low = [0] * n
    is_bridge = [False] * len(mol.bonds)
    timer = 0
    for root in range(n):
        if disc[root] != -1:
            continue
        # Iterative DFS; stack entries are (atom, incoming bond index, iterator pos).
        stack = [(root, -1, 0)]
        disc[root] = low[root] = timer
        timer += 1
        while stack:
            u, in_bi, it = stack[-1]
            incident = mol.adjacency[u]
            if it < len(incident):
                stack[-1] = (u, in_bi, it + 1)
                bi = incident[it]
                if bi == in_bi:
                    continue
                v = mol.bonds[bi].other(u)
                if disc[v] == -1:
                    disc[v] = low[v] = timer
                    timer += 1
                    stack.append((v, bi, 0))
                else:
                    low[u] = min(low[u], disc[v])
            else:
                stack.pop()
                if stack:
                    p, p_bi, _ = stack[-1]
                    low[p] = min(low[p], low[u])
                    if low[u] > disc[p]:
                        is_bridge[in_bi] = True

    for bi, bond in enumerate(mol.bonds):
        bond.in_ring = not is_bridge[bi]
    for atom in mol.atoms:
        atom.in_ring = False
    for bond in mol.bonds:
        if bond.in_ring:
            mol.atoms[bond.a].in_ring = True
            mol.atoms[bond.b].in_ring = True


def default_valence(element: str, bond_sum: int) -> int | None:
    """Smallest allowed neutral valence that accommodates `bond_sum`."""
    allowed = ALLOWED_VALENCES.get((element, 0))
    if allowed is None:
        return None
    for v in allowed:
        if v >= bond_sum:
            return v
    return None


def valence_allowed(element: str, charge: int, total: int) -> bool:
    allowed = ALLOWED_VALENCES.get((element, charge))
    return allowed is not None and total in allowed
