"""SMILES tokenizer and parser for the organic element subset.

Accepts both raw SMILES and the single-character training encoding
(L = Cl, R = Br, A = [nH]). Multi-component strings are rejected here;
splitting on '.' happens upstream.
"""

from __future__ import annotations

from .graph import (
    AROMATIC_ELEMENTS,
    ORGANIC_ELEMENTS,
    Atom,
    Bond,
    DOUBLE,
    EmptyInput,
    MolGraph,
    SINGLE,
    TRIPLE,
    UnbalancedBranch,
    UnclosedRing,
    UnknownToken,
    perceive_rings,
)

_BOND_ORDERS = {"-": SINGLE, "=": DOUBLE, "#": TRIPLE}
_AROMATIC_LOWER = {"b", "c", "n", "o", "s"}
_TWO_CHAR = ("Cl", "Br")
_SINGLE_UPPER = frozenset("BCNOFSI")
_DIGITS = frozenset("0123456789")


def _parse_bracket(text: str, start: int) -> tuple[Atom, int]:
    """Parse a bracket atom starting at the '[' in `text`; returns the atom
    and the index one past the closing ']'."""
    end = text.find("]", start)
    if end < 0:
        raise UnknownToken(f"unterminated bracket atom at position {start}")
    body = text[start + 1:end]
    pos = 0
    if not body:
        raise UnknownToken("empty bracket atom")
    if body[0] in _DIGITS:
        raise UnknownToken(f"isotopes not supported: [{body}]")

    aromatic = False
    element = None
    for sym in _TWO_CHAR:
        if body.startswith(sym):
            element = sym
            pos = 2
            break
    if element is None:
        ch = body[0]
        if ch in _AROMATIC_LOWER:
            element = ch.upper()
            aromatic = True
            pos = 1
        elif ch.isupper() and ch in ORGANIC_ELEMENTS:
            element = ch
            pos = 1
        else:
            raise UnknownToken(f"unsupported element in bracket: [{body}]")

    h_count = 0
    if pos < len(body) and body[pos] == "H" and element != "H":
        pos += 1
        num = ""
        while pos < len(body) and body[pos] in _DIGITS:
            num += body[pos]
            pos += 1
        h_count = int(num) if num else 1

    charge = 0
    if pos < len(body) and body[pos] in "+-":
        sign = 1 if body[pos] == "+" else -1
        symbol = body[pos]
        pos += 1
        if pos < len(body) and body[pos] == symbol:
            charge = 2 * sign
            pos += 1
        else:
            num = ""
            while pos < len(body) and body[pos] in _DIGITS:
                num += body[pos]
                pos += 1
            charge = sign * (int(num) if num else 1)

    if pos != len(body):
        raise UnknownToken(f"unsupported bracket atom content: [{body}]")
    return Atom(element=element, aromatic=aromatic, charge=charge, explicit_h=h_count), end + 1


def parse(smiles: str) -> MolGraph:
    """Parse a single-component SMILES string into a molecular graph.

    Atom order follows writing order. Raises EmptyInput, UnknownToken,
    UnbalancedBranch or UnclosedRing (all ParseError subclasses).
    """
    text = smiles.strip()
    if not text:
        raise EmptyInput("empty SMILES string")

    mol = MolGraph()
    prev: int | None = None
    pending: int | None = None  # explicit bond order; 0 encodes ':'
    branch_stack: list[int] = []
    ring_open: dict[int, tuple[int, int | None]] = {}
    # (atom pair) -> bond index, to reject duplicate bonds
    seen_pairs: set[tuple[int, int]] = set()

    def add_atom(atom: Atom) -> None:
        nonlocal prev, pending
        atom.index = len(mol.atoms)
        mol.atoms.append(atom)
        if prev is not None:
            _add_bond(prev, atom.index, pending)
        prev = atom.index
        pending = None

    def _add_bond(a: int, b: int, spec: int | None) -> None:
        if a == b:
            raise UnclosedRing("ring closure bonds an atom to itself")
        pair = (min(a, b), max(a, b))
        if pair in seen_pairs:
            raise UnclosedRing(f"duplicate bond between atoms {a} and {b}")
        seen_pairs.add(pair)
        if spec == 0:
            if not (mol.atoms[a].aromatic and mol.atoms[b].aromatic):
                raise UnknownToken("':' bond requires two aromatic atoms")
            mol.bonds.append(Bond(a, b, SINGLE, aromatic=True))
        elif spec is None:
            # Unmarked; resolved to aromatic or single after ring perception.
            mol.bonds.append(Bond(a, b, SINGLE, aromatic=False))
            _unmarked.append(len(mol.bonds) - 1)
        else:
            mol.bonds.append(Bond(a, b, spec, aromatic=False))

    _unmarked: list[int] = []

    i = 0
    n = len(text)
    while i < n:
        ch = text[i]

        if ch == "L":
            add_atom(Atom(element="Cl"))
            i += 1
        elif ch == "R":
            add_atom(Atom(element="Br"))
            i += 1
        elif ch == "A":
            add_atom(Atom(element="N", aromatic=True, explicit_h=1))
            i += 1
        elif text.startswith(_TWO_CHAR[0], i) or text.startswith(_TWO_CHAR[1], i):
            add_atom(Atom(element=text[i:i + 2]))
            i += 2
        elif ch in _SINGLE_UPPER:
            add_atom(Atom(element=ch))
            i += 1
        elif ch in _AROMATIC_LOWER:
            add_atom(Atom(element=ch.upper(), aromatic=True))
            i += 1
        elif ch == "[":
            atom, i = _parse_bracket(text, i)
            add_atom(atom)
        elif ch in _BOND_ORDERS or ch == ":":
            if prev is None:
                raise UnknownToken("bond symbol before any atom")
            if pending is not None:
                raise UnknownToken("two consecutive bond symbols")
            pending = 0 if ch == ":" else _BOND_ORDERS[ch]
            i += 1
        elif ch == "(":
            if prev is None:
                raise UnbalancedBranch("branch opened before any atom")
            if pending is not None:
                raise UnknownToken("bond symbol before '('")
            branch_stack.append(prev)
            i += 1
        elif ch == ")":
            if not branch_stack:
                raise UnbalancedBranch("unmatched ')'")
            if pending is not None:
                raise UnknownToken("dangling bond before ')'")
            prev = branch_stack.pop()
            i += 1
        elif ch in _DIGITS or ch == "%":
            if ch == "%":
                if i + 2 >= n or text[i + 1] not in _DIGITS or text[i + 2] not in _DIGITS:
                    raise UnknownToken("'%' must be followed by two digits")
                num = int(text[i + 1:i + 3])
                i += 3
            else:
                num = int(ch)
                i += 1
            if prev is None:
                raise UnknownToken("ring closure digit before any atom")
            if num in ring_open:
                other, other_spec = ring_open.pop(num)
                if pending is not None and other_spec is not None and pending != other_spec:
                    raise UnclosedRing(f"conflicting bond orders on ring closure {num}")
                _add_bond(other, prev, pending if pending is not None else other_spec)
                pending = None
            else:
                ring_open[num] = (prev, pending)
                pending = None
        else:
            raise UnknownToken(f"unexpected character {ch!r} at position {i}")

    if branch_stack:
        raise UnbalancedBranch(f"{len(branch_stack)} unclosed '('")
    if ring_open:
        raise UnclosedRing(f"dangling ring closure digits: {sorted(ring_open)}")
    if pending is not None:
        raise UnknownToken("dangling bond symbol at end of string")

    perceive_rings(mol)
    # An unmarked bond is aromatic only when it joins two aromatic atoms
    # inside a ring; between rings (e.g. biphenyl) it stays single.
    for bi in _unmarked:
        bond = mol.bonds[bi]
        if bond.in_ring and mol.atoms[bond.a].aromatic and mol.atoms[bond.b].aromatic:
            bond.aromatic = True
    return mol
