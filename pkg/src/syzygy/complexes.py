"""Regular CW complexes as face posets with signed incidences, and their
integer homology.

A complex is stored purely combinatorially: cells with a dimension and an
optional label, plus a signed boundary list per cell.  Barycentric
subdivision, links and dual blocks are all order-theoretic constructions on
the face poset; no geometric realization exists anywhere.  Homology goes
through Smith normal form, and chain groups may carry cyclic annotations
(generator orders such as Z/2) which are realized as extra relation rows, so
one engine serves both plain cellular homology and the coinvariant complexes
produced by the surface-model machinery.

The cellular-manifold test of validate() is deliberately only the homological
shadow of the real condition: it checks that every link has the homology of a
sphere of the expected dimension, not that it is homeomorphic to one.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .smith import (
    FGAbelianGroup,
    Matrix,
    is_zero_matrix,
    mat_mul,
    presented_homology,
    zeros,
)

CellId = object  # hashable


@dataclass(frozen=True)
class Cell:
    id: object
    dim: int
    label: str = ""


class RegularCWComplex:
    """Face poset with signed boundary incidences.

    ``boundary[cid]`` lists (face id, sign) pairs, one per codimension-1 face
    of the cell; regularity demands that no face is listed twice.
    """

    def __init__(self, cells, boundary):
        self.cells: dict = {}
        for c in cells:
            if c.id in self.cells:
                raise ValueError(f"duplicate cell id {c.id!r}")
            self.cells[c.id] = c
        self.boundary: dict = {cid: tuple(boundary.get(cid, ())) for cid in self.cells}
        for cid, faces in boundary.items():
            if cid not in self.cells:
                raise ValueError(f"boundary given for unknown cell {cid!r}")

    # -- basic queries ----------------------------------------------------

    @property
    def dimension(self) -> int:
        return max((c.dim for c in self.cells.values()), default=-1)

    def cells_of_dim(self, d: int) -> list:
        out = [c for c in self.cells.values() if c.dim == d]
        out.sort(key=lambda c: repr(c.id))
        return out

    def faces(self, cid) -> set:
        """All proper faces of a cell (transitive closure of the boundary)."""
        seen = set()
        stack = [fid for fid, _ in self.boundary[cid]]
        while stack:
            f = stack.pop()
            if f not in seen:
                seen.add(f)
                stack.extend(fid for fid, _ in self.boundary[f])
        return seen

    def euler_characteristic(self) -> int:
        return sum((-1) ** c.dim for c in self.cells.values())

    # -- validation --------------------------------------------------------

    def validate(self) -> "ValidationReport":
        failures = []
        link_failures = []
        for cid, faces in self.boundary.items():
            dim = self.cells[cid].dim
            seen = set()
            for fid, sign in faces:
                if fid not in self.cells:
                    failures.append(f"cell {cid!r}: dangling boundary id {fid!r}")
                    continue
                if sign not in (1, -1):
                    failures.append(f"cell {cid!r}: sign {sign} is not +-1")
                if self.cells[fid].dim != dim - 1:
                    failures.append(
                        f"cell {cid!r} (dim {dim}): face {fid!r} has dim {self.cells[fid].dim}"
                    )
                if fid in seen:
                    failures.append(f"cell {cid!r}: face {fid!r} listed twice (regularity)")
                seen.add(fid)
            if dim > 0 and not faces:
                failures.append(f"cell {cid!r} has dimension {dim} but empty boundary")
        if not failures:
            cc = self.chain_complex()
            for d in range(2, self.dimension + 1):
                if not is_zero_matrix(mat_mul(cc.boundaries[d - 1], cc.boundaries[d])):
                    failures.append(f"d o d != 0 between degrees {d} and {d - 2}")
        if not failures:
            n = self.dimension
            sd = self.barycentric_subdivision()
            for cid, cell in sorted(self.cells.items(), key=lambda kv: repr(kv[0])):
                link = _chain_subcomplex(self, sd, cid, include_cell=False)
                expected = n - cell.dim - 1
                if not _is_sphere_homology(link, expected):
                    link_failures.append(
                        f"cell {cid!r} (dim {cell.dim}): link is not an S^{expected} homology sphere"
                    )
        return ValidationReport(
            structure_ok=not failures,
            failures=failures,
            link_failures=link_failures,
        )

    # -- subdivision and blocks ---------------------------------------------

    def barycentric_subdivision(self) -> "RegularCWComplex":
        """Simplicial complex with one vertex per cell and one simplex per
        strict inclusion chain of cells."""
        order = {cid: (self.cells[cid].dim, repr(cid)) for cid in self.cells}
        face_sets = {cid: self.faces(cid) for cid in self.cells}
        chains = [(cid,) for cid in self.cells]
        frontier = list(chains)
        while frontier:
            new = []
            for chain in frontier:
                top = chain[-1]
                for cid in self.cells:
                    if top in face_sets[cid]:
                        new.append(chain + (cid,))
            chains.extend(new)
            frontier = new
        cells = []
        boundary = {}
        for chain in chains:
            labels = "<".join(str(self.cells[c].label or c) for c in chain)
            cells.append(Cell(id=chain, dim=len(chain) - 1, label=labels))
            faces = []
            if len(chain) > 1:
                for i in range(len(chain)):
                    sub = chain[:i] + chain[i + 1:]
                    faces.append((sub, (-1) ** i))
            boundary[chain] = faces
        return RegularCWComplex(cells, boundary)

    def link(self, cid) -> "RegularCWComplex":
        """Subcomplex of the subdivision spanned by chains strictly above the cell."""
        if cid not in self.cells:
            raise KeyError(f"unknown cell {cid!r}")
        return _chain_subcomplex(self, self.barycentric_subdivision(), cid, include_cell=False)

    def dual_block(self, cid) -> "RegularCWComplex":
        """Closed dual block: chains whose members all contain the cell."""
        if cid not in self.cells:
            raise KeyError(f"unknown cell {cid!r}")
        return _chain_subcomplex(self, self.barycentric_subdivision(), cid, include_cell=True)

    # -- homology ------------------------------------------------------------

    def chain_complex(self) -> "IntegerChainComplex":
        dim = self.dimension
        by_dim = [self.cells_of_dim(d) for d in range(dim + 1)]
        index = {}
        for d, cells in enumerate(by_dim):
            for i, c in enumerate(cells):
                index[c.id] = (d, i)
        ranks = [len(cells) for cells in by_dim]
        boundaries = [zeros(0, ranks[0]) if dim >= 0 else []]
        for d in range(1, dim + 1):
            m = zeros(ranks[d - 1], ranks[d])
            for j, cell in enumerate(by_dim[d]):
                for fid, sign in self.boundary[cell.id]:
                    m[index[fid][1]][j] += sign
            boundaries.append(m)
        return IntegerChainComplex(ranks=ranks, boundaries=boundaries)

    def homology(self, degree: int) -> FGAbelianGroup:
        return self.chain_complex().homology(degree)

    # -- serialization ---------------------------------------------------------

    def to_json_dict(self) -> dict:
        cells = [
            {"id": c.id, "dim": c.dim, "label": c.label}
            for c in sorted(self.cells.values(), key=lambda c: (c.dim, repr(c.id)))
        ]
        boundary = {
            str(cid): [[fid, sign] for fid, sign in faces]
            for cid, faces in sorted(self.boundary.items(), key=lambda kv: repr(kv[0]))
            if faces
        }
        return {"cells": cells, "boundary": boundary}

    @classmethod
    def from_json_dict(cls, data: dict) -> "RegularCWComplex":
        cells = [Cell(id=c["id"], dim=c["dim"], label=c.get("label", "")) for c in data["cells"]]
        ids = {str(c.id): c.id for c in cells}
        boundary = {}
        for key, faces in data.get("boundary", {}).items():
            if key not in ids:
                raise ValueError(f"boundary references unknown cell {key!r}")
            boundary[ids[key]] = [(f[0], f[1]) for f in faces]
        # ids inside boundary lists may be strings in the file
        fixed = {}
        for cid, faces in boundary.items():
            fixed[cid] = [(ids.get(str(fid), fid), sign) for fid, sign in faces]
        return cls(cells, fixed)


@dataclass
class ValidationReport:
    structure_ok: bool
    failures: list = field(default_factory=list)
    link_failures: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.structure_ok and not self.link_failures

    def summary(self) -> str:
        if self.valid:
            return "valid"
        return "; ".join(self.failures + self.link_failures)


def _chain_subcomplex(base, sd, cid, include_cell):
    """Cells of the subdivision whose chains lie (weakly) above ``cid``."""
    keep = []
    for chain_id in sd.cells:
        members = chain_id
        if include_cell:
            ok = all(m == cid or cid in base.faces(m) for m in members)
        else:
            ok = all(m != cid and cid in base.faces(m) for m in members)
        if ok:
            keep.append(chain_id)
    keep_set = set(keep)
    cells = [sd.cells[c] for c in keep]
    boundary = {
        c: [(f, s) for f, s in sd.boundary[c] if f in keep_set] for c in keep
    }
    return RegularCWComplex(cells, boundary)


def _is_sphere_homology(complex_, n: int) -> bool:
    """Does the complex have the homology of S^n?  (S^-1 is the empty space.)"""
    if n < 0:
        return not complex_.cells
    if not complex_.cells:
        return False
    top = max(n, complex_.dimension)
    for d in range(top + 1):
        h = complex_.homology(d)
        if n == 0:
            want = FGAbelianGroup(2) if d == 0 else FGAbelianGroup(0)
        else:
            want = FGAbelianGroup(1) if d in (0, n) else FGAbelianGroup(0)
        if h != want:
            return False
    return True


class IntegerChainComplex:
    """Chain complex of (possibly annotated) free abelian groups.

    ``ranks[d]`` is the number of degree-d generators; ``boundaries[d]`` is
    the matrix of the map from degree d to degree d-1 (``boundaries[0]`` is an
    empty matrix).  ``cyclic[d][i] = m`` marks generator i of degree d as a
    Z/m generator; the homology engine appends the relation m*e_i = 0.
    """

    def __init__(self, ranks, boundaries, cyclic=None):
        self.ranks = list(ranks)
        self.boundaries = boundaries
        self.cyclic = {int(d): {int(i): int(m) for i, m in v.items()} for d, v in (cyclic or {}).items()}
        for d in range(1, len(self.ranks)):
            m = self.boundaries[d]
            rows = len(m)
            cols = len(m[0]) if m else 0
            if self.ranks[d] and (rows != self.ranks[d - 1] or cols != self.ranks[d]):
                if not (self.ranks[d - 1] == 0 and rows == 0):
                    raise ValueError(f"boundary {d} has shape {rows}x{cols}, "
                                     f"expected {self.ranks[d-1]}x{self.ranks[d]}")

    @property
    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def check_composition(self) -> bool:
        for d in range(2, len(self.ranks)):
            a, b = self.boundaries[d - 1], self.boundaries[d]
            if a and b and not is_zero_matrix(mat_mul(a, b)):
                if not self.cyclic:
                    return False
                # with annotations, defer to the homology engine's finer check
        return True

    def homology(self, degree: int) -> FGAbelianGroup:
        if degree < 0 or degree > self.top_degree:
            return FGAbelianGroup(0)
        n_mid = self.ranks[degree]
        n_target = self.ranks[degree - 1] if degree >= 1 else 0
        a = self.boundaries[degree] if degree >= 1 else []
        b = (
            self.boundaries[degree + 1]
            if degree + 1 <= self.top_degree
            else zeros(n_mid, 0)
        )
        return presented_homology(
            a,
            b,
            n_mid,
            n_target,
            relations_mid=self.cyclic.get(degree, {}),
            relations_target=self.cyclic.get(degree - 1, {}),
        )

    def all_homology(self) -> list[FGAbelianGroup]:
        return [self.homology(d) for d in range(self.top_degree + 1)]

    def to_json_dict(self) -> dict:
        return {
            "ranks": self.ranks,
            "boundaries": [self.boundaries[d] for d in range(1, len(self.ranks))],
            "cyclic": {str(d): {str(i): m for i, m in v.items()} for d, v in self.cyclic.items() if v},
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "IntegerChainComplex":
        ranks = [int(r) for r in data["ranks"]]
        mats = data.get("boundaries", [])
        if len(mats) != max(len(ranks) - 1, 0):
            raise ValueError(
                f"expected {max(len(ranks) - 1, 0)} boundary matrices, got {len(mats)}"
            )
        boundaries = [zeros(0, ranks[0]) if ranks else []]
        for d, mat in enumerate(mats, start=1):
            m = [[int(x) for x in row] for row in mat]
            if len(m) != ranks[d - 1] or any(len(row) != ranks[d] for row in m):
                raise ValueError(f"boundary {d} does not match the stated ranks")
            boundaries.append(m)
        return cls(ranks, boundaries, data.get("cyclic"))


def load_complex_file(path):
    """Read either a CW-complex or a chain-complex JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    if "cells" in data:
        return RegularCWComplex.from_json_dict(data)
    if "ranks" in data:
        return IntegerChainComplex.from_json_dict(data)
    raise ValueError("file is neither a CW complex ('cells') nor a chain complex ('ranks')")
