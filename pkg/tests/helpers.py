"""Shared complex builders for the test suite."""

from itertools import combinations

from syzygy.complexes import Cell, RegularCWComplex


def build_point():
    return RegularCWComplex([Cell("p", 0)], {"p": []})


def build_interval():
    cells = [Cell("a", 0), Cell("b", 0), Cell("ab", 1)]
    return RegularCWComplex(cells, {"ab": [("b", 1), ("a", -1)]})


def build_cycle(n):
    """Boundary of an n-gon: n vertices, n edges."""
    cells = [Cell(f"v{i}", 0) for i in range(n)]
    cells += [Cell(f"e{i}", 1) for i in range(n)]
    boundary = {f"e{i}": [(f"v{(i + 1) % n}", 1), (f"v{i}", -1)] for i in range(n)}
    return RegularCWComplex(cells, boundary)


def build_octahedron():
    """Surface of the octahedron: 6 vertices, 12 edges, 8 triangles."""
    # vertices 0/1, 2/3, 4/5 are antipodal pairs
    vertices = list(range(6))
    antipodal = {0: 1, 1: 0, 2: 3, 3: 2, 4: 5, 5: 4}
    cells = [Cell(f"v{i}", 0) for i in vertices]
    boundary = {f"v{i}": [] for i in vertices}
    edges = {}
    for a, b in combinations(vertices, 2):
        if antipodal[a] != b:
            eid = f"e{a}{b}"
            edges[(a, b)] = eid
            cells.append(Cell(eid, 1))
            boundary[eid] = [(f"v{b}", 1), (f"v{a}", -1)]

    def edge_sign(a, b):
        key = (min(a, b), max(a, b))
        return edges[key], (1 if a < b else -1)

    for x in (0, 1):
        for y in (2, 3):
            for z in (4, 5):
                fid = f"f{x}{y}{z}"
                cells.append(Cell(fid, 2))
                sides = []
                cycle = [x, y, z]
                for i in range(3):
                    a, b = cycle[i], cycle[(i + 1) % 3]
                    eid, sign = edge_sign(a, b)
                    sides.append((eid, sign))
                boundary[fid] = sides
    return RegularCWComplex(cells, boundary)
