"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with  pytest tests/test_acceptance.py -v -s  to see the per-criterion
lines as they execute.  Criterion 6 is asserted exactly as stated; the stated
constants are not attainable from the truncated complex (see the companion
oracle tests in test_surfaces.py for the verified values), so it reports FAIL
honestly rather than being weakened.
"""

import random
import time
from math import comb, gcd

import pytest

from syzygy.formal import FormalGroup, FormalHom, cokernel, kernel
from syzygy.lattice import BlowupLattice
from syzygy.smith import (
    FGAbelianGroup,
    determinant,
    is_zero_matrix,
    mat_mul,
    smith_normal_form,
)
from syzygy.spectral import (
    KnownHomologyRegistry,
    cremona_assemble,
    cremona_row1_complex,
    k2_prime_candidates,
    prop_s17_sequence,
    row1_homology,
    ruled_row1_complex,
    schur_aut_quadric,
    schur_pgl,
)
from syzygy.surfaces import (
    GeneratorUniverse,
    cubic_summary,
    row0_complex,
    row0_homology,
    syzygy_sphere_bl3,
)


def Z2n(n):
    return FGAbelianGroup.from_orders(0, [2] * n)


def announce(num, ok, detail):
    print(f"\nACCEPTANCE {num:02d}: {'PASS' if ok else 'FAIL'} - {detail}")
    return ok


class Timer:
    def __enter__(self):
        self.t0 = time.monotonic()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.monotonic() - self.t0


def test_acceptance_01_line_counts():
    with Timer() as t:
        counts = tuple(len(BlowupLattice(n).enumerate_lines()) for n in range(7))
    ok = counts == (0, 1, 3, 6, 10, 16, 27) and t.elapsed < 1.0
    assert announce(1, ok, f"line counts n=0..6 = {counts} in {t.elapsed:.2f}s")
    assert counts == (0, 1, 3, 6, 10, 16, 27)
    assert t.elapsed < 1.0


def test_acceptance_02_hexagon():
    with Timer() as t:
        lat = BlowupLattice(3)
        g = lat.incidence_graph(lat.enumerate_lines(), 1)
        single = g.is_single_cycle() and len(g.vertices) == 6
    ok = single and t.elapsed < 1.0
    assert announce(2, ok, f"the six (-1)-classes form a single 6-cycle in {t.elapsed:.2f}s")


def test_acceptance_03_syzygy_sphere():
    with Timer() as t:
        sphere = syzygy_sphere_bl3()
        report = sphere.validate()
        vertices = len(sphere.cells_of_dim(0))
        triangles = all(len(sphere.boundary[c.id]) == 3 for c in sphere.cells_of_dim(2))
        chi = sphere.euler_characteristic()
    ok = vertices == 9 and triangles and chi == 2 and report.valid and t.elapsed < 1.0
    assert announce(
        3, ok,
        f"sphere: {vertices} vertices, triangles={triangles}, chi={chi}, "
        f"valid={report.valid} in {t.elapsed:.2f}s",
    )


def test_acceptance_04_cubic_summary():
    with Timer() as t:
        report = cubic_summary()
    ok = (
        report["divisorial_facet_models"] == 27
        and report["enumeration_order_independent"]
        and report["recorded_fibration_count"] == 216
        and report["recorded_vertex_count"] == 243
        and len(report["flags"]) > 0  # discrepancy flagged, not asserted
        and t.elapsed < 30.0
    )
    assert announce(
        4, ok,
        f"cubic: 27 facet models, two enumeration orders agree "
        f"(ordered={report['fibration_configurations_ordered']}, "
        f"unordered={report['fibration_configurations_unordered']}), "
        f"recorded 216/243 flagged in {t.elapsed:.2f}s",
    )


def test_acceptance_05_boundary_squares_to_zero():
    with Timer() as t:
        checked = 0
        for points in (3, 4, 5):
            for e_max in (3, 4, 5):
                u = GeneratorUniverse.ruled(points, e_max, r_max=4)
                cc, _ = row0_complex(u)
                for d in range(2, cc.top_degree + 1):
                    assert is_zero_matrix(mat_mul(cc.boundaries[d - 1], cc.boundaries[d]))
                    checked += 1
    ok = t.elapsed < 10.0
    assert announce(
        5, ok, f"d o d = 0 exactly on {checked} compositions across 9 universes "
        f"in {t.elapsed:.2f}s",
    )


def test_acceptance_06_row0_ruled_as_stated():
    """Asserted exactly as stated: E_{1,0} = (Z/2)^C(|T|,2) and
    E_{2,0} = (Z/2)^C(|T|,3).  The truncated complex built from the literal
    boundary formulas yields (Z/2)^(|T|-1) and (Z/2)^C(|T|-1,2) instead (the
    difference generators satisfy the cocycle relation, so the stated
    pair/triple-indexed families are generating sets, not bases); see the
    oracle-verified companion tests and the decisions ledger.  This criterion
    therefore fails honestly."""
    with Timer() as t:
        computed = {}
        stable = True
        for points in (3, 4, 5):
            seen = set()
            for e_max in (3, 4, 5):
                u = GeneratorUniverse.ruled(points, e_max, r_max=4)
                pair = (str(row0_homology(u, 1)), str(row0_homology(u, 2)))
                seen.add(pair)
            stable = stable and len(seen) == 1
            computed[points] = pair
    stated_ok = all(
        computed[p] == (str(Z2n(comb(p, 2))), str(Z2n(comb(p, 3))))
        for p in (3, 4, 5)
    )
    honest_ok = all(
        computed[p] == (str(Z2n(p - 1)), str(Z2n(comb(p - 1, 2))))
        for p in (3, 4, 5)
    )
    announce(
        6,
        stated_ok and stable,
        f"stated constants (Z/2)^C(|T|,2) / (Z/2)^C(|T|,3): {stated_ok}; "
        f"stable across e_max: {stable}; computed values "
        f"{ {p: computed[p] for p in (3, 4, 5)} } "
        f"(oracle-verified honest values match (Z/2)^(|T|-1), (Z/2)^C(|T|-1,2): {honest_ok}) "
        f"in {t.elapsed:.2f}s",
    )
    assert stable
    assert t.elapsed < 10.0
    for p in (3, 4, 5):
        assert computed[p] == (str(Z2n(comb(p, 2))), str(Z2n(comb(p, 3)))), (
            f"|T|={p}: computed {computed[p]}, stated "
            f"{(str(Z2n(comb(p, 2))), str(Z2n(comb(p, 3))))}; the stated value is not "
            "attainable from the truncated complex (see ledger)"
        )


def test_acceptance_07_row0_cremona():
    with Timer() as t:
        u4 = GeneratorUniverse.cremona(3, r_max=4)
        e10 = row0_homology(u4, 1)
        e20 = row0_homology(u4, 2)
        u5 = GeneratorUniverse.cremona(3, r_max=5)
        e30 = row0_homology(u5, 3)
    ok = e10.is_trivial and e20.is_trivial and e30.is_trivial and t.elapsed < 10.0
    assert announce(
        7, ok,
        f"plane universe: E_{{1,0}}={e10}, E_{{2,0}}={e20} (r_max=4); "
        f"E_{{3,0}}={e30} with rank-5 boundaries, in {t.elapsed:.2f}s",
    )


def test_acceptance_08_row1():
    reg = KnownHomologyRegistry.load()
    with Timer() as t:
        uc = GeneratorUniverse.cremona(3, r_max=5)
        rowc = cremona_row1_complex(uc, reg)
        c01 = row1_homology(rowc, 0)
        c11 = row1_homology(rowc, 1)
        ruled_ok = True
        for points in (3, 4, 5):
            ur = GeneratorUniverse.ruled(points, 3, r_max=4)
            rowr = ruled_row1_complex(ur, reg)
            got = row1_homology(rowr, 1)
            ruled_ok = ruled_ok and got == FormalGroup.atom("C*", points - 1)
    ok = c01.is_zero and c11.is_zero and ruled_ok and t.elapsed < 5.0
    assert announce(
        8, ok,
        f"plane E_{{0,1}}={c01}, E_{{1,1}}={c11}; ruled E_{{1,1}} has |T|-1 "
        f"copies of C* for |T|=3,4,5: {ruled_ok}, in {t.elapsed:.2f}s",
    )


def test_acceptance_09_schur():
    reg = KnownHomologyRegistry.load()
    with Timer() as t:
        p2 = schur_pgl(2, reg).value
        p3 = schur_pgl(3, reg).value
        quadric = schur_aut_quadric(reg).value
        k2p = {str(c) for c in k2_prime_candidates(reg)}
    ok = (
        str(p2) == "K2(C) (+) Z/2"
        and str(p3) == "K2(C) (+) Z/3"
        and str(quadric) == "K2(C) (+) Z/2"
        and k2p == {"K2(C) (+) Z/4", "K2(C) (+) Z/2 (+) Z/2"}
        and t.elapsed < 1.0
    )
    assert announce(
        9, ok,
        f"H2(PGL2)={p2}, H2(PGL3)={p3}, H2(Aut quadric)={quadric}, "
        f"K2' candidates={sorted(k2p)} in {t.elapsed:.2f}s",
    )


def test_acceptance_10_five_term_instance():
    reg = KnownHomologyRegistry.load()
    with Timer() as t:
        u = GeneratorUniverse.ruled(4, 3, r_max=5)
        seq = prop_s17_sequence(u, reg)
        labels = [term.label for term in seq.terms]
        shape_ok = labels == [
            "E_{3,0}", "E_{1,1}", "coker(E_{0,2}->H2)", "E_{2,0}",
            "E_{0,1}", "H1", "E_{1,0}", "0",
        ]
        e30 = seq.terms[0].group
        e11 = seq.terms[1].group
        known_ok = seq.fully_known_positions_exact()
    ok = (
        shape_ok
        and known_ok
        and e11 == FormalGroup.atom("C*", 3)
        and e30 is not None and e30.fg_part().torsion and
        all(d == 2 for d in e30.fg_part().torsion)
        and t.elapsed < 5.0
    )
    assert announce(
        10, ok,
        f"seven-term shape with E_{{3,0}}={e30}, E_{{1,1}}={e11}; all fully "
        f"known positions exact: {known_ok}, in {t.elapsed:.2f}s",
    )


def test_acceptance_11_final_assembly():
    reg = KnownHomologyRegistry.load()
    with Timer() as t:
        res = cremona_assemble(reg)
        names = {str(c) for c in res["candidates"]}
    expected = {
        "K2(C) (+) (+)_{Z}(Z/2)",
        "K2(C) (+) Z/3 (+) (+)_{Z}(Z/2)",
    }
    ok = names == expected and t.elapsed < 5.0
    assert announce(
        11, ok, f"H2 candidates = {sorted(names)} in {t.elapsed:.2f}s"
    )


def test_acceptance_12_property_suites():
    with Timer() as t:
        rng = random.Random(2024)
        for _ in range(1000):
            rows, cols = rng.randint(1, 7), rng.randint(1, 7)
            a = [[rng.randint(-9, 9) for _ in range(cols)] for _ in range(rows)]
            s = smith_normal_form(a)
            assert mat_mul(mat_mul(s.U, a), s.V) == s.D
            assert abs(determinant(s.U)) == 1
            assert abs(determinant(s.V)) == 1
            nz = [d for d in s.diagonal() if d]
            assert all(y % x == 0 for x, y in zip(nz, nz[1:]))
        snf_done = time.monotonic() - t.t0

        for n in range(1, 7):
            lat = BlowupLattice(n)
            lines = set(lat.enumerate_lines())
            conics = set(lat.enumerate_conic_classes())
            roots = lat.roots()
            sample = roots if len(roots) <= 10 else random.Random(n).sample(roots, 10)
            for root in sample:
                assert {lat.weyl_reflect(c, root) for c in lines} == lines
                assert {lat.weyl_reflect(c, root) for c in conics} == conics
        weyl_done = time.monotonic() - t.t0

        Cs = FormalGroup.atom("C*")
        ambient = Cs + Cs + Cs

        def unimodular(rng):
            m = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
            for _ in range(6):
                i, j = rng.randrange(3), rng.randrange(3)
                if i != j:
                    c = rng.randint(-2, 2)
                    for k in range(3):
                        m[i][k] += c * m[j][k]
            return m

        for seed in range(60):
            rng2 = random.Random(seed)
            mat = [[rng2.randint(-4, 4) for _ in range(3)] for _ in range(3)]
            u, v = unimodular(rng2), unimodular(rng2)
            h = FormalHom(ambient, ambient, mat)
            conj = FormalHom(ambient, ambient, mat_mul(u, mat_mul(mat, v)))
            assert kernel(h) == kernel(conj)
            assert cokernel(h) == cokernel(conj)

        for n in range(2, 13):
            for k in range(0, 13):
                zn = FormalGroup.cyclic_group(n)
                h = FormalHom(zn, zn, [[k]])
                expected = gcd(k, n)
                want = (
                    FormalGroup.cyclic_group(expected)
                    if expected > 1
                    else FormalGroup.zero()
                )
                assert kernel(h) == want
                assert cokernel(h) == want
                # brute-force oracle on the actual finite group
                assert len([x for x in range(n) if (k * x) % n == 0]) == expected
    ok = t.elapsed < 60.0
    assert announce(
        12, ok,
        f"SNF x1000 ({snf_done:.1f}s), Weyl invariance n<=6 "
        f"({weyl_done - snf_done:.1f}s), unimodular invariance, cyclic "
        f"kernel/cokernel vs brute force; total {t.elapsed:.2f}s",
    )
