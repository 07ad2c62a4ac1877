import itertools

from conftest import rand_gamma_invertible, series
from sigma_nabla.lattice import (
    LatticeBasis,
    lattice_intersect,
    lattice_member,
    lattice_smith,
)
from sigma_nabla.linalg import smat_agree, smat_identity, smat_mul
from sigma_nabla.series import LaurentSeries

P, N = 3, 12


def S(terms, **kw):
    return series(P, N, terms, **kw)


def const_lattice(cols):
    """Columns of integers as a series lattice basis."""
    n = len(cols[0])
    return LatticeBasis([[S([(0, cols[j][i])] if cols[j][i] else [])
                          for j in range(len(cols))] for i in range(n)])


# ---------------------------------------------------------------------------
# Brute-force oracle for constant lattices: membership mod p^K by
# enumerating coordinate vectors.
# ---------------------------------------------------------------------------


def oracle_member(cols, vec, K=4):
    n = len(vec)
    m = len(cols)
    pk = P ** K
    for x in itertools.product(range(pk), repeat=m):
        if all(sum(cols[j][i] * x[j] for j in range(m)) % pk == vec[i] % pk
               for i in range(n)):
            return True
    return False


def series_vec(vec):
    return [S([(0, v)] if v else []) for v in vec]


def test_smith_diag_sorted():
    a = [[S([(0, P)]), S([])], [S([]), S([(0, 1)])]]
    sf = lattice_smith(a)
    assert sf.exponents == [0, 1]
    assert smat_agree(smat_mul(smat_mul(sf.u, sf.d), sf.w), a).holds


def test_smith_absorbs_gamma_units():
    a = [[S([(0, 1)]), S([(1, 1)])], [S([]), S([(0, P)])]]
    sf = lattice_smith(a)
    assert sf.exponents == [0, 1]
    assert smat_agree(smat_mul(smat_mul(sf.u, sf.d), sf.w), a).holds


def test_smith_roundtrip_random(rng):
    for _ in range(10):
        n = rng.randint(1, 3)
        u0, _ = rand_gamma_invertible(rng, P, N, n)
        w0, _ = rand_gamma_invertible(rng, P, N, n)
        exps = sorted(rng.randint(0, 3) for _ in range(n))
        d0 = smat_identity(n, P, N)
        for i, e in enumerate(exps):
            d0[i][i] = S([(0, P ** e)])
        a = smat_mul(smat_mul(u0, d0), w0)
        sf = lattice_smith(a)
        assert sf.exponents == exps
        assert smat_agree(smat_mul(smat_mul(sf.u, sf.d), sf.w), a).holds


def test_intersect_simple_scaling():
    l1 = const_lattice([[1, 0], [0, 1]])
    l2 = const_lattice([[P, 0], [0, 1]])
    inter = lattice_intersect(l1, l2)
    assert inter.rank == 2
    assert lattice_member(inter, series_vec([P, 0]))
    assert lattice_member(inter, series_vec([0, 1]))
    assert not lattice_member(inter, series_vec([1, 0]))


def test_intersect_skew_instance():
    # span(e1) meet span(e1 + e2, p e2) = span(p e1): p e1 = p(e1+e2) - p e2
    l1 = const_lattice([[1, 0]])
    l2 = const_lattice([[1, 1], [0, P]])
    inter = lattice_intersect(l1, l2)
    assert inter.rank == 1
    assert lattice_member(inter, series_vec([P, 0]))
    assert not lattice_member(inter, series_vec([1, 0]))


def test_intersect_literal_containment_instance():
    # span(e1) meet span(e1 + p e2, p e2): here e1 = (e1 + p e2) - p e2
    # lies in both, so the intersection is all of span(e1)
    l1 = const_lattice([[1, 0]])
    l2 = const_lattice([[1, P], [0, P]])
    inter = lattice_intersect(l1, l2)
    assert lattice_member(inter, series_vec([1, 0]))


def test_intersect_idempotent(rng):
    for _ in range(5):
        cols = [[rng.randint(0, 8), rng.randint(0, 8)] for _ in range(2)]
        if cols[0][0] * cols[1][1] == cols[0][1] * cols[1][0]:
            continue
        l = const_lattice(cols)
        inter = lattice_intersect(l, l)
        for j in range(len(cols)):
            assert lattice_member(inter, series_vec(cols[j]))
            assert lattice_member(l, [inter.vectors[i][j] for i in range(2)])


def test_intersect_against_brute_force(rng):
    for _ in range(6):
        c1 = [[rng.choice([1, 2, P, P * 2]), rng.randint(0, P)]
              for _ in range(2)]
        c2 = [[rng.choice([1, 2, P]), rng.randint(0, P * P)]
              for _ in range(2)]
        det1 = c1[0][0] * c1[1][1] - c1[0][1] * c1[1][0]
        det2 = c2[0][0] * c2[1][1] - c2[0][1] * c2[1][0]
        if det1 % P ** 4 == 0 or det2 % P ** 4 == 0:
            continue
        inter = lattice_intersect(const_lattice(c1), const_lattice(c2))
        # read the computed basis back as integer vectors
        got = []
        for j in range(inter.rank):
            vec = []
            for i in range(2):
                c = inter.vectors[i][j].coefficient(0)
                vec.append(0 if c.unit is None else
                           int(c.to_rational()) % P ** 4)
            got.append(vec)
        # every basis vector lies in both lattices
        for vec in got:
            assert oracle_member(c1, vec)
            assert oracle_member(c2, vec)
        # maximality: every small vector in both lattices lies in the span
        for v0 in range(P ** 2):
            for v1 in range(P ** 2):
                if oracle_member(c1, [v0, v1], 3) and \
                        oracle_member(c2, [v0, v1], 3):
                    assert oracle_member(got, [v0, v1], 2), (v0, v1)
