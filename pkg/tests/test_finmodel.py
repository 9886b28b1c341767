"""Convolution as block matrix product, fibre constancy, Hadamard identity."""
import random
from fractions import Fraction

from bratteli import catalog
from bratteli.embedding import finite_shadow_partition
from bratteli.finmodel import (
    FiniteGroupoidFn,
    ScaledMatrix,
    adjoint,
    alpha_constancy,
    carry_isometry,
    convolve,
    hadamard_tensor,
    hadamard_verify,
    matrix_unit,
)

FULL4 = (tuple(range(4)),)


def test_matrix_unit_products():
    # e_pq e_qr = e_pr and e_pq e_rs = 0 for q != r
    for p in range(3):
        for q in range(3):
            for r in range(3):
                for s in range(3):
                    prod = convolve(matrix_unit(FULL4, p, q), matrix_unit(FULL4, r, s))
                    if q == r:
                        assert prod == matrix_unit(FULL4, p, s)
                    else:
                        assert all(v == 0 for row in prod.matrix for v in row)


def test_unit_times_adjoint_is_projection():
    f = matrix_unit(FULL4, 1, 3)
    assert convolve(f, adjoint(f)) == matrix_unit(FULL4, 1, 1)


def test_convolution_is_blockwise_matrix_product():
    rng = random.Random(7)
    classes = ((0, 1, 2), (3, 4), (5,), (6, 7))

    def rand_fn():
        m = [[Fraction(0)] * 8 for _ in range(8)]
        for c in classes:
            for i in c:
                for j in c:
                    m[i][j] = Fraction(rng.randrange(-9, 10), rng.randrange(1, 7))
        return FiniteGroupoidFn(classes, m)

    for _ in range(10):
        f, g = rand_fn(), rand_fn()
        h = convolve(f, g)
        for i in range(8):
            for j in range(8):
                brute = sum(f.matrix[i][y] * g.matrix[y][j] for y in range(8))
                assert h.matrix[i][j] == brute


def test_adjoint_conjugates_complex_entries():
    classes = ((0, 1),)
    f = FiniteGroupoidFn(classes, [[1 + 2j, 3j], [0j, -1 + 0j]])
    fs = adjoint(f)
    assert fs.matrix[1][0] == 3j.conjugate()
    assert fs.matrix[0][0] == (1 + 2j).conjugate()


def test_constancy_preserved_by_convolution():
    pair = catalog.binary_pair()
    n = 3
    paths, fibres = finite_shadow_partition(pair, n, side=0)
    classes = (tuple(range(len(paths))),)
    rng = random.Random(1)

    def constant_fn():
        values = {}
        m = [[Fraction(0)] * len(paths) for _ in range(len(paths))]
        for orbit in fibres:
            v = Fraction(rng.randrange(-5, 6))
            for i, j in orbit:
                m[i][j] = v
        return FiniteGroupoidFn(classes, m)

    for _ in range(8):
        f, g = constant_fn(), constant_fn()
        assert alpha_constancy(f, fibres)
        assert alpha_constancy(convolve(f, g), fibres)
        assert alpha_constancy(adjoint(f), fibres)


def test_unit_at_embedded_path_not_constant():
    pair = catalog.binary_pair()
    paths, fibres = finite_shadow_partition(pair, 2, side=0)
    classes = (tuple(range(len(paths))),)
    i = paths.index((0, 0))
    f = matrix_unit(classes, i, i)
    assert not alpha_constancy(f, fibres)


def test_averaging_projection_is_constant():
    pair = catalog.binary_pair()
    n = 2
    paths, fibres = finite_shadow_partition(pair, n, side=0)
    classes = (tuple(range(len(paths))),)
    size = len(paths)
    m = [[Fraction(1, 2**n)] * size for _ in range(size)]
    f = FiniteGroupoidFn(classes, m)
    assert alpha_constancy(f, fibres)


# -- hadamard ----------------------------------------------------------------------


def test_hadamard_report_small():
    r = hadamard_verify(1)
    assert r.all_ok
    assert r.residual == 0
    v = carry_isometry(1)
    assert v.matmul(v.transpose()).normalized().entries == ((1, 0), (0, 0))
    vstarv = v.transpose().matmul(v).normalized()
    assert vstarv.entries == ((1, 1), (1, 1))
    assert vstarv.half_exponent == -2


def test_hadamard_all_n():
    for n in range(1, 9):
        r = hadamard_verify(n)
        assert r.all_ok, n
        assert r.residual == 0


def test_hadamard_unitary():
    for n in (1, 2, 5):
        h = hadamard_tensor(n)
        ident = ScaledMatrix.of([[int(i == j) for j in range(2**n)] for i in range(2**n)])
        assert h.matmul(h.transpose()).equals(ident)


def test_float_oracle_for_hadamard_conjugation():
    import numpy as np

    for n in (1, 2, 3):
        size = 2**n
        h = hadamard_tensor(n).to_numpy().astype(float) / (2 ** (n / 2))
        e11 = np.zeros((size, size))
        e11[0, 0] = 1.0
        conj = h @ e11 @ h
        assert np.abs(conj - np.full((size, size), 1.0 / size)).max() < 1e-12
