"""Random fixtures shared by the test modules."""

from __future__ import annotations

from tensym.exact import Matrix, rank
from tensym.tensor import Tensor3
from tensym.zoo import construct


def random_tensor(rng, dims, lo=-3, hi=3, density=0.6) -> Tensor3:
    a, b, c = dims
    return Tensor3(
        dims,
        {
            (i, j, k): rng.randint(lo, hi)
            for i in range(1, a + 1)
            for j in range(1, b + 1)
            for k in range(1, c + 1)
            if rng.random() < density
        },
    )


def random_invertible(rng, n, bound=2) -> Matrix:
    while True:
        M = Matrix.from_rows([[rng.randint(-bound, bound) for _ in range(n)] for _ in range(n)])
        if rank(M) == n:
            return M


def utriv_plus_perturbation(rng, m, lo=-3, hi=3) -> Tensor3:
    """T_utriv,m plus a random element of <a_2..a_m> (x) <b_2..b_m> (x) C."""
    noise = {
        (i, j, k): rng.randint(lo, hi)
        for i in range(2, m + 1)
        for j in range(2, m + 1)
        for k in range(1, m + 1)
    }
    return construct("utriv", m).tensor + Tensor3((m, m, m), noise)


def one_a_fixture(rng, m, lo=-3, hi=3) -> Tensor3:
    """Random tensor with T^{1jk} = delta_jk, i.e. already 1_A-normalized."""
    noise = {
        (i, j, k): rng.randint(lo, hi)
        for i in range(2, m + 1)
        for j in range(1, m + 1)
        for k in range(1, m + 1)
    }
    return construct("t0", m).tensor + Tensor3((m, m, m), noise)
