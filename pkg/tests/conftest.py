import numpy as np
import pytest

from momentcone import Polynomial, iter_simplex


def coefficient_gap(f: Polynomial, g: Polynomial) -> float:
    """Largest absolute coefficient difference between two polynomials."""
    keys = set(f.terms) | set(g.terms)
    return max((abs(f.coefficient(a) - g.coefficient(a)) for a in keys), default=0.0)


def assert_poly_close(f: Polynomial, g: Polynomial, tol: float = 1e-12) -> None:
    gap = coefficient_gap(f, g)
    assert gap <= tol, f"coefficient gap {gap} exceeds {tol}\n  {f}\n  {g}"


def dense_from_poly(f: Polynomial) -> np.ndarray:
    """Dense coefficient array, axis i indexed by the exponent of X_i."""
    deg = max(f.degree, 0)
    arr = np.zeros((deg + 1,) * f.n)
    for alpha, coef in f.terms.items():
        arr[alpha] = coef
    return arr


def dense_convolution(fa: np.ndarray, fb: np.ndarray) -> np.ndarray:
    """Literal nested-loop convolution of dense coefficient arrays."""
    out = np.zeros(tuple(x + y - 1 for x, y in zip(fa.shape, fb.shape)))
    for ia in np.ndindex(fa.shape):
        va = fa[ia]
        if va == 0.0:
            continue
        for ib in np.ndindex(fb.shape):
            out[tuple(x + y for x, y in zip(ia, ib))] += va * fb[ib]
    return out


def horner_eval(arr: np.ndarray, x) -> float:
    """Evaluate a dense coefficient array at a point, one variable at a time."""
    value = arr
    for axis in range(arr.ndim - 1, -1, -1):
        acc = np.zeros(value.shape[:-1])
        for k in range(value.shape[-1] - 1, -1, -1):
            acc = acc * x[axis] + value[..., k]
        value = acc
    return float(value)


def random_sparse_poly(rng, n: int, max_degree: int, max_terms: int = 8,
                       coef_range: float = 5.0) -> Polynomial:
    candidates = list(iter_simplex(n, max_degree))
    count = int(rng.integers(1, max_terms + 1))
    picks = rng.choice(len(candidates), size=min(count, len(candidates)), replace=False)
    terms = {candidates[int(i)]: float(rng.uniform(-coef_range, coef_range)) for i in picks}
    return Polynomial(n, terms)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
