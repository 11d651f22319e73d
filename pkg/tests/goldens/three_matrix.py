"""three_matrix: generated linear algebra kernel."""

import numpy as np


class three_matrix_result:
    def __init__(self, D, c):
        self.D = D
        self.c = c
        self.ret = c


def three_matrix(A, B, C, x):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    C = np.asarray(C, dtype=float)
    x = np.asarray(x, dtype=float)
    n = A.shape[1]
    m = B.shape[1]
    assert A.shape == (3, n), "A: expected ℝ^(3×n)"
    assert B.shape == (n, m), "B: expected ℝ^(n×m)"
    assert C.shape == (m, 2), "C: expected ℝ^(m×2)"
    assert x.shape == (2,), "x: expected ℝ^2"

    D = A @ B @ C
    c = float(x.T @ D.T @ D @ x)
    return three_matrix_result(D, c)
