"""matrix_c: generated linear algebra kernel."""

import numpy as np


class matrix_c_result:
    def __init__(self, C):
        self.C = C
        self.ret = C


def matrix_c(M, x, y):
    M = np.asarray(M, dtype=float)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = M.shape[0]
    assert M.shape == (n, n), "M: expected ℝ^(n×n)"
    assert x.shape == (n,), "x: expected ℝ^n"
    assert y.shape == (n,), "y: expected ℝ^n"

    C = np.block([[np.eye(n), M + np.outer(y, x)], [M.T, np.zeros((n, n))]])
    return matrix_c_result(C)
