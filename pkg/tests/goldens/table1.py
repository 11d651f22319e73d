"""table1: generated linear algebra kernel."""

import numpy as np


class table1_result:
    def __init__(self, S):
        self.S = S
        self.ret = S


def table1(H, V, beta, r):
    H = np.asarray(H, dtype=float)
    V = np.asarray(V, dtype=float)
    beta = np.asarray(beta, dtype=float)
    r = np.asarray(r, dtype=float)
    m = H.shape[0]
    n = H.shape[1]
    assert H.shape == (m, n), "H: expected ℝ^(m×n)"
    assert V.shape == (n, n), "V: expected ℝ^(n×n)"
    assert beta.shape == (n,), "β: expected ℝ^n"
    assert r.shape == (m,), "r: expected ℝ^m"

    S = (H @ beta - r).T @ np.linalg.solve(H @ V @ H.T, H @ beta - r)
    return table1_result(S)
