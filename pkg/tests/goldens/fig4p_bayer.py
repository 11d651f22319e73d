"""fig4p_bayer: generated linear algebra kernel."""

import numpy as np


class fig4p_bayer_result:
    def __init__(self, C):
        self.C = C
        self.ret = C


def fig4p_bayer(c, w, r_hat):
    c = np.asarray(c, dtype=float)
    w = np.asarray(w, dtype=float)
    r_hat = np.asarray(r_hat, dtype=float)
    m = c.shape[0]
    k = c.shape[1]
    assert c.shape == (m, k), "c: expected ℝ^(m×k)"
    assert w.shape == (m, k), "w: expected ℝ^(m×k)"
    assert r_hat.shape == (m,), "r̂: expected ℝ^m"

    C = sum(sum(c[i - 1, j - 1] * w[i - 1, j - 1] * r_hat[i - 1] for j in range(1, k + 1)) for i in range(1, m + 1)) / sum(sum(w[i - 1, j - 1] * r_hat[i - 1] for j in range(1, k + 1)) for i in range(1, m + 1))
    return fig4p_bayer_result(C)
