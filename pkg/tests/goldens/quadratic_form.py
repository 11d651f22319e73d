"""quadratic_form: generated linear algebra kernel."""

import numpy as np


class quadratic_form_result:
    def __init__(self, ret):
        self.ret = ret


def quadratic_form(A, b, c, x):
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = float(c)
    x = np.asarray(x, dtype=float)
    n = A.shape[0]
    assert A.shape == (n, n), "A: expected ℝ^(n×n)"
    assert b.shape == (n,), "b: expected ℝ^n"
    assert x.shape == (n,), "x: expected ℝ^n"

    ret = float(x.T @ A @ x) + b.T @ x + c
    return quadratic_form_result(ret)
