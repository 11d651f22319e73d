"""matrix_b: generated linear algebra kernel."""

import numpy as np


class matrix_b_result:
    def __init__(self, B):
        self.B = B
        self.ret = B


def matrix_b(a, k):
    a = float(a)
    k = float(k)

    B = np.array([[2 * a, 0], [3, k + 1]], dtype=float)
    return matrix_b_result(B)
