"""closest_point: generated linear algebra kernel."""

import numpy as np


class closest_point_result:
    def __init__(self, P, q):
        self.P = P
        self.q = q
        self.ret = q


def closest_point(p, d):
    p = [np.asarray(_e, dtype=float) for _e in p]
    d = [np.asarray(_e, dtype=float) for _e in d]
    dim_i = len(p)
    assert len(p) == dim_i, "p: sequence length"
    assert all(_e.shape == (3,) for _e in p)
    assert len(d) == dim_i, "d: sequence length"
    assert all(_e.shape == (3,) for _e in d)

    P = []
    for i in range(1, dim_i + 1):
        P.append(np.eye(3) - np.outer(d[i - 1], d[i - 1]))
    q = np.linalg.solve(sum(P[i - 1] for i in range(1, dim_i + 1)), sum(P[i - 1] @ p[i - 1] for i in range(1, dim_i + 1)))
    return closest_point_result(P, q)
