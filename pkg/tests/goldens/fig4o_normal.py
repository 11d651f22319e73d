"""fig4o_normal: generated linear algebra kernel."""

import numpy as np


class fig4o_normal_result:
    def __init__(self, n):
        self.n = n
        self.ret = n


def fig4o_normal(x):
    x = [np.asarray(_e, dtype=float) for _e in x]
    dim_i = len(x)
    assert len(x) == dim_i, "x: sequence length"
    assert all(_e.shape == (3,) for _e in x)

    n = np.cross(x[1] - x[0], x[2] - x[0]) / np.linalg.norm(np.cross(x[1] - x[0], x[2] - x[0]))
    return fig4o_normal_result(n)
