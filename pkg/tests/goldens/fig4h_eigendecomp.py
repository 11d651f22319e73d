"""fig4h_eigendecomp: generated linear algebra kernel."""

import numpy as np


class fig4h_eigendecomp_result:
    def __init__(self, Omega):
        self.Omega = Omega
        self.ret = Omega


def fig4h_eigendecomp(k_1, k_2, e_1, e_2):
    k_1 = float(k_1)
    k_2 = float(k_2)
    e_1 = np.asarray(e_1, dtype=float)
    e_2 = np.asarray(e_2, dtype=float)
    assert e_1.shape == (2,), "e_1: expected ℝ^2"
    assert e_2.shape == (2,), "e_2: expected ℝ^2"

    Omega = np.block([[e_1.reshape(-1, 1), e_2.reshape(-1, 1)]]) @ np.array([[k_1, 0], [0, k_2]], dtype=float) @ np.block([[e_1.T], [e_2.T]])
    return fig4h_eigendecomp_result(Omega)
