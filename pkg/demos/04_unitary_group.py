"""exp(tA) for an anti self-adjoint A is a one-parameter unitary group.

Run: python demos/04_unitary_group.py
"""
import numpy as np
import scipy.linalg

from qspectral import measure as ms
from qspectral.qoperator import QMatrix, classify, complex_embed
from qspectral.sampling import random_structured_normal

rng = np.random.default_rng(11)
A, _ = random_structured_normal(5, rng, "anti")
print("flags:", list(classify(A, 1e-9)))
F = ms.build_measure(A)


def U(t):
    return ms.functional_calculus(F, lambda z: np.exp(t * z))


for t in (0.1, 1.0, 10.0):
    Ut = U(t)
    unit = (Ut.adjoint() @ Ut - QMatrix.identity(5)).frobenius()
    ref = scipy.linalg.expm(t * complex_embed(A))
    agree = np.linalg.norm(complex_embed(Ut) - ref)
    print(f"t = {t:5}: |U*U - I| = {unit:.1e}   |U - expm| = {agree:.1e}")

s, t = 0.7, 2.3
print("U(s)U(t) = U(s+t):", np.allclose((U(s) @ U(t)).data, U(s + t).data))
