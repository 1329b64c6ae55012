"""Right eigenvectors, the complex structure J and the slice spaces.

A normal quaternion matrix T has an orthonormal basis of right eigenvectors
with eigenvalues in the upper half of a chosen slice plane. Those vectors
define J, an anti self-adjoint unitary commuting with T; the +m eigenspace of
J is a complex Hilbert space on which T acts as an ordinary complex matrix.

Run: python demos/02_slice_decomposition.py
"""
import numpy as np

from qspectral.qoperator import QMatrix, classify
from qspectral.quaternion import I, J, Quaternion, SliceFrame
from qspectral.sampling import random_normal, random_qvector
from qspectral.slice_spectral import construct_J, induce_complex, slice_basis, spectral_decompose, split

frame = SliceFrame(I)

# diag(i, j): both entries lie in the class of i
T = QMatrix.diag([I, J])
es = spectral_decompose(T, frame)
print("eigenvalues of diag(i, j):", [(d.alpha, d.beta) for d in es.D])
print("eigenvector phase for j:", es.U[1, 1].to_list())
cs = construct_J(T, frame)
print("J equals T here:", np.allclose(cs.J.data, T.data))

# a random planted example
rng = np.random.default_rng(7)
planted = [Quaternion(1, 0, 2, 0), Quaternion(1, 0, 0, 2), Quaternion(-0.5, 0.3, 0, 0), Quaternion.real_scalar(2)]
T, _ = random_normal(4, rng, planted)
print("\nclassification:", list(classify(T, 1e-9)))
es = spectral_decompose(T, frame)
for c in es.clusters:
    print(f"  class {c.value.alpha:+.6f} {c.value.beta:+.6f} i   multiplicity {c.multiplicity}")

cs = construct_J(T, frame)
print("|JT - TJ| =", f"{(cs.J @ T - T @ cs.J).frobenius():.2e}")

x = random_qvector(4, rng)
xp, xm = split(x, cs.J, frame.m)
print("|x - (x+ + x-)| =", f"{(x - xp - xm).norm():.2e}")
print("|J x+ - x+ i| =", f"{(cs.J @ xp - xp * I).norm():.2e}")

basis = slice_basis(cs, frame)
Tplus = induce_complex(T, basis)
print("\nT restricted to H+ (complex matrix):")
print(np.array2string(Tplus, precision=4, suppress_small=True))
print("its eigenvalues:", np.round(np.linalg.eigvals(Tplus), 6))
