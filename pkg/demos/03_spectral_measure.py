"""The quaternionic spectral measure and the functional calculus.

Run: python demos/03_spectral_measure.py
"""
import numpy as np

from qspectral import measure as ms
from qspectral.measure import Full, Rectangle
from qspectral.qoperator import QMatrix
from qspectral.qspace import QVector, inner
from qspectral.quaternion import J as QJ
from qspectral.quaternion import SliceFrame
from qspectral.sampling import random_qvector, random_structured_normal

rng = np.random.default_rng(3)
T, _ = random_structured_normal(6, rng, "repeated")
F = ms.build_measure(T, SliceFrame())

print("spectral points and projection ranks:")
for v, r in zip(F.values, F.ranks()):
    print(f"  {v.alpha:+.5f} {v.beta:+.5f} i   rank {r}")

print("\nF(everything) = I:", np.allclose(ms.evaluate(F, Full()).data, QMatrix.identity(6).data))
box = Rectangle(-10, 0, 0, 10)
P = ms.evaluate(F, box)
print("F(box) is a projection:", np.allclose((P @ P).data, P.data))

x, y = random_qvector(6, rng), random_qvector(6, rng)
print("\n<x|Ty>                      =", np.round(inner(x, T @ y).as_array(), 10))
print("sum (a + bJ) dF_{x,y}       =", np.round(ms.integrate_representation(F, x, y).as_array(), 10))
print("F_{x,y}(box), direct        =", np.round(ms.scalar_measure(F, x, y, box).as_array(), 10))
print("F_{x,y}(box), via H+ route  =", np.round(ms.scalar_measure_expansion(F, x, y, box).as_array(), 10))

# the scalar lambda on the left only works for x in the +m slice
one_point = ms.build_measure(QMatrix.diag([SliceFrame().m.q]))
xj, e = QVector.unit(0, 1, QJ), QVector.unit(0, 1)
print("\nT = [[i]], x = j, y = 1:")
print("  <x|Ty>          =", inner(xj, one_point.T @ e).to_list())
print("  lambda F_{x,y}  =", ms.integrate_scalar_left(one_point, xj, e).to_list())
print("  L_lambda form   =", ms.integrate_representation(one_point, xj, e).to_list())

T2 = ms.functional_calculus(F, lambda z: z * z)
print("\nf(z) = z^2 gives T @ T:", np.allclose(T2.data, (T @ T).data))
