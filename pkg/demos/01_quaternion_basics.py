"""Quaternion arithmetic, similarity classes and slice planes.

Run: python demos/01_quaternion_basics.py
"""
import numpy as np

from qspectral.quaternion import I, J, Quaternion, SliceFrame, UnitImaginary, class_representative, same_class

# Hamilton's relations: ij = k but ji = -k
print("i*j =", (I * J).to_list(), "  j*i =", (J * I).to_list())

rng = np.random.default_rng(0)
p, q = Quaternion.from_array(rng.normal(size=4)), Quaternion.from_array(rng.normal(size=4))
print(f"|pq| = {abs(p * q):.15f}\n|p||q| = {abs(p) * abs(q):.15f}")

# conjugating by any nonzero s keeps the real part and the imaginary modulus
s = Quaternion.from_array(rng.normal(size=4))
p_sim = s.inverse() * p * s
print("p and s^-1 p s similar:", same_class(p, p_sim))

# every class meets the upper half of a slice plane in one point
m = UnitImaginary(Quaternion(0, 1, 1, 0))
rep = class_representative(p, m)
print(f"class of p in the plane of m: {rep.alpha:.6f} + {rep.beta:.6f} m")
print("same point from the conjugate:", class_representative(p_sim, m))

# a frame (m, n) writes any quaternion as z1 + z2 n with z1, z2 in the m-plane
frame = SliceFrame(I, J)
z1, z2 = frame.split(p.as_array())
print("p =", p.to_list())
print("  z1 =", z1, " z2 =", z2)
print("  rejoined:", frame.join(z1, z2))
