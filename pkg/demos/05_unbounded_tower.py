"""An unbounded diagonal operator seen through growing truncations.

The multiplication operator k -> k i has no finite norm; its truncations grow
linearly while their Z-transforms stay strict contractions, and spectral data
computed at one size agrees with every larger size on shared coordinates.

Run: python demos/05_unbounded_tower.py
"""
import numpy as np

from qspectral.quaternion import Quaternion
from qspectral.unbounded import DiagonalSymbol, build_tower, measure_consistency, unboundedness_signature

tower = build_tower(DiagonalSymbol.k_times_m())
sig = unboundedness_signature(tower)
print(" size   |T_n|     |Z_n|      n/sqrt(1+n^2)")
for n, a, z in zip(sig["sizes"], sig["norms"], sig["z_norms"]):
    print(f"{n:5d} {a:8.3f}  {z:.12f}  {n / np.sqrt(1 + n * n):.12f}")
print("unbounded:", sig["unbounded"], " Z contractive:", sig["z_contractive"])

cons = measure_consistency(build_tower(DiagonalSymbol.k_plus_km(), (8, 16, 32)), rng=np.random.default_rng(0))
print("\ncross-size measure consistency:", cons["passed"])
print("domain:", cons["domain_model"])

bounded = DiagonalSymbol.custom([Quaternion.real_scalar(1)], growth="constant")
sig = unboundedness_signature(build_tower(bounded, (4, 8, 16)))
print("\nconstant symbol: bounded =", sig["bounded"], " |Z| =", np.round(sig["z_norms"], 6))
