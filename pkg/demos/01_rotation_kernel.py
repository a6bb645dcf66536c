"""Rotation kernel tour: hat/vee, exponential/logarithm, and the weighted
attitude error function with its gradient identity.
"""

import math

import numpy as np

from so3pid import exp_so3, hat, log_so3, morse_error, morse_gradient, vee

rng = np.random.default_rng(0)

# hat/vee: the cross product as a matrix, and back
v = np.array([1.0, 2.0, 3.0])
print("hat(v) =\n", hat(v))
print("vee(hat(v)) =", vee(hat(v)))

# exponential and logarithm round trip
f = np.array([0.4, -0.7, 0.2])
R = exp_so3(f)
print("\n|R^T R - I| =", np.linalg.norm(R.T @ R - np.eye(3)))
print("log(exp(f)) - f =", log_so3(R) - f)

# worst round-trip error over random rotation vectors up to the pi boundary
worst = 0.0
for _ in range(2000):
    axis = rng.standard_normal(3)
    axis /= np.linalg.norm(axis)
    g = rng.uniform(0.0, math.pi - 1e-3) * axis
    worst = max(worst, float(np.linalg.norm(log_so3(exp_so3(g)) - g)))
print("worst round-trip error over 2000 samples:", worst)

# the weighted error <K, I-Q> decreases along -gradient directions;
# check its differential identity by finite differences
K = np.array([1.0, 1.1, 1.2])
Q = exp_so3(np.array([0.3, -0.5, 0.2]))
w = rng.standard_normal(3)
for h in (1e-4, 1e-5, 1e-6):
    fd = (morse_error(Q @ exp_so3(h * w), K) - morse_error(Q, K)) / h
    print(f"h={h:.0e}:  finite diff = {fd:+.8f}   "
          f"w . grad = {float(w @ morse_gradient(Q, K)):+.8f}")
