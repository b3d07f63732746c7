"""The four scalar kernel factors behind the fractional wave propagators.

Each sine mode with fractional eigenvalue lam evolves independently; its
response to initial displacement, initial velocity and impulsive forcing is
carried by Mittag-Leffler kernel factors of the time variable.  The
antiderivative of the impulse kernel is what lets the noise convolution be
integrated exactly over each subinterval.
"""

import numpy as np

from fracwave.mittag_leffler import ml_time_kernel
from fracwave.spectral import FracOrders, fractional_eigenvalues, homogeneous_solution

alpha = 1.5
lam = float(fractional_eigenvalues(0.75, 1)[0])  # first mode, beta = 0.75
print(f"alpha = {alpha}, first-mode fractional eigenvalue = {lam:.6f}\n")

print("t      init_value   init_velocity   impulse      impulse_primitive")
for t in (0.0, 0.25, 0.5, 1.0, 2.0):
    row = [ml_time_kernel(alpha, lam, t, kind)
           for kind in ("init_value", "init_velocity", "impulse", "impulse_primitive")]
    print(f"{t:4.2f}  {row[0]:11.6f}  {row[1]:13.6f}  {row[2]:11.6f}  {row[3]:17.6f}")

# ---------------------------------------------------------------------------
# the primitive really integrates the impulse kernel: finite differences
t, h = 0.8, 1e-6
dprim = (ml_time_kernel(alpha, lam, t + h, "impulse_primitive")
         - ml_time_kernel(alpha, lam, t - h, "impulse_primitive")) / (2 * h)
imp = ml_time_kernel(alpha, lam, t, "impulse")
print(f"\nd/dt primitive at t={t}: {dprim:.10f}  vs impulse kernel {imp:.10f}")

# ---------------------------------------------------------------------------
# at alpha = 2, beta = 1 the evolution is the classical wave equation
orders = FracOrders(2.0, 1.0)
v1 = np.zeros(4)
v1[0] = 1.0
print("\nclassical limit (alpha=2, beta=1), first-mode displacement vs cos(pi t):")
for t in (0.2, 0.5, 1.0):
    u = homogeneous_solution(orders, v1, np.zeros(4), t)
    print(f"  t = {t:3.1f}: coefficient = {u[0]:+.12f}, cos(pi t) = {np.cos(np.pi*t):+.12f}")
