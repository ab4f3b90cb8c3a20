"""Drive envelopes across the elliptic modulus.

The two pulse envelopes cn and dn interpolate between harmonic waves (k=0)
and solitary sech pulses (k=1).  This script sweeps the modulus, plots the
envelopes over a few periods, and spot-checks the algebraic identities that
every downstream formula relies on.
"""

import pathlib

import numpy as np

from trisol import jacobi, quarter_period

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

print("quarter period K(k) grows from pi/2 and diverges at k = 1:")
for k in (0.0, 0.25, 0.5, 0.9, 0.99, 0.9999):
    print(f"  K({k:<6}) = {quarter_period(k):.10f}")

print("\nidentity residuals at a random phase sample:")
rng = np.random.default_rng(1)
worst = 0.0
for _ in range(2000):
    k = float(rng.uniform(0, 1))
    u = float(rng.uniform(-40, 40))
    sn, cn, dn = jacobi(u, k)
    worst = max(worst, abs(sn**2 + cn**2 - 1), abs(dn**2 + (k * sn) ** 2 - 1))
print(f"  max of |sn^2+cn^2-1| and |dn^2+k^2 sn^2-1|: {worst:.2e}")

ts = np.linspace(0.0, 25.0, 1200)
curves = {}
for k in (0.0, 0.25, 0.9, 1.0):
    vals = np.array([jacobi(t, k) for t in ts])
    curves[k] = vals
    label = "4K" if k < 1 else "inf"
    per = f"{4 * quarter_period(k):.3f}" if k < 1 else "infinite"
    print(f"k={k}: cn period {per}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping figures")
    raise SystemExit(0)

fig, axes = plt.subplots(2, 1, figsize=(9, 6), sharex=True)
for k, vals in curves.items():
    axes[0].plot(ts, vals[:, 1], label=f"k={k}")
    axes[1].plot(ts, vals[:, 2], label=f"k={k}")
axes[0].set_ylabel("cn(t, k)")
axes[1].set_ylabel("dn(t, k)")
axes[1].set_xlabel("t")
axes[0].legend(ncol=4, fontsize=9)
axes[0].set_title("elliptic drive envelopes: harmonic (k=0) to solitary (k=1)")
fig.tight_layout()
fig.savefig(OUT / "01_envelopes.png", dpi=130)
print(f"wrote {OUT / '01_envelopes.png'}")
