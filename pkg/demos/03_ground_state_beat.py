"""Exciting level 1: beats, the half-occupation floor, and the p3 spectrum.

Starting from (1,0,0) all three basis solutions participate, and the slow
accumulated phase beats against the drive.  This reproduces the level-1 and
level-3 occupation traces and the sin(phi) series, then takes the level-3
spectrum apart: the dominant fast line is the drive+phase combination tone,
sitting just below twice the drive fundamental, with the doubled-drive and
doubled-phase lines as its sidekicks.
"""

import math
import pathlib

import numpy as np

from trisol import (
    DriveParams,
    H0Params,
    beat_period,
    dominant_frequency,
    drive_period,
    phase_phi,
    trajectory,
    validate,
)

OUT = pathlib.Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

p = DriveParams(a=0.3, x=1.6, omega=1.0, k=0.25)
c = validate(p)
h0 = H0Params(mu=10.0, lam=5.0)
period = drive_period(p)

ts = np.linspace(0.0, 60.0, 4096, endpoint=False)
rows = trajectory(p, c, h0, np.array([1.0, 0, 0]), ts)
occ = np.array([s.occupations for s in rows])
phis = np.array([s.phi for s in rows])

print(f"drive period 4K/omega = {period:.6f}")
print(f"level-1 occupation: starts at {occ[0, 0]:.12f}, floor {occ[:, 0].min():.6f}")

beat, troughs = beat_period(ts, occ[:, 0], window_time=period)
print(f"beat period {beat:.2f} = {beat / period:.2f} drive periods"
      f" (troughs near {[round(t, 1) for t in troughs]})")

f_drive = 1.0 / period
f_phase = phase_phi(p, c, period) / period / (2 * math.pi)
print(f"\nmean phase rate {2 * math.pi * f_phase:.4f} rad/t is below the drive"
      f" rate {2 * math.pi * f_drive:.4f} rad/t")

peak = dominant_frequency(ts, occ[:, 2], detrend_window_time=period)
print("\nlevel-3 spectrum after removing the slow beat:")
print(f"  dominant line     {peak.frequency:.4f}")
print(f"  drive+phase tone  {f_drive + f_phase:.4f}  <- the winner")
print(f"  doubled drive     {2 * f_drive:.4f}")
print(f"  doubled phase     {2 * f_phase:.4f}")
print(f"  beat line         {f_drive - f_phase:.4f} (removed by detrending)")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    raise SystemExit(0)

fig, axes = plt.subplots(3, 1, figsize=(9, 8))
axes[0].plot(ts, occ[:, 0], lw=0.7)
axes[0].axhline(0.5, color="r", ls="--", lw=0.8)
axes[0].set_ylabel("p1")
axes[0].set_title("level-1 occupation: beat envelope, never below 1/2")
axes[1].plot(ts, occ[:, 2], lw=0.7, color="#2ca02c")
axes[1].set_ylabel("p3")
axes[2].plot(ts, np.sin(phis), lw=0.9, color="#9467bd")
axes[2].set_ylabel("sin(phi)")
axes[2].set_xlabel("t")
fig.tight_layout()
fig.savefig(OUT / "03_ground_state.png", dpi=130)

detr = occ[:, 2] - np.convolve(
    np.pad(occ[:, 2], 436, mode="reflect"), np.ones(436) / 436, mode="same"
)[436:-436]
amp = np.abs(np.fft.rfft(detr))
freqs = np.fft.rfftfreq(len(ts), d=ts[1] - ts[0])
fig2, ax = plt.subplots(figsize=(9, 4))
ax.plot(freqs, amp, lw=0.8)
for f, name in [(f_drive + f_phase, "drive+phase"), (2 * f_drive, "2 x drive"),
                (2 * f_phase, "2 x phase")]:
    ax.axvline(f, ls="--", lw=0.8, alpha=0.7)
    ax.text(f, amp.max() * 0.9, name, rotation=90, va="top", fontsize=8)
ax.set_xlim(0, 0.6)
ax.set_xlabel("frequency")
ax.set_ylabel("|FFT| of detrended p3")
fig2.tight_layout()
fig2.savefig(OUT / "03_p3_spectrum.png", dpi=130)
print(f"\nwrote {OUT / '03_ground_state.png'} and {OUT / '03_p3_spectrum.png'}")
