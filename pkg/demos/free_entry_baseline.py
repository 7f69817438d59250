"""Free entry vs. the first best.

Researchers submit whenever expected value is positive, so noisy review
drags the entry cutoff far below the socially optimal one: the agency wades
through a pile of long-shot proposals and some of the budget lands on them.
"""

import numpy as np

from contest_eq import (NoExclusion, first_best, normal_model,
                        solve_benchmark, steady_state_profile,
                        truncated_profile, winner_density)

params = normal_model(mean_quality=0.0, var_quality=1.0, var_signal=2.0,
                      reject_cost=1.0, win_value=30.0, budget=0.1)

out = solve_benchmark(params)
fb = first_best(params)

print("free-entry equilibrium")
print(f"  entry cutoff        Q0 = {out.cutoff:+.4f}")
print(f"  first-best cutoff   Q* = {fb['cutoff']:+.4f}")
print(f"  submission volume      = {out.submission_volume:.4f} "
      f"(budget funds {params.budget})")
print(f"  per-period welfare     = {out.welfare:.4f} "
      f"(first best {fb['welfare']:.4f})")
print(f"  marginal win prob      = {1/31:.4f} = C/(C+V)")
print(f"  equation residual      = {out.residual:.2e}")

# winners: with noise, funding leaks below Q* and spreads into the tail
h0 = winner_density(steady_state_profile(params, out.cutoff, NoExclusion()),
                    params)
below_qstar = h0.grid < fb["cutoff"]
leak = np.trapezoid(h0.values[below_qstar], h0.grid[below_qstar])
print(f"  budget share funding ideas below Q*: {leak / params.budget:.1%}")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 3.5))
    qs = np.linspace(-4, 4, 400)
    prof = truncated_profile(params.quality, out.cutoff)
    axes[0].plot(qs, prof.pdf(qs), label="submissions (free entry)")
    axes[0].plot(qs, truncated_profile(params.quality, fb["cutoff"]).pdf(qs),
                 "--", label="submissions (first best)")
    axes[0].legend(); axes[0].set_xlabel("quality")
    axes[1].plot(qs, h0.density(qs), label="winners (free entry)")
    axes[1].plot(qs, fb["winner_density"].density(qs), "--",
                 label="winners (first best)")
    axes[1].legend(); axes[1].set_xlabel("quality")
    fig.tight_layout()
    fig.savefig("free_entry_baseline.png", dpi=120)
    print("wrote free_entry_baseline.png")
except ImportError:
    pass
