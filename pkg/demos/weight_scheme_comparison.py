"""Optimal vs smoothed-AIC weights as the weakest coefficient grows.

The second stock study: candidate ladders that either include (case A)
or exclude (case B) the model carrying the fourth coefficient, whose
true value sweeps a grid.  Case B is the misspecified-regime stress
test: once the dropped coefficient matters (0.1, 0.5), the optimal
weights shed the underfit models faster than AIC weighting does.
"""

from glmavg import run_study2

for family in ("linear", "logistic"):
    report = run_study2(
        family,
        beta3_grid=(0.001, 0.05, 0.1, 0.5),
        cases=("B",),
        n_reps=200,
        seed=3,
        workers=2,
    )
    print(f"\n=== {family} regression, case B (true model not among candidates) ===")
    print(f"{'beta3':>7} {'truth':>8} {'optimal':>18} {'aic':>18} {'oracle':>18}")
    for beta3 in (0.001, 0.05, 0.1, 0.5):
        cells = {
            scheme: report.select(beta3=beta3, scheme=scheme)[0]
            for scheme in ("optimal", "aic", "oracle")
        }
        truth = cells["optimal"]["truth"]
        fields = "  ".join(
            f"{cells[s]['mean_estimate']:+.3f} (err {cells[s]['error']:.3f})"
            for s in ("optimal", "aic", "oracle")
        )
        print(f"{beta3:>7} {truth:>8.3f}  {fields}")
