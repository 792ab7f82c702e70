"""Empirical comparability bands for the Poisson-value regimes.

The kernel analysis splits the sector into regimes where the half-plane
Poisson value P(v, t, y) is squeezed between elementary expressions:

  part 1   threshold-free identities (radius and height comparabilities),
  part 2   far field   min/max^(gamma+1)  when max(v,t) dominates the scale,
  part 3   near origin V(zeta)/(1+|y|)^2  when the point is tiny against y,
  part 4   intermediate  1/(1+|y|)        between the two thresholds,
  part 5   boundary strip, located by solving Re((u+iv)^gamma) = y.

Each regime carries hypotheses 1 < c2 < c3; a sound squeeze should be
insensitive to the exact thresholds.  The script samples each regime with
a seeded generator, prints the two-sided band of Poisson value over
comparator, and repeats with doubled thresholds to expose which bands are
threshold-stable.  The intermediate regime is genuinely not: its
comparator omits the window width, so the band tracks the thresholds —
an honest finding reproduced here, not averaged away.

Part 5 is checked by driving the level-crossing residual to the
extended-precision floor.
"""

from __future__ import annotations

from leafcurrent import (
    REGIMES,
    RegimeThresholds,
    normalize_singularity,
    power_real_residual,
    regime_constant_sampler,
    rho_solver,
    scale_factor,
)

SEED = 20250819


def main() -> None:
    print(__doc__)
    sing = normalize_singularity(1, 1j)
    base_thresholds = RegimeThresholds()          # c2 = 4,  c3 = 16
    doubled = base_thresholds.doubled()           # c2 = 8,  c3 = 32

    print(f"gamma = {sing.gamma:.1f}, thresholds (c2, c3) = "
          f"({base_thresholds.c2:g}, {base_thresholds.c3:g}) "
          f"and doubled ({doubled.c2:g}, {doubled.c3:g})")
    print()
    print("regime            inf ratio   sup ratio   sup (2x thresholds)  drift")
    for regime in REGIMES:
        band = regime_constant_sampler(sing, regime, 10_000, seed=SEED,
                                       thresholds=base_thresholds)
        band2 = regime_constant_sampler(sing, regime, 10_000, seed=SEED,
                                        thresholds=doubled)
        drift = abs(band2.sup_ratio - band.sup_ratio) / band.sup_ratio
        marker = "  <-- threshold-sensitive" if drift > 0.15 else ""
        print(f"{regime:16s}  {band.inf_ratio:9.4f}   {band.sup_ratio:9.4f}   "
              f"{band2.sup_ratio:14.4f}   {drift:6.1%}{marker}")

    print()
    print("part 5: level-crossing residuals |Re((u+iv)^gamma) - y|")
    for y in (300.0, 1e3, 1e4):
        Y = float(scale_factor(sing, y))
        for v in (1.0, Y / base_thresholds.c3):
            if v < 1.0:
                continue
            rho = rho_solver(sing, y, v)
            u = (rho - sing.a * v) / sing.b
            res = abs(power_real_residual(sing, u, v, y))
            print(f"  y = {y:8.0f}, v = {v:7.3f}  ->  rho = {rho:10.5f},  "
                  f"residual = {res:.2e}")

    print()
    print("Reading: the part-1 comparabilities are threshold-free (zero drift")
    print("by construction), far/near-origin bands move only a few percent")
    print("under threshold doubling, while the intermediate band roughly")
    print("doubles — its two-sided constant necessarily depends on (c2, c3).")


if __name__ == "__main__":
    main()
