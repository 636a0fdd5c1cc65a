"""
Truncation sandwich for a two-player problem
--------------------------------------------
This example script brackets the solution of the `isaacs-2x2` catalog
problem between its max-fused and min-fused truncations and prints how the
gap closes as the truncation level K grows.

Usage:
    - Build an ExperimentConfig with the mesh size and the K list.
    - Call `run_sandwich`; it raises OrderingViolation if the bracket fails.
"""

import logging

from isaacsfd.experiments import ExperimentConfig, run_sandwich


def main():
    logging.basicConfig(level=logging.INFO)

    config = ExperimentConfig(problem='isaacs-2x2', dims=2, domain='ball', radius=1.0, h=0.1,
                              k_list=(0, 1, 2, 4, 8), delta_hat=0.5)
    report = run_sandwich(config)

    for row in report.rows:
        print(f"K={row.K:<4g} gap={row.gap:.3e} upper={row.upper_gap:.3e} lower={row.lower_gap:.3e} "
              f"active={row.upper_active:.2f}/{row.lower_active:.2f}")
    if report.decay_rate is not None:
        print(f"gap(K) decays like K^-{report.decay_rate:.2f}")


if __name__ == "__main__":
    main()
