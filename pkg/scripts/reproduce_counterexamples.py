#!/usr/bin/env python3
"""Run every built-in scenario with its default parameters and print the
check table, plus the randomized bound sampler. Exit code 0 iff every
check passes."""

import sys

from entroledger import scenarios


def main() -> int:
    builders = [
        ("gas_expansion (N=1)", lambda: scenarios.gas_expansion(N=1)),
        ("gas_expansion (N=3)", lambda: scenarios.gas_expansion(N=3)),
        ("driven_qubit", scenarios.driven_qubit),
        ("twin_bodies (equal betas)", lambda: scenarios.twin_bodies(beta_A0=1.0, beta_B0=1.0)),
        ("twin_bodies (hot A, cold B)",
         lambda: scenarios.twin_bodies(beta_A0=0.5, beta_B0=2.0)),
        ("pure_bath", scenarios.pure_bath),
        ("degenerate_ground", scenarios.degenerate_ground),
    ]
    all_ok = True
    for label, build in builders:
        run = scenarios.run_scenario(build())
        print(label)
        for r in run.check_results:
            all_ok &= r.passed
            print(f"  [{'ok' if r.passed else 'FAIL'}] {r.name}: "
                  f"measured={r.measured!r} threshold={r.threshold!r} -- {r.detail}")

    for d_b in (2, 4, 8):
        rep = scenarios.bounds_sampler(seed=2024 + d_b, trials=100, d_a=2, d_b=d_b)
        ok = rep.violations_mi == 0 and rep.violations_ds_b == 0
        all_ok &= ok
        print(f"bounds_sampler d_A=2 d_B={d_b}")
        print(f"  [{'ok' if ok else 'FAIL'}] violations: mutual information "
              f"{rep.violations_mi}, bath entropy change {rep.violations_ds_b}; "
              f"max ratios {rep.max_ratio_mi:.3f} / {rep.max_ratio_ds_b:.3f}")
    return 0 if all_ok else 2


if __name__ == "__main__":
    sys.exit(main())
