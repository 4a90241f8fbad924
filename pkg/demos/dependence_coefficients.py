"""Dependence coefficients of small finite-alphabet processes.

For the pair-encoded binary moving average, blocks two steps apart are
independent and the law embeds into a cyclically exchangeable one. A
sticky two-state chain is dependent at every lag. The coverage bounds at
the bottom are plain arithmetic, shown for a long series with small
mixing coefficients.
"""

from lwocp.coefficients import (avg_switch, beta_cond_mixing, beta_mixing,
                                rho_lp, switch_coeff, theorem_bounds,
                                verify_inequalities)
from lwocp.processes import gen_binary_ma, gen_finite_chain

tau = 2
ma = gen_binary_ma(4)
print(f"binary MA, tau={tau}: beta={beta_mixing(ma, tau):.3g}  rho={rho_lp(ma, tau):.3g}")

chain = gen_finite_chain([[0.9, 0.1], [0.1, 0.9]], [0.5, 0.5], 6)
n = chain.m - 1
b, bs = beta_mixing(chain, tau), beta_cond_mixing(chain, tau)
print(f"sticky chain, n={n}, tau={tau}: beta={b:.4f}  beta*={bs:.4f}  "
      f"rho={rho_lp(chain, tau):.4f}")

report = verify_inequalities(chain, tau)
for rec in report.records:
    print(f"  {rec.name:<28} {'holds' if rec.holds else 'FAILS'}")

print(f"  average switch coefficient {avg_switch(chain, tau):.4f}, "
      f"at k=0 {switch_coeff(chain, 0, tau):.4f}")

bounds = theorem_bounds(0.1, n=10_000, tau=20, nu=1e-4, beta=1e-4, beta_star=0.0)
for key, value in bounds.items():
    print(f"  bound {key:<16} {value:.3f}")
