"""The central identity: precision loss equals -(1/T) d(diagonal discord)/dT.

At high temperature the loss of the greedy local scheme is governed by the
temperature derivative of diagonal discord, with an O(T^-5) remainder.
Two families make the identity exact at every temperature: classical Ising
models (both sides zero) and field-free single-coupling pairs (sech^2 form).
"""

import numpy as np

from quthermo import (
    TwoQubitXYZParams,
    build_chain,
    build_two_qubit,
    diagonal_discord_rate,
    first_order_state,
    gibbs,
    identity_comparison,
    interaction_correction_a,
    order_check_probability_term,
    order_check_qfi,
    precision_loss,
    sech_squared_loss,
    trace_distance,
    xstate_leading_terms,
)
from quthermo.models import ChainParams

# Exact case: b1 = b2 = 0, jy = 0 -- the closed sech^2 form at any T.
pair = build_two_qubit(TwoQubitXYZParams(jx=1.0, jz=2.0))
print("field-free single-coupling pair: loss vs -(1/T) dD/dT vs closed form")
print(f"{'T':>6} {'loss':>13} {'discord rate':>13} {'sech^2 form':>13}")
for t in (0.5, 1.0, 2.0, 10.0):
    loss = precision_loss(gibbs(pair, t))
    rate = diagonal_discord_rate(pair, t)
    exact = sech_squared_loss(1.0, t)
    print(f"{t:6.1f} {loss:13.6e} {rate:13.6e} {exact:13.6e}")
print()

# Generic high-temperature behaviour: T^4-scaled quantities approach the
# coupling coefficients, independent of the local fields.
model = build_two_qubit(TwoQubitXYZParams(b1=3.0, b2=1.0, jx=1.0, jy=1.0, jz=2.0))
coeff = xstate_leading_terms(TwoQubitXYZParams(b1=3.0, b2=1.0, jx=1.0, jy=1.0, jz=2.0))
print(f"leading coefficient (jx^2 + jy^2)/4 = {coeff.precision_loss}")
print(f"{'T':>6} {'T^4 loss':>10} {'T^4 rate':>10} {'rel metric':>11}")
for t in (5.0, 20.0, 100.0):
    cmp = identity_comparison(model, t)
    print(f"{t:6.1f} {t**4 * cmp.precision_loss:10.5f} {t**4 * cmp.discord_rate:10.5f}"
          f" {cmp.relative_metric:11.2e}")
print()

# Three-qubit chain: two couplings, twice the loss of the two-qubit case.
chain = build_chain(ChainParams(3, b=1.0, j=1.0, alpha=0.3))
t = 100.0
print(f"chain at T = {t}: T^4 loss = {t**4 * precision_loss(gibbs(chain, t), (0, 1, 2)):.5f}"
      f" (j^2 = 1.0, twice the single-pair coefficient)")
print()

# Why it works: at high T the reduced state is governed by an effective,
# temperature-independent local Hamiltonian; the first-order expansion
# converges quadratically in 1/T.
omega = interaction_correction_a(model)
print("interaction correction on A for the exchange model:", np.round(omega.matrix, 12).real.tolist())
for t in (25.0, 50.0):
    resid = trace_distance(gibbs(model, t).state, first_order_state(model, t))
    print(f"first-order state residual at T = {t}: {resid:.3e}")
print()

# Order-of-magnitude bookkeeping behind the identity.
chk_f = order_check_qfi(model, 100.0 * model.spectral_norm())
print(f"T^4 QFI vs spectral variance: {chk_f.value:.6f} vs {chk_f.predicted:.6f}"
      f" (residual {chk_f.scaled_residual:.2%}, pass={chk_f.passed})")
chk_p = order_check_probability_term(model, 50.0)
print(f"probability term x T^5 at (T, 2T): {chk_p.value:.4e}, {chk_p.predicted:.4e}"
      f" (ratio {chk_p.scaled_residual:.3f}, pass={chk_p.passed})")
