"""The eigenvalue ODE of Ricci flow and the pinching-line computation.

Model spaces shrink self-similarly, a(t) = a(0)/(1-2t).  A generic profile
does not, but its traces still follow S0/(1 - S0 t).  On a pinching line the
derivative gap equals I - delta R, so it is positive once delta < I/R.
"""

import numpy as np

from einpinch.curvature import EigenProfile, blocks_to_profile, model_space, tensor_to_blocks
from einpinch.flow import (
    FlowState,
    boundary_derivative_gap,
    integrate,
    line_through,
    self_similar_residual,
    trace_identity_residual,
)
from einpinch.lemmas import invariant_I

for name in ("S4", "CP2", "S2xS2"):
    p = blocks_to_profile(tensor_to_blocks(model_space(name)))
    print(f"{name:6s} self-similar residual {self_similar_residual(p):.2e}")

p = EigenProfile([0.1, 0.6, 1.3], [0.2, 0.8, 1.0])
traj = integrate(FlowState(p), 0.4, 1e-4)
print(f"generic profile: trace residual {trace_identity_residual(traj):.2e}, "
      f"self-similar residual {self_similar_residual(p):.3f}")
print("final a, c:", np.round(traj.a[-1], 4), np.round(traj.c[-1], 4))

delta = 0.5 * invariant_I(p) / p.scalar
gap = boundary_derivative_gap(p, line_through(p, delta), 0.0)
print(f"gap {gap:.4f} = I - delta R = {invariant_I(p) - delta * p.scalar:.4f}")
