"""Recovering a Berger frame from a randomly rotated curvature tensor.

A feasible set of Berger data fixes the tensor in its adapted frame.  After a
random rotation the frame is lost; find_berger_frame rebuilds it from the
eigenbases of A and C and reads the data back.
"""

import numpy as np

from einpinch.berger import (
    BergerData,
    berger_to_tensor,
    find_berger_frame,
    random_rotation,
    rotate_tensor,
    verify_berger_properties,
)
from einpinch.curvature import model_space

rng = np.random.default_rng(1)

d = BergerData(m=-0.1, k13=0.4, k14=0.7, x=0.05, y=-0.02)
t = rotate_tensor(berger_to_tensor(d), random_rotation(rng))
found = find_berger_frame(t)
print("input data     ", d.as_tuple())
print("recovered data ", tuple(round(v, 12) for v in found.data.as_tuple()))
print("checks         ", verify_berger_properties(t, found.frame).to_dict())

# CP2 in its complex frame is not adapted: e1, e2 span a holomorphic plane
cp2 = model_space("CP2")
print("CP2, complex frame:", verify_berger_properties(cp2, np.eye(4)).failed())
print("CP2, Berger frame: ", find_berger_frame(cp2).data.to_dict())
