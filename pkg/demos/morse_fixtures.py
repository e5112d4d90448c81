"""
Morse complexes from critical points
====================================

Build boundary matrices from critical points and mod-2 orbit counts, read
off Betti numbers, and assemble a block-form transition matrix.
"""

import numpy as np

from gttm import io
from gttm.braid import homology
from gttm.morse import BlockTransition, InterleavingError, assemble_block_gttm, build_morse_complex, verify_unique_gttm

for name in ("double_well", "circle", "sphere", "torus", "rp2"):
    data = io.load(name).morse
    delta = build_morse_complex(data)
    h = homology(delta)
    top = max(delta.basis.degrees.tolist())
    print(f"{name:12s} critical points {len(data.critical_points)}, Betti mod 2 {[h.dim_in(k) for k in range(top + 1)]}")

# projective plane: two orbits run from the index-2 point to the index-1 point, which cancel mod 2
print(build_morse_complex(io.load("rp2").morse).matrix)

# blocks per degree assemble into a transition matrix
inst = io.load("example_2_12")
dom, cod = inst.pair()
T = assemble_block_gttm(inst.blocks, dom, cod)
print(T.matrix)
print(verify_unique_gttm(dom, cod, inst.cover).summary())

# identity blocks do not intertwine the two boundaries
try:
    assemble_block_gttm(BlockTransition({0: [[1]], 1: np.eye(2, dtype=np.uint8)}), dom, cod)
except InterleavingError as exc:
    print("identity blocks rejected:", exc)
