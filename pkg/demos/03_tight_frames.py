"""
Tight frames and orthogonal completion
======================================

Two rows of a unitary matrix give N vectors in C^2 whose frame operator is
the identity. Padding with zero rows and taking U V^dagger from the SVD
yields an N x N unitary whose top rows are the original frame.
"""

import numpy as np

from nuqft.frames import FrameSet, frame_bounds, frame_operator, orthogonalize_frame

rng = np.random.default_rng(3)
z = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
q, _ = np.linalg.qr(z)
B = q[:2]

f = FrameSet(B, np.eye(2))
print("frame operator:\n", np.round(frame_operator(f), 12))
print(frame_bounds(f))

Bt = orthogonalize_frame(B)
print("unitary:", np.allclose(Bt.conj().T @ Bt, np.eye(6)), " top rows recover B:", np.allclose(Bt[:2], B))

# three equiangular vectors in the plane are tight with beta^2 = 3/2
ang = 2 * np.pi * np.arange(3) / 3
print(frame_bounds(FrameSet(np.vstack([np.cos(ang), np.sin(ang)]), np.eye(2))))
