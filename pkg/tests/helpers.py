import numpy as np

from neqr_grover.image import GrayImage
from neqr_grover.statevector import CCX, CX, MCX, MCZ, Circuit, H, StateVector, X, Z


def random_state(n, rng):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return StateVector(n, v / np.linalg.norm(v))


def random_gate(n, rng):
    kind = rng.integers(7) if n >= 3 else rng.integers(3)
    qs = [int(q) for q in rng.permutation(n)]
    if kind == 0:
        return X(qs[0])
    if kind == 1:
        return H(qs[0])
    if kind == 2:
        return Z(qs[0])
    if kind == 3:
        return CX(qs[0], qs[1])
    if kind == 4:
        return CCX(qs[0], qs[1], qs[2])
    k = int(rng.integers(1, n))
    if kind == 5:
        return MCX(qs[:k], qs[k])
    return MCZ(qs[: k + 1])


def random_circuit(n, size, rng):
    return Circuit(n, (random_gate(n, rng) for _ in range(size)))


# Intensities of the worked 2x2 encoding example, row-major.
ENCODE_PIXELS = (0, 255, 65, 40)
# Experiment-2 image. The three dark pixels sit at (0,0), (1,0) and (1,1);
# the bright 255 is at (0,1).
SEARCH_ROWS = [[0, 20], [255, 40]]
# Experiment-1 intensities; the bright pixel is moved through all four positions.
SEMICLASSICAL_BASE = (30, 60, 80, 200)


def semiclassical_images():
    images = []
    for k in range(4):
        px = list(SEMICLASSICAL_BASE)
        px[3], px[k] = px[k], px[3]
        images.append(GrayImage.from_pixels(px))
    return images
