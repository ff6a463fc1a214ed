"""Named model presets in run-config shape."""

import math

FIXTURES = {
    "SCALAR": {
        "A": [[0.0]],
        "B": [[1.0]],
        "Sigma": [[1.0]],
        "x0": [0.0],
        "T": 1.0,
        "event": {"w": [1.0], "a": 0.0},
        "p1": 0.8413447460685429,
    },
    # Altitude gate: position/velocity double integrator, sigma = 0.5 m s^-1/2
    "DRONE": {
        "A": [[0.0, 1.0], [0.0, 0.0]],
        "B": [[0.0], [1.0]],
        "Sigma": [[0.25, 0.0], [0.0, 0.25]],
        "x0": [0.0, 0.0],
        "T": 1.0,
        # a = -Phi^-1(0.7) * sqrt(1/3) puts the baseline at p0 = 0.7
        "event": {"w": [1.0, 0.0], "a": -0.5244005127080407 * math.sqrt(1.0 / 3.0)},
        "p0": 0.7,
        "p1": 0.9,
    },
}
