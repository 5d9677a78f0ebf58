"""Monte Carlo median error of RSSI trilateration on the default 8-AP layout.

Independent of the C++ code: numpy RNG and numpy least squares. The printed
bound is frozen in tests/unit/test_positioning.cpp and the acceptance suite.
"""

import numpy as np

P0, D0, N, SIGMA, RANGE = -40.0, 1.0, 2.0, 2.0, 60.0
APS = np.array([[15.0 + 30.0 * (i % 4), 15.0 if i < 4 else 45.0] for i in range(8)])


def trial(rng):
    truth = rng.uniform([0.0, 0.0], [120.0, 60.0])
    d = np.linalg.norm(APS - truth, axis=1)
    heard = d <= RANGE
    rssi = P0 - 10.0 * N * np.log10(np.maximum(d[heard], D0) / D0) + rng.normal(0.0, SIGMA, heard.sum())
    r = D0 * 10.0 ** ((P0 - rssi) / (10.0 * N))
    aps = APS[heard]
    a = 2.0 * (aps[1:] - aps[0])
    b = r[0] ** 2 - r[1:] ** 2 + np.sum((aps[1:] - aps[0]) ** 2, axis=1)
    sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    return np.linalg.norm(aps[0] + sol - truth)


def main():
    medians = []
    for seed in range(20):
        rng = np.random.default_rng(seed)
        medians.append(np.median([trial(rng) for _ in range(1000)]))
    medians = np.array(medians)
    print(f"median of medians {np.median(medians):.3f} m, spread {medians.min():.3f}..{medians.max():.3f} m")
    print(f"frozen bound (max over seeds + 20%): {1.2 * medians.max():.2f} m")


if __name__ == "__main__":
    main()
