"""Independent plain-math reference formulas for the benchmark problems.

Written separately from ``dso.problems`` (no shared code) so the two can
check each other.
"""

import math


def welded_beam_ref(x):
    x1, x2, x3, x4 = map(float, x)
    P, L, E, G = 6000.0, 14.0, 30.0e6, 12.0e6
    f = 1.10471 * x1**2 * x2 + 0.04811 * x3 * x4 * (14.0 + x2)
    t1 = P / (math.sqrt(2) * x1 * x2)
    M = P * (L + x2 / 2)
    R = math.sqrt(x2**2 / 4 + ((x1 + x3) / 2) ** 2)
    J = 2 * (math.sqrt(2) * x1 * x2 * (x2**2 / 12 + ((x1 + x3) / 2) ** 2))
    t2 = M * R / J
    tau = math.sqrt(t1**2 + 2 * t1 * t2 * x2 / (2 * R) + t2**2)
    sigma = 6 * P * L / (x4 * x3**2)
    delta = 4 * P * L**3 / (E * x3**3 * x4)
    pc = 4.013 * E * math.sqrt(x3**2 * x4**6 / 36) / L**2 * (1 - x3 / (2 * L) * math.sqrt(E / (4 * G)))
    g = [
        tau - 13600,
        sigma - 30000,
        x1 - x4,
        0.10471 * x1**2 + 0.04811 * x3 * x4 * (14 + x2) - 5,
        0.125 - x1,
        delta - 0.25,
        P - pc,
    ]
    return f, g


def pressure_vessel_ref(x):
    x1, x2, x3, x4 = map(float, x)
    f = 0.6224 * x1 * x3 * x4 + 1.7781 * x2 * x3**2 + 3.1661 * x1**2 * x4 + 19.84 * x1**2 * x3
    g = [
        -x1 + 0.0193 * x3,
        -x2 + 0.00954 * x3,
        -math.pi * x3**2 * x4 - 4 / 3 * math.pi * x3**3 + 1296000,
        x4 - 240,
    ]
    return f, g


def three_bar_truss_ref(x):
    x1, x2 = map(float, x)
    r2 = math.sqrt(2)
    f = (2 * r2 * x1 + x2) * 100
    g = [
        (r2 * x1 + x2) / (r2 * x1**2 + 2 * x1 * x2) * 2 - 2,
        x2 / (r2 * x1**2 + 2 * x1 * x2) * 2 - 2,
        1 / (r2 * x2 + x1) * 2 - 2,
    ]
    return f, g


REFERENCES = {
    "welded_beam": welded_beam_ref,
    "pressure_vessel": pressure_vessel_ref,
    "three_bar_truss": three_bar_truss_ref,
}
