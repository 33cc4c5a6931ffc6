"""Direct-inequality oracle for the admissible (alpha, beta, gamma) regions.

Each case is re-typed from the theorem statements, independently of the C++
classifier. Prints the frozen truth table consumed by tests/acceptance.
"""
from math import sqrt

S3 = sqrt(3.0)


def rad1(b):
    return -2.0 * (b + 2.0) * (b + 5.0)


def rad2(b):
    return -2.0 * b * b - 22.0 * b - 59.0


def kazhikhov_cases(a, b, g):
    out = []
    if -3 <= b <= -2 and g >= 1:
        out.append("i")
    if rad1(b) >= 0 and (-7 - S3) / 2 <= b < -3 and g > -b - 2:
        if (b + 2 - sqrt(rad1(b))) / 2 < a <= b + 3:
            out.append("ii")
    if rad2(b) >= 0 and -5 <= b <= -14 / 3 and g > -b - 2:
        if (-3 - sqrt(rad2(b))) / 2 < a <= b + 3:
            out.append("iii")
    return out


def density_cases(a, b, g):
    out = []
    if -3 <= b <= -2 and g >= 1:
        out.append("i")
    if abs(a - (b + 3) / 2) <= 1e-12 and b < -3 and g > -b - 2:
        out.append("ii")
    if rad1(b) >= 0 and -4 <= b < -3 and g > -b - 2:
        if (b + 2 - sqrt(rad1(b))) / 2 < a <= (b + 4) / 3:
            out.append("iii")
    if rad1(b) >= 0 and -5 <= b < -4 and g > -b - 2:
        r = sqrt(rad1(b))
        if (b + 2 - r) / 2 < a < (b + 2 + r) / 2:
            out.append("iv")
    if rad2(b) >= 0 and (-11 - S3) / 2 <= b <= (-11 + S3) / 2 and g > -b - 2:
        r = sqrt(rad2(b))
        if (-3 - r) / 2 < a < (-3 + r) / 2:
            out.append("v")
    return out


TRIPLES = [
    # Kazhikhov positives
    ("T1_1", 7.0, -2.5, 1.4),
    ("T1_1", -3.0, -3.0, 1.0),
    ("T1_1", 0.0, -2.0, 2.0),
    ("T1_1", -0.5, -3.5, 2.0),
    ("T1_1", -1.0, -4.0, 2.5),
    ("T1_1", -0.3, -3.2, 1.5),
    ("T1_1", -1.8, -4.8, 3.0),
    ("T1_1", -1.92, -4.9, 3.0),
    ("T1_1", -1.72, -4.7, 3.0),
    ("T1_1", 100.0, -2.25, 1.0),
    # Density-dependent positives
    ("T1_2", 0.0, -2.5, 1.4),
    ("T1_2", -0.25, -3.5, 2.0),
    ("T1_2", -2.0, -7.0, 6.0),
    ("T1_2", 0.0, -3.8, 2.0),
    ("T1_2", -0.5, -4.0, 2.5),
    ("T1_2", -1.0, -4.5, 3.0),
    ("T1_2", -1.5, -4.9, 3.0),
    ("T1_2", -1.5, -5.5, 4.0),
    ("T1_2", -1.5, -6.0, 4.5),
    ("T1_2", -5.0, -2.0, 1.0),
    # Negatives
    ("T1_1", 0.0, -1.0, 1.4),
    ("T1_1", 0.0, -3.5, 2.0),
    ("T1_1", -0.5, -3.5, 1.5),
    ("T1_1", -1.0, -4.8, 3.0),
    ("T1_1", 0.0, -6.0, 5.0),
    ("T1_2", 0.3, -3.5, 2.0),
    ("T1_2", 0.0, -4.5, 3.0),
    ("T1_2", -0.25, -3.5, 1.5),
    ("T1_2", 0.0, -1.5, 1.0),
    ("T1_2", -1.5, -7.0, 6.0),
]

if __name__ == "__main__":
    for th, a, b, g in TRIPLES:
        cases = kazhikhov_cases(a, b, g) if th == "T1_1" else density_cases(a, b, g)
        print(f'{{Theorem::{th}, {a!r}, {b!r}, {g!r}, "{",".join(cases)}"}},')
