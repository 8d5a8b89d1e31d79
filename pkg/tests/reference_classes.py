"""Classes displayed for the corpus fixtures, written in the strict basis.

Each entry is ``(fixture, pencil spec, VMRT class)``; pullbacks are
``(fixture, curve class)`` pairs that must be irreducible negative curves.
"""


def _lines(n, skip=()):
    out = []
    for i in range(1, n + 1):
        if i in skip:
            continue
        terms = ["ζ-H"] + [f"{'-' if j == i else '+'}E{j}" for j in range(1, n + 1)]
        out.append(({"line_through": i}, "".join(terms)))
    return out


VMRT_CLASSES = [
    ("five_point", {"line_through": 5}, "ζ-H+E1+E2+E3+E4-E5"),
    ("five_point", {"conic_through": [1, 2, 3, 4]}, "ζ+H-E1-E2-E3-E4+E5"),
    *[("2A1_9", p, c) for p, c in _lines(5)],
    ("2A1_9", {"conic_through": [1, 2, 3, 4]}, "ζ+H-E1-E2-E3-E4"),
    ("A3_4", {"line_through": 5}, "ζ-H+E1+2E2+3E3+E4-E5"),
    ("A3_4", {"conic_through": [1, 2, 3, 4]}, "ζ+H-E1-2E2-3E3-E4+E5"),
    ("2A2", {"conic_through": [1, 2, 3, 4]}, "ζ+H-E1-2E2-3E3-E4+E6"),
    ("2A2", {"conic_through": [1, 4, 5, 6]}, "ζ+H-E1+E3-E4-2E5-3E6"),
    ("A2+2A1", {"line_through": 2}, "ζ-H+E1-E2+E3+E4+E5+2E6"),
    ("A2+2A1", {"conic_through": [1, 4, 5, 6]}, "ζ+H-E1+E2+E3-E4-E5-2E6"),
    ("D4", {"conic_through": [1, 4, 2, 5]}, "ζ+E3-E4-E5+2E6"),
    ("D4", {"conic_through": [1, 4, 3, 6]}, "ζ+E2-E4+2E5-E6"),
    ("D4", {"conic_through": [2, 5, 3, 6]}, "ζ+E1+2E4-E5-E6"),
    ("A4", {"conic_through": [1, 2, 3, 6]}, "ζ+H-E1-2E2-3E3+E4+2E5-E6"),
    ("A4", {"conic_through": [1, 4, 5, 6]}, "ζ+H-E1+E3-E4-2E5-E6"),
    ("A3+A1", {"line_through": 4}, "ζ-H+E1+2E2+3E3-E4+E5+E6"),
    ("A3+A1", {"conic_through": [1, 2, 5, 6]}, "ζ+H-E1-2E2-E3+E4-E5-E6"),
    *[("4A1", p, c) for p, c in _lines(6)],
    ("4A1", {"conic_through": [1, 2, 3, 6]}, "ζ+H-E1-E2-E3-E6"),
    ("4A1", {"conic_through": [1, 2, 4, 5]}, "ζ+H-E1-E2-E4-E5"),
    ("4A1", {"conic_through": [3, 4, 5, 6]}, "ζ+H-E3-E4-E5-E6"),
    ("A3+2A1", {"line_through": 1}, "ζ-H-E1+E2+E3+2E5+2E6"),
    ("A3+2A1", {"line_through": 2}, "ζ-H+E1-E2+E3+2E4+2E6"),
    ("A3+2A1", {"line_through": 3}, "ζ-H+E1+E2-E3+E4+E5"),
    ("A3+2A1", {"conic_through": [1, 4, 2, 5]}, "ζ-E4-E5+E6"),
    ("A3+2A1", {"conic_through": [1, 2, 3, 6]}, "ζ+H-E1-E2-E3-2E6"),
    ("E6", {"line_through": 1}, "ζ-H-E1+E4+2E5+3E6"),
    ("2A3+A1", {"line_through": 7}, "ζ-H+E1+E2+E3+2E4+2E5+E6-E7"),
    ("2A3+A1", {"conic_through": [1, 2, 4, 5]}, "ζ-E4-E5+E6+E7"),
    ("2A3+A1", {"conic_through": [1, 2, 3, 6]}, "ζ+H-E1-E2-E3-2E6"),
]

PULLBACK_CURVES = [
    ("2A1_9", "H-E1-E3-E5"),
    ("2A1_9", "H-E2-E4-E5"),
    ("A3+2A1", "H-E1-E2-E4-E5"),
    ("A3+2A1", "H-E1-E3-2E4-E6"),
    ("A3+2A1", "H-E2-E3-2E5-E6"),
]
