"""Regenerates the fixture curves in this directory.

Run from anywhere: python3 generate.py
"""

import math
from pathlib import Path

HERE = Path(__file__).resolve().parent


def write(name, points, closed=False):
    lines = ["# closed"] if closed else []
    lines += [",".join(repr(float(v)) for v in p) for p in points]
    (HERE / name).write_text("\n".join(lines) + "\n")


def polar(radius, count):
    pts = []
    for k in range(count):
        t = 2 * math.pi * k / count
        r = radius(t)
        pts.append((r * math.cos(t), r * math.sin(t)))
    return pts


def hand(fingers):
    """Axis-aligned outline: palm, fingers (x0, x1, height) along the top, thumb on the left."""
    pts = [(0, 0), (10, 0), (10, 6)]
    for x0, x1, h in sorted(fingers, reverse=True):
        pts += [(x1, 6), (x1, 6 + h), (x0, 6 + h), (x0, 6)]
    pts += [(0, 6), (0, 3.4), (-4, 3.4), (-4, 2), (0, 2)]
    return pts


def main():
    write("seg_x.csv", [(0, 0), (1, 0)])
    write("seg_minus_x.csv", [(0, 0), (-1, 0)])
    write("seg_y.csv", [(0, 0), (0, 1)])
    write("circle.csv", polar(lambda t: 1.0, 64), closed=True)
    write("square.csv", [(0, 0), (1, 0), (1, 1), (0, 1)], closed=True)

    write("hand1.csv", hand([(8.4, 9.6, 3.5), (6.2, 7.6, 5.0), (4.0, 5.4, 5.5), (1.8, 3.2, 5.0)]), closed=True)
    write("hand2.csv", hand([(8.4, 9.6, 3.5), (4.0, 5.4, 5.5), (1.8, 3.2, 5.0)]), closed=True)

    # Body, neck and head, and four legs as bumps on an ellipse.
    def horse(legs, neck):
        def radius(t):
            base = 1.0 / math.sqrt((math.cos(t) / 1.6) ** 2 + (math.sin(t) / 0.8) ** 2)
            r = base
            for c in legs:
                d = math.atan2(math.sin(t - c), math.cos(t - c))
                r += 0.9 * math.exp(-((d / 0.07) ** 2))
            d = math.atan2(math.sin(t - neck), math.cos(t - neck))
            r += 1.0 * math.exp(-((d / 0.25) ** 2))
            return r

        return radius

    write("horse1.csv", polar(horse([4.0, 4.3, 5.1, 5.4], 0.75), 300), closed=True)
    write("horse2.csv", polar(horse([3.9, 4.35, 5.0, 5.5], 0.9), 300), closed=True)

    write("arc.csv", [(math.cos(t), math.sin(t)) for t in (0.5 * math.pi * k / 40 for k in range(41))])
    write(
        "spiral.csv",
        [((1 + 0.3 * t) * math.cos(t), (1 + 0.3 * t) * math.sin(t)) for t in (3 * math.pi * k / 120 for k in range(121))],
    )
    write("wave.csv", [(x, 0.3 * math.sin(3 * x)) for x in (2 * math.pi * k / 100 for k in range(101))])
    write("zigzag.csv", [(k * 0.5, (k % 2) * 0.7) for k in range(9)])
    write(
        "helix.csv",
        [(math.cos(t), math.sin(t), 0.2 * t) for t in (4 * math.pi * k / 120 for k in range(121))],
    )

    write("triangle.csv", [(0.0,), (1.0,), (0.0,)])
    write("ramp.csv", [(k / 10,) for k in range(11)])
    write("ramp_warped.csv", [((k / 10) ** 2,) for k in range(11)])
    write("ramp_down.csv", [(1 - k / 10,) for k in range(11)])
    write("sine.csv", [(math.sin(2 * math.pi * k / 50),) for k in range(51)])


if __name__ == "__main__":
    main()
