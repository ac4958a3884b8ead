#!/usr/bin/env python3
"""Regenerate the bundled synthetic price series.

Three geometric random walks with fixed seeds, daily weekday observations
over 2007-01-01 .. 2024-12-31.  Each series skips its own deterministic set
of pseudo-holidays so the calendars do not line up exactly, which exercises
the inner-join alignment downstream.  Byte-identical output on every run.
"""

import datetime
import math
import random

SERIES = [
    # label, start price, daily drift, daily volatility, holiday stride
    ("alpha", 100.0, 2.0e-4, 0.010, 97),
    ("beta", 50.0, 1.0e-4, 0.016, 89),
    ("gamma", 200.0, 5.0e-5, 0.007, 101),
]

FIRST = datetime.date(2007, 1, 1)
LAST = datetime.date(2024, 12, 31)


def trading_days(stride):
    day = FIRST
    ordinal = 0
    while day <= LAST:
        if day.weekday() < 5:
            ordinal += 1
            if ordinal % stride != 0:  # pseudo-holiday: closed every `stride`th day
                yield day
        day += datetime.timedelta(days=1)


def main():
    for label, s0, mu, sigma, stride in SERIES:
        rng = random.Random(f"synthetic-{label}")
        price = s0
        with open(f"{label}.csv", "w", newline="") as out:
            out.write(f"# synthetic geometric random walk '{label}'\n")
            out.write(f"# regenerate with make_synthetic.py (seed synthetic-{label})\n")
            out.write("date,open\n")
            for day in trading_days(stride):
                out.write(f"{day.isoformat()},{price:.6f}\n")
                price *= math.exp(mu + sigma * rng.gauss(0.0, 1.0))


if __name__ == "__main__":
    main()
