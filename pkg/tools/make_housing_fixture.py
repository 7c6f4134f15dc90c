"""Regenerate src/cofact/data/housing.csv, the demo house-sales table.

506 rows, 14 numeric columns, fully deterministic (counter-based streams,
seed below). Price is driven by size, quality and location signals plus
noise, so filters like `sqft >= 1500` give interesting partitions. Run from
the repo root:  python tools/make_housing_fixture.py
"""

from __future__ import annotations

import pathlib

import numpy as np

from cofact.causal.rng import CounterStream

SEED = 20240611
ROWS = 506
OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "cofact" / "data" / "housing.csv"


def stream(label: str) -> CounterStream:
    return CounterStream(SEED, label)


def main() -> None:
    n = ROWS
    sqft = np.round(900 + 2600 * stream("sqft").uniforms(n) ** 1.3)
    beds = np.clip(np.round(sqft / 900 + stream("beds").normals(n) * 0.7), 1, 6)
    baths = np.clip(np.round(beds / 2 + 0.5 + stream("baths").normals(n) * 0.5), 1, 4)
    lot_sqft = np.round(sqft * (1.8 + 2.2 * stream("lot").uniforms(n)))
    year_built = np.round(1900 + 120 * stream("year").uniforms(n) ** 0.8)
    garage = np.clip(np.round(stream("garage").uniforms(n) * 3), 0, 3)
    dist_center = np.round(1 + 19 * stream("dist").uniforms(n), 1)
    crime = np.round(np.clip(2.5 + dist_center * -0.05 + stream("crime").normals(n), 0.1, 6.0), 2)
    school = np.round(np.clip(6.5 - 0.45 * crime + stream("school").normals(n) * 0.9, 1.0, 10.0), 1)
    tax_rate = np.round(0.9 + 1.4 * stream("tax").uniforms(n), 2)
    walk = np.round(np.clip(95 - 4.2 * dist_center + stream("walk").normals(n) * 6, 5, 100))
    floors = np.clip(np.round(1 + stream("floors").uniforms(n) * 1.6), 1, 3)

    price = (
        42_000
        + 118.0 * sqft
        + 9_500 * beds
        + 14_000 * baths
        + 1.1 * lot_sqft
        + 7_800 * school
        - 2_600 * dist_center
        - 9_000 * crime
        + 190 * (year_built - 1900)
        + 6_500 * garage
        + stream("price").normals(n) * 28_000
    )
    price = np.round(np.clip(price, 45_000, None))

    columns = [
        ("sqft", sqft, 0),
        ("beds", beds, 0),
        ("baths", baths, 0),
        ("lot_sqft", lot_sqft, 0),
        ("year_built", year_built, 0),
        ("garage_spaces", garage, 0),
        ("dist_center_km", dist_center, 1),
        ("crime_index", crime, 2),
        ("school_score", school, 1),
        ("tax_rate", tax_rate, 2),
        ("walk_score", walk, 0),
        ("floors", floors, 0),
        ("price", price, 0),
        ("price_per_sqft", np.round(price / sqft, 2), 2),
    ]

    lines = [",".join(name for name, _, _ in columns)]
    for i in range(n):
        cells = []
        for _, values, decimals in columns:
            value = float(values[i])
            cells.append(f"{value:.{decimals}f}" if decimals else f"{int(value)}")
        lines.append(",".join(cells))
    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({n} rows x {len(columns)} columns)")


if __name__ == "__main__":
    main()
