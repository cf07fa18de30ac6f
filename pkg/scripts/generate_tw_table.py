#!/usr/bin/env python3
"""Regenerate the Tracy-Widom order-1 CDF table shipped with the package.

The table is versioned data: regenerating with the same parameters must
reproduce it (a test enforces this). Run from the repository root:

    python scripts/generate_tw_table.py
"""

from pathlib import Path

from specsense.rmt import DEFAULT_TABLE_RESOURCE, build_tw_table, save_table

OUT = Path(__file__).resolve().parents[1] / "src" / "specsense" / "data" / DEFAULT_TABLE_RESOURCE


def main() -> None:
    table = build_tw_table()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    save_table(table, OUT)
    print(f"wrote {OUT} ({table.grid.size} rows, "
          f"t in [{table.grid[0]:g}, {table.grid[-1]:g}], step {table.meta['step']:g})")


if __name__ == "__main__":
    main()
