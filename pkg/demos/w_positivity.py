"""Signs of the determinants W_{k,h} at the point (g, 3g-k-h-2).

h = 1 is covered by the recurrence and should be positive throughout; the
larger h rows probe where positivity starts.
"""
import sys

from higgspw.heatpoly import positivity_scan


def main(jobs=1):
    for h in (1, 2, 3):
        rows = positivity_scan(range(h, 6), [h], range(2, 14), jobs=jobs)
        rows = [r for r in rows if r[2] >= r[0] + 1]
        bad = [(k, g) for k, _, g, _, s in rows if s != "positive"]
        first_all_pos = {}
        for k, _, g, _, s in rows:
            if all(s2 == "positive" for k2, _, g2, _, s2 in rows if k2 == k and g2 >= g):
                first_all_pos.setdefault(k, g)
        print(f"h={h}: {len(rows)} points, non-positive at {bad or 'none'}")
        for k, g in sorted(first_all_pos.items()):
            print(f"    k={k}: positive for every scanned g >= {g}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 1)
