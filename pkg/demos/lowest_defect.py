"""Lowest-defect solutions beta^k + eta F_k for small k and g.

For each (g, k) the class is built from its generating function and then
checked against every column of the pairing matrix through integrals over Z.
"""
from higgspw.pwmatrix import annihilation_check, lowest_defect_Fk


def main():
    for k in range(1, 4):
        for g in range(k + 1, k + 4):
            cls = lowest_defect_Fk(g, k)
            ok = not any(annihilation_check(g, k, cls))
            print(f"g={g} k={k} {'ok ' if ok else 'BAD'} {cls}")


if __name__ == "__main__":
    main()
