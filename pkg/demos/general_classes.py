"""Kernel dimensions for the general classes beta^(k-h) (4 gamma)^h + eta F.

Prints one row per (k, h, g): whether g is in the redundancy range, det of the
modified factor Q~, the kernel dimension and the solution when it is unique.
"""
from higgspw import linalg
from higgspw.pwmatrix import build_tildeQ, solve_general


def main():
    print("k h g  range  det(Q~)  dim  solution")
    for k in range(1, 4):
        for h in range(1, k + 1):
            for g in range(k + 1, k + h + 3):
                sol = solve_general(g, k, h)
                dq = linalg.det(build_tildeQ(g, k, h).entries)
                text = str(sol.solution) if sol.unique else "-"
                print(f"{k} {h} {g:<2} {'yes' if sol.in_redundancy_range else 'no ':<5}  "
                      f"{str(dq):<8} {sol.kernel_dim:<4} {text}")


if __name__ == "__main__":
    main()
