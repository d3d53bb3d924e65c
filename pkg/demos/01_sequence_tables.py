"""Tour of the sequence layer: every named family, classical vs deformed.

Run:  python demos/01_sequence_tables.py
"""

from fractions import Fraction as F

from degderange import (
    bell_deg,
    derange_deg,
    derange_deg_order,
    derange_deg_poly,
    falling_deg,
    fubini_deg,
    stirling1_deg,
    stirling2_deg,
)


def banner(title):
    print()
    print(title)
    print("-" * len(title))


banner("Derangement numbers: classical (lam=0) next to two deformations")
print(f"{'n':>3} {'lam=0':>10} {'lam=1/2':>10} {'lam=-1/3':>10}")
for n in range(9):
    print(
        f"{n:>3} {str(derange_deg(n, 0, 0)):>10}"
        f" {str(derange_deg(n, F(1, 2), 0)):>10}"
        f" {str(derange_deg(n, F(-1, 3), 0)):>10}"
    )

banner("Derangement polynomials in x (lam=1/2), printed low degree first")
for n in range(5):
    coeffs = derange_deg_poly(n, F(1, 2)).coeffs
    print(f"  n={n}: {[str(c) for c in coeffs]}")

banner("Higher-order derangement values d^(r) at lam=1/3, x=0")
print(f"{'n':>3}" + "".join(f" {'r=' + str(r):>10}" for r in range(1, 5)))
for n in range(7):
    row = "".join(f" {str(derange_deg_order(n, r, F(1, 3), 0)):>10}" for r in range(1, 5))
    print(f"{n:>3}{row}")

banner("Both Stirling triangles at lam=1/2 (rows n, columns m)")
for n in range(6):
    print("  2nd kind:", [str(stirling2_deg(n, m, F(1, 2))) for m in range(n + 1)])
for n in range(6):
    print("  1st kind:", [str(stirling1_deg(n, m, F(1, 2))) for m in range(n + 1)])

banner("Degenerate Fubini values at y=1 and fully degenerate Bell values at x=1")
print(f"{'n':>3} {'Fubini(1)':>12} {'Bell(1)':>12}")
for n in range(8):
    print(f"{n:>3} {str(fubini_deg(n, F(1, 2), 1)):>12} {str(bell_deg(n, F(1, 2), 1)):>12}")

banner("Generalized falling factorials interpolate x^n as lam -> 0")
x = F(3, 4)
for lam in (F(0), F(1, 100), F(1, 10), F(1, 2)):
    vals = [str(falling_deg(x, n, lam)) for n in range(5)]
    print(f"  lam={str(lam):>6}: {vals}")
