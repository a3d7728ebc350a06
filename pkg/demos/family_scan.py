"""Betti numbers along FI-graph families and where they become polynomial.

    python demos/family_scan.py
"""

from gbh.families import betti_sequence, detect_polynomial, load_family, scan_family, support_stabilization

star = load_family("demos/data/star_family.json")
k2 = load_family("demos/data/k2_family.json")

window = list(range(3, 9))
seq = betti_sequence(star, q=1, p=0, j=2, n_range=window)
print("star, beta_{0,2}(H_1) for n in 3..8:", seq)
for d in (0, 1, 2):
    r = detect_polynomial(seq, window, d)
    print(f"  degree <= {d}: {r.status}" + (f", {r.describe_polynomial()}" if r.fitted else ""))

for p in (0, 1):
    s = support_stabilization(star, 1, p, window, 4)
    print(f"star, support of beta_{{{p},*}}(H_1): {s.supports}  -> {s.status}")

scan = scan_family(k2, q=1, p=0, n_range=range(3, 8), j_max=3)
print("\nK_{n,2}, beta_{0,j}(H_1):")
print(scan.to_csv())
for j, rep in scan.polynomials.items():
    if rep.fitted:
        print(f"  j={j}: {rep.describe_polynomial()} from n={rep.stable_from}")
