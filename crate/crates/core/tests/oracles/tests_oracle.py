# Reference statistics for K-S (label-ordered vectors and raw samples), Welch t and one-way ANOVA.
import numpy as np
from scipy import stats, special

def fmt(xs):
    return "&[" + ", ".join(repr(float(x)) for x in xs) + "]"

KS_VECTORS = [
    ([0.1, 0.2, 0.3, 0.4], [0.25, 0.25, 0.25, 0.25]),
    ([0.087, 0.230, 0.310, 0.112, 0.167, 0.094], [0.1, 0.2, 0.3, 0.1, 0.2, 0.1]),
    ([5, 0, 0, 0, 0, 0, 0, 0, 0, 5], [1] * 10),
    ([3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8, 9, 7, 9, 3, 2, 3, 8, 4], [2, 7, 1, 8, 2, 8, 1, 8, 2, 8, 4, 5, 9, 0, 4, 5, 2, 3, 5, 3]),
    ([0.0, 0.0, 0.0, 1.0], [1.0, 0.0, 0.0, 0.0]),
]
print("== ks vectors: (a, b, D, p) ==")
for a, b in KS_VECTORS:
    a = np.asarray(a, float); b = np.asarray(b, float)
    na = a / a.sum(); nb = b / b.sum()
    d = np.max(np.abs(np.cumsum(na) - np.cumsum(nb)))
    ne = len(a) * len(b) / (len(a) + len(b))
    p = special.kolmogorov(np.sqrt(ne) * d)
    print(f"({fmt(a)}, {fmt(b)}, {float(d)!r}, {float(p)!r}),")

rng = np.random.default_rng(20231015)
print("== ks samples: (a, b, D, p) ==")
SAMPLES = [
    (rng.normal(0, 1, 40), rng.normal(0.5, 1, 55)),
    (rng.exponential(1, 30), rng.exponential(1.3, 30)),
]
for a, b in SAMPLES:
    a = np.round(a, 6); b = np.round(b, 6)
    d = stats.ks_2samp(a, b).statistic
    ne = len(a) * len(b) / (len(a) + len(b))
    p = special.kolmogorov(np.sqrt(ne) * d)
    print(f"({fmt(a)}, {fmt(b)}, {float(d)!r}, {float(p)!r}),")

WELCH = [
    ([19.1, 20.3, 21.7, 18.4, 22.0, 20.9, 19.8], [24.2, 22.1, 23.9, 25.0, 21.8, 24.4]),
    ([1.0, 2.0, 3.0, 4.0, 5.0], [1.0, 2.0, 3.0, 4.0, 5.0]),
    ([27.5, 21.0, 19.0, 23.6, 17.0, 17.9, 16.9, 20.1, 21.9, 22.6, 23.1, 19.6, 19.0, 21.7, 21.4],
     [27.1, 22.0, 20.8, 23.4, 23.4, 23.5, 25.8, 22.0, 24.8, 20.2, 21.9, 22.1, 22.9, 20.5, 24.4]),
    ([0.5, 0.5, 0.5], [0.1, 0.9, 0.4, 0.7]),
    ([102.0, 98.5, 110.2, 95.1, 101.7, 99.9, 104.4, 97.3, 100.8, 103.6, 96.2],
     [88.0, 121.5, 79.3, 132.8, 101.1]),
]
print("== welch: (a, b, t, p) ==")
for a, b in WELCH:
    r = stats.ttest_ind(a, b, equal_var=False)
    print(f"({fmt(a)}, {fmt(b)}, {float(r.statistic)!r}, {float(r.pvalue)!r}),")

ANOVA = [
    [[6, 8, 4, 5, 3, 4], [8, 12, 9, 11, 6, 8], [13, 9, 11, 8, 7, 12]],
    [[4.17, 5.58, 5.18, 6.11, 4.50, 4.61, 5.17, 4.53, 5.33, 5.14],
     [4.81, 4.17, 4.41, 3.59, 5.87, 3.83, 6.03, 4.89, 4.32, 4.69],
     [6.31, 5.12, 5.54, 5.50, 5.37, 5.29, 4.92, 6.15, 5.80, 5.26]],
    [[1.0, 2.0, 3.0], [1.5, 2.5, 3.5, 2.0]],
    [[10.2, 11.1, 9.8, 10.5], [10.0, 10.9, 10.3, 9.7, 10.6], [10.4, 9.9, 10.8], [10.1, 10.2, 10.7, 9.6]],
    [[370.0, 380.5, 361.2, 395.4, 372.8], [449.5, 431.0, 462.3, 455.9], [401.2, 410.8, 398.3, 415.0, 405.5, 399.9]],
]
print("== anova: (groups, F, p) ==")
for gs in ANOVA:
    r = stats.f_oneway(*gs)
    inner = ", ".join(fmt(g) for g in gs)
    print(f"(&[{inner}], {float(r.statistic)!r}, {float(r.pvalue)!r}),")

print("== summary ==")
xs = [2.5, 3.75, 1.125, 9.0, 4.4, 6.02, 7.7]
print(fmt(xs), np.mean(xs), np.std(xs, ddof=1))
