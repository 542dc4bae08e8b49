#!/usr/bin/env python3
"""Straight-line reference for the six partially overlapping samples tests.

Evaluates the formulas directly in 50-digit arithmetic (mpmath), with its own
CSV reading, midranks, normal quantile and t distribution. Shares no code with
the C++ library. Writes statistic, df and two-sided p for each method.

    python3 golden_oracle.py golden12.csv > golden12_expected.csv
"""
import csv
import sys

import mpmath as mp

mp.mp.dps = 50


def read_sample(path):
    paired, only_a, only_b = [], [], []
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["group1", "group2"]
    for g1, g2 in rows[1:]:
        if g1 and g2:
            paired.append((mp.mpf(g1), mp.mpf(g2)))
        elif g1:
            only_a.append(mp.mpf(g1))
        else:
            only_b.append(mp.mpf(g2))
    return paired, only_a, only_b


def mean(xs):
    return mp.fsum(xs) / len(xs)


def var(xs):
    m = mean(xs)
    return mp.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1)


def pearson(pairs):
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    mx, my = mean(xs), mean(ys)
    sxy = mp.fsum((x - mx) * (y - my) for x, y in pairs)
    sxx = mp.fsum((x - mx) ** 2 for x in xs)
    syy = mp.fsum((y - my) ** 2 for y in ys)
    return sxy / mp.sqrt(sxx * syy)


def t_two_sided(t, df):
    # 2 * P(T > |t|) = I_{df/(df+t^2)}(df/2, 1/2)
    x = df / (df + t * t)
    return mp.betainc(df / 2, mp.mpf(1) / 2, 0, x, regularized=True)


def statistics(paired, only_a, only_b):
    s1 = [p[0] for p in paired] + only_a
    s2 = [p[1] for p in paired] + only_b
    na, nb, nc = len(only_a), len(only_b), len(paired)
    n1, n2 = na + nc, nb + nc
    x1, x2 = mean(s1), mean(s2)
    v1, v2 = var(s1), var(s2)
    r = pearson(paired)

    sp = mp.sqrt(((n1 - 1) * v1 + (n2 - 1) * v2) / ((n1 - 1) + (n2 - 1)))
    t1 = (x1 - x2) / (sp * mp.sqrt(mp.mpf(1) / n1 + mp.mpf(1) / n2 - 2 * r * mp.mpf(nc) / (n1 * n2)))
    df1 = (nc - 1) + (mp.mpf(na + nb + nc - 1) / (na + nb + 2 * nc)) * (na + nb)

    t2 = (x1 - x2) / mp.sqrt(v1 / n1 + v2 / n2 - 2 * r * mp.sqrt(v1) * mp.sqrt(v2) * nc / (n1 * n2))
    gamma = (v1 / n1 + v2 / n2) ** 2 / ((v1 / n1) ** 2 / (n1 - 1) + (v2 / n2) ** 2 / (n2 - 1))
    df2 = (nc - 1) + ((gamma - nc + 1) / (na + nb + 2 * nc)) * (na + nb)
    return (t1, df1, t_two_sided(t1, df1)), (t2, df2, t_two_sided(t2, df2))


def midranks(values):
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [None] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        for k in range(i, j + 1):
            ranks[order[k]] = mp.mpf(i + 1 + j + 1) / 2
        i = j + 1
    return ranks


def transform(paired, only_a, only_b, fn):
    pooled = [p[0] for p in paired] + [p[1] for p in paired] + only_a + only_b
    new = fn(pooled)
    nc, na = len(paired), len(only_a)
    tp = [(new[i], new[nc + i]) for i in range(nc)]
    return tp, new[2 * nc:2 * nc + na], new[2 * nc + na:]


def vdw(pooled):
    n = len(pooled)
    return [mp.sqrt(2) * mp.erfinv(2 * (y / (n + 1)) - 1) for y in midranks(pooled)]


def main():
    sample = read_sample(sys.argv[1])
    new = statistics(*sample)
    rnk = statistics(*transform(*sample, midranks))
    int_ = statistics(*transform(*sample, vdw))
    rows = [("NEW1", new[0]), ("NEW2", new[1]), ("RNK1", rnk[0]), ("RNK2", rnk[1]),
            ("INT1", int_[0]), ("INT2", int_[1])]
    print("method,statistic,df,p_value")
    for name, (t, df, p) in rows:
        print(f"{name},{mp.nstr(t, 20)},{mp.nstr(df, 20)},{mp.nstr(p, 20)}")


if __name__ == "__main__":
    main()
