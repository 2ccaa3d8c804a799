#!/usr/bin/env python3
"""Independent arbitrary-precision recomputation of the closed-form values
checked by the test suite. Writes JSON files into tests/golden/.

Run: python3 tests/oracles/derived_values.py
"""
import json
import os

from mpmath import mp, mpf, sqrt, log, exp, e, pi, erf, erfc, ceil, floor, log as ln

mp.dps = 60

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN = os.path.join(HERE, "..", "golden")


def log2(x):
    return ln(x) / ln(2)


def f(x):
    return float(x)


def k_eps(eps, p, m):
    return int(ceil((p + 2) * log2(ceil(112 * mpf(m) / eps))))


def ss_lp(eps, p, m, d):
    k = k_eps(eps, p, m)
    base = mpf(6272) * e * k / 3 * (2 * mpf(m) / eps) ** (2 * p + 1)
    return 2 ** (2 * (k + 1)) * base ** (2 * k * d)


def ss_linf(eps, m, n, d):
    expo = d * log2(4 * mpf(m) * e * n / (d * eps))
    return 2 * (16 * mpf(m) ** 2 * n / eps**2) ** expo


def menver(eps, m, d):
    return (3584 * e * (2 * mpf(m) / eps) ** 5) ** (4 * d)


def t2(l_emp, cov, m, delta):
    return mpf(l_emp) + sqrt(mpf(2) / m * (ln(cov) + ln(2 / mpf(delta)))) + mpf(1) / m


def t4_terms(l_emp, c, m, gamma, mg, delta, d):
    lsq = ln(128 * mpf(mg) ** 2 * m / mpf(gamma) ** 2) ** 2
    cap = 3 * c * d * lsq
    complexity = sqrt(mpf(2) / m * (cap + ln(2 / mpf(delta))))
    return {
        "empirical": mpf(l_emp),
        "complexity": complexity,
        "capacity_only": sqrt(mpf(2) / m * cap),
        "residual": mpf(1) / m,
        "value": mpf(l_emp) + complexity + mpf(1) / m,
    }


def t5(l_emp, r, gamma, m, delta):
    return mpf(l_emp) + 2 / mpf(gamma) * r + sqrt(ln(1 / mpf(delta)) / (2 * m))


def big_f(c, mg, gamma):
    return 2 * sqrt(14 * mpf(mg) / gamma) * mpf(c) ** mpf(0.25)


def t7_terms(d, k, c, m, gamma, mg):
    c, m, gamma, k, mg = mpf(c), mpf(m), mpf(gamma), mpf(k), mpf(mg)
    if d == 1:
        fc = big_f(c, mg, gamma)
        pref = 160 * sqrt(30 * k * gamma / m) * c ** mpf(0.75)
        root = sqrt(ln(fc) / 2)
        tail = sqrt(pi / 8) * fc * (1 - erf(sqrt(ln(fc))))
        return {"regime": "d_G = 1", "F": fc, "prefactor": pref, "sqrt_log_term": root,
                "erf_term": tail, "value": pref * (root + tail)}
    if d == 2:
        n = ceil(log2(m / c) / 2)
        first = gamma * c ** mpf(0.75) / sqrt(m)
        second = 1152 * sqrt(5 * k / m) * c * n * sqrt(ln(14 * mg * sqrt(m) / (gamma * c ** mpf(0.25))))
        return {"regime": "d_G = 2", "N": n, "h_N": first, "chain": second, "value": first + second}
    dd = mpf(d)
    rate = (c / m) ** (1 / dd)
    const = 8 * mpf(96) ** (dd / 2) * (2 ** (2 / (dd - 2)) + 1)
    first = gamma * rate
    second = const * gamma ** (1 - dd / 2) * sqrt(5 * k) * rate * sqrt(ln(14 * mg / gamma * (m / c) ** (1 / dd)))
    return {"regime": "d_G > 2", "rate": rate, "constant": const, "h_N": sqrt(c) * first,
            "chain": sqrt(c) * second, "value": sqrt(c) * (first + second)}


def a6(eps, p, m, n_grid, n, d):
    levels = (p + 2) * log2(n_grid)
    return 2 ** (levels + 1) * (e * (n_grid - 1) * n / mpf(d)) ** (levels * d)


def erf_series(x, terms=200):
    # Alternating Maclaurin series, evaluated at high precision.
    x = mpf(x)
    s = mpf(0)
    for k in range(terms):
        s += (-1) ** k * x ** (2 * k + 1) / (mp.factorial(k) * (2 * k + 1))
    return 2 / sqrt(pi) * s


def main():
    os.makedirs(GOLDEN, exist_ok=True)
    out = {}
    out["extraction_constant_p1_M1"] = f(mpf(3) / (112 * 2**2))
    out["sauer_shelah_k_eps1_p1_M1"] = k_eps(mpf(1), 1, 1)
    out["sauer_shelah_lp_eps1_p1_M1_d1_log"] = f(ln(ss_lp(mpf(1), 1, 1, 1)))
    out["sauer_shelah_lp_eps05_p2_M1_d3_log"] = f(ln(ss_lp(mpf("0.5"), 2, 1, 3)))
    out["sauer_shelah_linf_eps2_M1_n1_d1"] = f(ss_linf(mpf(2), 1, 1, 1))
    out["sauer_shelah_linf_eps03_M1_n6_d2_log"] = f(ln(ss_linf(mpf("0.3"), 1, 6, 2)))
    out["menver_l2_eps2_M1_d1"] = f(menver(mpf(2), 1, 1))
    out["menver_l2_eps05_M1_d2_log"] = f(ln(menver(mpf("0.5"), 1, 2)))
    out["linf_basic_L01_cov16_m200_d005"] = f(t2("0.1", 16, 200, "0.05"))
    out["linf_final_L01_C3_m100_g05_M1_d005_dim2"] = f(t4_terms("0.1", 3, 100, "0.5", 1, "0.05", 2)["value"])
    out["l2_basic_L02_R005_g05_m50_d005"] = f(t5("0.2", mpf("0.05"), "0.5", 50, "0.05"))
    out["massart_pm1_pair"] = f(sqrt(2) / 2 * sqrt(2 * ln(2)))
    out["hyp1_F_C16_M1_g05"] = f(big_f(16, 1, mpf("0.5")))
    out["hyp1_d2_K1_M1_g05_C4_m16"] = f(t7_terms(2, 1, 4, 16, "0.5", 1)["value"])
    out["a6_N4_p1_d1_n2_M1_eps2"] = f(a6(mpf(2), 1, 1, 4, 2, 1))
    out["erf_1"] = f(erf_series(1))
    out["erf_grid"] = [[x / 4, f(erf_series(mpf(x) / 4, 400))] for x in range(-24, 25)]
    out["erfc_grid"] = [[x / 2, f(erfc(mpf(x) / 2))] for x in range(0, 21)]

    # Sweep-shape cells: t7 d=2 at (C, m) and (2C, 2m).
    cells = []
    for c, m in [(3, 100), (6, 200), (4, 16), (8, 32), (5, 1000), (10, 2000)]:
        cells.append({"C": c, "m": m, "K": 1, "M": 1, "gamma": 0.5,
                      "value": f(t7_terms(2, 1, c, m, "0.5", 1)["value"])})
    out["t7_d2_sweep_cells"] = cells
    # t4 complexity-term ratio at C and 4C (capacity part only scales as sqrt(C)).
    a = t4_terms(0, 3, 100, "0.5", 1, "0.05", 2)["capacity_only"]
    b = t4_terms(0, 12, 100, "0.5", 1, "0.05", 2)["capacity_only"]
    out["t4_capacity_ratio_C3_to_C12"] = f(b / a)

    with open(os.path.join(GOLDEN, "derived_values.json"), "w") as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")

    # Term breakdowns for each regime of the parametric closed form.
    cases = {
        "t7_d1.json": (1, 2.0, 16, 1000, "0.5", 1),
        "t7_d2.json": (2, 1.0, 4, 16, "0.5", 1),
        "t7_d3.json": (3, 1.5, 5, 500, "0.25", 2),
        "t7_d5.json": (5, 1.0, 3, 10000, "1", 1),
    }
    for name, (d, k, c, m, gamma, mg) in cases.items():
        terms = t7_terms(d, k, c, m, gamma, mg)
        doc = {"inputs": {"d": d, "K": k, "C": c, "m": m, "gamma": float(mpf(gamma)), "M": mg},
               "regime": terms.pop("regime"),
               "value": f(terms.pop("value")),
               "terms": {key: f(v) for key, v in terms.items()}}
        with open(os.path.join(GOLDEN, name), "w") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")


if __name__ == "__main__":
    main()
