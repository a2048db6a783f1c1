#!/usr/bin/env python3
"""Regenerates golden.json and golden_flipped.json.

Each beam is a 2 x N matrix mapping the system quadrature vector
[psi+, psi-, s1+, s1-, s2+, s2-, m+, m-, d+, d-] to (X+, X-). Statistics come
from the joint mean vector and covariance matrix of that vector.
"""
import json
import math
import os

import numpy as np

N = 10
PSI, S1, S2, M, D = 0, 2, 4, 6, 8
MEANS = (4.0, 2.0)


def unit(k):
    f = np.zeros((2, N))
    f[0, k] = 1.0
    f[1, k + 1] = 1.0
    return f


def rot(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])


def bs(a, b, refl, phase):
    b = rot(phase) @ b
    rho, tau = math.sqrt(refl), math.sqrt(1.0 - refl)
    return rho * a + tau * b, tau * a - rho * b


def psa(f, g):
    return np.diag([math.sqrt(g), 1.0 / math.sqrt(g)]) @ f


class System:
    def __init__(self, r, v_m):
        var = [1.0, 1.0, math.exp(-2 * r), math.exp(2 * r), math.exp(-2 * r), math.exp(2 * r),
               v_m, v_m, 1.0, 1.0]
        self.cov = np.diag(var)
        self.mean = np.zeros(N)
        self.mean[PSI], self.mean[PSI + 1] = MEANS

    def shares(self):
        o1, o2 = bs(unit(S1), unit(S2), 0.5, math.pi / 2)
        e1 = rot(-math.pi / 4) @ o1
        e2 = rot(math.pi / 4) @ o2
        e1 = e1 + np.diag([1.0, 1.0]) @ unit(M)
        e2 = e2 + np.diag([-1.0, 1.0]) @ unit(M)
        a1, a2 = bs(unit(PSI), e1, 0.5, 0.0)
        return a1, a2, e2

    def stats(self, out):
        secret = unit(PSI)
        res = {}
        k_total = 0.0
        ratio = 1.0
        t = []
        vcv = []
        for q in (0, 1):
            vs = secret[q] @ self.cov @ secret[q]
            vo = out[q] @ self.cov @ out[q]
            c = secret[q] @ self.cov @ out[q]
            ms = secret[q] @ self.mean
            mo = out[q] @ self.mean
            t.append((mo * mo / vo) / (ms * ms / vs))
            vcv.append(max(vo - c * c / vs, 0.0))
            if mo == 0.0:
                k = ms * ms / (4 * vs + 4 * vo)
            else:
                k = ms * ms * (1 - ms / mo) ** 2 / (4 * vs + 4 * vo)
            k_total += k
            ratio *= vs / (vs + vo)
        res["t_q"] = t[0] + t[1]
        res["v_q"] = vcv[0] * vcv[1]
        res["fidelity"] = 2 * math.exp(-k_total) * math.sqrt(ratio)
        return res


def feedforward(sysm, g, eta):
    _, a2, a3 = sysm.shares()
    b, c = bs(a2, a3, 2.0 / 3.0, 0.0)
    current = math.sqrt(eta) * c[0] + math.sqrt(1.0 - eta) * unit(D)[0]
    out = b.copy()
    out[0] = b[0] + g / math.sqrt(eta) * current
    return out


def two_psa(sysm, g):
    _, a2, a3 = sysm.shares()
    x, y = bs(a2, a3, 0.5, math.pi)
    out, _ = bs(psa(x, g), psa(y, 1.0 / g), 0.5, 0.0)
    return out


def record(scheme, r, v_m, eta, gain, out, sysm):
    row = {"scheme": scheme, "r": r, "v_m": v_m, "eta": eta, "gain": gain}
    row.update(sysm.stats(out))
    return row


def main():
    rows = []
    for r in (0.0, 0.5, 1.0, 2.0):
        for v_m in (0.0, 100.0):
            for eta in (1.0, 0.9):
                for g in (0.0, 1.0, 2.0 * math.sqrt(2.0), 5.0):
                    s = System(r, v_m)
                    rows.append(record("feedforward", r, v_m, eta, g, feedforward(s, g, eta), s))
    g2 = (math.sqrt(2.0) + 1) ** 2
    for r in (0.0, 0.25, 0.5, 1.0, 2.0):
        s = System(r, 0.0)
        rows.append(record("psa2", r, 0.0, 1.0, g2, two_psa(s, g2), s))
    for r in (0.0, 0.7):
        for v_m in (0.0, 100.0):
            s = System(r, v_m)
            a1, a2, _ = s.shares()
            rows.append(record("single_player_1", r, v_m, 1.0, 0.0, a1, s))
            rows.append(record("single_player_2", r, v_m, 1.0, 0.0, a2, s))
            m12, _ = bs(a1, a2, 0.5, 0.0)
            rows.append(record("mz12", r, v_m, 1.0, 0.0, m12, s))

    here = os.path.dirname(os.path.abspath(__file__))
    with open(os.path.join(here, "golden.json"), "w") as f:
        json.dump(rows, f, indent=1)
        f.write("\n")
    # Same tuples with the modulation sign on share 3 flipped for one point.
    flipped = [dict(x) for x in rows]
    s = System(1.0, 100.0)
    _, a2, a3 = s.shares()
    a3[0] = a3[0] + 2.0 * unit(M)[0]
    b, c = bs(a2, a3, 2.0 / 3.0, 0.0)
    out = b.copy()
    out[0] = b[0] + 2.0 * math.sqrt(2.0) * c[0]
    for i, x in enumerate(flipped):
        if (x["scheme"], x["r"], x["v_m"], x["eta"], x["gain"]) == (
                "feedforward", 1.0, 100.0, 1.0, 2.0 * math.sqrt(2.0)):
            flipped[i] = record("feedforward", 1.0, 100.0, 1.0, 2.0 * math.sqrt(2.0), out, s)
    with open(os.path.join(here, "golden_flipped.json"), "w") as f:
        json.dump(flipped, f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
