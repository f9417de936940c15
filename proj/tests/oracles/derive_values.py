"""Independent high-precision oracles for the frozen constants in the C++ tests.

Run: python3 tests/oracles/derive_values.py
"""
import mpmath as mp
import sympy as sp

mp.mp.dps = 40


def bisect(g, a, b, tol=mp.mpf("1e-35")):
    ga = g(a)
    while b - a > tol:
        c = (a + b) / 2
        gc = g(c)
        if (gc > 0) == (ga > 0):
            a, ga = c, gc
        else:
            b = c
    return (a + b) / 2


def warped_scalar_curvature():
    # Scalar curvature of -ds^2 + r(s)^2 * (round metric on S^{k}) computed
    # symbolically from Christoffel symbols, for k = 2, 3.
    s = sp.symbols("s")
    r = sp.Function("r")(s)
    out = {}
    for k in (2, 3):
        th = sp.symbols(f"th1:{k + 1}")
        coords = (s,) + th
        dim = k + 1
        g = sp.zeros(dim)
        g[0, 0] = -1
        w = r**2
        for i in range(k):
            g[i + 1, i + 1] = w
            w = w * sp.sin(th[i]) ** 2
        ginv = g.inv()
        Gam = [[[sp.simplify(sum(ginv[a, d] * (sp.diff(g[d, b], coords[c]) + sp.diff(g[d, c], coords[b])
                                               - sp.diff(g[b, c], coords[d])) for d in range(dim)) / 2)
                 for c in range(dim)] for b in range(dim)] for a in range(dim)]
        Ric = sp.zeros(dim)
        for b in range(dim):
            for c in range(dim):
                expr = 0
                for a in range(dim):
                    expr += sp.diff(Gam[a][b][c], coords[a]) - sp.diff(Gam[a][b][a], coords[c])
                    for d in range(dim):
                        expr += Gam[a][a][d] * Gam[d][b][c] - Gam[a][c][d] * Gam[d][b][a]
                Ric[b, c] = expr
        R = sp.simplify(sum(ginv[b, c] * Ric[b, c] for b in range(dim) for c in range(dim)))
        n = k + 1
        rd, rdd = sp.diff(r, s), sp.diff(r, s, 2)
        claim = 2 * (n - 1) * rdd / r + (n - 1) * (n - 2) * (1 + rd**2) / r**2
        out[n] = sp.simplify(R - claim)
    return out


def main():
    print("warped-product formula minus symbolic R (n=3,4):", warped_scalar_curvature())

    # Reissner-Nordstrom m=1 q=0.5: photon sphere and critical impact parameter
    f_rn = lambda r: 1 - 2 / r + mp.mpf("0.25") / r**2
    rstar = bisect(lambda r: 2 * r**2 - 6 * r + 1, mp.mpf(2), mp.mpf(4))
    print("RN r* =", rstar, " closed form", (3 + mp.sqrt(7)) / 2)
    print("RN b* =", rstar / mp.sqrt(f_rn(rstar)))
    print("RN outer horizon =", 1 + mp.sqrt(1 - mp.mpf("0.25")))

    # Schwarzschild n=3 m=1 turning points for alpha = 0.15
    a2 = mp.mpf("0.15") ** 2
    q = lambda r: a2 * r**2 - 1 + 2 / r
    print("turning low  =", bisect(q, mp.mpf("2.0000001"), mp.mpf(3)))
    print("turning high =", bisect(q, mp.mpf(3), mp.mpf(10)))
    a2 = mp.mpf("0.25") ** 2
    print("alpha=0.25 min of q on (2,50):", min(a2 * r**2 - 1 + 2 / r for r in mp.linspace(2, 50, 20001)))

    # isotropic Schwarzschild n=3 m=1
    siso = lambda r: bisect(lambda s: s * (1 + 1 / (2 * s)) ** 2 - r, mp.mpf("0.5"), mp.mpf(100))
    print("s(r=4) =", siso(4), " closed", (3 + 2 * mp.sqrt(2)) / 2)
    print("S* =", siso(3), " closed", 1 + mp.sqrt(3) / 2)

    # critical impact parameters
    print("b* n=3 =", 3 / mp.sqrt(mp.mpf(1) / 3), " b* n=4 =", 2 / mp.sqrt(mp.mpf("0.5")))
    print("alpha* n=3 =", 1 / mp.sqrt(27))

    # isotropic photon-sphere residual at S=3 (not the sphere), n=3 m=1
    S = mp.mpf(3)
    phi = lambda s: 1 + 1 / (2 * s)
    psi = lambda s: phi(s) ** 2
    lapse = lambda s: (1 - 1 / (2 * s)) / (1 + 1 / (2 * s))
    res = 1 + (mp.diff(psi, S) / psi(S) - mp.diff(lapse, S) / lapse(S)) * S
    print("isotropic sphere residual at S=3:", res)


if __name__ == "__main__":
    main()
