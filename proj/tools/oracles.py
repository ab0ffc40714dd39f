"""Reference values frozen in the unit and acceptance tests, recomputed with mpmath.

m is read off the L2 solution psi as m = -psi(0) / psi^[1](0), psi^[1] = psi' / r.
"""
import mpmath as mp

mp.mp.dps = 40


def m_r2x(lam):
    # w = 1, r = 2x: in t = x^2 the equation is y_tt + lam / (2 sqrt t) y = 0,
    # solved by sqrt(t) H1_{2/3}((4/3) sqrt(lam/2) t^(3/4)); psi^[1] = dy/dt.
    k = mp.sqrt(lam / 2)
    y = lambda t: mp.sqrt(t) * mp.hankel1(mp.mpf(2) / 3, mp.mpf(4) / 3 * k * t ** (mp.mpf(3) / 4))
    t0 = mp.mpf("1e-30")
    return -y(t0) / mp.diff(y, t0)


def m_inverse_one_plus_x(lam):
    # w = 1/(1+x), r = 1: psi = sqrt(1+x) H1_1(2 sqrt(lam (1+x))).
    z = 2 * mp.sqrt(lam)
    return -2 * mp.hankel1(1, z) / (z * mp.hankel1(0, z))


def kasahara(nu):
    return nu ** (1 - nu) * mp.gamma(nu) / ((1 - nu) ** nu * mp.gamma(1 - nu))


if __name__ == "__main__":
    print("m(i), w=1, r=2x:", m_r2x(mp.mpc(0, 1)))
    print("m(2i), w=1, r=2x:", m_r2x(mp.mpc(0, 2)))
    for y in ("1e-2", "1e-6"):
        m = m_inverse_one_plus_x(mp.mpc(0, mp.mpf(y)))
        print(f"m({y} i), w=1/(1+x):", m, " Im/Re =", m.imag / m.real)
    print("K_1/3 =", kasahara(mp.mpf(1) / 3), " K_2/3 =", kasahara(mp.mpf(2) / 3))
