"""Reference values for the Whittaker-function tests (mpmath, 50 digits).

I = whitm / Gamma(1+2m), K = whitw; J and H are the rotated forms, evaluated
with explicit angles so that no principal-branch reduction intervenes.
"""
from mpmath import mp, mpc, mpf, whitm, whitw, rgamma, exp, pi, sqrt, besselj, bessely

mp.dps = 50
j = mpc(0, 1)


def I(b, m, z):
    return whitm(b, m, z) * rgamma(1 + 2 * m)


def K(b, m, z):
    return whitw(b, m, z)


def J(b, m, z):
    return exp(-j * pi * (0.5 + m) / 2) * I(-j * b, m, j * z)


def H(s, b, m, z):
    return exp(-s * j * pi * (0.5 + m) / 2) * K(s * j * b, m, -s * j * z)


def show(name, v):
    v = mpc(v)
    print(f"{name}: c({mp.nstr(v.real, 17)}, {mp.nstr(v.imag, 17)})")


C = lambda a, b=0: mpc(a, b)
show("I1", I(C(0.3, 0.2), C(0.7, -0.1), C(2.5, 1.0)))
show("I2", I(C(1.2, -0.5), C(0.35, 0.4), C(25, 30)))
show("I3", I(C(-0.8), C(1.3), C(-15, 8)))
show("I4", I(C(0.4), C(0.2, 1.0), C(60, -5)))
show("I5", I(C(0.9, 0.1), C(-0.3, 0.2), C(3, -34)))
show("K1", K(C(0.3, 0.2), C(0.7, -0.1), C(2.5, 1.0)))
show("K2", K(C(0.5), C(0.25), C(0.01)))
show("K3", K(C(1.5, 1.0), C(2.2, -0.3), C(18, -12)))
show("K4", K(C(-2.1), C(0.45), C(-20, 0.5)))
show("K5", K(C(0.3), C(1.0), C(3.7)))
show("K6", K(C(0.7, 0.3), C(0), C(0.2, -5)))
show("K7", K(C(0.2), C(1.5), C(8, 9)))
show("K8", K(C(0.6), C(0.8), C(55)))
show("K9", K(C(0.3), C(0), C(1.5)))
show("K10", K(C(-1.3, 0.4), C(-0.6, 0.1), C(30, 2)))
show("K11", K(C(2.5, -1.0), C(0.1, 1.5), C(-7, -9)))
show("J1", J(C(0.7, -0.2), C(0.4, 0.3), C(12, 3)))
show("J2", J(C(1), C(0.3), C(50)))
show("Hp1", H(1, C(0.5, 0.2), C(0.6), C(9, -4)))
show("Hm1", H(-1, C(0.5, 0.2), C(0.6), C(9, -4)))
b, m, x = C(2), C(0.3, 0.1), mpf(1.3)
w = 2 * sqrt(b * x)
show("jzero", x ** 0.25 * sqrt(pi * w / 2) * besselj(2 * m, w))
show("yzero", x ** 0.25 * sqrt(pi * w / 2) * bessely(2 * m, w))
