"""High-precision reference values for the special-function tests."""
from mpmath import mp, mpc, mpf, gamma, digamma, rf, laguerre, exp, log, pi

mp.dps = 50


def show(label, v):
    v = mpc(v)
    print(f"{label}: {mp.nstr(v.real, 17)} {mp.nstr(v.imag, 17)}")


for z in [mpc(0.5, 2.4), mpc(-3.7, 0.2), mpc(12.3, -7.1), mpc(60, 30)]:
    show(f"gamma{z}", gamma(z))
show("digamma(-2.3+1.7i)", digamma(mpc(-2.3, 1.7)))
show("poch(-1.5+i,4)", rf(mpc(-1.5, 1), 4))
show("L3^(1+0.5i)(2-i)", laguerre(3, mpc(1, 0.5), mpc(2, -1)))
z = mpc(0.5, 1)
show("H3(0.5+i)", sum(1 / (z + j) for j in range(3)))
show("pow(-2,0.5+i)", exp(mpc(0.5, 1) * (log(2) + 1j * pi)))
