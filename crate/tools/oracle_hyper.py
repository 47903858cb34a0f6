"""High-precision reference values for the confluent hypergeometric tests."""
from mpmath import mp, mpc, hyp1f1, hyperu, rgamma, nstr

mp.dps = 50


def show(label, v):
    v = mpc(v)
    print(f"{label}: {nstr(v.real, 17)} {nstr(v.imag, 17)}")


show("1F1(0.5;1.5;1)", hyp1f1(0.5, 1.5, 1))
show("1F1(-2.3+0.4i;0.7-0.2i;-12+5i)", hyp1f1(mpc(-2.3, 0.4), mpc(0.7, -0.2), mpc(-12, 5)))
show("1F1reg(0.5-i;2.3;1+2i)", hyp1f1(mpc(0.5, -1), 2.3, mpc(1, 2)) * rgamma(2.3))
show("U(0.7,0.4,20)", hyperu(0.7, 0.4, 20))
show("U(1,1,1)", hyperu(1, 1, 1))
show("U(0.5,1.5,2)", hyperu(0.5, 1.5, 2))
show("U(0.3+0.4i,1.8-0.2i,55+10i)", hyperu(mpc(0.3, 0.4), mpc(1.8, -0.2), mpc(55, 10)))
show("U(0.3,1.7,35)", hyperu(0.3, 1.7, 35))
