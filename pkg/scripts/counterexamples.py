"""Smallest instances where the order filtration misbehaves, printed with their values.

Run: python3 scripts/counterexamples.py
"""

from toroidal_yangian.cartan import build_cartan
from toroidal_yangian.degeneration import alt_sample, f_order, omega, verify_pi_relations
from toroidal_yangian.qtor import alt_sum_quantum
from toroidal_yangian.toroidal import kappa_order

D = 4


def main():
    a1 = build_cartan("A1")
    x1 = alt_sum_quantum("X+", 1, 0, 1, D, a1)
    print("f_order(X^(1))          =", int(f_order(x1, a1)))
    print("f_order(X^(1) X^(1))    =", int(f_order(x1 * x1, a1)), "(a multiplicative order would give 2)")

    e1 = alt_sample("e", 1, 0, 1)
    om = omega(e1, e1, 1, a1)
    print("Omega_1(e^(0,1), e^(0,1)) =", om, " kappa_order", kappa_order(om, a1), "(bound asks for 1)")

    for m in range(5):
        print(f"f_order(H^({m})_1,0)      =", int(f_order(alt_sum_quantum("H", 1, 0, m, D, a1), a1)))

    for scale, tag in ((1, "unscaled"), (None, "matched")):
        kw = {} if scale is None else {"level_scale": scale}
        rep = verify_pi_relations(a1, ("Y4", "Y5"), level_cap=2, **kw)
        print(f"Pi on Y4/Y5 ({tag}): pass={rep.count('pass')} fail={rep.count('fail')}")
        for e in rep.failures()[:3]:
            print("   ", e.instance, "f_order", e.f_order, "expected", e.expected)


if __name__ == "__main__":
    main()
