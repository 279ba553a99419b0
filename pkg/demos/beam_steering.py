"""Steer a transmitted beam with a constant tangential phase gradient.

Sweeps the incidence angle on a flat glass-to-air interface twice: once with
no phase pattern (classical refraction) and once with a linear pattern whose
gradient shifts the transmitted angle and moves the critical angle.
"""

import numpy as np

from metasnell import Medium, TotalInternalReflection, make_phase, make_surface, refract


def sweep(phase, label, m1, m2, omega):
    print(f"\n{label}")
    print(f"{'theta1 (deg)':>13} {'sin(theta2)':>12} {'theta2 (deg)':>13}")
    s = make_surface("flat")
    for deg in np.linspace(-75, 75, 11):
        th = np.deg2rad(deg)
        k = np.array([np.sin(th), 0.0, np.cos(th)])
        try:
            res = refract(k, np.zeros(2), s, phase, m1, m2, omega)
        except TotalInternalReflection:
            print(f"{deg:13.1f} {'-':>12} {'total internal reflection':>25}")
            continue
        s2 = res.k_out[0]
        print(f"{deg:13.1f} {s2:12.6f} {np.rad2deg(np.arcsin(s2)):13.2f}")


def main():
    m1, m2 = Medium(2.25, 1.0), Medium(1.0, 1.0)
    omega = 1.0  # with c = 1 the pattern gradient enters the law unscaled
    g = 0.3
    print(f"glass (n={m1.n}) below, air (n={m2.n}) above")
    print(f"classical critical angle: {np.rad2deg(np.arcsin(m2.n / m1.n)):.2f} deg")
    lo = np.rad2deg(np.arcsin((g - m2.n) / m1.n))
    hi = np.rad2deg(np.arcsin((g + m2.n) / m1.n))
    print(f"with gradient g={g}: transmission window {lo:.2f} .. {hi:.2f} deg")

    sweep(None, "no phase pattern", m1, m2, omega)
    sweep(make_phase("linear", {"a": (g, 0.0, 0.0)}),
          f"linear pattern, tangential gradient {g}", m1, m2, omega)


if __name__ == "__main__":
    main()
