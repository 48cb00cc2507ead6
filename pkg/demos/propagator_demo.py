"""Free Schrödinger evolution through the discrete spectral propagator.

Checks the Gaussian closed form, shows L2 conservation of an evolved
soliton mismatch, and prints the trigonometric-interpolation error of
the t = 0 identity.
"""

import numpy as np

from nlspinn import analyze, evolve_at
from nlspinn.propagator import uniform_grid
from nlspinn.solutions import make_soliton


def main():
    # Gaussian: exp(-x^2) evolves to (1+4it)^(-1/2) exp(-x^2/(1+4it))
    xk = uniform_grid(20.0, 256)
    field = analyze(xk, np.exp(-(xk**2)).astype(complex))
    xs = np.linspace(-5, 5, 201)
    for t in (0.1, 0.5, 1.0):
        numeric = evolve_at(field, t, xs)
        exact = np.exp(-(xs**2) / (1 + 4j * t)) / np.sqrt(1 + 4j * t)
        print(f"gaussian t={t:4.1f}: max deviation from closed form "
              f"{np.max(np.abs(numeric - exact)):.2e}")

    # soliton initial data on the training box, evolved linearly
    ref = make_soliton(1.0, 1.0)
    xk = uniform_grid(8.0, 100)
    u0, _ = ref.evaluate(np.zeros_like(xk), xk)
    field = analyze(xk, u0)
    identity = np.max(np.abs(evolve_at(field, 0.0, xk) - u0))
    print(f"\nsoliton t=0 grid identity: {identity:.2e}")
    mass0 = np.sum(np.abs(u0) ** 2)
    print("discrete L2 mass of e^{it d_xx} u0 over grid points:")
    for t in (-2.0, -0.5, 0.5, 2.0):
        evolved = evolve_at(field, t, xk)
        print(f"  t={t:5.1f}: relative change {abs(np.sum(np.abs(evolved)**2) - mass0) / mass0:.2e}")

    # free dispersion flattens the localized profile
    for t in (0.0, 1.0, 2.0):
        peak = np.max(np.abs(evolve_at(field, t, xk)))
        print(f"  peak |v(t)| at t={t:3.1f}: {peak:.4f}")


if __name__ == "__main__":
    main()
