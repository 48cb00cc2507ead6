"""Space-time error across the admissible exponent family.

Quick-trains a soliton network, then sweeps the error functional over
the q grid (each q fixes p through 2/p + 1/q = 1/2).  The q = 2 endpoint
is the sup-in-time H1 value; large q approaches a sup-in-space value, so
concentrated error fields make the curve rise there.
"""

import numpy as np

from nlspinn import q_error_curve, train
from nlspinn.config import default_config
from nlspinn.harness import architecture_from_config
from nlspinn.network import NetworkParams


def main():
    cfg = default_config("soliton", max_iters=800, milestones=(800,))
    print("training a soliton network (800 iterations)...")
    report = train(cfg, seed=0)
    params = NetworkParams.unflatten(architecture_from_config(cfg), report.final_parameters)

    curve = q_error_curve(params, cfg.reference(), cfg)
    print(f"\n{'q':>7s} {'p':>9s} {'error':>12s}")
    shown = {2.0, 3.0, 4.0, 6.0, 10.0, 20.0, 50.0, 100.0}
    for q, p, err in curve:
        if q in shown:
            p_text = "inf" if not np.isfinite(p) else f"{p:9.3f}"
            print(f"{q:7.1f} {p_text:>9s} {err:12.4e}")
    errors = [err for _, _, err in curve]
    qs = [q for q, _, _ in curve]
    print(f"\nmax over the grid: {max(errors):.4e} at q = {qs[int(np.argmax(errors))]:.1f}")
    print(f"sup-in-time H1 error: {report.final_errors['error_LinfH1']:.4e}")
    print(f"error_Sprime (max incl. endpoint): {report.final_errors['error_Sprime']:.4e}")


if __name__ == "__main__":
    main()
