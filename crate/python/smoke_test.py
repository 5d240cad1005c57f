"""Smoke test for the pricebench extension module.

Build and run from the repository root:

    cargo build -p pricebench-python --release --features extension-module
    cp target/release/libpricebench.so python/pricebench.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pricebench as pb  # noqa: E402


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(1.0, abs(b))


def main():
    shape = pb.sphere_shape("C", 3, 1.0)
    assert close(shape["lambda1"], 2.0 / math.tanh(2.0))
    assert close(shape["lambda2"], 1.0 / math.tanh(1.0))
    assert close(pb.ball_volume("R", 3, 1.0), math.pi * (math.sinh(2.0) - 2.0))

    assert pb.ball_decay_rate("C", 3, 1) == ("4", 4.0)
    factor, const = pb.cusp_decay("real", 5, 1, 1.0)
    assert close(factor, 2.0 * math.exp(-2.0)) and const == 2.0

    assert pb.congruence_exponent("SU", 2, 1, "compact") == "3/4"
    assert pb.congruence_exponent("SU", 2, 1, "cusped") == "1/2"
    rows = pb.congruence_table(4)
    assert all(r["formulaId"].startswith("congruence-") for r in rows)

    report = pb.bound("C", 3, 1, 100.0, 2.0, 1.5)
    assert report["formulaId"].startswith("compact-")

    lat = pb.Lattice([[2, 0], [1, 3]])
    sm = lat.successive_minima()
    assert sm["minima_sq"] == ["4", "10"] and sm["delta_sq"] == "1/9"
    assert sm["transference"]
    assert lat.dual().dual().to_text() == lat.to_text()
    assert pb.Lattice([[1, 0], [0, 1]]).count_points(1.5) == 9
    count, bound, ok = pb.Lattice([[1, 0], [0, 1]]).nbound(0, 0.3)
    assert ok and count <= bound
    try:
        pb.Lattice([[1, 2], [2, 4]])
    except ValueError:
        pass
    else:
        raise AssertionError("singular basis accepted")

    mc = pb.matrix_coefficient("SO", 5, 1)
    assert mc["passed"] and len(mc["t"]) == len(mc["states"])

    mode = pb.cusp_mode(5, 1, [1, 0, 0, 0])
    assert max(mode["balance_residuals"]) < 1e-6
    assert min(mode["price_margins"]) >= -1e-8

    rep = pb.verify(["exponents", "bookkeeping"], seed=3)
    assert rep["pass"], rep

    status, out = pb.run_config('command = "report"\n[params]\nn-max = 3\ngroup = "SU"\nsetting = "compact"\n')
    assert status == 0 and "3/4" in out

    print("pricebench smoke test: OK")


if __name__ == "__main__":
    main()
