"""Quick end-to-end check of the Python bindings.

Build and install first:  pip install --no-build-isolation -e crates/py
"""
import json
import math

import dampsym_py as ds


def main():
    p = ds.Params(m=1.0, gamma=0.2, omega=1.0, hbar=1.0)
    big = p.big_omega()
    assert abs(big - math.sqrt(1.0 - 0.01)) < 1e-15

    # [x, d/dx] = -1
    c = ds.WeylOp.x().commutator(ds.WeylOp.dx())
    assert c.deviation(ds.WeylOp.scalar(-1.0)) < 1e-15

    ops = dict(ds.ck_operators(p))
    xp = ops["X"].commutator(ops["P"])
    assert xp.deviation(ds.WeylOp.scalar(1j)) < 1e-12, str(xp)

    kappa, tau = ds.arnold_map(p, 1.0, 0.5)
    assert abs(kappa - 1.1343702350103329) < 1e-12
    assert abs(tau - 0.5175416343631757) < 1e-12

    g = ds.Gaussian(x0=1.0, p0=0.5, sigma=0.8)
    snaps = ds.evolve_gaussian(p, g, dt=1e-3, n_steps=200, n=1024, snapshot_every=50)
    last = snaps[-1]
    assert abs(last.norm_sq() - 1.0) < 1e-10
    x_exp = last.expectation(ops["X"])
    assert abs(x_exp - snaps[0].expectation(ops["X"])) < 1e-4

    free = ds.qat_forward(p, last)
    back = ds.qat_inverse(p, free)
    err = max(abs(a - b) for a, b in zip(back.psi(), last.psi()))
    assert err < 1e-12, err

    grp = ds.BatemanGroup(p)
    a = (0.3, 0.1, -0.2, 0.4, 0.5, 0.0)
    ident = grp.compose(grp.inverse(a), a)
    assert max(abs(v) for v in ident) < 1e-12, ident

    e2 = ds.spectrum_level(p, 2, 0.5)
    assert abs(e2 - (2 * big + 0.5 * 0.2)) < 1e-14
    assert ds.monodromy(p, e2, 0.5)["single_valued"]
    assert not ds.monodromy(p, e2 + 0.1, 0.5)["single_valued"]

    dp = ds.verify_dp(ds.Params(gamma=0.2, omega=0.0), 6)
    assert all(e["pass"] for e in dp["entries"])

    cfg = json.loads(ds.default_config("verify dp"))
    cfg["output_dir"] = "/tmp/dampsym_smoke"
    cfg["params"]["omega"] = 0.0
    out = ds.run_config(json.dumps(cfg))
    assert out["passed"]

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
