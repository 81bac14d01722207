import numpy as np
import pytest

from fsrk import catalogue, catalogue_splitting, scheme, splitting


def worked_example_scheme():
    """Three-operator, three-stage scheme with a mixed sub-integrator grid.

    OS3_32 splitting; operator 1 gets FE/BE/Heun, operator 2 gets
    CrankNicolson/BE/FE, operator 3 gets BE/BE/FE over the three stages.
    Total internal stage count is 11.
    """
    grid = [
        [catalogue("FE"), catalogue("CrankNicolson"), catalogue("BE")],
        [catalogue("BE"), catalogue("BE"), catalogue("BE")],
        [catalogue("Heun"), catalogue("FE"), catalogue("FE")],
    ]
    return scheme(catalogue_splitting("OS3_32", 3), grid, name="worked-example")


def godunov_fe_fe():
    return scheme(catalogue_splitting("Godunov", 2),
                  [catalogue("FE"), catalogue("FE")])


def strang_heun_sdirk22():
    return scheme(catalogue_splitting("Strang", 2),
                  [catalogue("Heun"), catalogue("SDIRK22")])


def strang_heun_heun():
    return scheme(catalogue_splitting("Strang", 2),
                  [catalogue("Heun"), catalogue("Heun")])


def ruth_rk3_sdirk23():
    return scheme(catalogue_splitting("Ruth", 2),
                  [catalogue("RK3"), catalogue("SDIRK23")])


def ruth_sdirk23_rk3():
    """Operator assignment swapped relative to ruth_rk3_sdirk23."""
    return scheme(catalogue_splitting("Ruth", 2),
                  [catalogue("SDIRK23"), catalogue("RK3")])


def strang_sdirk_heun(gamma):
    """Diffusion-first Strang pairing: SDIRK(gamma) on operator 1, Heun on 2."""
    return scheme(catalogue_splitting("Strang", 2),
                  [catalogue("SDIRKgamma", gamma=gamma), catalogue("Heun")])


FIVE_SCHEMES = {
    "godunov_fe_fe": godunov_fe_fe,
    "strang_heun_sdirk22": strang_heun_sdirk22,
    "strang_heun_heun": strang_heun_heun,
    "ruth_rk3_sdirk23": ruth_rk3_sdirk23,
    "worked_example": worked_example_scheme,
}


@pytest.fixture(params=sorted(FIVE_SCHEMES), ids=sorted(FIVE_SCHEMES))
def reference_scheme(request):
    return FIVE_SCHEMES[request.param]()


def pole_avoiding_tuples(rfun, count, radius=5.0, seed=0):
    """Random complex z-tuples with every factor denominator well conditioned."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        z = radius * (rng.uniform(-1, 1, rfun.operators)
                      + 1j * rng.uniform(-1, 1, rfun.operators))
        ok = True
        for fac in rfun.factors:
            den = fac.rfun.den
            if len(den) > 1:
                arg = float(fac.scale) * z[fac.operator]
                val = sum(complex(c) * arg**k for k, c in enumerate(den))
                if abs(val) < 1e-3:
                    ok = False
                    break
        if ok:
            out.append(z)
    return out
