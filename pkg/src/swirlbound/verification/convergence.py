"""Grid-refinement studies for the discrete operators."""
from dataclasses import dataclass, field

import numpy as np
import sympy as sp

from ..cylops import (AxisymVectorField, curl_axisym, divergence_axisym,
                      gradient_axisym, laplacian_axisym)
from ..grid import make_grid

r, z = sp.symbols("r z", positive=True)

# smooth test data: a scalar and a swirling vector field
_F = sp.sin(r) * sp.cos(z) + r ** 2 * sp.exp(-z ** 2 / 4)
_V = (sp.sin(r) * sp.cos(z), r ** 2 * sp.sin(z) / 3, sp.exp(-r / 2) * sp.cos(2 * z))


def _exact():
    f = _F
    lap = sp.diff(f, r, 2) + sp.diff(f, r) / r + sp.diff(f, z, 2)
    v_r, v_t, v_z = _V
    div = sp.diff(r * v_r, r) / r + sp.diff(v_z, z)
    curl = (-sp.diff(v_t, z), sp.diff(v_r, z) - sp.diff(v_z, r), sp.diff(v_t, r) + v_t / r)
    fn = lambda e: sp.lambdify((r, z), e, "numpy")
    return {"f": fn(f), "lap": fn(lap), "grad": (fn(sp.diff(f, r)), fn(sp.diff(f, z))),
            "v": tuple(fn(c) for c in _V), "div": fn(div), "curl": tuple(fn(c) for c in curl)}


@dataclass
class OperatorConvergence:
    n: list
    errors: dict = field(default_factory=dict)

    @property
    def ratios(self):
        return {k: [e[i] / e[i + 1] for i in range(len(e) - 1)] for k, e in self.errors.items()}


def _err(num, exact):
    d = np.abs(num - exact)
    return float(np.nanmax(d))


def operator_convergence(levels=(65, 129, 257), r_span=(1.0, 4.0), z_span=(-2.0, 2.0)):
    """Interior max errors of each operator on ``n x n`` grids."""
    ex = _exact()
    out = OperatorConvergence(list(levels), {k: [] for k in ("laplacian", "gradient",
                                                             "divergence", "curl")})
    for n in levels:
        g = make_grid(*r_span, *z_span, n, n)
        f = g.evaluate(ex["f"])
        out.errors["laplacian"].append(_err(laplacian_axisym(g, f), g.evaluate(ex["lap"])))
        gr, gz = gradient_axisym(g, f)
        out.errors["gradient"].append(max(_err(gr, g.evaluate(ex["grad"][0])),
                                          _err(gz, g.evaluate(ex["grad"][1]))))
        v = AxisymVectorField(g, *(g.evaluate(c) for c in ex["v"]))
        out.errors["divergence"].append(_err(divergence_axisym(v), g.evaluate(ex["div"])))
        w = curl_axisym(v)
        out.errors["curl"].append(max(_err(a, g.evaluate(c)) for a, c in
                                      zip((w.omega_r, w.omega_theta, w.omega_z), ex["curl"])))
    return out
