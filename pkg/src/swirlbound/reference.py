"""The pure-swirl reference runs used by the acceptance checks and demos.

``Gamma_0 = sin(pi z) (r - 1)(4 - r)`` on ``1 <= r <= 4`` with no meridional
flow, periodic in z with period 8.  Two domains are used:

* ``annulus``: exactly ``[1, 4] x [-4, 4)``; the swirl decays quickly because
  ``Gamma`` is held at zero on both walls.
* ``extended``: ``[0.2, 4.4] x [-4, 4)`` with ``Gamma_0`` extended by zero.
  It contains ``P_{1,4,R}`` and ``P_{2,3,R}`` for every ``R <= 1`` (plus a
  margin) and enough of ``C_{1/10,10,R}`` for the clipped wide-region norms.
"""
from .evolution import EvolutionConfig
from .grid import make_grid
from .io import field_function, parse_field

OUTPUT_INTERVAL = 1 / 128
CFL_SAFETY = 1.0


# the same text appears in configs/*.ini, so CLI runs match these bit for bit
GAMMA0 = "Piecewise((sin(pi*z)*(r - 1)*(4 - r), (r >= 1) & (r <= 4)), (0, True))"
gamma0 = field_function(parse_field(GAMMA0))


def annulus_grid(n_r=129, n_z=None):
    return make_grid(1.0, 4.0, -4.0, 4.0, n_r, 2 * (n_r - 1) if n_z is None else n_z, True)


def extended_grid(n_r=129, n_z=None):
    return make_grid(0.2, 4.4, -4.0, 4.0, n_r, 2 * (n_r - 1) if n_z is None else n_z, True)


def annulus_config(n_r=129, t_end=0.5, advection="centered", cfl_safety=CFL_SAFETY):
    return EvolutionConfig(annulus_grid(n_r), gamma0, t_end, cfl_safety=cfl_safety,
                           advection=advection, output_interval=OUTPUT_INTERVAL)


def extended_config(n_r=129, t_end=1.0, advection="centered", cfl_safety=CFL_SAFETY):
    return EvolutionConfig(extended_grid(n_r), gamma0, t_end, cfl_safety=cfl_safety,
                           advection=advection, output_interval=OUTPUT_INTERVAL)
