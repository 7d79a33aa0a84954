from ._core import *  # noqa: F401,F403

from ._core import (  # noqa: F401
    make_grid,
    sample,
    inner_product,
    l2_norm,
    transform,
    inverse_transform,
    sobolev_norm,
    apply_multiplier,
    partition_floor,
    apply_op,
    apply_ek,
    energy_defect,
    form_value,
    fit_power_law,
)
