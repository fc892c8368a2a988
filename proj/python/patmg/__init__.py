"""Photoacoustic tomography reconstruction: k-space wave models and TV-regularized solvers."""

import os


def _load():
    try:
        from . import _patmg  # installed layout
        return _patmg
    except ImportError:
        pass
    # build-tree layout: extension lives next to the C++ build artifacts
    mod_dir = os.environ.get("PATMG_MODULE_DIR")
    if mod_dir:
        import importlib.util
        import glob

        hits = glob.glob(os.path.join(mod_dir, "_patmg*.so"))
        if hits:
            spec = importlib.util.spec_from_file_location("patmg._patmg", hits[0])
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    import _patmg  # last resort: plain sys.path

    return _patmg


_impl = _load()

Grid = _impl.Grid
Medium = _impl.Medium
SensorArray = _impl.SensorArray
ForwardOperator = _impl.ForwardOperator
DivergenceError = _impl.DivergenceError

uniform_medium = _impl.uniform_medium
medium_from_maps = _impl.medium_from_maps
alpha0_to_si = _impl.alpha0_to_si
absorption_np_per_m = _impl.absorption_np_per_m
make_arc_sensors = _impl.make_arc_sensors
estimate_lipschitz = _impl.estimate_lipschitz
prox_tv = _impl.prox_tv
tv_value = _impl.tv_value
smooth_source = _impl.smooth_source
prolong = _impl.prolong
restrict = _impl.restrict
restrict_data = _impl.restrict_data
coarsen_grid = _impl.coarsen_grid
coarsen_medium = _impl.coarsen_medium
solve = _impl.solve
relative_error_percent = _impl.relative_error_percent
read_field = _impl.read_field
write_field = _impl.write_field

__all__ = [
    "Grid", "Medium", "SensorArray", "ForwardOperator", "DivergenceError",
    "uniform_medium", "medium_from_maps", "alpha0_to_si", "absorption_np_per_m",
    "make_arc_sensors", "estimate_lipschitz", "prox_tv", "tv_value", "smooth_source",
    "prolong", "restrict", "restrict_data", "coarsen_grid", "coarsen_medium",
    "solve", "relative_error_percent", "read_field", "write_field",
]
