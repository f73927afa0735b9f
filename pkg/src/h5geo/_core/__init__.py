"""Backend selection for the scalar kernels.

The Cython build (``_kernels_cy``) is preferred; the pure-Python module is the
fallback and the reference implementation.  Set ``H5GEO_PURE_PY=1`` to force
the fallback (used by the backend-equivalence tests and the benchmark).
"""

import os

from . import _kernels_py

if os.environ.get("H5GEO_PURE_PY"):
    backend = _kernels_py
else:
    try:
        from . import _kernels_cy as backend  # type: ignore[no-redef]
    except ImportError:
        backend = _kernels_py

BACKEND_NAME = "cython" if backend.__name__.endswith("_cy") else "python"

carlson_rf = backend.carlson_rf
carlson_rd = backend.carlson_rd
complete_k = backend.complete_k
am_sncndn = backend.am_sncndn
am_sncndn_degenerate = backend.am_sncndn_degenerate
ellint_f_core = backend.ellint_f_core
ellint_e_core = backend.ellint_e_core
full_hamiltonian = backend.full_hamiltonian
full_rhs = backend.full_rhs
wsys_rhs = backend.wsys_rhs
hyper_rhs = backend.hyper_rhs
