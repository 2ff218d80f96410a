"""Pick the kernel implementation at import time.

The compiled extension is used when it was built; otherwise, or when
``LINETRANSIENT_PURE_PYTHON`` is set to a non-empty value other than ``0``,
the pure-Python kernels are used.
"""

import os

from . import _purepy

_force_pure = os.environ.get("LINETRANSIENT_PURE_PYTHON", "") not in ("", "0")

_compiled = None
if not _force_pure:
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

if _compiled is not None:
    BACKEND = "compiled"
    rk4_sine_lti2 = _compiled.rk4_sine_lti2
    fft_radix2 = _compiled.fft_radix2
else:
    BACKEND = "python"
    rk4_sine_lti2 = _purepy.rk4_sine_lti2
    fft_radix2 = _purepy.fft_radix2


def compiled_module():
    """Return the compiled kernel module, or None if it is unavailable."""
    if _compiled is not None:
        return _compiled
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels
