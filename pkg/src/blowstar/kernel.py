"""Kernel backend selection.

Imports the compiled reduction kernel when available, otherwise the pure
Python twin.  Set ``BLOWSTAR_KERNEL=pure`` or ``=compiled`` to force a
backend (``compiled`` raises if the extension is missing); the default
``auto`` prefers the compiled one.
"""

import os

_choice = os.environ.get("BLOWSTAR_KERNEL", "auto")

if _choice == "pure":
    from . import _kernel_py as _impl
elif _choice == "compiled":
    from . import _kernel_c as _impl  # type: ignore[attr-defined]
elif _choice == "auto":
    try:
        from . import _kernel_c as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernel_py as _impl
else:
    raise RuntimeError(f"BLOWSTAR_KERNEL must be auto|pure|compiled, got {_choice!r}")

BACKEND = _impl.BACKEND

mono_mul = _impl.mono_mul
mono_divides = _impl.mono_divides
mono_div = _impl.mono_div
mono_lcm = _impl.mono_lcm
mono_deg = _impl.mono_deg
order_key = _impl.order_key
make_entry = _impl.make_entry
spoly = _impl.spoly
normal_form = _impl.normal_form
