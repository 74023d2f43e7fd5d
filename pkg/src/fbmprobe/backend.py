"""Kernel backend selection.

The compiled extension ``_ckern`` is preferred when it was built; the
numpy twin ``_pykern`` is the fallback.  Selection happens once at
import.  FBMPROBE_BACKEND overrides:

* ``auto``   (default) compiled if available, else pure Python
* ``c``      require the compiled extension, fail loudly if missing
* ``python`` force the pure-Python twin
"""

import os

_choice = os.environ.get("FBMPROBE_BACKEND", "auto").lower()
if _choice not in {"auto", "c", "python"}:
    raise RuntimeError(
        f"FBMPROBE_BACKEND must be one of auto|c|python, got {_choice!r}"
    )

if _choice == "python":
    from . import _pykern as kern

    BACKEND = "python"
else:
    try:
        from . import _ckern as kern  # type: ignore[no-redef]

        BACKEND = "c"
    except ImportError:
        if _choice == "c":
            raise
        from . import _pykern as kern  # type: ignore[no-redef]

        BACKEND = "python"


def which_backend() -> str:
    """Name of the kernel backend selected at import: 'c' or 'python'."""
    return BACKEND
