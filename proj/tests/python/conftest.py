import pathlib
import sys


def _ensure_module():
    try:
        import heislab  # noqa: F401

        return
    except ImportError:
        pass
    # Fall back to the CMake-built extension when the package is not
    # installed: alias the raw module under the package name.
    root = pathlib.Path(__file__).resolve().parents[2]
    candidates = [root / "build"] + sorted(root.glob("build*"))
    for cand in candidates:
        if cand.is_dir() and list(cand.glob("_core.*")):
            sys.path.insert(0, str(cand))
            break
    try:
        import _core

        sys.modules["heislab"] = _core
    except ImportError:
        pass


_ensure_module()
